//! Formal sums of graphs and the derivations `∂_z`, `∂_x`, `∂_y`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Canonical, DecoratedGraph, GraphJson};
use crate::rational::{format_q, parse_q, Q};

/// Rational combination of canonical graphs; zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalSum<G: Canonical> {
    terms: BTreeMap<G, Q>,
}

impl<G: Canonical> FormalSum<G> {
    pub fn zero() -> Self {
        FormalSum { terms: BTreeMap::new() }
    }

    pub fn single(g: G) -> Self {
        Self::term(g, Q::one())
    }

    pub fn term(g: G, c: Q) -> Self {
        let mut s = Self::zero();
        s.add_term(g, c);
        s
    }

    /// Adds `c · g`, canonicalizing `g` first.
    pub fn add_term(&mut self, g: G, c: Q) {
        self.add_canonical(g.canonical(), c);
    }

    fn add_canonical(&mut self, g: G, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&G, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &G) -> Q {
        self.terms.get(&g.canonical()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_canonical(g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn max_edges(&self) -> usize {
        self.terms.keys().map(|g| g.edge_count()).max().unwrap_or(0)
    }

    pub fn max_vertices(&self) -> usize {
        self.terms.keys().map(|g| g.vertex_count()).max().unwrap_or(0)
    }

    /// Splits by vertex count.
    pub fn strata(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (g, c) in &self.terms {
            out.entry(g.vertex_count())
                .or_insert_with(Self::zero)
                .add_canonical(g.clone(), c.clone());
        }
        out
    }

    fn map_linear(&self, f: impl Fn(&G) -> FormalSum<G>) -> Self {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            for (h, d) in f(g).terms {
                out.add_canonical(h, d * c);
            }
        }
        out
    }
}

impl<G: Canonical> FromIterator<(G, Q)> for FormalSum<G> {
    fn from_iter<I: IntoIterator<Item = (G, Q)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (g, c) in iter {
            s.add_term(g, c);
        }
        s
    }
}

/// Decorates each edge in turn.
pub fn del_z(s: &FormalSum<BipartiteGraph>) -> FormalSum<DecoratedGraph> {
    let mut out = FormalSum::zero();
    for (g, c) in s.terms() {
        for &e in g.edges() {
            out.add_term(DecoratedGraph::new(g.clone(), e).unwrap(), c.clone());
        }
    }
    out
}

/// Glues the decorated edge with each edge sharing its black vertex.
pub fn del_x(s: &FormalSum<DecoratedGraph>) -> FormalSum<DecoratedGraph> {
    s.map_linear(|d| glue_all(d, Side::Black))
}

/// Glues the decorated edge with each edge sharing its white vertex.
pub fn del_y(s: &FormalSum<DecoratedGraph>) -> FormalSum<DecoratedGraph> {
    s.map_linear(|d| glue_all(d, Side::White))
}

#[derive(Clone, Copy)]
enum Side {
    Black,
    White,
}

fn glue_all(d: &DecoratedGraph, side: Side) -> FormalSum<DecoratedGraph> {
    let g = d.graph();
    let (w0, b0) = d.decorated();
    let mut out = FormalSum::zero();
    match side {
        Side::Black => {
            for wf in g.black_neighbors(b0).filter(|&w| w != w0).collect::<Vec<_>>() {
                out.add_term(merge_whites(g, w0, wf, b0), Q::one());
            }
        }
        Side::White => {
            for bf in g.white_neighbors(w0).filter(|&b| b != b0).collect::<Vec<_>>() {
                let t = DecoratedGraph::new(g.transpose(), (b0, w0)).unwrap();
                let merged = merge_whites(t.graph(), b0, bf, w0);
                let (b, w) = merged.decorated();
                out.add_term(
                    DecoratedGraph::new(merged.graph().transpose(), (w, b)).unwrap(),
                    Q::one(),
                );
            }
        }
    }
    out
}

/// Identifies white `wf` with white `w0` and decorates `(w0, b0)`.
fn merge_whites(g: &BipartiteGraph, w0: usize, wf: usize, b0: usize) -> DecoratedGraph {
    let relabel = |w: usize| {
        let w = if w == wf { w0 } else { w };
        if w > wf {
            w - 1
        } else {
            w
        }
    };
    let edges = g.edges().iter().map(|&(w, b)| (relabel(w), b)).collect();
    let graph = BipartiteGraph::collapse(g.white_count() - 1, g.black_count(), edges)
        .expect("gluing keeps every vertex covered");
    DecoratedGraph::new(graph, (relabel(w0), b0)).unwrap()
}

pub fn del_x_pow(s: &FormalSum<DecoratedGraph>, k: usize) -> FormalSum<DecoratedGraph> {
    (0..k).fold(s.clone(), |acc, _| del_x(&acc))
}

pub fn del_y_pow(s: &FormalSum<DecoratedGraph>, k: usize) -> FormalSum<DecoratedGraph> {
    (0..k).fold(s.clone(), |acc, _| del_y(&acc))
}

/// `(∂_x^k − (−∂_y)^k) ds` for `k = 1..=k_max`.
pub fn residuals(ds: &FormalSum<DecoratedGraph>, k_max: usize) -> Vec<FormalSum<DecoratedGraph>> {
    let mut xs = ds.clone();
    let mut ys = ds.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        xs = del_x(&xs);
        ys = del_y(&ys);
        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
        out.push(xs.sub(&ys.scale(&sign)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub pass: bool,
    pub k_max: usize,
    /// Nonzero residuals only, keyed by `k`.
    pub residuals: BTreeMap<usize, FormalSum<DecoratedGraph>>,
}

pub const CRITERION_NOTE: &str =
    "k >= max edge count is not checked: each gluing removes at least one edge, so both terms vanish";

pub fn criterion_check(s: &FormalSum<BipartiteGraph>) -> CriterionReport {
    let k_max = s.max_edges().saturating_sub(1);
    let ds = del_z(s);
    let residuals: BTreeMap<usize, FormalSum<DecoratedGraph>> = residuals(&ds, k_max)
        .into_iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(i, r)| (i + 1, r))
        .collect();
    CriterionReport {
        pass: residuals.is_empty(),
        k_max,
        residuals,
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermJson {
    pub coeff: String,
    pub graph: GraphJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decorated: Option<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SumJson {
    pub terms: Vec<TermJson>,
}

impl From<&FormalSum<BipartiteGraph>> for SumJson {
    fn from(s: &FormalSum<BipartiteGraph>) -> Self {
        SumJson {
            terms: s
                .terms()
                .map(|(g, c)| TermJson {
                    coeff: format_q(c),
                    graph: g.into(),
                    decorated: None,
                })
                .collect(),
        }
    }
}

impl From<&FormalSum<DecoratedGraph>> for SumJson {
    fn from(s: &FormalSum<DecoratedGraph>) -> Self {
        SumJson {
            terms: s
                .terms()
                .map(|(d, c)| TermJson {
                    coeff: format_q(c),
                    graph: d.graph().into(),
                    decorated: Some([d.decorated().0, d.decorated().1]),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SumJson> for FormalSum<BipartiteGraph> {
    type Error = Error;

    fn try_from(j: &SumJson) -> Result<Self> {
        let mut s = FormalSum::zero();
        for t in &j.terms {
            if t.decorated.is_some() {
                return Err(Error::InvalidGraph("unexpected decorated term in a plain sum".into()));
            }
            s.add_term(BipartiteGraph::try_from(&t.graph)?, parse_q(&t.coeff)?);
        }
        Ok(s)
    }
}

impl TryFrom<&SumJson> for FormalSum<DecoratedGraph> {
    type Error = Error;

    fn try_from(j: &SumJson) -> Result<Self> {
        let mut s = FormalSum::zero();
        for t in &j.terms {
            let [w, b] = t
                .decorated
                .ok_or_else(|| Error::InvalidGraph("term lacks a decorated edge".into()))?;
            let d = DecoratedGraph::new(BipartiteGraph::try_from(&t.graph)?, (w, b))?;
            s.add_term(d, parse_q(&t.coeff)?);
        }
        Ok(s)
    }
}

/// `(black-center 2-star) − (white-center 2-star)`, whose count is `S_3`.
pub fn star_difference() -> FormalSum<BipartiteGraph> {
    let mut s = FormalSum::single(BipartiteGraph::black_star(2));
    s.add_term(BipartiteGraph::white_star(2), -Q::one());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn edge_decorated() -> DecoratedGraph {
        DecoratedGraph::new(BipartiteGraph::single_edge(), (0, 0)).unwrap()
    }

    fn star_decorated() -> FormalSum<DecoratedGraph> {
        FormalSum::single(DecoratedGraph::new(BipartiteGraph::black_star(2), (0, 0)).unwrap())
    }

    #[test]
    fn del_z_examples() {
        let d = del_z(&FormalSum::single(BipartiteGraph::single_edge()));
        assert_eq!(d, FormalSum::single(edge_decorated()));
        let d = del_z(&FormalSum::single(BipartiteGraph::black_star(2)));
        assert_eq!(d.len(), 1);
        assert_eq!(d.terms().next().unwrap().1, &q(2));
        assert!(del_z(&FormalSum::zero()).is_empty());
    }

    #[test]
    fn gluing_examples() {
        assert_eq!(del_x(&star_decorated()), FormalSum::single(edge_decorated()));
        assert!(del_x(&FormalSum::single(edge_decorated())).is_empty());
        assert!(del_y(&star_decorated()).is_empty());
        let white = FormalSum::single(DecoratedGraph::new(BipartiteGraph::white_star(2), (0, 1)).unwrap());
        assert_eq!(del_y(&white), FormalSum::single(edge_decorated()));
    }

    #[test]
    fn gluing_collapses_parallel_edges() {
        // 4-cycle: merging the two whites produces a doubled path that collapses to the 2-star
        let c4 = BipartiteGraph::new(2, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let out = del_x(&FormalSum::single(DecoratedGraph::new(c4, (0, 0)).unwrap()));
        let star = DecoratedGraph::new(BipartiteGraph::white_star(2), (0, 0)).unwrap();
        assert_eq!(out, FormalSum::single(star));
    }

    #[test]
    fn criterion_examples() {
        let r = criterion_check(&FormalSum::single(BipartiteGraph::single_edge()));
        assert!(r.pass);
        let r = criterion_check(&FormalSum::single(BipartiteGraph::black_star(2)));
        assert!(!r.pass);
        assert_eq!(r.residuals[&1], FormalSum::term(edge_decorated(), q(2)));
        let r = criterion_check(&star_difference());
        assert!(r.pass);
        assert_eq!(r.k_max, 1);
    }

    #[test]
    fn json_round_trip() {
        let s = star_difference();
        let j = SumJson::from(&s);
        let text = serde_json::to_string(&j).unwrap();
        assert!(!text.contains("decorated"));
        let back: SumJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FormalSum::<BipartiteGraph>::try_from(&back).unwrap(), s);
        let d = del_z(&s);
        let jd = SumJson::from(&d);
        assert_eq!(FormalSum::<DecoratedGraph>::try_from(&jd).unwrap(), d);
        assert!(FormalSum::<BipartiteGraph>::try_from(&jd).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = BipartiteGraph> {
        (1usize..4, 1usize..4, proptest::collection::vec((0usize..4, 0usize..4), 1..6)).prop_filter_map(
            "valid",
            |(w, b, es)| {
                let es: Vec<_> = es.into_iter().map(|(x, y)| (x % w, y % b)).collect();
                BipartiteGraph::collapse(w, b, es).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn operators_are_linear(g in arb_graph(), h in arb_graph(), a in -3i64..4, b in -3i64..4) {
            let s = FormalSum::term(g.clone(), q(a)).add(&FormalSum::term(h.clone(), q(b)));
            let lhs = del_x(&del_z(&s));
            let rhs = del_x(&del_z(&FormalSum::single(g.clone()))).scale(&q(a))
                .add(&del_x(&del_z(&FormalSum::single(h.clone()))).scale(&q(b)));
            prop_assert_eq!(lhs, rhs);
            let lhs = del_y(&del_z(&s));
            let rhs = del_y(&del_z(&FormalSum::single(g))).scale(&q(a))
                .add(&del_y(&del_z(&FormalSum::single(h))).scale(&q(b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gluing_removes_one_edge(g in arb_graph()) {
            let ds = del_z(&FormalSum::single(g.clone()));
            for (d, _) in del_x(&ds).terms().chain(del_y(&ds).terms()) {
                prop_assert!(d.graph().edge_count() < g.edge_count());
            }
            prop_assert!(del_x_pow(&ds, g.edge_count()).is_empty());
            prop_assert!(del_y_pow(&ds, g.edge_count()).is_empty());
        }
    }
}
