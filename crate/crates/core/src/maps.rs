//! Bipartite maps glued from polygons, and characters computed from them.
//!
//! Face `i` of type `μ` is a polygon with `2μ_i` sides. Sides and corners carry
//! global labels; corner `j` of a polygon is white when its local index is
//! even, and side `j` runs from corner `j` to corner `j+1`. A pair-partition of
//! the sides glues each pair white end to white end.

use std::collections::VecDeque;

use num_traits::Zero;
use serde::Serialize;

use crate::calculus::FormalSum;
use crate::characters::normalized_sigma;
use crate::embedding::count_embeddings_sum;
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::partition::Partition;
use crate::rational::{q, Q};

pub const DEFAULT_SIZE_BOUND: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedMap {
    pub face_type: Partition,
    /// Blocks `(a, b)` with `a < b`, sorted.
    pub pairing: Vec<(usize, usize)>,
    pub white_vertices: usize,
    pub black_vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    /// The glued surface admits a consistent orientation.
    pub orientable: bool,
    /// Every block joins sides of opposite direction, so the polygons'
    /// own orientations already agree.
    pub oriented: bool,
    pub underlying: BipartiteGraph,
}

struct Sides {
    polygon: Vec<usize>,
    /// `+1` if the side runs white to black.
    dir: Vec<i8>,
    white_end: Vec<usize>,
    black_end: Vec<usize>,
}

fn sides_of(mu: &Partition) -> Sides {
    let total = 2 * mu.size();
    let mut s = Sides {
        polygon: Vec::with_capacity(total),
        dir: Vec::with_capacity(total),
        white_end: Vec::with_capacity(total),
        black_end: Vec::with_capacity(total),
    };
    let mut offset = 0;
    for (i, &m) in mu.parts().iter().enumerate() {
        let len = 2 * m;
        for j in 0..len {
            let (here, next) = (offset + j, offset + (j + 1) % len);
            s.polygon.push(i);
            if j % 2 == 0 {
                s.dir.push(1);
                s.white_end.push(here);
                s.black_end.push(next);
            } else {
                s.dir.push(-1);
                s.white_end.push(next);
                s.black_end.push(here);
            }
        }
        offset += len;
    }
    s
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// All perfect matchings of `0..n` in lexicographic order.
pub fn pair_partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if n % 2 == 0 {
        rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    }
    out
}

fn glue(mu: &Partition, sides: &Sides, pairing: Vec<(usize, usize)>) -> GluedMap {
    let corners = sides.dir.len();
    let mut uf = UnionFind::new(corners);
    for &(a, b) in &pairing {
        uf.union(sides.white_end[a], sides.white_end[b]);
        uf.union(sides.black_end[a], sides.black_end[b]);
    }
    // corner colors alternate with the global index since every polygon has even length
    let mut white_id = vec![usize::MAX; corners];
    let mut black_id = vec![usize::MAX; corners];
    let (mut nw, mut nb) = (0, 0);
    for c in 0..corners {
        let r = uf.find(c);
        if c % 2 == 0 && white_id[r] == usize::MAX {
            white_id[r] = nw;
            nw += 1;
        } else if c % 2 == 1 && black_id[r] == usize::MAX {
            black_id[r] = nb;
            nb += 1;
        }
    }
    let edges: Vec<(usize, usize)> = pairing
        .iter()
        .map(|&(a, _)| (white_id[uf.find(sides.white_end[a])], black_id[uf.find(sides.black_end[a])]))
        .collect();
    let underlying = BipartiteGraph::collapse(nw, nb, edges).expect("every corner lies on a glued side");
    let n = pairing.len();
    let faces = mu.len();
    let oriented = pairing.iter().all(|&(a, b)| sides.dir[a] != sides.dir[b]);
    let orientable = oriented || is_orientable(sides, &pairing, faces);
    GluedMap {
        face_type: mu.clone(),
        white_vertices: nw,
        black_vertices: nb,
        edges: n,
        faces,
        euler_characteristic: (nw + nb) as i64 - n as i64 + faces as i64,
        orientable,
        oriented,
        underlying,
        pairing,
    }
}

/// Polygon orientations `s_p = ±1` must satisfy `s_a s_b = −dir(x) dir(y)`
/// for every block `{x, y}` joining polygons `a` and `b`.
fn is_orientable(sides: &Sides, pairing: &[(usize, usize)], faces: usize) -> bool {
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); faces];
    for &(x, y) in pairing {
        let rel = -sides.dir[x] * sides.dir[y];
        let (a, b) = (sides.polygon[x], sides.polygon[y]);
        if a == b {
            if rel != 1 {
                return false;
            }
            continue;
        }
        adj[a].push((b, rel));
        adj[b].push((a, rel));
    }
    let mut sign = vec![0i8; faces];
    for start in 0..faces {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                let want = sign[a] * rel;
                if sign[b] == 0 {
                    sign[b] = want;
                    queue.push_back(b);
                } else if sign[b] != want {
                    return false;
                }
            }
        }
    }
    true
}

fn check_bound(mu: &Partition, bound: usize) -> Result<()> {
    if mu.size() > bound {
        return Err(Error::ResourceBound(format!(
            "|mu| = {} exceeds the enumeration bound {bound}",
            mu.size()
        )));
    }
    Ok(())
}

/// One map per pair-partition of the `2|μ|` sides, `(2n−1)!!` in total.
pub fn enumerate_gluings(mu: &Partition, bound: usize) -> Result<Vec<GluedMap>> {
    check_bound(mu, bound)?;
    let sides = sides_of(mu);
    Ok(pair_partitions(sides.dir.len())
        .into_iter()
        .map(|p| glue(mu, &sides, p))
        .collect())
}

/// Only the gluings joining sides of opposite direction, `n!` in total.
pub fn enumerate_oriented_gluings(mu: &Partition, bound: usize) -> Result<Vec<GluedMap>> {
    check_bound(mu, bound)?;
    let sides = sides_of(mu);
    let (even, odd): (Vec<usize>, Vec<usize>) = (0..sides.dir.len()).partition(|&i| sides.dir[i] == 1);
    let mut out = Vec::new();
    let mut used = vec![false; odd.len()];
    let mut cur = Vec::with_capacity(even.len());
    fn rec(
        i: usize,
        even: &[usize],
        odd: &[usize],
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(Vec<(usize, usize)>),
    ) {
        if i == even.len() {
            let mut p = cur.clone();
            p.sort_unstable();
            visit(p);
            return;
        }
        for j in 0..odd.len() {
            if !used[j] {
                used[j] = true;
                let (a, b) = (even[i].min(odd[j]), even[i].max(odd[j]));
                cur.push((a, b));
                rec(i + 1, even, odd, used, cur, visit);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(0, &even, &odd, &mut used, &mut cur, &mut |p| out.push(glue(mu, &sides, p)));
    out.sort_by(|a, b| a.pairing.cmp(&b.pairing));
    Ok(out)
}

pub fn orientability(m: &GluedMap) -> bool {
    m.orientable
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    All,
    Orientable,
    Oriented,
}

/// `Σ weight^{|V_b|} · (underlying graph)` over maps of the given class.
pub fn map_sum(maps: &[GluedMap], class: MapClass, weight: &Q) -> FormalSum<BipartiteGraph> {
    maps.iter()
        .filter(|m| match class {
            MapClass::All => true,
            MapClass::Orientable => m.orientable,
            MapClass::Oriented => m.oriented,
        })
        .map(|m| (m.underlying.clone(), crate::rational::pow(weight, m.black_vertices as u32)))
        .collect()
}

/// The sum defining the character for `α = 1` (oriented maps, weight −1) or `α = 2` (all maps, weight −2).
pub fn character_sum(mu: &Partition, alpha: u32, bound: usize) -> Result<(FormalSum<BipartiteGraph>, usize)> {
    match alpha {
        1 => {
            let maps = enumerate_oriented_gluings(mu, bound)?;
            Ok((map_sum(&maps, MapClass::Oriented, &q(-1)), maps.len()))
        }
        2 => {
            let maps = enumerate_gluings(mu, bound)?;
            Ok((map_sum(&maps, MapClass::All, &q(-2)), maps.len()))
        }
        _ => Err(Error::InvalidArgument(format!("alpha must be 1 or 2, got {alpha}"))),
    }
}

/// Global signs for faces of odd and even count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub odd: i8,
    pub even: i8,
}

impl Calibration {
    pub fn sign(&self, mu: &Partition) -> i8 {
        if mu.len() % 2 == 1 {
            self.odd
        } else {
            self.even
        }
    }
}

fn empirical_sign(mu: &Partition, lambda: &Partition) -> Result<i8> {
    let (sum, _) = character_sum(mu, 1, mu.size().max(DEFAULT_SIZE_BOUND))?;
    let raw = count_embeddings_sum(&sum, lambda)?;
    let oracle = normalized_sigma(mu, lambda);
    if !raw.is_zero() && oracle == raw {
        Ok(1)
    } else if !raw.is_zero() && oracle == -raw.clone() {
        Ok(-1)
    } else {
        Err(Error::Calibration(format!(
            "raw sum {raw} at mu={mu:?}, lambda={lambda:?} is not ±{oracle}"
        )))
    }
}

/// Fixed once from `μ = (1)` and `μ = (1,1)` at `λ = (2,1)`, then checked at `μ = (2)`, `λ = (3,1)`.
pub fn calibration() -> Result<Calibration> {
    static CAL: std::sync::OnceLock<std::result::Result<Calibration, Error>> = std::sync::OnceLock::new();
    CAL.get_or_init(|| {
        let p = |s: &str| s.parse::<Partition>().expect("literal partition");
        let cal = Calibration {
            odd: empirical_sign(&p("1"), &p("2,1"))?,
            even: empirical_sign(&p("1,1"), &p("2,1"))?,
        };
        let check = empirical_sign(&p("2"), &p("3,1"))?;
        if check != cal.odd {
            return Err(Error::Calibration("sign at mu=(2) disagrees with mu=(1)".into()));
        }
        Ok(cal)
    })
    .clone()
}

/// Checks that the sign at `μ` itself equals the one fixed for `ℓ(μ) mod 2`,
/// using the one-row diagram of size `|μ|` where the oracle never vanishes.
pub fn verify_sign(mu: &Partition, cal: &Calibration) -> Result<()> {
    if mu.is_empty() {
        return Ok(());
    }
    let row = Partition::new(vec![mu.size()]).expect("one row");
    let s = empirical_sign(mu, &row)?;
    if s != cal.sign(mu) {
        return Err(Error::Calibration(format!(
            "sign {s} at mu={mu:?} differs from the sign fixed for length parity"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterValue {
    pub value: Q,
    pub raw_sum: Q,
    pub calibration: i8,
    pub maps_enumerated: usize,
}

pub fn character_maps(mu: &Partition, lambda: &Partition, alpha: u32, bound: usize) -> Result<CharacterValue> {
    let cal = calibration()?;
    check_bound(mu, bound)?;
    verify_sign(mu, &cal)?;
    let (sum, count) = character_sum(mu, alpha, bound)?;
    let raw = count_embeddings_sum(&sum, lambda)?;
    let sign = cal.sign(mu);
    Ok(CharacterValue {
        value: if sign == 1 { raw.clone() } else { -raw.clone() },
        raw_sum: raw,
        calibration: sign,
        maps_enumerated: count,
    })
}

/// `Σ_{all maps} weight^{|V_b|} N_M(λ)`.
pub fn all_maps_value(mu: &Partition, lambda: &Partition, weight: &Q, bound: usize) -> Result<Q> {
    let maps = enumerate_gluings(mu, bound)?;
    count_embeddings_sum(&map_sum(&maps, MapClass::All, weight), lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::criterion_check;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn gluing_counts() {
        for (mu, n) in [("1", 1), ("2", 3), ("1,1", 3), ("3", 15), ("2,1", 15)] {
            let maps = enumerate_gluings(&p(mu), 6).unwrap();
            assert_eq!(maps.len(), n);
            let oriented = enumerate_oriented_gluings(&p(mu), 6).unwrap();
            assert_eq!(oriented.len(), (1..=p(mu).size()).product::<usize>());
            assert_eq!(oriented.len(), maps.iter().filter(|m| m.oriented).count());
        }
        assert!(matches!(enumerate_gluings(&p("7"), 6), Err(Error::ResourceBound(_))));
    }

    #[test]
    fn single_bigon() {
        let maps = enumerate_gluings(&p("1"), 6).unwrap();
        let m = &maps[0];
        assert_eq!((m.white_vertices, m.black_vertices, m.edges, m.euler_characteristic), (1, 1, 1, 2));
        assert!(orientability(m));
        assert_eq!(m.underlying, BipartiteGraph::single_edge());
    }

    #[test]
    fn square_gluings() {
        let maps = enumerate_gluings(&p("2"), 6).unwrap();
        let pairings: Vec<_> = maps.iter().map(|m| m.pairing.clone()).collect();
        assert_eq!(pairings, vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]]);
        let chis: Vec<i64> = maps.iter().map(|m| m.euler_characteristic).collect();
        assert_eq!(chis, vec![2, 1, 2]);
        assert!(!maps[1].orientable);
        assert!(maps[0].orientable && maps[2].orientable);
    }

    #[test]
    fn two_bigons() {
        let maps = enumerate_gluings(&p("1,1"), 6).unwrap();
        // each bigon closed on itself: two spheres
        assert_eq!(maps[0].pairing, vec![(0, 1), (2, 3)]);
        assert!(maps[0].orientable && maps[0].oriented);
        assert_eq!(maps[0].euler_characteristic, 4);
        // the crossed gluing is orientable only after reversing one bigon
        assert!(maps[1].orientable && !maps[1].oriented);
    }

    #[test]
    fn euler_bounds_and_parity() {
        for mu in Partition::all_up_to(4).into_iter().filter(|m| !m.is_empty()) {
            for m in enumerate_gluings(&mu, 6).unwrap() {
                // per connected surface χ ≤ 2; count components through the underlying graph
                let comps = m.underlying.components().len() as i64;
                assert!(m.euler_characteristic <= 2 * comps);
                if m.oriented {
                    assert!(m.orientable);
                }
                if m.orientable {
                    assert_eq!(m.euler_characteristic % 2, 0);
                }
            }
        }
    }

    #[test]
    fn character_examples() {
        let v = character_maps(&p("1"), &p("2,1"), 1, 6).unwrap();
        assert_eq!(v.raw_sum, q(-3));
        assert_eq!(v.value, q(3));
        let v = character_maps(&p("2"), &p("3,1"), 1, 6).unwrap();
        assert_eq!(v.value, q(4));
        let v = character_maps(&p("1"), &p("2,1"), 2, 6).unwrap();
        assert_eq!(v.raw_sum, q(-6));
        let cal = calibration().unwrap();
        assert_eq!((cal.odd, cal.even), (-1, 1));
    }

    #[test]
    fn orientable_reading_differs_at_two_bigons() {
        let maps = enumerate_gluings(&p("1,1"), 6).unwrap();
        let l = p("3");
        let orientable = count_embeddings_sum(&map_sum(&maps, MapClass::Orientable, &q(-1)), &l).unwrap();
        let oriented = count_embeddings_sum(&map_sum(&maps, MapClass::Oriented, &q(-1)), &l).unwrap();
        assert_eq!(oriented, normalized_sigma(&p("1,1"), &l));
        assert_eq!(orientable, q(9 - 6));
        assert_ne!(orientable, oriented);
    }

    #[test]
    fn small_map_sums_pass_the_criterion() {
        for mu in Partition::all_up_to(3).into_iter().filter(|m| !m.is_empty()) {
            let maps = enumerate_gluings(&mu, 6).unwrap();
            for class in [MapClass::All, MapClass::Orientable, MapClass::Oriented] {
                assert!(criterion_check(&map_sum(&maps, class, &q(-1))).pass, "{mu:?} {class:?}");
            }
        }
    }
}
