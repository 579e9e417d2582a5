//! Simple bipartite graphs, graphs with one decorated edge, and canonical forms.
//!
//! White vertices are `0..white`, black vertices `0..black`; an edge is a
//! `(white, black)` pair. Canonical forms are computed per connected
//! component by individualization-refinement over color-preserving
//! relabelings, keeping the lexicographically least relabeled edge list.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipartiteGraph {
    white: usize,
    black: usize,
    edges: Vec<(usize, usize)>,
}

/// A graph with one edge decorated by `z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedGraph {
    graph: BipartiteGraph,
    decorated: (usize, usize),
}

impl BipartiteGraph {
    /// Rejects out-of-range endpoints, parallel edges and isolated vertices.
    pub fn new(white: usize, black: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = edges.len();
        let g = Self::collapse(white, black, edges)?;
        if g.edges.len() != n {
            return Err(Error::InvalidGraph("parallel edges are not allowed".into()));
        }
        Ok(g)
    }

    /// Like [`BipartiteGraph::new`] but parallel edges are merged into one.
    pub fn collapse(white: usize, black: usize, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(w, b)) = edges.iter().find(|&&(w, b)| w >= white || b >= black) {
            return Err(Error::InvalidGraph(format!(
                "edge ({w}, {b}) out of range for {white} white / {black} black vertices"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut seen_w = vec![false; white];
        let mut seen_b = vec![false; black];
        for &(w, b) in &edges {
            seen_w[w] = true;
            seen_b[b] = true;
        }
        if let Some(w) = seen_w.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("white vertex {w} is isolated")));
        }
        if let Some(b) = seen_b.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("black vertex {b} is isolated")));
        }
        Ok(BipartiteGraph { white, black, edges })
    }

    pub fn single_edge() -> Self {
        BipartiteGraph::new(1, 1, vec![(0, 0)]).unwrap()
    }

    /// `k` white vertices joined to one black center.
    pub fn black_star(k: usize) -> Self {
        BipartiteGraph::new(k, 1, (0..k).map(|w| (w, 0)).collect()).unwrap()
    }

    /// One white center joined to `k` black vertices.
    pub fn white_star(k: usize) -> Self {
        BipartiteGraph::new(1, k, (0..k).map(|b| (0, b)).collect()).unwrap()
    }

    pub fn white_count(&self) -> usize {
        self.white
    }

    pub fn black_count(&self) -> usize {
        self.black
    }

    pub fn vertex_count(&self) -> usize {
        self.white + self.black
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: (usize, usize)) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn white_neighbors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == w).map(|e| e.1)
    }

    pub fn black_neighbors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.1 == b).map(|e| e.0)
    }

    /// Adjacency over global ids: whites `0..W`, blacks `W..W+B`.
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(w, b) in &self.edges {
            adj[w].push(self.white + b);
            adj[self.white + b].push(w);
        }
        adj
    }

    /// Connected components as global-id vertex sets, in order of least member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; adj.len()];
        let mut out = Vec::new();
        for start in 0..adj.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &u in &adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.vertex_count()
    }

    pub fn disjoint_union(&self, other: &BipartiteGraph) -> BipartiteGraph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(w, b)| (w + self.white, b + self.black)));
        BipartiteGraph::new(self.white + other.white, self.black + other.black, edges).unwrap()
    }

    /// Applies `white_perm[w]`, `black_perm[b]` as new labels.
    pub fn relabel(&self, white_perm: &[usize], black_perm: &[usize]) -> BipartiteGraph {
        let edges = self
            .edges
            .iter()
            .map(|&(w, b)| (white_perm[w], black_perm[b]))
            .collect();
        BipartiteGraph::new(self.white, self.black, edges).unwrap()
    }

    pub fn canonical(&self) -> BipartiteGraph {
        canonical_form(self, None).0
    }

    /// Swaps the roles of the two colors.
    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph::new(self.black, self.white, self.edges.iter().map(|&(w, b)| (b, w)).collect())
            .unwrap()
    }
}

impl DecoratedGraph {
    pub fn new(graph: BipartiteGraph, decorated: (usize, usize)) -> Result<Self> {
        if !graph.has_edge(decorated) {
            return Err(Error::InvalidGraph(format!(
                "decorated edge {decorated:?} is not an edge of the graph"
            )));
        }
        Ok(DecoratedGraph { graph, decorated })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn decorated(&self) -> (usize, usize) {
        self.decorated
    }

    /// Isomorphisms must fix the decorated edge; canonical forms put it at `(0, 0)`.
    pub fn canonical(&self) -> DecoratedGraph {
        let (graph, decorated) = canonical_form(&self.graph, Some(self.decorated));
        DecoratedGraph {
            graph,
            decorated: decorated.expect("decoration is carried through"),
        }
    }
}

/// Types that are stored in formal sums by their canonical representative.
pub trait Canonical: Clone + Ord {
    fn canonical(&self) -> Self;
    fn edge_count(&self) -> usize;
    fn vertex_count(&self) -> usize;
}

impl Canonical for BipartiteGraph {
    fn canonical(&self) -> Self {
        BipartiteGraph::canonical(self)
    }
    fn edge_count(&self) -> usize {
        self.edges.len()
    }
    fn vertex_count(&self) -> usize {
        BipartiteGraph::vertex_count(self)
    }
}

impl Canonical for DecoratedGraph {
    fn canonical(&self) -> Self {
        DecoratedGraph::canonical(self)
    }
    fn edge_count(&self) -> usize {
        self.graph.edges.len()
    }
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

type Certificate = (usize, usize, Vec<(usize, usize)>);

struct Component {
    cert: Certificate,
    decorated: bool,
}

fn canonical_form(g: &BipartiteGraph, pin: Option<(usize, usize)>) -> (BipartiteGraph, Option<(usize, usize)>) {
    let adj = g.adjacency();
    let nw = g.white;
    let pin_global = pin.map(|(w, b)| (w, nw + b));

    let mut comps: Vec<Component> = g
        .components()
        .into_iter()
        .map(|members| {
            let decorated = pin_global.is_some_and(|(w, _)| members.binary_search(&w).is_ok());
            let cert = component_certificate(&members, &adj, nw, if decorated { pin_global } else { None });
            Component { cert, decorated }
        })
        .collect();
    // decorated component first, then the rest by certificate
    comps.sort_by(|a, b| b.decorated.cmp(&a.decorated).then_with(|| a.cert.cmp(&b.cert)));

    let (mut ow, mut ob) = (0, 0);
    let mut edges = Vec::with_capacity(g.edges.len());
    for c in &comps {
        let (cw, cb, ref ce) = c.cert;
        edges.extend(ce.iter().map(|&(w, b)| (w + ow, b + ob)));
        ow += cw;
        ob += cb;
    }
    let graph = BipartiteGraph::new(g.white, g.black, edges).expect("relabeling preserves validity");
    (graph, pin.map(|_| (0, 0)))
}

/// Least relabeled edge list of one connected component over all leaves of
/// the individualization-refinement tree.
fn component_certificate(
    members: &[usize],
    adj: &[Vec<usize>],
    nw: usize,
    pin: Option<(usize, usize)>,
) -> Certificate {
    // local ids
    let local = |v: usize| members.binary_search(&v).unwrap();
    let local_adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| adj[v].iter().map(|&u| local(u)).collect())
        .collect();
    let is_white: Vec<bool> = members.iter().map(|&v| v < nw).collect();
    let whites: Vec<usize> = (0..members.len()).filter(|&i| is_white[i]).collect();
    let blacks: Vec<usize> = (0..members.len()).filter(|&i| !is_white[i]).collect();

    let mut cells: Vec<Vec<usize>> = Vec::new();
    match pin {
        Some((w, b)) => {
            let (lw, lb) = (local(w), local(b));
            cells.push(vec![lw]);
            cells.push(whites.iter().copied().filter(|&v| v != lw).collect());
            cells.push(vec![lb]);
            cells.push(blacks.iter().copied().filter(|&v| v != lb).collect());
        }
        None => {
            cells.push(whites.clone());
            cells.push(blacks.clone());
        }
    }
    cells.retain(|c| !c.is_empty());

    let mut search = Search {
        adj: &local_adj,
        is_white: &is_white,
        best: None,
    };
    search.run(cells);
    (whites.len(), blacks.len(), search.best.expect("at least one leaf"))
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    is_white: &'a [bool],
    best: Option<Vec<(usize, usize)>>,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Vec<Vec<usize>>) {
        refine(&mut cells, self.adj);
        match cells.iter().position(|c| c.len() > 1) {
            None => self.leaf(&cells),
            Some(target) => {
                for &v in &cells[target] {
                    let mut next = Vec::with_capacity(cells.len() + 1);
                    next.extend_from_slice(&cells[..target]);
                    next.push(vec![v]);
                    next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
                    next.extend_from_slice(&cells[target + 1..]);
                    self.run(next);
                }
            }
        }
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) {
        // whites precede blacks in every ordered partition reached from the initial one
        let n = self.adj.len();
        let mut label = vec![0; n];
        let (mut nw, mut nb) = (0, 0);
        for c in cells {
            let v = c[0];
            if self.is_white[v] {
                label[v] = nw;
                nw += 1;
            } else {
                label[v] = nb;
                nb += 1;
            }
        }
        let mut cert: Vec<(usize, usize)> = (0..n)
            .filter(|&v| self.is_white[v])
            .flat_map(|w| self.adj[w].iter().map(move |&b| (w, b)))
            .map(|(w, b)| (label[w], label[b]))
            .collect();
        cert.sort_unstable();
        if self.best.as_ref().is_none_or(|b| cert < *b) {
            self.best = Some(cert);
        }
    }
}

/// Splits cells by the multiset of neighbor cells until the ordered partition is equitable.
fn refine(cells: &mut Vec<Vec<usize>>, adj: &[Vec<usize>]) {
    let mut cell_of = vec![0usize; adj.len()];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let mut changed = false;
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for c in cells.iter() {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = c
                .iter()
                .map(|&v| {
                    let mut sig: Vec<usize> = adj[v].iter().map(|&u| cell_of[u]).collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let before = next.len();
            for (i, (sig, v)) in keyed.iter().enumerate() {
                if i > 0 && keyed[i - 1].0 == *sig {
                    next.last_mut().unwrap().push(*v);
                } else {
                    next.push(vec![*v]);
                }
            }
            changed |= next.len() - before > 1;
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GraphJson {
    pub white: usize,
    pub black: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&BipartiteGraph> for GraphJson {
    fn from(g: &BipartiteGraph) -> Self {
        GraphJson {
            white: g.white,
            black: g.black,
            edges: g.edges.iter().map(|&(w, b)| [w, b]).collect(),
        }
    }
}

impl TryFrom<&GraphJson> for BipartiteGraph {
    type Error = Error;

    fn try_from(j: &GraphJson) -> Result<Self> {
        BipartiteGraph::new(j.white, j.black, j.edges.iter().map(|e| (e[0], e[1])).collect())
    }
}

/// All graphs (up to isomorphism) with no isolated vertices and at most `max_edges` edges.
pub fn all_graphs_up_to_edges(max_edges: usize) -> Vec<BipartiteGraph> {
    let mut seen: BTreeSet<BipartiteGraph> = BTreeSet::new();
    for white in 0..=max_edges {
        for black in 0..=max_edges {
            let slots: Vec<(usize, usize)> = (0..white)
                .flat_map(|w| (0..black).map(move |b| (w, b)))
                .collect();
            let need = white.max(black);
            let mut chosen = Vec::new();
            subsets(&slots, 0, max_edges, need, &mut chosen, &mut |edges| {
                if let Ok(g) = BipartiteGraph::new(white, black, edges.to_vec()) {
                    seen.insert(g.canonical());
                }
            });
        }
    }
    seen.into_iter().collect()
}

fn subsets(
    slots: &[(usize, usize)],
    from: usize,
    max: usize,
    min: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if chosen.len() >= min {
        visit(chosen);
    }
    if chosen.len() == max {
        return;
    }
    for i in from..slots.len() {
        chosen.push(slots[i]);
        subsets(slots, i + 1, max, min, chosen, visit);
        chosen.pop();
    }
}
