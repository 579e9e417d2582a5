//! Counting and measuring compatible colorings of bipartite graphs.
//!
//! A coloring sends white vertices to columns (French `x`) and black
//! vertices to rows (French `y`); it is compatible with a diagram when every
//! edge lands on a box, or in the continuous case inside the region.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::FormalSum;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, DecoratedGraph};
use crate::partition::Partition;
use crate::poly::{Piecewise, PiecewiseAffine};
use crate::profile::Profile;
use crate::rational::{format_q, q_from_u128, to_f64, Q};

/// Exact `N_G(λ)`, factored over connected components.
pub fn count_embeddings(g: &BipartiteGraph, lambda: &Partition) -> Result<u128> {
    let conj = lambda.conjugate();
    let nw = g.white_count();
    let adj = g.adjacency();
    let mut total: u128 = 1;
    for comp in g.components() {
        let whites: Vec<usize> = comp.iter().copied().filter(|&v| v < nw).collect();
        let blacks: Vec<usize> = comp.iter().copied().filter(|&v| v >= nw).collect();
        // enumerate the smaller color class; the other side contributes a product of minima
        let (assigned, others, lengths) = if blacks.len() <= whites.len() {
            (blacks, whites, lambda.parts())
        } else {
            (whites, blacks, conj.parts())
        };
        let index = |v: usize| assigned.binary_search(&v).unwrap();
        let nbrs: Vec<Vec<usize>> = others
            .iter()
            .map(|&o| adj[o].iter().map(|&a| index(a)).collect())
            .collect();
        let c = sum_of_min_products(assigned.len(), &nbrs, lengths)?;
        total = total.checked_mul(c).ok_or(Error::Overflow("count_embeddings"))?;
        if total == 0 {
            return Ok(0);
        }
    }
    Ok(total)
}

fn sum_of_min_products(n: usize, nbrs: &[Vec<usize>], lengths: &[usize]) -> Result<u128> {
    let l = lengths.len();
    if l == 0 {
        return Ok(0);
    }
    let mut h = vec![0usize; n];
    let mut sum: u128 = 0;
    loop {
        let mut prod: u128 = 1;
        for ns in nbrs {
            let m = ns.iter().map(|&a| lengths[h[a]]).min().unwrap() as u128;
            prod = prod.checked_mul(m).ok_or(Error::Overflow("count_embeddings"))?;
        }
        sum = sum.checked_add(prod).ok_or(Error::Overflow("count_embeddings"))?;
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return Ok(sum);
            }
            h[i] += 1;
            if h[i] < l {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

/// Direct enumeration of every map from vertices to box coordinates.
pub fn count_embeddings_brute(g: &BipartiteGraph, lambda: &Partition) -> u128 {
    let (nw, nb) = (g.white_count(), g.black_count());
    let (cols, rows) = (lambda.part(0), lambda.len());
    if nw + nb == 0 {
        return 1;
    }
    if cols == 0 {
        return 0;
    }
    let radix: Vec<usize> = (0..nw).map(|_| cols).chain((0..nb).map(|_| rows)).collect();
    let mut h = vec![0usize; nw + nb];
    let mut count = 0u128;
    loop {
        if g
            .edges()
            .iter()
            .all(|&(w, b)| h[w] < lambda.part(h[nw + b]))
        {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == h.len() {
                return count;
            }
            h[i] += 1;
            if h[i] < radix[i] {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

pub fn count_embeddings_sum(s: &FormalSum<BipartiteGraph>, lambda: &Partition) -> Result<Q> {
    let mut total = Q::zero();
    for (g, c) in s.terms() {
        total += c * q_from_u128(count_embeddings(g, lambda)?);
    }
    Ok(total)
}

/// Messages along forest edges; each is a function of the receiving vertex's coordinate.
struct Forest<'a> {
    adj: Vec<Vec<usize>>,
    nw: usize,
    omega: &'a Profile,
    row_length: PiecewiseAffine,
    column_height: PiecewiseAffine,
}

impl<'a> Forest<'a> {
    fn new(g: &BipartiteGraph, omega: &'a Profile) -> Result<Self> {
        if !g.is_forest() {
            return Err(Error::NotForest);
        }
        Ok(Forest {
            adj: g.adjacency(),
            nw: g.white_count(),
            omega,
            row_length: omega.row_length(),
            column_height: omega.column_height(),
        })
    }

    fn is_white(&self, v: usize) -> bool {
        v < self.nw
    }

    /// Product of the messages into `v` from all neighbors except `skip`.
    fn incoming(&self, v: usize, skip: &[usize]) -> Piecewise {
        let top = if self.is_white(v) { self.omega.x_max() } else { self.omega.y_max() };
        self.adj[v]
            .iter()
            .filter(|u| !skip.contains(u))
            .fold(Piecewise::constant_on(Q::zero(), top, Q::one()), |acc, &u| {
                acc.mul(&self.message(u, v))
            })
    }

    /// The measure of admissible placements of the subtree at `v`, as a
    /// function of the coordinate of its parent `p`.
    fn message(&self, v: usize, p: usize) -> Piecewise {
        let cumulative = self.incoming(v, &[p]).cumulative();
        if self.is_white(v) {
            cumulative.compose(&self.row_length)
        } else {
            cumulative.compose(&self.column_height)
        }
    }

    fn component_volume(&self, root: usize) -> Q {
        self.incoming(root, &[]).integral()
    }
}

/// Exact volume of the compatible continuous colorings of a forest.
///
/// Staircase profiles are accepted; on them the volume equals the integer count.
pub fn embedding_volume(g: &BipartiteGraph, omega: &Profile) -> Result<Q> {
    let f = Forest::new(g, omega)?;
    if g.edge_count() == 0 {
        return Ok(Q::one());
    }
    if omega.is_flat() {
        return Ok(Q::zero());
    }
    Ok(g.components()
        .iter()
        .fold(Q::one(), |acc, c| acc * f.component_volume(c[0])))
}

/// Volume with the decorated edge pinned to the profile point of content `z`.
pub fn decorated_value(d: &DecoratedGraph, omega: &Profile, z: &Q) -> Result<Q> {
    let g = d.graph();
    let f = Forest::new(g, omega)?;
    omega.check_strict()?;
    let Some((lo, hi)) = omega.support() else {
        return Err(Error::OutsideSupport {
            z: format_q(z),
            lo: "0/1".into(),
            hi: "0/1".into(),
        });
    };
    if z < &lo || z > &hi {
        return Err(Error::OutsideSupport {
            z: format_q(z),
            lo: format_q(&lo),
            hi: format_q(&hi),
        });
    }
    let (w0, b0) = d.decorated();
    let b0g = g.white_count() + b0;
    let (x0, y0) = (omega.x_of(z), omega.y_of(z));
    let mut value = f.incoming(w0, &[b0g]).eval(&x0) * f.incoming(b0g, &[w0]).eval(&y0);
    for comp in g.components() {
        if comp.binary_search(&w0).is_err() {
            value *= f.component_volume(comp[0]);
        }
    }
    Ok(value)
}

pub fn decorated_sum_value(s: &FormalSum<DecoratedGraph>, omega: &Profile, z: &Q) -> Result<Q> {
    let mut total = Q::zero();
    for (d, c) in s.terms() {
        total += c * decorated_value(d, omega, z)?;
    }
    Ok(total)
}

pub fn embedding_volume_sum(s: &FormalSum<BipartiteGraph>, omega: &Profile) -> Result<Q> {
    let mut total = Q::zero();
    for (g, c) in s.terms() {
        total += c * embedding_volume(g, omega)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

const MC_CHUNK: u64 = 1 << 14;

/// Uniform sampling in the bounding box; chunk `i` always draws from stream `i`
/// of the seeded generator, so the result does not depend on the thread count.
pub fn mc_volume(g: &BipartiteGraph, omega: &Profile, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let pts = omega.to_f64_points();
    let (xm, ym) = (to_f64(&omega.x_max()), to_f64(&omega.y_max()));
    let (nw, nb) = (g.white_count(), g.black_count());
    let edges = g.edges();
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let n = MC_CHUNK.min(samples - i * MC_CHUNK);
            let mut xs = vec![0.0; nw];
            let mut ys = vec![0.0; nb];
            let mut hits = 0u64;
            for _ in 0..n {
                xs.iter_mut().for_each(|x| *x = rng.gen::<f64>() * xm);
                ys.iter_mut().for_each(|y| *y = rng.gen::<f64>() * ym);
                if edges.iter().all(|&(w, b)| inside(&pts, xs[w], ys[b])) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let boxed = xm.powi(nw as i32) * ym.powi(nb as i32);
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: boxed * p,
        stderr: boxed * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

fn inside(pts: &[(f64, f64)], x: f64, y: f64) -> bool {
    let (z, t) = (x - y, x + y);
    if pts.is_empty() || z < pts[0].0 || z > pts[pts.len() - 1].0 {
        return t <= z.abs();
    }
    let i = pts[1..].partition_point(|p| p.0 < z).min(pts.len() - 2);
    let (a, b) = (pts[i], pts[i + 1]);
    t <= a.1 + (b.1 - a.1) * (z - a.0) / (b.0 - a.0)
}
