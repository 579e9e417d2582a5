//! Univariate polynomials and piecewise polynomials over the rationals.
//!
//! These carry the leaf-elimination integrals for embedding volumes: every
//! message passed along a forest edge is a piecewise polynomial in the
//! coordinate of the receiving vertex.

use num_traits::Zero;

use crate::rational::{q, Q};

/// Dense polynomial, `coeffs[i]` is the coefficient of `u^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b u`
    pub fn affine(a: Q, b: Q) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, u: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * u + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Q::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![Q::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / q(i as i64 + 1)),
        );
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// `p(inner(u))`
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(inner).add(&Poly::constant(c.clone())))
    }

    pub fn integrate(&self, a: &Q, b: &Q) -> Q {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }
}

/// A function on `[breaks[0], breaks[last]]` that is polynomial on each
/// `[breaks[i], breaks[i+1]]`; zero outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piecewise {
    breaks: Vec<Q>,
    pieces: Vec<Poly>,
}

impl Piecewise {
    pub fn new(breaks: Vec<Q>, pieces: Vec<Poly>) -> Self {
        assert_eq!(breaks.len(), pieces.len() + 1, "one piece per interval");
        assert!(breaks.windows(2).all(|w| w[0] < w[1]), "breaks must increase");
        Piecewise { breaks, pieces }
    }

    /// The constant `c` on `[lo, hi]`, or the empty function when `lo >= hi`.
    pub fn constant_on(lo: Q, hi: Q, c: Q) -> Self {
        if lo >= hi {
            return Piecewise::empty();
        }
        Piecewise::new(vec![lo, hi], vec![Poly::constant(c)])
    }

    pub fn empty() -> Self {
        Piecewise {
            breaks: Vec::new(),
            pieces: Vec::new(),
        }
    }

    pub fn breaks(&self) -> &[Q] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    fn piece_index(&self, u: &Q) -> Option<usize> {
        if self.pieces.is_empty() || u < &self.breaks[0] || u > self.breaks.last().unwrap() {
            return None;
        }
        // first interval whose right end is >= u; continuous functions agree at shared ends
        let i = self.breaks[1..].partition_point(|b| b < u);
        Some(i.min(self.pieces.len() - 1))
    }

    pub fn eval(&self, u: &Q) -> Q {
        match self.piece_index(u) {
            Some(i) => self.pieces[i].eval(u),
            None => Q::zero(),
        }
    }

    /// Pointwise product; the domain is the intersection of the two domains.
    pub fn mul(&self, other: &Piecewise) -> Piecewise {
        if self.is_empty() || other.is_empty() {
            return Piecewise::empty();
        }
        let lo = (&self.breaks[0]).max(&other.breaks[0]).clone();
        let hi = self.breaks.last().unwrap().min(other.breaks.last().unwrap()).clone();
        if lo >= hi {
            return Piecewise::empty();
        }
        let mut cuts: Vec<Q> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .filter(|b| **b > lo && **b < hi)
            .cloned()
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort();
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| {
                let mid = (&w[0] + &w[1]) / q(2);
                let a = &self.pieces[self.piece_index(&mid).unwrap()];
                let b = &other.pieces[other.piece_index(&mid).unwrap()];
                a.mul(b)
            })
            .collect();
        Piecewise::new(cuts, pieces)
    }

    /// `u -> ∫_{breaks[0]}^{u} f`, on the same domain.
    pub fn cumulative(&self) -> Piecewise {
        let mut acc = Q::zero();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (i, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            let shift = &acc - anti.eval(&self.breaks[i]);
            acc = anti.eval(&self.breaks[i + 1]) + &shift;
            pieces.push(anti.add(&Poly::constant(shift)));
        }
        Piecewise {
            breaks: self.breaks.clone(),
            pieces,
        }
    }

    pub fn integral(&self) -> Q {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.integrate(&self.breaks[i], &self.breaks[i + 1]))
            .fold(Q::zero(), |a, b| a + b)
    }

    /// `self ∘ inner`, where `inner` is a piecewise-affine map whose values stay
    /// inside the domain of `self`. The result lives on the domain of `inner`.
    pub fn compose(&self, inner: &PiecewiseAffine) -> Piecewise {
        let mut breaks: Vec<Q> = Vec::new();
        let mut pieces: Vec<Poly> = Vec::new();
        for seg in &inner.segments {
            let slope = seg.slope();
            let map = Poly::affine(&seg.v0 - &slope * &seg.u0, slope.clone());
            let mut cuts = vec![seg.u0.clone(), seg.u1.clone()];
            if !slope.is_zero() {
                let (vlo, vhi) = if seg.v0 < seg.v1 {
                    (&seg.v0, &seg.v1)
                } else {
                    (&seg.v1, &seg.v0)
                };
                for b in &self.breaks {
                    if b > vlo && b < vhi {
                        cuts.push(&seg.u0 + (b - &seg.v0) / &slope);
                    }
                }
            }
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let mid = (&w[0] + &w[1]) / q(2);
                let v = map.eval(&mid);
                let piece = match self.piece_index(&v) {
                    Some(i) => self.pieces[i].compose(&map),
                    None => Poly::zero(),
                };
                if breaks.last() != Some(&w[0]) {
                    breaks.push(w[0].clone());
                }
                breaks.push(w[1].clone());
                pieces.push(piece);
            }
        }
        if pieces.is_empty() {
            return Piecewise::empty();
        }
        Piecewise::new(breaks, pieces)
    }
}

/// One affine segment `u0 -> v0`, `u1 -> v1` with `u0 < u1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSegment {
    pub u0: Q,
    pub u1: Q,
    pub v0: Q,
    pub v1: Q,
}

impl AffineSegment {
    pub fn slope(&self) -> Q {
        (&self.v1 - &self.v0) / (&self.u1 - &self.u0)
    }

    pub fn eval(&self, u: &Q) -> Q {
        &self.v0 + self.slope() * (u - &self.u0)
    }
}

/// Contiguous affine segments covering `[u_first, u_last]`; jumps between
/// segments are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PiecewiseAffine {
    pub segments: Vec<AffineSegment>,
}

impl PiecewiseAffine {
    pub fn eval(&self, u: &Q) -> Option<Q> {
        self.segments
            .iter()
            .find(|s| &s.u0 <= u && u <= &s.u1)
            .map(|s| s.eval(u))
    }

    pub fn upper(&self) -> Q {
        self.segments.last().map(|s| s.u1.clone()).unwrap_or_else(Q::zero)
    }
}
