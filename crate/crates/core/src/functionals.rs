//! Fundamental functionals of shape `S_k`, polynomials in them, and the
//! content derivative.
//!
//! `S_k(λ) = (k−1) ∬_λ (x−y)^{k−2} dx dy`. On a unit box of content `c` the
//! variable `u = x − y` has the hat density `1 − |u − c|` on `[c−1, c+1]`, so the
//! box contributes the second difference of `u^k / k` at `c`:
//! `((c+1)^k − 2c^k + (c−1)^k) / k`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poly::Poly;
use crate::profile::Profile;
use crate::rational::{format_q, parse_q, pow, q, Q};

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("S_k needs k >= 2, got {k}")));
    }
    Ok(())
}

/// Exact `S_k(λ)` by the per-box second-difference formula.
pub fn s_k_partition(lambda: &Partition, k: u32) -> Result<Q> {
    check_k(k)?;
    let mut acc = Q::zero();
    for cell in lambda.cells() {
        let c = q(cell.content());
        acc += pow(&(&c + Q::one()), k) - pow(&c, k) * q(2) + pow(&(&c - Q::one()), k);
    }
    Ok(acc / q(k as i64))
}

/// Exact `S_k(ω) = ½(k−1) ∫ z^{k−2} (ω(z) − |z|) dz`, integrated piece by piece.
pub fn s_k_profile(omega: &Profile, k: u32) -> Result<Q> {
    check_k(k)?;
    let weight = Poly::new({
        let mut c = vec![Q::zero(); k as usize - 1];
        c[k as usize - 2] = Q::one();
        c
    });
    let mut acc = Q::zero();
    for w in omega.breakpoints().windows(2) {
        let (z0, w0) = &w[0];
        let (z1, w1) = &w[1];
        let mut cuts = vec![z0.clone(), z1.clone()];
        if z0.is_negative() && z1.is_positive() {
            cuts.insert(1, Q::zero());
        }
        let slope = (w1 - w0) / (z1 - z0);
        for c in cuts.windows(2) {
            // ω − |z| is affine on [c0, c1]
            let abs_slope = if c[0].is_negative() { -Q::one() } else { Q::one() };
            let excess = Poly::affine(w0 - &slope * z0, &slope - abs_slope);
            acc += weight.mul(&excess).integrate(&c[0], &c[1]);
        }
    }
    Ok(acc * q(k as i64 - 1) / q(2))
}

/// Polynomial in the generators `S_2, S_3, ...`; monomials are sorted index
/// multisets, the empty multiset is the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct SPolynomial {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl SPolynomial {
    pub fn zero() -> Self {
        SPolynomial::default()
    }

    pub fn constant(c: Q) -> Self {
        SPolynomial::default().with_term(Vec::new(), c)
    }

    /// The single generator `S_k`.
    pub fn generator(k: u32) -> Result<Self> {
        check_k(k)?;
        Ok(SPolynomial::default().with_term(vec![k], Q::one()))
    }

    pub fn monomial(mut gens: Vec<u32>, coeff: Q) -> Result<Self> {
        for &k in &gens {
            check_k(k)?;
        }
        gens.sort_unstable();
        Ok(SPolynomial::default().with_term(gens, coeff))
    }

    fn with_term(mut self, gens: Vec<u32>, c: Q) -> Self {
        self.add_term(gens, c);
        self
    }

    fn add_term(&mut self, gens: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(gens) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, gens: &[u32]) -> Q {
        let mut key = gens.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Graded degree: `S_k` has degree `k`.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|g| g.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|g| g.iter().sum::<u32>() == degree)
    }

    pub fn add(&self, other: &SPolynomial) -> SPolynomial {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SPolynomial) -> SPolynomial {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> SPolynomial {
        if c.is_zero() {
            return SPolynomial::zero();
        }
        SPolynomial {
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &SPolynomial) -> SPolynomial {
        let mut out = SPolynomial::zero();
        for (ga, ca) in &self.terms {
            for (gb, cb) in &other.terms {
                let mut g = ga.clone();
                g.extend_from_slice(gb);
                g.sort_unstable();
                out.add_term(g, ca * cb);
            }
        }
        out
    }

    /// Substitutes `S_k -> values(k)`.
    pub fn eval_with(&self, mut values: impl FnMut(u32) -> Result<Q>) -> Result<Q> {
        let mut cache: BTreeMap<u32, Q> = BTreeMap::new();
        let mut acc = Q::zero();
        for (g, c) in &self.terms {
            let mut term = c.clone();
            for &k in g {
                if !cache.contains_key(&k) {
                    cache.insert(k, values(k)?);
                }
                term *= &cache[&k];
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, omega: &Profile) -> Q {
        self.eval_with(|k| s_k_profile(omega, k)).expect("generator indices are >= 2")
    }

    pub fn evaluate_partition(&self, lambda: &Partition) -> Q {
        self.eval_with(|k| s_k_partition(lambda, k)).expect("generator indices are >= 2")
    }
}

/// Exact evaluation of `P` on a profile.
pub fn evaluate_s_polynomial(p: &SPolynomial, omega: &Profile) -> Q {
    p.evaluate(omega)
}

/// Polynomial in `z` with `SPolynomial` coefficients; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZPolynomial {
    coeffs: Vec<SPolynomial>,
}

impl ZPolynomial {
    pub fn new(mut coeffs: Vec<SPolynomial>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[SPolynomial] {
        &self.coeffs
    }

    /// `[z^i]`, as an element of the algebra.
    pub fn coeff(&self, i: usize) -> SPolynomial {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn z_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &ZPolynomial) -> ZPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        ZPolynomial::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn mul_s(&self, p: &SPolynomial) -> ZPolynomial {
        ZPolynomial::new(self.coeffs.iter().map(|c| c.mul(p)).collect())
    }

    /// For a fixed diagram, the ordinary polynomial in `z`.
    pub fn at_profile(&self, omega: &Profile) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.evaluate(omega)).collect())
    }

    /// For a fixed content `z0`, the element of the algebra.
    pub fn at_content(&self, z0: &Q) -> SPolynomial {
        self.coeffs
            .iter()
            .enumerate()
            .fold(SPolynomial::zero(), |acc, (i, c)| acc.add(&c.scale(&pow(z0, i as u32))))
    }
}

/// `∂_{C_z}`: `S_k ↦ (k−1) z^{k−2}`, extended by the Leibniz rule and linearity.
pub fn content_derivative(p: &SPolynomial) -> ZPolynomial {
    let mut coeffs: Vec<SPolynomial> = Vec::new();
    for (gens, c) in p.terms() {
        for i in 0..gens.len() {
            // skip repeated generators: they are accounted for by multiplicity below
            if i > 0 && gens[i] == gens[i - 1] {
                continue;
            }
            let k = gens[i];
            let mult = gens.iter().filter(|&&g| g == k).count() as i64;
            let mut rest = gens.clone();
            rest.remove(i);
            let zpow = (k - 2) as usize;
            if coeffs.len() <= zpow {
                coeffs.resize(zpow + 1, SPolynomial::zero());
            }
            let term = SPolynomial::default().with_term(rest, c * q(mult * (k as i64 - 1)));
            coeffs[zpow] = coeffs[zpow].add(&term);
        }
    }
    ZPolynomial::new(coeffs)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct STermJson {
    pub gens: Vec<u32>,
    pub coeff: String,
}

/// Wire form: `{"terms":[{"gens":[2,2,3],"coeff":"1/2"}, ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SPolynomialJson {
    pub terms: Vec<STermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ZPolynomialJson {
    pub z_coeffs: Vec<SPolynomialJson>,
}

impl From<&SPolynomial> for SPolynomialJson {
    fn from(p: &SPolynomial) -> Self {
        SPolynomialJson {
            terms: p
                .terms()
                .map(|(g, c)| STermJson {
                    gens: g.clone(),
                    coeff: format_q(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SPolynomialJson> for SPolynomial {
    type Error = Error;

    fn try_from(j: &SPolynomialJson) -> Result<SPolynomial> {
        let mut out = SPolynomial::zero();
        for t in &j.terms {
            out = out.add(&SPolynomial::monomial(t.gens.clone(), parse_q(&t.coeff)?)?);
        }
        Ok(out)
    }
}

impl From<&ZPolynomial> for ZPolynomialJson {
    fn from(p: &ZPolynomial) -> Self {
        ZPolynomialJson {
            z_coeffs: p.coeffs.iter().map(SPolynomialJson::from).collect(),
        }
    }
}

impl TryFrom<&ZPolynomialJson> for ZPolynomial {
    type Error = Error;

    fn try_from(j: &ZPolynomialJson) -> Result<ZPolynomial> {
        Ok(ZPolynomial::new(
            j.z_coeffs.iter().map(SPolynomial::try_from).collect::<Result<_>>()?,
        ))
    }
}

/// All generator multisets of graded degree `m` (partitions of `m` into parts `>= 2`),
/// each sorted ascending.
pub fn monomials_of_degree(m: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut g = cur.clone();
            g.sort_unstable();
            out.push(g);
            return;
        }
        for k in (2..=rest.min(max)).rev() {
            cur.push(k);
            rec(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}
