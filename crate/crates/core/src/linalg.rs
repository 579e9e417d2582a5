//! Exact linear algebra over the rationals via fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

/// Row echelon form of an integer matrix obtained by Bareiss elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Clears denominators row by row.
pub fn integer_rows(m: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

pub fn echelon(m: &[Vec<Q>], ncols: usize) -> Echelon {
    let mut a = integer_rows(m);
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division is exact");
                a[i][j] = quot;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &[Vec<Q>], ncols: usize) -> usize {
    echelon(m, ncols).rank()
}

/// Reduced row echelon form over `Q` of the echelon rows.
fn reduced(e: &Echelon, ncols: usize) -> Vec<Vec<Q>> {
    let mut rows: Vec<Vec<Q>> = e
        .rows
        .iter()
        .map(|r| r.iter().take(ncols).map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    for (i, &c) in e.pivots.iter().enumerate().rev() {
        let inv = Q::one() / &rows[i][c];
        for x in rows[i].iter_mut() {
            *x *= &inv;
        }
        for k in 0..i {
            if rows[k][c].is_zero() {
                continue;
            }
            let f = rows[k][c].clone();
            for j in 0..ncols {
                let d = &f * &rows[i][j];
                rows[k][j] -= d;
            }
        }
    }
    rows
}

/// A basis of `{v : m v = 0}`.
pub fn nullspace(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let e = echelon(m, ncols);
    let rref = reduced(&e, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &p) in e.pivots.iter().enumerate() {
                v[p] = -rref[i][f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of a square nonsingular system, `None` if singular.
pub fn solve_square(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let e = echelon(&aug, n + 1);
    if e.rank() < n || e.pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return None;
    }
    let rref = reduced(&e, n + 1);
    Some((0..n).map(|i| rref[i][n].clone()).collect())
}

/// Indices of a maximal set of linearly independent rows, chosen greedily in order.
pub fn independent_rows(m: &[Vec<Q>], ncols: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for (i, row) in m.iter().enumerate() {
        if chosen.len() == ncols {
            break;
        }
        basis.push(row.clone());
        if rank(&basis, ncols) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (r, v)| acc + r * v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn rank_and_nullspace() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ];
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(independent_rows(&m, 3), vec![0, 2]);
    }

    #[test]
    fn solve_with_fractions() {
        let a = vec![vec![qf(1, 2), q(1)], vec![q(3), q(-1)]];
        let x = solve_square(&a, &[q(2), q(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(2), q(5)]);
        assert!(solve_square(&[vec![q(1), q(1)], vec![q(2), q(2)]], &[q(1), q(2)]).is_none());
    }

    proptest! {
        #[test]
        fn nullspace_is_annihilated(entries in proptest::collection::vec(-3i64..4, 12)) {
            let m: Vec<Vec<Q>> = entries.chunks(4).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let ns = nullspace(&m, 4);
            prop_assert_eq!(ns.len() + rank(&m, 4), 4);
            for v in &ns {
                prop_assert!(mat_vec(&m, v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
