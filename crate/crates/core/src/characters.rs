//! Irreducible characters of symmetric groups and their normalized form.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{q, Q};

/// `χ^λ(π)` by the Murnaghan–Nakayama rule on beta-sets.
pub fn mn_character(lambda: &Partition, pi: &Partition) -> Result<i128> {
    if lambda.size() != pi.size() {
        return Err(Error::SizeMismatch {
            lambda: lambda.size(),
            pi: pi.size(),
        });
    }
    let l = lambda.len();
    let beta: Vec<usize> = (0..l).map(|i| lambda.part(i) + l - 1 - i).collect();
    let mut memo = HashMap::new();
    Ok(mn_rec(beta, pi.parts(), &mut memo))
}

/// `beta` is strictly decreasing; removes a hook of length `parts[0]`.
fn mn_rec(beta: Vec<usize>, parts: &[usize], memo: &mut HashMap<(Vec<usize>, usize), i128>) -> i128 {
    let Some((&r, rest)) = parts.split_first() else {
        return 1;
    };
    let key = (beta, parts.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let beta = &key.0;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next: Vec<usize> = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn_rec(next, rest, memo);
        total += if crossed % 2 == 0 { v } else { -v };
    }
    memo.insert(key, total);
    total
}

/// `χ^λ(1^n)` by the hook length formula.
pub fn dimension(lambda: &Partition) -> Q {
    let conj = lambda.conjugate();
    let mut d = (1..=lambda.size()).fold(q(1), |acc, i| acc * q(i as i64));
    for cell in lambda.cells() {
        let arm = lambda.part(cell.row - 1) - cell.column;
        let leg = conj.part(cell.column - 1) - cell.row;
        d /= q((arm + leg + 1) as i64);
    }
    d
}

/// `Σ_μ(λ) = n(n−1)…(n−k+1) χ^λ(μ ∪ 1^{n−k}) / χ^λ(1^n)`, zero when `k > n`.
pub fn normalized_sigma(mu: &Partition, lambda: &Partition) -> Q {
    let (k, n) = (mu.size(), lambda.size());
    if k > n {
        return Q::zero();
    }
    let falling = (0..k).fold(q(1), |acc, i| acc * q((n - i) as i64));
    let mut parts = mu.parts().to_vec();
    parts.extend(std::iter::repeat(1).take(n - k));
    let pi = Partition::new(parts).expect("appending ones keeps the order");
    let chi = mn_character(lambda, &pi).expect("sizes agree");
    falling * Q::from_integer(chi.into()) / dimension(lambda)
}
