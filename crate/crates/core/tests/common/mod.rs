#![allow(dead_code)]

use ydiag::partition::Partition;
use ydiag::profile::Profile;
use ydiag::rational::to_f64;

/// 5-point Gauss–Legendre rule on [-1, 1]; exact for degree <= 9.
const NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664_0,
    0.906_179_845_938_664_0,
];
const WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

pub fn gauss(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    NODES.iter().zip(WEIGHTS).map(|(t, w)| w * f(m + h * t)).sum::<f64>() * h
}

/// `(k−1) ∬_λ (x−y)^{k−2} dx dy` summed box by box.
pub fn s_k_quadrature(lambda: &Partition, k: u32) -> f64 {
    let mut total = 0.0;
    for cell in lambda.cells() {
        let (x0, y0) = ((cell.column - 1) as f64, (cell.row - 1) as f64);
        total += gauss(y0, y0 + 1.0, |y| gauss(x0, x0 + 1.0, |x| (x - y).powi(k as i32 - 2)));
    }
    (k - 1) as f64 * total
}

/// The same integral over the French region of a profile, column slab by slab.
pub fn s_k_quadrature_profile(omega: &Profile, k: u32) -> f64 {
    let pts: Vec<(f64, f64)> = omega
        .french_boundary()
        .iter()
        .map(|(x, y)| (to_f64(x), to_f64(y)))
        .collect();
    let mut total = 0.0;
    for w in pts.windows(2) {
        let ((xa, ya), (xb, yb)) = (w[0], w[1]);
        if xb <= xa {
            continue;
        }
        let top = |x: f64| ya + (yb - ya) * (x - xa) / (xb - xa);
        total += gauss(xa, xb, |x| gauss(0.0, top(x), |y| (x - y).powi(k as i32 - 2)));
    }
    (k - 1) as f64 * total
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
