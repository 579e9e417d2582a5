//! Generalized Young diagrams as piecewise-affine profiles in Russian coordinates.
//!
//! A profile is a 1-Lipschitz function `ω` with `ω(z) = |z|` for large `|z|`.
//! The diagram is the closed region `{(z, t) : |z| <= t <= ω(z)}`. French
//! coordinates of a profile point are `x = (ω(z) + z) / 2`, `y = (ω(z) - z) / 2`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poly::{AffineSegment, PiecewiseAffine};
use crate::rational::{format_q, parse_q, q, Q};

/// Normalized breakpoints `(z, ω(z))`, strictly increasing in `z`. Empty means `ω(z) = |z|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    points: Vec<(Q, Q)>,
}

fn abs(z: &Q) -> Q {
    z.abs()
}

impl Profile {
    /// Validates and normalizes: collinear breakpoints are merged and the
    /// profile is trimmed to the breakpoints where it leaves `|z|`.
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        if points.is_empty() {
            return Ok(Profile::flat());
        }
        for w in points.windows(2) {
            let dz = &w[1].0 - &w[0].0;
            if !dz.is_positive() {
                return Err(Error::InvalidProfile("breakpoints must be strictly increasing in z".into()));
            }
            let slope = (&w[1].1 - &w[0].1) / dz;
            if slope.abs() > Q::one() {
                return Err(Error::InvalidProfile(format!(
                    "slope {} between z={} and z={} violates the Lipschitz bound",
                    format_q(&slope),
                    format_q(&w[0].0),
                    format_q(&w[1].0)
                )));
            }
        }
        let (first, last) = (&points[0], points.last().unwrap());
        if first.1 != abs(&first.0) || last.1 != abs(&last.0) {
            return Err(Error::InvalidProfile("profile must agree with |z| at both ends".into()));
        }
        if let Some(p) = points.iter().find(|(z, w)| w < &abs(z)) {
            return Err(Error::InvalidProfile(format!("ω({}) < |z|", format_q(&p.0))));
        }

        // pad with points on |z| so that trimming is uniform
        let lo = first.0.clone().min(Q::zero()) - Q::one();
        let hi = last.0.clone().max(Q::zero()) + Q::one();
        let mut full = vec![(lo.clone(), abs(&lo))];
        if first.0 > Q::zero() {
            full.push((Q::zero(), Q::zero()));
        }
        full.extend(points.iter().cloned());
        if last.0 < Q::zero() {
            full.push((Q::zero(), Q::zero()));
        }
        full.push((hi.clone(), abs(&hi)));

        let mut merged: Vec<(Q, Q)> = Vec::with_capacity(full.len());
        for p in full {
            while merged.len() >= 2 {
                let a = &merged[merged.len() - 2];
                let b = &merged[merged.len() - 1];
                let s1 = (&b.1 - &a.1) / (&b.0 - &a.0);
                let s2 = (&p.1 - &b.1) / (&p.0 - &b.0);
                if s1 == s2 {
                    merged.pop();
                } else {
                    break;
                }
            }
            merged.push(p);
        }
        let inner: Vec<(Q, Q)> = merged[1..merged.len() - 1].to_vec();
        if inner.len() == 1 && inner[0].0.is_zero() && inner[0].1.is_zero() {
            return Ok(Profile::flat());
        }
        Ok(Profile { points: inner })
    }

    /// The empty diagram, `ω(z) = |z|`.
    pub fn flat() -> Self {
        Profile { points: Vec::new() }
    }

    pub fn breakpoints(&self) -> &[(Q, Q)] {
        &self.points
    }

    /// Staircase profile of an ordinary diagram; support `[-ℓ(λ), λ_1]`.
    pub fn of_partition(lambda: &Partition) -> Self {
        if lambda.is_empty() {
            return Profile::flat();
        }
        // outer corners of the French boundary, walking from (0, ℓ) to (λ_1, 0)
        let rows = lambda.len();
        let mut french: Vec<(usize, usize)> = vec![(0, rows)];
        for j in (0..rows).rev() {
            let len = lambda.part(j);
            french.push((len, j + 1));
            french.push((len, j));
        }
        let points = french
            .into_iter()
            .map(|(x, y)| (q(x as i64 - y as i64), q((x + y) as i64)))
            .fold(Vec::<(Q, Q)>::new(), |mut acc, p| {
                if acc.last() != Some(&p) {
                    acc.push(p);
                }
                acc
            });
        Profile::new(points).expect("staircase profiles are valid")
    }

    /// The triangle `x/p + y/q <= 1` in French coordinates.
    pub fn triangle(p: Q, qq: Q) -> Result<Self> {
        if !p.is_positive() || !qq.is_positive() {
            return Err(Error::InvalidProfile("triangle sides must be positive".into()));
        }
        Profile::new(vec![(-qq.clone(), qq), (p.clone(), p)])
    }

    /// `ω̃(s) = t ω(s / t)`.
    pub fn dilate(&self, t: &Q) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        Ok(Profile {
            points: self.points.iter().map(|(z, w)| (z * t, w * t)).collect(),
        })
    }

    pub fn is_flat(&self) -> bool {
        self.points.is_empty()
    }

    /// Closed support `[z_first, z_last]`, `None` for the empty diagram.
    pub fn support(&self) -> Option<(Q, Q)> {
        Some((self.points.first()?.0.clone(), self.points.last()?.0.clone()))
    }

    pub fn eval(&self, z: &Q) -> Q {
        match self.segment_at(z) {
            Some(i) => {
                let (a, b) = (&self.points[i], &self.points[i + 1]);
                &a.1 + (&b.1 - &a.1) * (z - &a.0) / (&b.0 - &a.0)
            }
            None => abs(z),
        }
    }

    fn segment_at(&self, z: &Q) -> Option<usize> {
        let (lo, hi) = self.support()?;
        if z < &lo || z > &hi {
            return None;
        }
        let i = self.points[1..].partition_point(|p| &p.0 < z);
        Some(i.min(self.points.len() - 2))
    }

    /// Slope of the affine piece containing `z`; at a breakpoint the piece to its right.
    pub fn slope_at(&self, z: &Q) -> Q {
        match self.support() {
            Some((lo, hi)) if z >= &lo && z < &hi => {
                let i = self.points[1..].partition_point(|p| &p.0 <= z);
                let (a, b) = (&self.points[i], &self.points[i + 1]);
                (&b.1 - &a.1) / (&b.0 - &a.0)
            }
            _ => {
                if z.is_negative() {
                    -Q::one()
                } else {
                    Q::one()
                }
            }
        }
    }

    /// Slopes of all pieces of the support.
    pub fn slopes(&self) -> Vec<Q> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// All slopes on the support lie strictly inside (-1, 1).
    pub fn is_strict(&self) -> bool {
        self.slopes().iter().all(|s| s.abs() < Q::one())
    }

    pub fn check_strict(&self) -> Result<()> {
        match self.slopes().into_iter().find(|s| s.abs() >= Q::one()) {
            Some(s) => Err(Error::NonStrictProfile(format_q(&s))),
            None => Ok(()),
        }
    }

    /// French `x` of the profile point with content `z`.
    pub fn x_of(&self, z: &Q) -> Q {
        (self.eval(z) + z) / q(2)
    }

    /// French `y` of the profile point with content `z`.
    pub fn y_of(&self, z: &Q) -> Q {
        (self.eval(z) - z) / q(2)
    }

    /// Lebesgue area in French coordinates, `½∫(ω(z) − |z|) dz`.
    pub fn area(&self) -> Q {
        crate::functionals::s_k_profile(self, 2).expect("k = 2 is valid")
    }

    /// Boundary polyline in French coordinates from `(0, y_max)` to `(x_max, 0)`.
    pub fn french_boundary(&self) -> Vec<(Q, Q)> {
        self.points
            .iter()
            .map(|(z, w)| ((w + z) / q(2), (w - z) / q(2)))
            .collect()
    }

    pub fn x_max(&self) -> Q {
        self.support().map(|(_, hi)| hi).unwrap_or_else(Q::zero)
    }

    pub fn y_max(&self) -> Q {
        self.support().map(|(lo, _)| -lo).unwrap_or_else(Q::zero)
    }

    /// Column height `Y(x)` on `[0, x_max]`: `(x, y)` is in the diagram iff `y <= Y(x)`.
    pub fn column_height(&self) -> PiecewiseAffine {
        let pts = self.french_boundary();
        let segments = pts
            .windows(2)
            .filter(|w| w[0].0 < w[1].0)
            .map(|w| AffineSegment {
                u0: w[0].0.clone(),
                u1: w[1].0.clone(),
                v0: w[0].1.clone(),
                v1: w[1].1.clone(),
            })
            .collect();
        PiecewiseAffine { segments }
    }

    /// Row length `X(y)` on `[0, y_max]`: `(x, y)` is in the diagram iff `x <= X(y)`.
    pub fn row_length(&self) -> PiecewiseAffine {
        let pts = self.french_boundary();
        let segments = pts
            .windows(2)
            .rev()
            .filter(|w| w[1].1 < w[0].1)
            .map(|w| AffineSegment {
                u0: w[1].1.clone(),
                u1: w[0].1.clone(),
                v0: w[1].0.clone(),
                v1: w[0].0.clone(),
            })
            .collect();
        PiecewiseAffine { segments }
    }

    /// Closed-region membership in French coordinates.
    pub fn contains_french(&self, x: &Q, y: &Q) -> bool {
        if x.is_negative() || y.is_negative() {
            return false;
        }
        let z = x - y;
        let t = x + y;
        t <= self.eval(&z)
    }

    /// Floating-point evaluation for the Monte Carlo oracle.
    pub fn to_f64_points(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|(z, w)| (crate::rational::to_f64(z), crate::rational::to_f64(w)))
            .collect()
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    /// Breakpoints as `z,ω;z,ω;...`, e.g. `-2,2;2,2`; the empty string is the flat profile.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Profile::flat());
        }
        let points = s
            .split(';')
            .map(|pair| match pair.split_once(',') {
                Some((z, w)) => Ok((parse_q(z.trim())?, parse_q(w.trim())?)),
                None => Err(Error::InvalidProfile(format!("breakpoint {pair:?} is not `z,w`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(points)
    }
}

/// Wire form: `{"breakpoints": [["-3/1","3/1"], ...]}`.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ProfileJson {
    pub breakpoints: Vec<[String; 2]>,
}

impl From<&Profile> for ProfileJson {
    fn from(p: &Profile) -> Self {
        ProfileJson {
            breakpoints: p
                .points
                .iter()
                .map(|(z, w)| [format_q(z), format_q(w)])
                .collect(),
        }
    }
}

impl TryFrom<ProfileJson> for Profile {
    type Error = Error;

    fn try_from(j: ProfileJson) -> Result<Profile> {
        let points = j
            .breakpoints
            .iter()
            .map(|[z, w]| Ok((parse_q(z)?, parse_q(w)?)))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn lam(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn staircase_of_431() {
        let w = Profile::of_partition(&lam("4,3,1"));
        assert_eq!(w.support(), Some((q(-3), q(4))));
        assert_eq!(w.eval(&q(0)), q(4));
        assert_eq!(w.eval(&q(-3)), q(3));
        assert_eq!(w.eval(&q(10)), q(10));
        assert!(w.slopes().iter().all(|s| s.abs() == Q::one()));
        assert_eq!(w.area(), q(8));
    }

    #[test]
    fn inline_form() {
        let w: Profile = "-2,2; 2,2".parse().unwrap();
        assert_eq!(w, Profile::triangle(q(2), q(2)).unwrap());
        assert!("".parse::<Profile>().unwrap().is_flat());
        assert!("-2,2;2".parse::<Profile>().is_err());
        assert!("-2,1;2,2".parse::<Profile>().is_err());
    }

    #[test]
    fn single_box_profile() {
        let w = Profile::of_partition(&lam("1"));
        assert_eq!(w.breakpoints(), &[(q(-1), q(1)), (q(0), q(2)), (q(1), q(1))]);
        assert_eq!(w.eval(&qf(1, 2)), qf(3, 2));
        assert_eq!(w.eval(&q(-5)), q(5));
    }

    #[test]
    fn empty_partition_is_flat() {
        let w = Profile::of_partition(&Partition::empty());
        assert!(w.is_flat());
        assert_eq!(w.eval(&q(-2)), q(2));
        assert_eq!(w.area(), q(0));
        assert_eq!(Profile::new(vec![(q(-1), q(1)), (q(0), q(0)), (q(1), q(1))]).unwrap(), Profile::flat());
    }

    #[test]
    fn normalization_merges_collinear_and_trims() {
        let noisy = Profile::new(vec![
            (q(-3), q(3)),
            (q(-2), q(2)),
            (q(-1), q(1)),
            (q(0), q(2)),
            (qf(1, 2), qf(3, 2)),
            (q(1), q(1)),
            (q(2), q(2)),
        ])
        .unwrap();
        assert_eq!(noisy, Profile::of_partition(&lam("1")));
    }

    #[test]
    fn rejects_invalid_profiles() {
        assert!(Profile::new(vec![(q(-1), q(1)), (q(0), q(3)), (q(1), q(1))]).is_err());
        assert!(Profile::new(vec![(q(-1), q(2)), (q(1), q(1))]).is_err());
        assert!(Profile::new(vec![(q(1), q(1)), (q(0), q(0))]).is_err());
    }

    #[test]
    fn dilation() {
        let one = Profile::of_partition(&lam("1"));
        assert_eq!(one.dilate(&q(2)).unwrap(), Profile::of_partition(&lam("2,2")));
        assert_eq!(one.dilate(&q(1)).unwrap(), one);
        assert_eq!(
            Profile::of_partition(&lam("2,1")).dilate(&q(3)).unwrap(),
            Profile::of_partition(&lam("6,6,6,3,3,3"))
        );
        assert!(one.dilate(&q(0)).is_err());
        assert!(one.dilate(&q(-1)).is_err());
        let t = qf(3, 2);
        assert_eq!(one.dilate(&t).unwrap().area(), &t * &t);
    }

    #[test]
    fn triangle_geometry() {
        let tri = Profile::triangle(q(2), q(2)).unwrap();
        assert!(tri.is_strict());
        assert_eq!(tri.area(), q(2));
        assert_eq!(tri.x_of(&qf(1, 2)), qf(5, 4));
        assert_eq!(tri.y_of(&qf(1, 2)), qf(3, 4));
        assert!(tri.contains_french(&q(1), &q(1)));
        assert!(!tri.contains_french(&q(1), &qf(11, 10)));
        let y = tri.column_height();
        assert_eq!(y.eval(&qf(1, 2)), Some(qf(3, 2)));
        let x = tri.row_length();
        assert_eq!(x.eval(&qf(1, 2)), Some(qf(3, 2)));
        assert!(!Profile::of_partition(&lam("2,1")).is_strict());
    }

    #[test]
    fn staircase_boundary_functions() {
        let w = Profile::of_partition(&lam("4,3,1"));
        let y = w.column_height();
        assert_eq!(y.eval(&qf(1, 2)), Some(q(3)));
        assert_eq!(y.eval(&qf(7, 2)), Some(q(1)));
        let x = w.row_length();
        assert_eq!(x.eval(&qf(1, 2)), Some(q(4)));
        assert_eq!(x.eval(&qf(5, 2)), Some(q(1)));
        assert_eq!(x.upper(), q(3));
    }

    #[test]
    fn json_round_trip() {
        let w = Profile::of_partition(&lam("4,3,1"));
        let j = ProfileJson::from(&w);
        assert_eq!(j.breakpoints[0], ["-3/1".to_string(), "3/1".to_string()]);
        let text = serde_json::to_string(&j).unwrap();
        let back: ProfileJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Profile::try_from(back).unwrap(), w);
    }
}
