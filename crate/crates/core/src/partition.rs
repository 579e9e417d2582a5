//! Integer partitions, i.e. ordinary Young diagrams in the French convention.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// A box of a Young diagram: `column`-th column, `row`-th row (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub column: usize,
    pub row: usize,
}

impl Cell {
    pub fn content(&self) -> i64 {
        self.column as i64 - self.row as i64
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts and drops zeros; never fails.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `j` (0-based); zero past the last row.
    pub fn part(&self, j: usize) -> usize {
        self.parts.get(j).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        let parts = (1..=width)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count())
            .collect();
        Partition { parts }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.column >= 1 && cell.row <= self.len() && cell.column <= self.parts[cell.row - 1]
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(j, &len)| (1..=len).map(move |i| Cell { column: i, row: j + 1 }))
    }

    /// Every row length multiplied by `alpha`.
    pub fn anisotropic_scale(&self, alpha: usize) -> Result<Partition> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("anisotropic scale must be >= 1".into()));
        }
        Ok(Partition {
            parts: self.parts.iter().map(|p| p * alpha).collect(),
        })
    }

    /// Every row repeated `alpha` times: the diagram stretched along the row index.
    pub fn stretch_rows(&self, alpha: usize) -> Result<Partition> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("stretch factor must be >= 1".into()));
        }
        Ok(Partition {
            parts: self
                .parts
                .iter()
                .flat_map(|&p| std::iter::repeat(p).take(alpha))
                .collect(),
        })
    }

    /// Geometric dilation by an integer factor `t` (the diagram scaled in both directions).
    pub fn dilate(&self, t: usize) -> Result<Partition> {
        self.anisotropic_scale(t)?.stretch_rows(t)
    }

    /// All partitions of `n` in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions with at most `n` boxes, by increasing size.
    pub fn all_up_to(n: usize) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all_of_size).collect()
    }

    /// The rectangle with `rows` rows of length `cols`.
    pub fn rectangle(rows: usize, cols: usize) -> Partition {
        if rows == 0 || cols == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![cols; rows] }
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated parts; `""` and `"0"` denote the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(format!("{s:?}: bad part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}
