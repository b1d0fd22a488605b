//! Board geometry: integer lattices under the l-infinity (Chebyshev) metric.
//!
//! Three board families are supported. `Grid` is the solid box `[1,n]^d`.
//! `Torus` is the same box with every axis wrapped modulo `n`. `Tunnel` is
//! `Z x [1,n]^d`: the first axis is unbounded and signed, the remaining `d`
//! axes are bounded. Bounded axes are 1-based throughout.
//!
//! A step of speed `s` moves every axis by at most `s`, so the unit ball is
//! the (2s+1)^axes box intersected with the board. Graph distance on any of
//! these boards coincides with the Chebyshev metric (wrapped per-axis on the
//! torus); `tests` pin that down against a BFS oracle.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;

use crate::error::{Error, Result};

/// A lattice point. Axis count is the board's `axes()`, not `d` (a tunnel in
/// `d` bounded dimensions has `d + 1` axes).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coord(pub SmallVec<[i64; 4]>);

/// Convenience constructor: `coord![1, 2]`.
#[macro_export]
macro_rules! coord {
    ($($x:expr),* $(,)?) => {
        $crate::board::Coord(smallvec::smallvec![$($x as i64),*])
    };
}

impl Coord {
    pub fn new(xs: impl Into<SmallVec<[i64; 4]>>) -> Self {
        Coord(xs.into())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    /// Unwrapped Chebyshev distance (no board wrapping).
    pub fn linf(&self, other: &Coord) -> Result<i64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0))
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::ops::Index<usize> for Coord {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for Coord {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}

impl From<Vec<i64>> for Coord {
    fn from(v: Vec<i64>) -> Self {
        Coord(SmallVec::from_vec(v))
    }
}

impl From<&[i64]> for Coord {
    fn from(v: &[i64]) -> Self {
        Coord(SmallVec::from_slice(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoardKind {
    /// `[1,n]^d`.
    Grid { n: i64, d: usize },
    /// `[1,n]^d` with every axis wrapped modulo n.
    Torus { n: i64, d: usize },
    /// `Z x [1,n]^d`: axis 0 unbounded and signed.
    Tunnel { n: i64, d: usize },
}

impl BoardKind {
    pub fn validate(&self) -> Result<()> {
        let (n, d) = match *self {
            BoardKind::Grid { n, d } | BoardKind::Torus { n, d } | BoardKind::Tunnel { n, d } => {
                (n, d)
            }
        };
        if n < 1 {
            return Err(Error::config(format!("board side n={n} must be >= 1")));
        }
        if d < 1 {
            return Err(Error::config(format!("board dimension d={d} must be >= 1")));
        }
        Ok(())
    }

    /// Side length of the bounded axes.
    pub fn n(&self) -> i64 {
        match *self {
            BoardKind::Grid { n, .. } | BoardKind::Torus { n, .. } | BoardKind::Tunnel { n, .. } => n,
        }
    }

    /// Number of coordinate axes (a tunnel has one more than its `d`).
    pub fn axes(&self) -> usize {
        match *self {
            BoardKind::Grid { d, .. } | BoardKind::Torus { d, .. } => d,
            BoardKind::Tunnel { d, .. } => d + 1,
        }
    }

    /// Inclusive bounds of an axis, or `None` if the axis is unbounded.
    pub fn axis_bounds(&self, axis: usize) -> Option<(i64, i64)> {
        match *self {
            BoardKind::Grid { n, .. } | BoardKind::Torus { n, .. } => Some((1, n)),
            BoardKind::Tunnel { n, .. } => {
                if axis == 0 {
                    None
                } else {
                    Some((1, n))
                }
            }
        }
    }

    pub fn is_wrapped(&self) -> bool {
        matches!(self, BoardKind::Torus { .. })
    }

    pub fn contains(&self, p: &Coord) -> bool {
        if p.dim() != self.axes() {
            return false;
        }
        (0..self.axes()).all(|a| match self.axis_bounds(a) {
            Some((lo, hi)) => p[a] >= lo && p[a] <= hi,
            None => true,
        })
    }

    fn check_dim(&self, p: &Coord) -> Result<()> {
        if p.dim() != self.axes() {
            return Err(Error::DimensionMismatch {
                expected: self.axes(),
                got: p.dim(),
            });
        }
        Ok(())
    }

    /// Per-axis distance, wrapped on the torus.
    pub fn axis_dist(&self, a: i64, b: i64) -> i64 {
        match *self {
            BoardKind::Torus { n, .. } => {
                let diff = (a - b).rem_euclid(n);
                diff.min(n - diff)
            }
            _ => (a - b).abs(),
        }
    }

    /// Chebyshev distance on this board.
    pub fn chebyshev(&self, p: &Coord, q: &Coord) -> Result<i64> {
        self.check_dim(p)?;
        self.check_dim(q)?;
        Ok((0..self.axes())
            .map(|a| self.axis_dist(p[a], q[a]))
            .max()
            .unwrap_or(0))
    }

    /// Normalize a coordinate onto the board: clamp bounded axes, wrap torus
    /// axes. Off-board prescriptions from strategies go through this.
    pub fn clamp(&self, p: &Coord) -> Coord {
        let mut out = p.clone();
        for a in 0..self.axes().min(p.dim()) {
            match *self {
                BoardKind::Torus { n, .. } => out[a] = (p[a] - 1).rem_euclid(n) + 1,
                _ => {
                    if let Some((lo, hi)) = self.axis_bounds(a) {
                        out[a] = p[a].clamp(lo, hi);
                    }
                }
            }
        }
        out
    }

    /// All board points within Chebyshev distance `s` of `p`, in sorted
    /// lexicographic order. This is the legal move set for speed `s`.
    pub fn ball(&self, p: &Coord, s: i64) -> Result<Vec<Coord>> {
        self.check_dim(p)?;
        if !self.contains(p) {
            return Err(Error::OffBoard {
                coord: format!("{p}"),
            });
        }
        let mut per_axis: Vec<Vec<i64>> = Vec::with_capacity(self.axes());
        for a in 0..self.axes() {
            let mut vals: Vec<i64> = match *self {
                BoardKind::Torus { n, .. } => {
                    let mut v: Vec<i64> =
                        (-s..=s).map(|dx| (p[a] + dx - 1).rem_euclid(n) + 1).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                }
                _ => match self.axis_bounds(a) {
                    Some((lo, hi)) => ((p[a] - s).max(lo)..=(p[a] + s).min(hi)).collect(),
                    None => ((p[a] - s)..=(p[a] + s)).collect(),
                },
            };
            vals.shrink_to_fit();
            per_axis.push(vals);
        }
        let mut out = Vec::new();
        let mut cur = SmallVec::<[i64; 4]>::from_elem(0, self.axes());
        cartesian(&per_axis, 0, &mut cur, &mut out);
        Ok(out)
    }

    /// Center point used for automatic placements: `floor(n/2)+1` on bounded
    /// axes, 0 on the unbounded tunnel axis.
    pub fn center(&self) -> Coord {
        let n = self.n();
        let mid = n.div_euclid(2) + 1;
        let mut xs = SmallVec::<[i64; 4]>::new();
        for a in 0..self.axes() {
            xs.push(match self.axis_bounds(a) {
                Some(_) => mid,
                None => 0,
            });
        }
        Coord(xs)
    }

    /// Every cell of a bounded board, lexicographically sorted. Errors on
    /// tunnels (unbounded axis).
    pub fn cells(&self) -> Result<Vec<Coord>> {
        if matches!(self, BoardKind::Tunnel { .. }) {
            return Err(Error::Unsupported(
                "cell enumeration on an unbounded board".into(),
            ));
        }
        let n = self.n();
        let axes = self.axes();
        let per_axis: Vec<Vec<i64>> = (0..axes).map(|_| (1..=n).collect()).collect();
        let mut out = Vec::new();
        let mut cur = SmallVec::<[i64; 4]>::from_elem(0, axes);
        cartesian(&per_axis, 0, &mut cur, &mut out);
        Ok(out)
    }

    pub fn cell_count(&self) -> Result<u64> {
        if matches!(self, BoardKind::Tunnel { .. }) {
            return Err(Error::Unsupported(
                "cell count on an unbounded board".into(),
            ));
        }
        Ok((self.n() as u64).pow(self.axes() as u32))
    }
}

fn cartesian(per_axis: &[Vec<i64>], axis: usize, cur: &mut SmallVec<[i64; 4]>, out: &mut Vec<Coord>) {
    if axis == per_axis.len() {
        out.push(Coord(cur.clone()));
        return;
    }
    for &v in &per_axis[axis] {
        cur[axis] = v;
        cartesian(per_axis, axis + 1, cur, out);
    }
}

/// Axis-aligned box with inclusive corners, `lo <= hi` on every axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    lo: Coord,
    hi: Coord,
}

impl Rect {
    pub fn new(lo: Coord, hi: Coord) -> Result<Rect> {
        if lo.dim() != hi.dim() {
            return Err(Error::DimensionMismatch {
                expected: lo.dim(),
                got: hi.dim(),
            });
        }
        for a in 0..lo.dim() {
            if lo[a] > hi[a] {
                return Err(Error::EmptyRect {
                    axis: a,
                    lo: lo[a],
                    hi: hi[a],
                });
            }
        }
        Ok(Rect { lo, hi })
    }

    /// Square with the given lower corner and side length (in cells).
    pub fn square(corner: Coord, side: i64) -> Result<Rect> {
        if side < 1 {
            return Err(Error::invalid(format!("square side {side} must be >= 1")));
        }
        let hi = Coord(corner.0.iter().map(|&x| x + side - 1).collect());
        Rect::new(corner, hi)
    }

    pub fn lo(&self) -> &Coord {
        &self.lo
    }

    pub fn hi(&self) -> &Coord {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    /// Cells along an axis.
    pub fn side(&self, axis: usize) -> i64 {
        self.hi[axis] - self.lo[axis] + 1
    }

    pub fn is_square(&self) -> bool {
        (1..self.dim()).all(|a| self.side(a) == self.side(0))
    }

    pub fn contains(&self, p: &Coord) -> bool {
        p.dim() == self.dim() && (0..self.dim()).all(|a| p[a] >= self.lo[a] && p[a] <= self.hi[a])
    }

    /// Closest point of the rect to `p` (independent per-axis clamp). For a
    /// box this is simultaneously the Chebyshev- and Euclidean-closest point,
    /// and it is 1-Lipschitz: moving `p` by at most `s` moves the projection
    /// by at most `s`.
    pub fn project(&self, p: &Coord) -> Result<Coord> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        let mut out = p.clone();
        for a in 0..self.dim() {
            out[a] = p[a].clamp(self.lo[a], self.hi[a]);
        }
        Ok(out)
    }

    pub fn cell_count(&self) -> i64 {
        (0..self.dim()).map(|a| self.side(a)).product()
    }
}

/// Reflect the listed axes of `p` in the box `[1,n]`: `x -> n + 1 - x`.
/// An involution; fixes the midline column when n is odd.
pub fn reflect(n: i64, p: &Coord, axes: &[usize]) -> Coord {
    let mut out = p.clone();
    for &a in axes {
        if a < out.dim() {
            out[a] = n + 1 - p[a];
        }
    }
    out
}
