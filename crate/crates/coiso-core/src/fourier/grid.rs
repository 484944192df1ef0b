//! Uniform radial sample grid.

use crate::error::{Error, Result};

/// Uniform grid on `[r_min, r_max]` with `len` nodes (endpoints included).
///
/// `r = 0` is deliberately excluded: the homological equations are solved on
/// the open annulus, and the center-circle matching enters only through
/// boundary assertions at the innermost node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub len: usize,
}

impl RadialGrid {
    /// Default grid: 128 nodes on `[0.05, 0.70]`, covering the chart-1
    /// annulus with the poles `r = 0` and `r = 1/√2` excluded.
    pub const DEFAULT: RadialGrid = RadialGrid {
        r_min: 0.05,
        r_max: 0.70,
        len: 128,
    };

    pub fn new(r_min: f64, r_max: f64, len: usize) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::argument(format!(
                "radial grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if len < 8 {
            return Err(Error::argument(format!(
                "radial grid needs at least 8 nodes, got {len}"
            )));
        }
        Ok(RadialGrid { r_min, r_max, len })
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.len - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.r_min + self.step() * i as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.node(i))
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min - 1e-12 && r <= self.r_max + 1e-12
    }

    /// Index pair and interpolation weight for a point inside the grid.
    pub fn bracket(&self, r: f64) -> Result<(usize, usize, f64)> {
        if !self.contains(r) {
            return Err(Error::argument(format!(
                "r = {r} outside radial grid [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        let t = ((r - self.r_min) / self.step()).clamp(0.0, (self.len - 1) as f64);
        let i = (t.floor() as usize).min(self.len - 2);
        Ok((i, i + 1, t - i as f64))
    }

    pub fn compatible(&self, other: &RadialGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// Second-order finite-difference derivative of nodal values.
    pub fn differentiate<T>(&self, v: &[T]) -> Vec<T>
    where
        T: Copy
            + std::ops::Sub<Output = T>
            + std::ops::Add<Output = T>
            + std::ops::Mul<f64, Output = T>,
    {
        let n = v.len();
        assert_eq!(n, self.len, "value vector does not match grid");
        let h = self.step();
        let mut out = Vec::with_capacity(n);
        out.push((v[1] * 4.0 - v[2] - v[0] * 3.0) * (0.5 / h));
        for i in 1..n - 1 {
            out.push((v[i + 1] - v[i - 1]) * (0.5 / h));
        }
        out.push((v[n - 2] * (-4.0) + v[n - 3] + v[n - 1] * 3.0) * (0.5 / h));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = RadialGrid::DEFAULT;
        assert_eq!(g.len, 128);
        assert!((g.node(0) - 0.05).abs() < 1e-15);
        assert!((g.node(127) - 0.70).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(RadialGrid::new(0.0, 1.0, 16).is_err());
        assert!(RadialGrid::new(0.1, 0.1, 16).is_err());
        assert!(RadialGrid::new(0.1, 0.5, 4).is_err());
    }

    #[test]
    fn finite_differences_quadratic() {
        // d/dr (r^2) = 2r is reproduced exactly by a 2nd-order stencil.
        let g = RadialGrid::new(0.1, 0.6, 64).unwrap();
        let v: Vec<f64> = g.nodes().map(|r| r * r).collect();
        let d = g.differentiate(&v);
        for (i, r) in g.nodes().enumerate() {
            assert!((d[i] - 2.0 * r).abs() < 1e-10, "node {i}");
        }
    }

    #[test]
    fn bracket_interpolation() {
        let g = RadialGrid::new(0.1, 0.6, 11).unwrap();
        let (i, j, w) = g.bracket(0.125).unwrap();
        assert_eq!((i, j), (0, 1));
        assert!((w - 0.5).abs() < 1e-12);
        assert!(g.bracket(0.05).is_err());
    }
}
