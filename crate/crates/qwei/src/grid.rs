//! Uniform 1-D grids and trapezoidal quadrature.
//!
//! All quadrature in the crate is the trapezoidal rule on uniform grids;
//! integrands are smooth and rapidly decaying, where the trapezoid rule
//! converges superalgebraically. Grid points are generated as
//! `lo + i·step` so two grids built from equal parameters are bitwise
//! identical.

use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};

/// A uniform grid `lo, lo+step, …, lo+(n-1)·step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub lo: f64,
    pub step: f64,
    pub n: usize,
}

impl Grid1D {
    /// Grid covering `[lo, hi]` with spacing at most `max_step`, endpoints
    /// included exactly.
    pub fn covering(lo: f64, hi: f64, max_step: f64) -> Result<Self> {
        if !(hi > lo) || !(max_step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "covering({lo}, {hi}, {max_step})"
            )));
        }
        let n = ((hi - lo) / max_step).ceil() as usize + 1;
        Ok(Self {
            lo,
            step: (hi - lo) / (n - 1) as f64,
            n,
        })
    }

    pub fn hi(&self) -> f64 {
        self.lo + self.step * (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }

    /// Index of the grid point nearest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.lo) / self.step).round();
        (i.max(0.0) as usize).min(self.n - 1)
    }

    /// Trapezoid weight of the `i`-th point.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n - 1 {
            0.5 * self.step
        } else {
            self.step
        }
    }

    pub fn same_geometry(&self, other: &Self) -> bool {
        self.n == other.n
            && (self.lo - other.lo).abs() <= 1e-12 * (1.0 + self.lo.abs())
            && (self.step - other.step).abs() <= 1e-12 * self.step
    }
}

/// Trapezoidal integral of real samples on `grid`.
pub fn trapezoid(grid: &Grid1D, samples: &[f64]) -> f64 {
    assert_eq!(samples.len(), grid.n, "sample count must match grid");
    let mut acc = 0.0;
    for (i, &s) in samples.iter().enumerate() {
        acc += grid.weight(i) * s;
    }
    acc
}

/// Trapezoidal integral of complex samples on `grid`.
pub fn trapezoid_c(grid: &Grid1D, samples: &[C64]) -> C64 {
    assert_eq!(samples.len(), grid.n, "sample count must match grid");
    let mut acc = C64::new(0.0, 0.0);
    for (i, &s) in samples.iter().enumerate() {
        acc += s * grid.weight(i);
    }
    acc
}

/// Trapezoidal integral of `f` evaluated at every grid point.
pub fn trapezoid_fn(grid: &Grid1D, mut f: impl FnMut(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..grid.n {
        acc += grid.weight(i) * f(grid.point(i));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn covering_hits_endpoints() {
        let g = Grid1D::covering(-2.0, 3.0, 0.3).unwrap();
        assert_eq!(g.lo, -2.0);
        assert_relative_eq!(g.hi(), 3.0, max_relative = 1e-14);
        assert!(g.step <= 0.3);
    }

    #[test]
    fn trapezoid_exact_for_linear() {
        // The trapezoid rule integrates affine functions exactly.
        let g = Grid1D::covering(0.0, 2.0, 0.5).unwrap();
        let s: Vec<f64> = g.points().map(|x| 3.0 * x + 1.0).collect();
        assert_relative_eq!(trapezoid(&g, &s), 8.0, max_relative = 1e-14);
    }

    #[test]
    fn trapezoid_gaussian_superalgebraic() {
        // Smooth rapidly decaying integrand: near machine precision already
        // at moderate resolution.
        let g = Grid1D::covering(-10.0, 10.0, 0.125).unwrap();
        let v = trapezoid_fn(&g, |x| (-0.5 * x * x).exp());
        assert_relative_eq!(v, (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn rejects_degenerate_grid() {
        assert!(Grid1D::covering(1.0, 1.0, 0.1).is_err());
        assert!(Grid1D::covering(0.0, 1.0, 0.0).is_err());
    }
}
