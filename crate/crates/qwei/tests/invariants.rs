//! Property tests for the structural invariants of the support layers:
//! grids and quadrature, weight construction, the smooth cutoff
//! profiles, CSV serialization, and configuration round-trips.

use proptest::prelude::*;

use qwei::grid::{trapezoid, trapezoid_fn, Grid1D};
use qwei::run::{read_csv, sanitize_id, write_csv};
use qwei::weights::{smooth_step, transform_at, windowed_gaussian};

proptest! {
    /// `covering` keeps both endpoints exactly representable and never
    /// exceeds the requested spacing.
    #[test]
    fn covering_respects_bounds(
        lo in -50.0f64..50.0,
        span in 0.1f64..100.0,
        max_step in 0.01f64..5.0,
    ) {
        let hi = lo + span;
        let g = Grid1D::covering(lo, hi, max_step).unwrap();
        prop_assert_eq!(g.lo, lo);
        prop_assert!((g.hi() - hi).abs() <= 1e-12 * (1.0 + hi.abs()));
        prop_assert!(g.step <= max_step * (1.0 + 1e-12));
        prop_assert!(g.n >= 2);
    }

    /// The trapezoid rule is exact on affine integrands.
    #[test]
    fn trapezoid_exact_on_affine(
        lo in -20.0f64..20.0,
        span in 0.5f64..40.0,
        max_step in 0.05f64..2.0,
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let hi = lo + span;
        let g = Grid1D::covering(lo, hi, max_step).unwrap();
        let got = trapezoid_fn(&g, |x| a * x + b);
        let exact = 0.5 * a * (hi * hi - lo * lo) + b * (hi - lo);
        prop_assert!((got - exact).abs() <= 1e-10 * (1.0 + exact.abs()));
    }

    /// Quadrature weights sum to the interval length.
    #[test]
    fn quadrature_weights_partition_interval(
        span in 0.5f64..30.0,
        max_step in 0.05f64..1.0,
    ) {
        let g = Grid1D::covering(0.0, span, max_step).unwrap();
        let total: f64 = (0..g.n).map(|i| g.weight(i)).sum();
        prop_assert!((total - span).abs() <= 1e-10 * (1.0 + span));
    }

    /// The smoothstep profile is monotone and pinned at the endpoints.
    #[test]
    fn smooth_step_monotone(t in 0.0f64..1.0, dt in 0.0f64..1.0) {
        prop_assert_eq!(smooth_step(0.0), 0.0);
        prop_assert_eq!(smooth_step(1.0), 1.0);
        let u = (t + dt).min(1.0);
        prop_assert!(smooth_step(u) >= smooth_step(t));
    }

    /// A windowed Gaussian weight has a non-negative density f = g² that
    /// vanishes at the grid edges, and its λ = 0 transform equals the
    /// plain quadrature of g.
    #[test]
    fn windowed_gaussian_weight_shape(
        center in -2.0f64..2.0,
        width in 0.3f64..1.5,
        radius_factor in 3.0f64..8.0,
    ) {
        let radius = radius_factor * width;
        let w = windowed_gaussian(center, width, radius, 1.0 / 32.0).unwrap();
        prop_assert!(w.f.iter().all(|&v| v >= 0.0));
        prop_assert_eq!(w.f[0], 0.0);
        prop_assert_eq!(*w.f.last().unwrap(), 0.0);
        let mass = trapezoid(&w.tau_grid, &w.g);
        prop_assert!(mass > 0.0);
        let at_zero = transform_at(&w.tau_grid, &w.g, 0.0);
        prop_assert!((at_zero.re - mass).abs() <= 1e-12 * (1.0 + mass));
        prop_assert!(at_zero.im.abs() <= 1e-12 * (1.0 + mass));
    }

    /// CSV rows round-trip bit-exactly through the writer/reader pair.
    #[test]
    fn csv_round_trip_is_exact(
        rows in proptest::collection::vec(
            proptest::collection::vec(-1e12f64..1e12, 3),
            1..20,
        ),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(&path, &["a", "b", "c"], &rows).unwrap();
        let (header, back) = read_csv(&path).unwrap();
        prop_assert_eq!(header, vec!["a".to_string(), "b".into(), "c".into()]);
        prop_assert_eq!(back, rows);
    }

    /// Sanitized state identifiers are filesystem-safe.
    #[test]
    fn sanitize_id_is_safe(id in ".*") {
        let s = sanitize_id(&id);
        prop_assert!(s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_'));
        prop_assert_eq!(s.chars().count(), id.chars().count());
    }
}
