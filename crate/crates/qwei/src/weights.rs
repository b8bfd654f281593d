//! Weight functions f = g² with smooth compact support, their Fourier
//! transforms, convolution, and the product-to-convolution kernel
//! identity used by the frequency-domain positivity argument.
//!
//! Transform convention (a hard contract for every downstream module):
//!
//! ```text
//! ĥ(λ) = ∫ e^{+iλτ} h(τ) dτ,    h(τ) = (2π)⁻¹ ∫ e^{−iλτ} ĥ(λ) dλ,
//! (h₁ ⋆ h₂)(λ) = ∫ dλ'/(2π) · h₁(λ−λ') h₂(λ').
//! ```
//!
//! A sign error in the exponent flips the frequency-quadrant structure of
//! the bound assembly, so the +i convention is pinned by tests.

use crate::error::{Error, Result, Warning};
use crate::grid::{trapezoid, Grid1D};
use crate::C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

/// Analytic descriptor of a built-in weight profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WindowedGaussianDescriptor {
    pub center: f64,
    pub width: f64,
    pub support_radius: f64,
}

/// A weight f = g² sampled on a uniform τ-grid; `g` is smooth, real and
/// compactly supported inside the grid, so f is automatically smooth,
/// nonnegative, compactly supported, and has a smooth square root.
#[derive(Debug, Clone)]
pub struct Weight {
    pub tau_grid: Grid1D,
    pub g: Vec<f64>,
    pub f: Vec<f64>,
    pub descriptor: Option<WindowedGaussianDescriptor>,
}

/// Complex samples of a transform on a uniform λ-grid.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    pub grid: Grid1D,
    pub values: Vec<C64>,
    /// Human-readable provenance of the samples.
    pub provenance: String,
}

/// Smooth step: 0 for t ≤ 0, 1 for t ≥ 1, C^∞ monotone in between
/// (built from s(x) = e^{−1/x}).
pub fn smooth_step(t: f64) -> f64 {
    fn s(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            (-1.0 / x).exp()
        }
    }
    let a = s(t);
    let b = s(1.0 - t);
    if a == 0.0 && b == 0.0 {
        // unreachable for finite t, but keep the function total
        0.0
    } else {
        a / (a + b)
    }
}

/// Mollifier equal to 1 on |x| ≤ half, 0 beyond full, smooth in between.
pub fn smooth_bump(x: f64, half: f64, full: f64) -> f64 {
    let ax = x.abs();
    if ax <= half {
        1.0
    } else if ax >= full {
        0.0
    } else {
        smooth_step((full - ax) / (full - half))
    }
}

impl Weight {
    /// Builds a weight directly from g-samples. Endpoint samples must
    /// vanish (compact support inside the grid).
    pub fn from_samples(tau_grid: Grid1D, g: Vec<f64>) -> Result<Self> {
        if g.len() != tau_grid.n {
            return Err(Error::InvalidGrid(format!(
                "{} samples on a {}-point grid",
                g.len(),
                tau_grid.n
            )));
        }
        if g[0] != 0.0 || g[tau_grid.n - 1] != 0.0 {
            return Err(Error::InvalidGrid(
                "g must vanish at the grid endpoints".into(),
            ));
        }
        let f = g.iter().map(|x| x * x).collect();
        Ok(Self {
            tau_grid,
            g,
            f,
            descriptor: None,
        })
    }

    /// ∫ f dτ.
    pub fn integral_f(&self) -> f64 {
        trapezoid(&self.tau_grid, &self.f)
    }

    /// ĝ at a single frequency.
    pub fn ghat_at(&self, lambda: f64) -> C64 {
        transform_at(&self.tau_grid, &self.g, lambda)
    }

    /// f̂ at a single frequency.
    pub fn fhat_at(&self, lambda: f64) -> C64 {
        transform_at(&self.tau_grid, &self.f, lambda)
    }

    /// ĝ sampled on a λ-grid.
    pub fn ghat_on(&self, grid: &Grid1D) -> SpectralFunction {
        fourier(&self.tau_grid, &self.g, grid, "ghat")
    }

    /// f̂ sampled on a λ-grid.
    pub fn fhat_on(&self, grid: &Grid1D) -> SpectralFunction {
        fourier(&self.tau_grid, &self.f, grid, "fhat")
    }
}

/// Builds g(τ) = exp(−(τ−center)²/(2 width²)) · bump(τ−center), with the
/// mollifier `bump` equal to 1 on |x| ≤ support_radius/2 and 0 beyond
/// support_radius; f = g². The truncated Gaussian tail at radius/2 must
/// be ≤ 1e−14 of the peak, which holds for support_radius ≥ 11·width.
pub fn windowed_gaussian(center: f64, width: f64, support_radius: f64, dtau: f64) -> Result<Weight> {
    if !(width > 0.0) || !(support_radius > 0.0) {
        return Err(Error::Config(format!(
            "windowed_gaussian width {width}, radius {support_radius}"
        )));
    }
    if dtau > width / 8.0 {
        return Err(Error::InvalidGrid(format!(
            "Δτ = {dtau} does not resolve width {width} (need Δτ ≤ width/8)"
        )));
    }
    let grid = Grid1D::covering(center - support_radius, center + support_radius, dtau)?;
    let g: Vec<f64> = grid
        .points()
        .map(|tau| {
            let x = tau - center;
            (-x * x / (2.0 * width * width)).exp()
                * smooth_bump(x, support_radius / 2.0, support_radius)
        })
        .collect();
    let f = g.iter().map(|x| x * x).collect();
    Ok(Weight {
        tau_grid: grid,
        g,
        f,
        descriptor: Some(WindowedGaussianDescriptor {
            center,
            width,
            support_radius,
        }),
    })
}

/// Plateau window for a worldline: exactly 1 on [i_lo, i_hi] (to machine
/// precision), exactly 0 at the grid ends, C^∞ in between with
/// erf-smoothed edges of width `edge_sigma`. The erf profile gives the
/// transform a Gaussian decay envelope; the final mollifier acts only
/// where the erf profile is below 1e−15, so it does not disturb the
/// envelope.
pub fn plateau_window(grid: &Grid1D, i_lo: f64, i_hi: f64, edge_sigma: f64) -> Result<Vec<f64>> {
    let s = edge_sigma;
    if !(s > 0.0) || !(i_hi > i_lo) {
        return Err(Error::Config(format!(
            "plateau_window I=[{i_lo},{i_hi}], edge_sigma={s}"
        )));
    }
    // Erf edge centers sit 8σ outside I so the plateau is 1−O(1e−16) on I;
    // the profile falls below 1e−15 of peak another 8σ further out, where
    // the hard-support mollifier ramps to zero over `ramp`.
    let alpha = i_lo - 8.0 * s;
    let beta = i_hi + 8.0 * s;
    let flat = 8.0 * s;
    let ramp = 4.0 * s;
    let need_lo = alpha - flat - ramp;
    let need_hi = beta + flat + ramp;
    if grid.lo > need_lo || grid.hi() < need_hi {
        return Err(Error::InsufficientRange(format!(
            "window needs τ-grid covering [{need_lo:.3}, {need_hi:.3}], got [{:.3}, {:.3}]",
            grid.lo,
            grid.hi()
        )));
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let center = 0.5 * (alpha + beta);
    let half_flat = beta + flat - center;
    Ok(grid
        .points()
        .map(|tau| {
            let plateau = 0.5 * (erf((tau - alpha) / (s * sqrt2)) - erf((tau - beta) / (s * sqrt2)));
            plateau * smooth_bump(tau - center, half_flat, half_flat + ramp)
        })
        .collect())
}

/// ĥ(λ) = ∫ e^{+iλτ} h(τ) dτ at a single frequency, by trapezoid.
pub fn transform_at(tau_grid: &Grid1D, samples: &[f64], lambda: f64) -> C64 {
    debug_assert_eq!(samples.len(), tau_grid.n);
    let mut acc = C64::new(0.0, 0.0);
    for (i, &h) in samples.iter().enumerate() {
        if h == 0.0 {
            continue;
        }
        let phase = lambda * tau_grid.point(i);
        acc += C64::new(phase.cos(), phase.sin()) * (tau_grid.weight(i) * h);
    }
    acc
}

/// Same as [`transform_at`] for complex samples.
pub fn transform_at_c(tau_grid: &Grid1D, samples: &[C64], lambda: f64) -> C64 {
    debug_assert_eq!(samples.len(), tau_grid.n);
    let mut acc = C64::new(0.0, 0.0);
    for (i, &h) in samples.iter().enumerate() {
        let phase = lambda * tau_grid.point(i);
        acc += C64::new(phase.cos(), phase.sin()) * h * tau_grid.weight(i);
    }
    acc
}

/// ĥ sampled over a λ-grid (parallel over grid points; each point is
/// independent so the result is order-independent).
pub fn fourier(tau_grid: &Grid1D, samples: &[f64], lambda_grid: &Grid1D, tag: &str) -> SpectralFunction {
    let values: Vec<C64> = (0..lambda_grid.n)
        .into_par_iter()
        .map(|i| transform_at(tau_grid, samples, lambda_grid.point(i)))
        .collect();
    SpectralFunction {
        grid: lambda_grid.clone(),
        values,
        provenance: tag.to_string(),
    }
}

/// Inverse transform h(τ) = (2π)⁻¹ ∫ e^{−iλτ} ĥ(λ) dλ at a single τ.
pub fn inverse_at(sf: &SpectralFunction, tau: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (i, &v) in sf.values.iter().enumerate() {
        let phase = -sf.grid.point(i) * tau;
        acc += C64::new(phase.cos(), phase.sin()) * v * sf.grid.weight(i);
    }
    acc / (2.0 * std::f64::consts::PI)
}

/// Discrete convolution (h₁ ⋆ h₂)(λ) = ∫ dλ'/(2π) h₁(λ−λ') h₂(λ') on the
/// grid of `h1`; grids must share their spacing, and λ−λ' must land on
/// h₁'s grid (values outside the grid are treated as zero, which is valid
/// for rapidly decaying transforms).
pub fn convolve(h1: &SpectralFunction, h2: &SpectralFunction) -> Result<SpectralFunction> {
    if (h1.grid.step - h2.grid.step).abs() > 1e-12 * h1.grid.step {
        return Err(Error::GridMismatch(format!(
            "convolution spacings {} vs {}",
            h1.grid.step, h2.grid.step
        )));
    }
    // λ_i − λ'_j has grid-1 index i − j − lo2/step; it must land on grid 1.
    let offset = h2.grid.lo / h1.grid.step;
    if (offset - offset.round()).abs() > 1e-9 {
        return Err(Error::GridMismatch(
            "convolution grids are not commensurate".into(),
        ));
    }
    let offset = offset.round() as i64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let values: Vec<C64> = (0..h1.grid.n as i64)
        .into_par_iter()
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..h2.grid.n as i64 {
                let idx = i - j - offset;
                if idx < 0 || idx >= h1.grid.n as i64 {
                    continue;
                }
                acc += h1.values[idx as usize]
                    * h2.values[j as usize]
                    * h2.grid.weight(j as usize);
            }
            acc / two_pi
        })
        .collect();
    Ok(SpectralFunction {
        grid: h1.grid.clone(),
        values,
        provenance: format!("({}) ⋆ ({})", h1.provenance, h2.provenance),
    })
}

/// Result of checking the product-to-convolution kernel identity
/// (λ+λ')·f̂(λ−λ') = ∫ dμ/π · μ ĝ(λ−μ) conj(ĝ(λ'−μ)) for f = g².
#[derive(Debug, Clone)]
pub struct KernelIdentityCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub warning: Option<Warning>,
}

/// Evaluates both sides of the kernel identity at (λ, λ') by independent
/// quadratures: the left side through f̂, the right side through a μ-grid
/// integral of shifted ĝ factors.
pub fn kernel_identity(g: &Weight, lambda: f64, lambda_p: f64) -> Result<KernelIdentityCheck> {
    let lhs = g.fhat_at(lambda - lambda_p) * C64::new(lambda + lambda_p, 0.0);

    // ĝ's numerical support: for the shipped profiles |ĝ| decays like a
    // Gaussian; find the radius where it falls below 1e−17 of its peak by
    // marching outward, then integrate μ over the union of both shifts.
    let ghat0 = g.ghat_at(0.0).norm();
    if ghat0 == 0.0 {
        return Ok(KernelIdentityCheck {
            lhs,
            rhs: C64::new(0.0, 0.0),
            warning: None,
        });
    }
    let mut support = 1.0;
    while g.ghat_at(support).norm() > 1e-17 * ghat0 && support < 1e4 {
        support += 1.0;
    }
    let mu_lo = lambda.min(lambda_p) - support;
    let mu_hi = lambda.max(lambda_p) + support;
    // The integrand inherits ĝ's smoothness; a spacing tied to ĝ's own
    // grid resolution keeps the trapezoid error below the 1e−6 target.
    let mu_grid = Grid1D::covering(mu_lo, mu_hi, 0.02)?;
    let g1 = shifted_ghat(g, lambda, &mu_grid);
    let g2 = shifted_ghat(g, lambda_p, &mu_grid);
    let mut rhs = C64::new(0.0, 0.0);
    for i in 0..mu_grid.n {
        let mu = mu_grid.point(i);
        rhs += g1[i] * g2[i].conj() * (mu * mu_grid.weight(i));
    }
    rhs /= std::f64::consts::PI;

    // Tail diagnostic: |ĝ|² mass outside the μ-grid relative to total.
    let edge = g.ghat_at(support).norm();
    let total = trapezoid(
        &mu_grid,
        &g1.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>(),
    );
    let relative_tail = if total > 0.0 {
        edge * edge * support / total
    } else {
        0.0
    };
    let warning = (relative_tail > 1e-12).then(|| Warning::Truncation {
        context: "kernel_identity μ-grid".into(),
        relative_tail,
    });

    Ok(KernelIdentityCheck { lhs, rhs, warning })
}

/// ĝ(shift − μ) on a uniform μ-grid.
fn shifted_ghat(g: &Weight, shift: f64, mu_grid: &Grid1D) -> Vec<C64> {
    (0..mu_grid.n)
        .into_par_iter()
        .map(|i| g.ghat_at(shift - mu_grid.point(i)))
        .collect()
}

/// Estimated relative mass of |ĥ|² outside the grid of `sf`, from a
/// Gaussian-envelope fit near the grid edges. Returns 0 for identically
/// small samples.
pub fn tail_mass_sq(sf: &SpectralFunction) -> f64 {
    let mags: Vec<f64> = sf.values.iter().map(|z| z.norm()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let total: f64 = trapezoid(
        &sf.grid,
        &mags.iter().map(|x| x * x).collect::<Vec<_>>(),
    );
    let mut tail = 0.0;
    for (edge_idx, inner_idx) in [(sf.grid.n - 1, sf.grid.n - 1 - sf.grid.n / 8), (0, sf.grid.n / 8)] {
        let e = mags[edge_idx].max(1e-300);
        let inner = mags[inner_idx].max(1e-300);
        let x_e = sf.grid.point(edge_idx).abs();
        let x_i = sf.grid.point(inner_idx).abs();
        if x_e <= x_i || inner <= e {
            // No decay visible: charge the whole edge value over one unit.
            tail += e * e;
            continue;
        }
        // Fit |ĥ(x)| ≈ A e^{−c x²} through the two samples, then bound
        // ∫_{x_e}^∞ |ĥ|² dx ≤ e² · ∫_0^∞ e^{−2c·2x_e·t} dt = e²/(4c·x_e).
        let c = (inner.ln() - e.ln()) / (x_e * x_e - x_i * x_i);
        if c <= 0.0 {
            tail += e * e;
        } else {
            tail += e * e / (4.0 * c * x_e);
        }
    }
    tail / total.max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn demo_weight() -> Weight {
        windowed_gaussian(0.0, 1.0, 12.0, 1.0 / 64.0).unwrap()
    }

    #[test]
    fn construction_contract() {
        let w = demo_weight();
        let i0 = w.tau_grid.nearest(0.0);
        assert_relative_eq!(w.f[i0], 1.0, max_relative = 1e-12);
        assert_eq!(w.f[0], 0.0);
        assert_eq!(*w.f.last().unwrap(), 0.0);
        for (f, g) in w.f.iter().zip(&w.g) {
            assert_eq!(*f, g * g);
        }
    }

    #[test]
    fn gaussian_mass() {
        // ∫f = ∫e^{−τ²} dτ = √π for radius ≫ width.
        let w = demo_weight();
        assert_relative_eq!(
            w.integral_f(),
            std::f64::consts::PI.sqrt(),
            max_relative = 1e-6
        );
    }

    #[test]
    fn gaussian_transform_closed_form() {
        // ĝ(λ) = w√(2π)·e^{−w²λ²/2} for the untruncated Gaussian.
        let w = demo_weight();
        for &l in &[0.0f64, 0.7, 1.9, -2.3, 4.1] {
            let expected = (2.0 * std::f64::consts::PI).sqrt() * (-l * l / 2.0).exp();
            let got = w.ghat_at(l);
            assert_relative_eq!(got.re, expected, max_relative = 1e-8);
            assert!(got.im.abs() <= 1e-12 * expected.max(1.0));
        }
    }

    #[test]
    fn zero_frequency_is_the_integral() {
        let w = demo_weight();
        assert_relative_eq!(w.fhat_at(0.0).re, w.integral_f(), max_relative = 1e-14);
    }

    #[test]
    fn conjugate_symmetry_for_real_input() {
        let w = demo_weight();
        let grid = Grid1D::covering(-6.0, 6.0, 0.05).unwrap();
        let sf = w.ghat_on(&grid);
        let peak = sf.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..grid.n {
            let j = grid.n - 1 - i; // symmetric grid: λ_j = −λ_i
            let res = (sf.values[i] - sf.values[j].conj()).norm();
            assert!(res <= 1e-10 * peak);
        }
    }

    #[test]
    fn roundtrip_inverse_transform() {
        let w = demo_weight();
        let grid = Grid1D::covering(-40.0, 40.0, 0.05).unwrap();
        let sf = w.ghat_on(&grid);
        let mut worst: f64 = 0.0;
        for i in (0..w.tau_grid.n).step_by(97) {
            let tau = w.tau_grid.point(i);
            let back = inverse_at(&sf, tau);
            worst = worst.max((back.re - w.g[i]).abs().max(back.im.abs()));
        }
        assert!(worst <= 1e-9, "roundtrip error {worst}");
    }

    #[test]
    fn convolution_identity_with_delta_approximant() {
        // A narrow normalized Gaussian with ∫δ dλ = 2π acts as the
        // identity under the (2π)⁻¹ convolution convention.
        let grid = Grid1D::covering(-30.0, 30.0, 0.01).unwrap();
        let w = demo_weight();
        let h = w.ghat_on(&grid);
        let mut dvals = vec![C64::new(0.0, 0.0); grid.n];
        let i0 = grid.nearest(0.0);
        dvals[i0] = C64::new(2.0 * std::f64::consts::PI / grid.step, 0.0);
        let delta = SpectralFunction {
            grid: grid.clone(),
            values: dvals,
            provenance: "delta".into(),
        };
        let conv = convolve(&h, &delta).unwrap();
        let peak = h.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 1..grid.n - 1 {
            assert!((conv.values[i] - h.values[i]).norm() <= 1e-6 * peak);
        }
    }

    #[test]
    fn convolution_of_gaussians_adds_variances() {
        // Under (h₁⋆h₂)(λ) = ∫dλ'/(2π) h₁h₂ with h_i = a_i e^{−λ²/(2v_i)}:
        // result = a₁a₂ √(v₁v₂/(v₁+v₂)) /√(2π) · e^{−λ²/(2(v₁+v₂))}.
        let grid = Grid1D::covering(-25.0, 25.0, 0.02).unwrap();
        let (v1, v2) = (1.5, 0.7);
        let mk = |v: f64| SpectralFunction {
            grid: grid.clone(),
            values: grid.points().map(|l| C64::new((-l * l / (2.0 * v)).exp(), 0.0)).collect(),
            provenance: "gauss".into(),
        };
        let conv = convolve(&mk(v1), &mk(v2)).unwrap();
        let amp = (v1 * v2 / (2.0 * std::f64::consts::PI * (v1 + v2))).sqrt();
        let expect = |l: f64| amp * (-l * l / (2.0 * (v1 + v2))).exp();
        for &l in &[0.0, 0.8, -1.7] {
            let i = grid.nearest(l);
            assert_relative_eq!(conv.values[i].re, expect(grid.point(i)), max_relative = 1e-6);
        }
    }

    #[test]
    fn ghat_convolved_with_itself_gives_fhat() {
        // (ĝ⋆ĝ)(2ζ) = f̂(2ζ) for f = g².
        let w = demo_weight();
        let grid = Grid1D::covering(-30.0, 30.0, 0.01).unwrap();
        let gh = w.ghat_on(&grid);
        let conv = convolve(&gh, &gh).unwrap();
        for &zeta in &[0.0, 0.35, -0.6, 1.1] {
            let i = grid.nearest(2.0 * zeta);
            let fhat = w.fhat_at(grid.point(i));
            let diff = (conv.values[i] - fhat).norm();
            assert!(
                diff <= 1e-7 * (1.0 + fhat.norm()),
                "ζ={zeta}: diff {diff}"
            );
        }
    }

    #[test]
    fn kernel_identity_at_origin_and_antidiagonal() {
        let w = demo_weight();
        let chk = kernel_identity(&w, 0.0, 0.0).unwrap();
        assert!(chk.lhs.norm() <= 1e-14);
        assert!(chk.rhs.norm() <= 1e-8);
        let chk = kernel_identity(&w, 1.3, -1.3).unwrap();
        assert!(chk.lhs.norm() <= 1e-10);
        assert!(chk.rhs.norm() <= 1e-8);
    }

    #[test]
    fn kernel_identity_random_points() {
        use rand::{Rng, SeedableRng};
        let w = demo_weight();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let l = rng.gen_range(-5.0..5.0);
            let lp = rng.gen_range(-5.0..5.0);
            let chk = kernel_identity(&w, l, lp).unwrap();
            assert!(chk.warning.is_none());
            let err = (chk.lhs - chk.rhs).norm();
            assert!(
                err <= 1e-6 * (1.0 + chk.lhs.norm()),
                "({l},{lp}): lhs {} rhs {} err {err}",
                chk.lhs,
                chk.rhs
            );
        }
    }

    #[test]
    fn plateau_window_contract() {
        let grid = Grid1D::covering(-20.5, 20.5, 1.0 / 64.0).unwrap();
        let w = plateau_window(&grid, -8.25, 8.25, 0.6).unwrap();
        assert_eq!(w[0], 0.0);
        assert_eq!(*w.last().unwrap(), 0.0);
        for i in 0..grid.n {
            let tau = grid.point(i);
            assert!(w[i] >= 0.0 && w[i] <= 1.0 + 1e-15);
            if tau.abs() <= 8.25 {
                assert!((w[i] - 1.0).abs() <= 1e-14, "w({tau}) = {}", w[i]);
            }
        }
    }

    #[test]
    fn plateau_window_transform_decays_fast() {
        // The erf-smoothed edges give ŵ a Gaussian decay envelope; by
        // λ ≈ 12 the transform is ~14 orders below its peak.
        let grid = Grid1D::covering(-20.5, 20.5, 1.0 / 64.0).unwrap();
        let w = plateau_window(&grid, -8.25, 8.25, 0.6).unwrap();
        let peak = transform_at(&grid, &w, 0.0).norm();
        assert!(transform_at(&grid, &w, 12.0).norm() <= 1e-12 * peak);
    }

    #[test]
    fn tail_mass_detects_gaussian_tails() {
        let w = demo_weight();
        let wide = w.ghat_on(&Grid1D::covering(-12.0, 12.0, 0.05).unwrap());
        assert!(tail_mass_sq(&wide) <= 1e-12);
        let narrow = w.ghat_on(&Grid1D::covering(-2.0, 2.0, 0.05).unwrap());
        assert!(tail_mass_sq(&narrow) > 1e-12);
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(matches!(
            windowed_gaussian(0.0, 1.0, 8.0, 0.5),
            Err(Error::InvalidGrid(_))
        ));
    }
}
