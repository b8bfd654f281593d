//! Vacuum two-point kernels pulled back to an inertial worldline, the
//! dominating spectral functions Y_A(λ) and the scaling function σ(λ).
//!
//! On the torus the vacuum two-point functions restricted to a static
//! worldline are finite mode sums of pure phases. With the window w
//! applied, their partial Fourier transforms at (−λ, λ) are finite sums
//! of shifted copies of |ŵ|²:
//!
//! ```text
//! Y_A^·(λ)² = Σ_ω ρ_A^·(ω) |ŵ(λ+ω)|²   (particle sector, mass at λ ≈ −ω)
//! Y_A^Γ(λ)² = Σ_ω ρ_A^Γ(ω) |ŵ(λ−ω)|²   (antiparticle sector, λ ≈ +ω)
//! ```
//!
//! where the weights ρ are squared moduli of frame contractions of the
//! mode spinors divided by the box volume. The `·` sector is the vacuum
//! expectation ⟨Ψ⁺Ψ⟩ (carried by antiparticle spinors), the `Γ` sector
//! ⟨ΨΨ⁺⟩ (particle spinors); both are nonnegative by construction.

use crate::error::{Error, Result, Warning};
use crate::grid::Grid1D;
use crate::spinor::{FrameVectors, GammaSet, ModeBasis};
use crate::weights::{self, transform_at};
use crate::{CMatrix, CVector, C64};
use rayon::prelude::*;

/// Which vacuum two-point sector a quantity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// ⟨Ψ⁺(τ)Ψ(τ')⟩ — phases e^{−iω(τ−τ')}, antiparticle spinor weights.
    Dot,
    /// ⟨Ψ(τ)Ψ⁺(τ')⟩ — phases e^{+iω(τ−τ')}, particle spinor weights.
    Gamma,
}

/// Worldline data: the mode basis, the observation interval I on which
/// the window is exactly 1, and the sampled window.
pub struct WorldlineConfig<'a> {
    pub basis: &'a ModeBasis,
    pub gammas: &'a GammaSet,
    pub frame: &'a FrameVectors,
    pub tau_grid: Grid1D,
    /// Observation interval [τ_a, τ_b].
    pub interval: (f64, f64),
    /// Window samples: 1 on the interval, 0 at the grid ends.
    pub window: Vec<f64>,
}

impl<'a> WorldlineConfig<'a> {
    /// Builds the worldline with an erf-plateau window of edge width
    /// `edge_sigma` around the interval.
    pub fn new(
        basis: &'a ModeBasis,
        gammas: &'a GammaSet,
        frame: &'a FrameVectors,
        tau_grid: Grid1D,
        interval: (f64, f64),
        edge_sigma: f64,
    ) -> Result<Self> {
        let window = weights::plateau_window(&tau_grid, interval.0, interval.1, edge_sigma)?;
        Ok(Self {
            basis,
            gammas,
            frame,
            tau_grid,
            interval,
            window,
        })
    }

    /// ŵ at a single frequency.
    pub fn what_at(&self, lambda: f64) -> C64 {
        transform_at(&self.tau_grid, &self.window, lambda)
    }

    /// Frame contraction coefficients (γ₀·spinor)_A of every mode, for
    /// the given sector, as a 4×N matrix divided by √L³. Column j of the
    /// returned matrix times e^{∓iω_j τ} is the mode's worldline profile.
    pub fn frame_profiles(&self, sector: Sector) -> CMatrix {
        let n = self.basis.len();
        let norm = C64::new(1.0 / self.basis.volume().sqrt(), 0.0);
        let mut p = CMatrix::zeros(4, n);
        for (j, mode) in self.basis.modes.iter().enumerate() {
            let spinor = match sector {
                Sector::Gamma => &mode.u,
                Sector::Dot => &mode.v,
            };
            let col: CVector = &self.gammas.gamma[0] * spinor * norm;
            // Frame contraction with v_A = E_A reads off components.
            for a in 0..4 {
                p[(a, j)] = self.frame.v_plus[a].iter().zip(col.iter()).map(|(vp, c)| vp * c).sum();
            }
        }
        p
    }
}

/// Mode-resolved spectral weights ρ_A^♯(ω), grouped by distinct frequency.
#[derive(Debug, Clone)]
pub struct SpectralDensityTable {
    /// Distinct frequencies, ascending.
    pub omegas: Vec<f64>,
    /// rho_dot[a][i] = ρ_A^·(ω_i), A = a+1.
    pub rho_dot: [Vec<f64>; 4],
    /// rho_gamma[a][i] = ρ_A^Γ(ω_i).
    pub rho_gamma: [Vec<f64>; 4],
}

impl SpectralDensityTable {
    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Σ_A Σ_ω [ρ_A^·(ω) + ρ_A^Γ(ω)].
    pub fn total_mass(&self) -> f64 {
        let mut acc = 0.0;
        for a in 0..4 {
            acc += self.rho_dot[a].iter().sum::<f64>();
            acc += self.rho_gamma[a].iter().sum::<f64>();
        }
        acc
    }
}

/// Collects ρ_A^♯(ω) = Σ_{modes at ω} |(γ₀·spinor)_A|²/L³ by frequency.
/// Accumulation is a fixed-order sequential reduction over the
/// deterministic mode ordering.
pub fn mode_density(cfg: &WorldlineConfig) -> SpectralDensityTable {
    let mut omegas: Vec<f64> = Vec::new();
    for mode in &cfg.basis.modes {
        // Frequencies of lattice modes come in exact duplicates; match
        // with a tight relative tolerance.
        if !omegas
            .iter()
            .any(|&w| (w - mode.omega).abs() <= 1e-12 * (1.0 + w))
        {
            omegas.push(mode.omega);
        }
    }
    omegas.sort_by(|a, b| a.partial_cmp(b).expect("finite frequency"));

    let zero = || [0; 4].map(|_| vec![0.0; omegas.len()]);
    let mut rho_dot = zero();
    let mut rho_gamma = zero();
    let p_dot = cfg.frame_profiles(Sector::Dot);
    let p_gamma = cfg.frame_profiles(Sector::Gamma);
    for (j, mode) in cfg.basis.modes.iter().enumerate() {
        let i = omegas
            .iter()
            .position(|&w| (w - mode.omega).abs() <= 1e-12 * (1.0 + w))
            .expect("frequency collected above");
        for a in 0..4 {
            rho_dot[a][i] += p_dot[(a, j)].norm_sqr();
            rho_gamma[a][i] += p_gamma[(a, j)].norm_sqr();
        }
    }
    SpectralDensityTable {
        omegas,
        rho_dot,
        rho_gamma,
    }
}

/// The dominating spectral functions on a λ-grid, plus σ(λ).
#[derive(Debug, Clone)]
pub struct ReferenceSpectra {
    pub grid: Grid1D,
    /// y_dot[a][i] = Y_A^·(λ_i) ≥ 0.
    pub y_dot: [Vec<f64>; 4],
    /// y_gamma[a][i] = Y_A^Γ(λ_i) ≥ 0.
    pub y_gamma: [Vec<f64>; 4],
    /// σ(λ) = (1+λ²)^{1/2}·(1 + |Y^Γ(λ)|_{ℂ⁴}).
    pub sigma: Vec<f64>,
    /// Global bound Σ_ω ρ(ω) · max|ŵ|², valid for every λ (used for
    /// certified tails beyond the grid).
    pub y_global_bound: f64,
    pub warning: Option<Warning>,
}

impl ReferenceSpectra {
    /// |Y^♯(λ_i)|_{ℂ⁴} as the Euclidean norm over the frame index.
    pub fn y_norm(&self, sector: Sector, i: usize) -> f64 {
        let y = match sector {
            Sector::Dot => &self.y_dot,
            Sector::Gamma => &self.y_gamma,
        };
        (0..4).map(|a| y[a][i] * y[a][i]).sum::<f64>().sqrt()
    }

    /// σ evaluated with the quadrant-3 convention: the sector roles swap
    /// under λ → −λ, so σ₃(λ) = (1+λ²)^{1/2}(1 + |Y^·(−λ)|). Evaluated at
    /// grid index `i` of the *reflected* grid (λ value −λ_i of this grid).
    pub fn sigma_q3(&self, i: usize) -> f64 {
        let l = self.grid.point(i);
        (1.0 + l * l).sqrt() * (1.0 + self.y_norm(Sector::Dot, i))
    }
}

/// Computes Y from the density table and the window transform:
/// Y_A^·(λ)² = Σ_ω ρ_A^·(ω)|ŵ(λ+ω)|², Y_A^Γ(λ)² = Σ_ω ρ_A^Γ(ω)|ŵ(λ−ω)|².
pub fn compute_y(
    cfg: &WorldlineConfig,
    density: &SpectralDensityTable,
    grid: &Grid1D,
) -> ReferenceSpectra {
    // ŵ is needed at λ±ω for grid λ and every distinct ω: evaluate on a
    // per-(λ,ω) basis in parallel over the λ-grid.
    let rows: Vec<([f64; 4], [f64; 4])> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let l = grid.point(i);
            let mut d2 = [0.0; 4];
            let mut g2 = [0.0; 4];
            for (wi, &omega) in density.omegas.iter().enumerate() {
                let w_plus = cfg.what_at(l + omega).norm_sqr();
                let w_minus = cfg.what_at(l - omega).norm_sqr();
                for a in 0..4 {
                    d2[a] += density.rho_dot[a][wi] * w_plus;
                    g2[a] += density.rho_gamma[a][wi] * w_minus;
                }
            }
            (d2, g2)
        })
        .collect();

    let mut y_dot = [0; 4].map(|_| vec![0.0; grid.n]);
    let mut y_gamma = [0; 4].map(|_| vec![0.0; grid.n]);
    for (i, (d2, g2)) in rows.iter().enumerate() {
        for a in 0..4 {
            y_dot[a][i] = d2[a].sqrt();
            y_gamma[a][i] = g2[a].sqrt();
        }
    }
    let sigma: Vec<f64> = (0..grid.n)
        .map(|i| {
            let l = grid.point(i);
            let ynorm = (0..4).map(|a| y_gamma[a][i] * y_gamma[a][i]).sum::<f64>().sqrt();
            (1.0 + l * l).sqrt() * (1.0 + ynorm)
        })
        .collect();

    // Global bound: |ŵ(μ)| ≤ ŵ(0) = ∫w (w ≥ 0), so Y² ≤ Σρ·ŵ(0)².
    let w0 = cfg.what_at(0.0).norm();
    let y_global_bound = (density.total_mass()).sqrt() * w0;

    // Tail diagnostic: the largest shift must keep |ŵ|² mass inside the
    // evaluation range covered by the τ-grid transform (always available
    // pointwise here), but warn if the λ-grid fails to contain the peaks.
    let omega_max = density.omegas.last().copied().unwrap_or(0.0);
    let warning = (grid.hi() < omega_max || grid.lo > -omega_max).then(|| Warning::Truncation {
        context: "compute_y λ-grid misses mode peaks".into(),
        relative_tail: 1.0,
    });

    ReferenceSpectra {
        grid: grid.clone(),
        y_dot,
        y_gamma,
        sigma,
        y_global_bound,
        warning,
    }
}

/// The windowed vacuum two-point kernel of one sector evaluated at a
/// pair of proper times:
/// K^♯_{AB}(τ,τ') = w(τ)w(τ')·Σ_j conj(c^♯_j(A)) c^♯_j(B) e^{∓iω_j(τ−τ')}.
pub fn worldline_twopoint(cfg: &WorldlineConfig, sector: Sector, tau: f64, tau_p: f64) -> CMatrix {
    let profiles = cfg.frame_profiles(sector);
    let wi = cfg.window[cfg.tau_grid.nearest(tau)];
    let wj = cfg.window[cfg.tau_grid.nearest(tau_p)];
    let sign = match sector {
        Sector::Dot => -1.0,
        Sector::Gamma => 1.0,
    };
    let mut k = CMatrix::zeros(4, 4);
    for (j, mode) in cfg.basis.modes.iter().enumerate() {
        let phase = sign * mode.omega * (tau - tau_p);
        let e = C64::new(phase.cos(), phase.sin());
        for a in 0..4 {
            for b in 0..4 {
                k[(a, b)] += profiles[(a, j)].conj() * profiles[(b, j)] * e;
            }
        }
    }
    k * C64::new(wi * wj, 0.0)
}

/// Decay fit of Y on its decay side (λ → +∞ for the `·` sector,
/// λ → −∞ for the Γ sector).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct DecayReport {
    /// Gaussian decay coefficient c in |Y| ≤ Y_max·e^{−c(λ−λ_edge)²},
    /// fitted per frame index on the decay side (positive = certified
    /// super-polynomial decay).
    pub gaussian_coeff_dot: [f64; 4],
    pub gaussian_coeff_gamma: [f64; 4],
    /// max over the grid (growth-side bound).
    pub y_max: f64,
    /// Ratio of the last decay-side sample to the max (decay depth).
    pub edge_ratio_dot: f64,
    pub edge_ratio_gamma: f64,
}

/// Fits the decay side of the spectra. The grid must extend well beyond
/// the largest mode frequency so a decay region exists.
pub fn decay_report(spectra: &ReferenceSpectra, omega_max: f64) -> Result<DecayReport> {
    let grid = &spectra.grid;
    if grid.hi() < omega_max + 5.0 || grid.lo > -(omega_max + 5.0) {
        return Err(Error::InsufficientRange(format!(
            "decay fit needs the λ-grid to extend past ±(ω_max + 5) = ±{:.2}",
            omega_max + 5.0
        )));
    }
    let y_max = (0..grid.n)
        .map(|i| {
            spectra
                .y_norm(Sector::Dot, i)
                .max(spectra.y_norm(Sector::Gamma, i))
        })
        .fold(0.0, f64::max);
    if y_max == 0.0 {
        return Ok(DecayReport {
            gaussian_coeff_dot: [f64::INFINITY; 4],
            gaussian_coeff_gamma: [f64::INFINITY; 4],
            y_max,
            edge_ratio_dot: 0.0,
            edge_ratio_gamma: 0.0,
        });
    }

    // Decay side of Y^·: λ → +∞ (all its mass sits near λ = −ω). Fit
    // log Y against (λ − edge)² between the edge of the mode band and the
    // end of the grid.
    let fit = |y: &Vec<f64>, reflect: bool| -> Result<f64> {
        let edge = omega_max; // mass confined to |λ| ≤ ω_max + bandwidth
        let pick = |x: f64| if reflect { -x } else { x };
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for i in 0..grid.n {
            let l = pick(grid.point(i));
            if l > edge + 1.0 && y[i] > 1e-280 {
                pts.push(((l - edge) * (l - edge), y[i].ln()));
            }
        }
        if pts.len() < 8 {
            // An identically-zero row decays trivially; anything else with
            // too few usable samples cannot be certified.
            if y.iter().all(|&v| v == 0.0) {
                return Ok(f64::INFINITY);
            }
            return Err(Error::TailEstimateFailed(
                "too few decay-side samples above the floor".into(),
            ));
        }
        // Least squares slope of ln y vs (λ−edge)²; decay ⇒ slope < 0.
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        Ok(-slope)
    };

    let mut cd = [0.0; 4];
    let mut cg = [0.0; 4];
    for a in 0..4 {
        cd[a] = fit(&spectra.y_dot[a], false)?;
        cg[a] = fit(&spectra.y_gamma[a], true)?;
    }
    let edge_ratio = |sector: Sector, at_hi: bool| {
        let i = if at_hi { grid.n - 1 } else { 0 };
        spectra.y_norm(sector, i) / y_max
    };
    Ok(DecayReport {
        gaussian_coeff_dot: cd,
        gaussian_coeff_gamma: cg,
        y_max,
        edge_ratio_dot: edge_ratio(Sector::Dot, true),
        edge_ratio_gamma: edge_ratio(Sector::Gamma, false),
    })
}
