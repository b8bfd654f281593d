//! Batch driver: turns a [`RunConfig`](crate::config::RunConfig) into a
//! certified bound, a verified state corpus, a self-check matrix, or plot
//! data, and writes machine-readable reports.
//!
//! All emitted artifacts are deterministic functions of the configuration:
//! reductions run in fixed order, random draws are seeded, and the JSON
//! report echoes the configuration verbatim, so repeated runs produce
//! byte-identical files.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    assemble_bound, averaged_density_freq, build_j, compute_c, compute_cpp, jtilde_min_eig,
    kminus_positivity, quadrant_bounds, sigma_interpolant, wtilde_check, BoundReport, KernelJ,
    LambdaEntry, ThetaProfile,
};
use crate::config::{Mode, RunConfig, WeightConfig};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::spinor::{
    build_mode_basis, build_standard_gammas, dirac_residual, frame_vectors, verify_gamma_set,
    FrameVectors, GammaSet, ModeBasis,
};
use crate::states::{
    averaged_density, energy_density, random_hadamard_q, two_point_blocks, vacuum_projection,
    w_transforms, QOperator, StateLabel, StateSpec,
};
use crate::weights::{kernel_identity, tail_mass_sq, windowed_gaussian, Weight};
use crate::worldline::{compute_y, decay_report, mode_density, ReferenceSpectra, Sector, WorldlineConfig};
use crate::{CMatrix, C64};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Success.
pub const EXIT_OK: i32 = 0;
/// Configuration or I/O error.
pub const EXIT_CONFIG: i32 = 2;
/// Numerical-certification failure (warnings escalate under --strict).
pub const EXIT_CERTIFICATION: i32 = 3;
/// A state violates the certified bound.
pub const EXIT_VIOLATION: i32 = 4;
/// A named self-check failed.
pub const EXIT_SELFCHECK: i32 = 5;

/// Relative slack on bound margins: a state passes iff
/// I_time ≥ −B − MARGIN_TOL·(1+B).
pub const MARGIN_TOL: f64 = 1e-9;

/// One row of the per-state table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateRow {
    pub id: String,
    pub i_time: f64,
    pub i_freq: f64,
    /// I_time + B: nonnegative (up to [`MARGIN_TOL`]) iff the bound holds.
    pub margin: f64,
}

/// One named check with its verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The full machine-readable run report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub mode: String,
    /// The configuration echoed verbatim (not the resolved output paths),
    /// so the report content depends only on (config, seed).
    pub config: RunConfig,
    pub bound: Option<BoundReport>,
    pub states: Vec<StateRow>,
    pub checks: Vec<CheckRow>,
    pub warnings: Vec<String>,
    pub min_i_time: Option<f64>,
    pub min_margin: Option<f64>,
}

/// A finished run: the report plus the process exit code it implies.
pub struct Outcome {
    pub report: RunReport,
    pub exit: i32,
    pub out_dir: PathBuf,
}

/// A corpus member, owned (the borrowed [`StateLabel`] is built per use).
pub enum OwnedState {
    Vector(StateSpec),
    Quasifree(QOperator),
}

impl OwnedState {
    pub fn label(&self) -> StateLabel<'_> {
        match self {
            OwnedState::Vector(s) => StateLabel::Vector(s),
            OwnedState::Quasifree(q) => StateLabel::Quasifree(q),
        }
    }
}

/// Owns everything a run needs that does not borrow: algebra, basis,
/// weight, configuration.
pub struct Engine {
    pub cfg: RunConfig,
    pub gammas: GammaSet,
    pub frame: FrameVectors,
    pub basis: ModeBasis,
    pub weight: Weight,
}

/// Borrowing stage of the pipeline: worldline, reference spectra, decay
/// certificate, and the (empty) curvature profile.
pub struct Prepared<'a> {
    pub wl: WorldlineConfig<'a>,
    /// Symmetric λ-grid covering ±(ω_max + pad).
    pub grid: Grid1D,
    pub spectra: ReferenceSpectra,
    pub decay: crate::worldline::DecayReport,
    pub theta: ThetaProfile,
    pub omega_max: f64,
}

impl Engine {
    /// Builds the engine and performs the basis-dependent validation
    /// (τ-resolution against the largest mode frequency, weight support
    /// against the observation interval).
    pub fn new(cfg: RunConfig) -> Result<Self> {
        let gammas = build_standard_gammas();
        let frame = frame_vectors(&gammas);
        let basis = build_mode_basis(cfg.basis.l, cfg.basis.m, cfg.basis.k_max, &gammas)?;
        let weight = match &cfg.weight {
            WeightConfig::WindowedGaussian {
                center,
                width,
                support_radius,
            } => windowed_gaussian(*center, *width, *support_radius, cfg.grids.dtau)?,
            WeightConfig::Samples { tau_lo, dtau, g } => Weight::from_samples(
                Grid1D {
                    lo: *tau_lo,
                    step: *dtau,
                    n: g.len(),
                },
                g.clone(),
            )?,
        };
        let omega_max = basis.omega_max();
        let dtau_max = std::f64::consts::PI / (4.0 * omega_max);
        if cfg.grids.dtau > dtau_max {
            return Err(Error::Config(format!(
                "grids.dtau = {} does not resolve ω_max = {omega_max:.6} (need ≤ {dtau_max:.6})",
                cfg.grids.dtau
            )));
        }
        let [i_lo, i_hi] = cfg.window.interval;
        let (f_lo, f_hi) = (weight.tau_grid.lo, weight.tau_grid.hi());
        if f_lo < i_lo || f_hi > i_hi {
            return Err(Error::SupportViolation {
                f_lo,
                f_hi,
                i_lo,
                i_hi,
            });
        }
        Ok(Self {
            cfg,
            gammas,
            frame,
            basis,
            weight,
        })
    }

    /// Worldline with its plateau window; the τ-grid is sized so the
    /// window's mollified edges fit with margin.
    pub fn worldline(&self) -> Result<WorldlineConfig<'_>> {
        let [i_lo, i_hi] = self.cfg.window.interval;
        let s = self.cfg.window.edge_sigma;
        let tau_grid = Grid1D::covering(
            i_lo - 20.0 * s - 0.25,
            i_hi + 20.0 * s + 0.25,
            self.cfg.grids.dtau,
        )?;
        WorldlineConfig::new(
            &self.basis,
            &self.gammas,
            &self.frame,
            tau_grid,
            (i_lo, i_hi),
            s,
        )
    }

    /// Runs the state-independent part of the pipeline.
    pub fn prepare(&self) -> Result<Prepared<'_>> {
        let wl = self.worldline()?;
        let omega_max = self.basis.omega_max();
        let radius = omega_max + self.cfg.grids.lambda_pad;
        let grid = Grid1D::covering(-radius, radius, self.cfg.grids.dlambda)?;
        let density = mode_density(&wl);
        let spectra = compute_y(&wl, &density, &grid);
        let decay = decay_report(&spectra, omega_max)?;
        let theta = ThetaProfile::zero(wl.tau_grid.clone());
        Ok(Prepared {
            wl,
            grid,
            spectra,
            decay,
            theta,
            omega_max,
        })
    }

    /// Sweeps the cutoff constants over the configured Λ-list for both
    /// quadrants. Returns the sweep, the uncapped values, and warnings.
    pub fn sweep(&self, prep: &Prepared) -> Result<(Vec<LambdaEntry>, (f64, f64, f64, f64), Vec<String>)> {
        let sigma1 = sigma_interpolant(&prep.spectra, false);
        let sigma3 = sigma_interpolant(&prep.spectra, true);
        let c_prime = prep.theta.c_prime;
        let (u_max, du) = (self.cfg.grids.cutoff_umax, self.cfg.grids.cutoff_du);
        let mut sweep = Vec::with_capacity(self.cfg.lambdas.len());
        let mut infs = (0.0, 0.0, 0.0, 0.0);
        let mut warnings = Vec::new();
        for &lambda in &self.cfg.lambdas {
            let c1 = compute_c(&self.weight, &sigma1, lambda, u_max, du, false)?;
            let cpp1 = compute_cpp(&self.weight, &sigma1, c_prime, lambda, u_max, du, false)?;
            let c3 = compute_c(&self.weight, &sigma3, lambda, u_max, du, true)?;
            let cpp3 = compute_cpp(&self.weight, &sigma3, c_prime, lambda, u_max, du, true)?;
            for w in [&c1.warning, &cpp1.warning, &c3.warning, &cpp3.warning]
                .into_iter()
                .flatten()
            {
                warnings.push(format!("Λ = {lambda}: {w}"));
            }
            infs = (c1.uncapped, cpp1.uncapped, c3.uncapped, cpp3.uncapped);
            sweep.push(LambdaEntry {
                lambda,
                c1: c1.value,
                cpp1: cpp1.value,
                c3: c3.value,
                cpp3: cpp3.value,
            });
        }
        Ok((sweep, infs, warnings))
    }

    /// Computes the certified bound B (and keeps the kernel for plot
    /// emission).
    pub fn bound(&self, prep: &Prepared) -> Result<(BoundReport, KernelJ)> {
        let (sweep, infs, mut warnings) = self.sweep(prep)?;
        if let Some(w) = &prep.spectra.warning {
            warnings.push(w.to_string());
        }
        let j = build_j(&self.weight, &prep.theta, &prep.grid)?;
        let qb = quadrant_bounds(
            &j,
            &prep.spectra,
            &prep.decay,
            &prep.theta,
            &self.weight,
            prep.omega_max,
        )?;
        let report = assemble_bound(
            &sweep,
            infs,
            &qb,
            prep.theta.c_prime,
            self.cfg.halved_interference,
            warnings,
        )?;
        Ok((report, j))
    }

    /// Builds the state corpus in deterministic order: vacuum, explicit
    /// vectors, then seeded random quasifree labels.
    pub fn corpus(&self) -> Result<Vec<(String, OwnedState)>> {
        let mut out: Vec<(String, OwnedState)> = Vec::new();
        if self.cfg.states.include_vacuum {
            out.push((
                "vacuum".into(),
                OwnedState::Vector(StateSpec::vacuum(&self.basis)),
            ));
        }
        for sc in &self.cfg.states.explicit {
            let mut raw = Vec::with_capacity(sc.terms.len());
            for term in &sc.terms {
                let resolve = |entries: &Vec<[i64; 4]>| -> Result<Vec<usize>> {
                    entries
                        .iter()
                        .map(|&[nx, ny, nz, s]| {
                            if !(0..=1).contains(&s) {
                                return Err(Error::Config(format!(
                                    "state '{}': spin must be 0 or 1, got {s}",
                                    sc.label
                                )));
                            }
                            self.basis.find([nx, ny, nz], s as usize).ok_or_else(|| {
                                Error::Config(format!(
                                    "state '{}': mode [{nx},{ny},{nz}] spin {s} not in basis",
                                    sc.label
                                ))
                            })
                        })
                        .collect()
                };
                raw.push((
                    C64::new(term.coefficient[0], term.coefficient[1]),
                    resolve(&term.particles)?,
                    resolve(&term.antiparticles)?,
                ));
            }
            out.push((
                sc.label.clone(),
                OwnedState::Vector(StateSpec::new(sc.label.clone(), raw, &self.basis)?),
            ));
        }
        if let Some(r) = &self.cfg.states.random {
            for i in 0..r.count {
                let q = random_hadamard_q(&self.basis, r.rank, r.strength, r.seed + i as u64)?;
                out.push((format!("random_{i:03}"), OwnedState::Quasifree(q)));
            }
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if out[i].0 == out[j].0 {
                    return Err(Error::Config(format!("duplicate state id '{}'", out[i].0)));
                }
            }
        }
        Ok(out)
    }

    /// Evaluates I_time, I_freq and the margin for every corpus state.
    pub fn evaluate_states(
        &self,
        prep: &Prepared,
        corpus: &[(String, OwnedState)],
        b_total: f64,
    ) -> Result<Vec<StateRow>> {
        corpus
            .iter()
            .map(|(id, st)| {
                let label = st.label();
                let blocks = two_point_blocks(&label, &prep.wl)?;
                let rho = energy_density(&blocks, &self.weight.tau_grid);
                let i_time = averaged_density(&rho, &self.weight, prep.wl.interval)?;
                let (i_freq, _) =
                    averaged_density_freq(&self.weight, &prep.theta, &blocks, &prep.grid)?;
                Ok(StateRow {
                    id: id.clone(),
                    i_time,
                    i_freq,
                    margin: i_time + b_total,
                })
            })
            .collect()
    }

    // -----------------------------------------------------------------
    // Checks
    // -----------------------------------------------------------------

    /// Certification checks run alongside the bound: the decay fit that
    /// backs the exterior tail, the operator lower bound at Λ*, and the
    /// positivity of the kernel split at Λ*.
    pub fn certification_checks(
        &self,
        prep: &Prepared,
        bound: &BoundReport,
    ) -> Result<Vec<CheckRow>> {
        let entry = bound
            .sweep
            .iter()
            .find(|e| e.lambda == bound.lambda_star)
            .ok_or_else(|| Error::InconsistentParts("Λ* missing from sweep".into()))?;
        let mut rows = vec![self.decay_check(prep)];
        rows.push(self.operator_check(prep, entry)?);
        rows.push(self.kernel_split_check(prep, bound.lambda_star)?);
        if !bound.total.is_finite() || bound.total < 0.0 {
            rows.push(CheckRow {
                name: "bound_assembly".into(),
                passed: false,
                detail: format!("B = {} is not a finite nonnegative number", bound.total),
            });
        } else {
            rows.push(CheckRow {
                name: "bound_assembly".into(),
                passed: true,
                detail: format!("B = {:.6e} (Λ* = {})", bound.total, bound.lambda_star),
            });
        }
        Ok(rows)
    }

    fn decay_check(&self, prep: &Prepared) -> CheckRow {
        let d = &prep.decay;
        let coeff_ok = (0..4).all(|a| d.gaussian_coeff_dot[a] > 0.0 && d.gaussian_coeff_gamma[a] > 0.0);
        let edge_ok = d.edge_ratio_dot <= 1e-10 && d.edge_ratio_gamma <= 1e-10;
        let fhat = self.weight.fhat_on(&prep.grid);
        let tail = tail_mass_sq(&fhat);
        let tail_ok = tail <= 1e-12;
        CheckRow {
            name: "decay_certificate".into(),
            passed: coeff_ok && edge_ok && tail_ok,
            detail: format!(
                "edge ratios {:.3e}/{:.3e}, f̂ tail mass {:.3e}",
                d.edge_ratio_dot, d.edge_ratio_gamma, tail
            ),
        }
    }

    /// J̃_Λ bounded below by −(C_Λ + C''_Λ) − δ_disc in both quadrants.
    fn operator_check(&self, prep: &Prepared, entry: &LambdaEntry) -> Result<CheckRow> {
        let sigma1 = sigma_interpolant(&prep.spectra, false);
        let sigma3 = sigma_interpolant(&prep.spectra, true);
        let dl = self.cfg.grids.operator_dl;
        let q1 = jtilde_min_eig(&self.weight, &prep.theta, &sigma1, entry.lambda, false, dl)?;
        let q3 = jtilde_min_eig(&self.weight, &prep.theta, &sigma3, entry.lambda, true, dl)?;
        let ok1 = q1.min_eig >= -(entry.c1 + entry.cpp1) - q1.delta_disc;
        let ok3 = q3.min_eig >= -(entry.c3 + entry.cpp3) - q3.delta_disc;
        Ok(CheckRow {
            name: "operator_lower_bound".into(),
            passed: ok1 && ok3,
            detail: format!(
                "Λ = {}: min eig {:.6e} ≥ −{:.6e} (q1), {:.6e} ≥ −{:.6e} (q3)",
                entry.lambda,
                q1.min_eig,
                entry.c1 + entry.cpp1 + q1.delta_disc,
                q3.min_eig,
                entry.c3 + entry.cpp3 + q3.delta_disc
            ),
        })
    }

    /// K⁻ positive and K⁺ − K⁻ reconstructing the direct kernel.
    fn kernel_split_check(&self, prep: &Prepared, lambda: f64) -> Result<CheckRow> {
        let sigma1 = sigma_interpolant(&prep.spectra, false);
        let k = kminus_positivity(
            &self.weight,
            &sigma1,
            lambda,
            self.cfg.grids.operator_dl,
            self.cfg.grids.dmu,
        )?;
        let floor = -1e-8 * k.trace_minus.max(1e-12);
        let passed = k.min_eig_minus >= floor
            && k.min_eig_plus >= -1e-8 * k.trace_plus.max(1e-12)
            && k.reconstruction_residual <= 1e-10;
        Ok(CheckRow {
            name: "kernel_split".into(),
            passed,
            detail: format!(
                "min eig K⁻ {:.3e} (trace {:.3e}), reconstruction {:.3e}",
                k.min_eig_minus, k.trace_minus, k.reconstruction_residual
            ),
        })
    }

    /// Full named self-check suite at the configured scale.
    pub fn selfcheck(&self, prep: &Prepared) -> Result<Vec<CheckRow>> {
        let mut rows = Vec::new();
        rows.extend(algebra_checks(&self.gammas, &self.frame));
        rows.push(self.mode_equation_check());
        rows.push(self.vacuum_density_check(prep)?);
        rows.push(self.kernel_identity_check());
        rows.push(self.block_domination_check(prep)?);
        rows.push(self.quadrant_structure_check(prep)?);
        rows.push(self.density_operator_check(prep)?);
        rows.push(self.cross_domain_check(prep)?);
        rows.push(self.decay_check(prep));
        // The smallest swept Λ keeps the operator checks affordable at
        // self-check scale.
        let lambda = self.cfg.lambdas[0];
        let sigma1 = sigma_interpolant(&prep.spectra, false);
        let sigma3 = sigma_interpolant(&prep.spectra, true);
        let (u_max, du) = (self.cfg.grids.cutoff_umax, self.cfg.grids.cutoff_du);
        let c1 = compute_c(&self.weight, &sigma1, lambda, u_max, du, false)?;
        let c3 = compute_c(&self.weight, &sigma3, lambda, u_max, du, true)?;
        let entry = LambdaEntry {
            lambda,
            c1: c1.value,
            cpp1: 0.0,
            c3: c3.value,
            cpp3: 0.0,
        };
        rows.push(self.operator_check(prep, &entry)?);
        rows.push(self.kernel_split_check(prep, entry.lambda)?);
        Ok(rows)
    }

    fn mode_equation_check(&self) -> CheckRow {
        let worst = self
            .basis
            .modes
            .iter()
            .flat_map(|m| {
                [
                    dirac_residual(&self.gammas, m, true),
                    dirac_residual(&self.gammas, m, false),
                ]
            })
            .fold(0.0, f64::max);
        CheckRow {
            name: "mode_equations".into(),
            passed: worst <= 1e-12,
            detail: format!("worst mode-equation residual {worst:.3e}"),
        }
    }

    fn vacuum_density_check(&self, prep: &Prepared) -> Result<CheckRow> {
        let vac = StateSpec::vacuum(&self.basis);
        let blocks = two_point_blocks(&StateLabel::Vector(&vac), &prep.wl)?;
        let rho = energy_density(&blocks, &self.weight.tau_grid);
        let worst = rho.rho.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        Ok(CheckRow {
            name: "vacuum_density".into(),
            passed: worst <= 1e-14,
            detail: format!("max |ρ_vac| = {worst:.3e}"),
        })
    }

    fn kernel_identity_check(&self) -> CheckRow {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let l = rng.gen_range(-5.0..5.0);
            let lp = rng.gen_range(-5.0..5.0);
            match kernel_identity(&self.weight, l, lp) {
                Ok(chk) => {
                    let rel = (chk.lhs - chk.rhs).norm() / (1.0 + chk.lhs.norm());
                    worst = worst.max(rel);
                }
                Err(_) => {
                    return CheckRow {
                        name: "kernel_identity".into(),
                        passed: false,
                        detail: "identity quadrature failed".into(),
                    }
                }
            }
        }
        CheckRow {
            name: "kernel_identity".into(),
            passed: worst <= 1e-6,
            detail: format!("worst relative error {worst:.3e} over 20 random (λ,λ')"),
        }
    }

    /// |W^{♯♮♭}_AB(λ,λ')| ≤ Y^♯_A(λ)·Y^♭_B(λ') + 1e−8 on a coarse grid
    /// square for a handful of states.
    fn block_domination_check(&self, prep: &Prepared) -> Result<CheckRow> {
        let radius = prep.omega_max + 3.0;
        let grid = Grid1D::covering(-radius, radius, 0.25)?;
        let density = mode_density(&prep.wl);
        let spectra = compute_y(&prep.wl, &density, &grid);
        let mut states: Vec<OwnedState> = vec![OwnedState::Vector(self.pair_state(0.1)?)];
        for seed in [11u64, 12] {
            let rank = 4.min(self.basis.len());
            states.push(OwnedState::Quasifree(random_hadamard_q(
                &self.basis,
                rank,
                0.5,
                seed,
            )?));
        }
        let mut worst = f64::NEG_INFINITY;
        for st in &states {
            let label = st.label();
            let blocks = two_point_blocks(&label, &prep.wl)?;
            worst = worst.max(domination_excess(&blocks, &spectra, &grid));
        }
        Ok(CheckRow {
            name: "block_domination".into(),
            passed: worst <= 1e-8,
            detail: format!(
                "worst excess over Y_A(λ)Y_B(λ') = {worst:.3e} ({} states, {} grid points)",
                states.len(),
                grid.n
            ),
        })
    }

    /// Spectral mass of the leading positive-frequency block must sit at
    /// +ω, not −ω. A deliberately flipped transform sign (the `sabotage`
    /// hook) moves the mass to the wrong quadrant and fails this check.
    fn quadrant_structure_check(&self, prep: &Prepared) -> Result<CheckRow> {
        let sabotage = self.cfg.sabotage.as_deref() == Some("transform_sign");
        let spec = StateSpec::new(
            "probe_particle",
            vec![(C64::new(1.0, 0.0), vec![0], vec![])],
            &self.basis,
        )?;
        let blocks = two_point_blocks(&StateLabel::Vector(&spec), &prep.wl)?;
        let omega = self.basis.modes[0].omega;
        let mass = |lambda: f64| -> f64 {
            let mut f = blocks.coeffs.clone();
            for j in 0..f.nrows() {
                let arg = if sabotage {
                    lambda + blocks.s[j]
                } else {
                    lambda - blocks.s[j]
                };
                let wh = prep.wl.what_at(arg);
                for a in 0..4 {
                    f[(j, a)] *= wh;
                }
            }
            (f.adjoint() * &blocks.middles[3] * f).trace().re
        };
        let plus = mass(omega);
        let minus = mass(-omega);
        Ok(CheckRow {
            name: "quadrant_structure".into(),
            passed: plus > 100.0 * minus.max(1e-300),
            detail: format!("block mass at +ω: {plus:.6e}, at −ω: {minus:.6e}"),
        })
    }

    /// W̃ positive with trace in [0, π/2]; the vacuum label gives trace 0
    /// exactly.
    fn density_operator_check(&self, prep: &Prepared) -> Result<CheckRow> {
        let sigma1 = sigma_interpolant(&prep.spectra, false);
        let sigma3 = sigma_interpolant(&prep.spectra, true);
        let grid = Grid1D::covering(0.0, prep.grid.hi(), self.cfg.grids.dlambda)?;
        let vacuum_q = vacuum_projection(&self.basis);
        let mut states: Vec<(String, OwnedState)> = vec![
            ("vacuum_label".into(), OwnedState::Quasifree(vacuum_q)),
            ("pair".into(), OwnedState::Vector(self.pair_state(0.1)?)),
        ];
        for seed in [21u64, 22] {
            let rank = 4.min(self.basis.len());
            states.push((
                format!("random_{seed}"),
                OwnedState::Quasifree(random_hadamard_q(&self.basis, rank, 0.5, seed)?),
            ));
        }
        let mut detail = String::new();
        let mut passed = true;
        for (id, st) in &states {
            let label = st.label();
            let blocks = two_point_blocks(&label, &prep.wl)?;
            for (q3, sigma) in [
                (false, &sigma1 as &(dyn Fn(f64) -> f64 + Sync)),
                (true, &sigma3 as &(dyn Fn(f64) -> f64 + Sync)),
            ] {
                let chk = wtilde_check(&blocks, sigma, &grid, q3)?;
                let floor = -((1e-8 * chk.trace).max(1e-12));
                let ok = chk.min_eig >= floor
                    && chk.trace >= -1e-12
                    && chk.trace <= FRAC_PI_2 + 1e-6;
                let vac_ok = *id != "vacuum_label" || chk.trace == 0.0;
                passed &= ok && vac_ok;
                if !(ok && vac_ok) {
                    detail.push_str(&format!(
                        "{id} q3={q3}: min eig {:.3e}, trace {:.6e}; ",
                        chk.min_eig, chk.trace
                    ));
                }
            }
        }
        if passed {
            detail = format!("{} states × 2 quadrants within trace cap π/2", states.len());
        }
        Ok(CheckRow {
            name: "density_operator".into(),
            passed,
            detail,
        })
    }

    fn cross_domain_check(&self, prep: &Prepared) -> Result<CheckRow> {
        let particle = StateSpec::new(
            "probe_particle",
            vec![(C64::new(1.0, 0.0), vec![0], vec![])],
            &self.basis,
        )?;
        let states = [self.pair_state(0.1)?, particle];
        let mut worst = 0.0f64;
        for st in &states {
            let blocks = two_point_blocks(&StateLabel::Vector(st), &prep.wl)?;
            let rho = energy_density(&blocks, &self.weight.tau_grid);
            let i_time = averaged_density(&rho, &self.weight, prep.wl.interval)?;
            let (i_freq, _) =
                averaged_density_freq(&self.weight, &prep.theta, &blocks, &prep.grid)?;
            worst = worst.max((i_freq - i_time).abs() / (1.0 + i_time.abs()));
        }
        Ok(CheckRow {
            name: "cross_domain".into(),
            passed: worst <= 1e-6,
            detail: format!("worst |I_freq − I_time| (relative) = {worst:.3e}"),
        })
    }

    /// α|0⟩ + β b†d†|0⟩ on the two lowest modes: the interference term
    /// makes the averaged density state-dependent (and negative for one
    /// sign of β).
    fn pair_state(&self, beta: f64) -> Result<StateSpec> {
        let jp = 0usize;
        let ja = if self.basis.len() > 1 { 1 } else { 0 };
        let alpha = (1.0 - beta * beta).sqrt();
        StateSpec::new(
            "pair_probe",
            vec![
                (C64::new(alpha, 0.0), vec![], vec![]),
                (C64::new(beta, 0.0), vec![jp], vec![ja]),
            ],
            &self.basis,
        )
    }
}

/// Checks of the γ-matrix representation and the frame decomposition.
fn algebra_checks(gammas: &GammaSet, frame: &FrameVectors) -> Vec<CheckRow> {
    let v = verify_gamma_set(gammas);
    let mut sum = CMatrix::zeros(4, 4);
    for a in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                sum[(i, j)] += frame.v[a][i] * frame.v_plus[a][j];
            }
        }
    }
    let frame_res = crate::linalg::max_abs(&(sum - &gammas.gamma[0]));
    vec![
        CheckRow {
            name: "clifford_algebra".into(),
            passed: v.passes(),
            detail: format!(
                "Clifford residual {:.3e}, adjointness {:.3e}",
                v.clifford_residual, v.adjointness_residual
            ),
        },
        CheckRow {
            name: "frame_completeness".into(),
            passed: frame_res == 0.0,
            detail: format!("‖Σ v_A ⊗ v_A⁺ − γ₀‖ = {frame_res:.3e}"),
        },
    ]
}

/// Largest value of |W_AB(λ,λ')| − Y^♯_A(λ)Y^♭_B(λ') over all blocks and
/// grid points. Nonpositive (up to tolerance) iff the domination holds.
pub fn domination_excess(
    blocks: &crate::states::TwoPointBlocks,
    spectra: &ReferenceSpectra,
    grid: &Grid1D,
) -> f64 {
    assert!(
        grid.same_geometry(&spectra.grid),
        "domination check needs matching grids"
    );
    let w = w_transforms(blocks, grid);
    // Left/right dominating sectors per block: ω^{·Γ·}, ω^{Γ··}, ω^{··Γ},
    // ω^{Γ·Γ}.
    let sectors = [
        (Sector::Dot, Sector::Dot),
        (Sector::Gamma, Sector::Dot),
        (Sector::Dot, Sector::Gamma),
        (Sector::Gamma, Sector::Gamma),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (blk, (left, right)) in sectors.iter().enumerate() {
        let yl = |i: usize, a: usize| match left {
            Sector::Dot => spectra.y_dot[a][i],
            Sector::Gamma => spectra.y_gamma[a][i],
        };
        let yr = |j: usize, b: usize| match right {
            Sector::Dot => spectra.y_dot[b][j],
            Sector::Gamma => spectra.y_gamma[b][j],
        };
        for i in 0..grid.n {
            for j in 0..grid.n {
                let m = w.at(blk, i, j);
                for a in 0..4 {
                    for b in 0..4 {
                        worst = worst.max(m[(a, b)].norm() - yl(i, a) * yr(j, b));
                    }
                }
            }
        }
    }
    worst
}

// ---------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------

/// Writes a CSV with full double precision (round-trippable through
/// [`read_csv`]): header row, then `%.17e`-formatted columns.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    use std::fmt::Write as _;
    let mut text = String::new();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                text.push(',');
            }
            let _ = write!(text, "{v:.17e}");
        }
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]: header names and float rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{}: empty CSV", path.display())))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> =
            line.split(',').map(str::parse::<f64>).collect();
        let row = row.map_err(|e| {
            Error::Config(format!("{} line {}: {e}", path.display(), ln + 2))
        })?;
        if row.len() != header.len() {
            return Err(Error::Config(format!(
                "{} line {}: {} fields, expected {}",
                path.display(),
                ln + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Filesystem-safe version of a state id.
pub fn sanitize_id(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn write_spectra_csvs(dir: &Path, engine: &Engine, prep: &Prepared, j: Option<&KernelJ>) -> Result<()> {
    let grid = &prep.grid;
    let sp = &prep.spectra;
    let y_rows: Vec<Vec<f64>> = (0..grid.n)
        .map(|i| {
            let mut row = vec![grid.point(i)];
            row.extend((0..4).map(|a| sp.y_dot[a][i]));
            row.extend((0..4).map(|a| sp.y_gamma[a][i]));
            row
        })
        .collect();
    write_csv(
        &dir.join("Y.csv"),
        &[
            "lambda", "y_dot_1", "y_dot_2", "y_dot_3", "y_dot_4", "y_gamma_1", "y_gamma_2",
            "y_gamma_3", "y_gamma_4",
        ],
        &y_rows,
    )?;
    let sigma_rows: Vec<Vec<f64>> = (0..grid.n)
        .map(|i| vec![grid.point(i), sp.sigma[i], sp.sigma_q3(i)])
        .collect();
    write_csv(&dir.join("sigma.csv"), &["lambda", "sigma", "sigma_q3"], &sigma_rows)?;
    let fhat_rows: Vec<Vec<f64>> = (0..grid.n)
        .map(|i| {
            let l = grid.point(i);
            let f = engine.weight.fhat_at(l);
            let g = engine.weight.ghat_at(l);
            vec![l, f.re, f.im, g.re, g.im]
        })
        .collect();
    write_csv(
        &dir.join("fhat.csv"),
        &["lambda", "fhat_re", "fhat_im", "ghat_re", "ghat_im"],
        &fhat_rows,
    )?;
    if let Some(j) = j {
        // Frame-traced kernel slice through λ' ≈ 0.
        let j0 = grid.nearest(0.0);
        let rows: Vec<Vec<f64>> = (0..grid.n)
            .map(|i| {
                let mut v = C64::new(0.0, 0.0);
                for a in 0..4 {
                    v += j.entry(i, j0, a, a);
                }
                vec![grid.point(i), v.re, v.im]
            })
            .collect();
        write_csv(
            &dir.join("kernel.csv"),
            &["lambda", "j_trace_re", "j_trace_im"],
            &rows,
        )?;
    }
    Ok(())
}

fn write_rho_csvs(
    dir: &Path,
    engine: &Engine,
    prep: &Prepared,
    corpus: &[(String, OwnedState)],
) -> Result<()> {
    for (id, st) in corpus {
        let label = st.label();
        let blocks = two_point_blocks(&label, &prep.wl)?;
        let rho = energy_density(&blocks, &engine.weight.tau_grid);
        let rows: Vec<Vec<f64>> = (0..rho.grid.n)
            .map(|i| vec![rho.grid.point(i), rho.rho[i]])
            .collect();
        write_csv(
            &dir.join(format!("rho_{}.csv", sanitize_id(id))),
            &["tau", "rho"],
            &rows,
        )?;
    }
    Ok(())
}

fn write_report(dir: &Path, report: &RunReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(dir.join("report.json"), text)?;
    Ok(())
}

// ---------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------

fn base_report(cfg: &RunConfig, mode: Mode) -> RunReport {
    RunReport {
        version: env!("CARGO_PKG_VERSION").into(),
        mode: mode.name().into(),
        config: cfg.clone(),
        bound: None,
        states: Vec::new(),
        checks: Vec::new(),
        warnings: Vec::new(),
        min_i_time: None,
        min_margin: None,
    }
}

/// Runs a command end to end: computes, writes artifacts into the
/// resolved output directory, and returns the report plus exit code.
///
/// Output directory precedence: `out_override` (the CLI flag or the
/// `QWEI_OUT` environment variable, resolved by the caller), then the
/// configured `output_dir`.
pub fn execute(
    cfg: RunConfig,
    mode_override: Option<Mode>,
    strict: bool,
    out_override: Option<PathBuf>,
) -> Result<Outcome> {
    let mode = mode_override.unwrap_or(cfg.mode);
    let out_dir = out_override.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    std::fs::create_dir_all(&out_dir)?;

    // Degenerate self-check path: with no modes below the cutoff the
    // spectra are identically zero and only the state-independent algebra
    // can be (and is) checked.
    if mode == Mode::Selfcheck {
        let gammas = build_standard_gammas();
        if let Err(Error::EmptyBasis { .. }) =
            build_mode_basis(cfg.basis.l, cfg.basis.m, cfg.basis.k_max, &gammas)
        {
            let frame = frame_vectors(&gammas);
            let mut report = base_report(&cfg, mode);
            report.checks = algebra_checks(&gammas, &frame);
            report.checks.push(CheckRow {
                name: "zero_spectra".into(),
                passed: true,
                detail: "no modes below the cutoff; spectra identically zero".into(),
            });
            let exit = if report.checks.iter().all(|c| c.passed) {
                EXIT_OK
            } else {
                EXIT_SELFCHECK
            };
            write_report(&out_dir, &report)?;
            return Ok(Outcome {
                report,
                exit,
                out_dir,
            });
        }
    }

    let engine = Engine::new(cfg)?;
    let prep = engine.prepare()?;
    let mut report = base_report(&engine.cfg, mode);

    let exit = match mode {
        Mode::Bound => {
            let (bound, j) = engine.bound(&prep)?;
            report.checks = engine.certification_checks(&prep, &bound)?;
            report.warnings = bound.warnings.clone();
            report.bound = Some(bound);
            write_spectra_csvs(&out_dir, &engine, &prep, Some(&j))?;
            let failed = report.checks.iter().any(|c| !c.passed);
            if failed || (strict && !report.warnings.is_empty()) {
                EXIT_CERTIFICATION
            } else {
                EXIT_OK
            }
        }
        Mode::Verify => {
            let (bound, _) = engine.bound(&prep)?;
            let corpus = engine.corpus()?;
            let states = engine.evaluate_states(&prep, &corpus, bound.total)?;
            report.warnings = bound.warnings.clone();
            report.min_i_time = states.iter().map(|s| s.i_time).fold(None, fold_min);
            report.min_margin = states.iter().map(|s| s.margin).fold(None, fold_min);
            let tol = MARGIN_TOL * (1.0 + bound.total);
            let violated = states.iter().any(|s| s.margin < -tol);
            report.checks.push(CheckRow {
                name: "bound_holds_on_corpus".into(),
                passed: !violated,
                detail: format!(
                    "min margin {:.6e} over {} states (tolerance −{:.3e})",
                    report.min_margin.unwrap_or(f64::NAN),
                    states.len(),
                    tol
                ),
            });
            report.states = states;
            report.bound = Some(bound);
            if violated {
                EXIT_VIOLATION
            } else if strict && !report.warnings.is_empty() {
                EXIT_CERTIFICATION
            } else {
                EXIT_OK
            }
        }
        Mode::Selfcheck => {
            report.checks = engine.selfcheck(&prep)?;
            if report.checks.iter().all(|c| c.passed) {
                EXIT_OK
            } else {
                EXIT_SELFCHECK
            }
        }
        Mode::Spectra => {
            write_spectra_csvs(&out_dir, &engine, &prep, None)?;
            let corpus = engine.corpus()?;
            write_rho_csvs(&out_dir, &engine, &prep, &corpus)?;
            EXIT_OK
        }
    };

    write_report(&out_dir, &report)?;
    Ok(Outcome {
        report,
        exit,
        out_dir,
    })
}

fn fold_min(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(match acc {
        Some(a) => a.min(v),
        None => v,
    })
}

/// Exit code implied by a hard error: configuration and I/O problems are
/// exit 2, failed numerical certification is exit 3.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::TailEstimateFailed(_)
        | Error::InconsistentParts(_)
        | Error::InsufficientRange(_)
        | Error::ConstraintProjectionFailed { .. } => EXIT_CERTIFICATION,
        _ => EXIT_CONFIG,
    }
}
