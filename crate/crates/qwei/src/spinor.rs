//! Dirac gamma matrices, the frame decomposition of γ₀, and the
//! plane-wave mode basis of the Dirac field on a spatial 3-torus.
//!
//! Conventions: metric signature (+,−,−,−); natural units ħ = c = 1;
//! the standard (Dirac) representation with γ₀ = diag(𝟙₂, −𝟙₂) and the
//! spatial matrices built from Pauli blocks. Spinors carry unit
//! normalization u†u = v†v = 1, so mode sums carry explicit 1/L³ volume
//! factors and the massless limit stays regular.

use crate::error::{Error, Result};
use crate::{linalg, CMatrix, CVector, C64};
use serde::{Deserialize, Serialize};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// The four Dirac matrices γ₀..γ₃ in a standard representation.
#[derive(Debug, Clone)]
pub struct GammaSet {
    pub gamma: [CMatrix; 4],
}

/// Max-norm residuals of the defining identities of a [`GammaSet`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    /// max over (a,b) of ‖γ_a γ_b + γ_b γ_a − 2η_ab 𝟙‖_max.
    pub clifford_residual: f64,
    /// max of ‖γ₀ − γ₀†‖_max and ‖γ_k + γ_k†‖_max for k = 1,2,3.
    pub adjointness_residual: f64,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.clifford_residual <= 1e-14 && self.adjointness_residual <= 1e-14
    }
}

/// Builds the Dirac representation: γ₀ = diag(𝟙₂, −𝟙₂),
/// γ_k = [[0, σ_k], [−σ_k, 0]].
pub fn build_standard_gammas() -> GammaSet {
    let paulis = pauli_matrices();
    let mut gamma = Vec::with_capacity(4);

    let mut g0 = CMatrix::zeros(4, 4);
    for i in 0..2 {
        g0[(i, i)] = ONE;
        g0[(i + 2, i + 2)] = -ONE;
    }
    gamma.push(g0);

    for sigma in &paulis {
        let mut g = CMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                g[(i, j + 2)] = sigma[(i, j)];
                g[(i + 2, j)] = -sigma[(i, j)];
            }
        }
        gamma.push(g);
    }

    GammaSet {
        gamma: gamma.try_into().expect("exactly four matrices"),
    }
}

/// The 2×2 Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli_matrices() -> [CMatrix; 3] {
    let i = C64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Reports the max-norm residuals of the Clifford relation
/// γ_a γ_b + γ_b γ_a = 2η_ab 𝟙 (η = diag(1,−1,−1,−1)) and of the
/// standard-representation adjointness conditions.
pub fn verify_gamma_set(g: &GammaSet) -> ValidationReport {
    let eye = CMatrix::identity(4, 4);
    let eta = [1.0, -1.0, -1.0, -1.0];
    let mut clifford = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            let anti = &g.gamma[a] * &g.gamma[b] + &g.gamma[b] * &g.gamma[a];
            let target = if a == b {
                &eye * C64::new(2.0 * eta[a], 0.0)
            } else {
                CMatrix::zeros(4, 4)
            };
            clifford = clifford.max(linalg::max_abs(&(anti - target)));
        }
    }
    let mut adjoint = linalg::max_abs(&(&g.gamma[0] - g.gamma[0].adjoint()));
    for k in 1..4 {
        adjoint = adjoint.max(linalg::max_abs(&(&g.gamma[k] + g.gamma[k].adjoint())));
    }
    ValidationReport {
        clifford_residual: clifford,
        adjointness_residual: adjoint,
    }
}

/// Frame spinors v_A decomposing γ₀ = Σ_A v_A ⊗ v_A⁺.
#[derive(Debug, Clone)]
pub struct FrameVectors {
    /// v_A, A = 1..4 (stored 0-based).
    pub v: [CVector; 4],
    /// Dirac adjoints v_A⁺ stored as plain component vectors: the pairing
    /// with a spinor ψ is Σ_B v_plus[A][B] ψ[B], no extra conjugation.
    pub v_plus: [CVector; 4],
}

/// Frame vectors v_A = E_A (standard basis of ℂ⁴); then
/// Σ_A v_A ⊗ v_A⁺ = Σ_A E_A E_A† γ₀ = γ₀ exactly.
pub fn frame_vectors(g: &GammaSet) -> FrameVectors {
    let mut v = Vec::with_capacity(4);
    let mut v_plus = Vec::with_capacity(4);
    for a in 0..4 {
        let mut e = CVector::zeros(4);
        e[a] = ONE;
        // v_A⁺ components: (conj v_A)ᵀ γ₀ as a vector.
        let vp = g.gamma[0].transpose() * e.map(|z| z.conj());
        v.push(e);
        v_plus.push(vp);
    }
    FrameVectors {
        v: v.try_into().expect("four frame vectors"),
        v_plus: v_plus.try_into().expect("four adjoints"),
    }
}

/// One plane-wave mode of the field: a lattice wave-vector and a spin.
#[derive(Debug, Clone)]
pub struct Mode {
    /// Integer lattice coordinates: k = (2π/L)·n.
    pub n: [i64; 3],
    /// Wave-vector components.
    pub k: [f64; 3],
    /// Spin index, 0 or 1.
    pub s: usize,
    /// Frequency ω = √(|k|² + m²).
    pub omega: f64,
    /// Particle spinor u_s(k), unit normalized.
    pub u: CVector,
    /// Antiparticle spinor v_s(k), unit normalized.
    pub v: CVector,
}

/// The truncated plane-wave basis on the 3-torus of side `L`.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    pub l: f64,
    pub m: f64,
    pub k_max: f64,
    /// Modes in deterministic lexicographic order (n, then s).
    pub modes: Vec<Mode>,
    /// True iff the massless zero mode was dropped.
    pub zero_mode_excluded: bool,
}

impl ModeBasis {
    /// Number of (k,s) modes N.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Spatial volume L³.
    pub fn volume(&self) -> f64 {
        self.l.powi(3)
    }

    /// Largest mode frequency (0 for an empty basis).
    pub fn omega_max(&self) -> f64 {
        self.modes.iter().fold(0.0, |acc, m| acc.max(m.omega))
    }

    /// Index of the mode with lattice vector `n` and spin `s`.
    pub fn find(&self, n: [i64; 3], s: usize) -> Option<usize> {
        self.modes.iter().position(|m| m.n == n && m.s == s)
    }

    /// A short fingerprint of the basis parameters, used to detect
    /// mismatched state/worldline pairings.
    pub fn id(&self) -> String {
        format!(
            "L={:.12e};m={:.12e};Kmax={:.12e};N={}",
            self.l,
            self.m,
            self.k_max,
            self.modes.len()
        )
    }
}

/// Enumerates all lattice modes with |k| ≤ K_max (the k = 0 mode is
/// dropped when m = 0, where the plane-wave construction degenerates).
pub fn build_mode_basis(l: f64, m: f64, k_max: f64, g: &GammaSet) -> Result<ModeBasis> {
    assert!(l > 0.0 && m >= 0.0 && k_max > 0.0, "invalid basis parameters");
    let dk = 2.0 * std::f64::consts::PI / l;
    let n_max = (k_max / dk).floor() as i64;
    let paulis = pauli_matrices();
    let mut modes = Vec::new();
    let mut zero_mode_excluded = false;

    for nx in -n_max..=n_max {
        for ny in -n_max..=n_max {
            for nz in -n_max..=n_max {
                let n = [nx, ny, nz];
                let k = [dk * nx as f64, dk * ny as f64, dk * nz as f64];
                let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if k2.sqrt() > k_max + 1e-12 * k_max {
                    continue;
                }
                if m == 0.0 && n == [0, 0, 0] {
                    zero_mode_excluded = true;
                    continue;
                }
                let omega = (k2 + m * m).sqrt();
                for s in 0..2 {
                    let (u, v) = mode_spinors(&paulis, k, omega, m, s);
                    modes.push(Mode {
                        n,
                        k,
                        s,
                        omega,
                        u,
                        v,
                    });
                }
            }
        }
    }

    if modes.is_empty() {
        return Err(Error::EmptyBasis { l, m, k_max });
    }
    // Sanity: the construction is exact up to round-off; keep a cheap
    // residual check on the first mode as a tripwire.
    debug_assert!(dirac_residual(g, &modes[0], true) < 1e-12);
    Ok(ModeBasis {
        l,
        m,
        k_max,
        modes,
        zero_mode_excluded,
    })
}

/// u_s(k) = c (χ_s, (σ·k)/(ω+m) χ_s), v_s(k) = c ((σ·k)/(ω+m) χ_s, χ_s),
/// c = √((ω+m)/2ω), giving u†u = v†v = 1.
fn mode_spinors(paulis: &[CMatrix; 3], k: [f64; 3], omega: f64, m: f64, s: usize) -> (CVector, CVector) {
    let mut sigma_k = CMatrix::zeros(2, 2);
    for (j, sigma) in paulis.iter().enumerate() {
        sigma_k += sigma * C64::new(k[j], 0.0);
    }
    let mut chi = CVector::zeros(2);
    chi[s] = ONE;
    let lower = (&sigma_k * &chi) / C64::new(omega + m, 0.0);
    let c = ((omega + m) / (2.0 * omega)).sqrt();

    let mut u = CVector::zeros(4);
    let mut v = CVector::zeros(4);
    for i in 0..2 {
        u[i] = chi[i] * c;
        u[i + 2] = lower[i] * c;
        v[i] = lower[i] * c;
        v[i + 2] = chi[i] * c;
    }
    (u, v)
}

/// ‖(ω γ⁰ − γ·k ∓ m) w‖ for w = u (minus sign) or w = v (plus sign); the
/// mass is recovered from the mode's dispersion relation.
pub fn dirac_residual(g: &GammaSet, mode: &Mode, particle: bool) -> f64 {
    let k2: f64 = mode.k.iter().map(|x| x * x).sum();
    let m = (mode.omega * mode.omega - k2).max(0.0).sqrt();
    let (w, m_sign) = if particle {
        (&mode.u, -1.0)
    } else {
        (&mode.v, 1.0)
    };
    let mut op = &g.gamma[0] * C64::new(mode.omega, 0.0);
    for j in 0..3 {
        op -= &g.gamma[j + 1] * C64::new(mode.k[j], 0.0);
    }
    op += CMatrix::identity(4, 4) * C64::new(m_sign * m, 0.0);
    (op * w).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma0_squares_to_identity() {
        let g = build_standard_gammas();
        let sq = &g.gamma[0] * &g.gamma[0];
        assert_eq!(linalg::max_abs(&(sq - CMatrix::identity(4, 4))), 0.0);
    }

    #[test]
    fn gamma1_gamma2_anticommute() {
        let g = build_standard_gammas();
        let anti = &g.gamma[1] * &g.gamma[2] + &g.gamma[2] * &g.gamma[1];
        assert_eq!(linalg::max_abs(&anti), 0.0);
    }

    #[test]
    fn spatial_gammas_antihermitian() {
        let g = build_standard_gammas();
        let max_res = (1..4)
            .map(|k| linalg::max_abs(&(&g.gamma[k] + g.gamma[k].adjoint())))
            .fold(0.0f64, f64::max);
        assert_eq!(max_res, 0.0);
    }

    #[test]
    fn standard_gammas_validate_exactly() {
        let rep = verify_gamma_set(&build_standard_gammas());
        assert_eq!(rep.clifford_residual, 0.0);
        assert_eq!(rep.adjointness_residual, 0.0);
        assert!(rep.passes());
    }

    #[test]
    fn scaled_gamma_breaks_clifford() {
        let mut g = build_standard_gammas();
        g.gamma[1] *= C64::new(1.1, 0.0);
        let rep = verify_gamma_set(&g);
        // (1.1² − 1)·2 = 0.42 on the (1,1) relation.
        assert_relative_eq!(rep.clifford_residual, 0.42, max_relative = 1e-12);
        assert!(!rep.passes());
    }

    #[test]
    fn swapped_gamma0_breaks_adjointness() {
        let mut g = build_standard_gammas();
        g.gamma[0] = g.gamma[1].clone();
        let rep = verify_gamma_set(&g);
        assert!(rep.adjointness_residual > 1.0);
        assert!(!rep.passes());
    }

    #[test]
    fn frame_decomposes_gamma0() {
        let g = build_standard_gammas();
        let f = frame_vectors(&g);
        let mut sum = CMatrix::zeros(4, 4);
        for a in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    sum[(i, j)] += f.v[a][i] * f.v_plus[a][j];
                }
            }
        }
        assert_eq!(linalg::max_abs(&(sum - &g.gamma[0])), 0.0);
        // Component read-off: v₁⁺ paired with v₁ gives (γ₀)₁₁ = 1.
        let p: C64 = f.v_plus[0].dot(&f.v[0].map(|z| z.conj()));
        assert_eq!(p, ONE);
    }

    #[test]
    fn unit_torus_mode_count() {
        // L = 2π makes the lattice spacing 1: k = 0 plus the 6 unit
        // vectors survive |k| ≤ 1, times 2 spins.
        let g = build_standard_gammas();
        let b = build_mode_basis(2.0 * std::f64::consts::PI, 1.0, 1.0, &g).unwrap();
        assert_eq!(b.len(), 14);
    }

    #[test]
    fn rest_frame_spinors() {
        let g = build_standard_gammas();
        let b = build_mode_basis(2.0 * std::f64::consts::PI, 1.0, 0.5, &g).unwrap();
        assert_eq!(b.len(), 2); // only k = 0, two spins
        let m0 = &b.modes[0];
        assert_relative_eq!(m0.omega, 1.0, max_relative = 1e-15);
        // u_s(0) is the upper-block standard basis vector.
        assert_relative_eq!(m0.u[0].re, 1.0, max_relative = 1e-15);
        assert!(m0.u.rows(1, 3).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn dirac_equation_residuals() {
        let g = build_standard_gammas();
        let b = build_mode_basis(6.3, 1.0, 1.5, &g).unwrap();
        for mode in &b.modes {
            assert!(dirac_residual(&g, mode, true) <= 1e-12);
            assert!(dirac_residual(&g, mode, false) <= 1e-12);
        }
    }

    #[test]
    fn orthonormality_and_cross_orthogonality() {
        let g = build_standard_gammas();
        let b = build_mode_basis(6.3, 1.0, 1.5, &g).unwrap();
        for mode in &b.modes {
            assert_relative_eq!(mode.u.dotc(&mode.u).re, 1.0, max_relative = 1e-12);
            assert_relative_eq!(mode.v.dotc(&mode.v).re, 1.0, max_relative = 1e-12);
        }
        // u_r(k)† v_s(−k) = 0 for every k and all spin pairs.
        for mode in &b.modes {
            let flipped = [-mode.n[0], -mode.n[1], -mode.n[2]];
            for s in 0..2 {
                let j = b.find(flipped, s).expect("basis closed under k → −k");
                let overlap = b.modes[j].v.dotc(&mode.u).norm();
                assert!(overlap <= 1e-12, "overlap {overlap}");
            }
        }
    }

    #[test]
    fn energy_projector_completeness() {
        let g = build_standard_gammas();
        let b = build_mode_basis(6.3, 1.0, 1.5, &g).unwrap();
        // Collect distinct k-vectors via spin-0 entries.
        for mode in b.modes.iter().filter(|m| m.s == 0) {
            let mut sum = CMatrix::zeros(4, 4);
            let flipped = [-mode.n[0], -mode.n[1], -mode.n[2]];
            for s in 0..2 {
                let iu = b.find(mode.n, s).unwrap();
                let iv = b.find(flipped, s).unwrap();
                let u = &b.modes[iu].u;
                let v = &b.modes[iv].v;
                for i in 0..4 {
                    for j in 0..4 {
                        sum[(i, j)] += u[i] * u[j].conj() + v[i] * v[j].conj();
                    }
                }
            }
            let res = linalg::max_abs(&(sum - CMatrix::identity(4, 4)));
            assert!(res <= 1e-12, "completeness residual {res}");
        }
    }

    #[test]
    fn deterministic_enumeration() {
        let g = build_standard_gammas();
        let a = build_mode_basis(6.3, 1.0, 1.5, &g).unwrap();
        let b = build_mode_basis(6.3, 1.0, 1.5, &g).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.modes.iter().zip(&b.modes) {
            assert_eq!(x.n, y.n);
            assert_eq!(x.s, y.s);
            assert_eq!(x.u, y.u);
        }
    }

    #[test]
    fn massless_zero_mode_excluded() {
        let g = build_standard_gammas();
        let b = build_mode_basis(2.0 * std::f64::consts::PI, 0.0, 1.0, &g).unwrap();
        assert!(b.zero_mode_excluded);
        assert_eq!(b.len(), 12); // 6 unit vectors × 2 spins
        for mode in &b.modes {
            let knorm: f64 = mode.k.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_relative_eq!(mode.omega, knorm, max_relative = 1e-14);
        }
    }

    #[test]
    fn empty_basis_is_an_error() {
        let g = build_standard_gammas();
        let err = build_mode_basis(2.0 * std::f64::consts::PI, 0.0, 0.5, &g);
        assert!(matches!(err, Err(Error::EmptyBasis { .. })));
    }
}
