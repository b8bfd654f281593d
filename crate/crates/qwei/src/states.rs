//! Quantum states of the truncated Dirac field and their worldline
//! observables: quasifree labels Q, explicit Fock vectors, normal-ordered
//! two-point blocks, energy density, and weighted time averages.
//!
//! The doubled mode space has dimension 2N (N = number of (k,s) modes):
//! indices 0..N form the particle sector, N..2N the antiparticle sector.
//! The canonical annihilator list is O_j = b_j for j < N and O_{N+j} =
//! d_j† for j < N, so every state is summarized by the correlator matrix
//!
//! ```text
//! R_{jk} = ⟨O_j† O_k⟩,   0 ≤ R ≤ 1,   vacuum: R = P = diag(0_N, 1_N).
//! ```
//!
//! The frame-contracted field components along the worldline are
//! (γ₀Ψ)_A(τ) = Σ_j O_j c_j(A) e^{−i s_j τ} with s_j = +ω_j (particle),
//! −ω_j (antiparticle) and c_j(A) the γ₀-rotated spinor components over
//! √L³. Every two-point block is then a finite "sandwich"
//! E(τ)† M E(τ') with a 2N×2N middle M, which keeps all kernels,
//! transforms, and derivatives analytic in τ — no finite differencing
//! enters the headline inequality.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::linalg;
use crate::spinor::ModeBasis;
use crate::weights::Weight;
use crate::worldline::{Sector, WorldlineConfig};
use crate::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------
// Quasifree labels
// ---------------------------------------------------------------------

/// A quasifree state label: a hermitian 2N×2N matrix with spectrum in
/// [0,1] satisfying Q + ΓQΓ = 𝟙.
#[derive(Debug, Clone)]
pub struct QOperator {
    pub matrix: CMatrix,
    pub basis_id: String,
}

/// Residuals of the defining properties of a Q label.
#[derive(Debug, Clone, Copy)]
pub struct QValidation {
    /// How far the spectrum exits [0,1] (0 when inside).
    pub spectrum_excess: f64,
    /// ‖Q + ΓQΓ − 𝟙‖_max.
    pub symmetry_residual: f64,
    /// ‖Q − Q†‖_max.
    pub hermiticity_residual: f64,
}

impl QValidation {
    pub fn passes(&self) -> bool {
        self.spectrum_excess <= 1e-10
            && self.symmetry_residual <= 1e-10
            && self.hermiticity_residual <= 1e-10
    }
}

/// The charge conjugation acting on matrices: Γ M Γ = S conj(M) S with S
/// the particle/antiparticle block swap (Γ itself is antiunitary).
pub fn gamma_conj(m: &CMatrix) -> CMatrix {
    let dim = m.nrows();
    let n = dim / 2;
    CMatrix::from_fn(dim, dim, |i, j| {
        let si = (i + n) % dim;
        let sj = (j + n) % dim;
        m[(si, sj)].conj()
    })
}

/// The vacuum label P = diag(0_N, 1_N): the reference state's two-point
/// function ⟨Ψ⁺Ψ⟩ is carried entirely by the antiparticle block
/// (⟨d d†⟩ = 1), which puts the Γ-sector spectral mass at positive λ.
pub fn vacuum_projection(basis: &ModeBasis) -> QOperator {
    let n = basis.len();
    let mut p = CMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        p[(n + j, n + j)] = C64::new(1.0, 0.0);
    }
    QOperator {
        matrix: p,
        basis_id: basis.id(),
    }
}

/// Checks properties (I) and (II) of a label.
pub fn validate_q(q: &QOperator) -> QValidation {
    let m = &q.matrix;
    let herm = linalg::max_abs(&(m - m.adjoint()));
    let evs = linalg::hermitian_eigenvalues(m);
    let excess = evs
        .iter()
        .map(|&x| (-x).max(x - 1.0).max(0.0))
        .fold(0.0, f64::max);
    let dim = m.nrows();
    let sym = linalg::max_abs(&(m + gamma_conj(m) - CMatrix::identity(dim, dim)));
    QValidation {
        spectrum_excess: excess,
        symmetry_residual: sym,
        hermiticity_residual: herm,
    }
}

/// Draws a random label: a rank-`rank` hermitian perturbation of P,
/// Γ-antisymmetrized so Q + ΓQΓ = 𝟙 holds exactly before clipping, then
/// projected back onto the constraint set by alternating spectral
/// clipping to [0,1] with Γ-symmetrization. Deterministic per seed.
pub fn random_hadamard_q(
    basis: &ModeBasis,
    rank: usize,
    strength: f64,
    seed: u64,
) -> Result<QOperator> {
    assert!(strength > 0.0 && strength <= 1.0, "strength in (0,1]");
    let n = basis.len();
    assert!(rank >= 1 && rank <= n, "rank in 1..=N");
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random rank-r hermitian ΔP = Σ η_i x_i x_i†.
    let mut dp = CMatrix::zeros(dim, dim);
    for i in 0..rank {
        let x = CMatrix::from_fn(dim, 1, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let x = &x / C64::new(x.norm().max(1e-300), 0.0);
        let eta = if i % 2 == 0 { 1.0 } else { -1.0 };
        dp += &x * x.adjoint() * C64::new(eta, 0.0);
    }

    let p = vacuum_projection(basis).matrix;
    let asym = (&dp - gamma_conj(&dp)) * C64::new(0.5, 0.0);
    let mut q = &p + asym * C64::new(strength, 0.0);

    let eye = CMatrix::identity(dim, dim);
    for iter in 0..1000 {
        let v = validate_q(&QOperator {
            matrix: q.clone(),
            basis_id: String::new(),
        });
        if v.passes() {
            return Ok(QOperator {
                matrix: q,
                basis_id: basis.id(),
            });
        }
        q = linalg::spectral_clip(&linalg::hermitize(&q), 0.0, 1.0);
        q = (&q + &eye - gamma_conj(&q)) * C64::new(0.5, 0.0);
        if iter == 999 {
            let v = validate_q(&QOperator {
                matrix: q.clone(),
                basis_id: String::new(),
            });
            if v.passes() {
                return Ok(QOperator {
                    matrix: q,
                    basis_id: basis.id(),
                });
            }
            return Err(Error::ConstraintProjectionFailed {
                iterations: 1000,
                residual: v.spectrum_excess.max(v.symmetry_residual),
            });
        }
    }
    unreachable!("loop returns or errors")
}

// ---------------------------------------------------------------------
// Fock vectors
// ---------------------------------------------------------------------

/// One occupation pattern: sorted particle and antiparticle mode indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occupation {
    pub particles: Vec<usize>,
    pub antiparticles: Vec<usize>,
}

impl Occupation {
    pub fn vacuum() -> Self {
        Self {
            particles: vec![],
            antiparticles: vec![],
        }
    }
}

/// A normalized superposition of Fock basis vectors. The canonical
/// operator ordering is particles ascending, then antiparticles
/// ascending, acting on the vacuum; sorting a user-supplied pattern
/// folds the fermionic sign into the coefficient.
#[derive(Debug, Clone)]
pub struct StateSpec {
    pub terms: Vec<(C64, Occupation)>,
    pub label: String,
}

/// Sorts `v` ascending, returning the permutation parity (+1.0/−1.0), or
/// None if an index repeats (Pauli exclusion).
fn sort_with_parity(v: &mut [usize]) -> Option<f64> {
    // Insertion sort with swap counting: patterns are tiny.
    let mut swaps = 0usize;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some(if swaps % 2 == 0 { 1.0 } else { -1.0 })
}

impl StateSpec {
    /// Builds a state from (coefficient, particles, antiparticles)
    /// triples; validates Pauli exclusion, distinct patterns, and unit
    /// norm (tolerance 1e−12).
    pub fn new(
        label: impl Into<String>,
        raw: Vec<(C64, Vec<usize>, Vec<usize>)>,
        basis: &ModeBasis,
    ) -> Result<Self> {
        let n = basis.len();
        let mut terms: Vec<(C64, Occupation)> = Vec::with_capacity(raw.len());
        for (coeff, mut p, mut a) in raw {
            if p.iter().chain(a.iter()).any(|&j| j >= n) {
                return Err(Error::InvalidState(format!(
                    "mode index out of range (N = {n})"
                )));
            }
            let sp = sort_with_parity(&mut p)
                .ok_or_else(|| Error::InvalidState("repeated particle index".into()))?;
            let sa = sort_with_parity(&mut a)
                .ok_or_else(|| Error::InvalidState("repeated antiparticle index".into()))?;
            terms.push((
                coeff * C64::new(sp * sa, 0.0),
                Occupation {
                    particles: p,
                    antiparticles: a,
                },
            ));
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if terms[i].1 == terms[j].1 {
                    return Err(Error::InvalidState("duplicate occupation pattern".into()));
                }
            }
        }
        let norm2: f64 = terms.iter().map(|(c, _)| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "state norm² = {norm2}, expected 1"
            )));
        }
        Ok(Self {
            terms,
            label: label.into(),
        })
    }

    /// The vacuum vector.
    pub fn vacuum(basis: &ModeBasis) -> Self {
        let _ = basis;
        Self {
            terms: vec![(C64::new(1.0, 0.0), Occupation::vacuum())],
            label: "vacuum".into(),
        }
    }

    /// Correlator matrix R_{jk} = ⟨O_j† O_k⟩ over the doubled mode space,
    /// evaluated by explicit fermionic Fock algebra.
    pub fn correlators(&self, basis: &ModeBasis) -> CMatrix {
        let n = basis.len();
        let dim = 2 * n;
        // φ_j = O_j |ψ⟩ for every canonical annihilator; R = Gram(φ).
        let images: Vec<BTreeMap<Occupation, C64>> = (0..dim)
            .map(|j| {
                let mut acc: BTreeMap<Occupation, C64> = BTreeMap::new();
                for (coeff, occ) in &self.terms {
                    let applied = if j < n {
                        apply_annihilate(&occ.particles, j)
                            .map(|(s, p)| (s, p, occ.antiparticles.clone()))
                    } else {
                        // d† acts after passing all particle operators.
                        let extra = if occ.particles.len() % 2 == 0 { 1.0 } else { -1.0 };
                        apply_create(&occ.antiparticles, j - n)
                            .map(|(s, a)| (s * extra, occ.particles.clone(), a))
                    };
                    if let Some((sign, particles, antiparticles)) = applied {
                        let key = Occupation {
                            particles,
                            antiparticles,
                        };
                        *acc.entry(key).or_insert(C64::new(0.0, 0.0)) +=
                            coeff * C64::new(sign, 0.0);
                    }
                }
                acc
            })
            .collect();

        CMatrix::from_fn(dim, dim, |j, k| fock_inner(&images[j], &images[k]))
    }
}

/// Annihilates index `j` from a sorted occupation list: Some(sign, rest)
/// if present (sign = (−1)^position), None otherwise.
fn apply_annihilate(list: &[usize], j: usize) -> Option<(f64, Vec<usize>)> {
    let pos = list.iter().position(|&x| x == j)?;
    let mut out = list.to_vec();
    out.remove(pos);
    Some((if pos % 2 == 0 { 1.0 } else { -1.0 }, out))
}

/// Creates index `j` in a sorted occupation list: Some(sign, extended)
/// unless already occupied.
fn apply_create(list: &[usize], j: usize) -> Option<(f64, Vec<usize>)> {
    if list.contains(&j) {
        return None;
    }
    let pos = list.partition_point(|&x| x < j);
    let mut out = list.to_vec();
    out.insert(pos, j);
    Some((if pos % 2 == 0 { 1.0 } else { -1.0 }, out))
}

/// ⟨φ|χ⟩ between occupation-expansion maps.
fn fock_inner(phi: &BTreeMap<Occupation, C64>, chi: &BTreeMap<Occupation, C64>) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (occ, c) in phi {
        if let Some(d) = chi.get(occ) {
            acc += c.conj() * d;
        }
    }
    acc
}

// ---------------------------------------------------------------------
// Two-point blocks along the worldline
// ---------------------------------------------------------------------

/// A state given either as a quasifree label or a Fock vector.
pub enum StateLabel<'a> {
    Quasifree(&'a QOperator),
    Vector(&'a StateSpec),
}

impl StateLabel<'_> {
    pub fn id(&self) -> String {
        match self {
            StateLabel::Quasifree(_) => "quasifree".into(),
            StateLabel::Vector(s) => s.label.clone(),
        }
    }
}

/// The four projected two-point blocks of a state, in factored form: each
/// block kernel is B_{AB}(τ,τ') = w(τ)w(τ')·(E(τ)† M E(τ'))_{AB} with a
/// constant 2N×2N middle M. Block order: ω^{·Γ·}, ω^{Γ··}, ω^{··Γ},
/// ω^{Γ·Γ}; the normal-ordered assembly is −B₀ + B₁ + B₂ + B₃, whose
/// middle collapses to ΔR = R − P.
pub struct TwoPointBlocks<'a, 'b> {
    pub cfg: &'a WorldlineConfig<'b>,
    /// Middles of the four blocks.
    pub middles: [CMatrix; 4],
    /// R − P.
    pub delta_r: CMatrix,
    /// Frame coefficients c_j(A): 2N×4, row j.
    pub coeffs: CMatrix,
    /// Phase frequencies s_j (+ω particle, −ω antiparticle).
    pub s: Vec<f64>,
    pub state_id: String,
}

/// Frame coefficient matrix (2N×4) and phase frequencies of the basis:
/// row j < N is (γ₀u_j)_A/√L³ with s_j = +ω_j; row N+j is (γ₀v_j)_A/√L³
/// with s_{N+j} = −ω_j.
pub fn mode_frame_data(cfg: &WorldlineConfig) -> (CMatrix, Vec<f64>) {
    let n = cfg.basis.len();
    let pu = cfg.frame_profiles(Sector::Gamma); // 4×N of (γ₀u)_A/√L³
    let pv = cfg.frame_profiles(Sector::Dot); // 4×N of (γ₀v)_A/√L³
    let mut coeffs = CMatrix::zeros(2 * n, 4);
    let mut s = vec![0.0; 2 * n];
    for j in 0..n {
        for a in 0..4 {
            coeffs[(j, a)] = pu[(a, j)];
            coeffs[(n + j, a)] = pv[(a, j)];
        }
        s[j] = cfg.basis.modes[j].omega;
        s[n + j] = -cfg.basis.modes[j].omega;
    }
    (coeffs, s)
}

/// Computes the four blocks of a state on the given worldline.
pub fn two_point_blocks<'a, 'b>(
    state: &StateLabel,
    cfg: &'a WorldlineConfig<'b>,
) -> Result<TwoPointBlocks<'a, 'b>> {
    let n = cfg.basis.len();
    let dim = 2 * n;
    let r = match state {
        StateLabel::Quasifree(q) => {
            if q.basis_id != cfg.basis.id() {
                return Err(Error::BasisMismatch(format!(
                    "state built on {}, worldline on {}",
                    q.basis_id,
                    cfg.basis.id()
                )));
            }
            q.matrix.clone()
        }
        StateLabel::Vector(spec) => spec.correlators(cfg.basis),
    };
    let p = vacuum_projection(cfg.basis).matrix;
    let one_minus_r = CMatrix::identity(dim, dim) - &r;

    // Sector projections: P^· = P, P^Γ = 𝟙 − P. Q routed through the
    // four-block identity with Q^Γ = 𝟙 − Q (compressed: 𝟙 − R):
    //   ω^{·Γ·}: P (𝟙−R) P,  ω^{Γ··}: P^Γ R P,
    //   ω^{··Γ}: P R P^Γ,    ω^{Γ·Γ}: P^Γ R P^Γ.
    let pg = CMatrix::identity(dim, dim) - &p;
    let middles = [
        &p * &one_minus_r * &p,
        &pg * &r * &p,
        &p * &r * &pg,
        &pg * &r * &pg,
    ];
    let delta_r = &r - &p;
    let (coeffs, s) = mode_frame_data(cfg);
    Ok(TwoPointBlocks {
        cfg,
        middles,
        delta_r,
        coeffs,
        s,
        state_id: state.id(),
    })
}

impl TwoPointBlocks<'_, '_> {
    /// E(τ): the 2N×4 matrix with rows c_j(A) e^{−i s_j τ}.
    pub fn e_matrix(&self, tau: f64) -> CMatrix {
        let mut e = self.coeffs.clone();
        for j in 0..e.nrows() {
            let phase = -self.s[j] * tau;
            let ph = C64::new(phase.cos(), phase.sin());
            for a in 0..4 {
                e[(j, a)] *= ph;
            }
        }
        e
    }

    /// Windowed kernel of one block at a pair of proper times (4×4).
    pub fn kernel_at(&self, block: usize, tau: f64, tau_p: f64) -> CMatrix {
        let w = &self.cfg.window;
        let g = &self.cfg.tau_grid;
        let ww = w[g.nearest(tau)] * w[g.nearest(tau_p)];
        self.e_matrix(tau).adjoint() * &self.middles[block] * self.e_matrix(tau_p)
            * C64::new(ww, 0.0)
    }

    /// Windowed assembled normal-ordered kernel −B₀+B₁+B₂+B₃ at (τ,τ').
    pub fn assembled_kernel_at(&self, tau: f64, tau_p: f64) -> CMatrix {
        let w = &self.cfg.window;
        let g = &self.cfg.tau_grid;
        let ww = w[g.nearest(tau)] * w[g.nearest(tau_p)];
        self.e_matrix(tau).adjoint() * &self.delta_r * self.e_matrix(tau_p) * C64::new(ww, 0.0)
    }

    /// F(λ): the 2N×4 matrix with rows c_j(A)·ŵ(λ − s_j); every windowed
    /// block transform factorizes as W^{blk}(λ,λ') = F(λ)† M_blk F(λ').
    pub fn f_matrix(&self, lambda: f64) -> CMatrix {
        let mut f = self.coeffs.clone();
        for j in 0..f.nrows() {
            let wh = self.cfg.what_at(lambda - self.s[j]);
            for a in 0..4 {
                f[(j, a)] *= wh;
            }
        }
        f
    }
}

// ---------------------------------------------------------------------
// Energy density and its time average
// ---------------------------------------------------------------------

/// Real samples of the normal-ordered energy density along the worldline.
#[derive(Debug, Clone)]
pub struct EnergyDensitySamples {
    pub grid: Grid1D,
    pub rho: Vec<f64>,
    /// Largest imaginary residue discarded when taking the real part.
    pub imag_residual: f64,
    pub state_id: String,
}

/// ρ(τ) = Σ_A coincidence of ½(i∂_{τ'} − i∂_τ) on the assembled kernel:
/// in factored form ρ(τ) = Σ_{jk} M'_{jk} O_{kj} e^{i(s_j − s_k)τ} with
/// M' = ½(S·ΔR + ΔR·S), S = diag(s_j), and the frame-summed overlaps
/// O_{kj} = Σ_A c_k(A) conj(c_j(A)). The derivative is analytic in the
/// mode phases — no finite differences.
pub fn energy_density(blocks: &TwoPointBlocks, grid: &Grid1D) -> EnergyDensitySamples {
    let dim = blocks.s.len();
    // Z_{jk} = M'_{jk} O_{kj}: the scalar weight of phase e^{i(s_j−s_k)τ}.
    let overlaps = &blocks.coeffs * blocks.coeffs.adjoint(); // O_{kj} at (k,j)
    let mut z = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in 0..dim {
            let mp = blocks.delta_r[(j, k)] * C64::new(0.5 * (blocks.s[j] + blocks.s[k]), 0.0);
            z[(j, k)] = mp * overlaps[(k, j)];
        }
    }
    let rows: Vec<(f64, f64)> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let tau = grid.point(i);
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..dim {
                for k in 0..dim {
                    let zjk = z[(j, k)];
                    if zjk.norm_sqr() == 0.0 {
                        continue;
                    }
                    let phase = (blocks.s[j] - blocks.s[k]) * tau;
                    acc += zjk * C64::new(phase.cos(), phase.sin());
                }
            }
            (acc.re, acc.im.abs())
        })
        .collect();
    let rho: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let imag_residual = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    EnergyDensitySamples {
        grid: grid.clone(),
        rho,
        imag_residual,
        state_id: blocks.state_id.clone(),
    }
}

/// I_time = ∫ ρ(τ) f(τ) dτ. The weight's support must sit inside the
/// interval where the worldline window is identically 1.
pub fn averaged_density(
    rho: &EnergyDensitySamples,
    f: &Weight,
    interval: (f64, f64),
) -> Result<f64> {
    let (f_lo, f_hi) = (f.tau_grid.lo, f.tau_grid.hi());
    if f_lo < interval.0 || f_hi > interval.1 {
        return Err(Error::SupportViolation {
            f_lo,
            f_hi,
            i_lo: interval.0,
            i_hi: interval.1,
        });
    }
    if !rho.grid.same_geometry(&f.tau_grid) {
        return Err(Error::GridMismatch(
            "energy density and weight use different τ-grids".into(),
        ));
    }
    let mut acc = 0.0;
    for i in 0..f.tau_grid.n {
        acc += f.tau_grid.weight(i) * rho.rho[i] * f.f[i];
    }
    Ok(acc)
}

// ---------------------------------------------------------------------
// Frequency-domain transforms of the blocks
// ---------------------------------------------------------------------

/// Sampled block transforms W_AB^{♯♮♭}(λ,λ') on a λ-grid square, stored
/// row-major as 4×4 matrices per (λ,λ') pair.
pub struct WGrids {
    pub grid: Grid1D,
    /// Blocks in the order ω^{·Γ·}, ω^{Γ··}, ω^{··Γ}, ω^{Γ·Γ}.
    pub blocks: [Vec<CMatrix>; 4],
    /// Assembled −W⁰ + W¹ + W² + W³.
    pub assembled: Vec<CMatrix>,
}

impl WGrids {
    pub fn at(&self, block: usize, i: usize, j: usize) -> &CMatrix {
        &self.blocks[block][i * self.grid.n + j]
    }

    pub fn assembled_at(&self, i: usize, j: usize) -> &CMatrix {
        &self.assembled[i * self.grid.n + j]
    }
}

/// Evaluates W^{blk}(λ,λ') = [windowed block]^∧(−λ,λ') on the grid square
/// through the factored form F(λ)† M F(λ').
pub fn w_transforms(blocks: &TwoPointBlocks, grid: &Grid1D) -> WGrids {
    let fs: Vec<CMatrix> = (0..grid.n)
        .into_par_iter()
        .map(|i| blocks.f_matrix(grid.point(i)))
        .collect();
    let build = |m: &CMatrix| -> Vec<CMatrix> {
        // Precompute M·F(λ') once per column.
        let mf: Vec<CMatrix> = fs.par_iter().map(|f| m * f).collect();
        (0..grid.n * grid.n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / grid.n, idx % grid.n);
                fs[i].adjoint() * &mf[j]
            })
            .collect()
    };
    let b0 = build(&blocks.middles[0]);
    let b1 = build(&blocks.middles[1]);
    let b2 = build(&blocks.middles[2]);
    let b3 = build(&blocks.middles[3]);
    let assembled: Vec<CMatrix> = (0..grid.n * grid.n)
        .into_par_iter()
        .map(|idx| -&b0[idx] + &b1[idx] + &b2[idx] + &b3[idx])
        .collect();
    WGrids {
        grid: grid.clone(),
        blocks: [b0, b1, b2, b3],
        assembled,
    }
}
