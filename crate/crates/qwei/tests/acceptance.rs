//! Acceptance suite: one test per top-level claim of the artifact, each
//! printing a single PASS line on success (failures panic with the
//! offending numbers).
//!
//! The demo scale is a 3-torus with L = 6.3, m = 1 and |k| ≤ 1.5
//! (38 modes), a width-1 Gaussian weight supported in [−8.25, 8.25], and
//! an observation window that is exactly 1 on that interval.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;
use std::time::Instant;

use qwei::bounds::{jtilde_min_eig, kminus_positivity, sigma_interpolant, compute_c};
use qwei::config::{Mode, RunConfig};
use qwei::grid::Grid1D;
use qwei::run::{domination_excess, execute, Engine, RunReport, MARGIN_TOL};
use qwei::spinor::{dirac_residual, verify_gamma_set};
use qwei::states::{
    energy_density, random_hadamard_q, two_point_blocks, vacuum_projection, StateLabel, StateSpec,
};
use qwei::weights::{kernel_identity, tail_mass_sq, windowed_gaussian, Weight};
use qwei::worldline::{compute_y, mode_density};
use qwei::{C64, CMatrix};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------
// Shared demo fixtures
// ---------------------------------------------------------------------

/// The demo configuration: 51 states (vacuum, 10 structured vectors of
/// which four have a negative time average, 40 random quasifree labels).
fn demo_config(out: &str) -> RunConfig {
    let a = 0.99994999875; // √(1 − 0.01²) to 1e−12
    let json = format!(
        r#"{{
        "basis": {{ "l": 6.3, "m": 1.0, "k_max": 1.5 }},
        "weight": {{ "kind": "windowed_gaussian",
                    "center": 0.0, "width": 1.0, "support_radius": 8.25 }},
        "window": {{ "interval": [-8.25, 8.25], "edge_sigma": 0.6 }},
        "states": {{
            "explicit": [
                {{ "label": "pairA_plus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [0.01, 0.0], "particles": [[1,1,0,0]], "antiparticles": [[0,0,0,1]] }} ] }},
                {{ "label": "pairA_minus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [-0.01, 0.0], "particles": [[1,1,0,0]], "antiparticles": [[0,0,0,1]] }} ] }},
                {{ "label": "pairA_imag", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [0.0, 0.01], "particles": [[1,1,0,0]], "antiparticles": [[0,0,0,1]] }} ] }},
                {{ "label": "pairB_plus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [0.01, 0.0], "particles": [[1,0,0,1]], "antiparticles": [[0,0,0,0]] }} ] }},
                {{ "label": "pairB_minus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [-0.01, 0.0], "particles": [[1,0,0,1]], "antiparticles": [[0,0,0,0]] }} ] }},
                {{ "label": "pairC_plus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [0.01, 0.0], "particles": [[0,0,1,0]], "antiparticles": [[0,0,0,0]] }} ] }},
                {{ "label": "pairC_minus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [-0.01, 0.0], "particles": [[0,0,1,0]], "antiparticles": [[0,0,0,0]] }} ] }},
                {{ "label": "pairD_plus", "terms": [
                    {{ "coefficient": [{a}, 0.0] }},
                    {{ "coefficient": [0.01, 0.0], "particles": [[0,0,0,0]], "antiparticles": [[0,0,0,1]] }} ] }},
                {{ "label": "one_particle", "terms": [
                    {{ "coefficient": [1.0, 0.0], "particles": [[0,0,0,0]] }} ] }},
                {{ "label": "two_particle_pair", "terms": [
                    {{ "coefficient": [1.0, 0.0], "particles": [[0,0,0,0],[1,0,0,0]], "antiparticles": [[0,0,0,1]] }} ] }}
            ],
            "random": {{ "count": 40, "seed": 20260823, "rank": 6, "strength": 0.5 }}
        }},
        "output_dir": {out:?}
    }}"#
    );
    RunConfig::from_json(&json).unwrap()
}

fn engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(|| Engine::new(demo_config("unused")).unwrap())
}

struct DemoRun {
    report: RunReport,
    report_bytes: Vec<u8>,
    elapsed_secs: f64,
}

/// The full demo verify run, computed once and shared.
fn demo_run() -> &'static DemoRun {
    static DEMO: OnceLock<DemoRun> = OnceLock::new();
    DEMO.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let cfg = demo_config("unused");
        let t0 = Instant::now();
        let outcome = execute(cfg, Some(Mode::Verify), false, Some(dir.path().into())).unwrap();
        let elapsed_secs = t0.elapsed().as_secs_f64();
        let report_bytes = std::fs::read(dir.path().join("report.json")).unwrap();
        DemoRun {
            report: outcome.report,
            report_bytes,
            elapsed_secs,
        }
    })
}

// ---------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------

#[test]
fn criterion_01_end_to_end_bound_on_demo_corpus() {
    let demo = demo_run();
    let b = demo.report.bound.as_ref().unwrap().total;
    assert!(b.is_finite() && b > 0.0, "B = {b}");
    let rows = &demo.report.states;
    assert!(rows.len() >= 50, "corpus has only {} states", rows.len());
    assert_eq!(rows[0].id, "vacuum");
    assert_eq!(rows[0].i_time, 0.0);
    let negatives = rows.iter().filter(|r| r.i_time < 0.0).count();
    assert!(negatives >= 3, "only {negatives} states with I_time < 0");
    let tol = MARGIN_TOL * (1.0 + b);
    for r in rows {
        assert!(r.margin >= -tol, "{}: margin {}", r.id, r.margin);
    }
    assert!(
        demo.elapsed_secs <= 300.0,
        "demo run took {:.1} s",
        demo.elapsed_secs
    );
    println!(
        "PASS criterion 1: I_time ≥ −B on {} states (B = {:.6e}, {} negative, {:.1} s)",
        rows.len(),
        b,
        negatives,
        demo.elapsed_secs
    );
}

#[test]
fn criterion_02_kernel_identity_random_frequencies() {
    let weights: [Weight; 3] = [
        windowed_gaussian(0.0, 1.0, 8.25, 1.0 / 64.0).unwrap(),
        windowed_gaussian(0.0, 0.75, 8.25, 1.0 / 64.0).unwrap(),
        windowed_gaussian(0.5, 0.6, 7.0, 1.0 / 64.0).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for w in &weights {
        for _ in 0..100 {
            let l = rng.gen_range(-5.0..5.0);
            let lp = rng.gen_range(-5.0..5.0);
            let chk = kernel_identity(w, l, lp).unwrap();
            let rel = (chk.lhs - chk.rhs).norm() / (1.0 + chk.lhs.norm());
            assert!(rel <= 1e-6, "({l:.3},{lp:.3}): relative error {rel:.3e}");
            worst = worst.max(rel);
        }
    }
    println!(
        "PASS criterion 2: kernel identity ≤ 1e−6 on 100 random (λ,λ') × 3 weights (worst {worst:.3e})"
    );
}

#[test]
fn criterion_03_density_operator_positive_with_trace_cap() {
    let eng = engine();
    let prep = eng.prepare().unwrap();
    let sigma = sigma_interpolant(&prep.spectra, false);
    let grid = Grid1D::covering(0.0, prep.grid.hi(), 0.05).unwrap();
    let basis = &eng.basis;

    let f = |n: [i64; 3], s: usize| basis.find(n, s).unwrap();
    let c = |x: f64| C64::new(x, 0.0);
    let a = 0.99994999875;
    let vectors = [
        StateSpec::new("v1", vec![(c(1.0), vec![f([0, 0, 0], 0)], vec![])], basis).unwrap(),
        StateSpec::new("v2", vec![(c(1.0), vec![], vec![f([0, 0, 0], 1)])], basis).unwrap(),
        StateSpec::new(
            "v3",
            vec![(
                c(1.0),
                vec![f([0, 0, 0], 0), f([1, 0, 0], 0)],
                vec![f([0, 0, 0], 1)],
            )],
            basis,
        )
        .unwrap(),
        StateSpec::new(
            "v4",
            vec![
                (c(a), vec![], vec![]),
                (c(0.01), vec![f([1, 1, 0], 0)], vec![f([0, 0, 0], 1)]),
            ],
            basis,
        )
        .unwrap(),
        StateSpec::new(
            "v5",
            vec![
                (C64::new(0.6, 0.0), vec![f([0, 0, 1], 0)], vec![]),
                (C64::new(0.0, 0.8), vec![f([0, 0, -1], 0)], vec![]),
            ],
            basis,
        )
        .unwrap(),
    ];

    let mut traces = Vec::new();
    let mut check = |label: StateLabel, id: &str| {
        let blocks = two_point_blocks(&label, &prep.wl).unwrap();
        let w = qwei::bounds::wtilde_check(&blocks, &sigma, &grid, false).unwrap();
        assert!(
            w.min_eig >= -1e-8 * w.trace - 1e-14,
            "{id}: min eig {:.3e}, trace {:.3e}",
            w.min_eig,
            w.trace
        );
        assert!(
            (0.0..=FRAC_PI_2 + 1e-6).contains(&w.trace),
            "{id}: trace {} outside [0, π/2]",
            w.trace
        );
        traces.push(w.trace);
    };
    for seed in 0..20u64 {
        let q = random_hadamard_q(basis, 6, 0.5, 1000 + seed).unwrap();
        check(StateLabel::Quasifree(&q), &format!("Q{seed}"));
    }
    for v in &vectors {
        check(StateLabel::Vector(v), &v.label);
    }
    // The vacuum label Q = P gives trace 0 exactly.
    let p = vacuum_projection(basis);
    let blocks = two_point_blocks(&StateLabel::Quasifree(&p), &prep.wl).unwrap();
    let w = qwei::bounds::wtilde_check(&blocks, &sigma, &grid, false).unwrap();
    assert_eq!(w.trace, 0.0, "vacuum label trace");
    let max_trace = traces.iter().cloned().fold(0.0, f64::max);
    println!(
        "PASS criterion 3: W̃ ⪰ 0 with trace ≤ π/2 on 25 states (max trace {max_trace:.6e}), Q = P trace 0"
    );
}

#[test]
fn criterion_04_operator_bounded_below_uniformly() {
    let eng = engine();
    let prep = eng.prepare().unwrap();
    let sigma = sigma_interpolant(&prep.spectra, false);
    let dl = 0.15;
    // θ ≡ 0 on this worldline, so the interference constant vanishes and
    // the caps are the C_Λ alone.
    let c_inf = compute_c(&eng.weight, &sigma, 1e6, 40.0, 0.05, false)
        .unwrap()
        .uncapped;
    let mut details = Vec::new();
    for lambda in [5.0, 10.0, 20.0, 40.0] {
        let c = compute_c(&eng.weight, &sigma, lambda, 40.0, 0.05, false)
            .unwrap()
            .value;
        let chk = jtilde_min_eig(&eng.weight, &prep.theta, &sigma, lambda, false, dl).unwrap();
        assert!(
            chk.min_eig >= -c - chk.delta_disc,
            "Λ = {lambda}: min eig {:.6e} < −{:.6e}",
            chk.min_eig,
            c + chk.delta_disc
        );
        assert!(
            chk.min_eig >= -c_inf - chk.delta_disc,
            "Λ = {lambda}: min eig {:.6e} below the uniform cap {:.6e}",
            chk.min_eig,
            c_inf + chk.delta_disc
        );
        assert!(
            chk.delta_disc <= 1e-3 * (c_inf + 1.0),
            "Λ = {lambda}: δ_disc {:.3e}",
            chk.delta_disc
        );
        details.push(format!("Λ={lambda}: {:.3e}", chk.min_eig));
    }
    println!(
        "PASS criterion 4: min eig(J̃_Λ) ≥ −(C_Λ + C''_Λ) − δ_disc for Λ ∈ {{5,10,20,40}} (uniform cap {c_inf:.6e}; {})",
        details.join(", ")
    );
}

#[test]
fn criterion_05_kernel_split_positive_halves() {
    let eng = engine();
    let prep = eng.prepare().unwrap();
    let sigma = sigma_interpolant(&prep.spectra, false);
    for lambda in [5.0, 10.0] {
        let k = kminus_positivity(&eng.weight, &sigma, lambda, 0.15, 0.05).unwrap();
        assert!(
            k.min_eig_minus >= -1e-8 * k.trace_minus,
            "Λ = {lambda}: min eig K⁻ {:.3e}, trace {:.3e}",
            k.min_eig_minus,
            k.trace_minus
        );
        assert!(
            k.min_eig_plus >= -1e-8 * k.trace_plus,
            "Λ = {lambda}: min eig K⁺ {:.3e}",
            k.min_eig_plus
        );
        assert!(
            k.reconstruction_residual <= 1e-10,
            "Λ = {lambda}: reconstruction residual {:.3e}",
            k.reconstruction_residual
        );
    }
    println!("PASS criterion 5: K⁻ ⪰ 0 and K⁺ − K⁻ reconstructs K_Λ to 1e−10 (Λ ∈ {{5,10}})");
}

#[test]
fn criterion_06_block_transforms_dominated_pointwise() {
    let eng = engine();
    let prep = eng.prepare().unwrap();
    let grid = Grid1D::covering(-15.0, 15.0, 0.25).unwrap();
    let density = mode_density(&prep.wl);
    let spectra = compute_y(&prep.wl, &density, &grid);
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..20u64 {
        let q = random_hadamard_q(&eng.basis, 6, 0.5, 2000 + seed).unwrap();
        let blocks = two_point_blocks(&StateLabel::Quasifree(&q), &prep.wl).unwrap();
        let excess = domination_excess(&blocks, &spectra, &grid);
        assert!(excess <= 1e-8, "state {seed}: excess {excess:.3e}");
        worst = worst.max(excess);
    }
    println!(
        "PASS criterion 6: |W_AB(λ,λ')| ≤ Y_A(λ)Y_B(λ') + 1e−8 at all {}² grid points × 20 states (worst excess {worst:.3e})",
        grid.n
    );
}

#[test]
fn criterion_07_frequency_time_consistency_on_corpus() {
    let demo = demo_run();
    let mut worst = 0.0f64;
    for r in &demo.report.states {
        let rel = (r.i_freq - r.i_time).abs() / (1.0 + r.i_time.abs());
        assert!(
            rel <= 1e-6,
            "{}: I_freq {} vs I_time {} (rel {rel:.3e})",
            r.id,
            r.i_freq,
            r.i_time
        );
        worst = worst.max(rel);
    }
    println!(
        "PASS criterion 7: |I_freq − I_time| ≤ 1e−6·(1+|I_time|) on {} states (worst {worst:.3e})",
        demo.report.states.len()
    );
}

#[test]
fn criterion_08_algebraic_layer_exact() {
    let eng = engine();
    let v = verify_gamma_set(&eng.gammas);
    assert!(v.clifford_residual <= 1e-14, "{}", v.clifford_residual);
    assert!(v.adjointness_residual <= 1e-14, "{}", v.adjointness_residual);
    let worst_mode = eng
        .basis
        .modes
        .iter()
        .flat_map(|m| {
            [
                dirac_residual(&eng.gammas, m, true),
                dirac_residual(&eng.gammas, m, false),
            ]
        })
        .fold(0.0, f64::max);
    assert!(worst_mode <= 1e-12, "mode residual {worst_mode:.3e}");
    // Frame completeness Σ_A v_A ⊗ v_A⁺ = γ₀, exactly.
    let mut sum = CMatrix::zeros(4, 4);
    for a in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                sum[(i, j)] += eng.frame.v[a][i] * eng.frame.v_plus[a][j];
            }
        }
    }
    assert_eq!(sum, eng.gammas.gamma[0]);
    // Vacuum energy density is identically zero after normal ordering.
    let prep = eng.prepare().unwrap();
    let vac = StateSpec::vacuum(&eng.basis);
    let blocks = two_point_blocks(&StateLabel::Vector(&vac), &prep.wl).unwrap();
    let rho = energy_density(&blocks, &eng.weight.tau_grid);
    let worst_rho = rho.rho.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    assert!(worst_rho <= 1e-14, "vacuum ρ {worst_rho:.3e}");
    println!(
        "PASS criterion 8: algebra exact (Clifford {:.1e}, modes {worst_mode:.1e}, frame exact, vacuum ρ {worst_rho:.1e})",
        v.clifford_residual
    );
}

#[test]
fn criterion_09_certified_decay_surrogates() {
    let eng = engine();
    let prep = eng.prepare().unwrap();
    let d = &prep.decay;
    assert!(
        d.edge_ratio_dot <= 1e-10 && d.edge_ratio_gamma <= 1e-10,
        "edge ratios {:.3e} / {:.3e}",
        d.edge_ratio_dot,
        d.edge_ratio_gamma
    );
    for a in 0..4 {
        assert!(d.gaussian_coeff_dot[a] > 0.0);
        assert!(d.gaussian_coeff_gamma[a] > 0.0);
    }
    let tail = tail_mass_sq(&eng.weight.fhat_on(&prep.grid));
    assert!(tail <= 1e-12, "f̂ tail mass {tail:.3e}");
    println!(
        "PASS criterion 9: Y decays below 1e−10·max in-grid ({:.1e}/{:.1e}); f̂ tail {tail:.1e} ≤ 1e−12",
        d.edge_ratio_dot, d.edge_ratio_gamma
    );
}

#[test]
fn criterion_10_reports_byte_identical() {
    let demo = demo_run();
    let dir = tempfile::tempdir().unwrap();
    let cfg = demo_config("unused");
    execute(cfg, Some(Mode::Verify), false, Some(dir.path().into())).unwrap();
    let again = std::fs::read(dir.path().join("report.json")).unwrap();
    assert_eq!(
        demo.report_bytes, again,
        "repeated runs differ in report.json"
    );
    println!(
        "PASS criterion 10: repeated runs byte-identical ({} bytes of report.json)",
        again.len()
    );
}
