//! Run configuration for the `qwei` batch driver.
//!
//! A run is described by a single JSON document; the only environment
//! override is `QWEI_OUT` for the output directory. All grid resolutions
//! have defaults chosen for the shipped demo scale and can be tightened
//! per field.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mode basis parameters: torus size, field mass, momentum cutoff.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisConfig {
    /// Torus edge length L.
    pub l: f64,
    /// Field mass m > 0.
    pub m: f64,
    /// Momentum cutoff: modes with |k| ≤ k_max are kept.
    pub k_max: f64,
}

/// The averaging weight f = g².
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightConfig {
    /// g = Gaussian of the given width, mollified to vanish outside
    /// `support_radius`.
    WindowedGaussian {
        center: f64,
        width: f64,
        support_radius: f64,
    },
    /// Raw g-samples on a uniform τ-grid (endpoints must vanish).
    Samples { tau_lo: f64, dtau: f64, g: Vec<f64> },
}

/// The worldline observation window: exactly 1 on `interval`, smoothly
/// decaying to 0 with edge width `edge_sigma`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    /// [τ_a, τ_b] on which the window is identically 1. The weight's
    /// support must sit inside this interval.
    pub interval: [f64; 2],
    pub edge_sigma: f64,
}

fn default_dtau() -> f64 {
    1.0 / 64.0
}
fn default_dlambda() -> f64 {
    0.05
}
fn default_lambda_pad() -> f64 {
    14.0
}
fn default_operator_dl() -> f64 {
    0.125
}
fn default_cutoff_du() -> f64 {
    0.05
}
fn default_cutoff_umax() -> f64 {
    40.0
}
fn default_dmu() -> f64 {
    0.05
}

/// Grid resolutions. Every field has a demo-scale default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// τ-grid spacing (worldline, window, weight).
    #[serde(default = "default_dtau")]
    pub dtau: f64,
    /// λ-grid spacing for spectra and the frequency-domain average.
    #[serde(default = "default_dlambda")]
    pub dlambda: f64,
    /// λ-grid half-width beyond the largest mode frequency.
    #[serde(default = "default_lambda_pad")]
    pub lambda_pad: f64,
    /// Fine spacing of the operator-positivity discretizations.
    #[serde(default = "default_operator_dl")]
    pub operator_dl: f64,
    /// u-grid spacing of the cutoff-constant quadratures.
    #[serde(default = "default_cutoff_du")]
    pub cutoff_du: f64,
    /// u-grid extent of the cutoff-constant quadratures.
    #[serde(default = "default_cutoff_umax")]
    pub cutoff_umax: f64,
    /// μ-grid spacing of the kernel-split quadrature.
    #[serde(default = "default_dmu")]
    pub dmu: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            dtau: default_dtau(),
            dlambda: default_dlambda(),
            lambda_pad: default_lambda_pad(),
            operator_dl: default_operator_dl(),
            cutoff_du: default_cutoff_du(),
            cutoff_umax: default_cutoff_umax(),
            dmu: default_dmu(),
        }
    }
}

/// One Fock-vector term: coefficient and occupied modes, each mode given
/// as `[n_x, n_y, n_z, s]` in lattice coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateTermConfig {
    /// Complex coefficient as [re, im].
    pub coefficient: [f64; 2],
    #[serde(default)]
    pub particles: Vec<[i64; 4]>,
    #[serde(default)]
    pub antiparticles: Vec<[i64; 4]>,
}

/// One explicit vector state of the corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub label: String,
    pub terms: Vec<StateTermConfig>,
}

/// Random quasifree states: rank-`rank` perturbations of the vacuum
/// label with the given strength, seeded deterministically.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomStatesConfig {
    pub count: usize,
    pub seed: u64,
    pub rank: usize,
    pub strength: f64,
}

fn default_true() -> bool {
    true
}

/// The state corpus: the vacuum (unless disabled), explicit vectors,
/// and optional random quasifree labels.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusConfig {
    #[serde(default = "default_true")]
    pub include_vacuum: bool,
    #[serde(default)]
    pub explicit: Vec<StateConfig>,
    #[serde(default)]
    pub random: Option<RandomStatesConfig>,
}

/// Driver mode; the CLI subcommand overrides the configured value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bound,
    Verify,
    Selfcheck,
    Spectra,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Bound => "bound",
            Mode::Verify => "verify",
            Mode::Selfcheck => "selfcheck",
            Mode::Spectra => "spectra",
        }
    }
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Bound
    }
}

fn default_lambdas() -> Vec<f64> {
    vec![5.0, 10.0, 20.0, 40.0]
}
fn default_output_dir() -> String {
    "out".into()
}

/// The full run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub basis: BasisConfig,
    pub weight: WeightConfig,
    pub window: WindowConfig,
    #[serde(default)]
    pub grids: GridConfig,
    /// Cutoff sweep Λ-values, ascending.
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default)]
    pub states: CorpusConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub mode: Mode,
    /// Use the sharper halved interference cap (off for certified runs).
    #[serde(default)]
    pub halved_interference: bool,
    /// Test hook: named deliberate defect for the self-check mutation
    /// test. Recognized value: "transform_sign".
    #[serde(default)]
    pub sabotage: Option<String>,
}

impl RunConfig {
    /// Parses and validates a configuration from a JSON string.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("JSON: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a configuration file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Static validation (grid/basis compatibility is re-checked once the
    /// basis is built, see the driver).
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be positive, got {v}")))
            }
        };
        positive(self.basis.l, "basis.l")?;
        positive(self.basis.m, "basis.m")?;
        if !self.basis.k_max.is_finite() {
            return Err(Error::Config("basis.k_max must be finite".into()));
        }
        match &self.weight {
            WeightConfig::WindowedGaussian {
                width,
                support_radius,
                ..
            } => {
                positive(*width, "weight.width")?;
                positive(*support_radius, "weight.support_radius")?;
            }
            WeightConfig::Samples { dtau, g, .. } => {
                positive(*dtau, "weight.dtau")?;
                if g.len() < 2 {
                    return Err(Error::Config("weight.g needs at least 2 samples".into()));
                }
            }
        }
        let [a, b] = self.window.interval;
        if !(b > a) {
            return Err(Error::Config(format!(
                "window.interval [{a}, {b}] must be increasing"
            )));
        }
        positive(self.window.edge_sigma, "window.edge_sigma")?;
        for (v, what) in [
            (self.grids.dtau, "grids.dtau"),
            (self.grids.dlambda, "grids.dlambda"),
            (self.grids.lambda_pad, "grids.lambda_pad"),
            (self.grids.operator_dl, "grids.operator_dl"),
            (self.grids.cutoff_du, "grids.cutoff_du"),
            (self.grids.cutoff_umax, "grids.cutoff_umax"),
            (self.grids.dmu, "grids.dmu"),
        ] {
            positive(v, what)?;
        }
        if self.lambdas.is_empty() {
            return Err(Error::Config("lambdas must be non-empty".into()));
        }
        for w in self.lambdas.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Config("lambdas must be strictly ascending".into()));
            }
        }
        if self.lambdas[0] <= 0.0 {
            return Err(Error::Config("lambdas must be positive".into()));
        }
        if let Some(r) = &self.states.random {
            if r.count > 0 {
                if !(r.strength > 0.0 && r.strength <= 1.0) {
                    return Err(Error::Config(format!(
                        "states.random.strength must be in (0, 1], got {}",
                        r.strength
                    )));
                }
                if r.rank == 0 {
                    return Err(Error::Config("states.random.rank must be ≥ 1".into()));
                }
            }
        }
        for s in &self.states.explicit {
            if s.terms.is_empty() {
                return Err(Error::Config(format!("state '{}' has no terms", s.label)));
            }
        }
        if let Some(s) = &self.sabotage {
            if s != "transform_sign" {
                return Err(Error::Config(format!("unknown sabotage hook '{s}'")));
            }
        }
        Ok(())
    }
}
