//! Experiment configuration documents: JSON schemas for each command plus
//! the dotted-path override mechanism.
//!
//! Every config struct rejects unknown keys, so typos in files and in
//! `--set` paths surface as config errors instead of silently applying
//! defaults.  Overrides are spliced into the raw JSON value before the
//! typed parse, which keeps the rejection guarantee intact.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{Protocol, Segment};
use crate::error::{Error, Result};
use crate::search::SearchConfig;
use crate::thermo::{Bath, BathLabel, BathPair, ConstraintBox, OperatingMode, RateModel};

/// One bath of a config document: inverse temperature plus rate model.
/// The hot/cold role comes from the field position, not from the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSpec {
    pub beta: f64,
    pub rate_model: RateModel,
}

impl BathSpec {
    pub fn build(&self, label: BathLabel) -> Result<Bath> {
        Bath::new(label, self.beta, self.rate_model.clone())
    }
}

/// Hot/cold bath pair of a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathsSpec {
    pub hot: BathSpec,
    pub cold: BathSpec,
}

impl BathsSpec {
    pub fn build(&self) -> Result<BathPair> {
        BathPair::new(
            self.hot.build(BathLabel::Hot)?,
            self.cold.build(BathLabel::Cold)?,
        )
    }
}

/// Spacing rule of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

/// Inclusive one-dimensional sweep grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            return Err(Error::Config(format!(
                "grid range [{}, {}] must be finite and ordered",
                self.min, self.max
            )));
        }
        if self.count == 0 {
            return Err(Error::Config("grid needs at least one point".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.min]);
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::Config(format!(
                "log spacing needs a positive lower edge, got {}",
                self.min
            )));
        }
        let n = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect())
    }
}

/// Driving protocol in a config document: the common shapes by name, or an
/// explicit segment list for anything else.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProtocolSpec {
    SquareWave {
        eps_h: f64,
        eps_c: f64,
        tau_h: f64,
        tau_c: f64,
    },
    Trapezoid {
        eps_h: f64,
        eps_c: f64,
        tau_h: f64,
        tau_c: f64,
        tau: f64,
    },
    Segments { segments: Vec<Segment> },
}

impl ProtocolSpec {
    pub fn build(&self) -> Result<Protocol> {
        match self {
            ProtocolSpec::SquareWave {
                eps_h,
                eps_c,
                tau_h,
                tau_c,
            } => Protocol::square_wave(*eps_h, *eps_c, *tau_h, *tau_c),
            ProtocolSpec::Trapezoid {
                eps_h,
                eps_c,
                tau_h,
                tau_c,
                tau,
            } => Protocol::trapezoid(*eps_h, *eps_c, *tau_h, *tau_c, *tau),
            ProtocolSpec::Segments { segments } => Protocol::new(segments.clone()),
        }
    }
}

/// `simulate`: integrate a protocol to its limit cycle and dump the orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub baths: BathsSpec,
    pub protocol: ProtocolSpec,
}

/// `optimize`: maximize one mode's power over a gap box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub baths: BathsSpec,
    pub mode: OperatingMode,
    pub gap_box: ConstraintBox,
}

/// `sweep-emp`: efficiency at maximum power versus Carnot efficiency, one
/// curve per rate model (the same model on both baths, as in the reference
/// curves).  The cold temperature is swept at fixed `beta_h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepEmpConfig {
    pub beta_h: f64,
    pub models: Vec<RateModel>,
    pub gap_box: ConstraintBox,
    pub eta_c: GridSpec,
}

/// `sweep-cmp`: COP at maximum cooling power versus Carnot COP, one curve
/// per rate model, sweeping the cold temperature at fixed `beta_h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCmpConfig {
    pub beta_h: f64,
    pub models: Vec<RateModel>,
    pub gap_box: ConstraintBox,
    pub cop_carnot: GridSpec,
}

/// What `sweep-finite-time` tabulates: the symmetric heater curve in the
/// dimensionless variable x = dt * Gamma, or the general two-rate factor
/// over a grid of periods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FiniteTimeTarget {
    Heater,
    Rates { gamma_h: f64, gamma_c: f64 },
}

/// `sweep-finite-time`: finite-period power reduction factor tabulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFiniteTimeConfig {
    pub target: FiniteTimeTarget,
    pub grid: GridSpec,
}

/// `sweep-quench`: power deficit versus quench duration for a trapezoidal
/// cycle of period `dt`.  Gaps are either given explicitly (with an
/// optional hot-stroke time fraction) or found by optimizing over
/// `gap_box`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepQuenchConfig {
    pub baths: BathsSpec,
    pub mode: OperatingMode,
    #[serde(default)]
    pub gaps: Option<(f64, f64)>,
    #[serde(default)]
    pub time_split: Option<f64>,
    #[serde(default)]
    pub gap_box: Option<ConstraintBox>,
    pub dt: f64,
    pub tau_over_dt: GridSpec,
}

/// One hot/cold rate-model pairing of an expansion run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionPair {
    pub hot: RateModel,
    pub cold: RateModel,
}

/// `expansion`: small-temperature-difference coefficients of the
/// efficiency at maximum power, closed form against fit, for each model
/// pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionConfig {
    pub beta_h: f64,
    pub pairs: Vec<ExpansionPair>,
    pub gap_box: ConstraintBox,
    pub window: (f64, f64),
    pub n_samples: usize,
}

fn default_verify_seed() -> u64 {
    7
}

fn default_search_samples() -> u64 {
    2000
}

fn default_split_cycles() -> usize {
    25
}

/// `verify`: budget knobs of the built-in invariant suite.  Every field
/// has a default, so the command also runs without a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_verify_seed")]
    pub seed: u64,
    /// Random protocols per operating mode in the bound check.
    #[serde(default = "default_search_samples")]
    pub search_samples: u64,
    /// Randomized square-wave cycles in the sub-cycle identity check.
    #[serde(default = "default_split_cycles")]
    pub split_cycles: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: default_verify_seed(),
            search_samples: default_search_samples(),
            split_cycles: default_split_cycles(),
        }
    }
}

impl VerifyConfig {
    /// Search budget shared by the four per-mode bound checks.
    pub fn search_config(&self, gap_range: (f64, f64)) -> SearchConfig {
        SearchConfig {
            n_segments: 4,
            period: 1e-3,
            samples: self.search_samples,
            seed: self.seed,
            gap_range,
        }
    }
}

/// Reads and parses a JSON document, keeping serde's line/column context
/// in the error message.
pub fn load_value(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Splits a `--set` argument into its dotted path and a JSON value.  Text
/// that does not parse as JSON is taken as a bare string, so
/// `--set baths.hot.rate_model.constant.k=2` and `--set label=hot` both
/// work without shell-quoted quotes.
pub fn parse_override(arg: &str) -> Result<(String, Value)> {
    let Some((path, raw)) = arg.split_once('=') else {
        return Err(Error::Config(format!(
            "override '{arg}' must look like key.path=value"
        )));
    };
    if path.is_empty() {
        return Err(Error::Config(format!("override '{arg}' has an empty path")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((path.to_string(), value))
}

/// Splices `value` into `root` at the dotted `path`, creating intermediate
/// objects as needed.  Numeric components index into arrays.  A path that
/// names a field no config struct has still applies here; the typed parse
/// rejects it afterwards.
pub fn apply_override(root: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut cursor = root;
    let mut parts = path.split('.').peekable();
    while let Some(part) = parts.next() {
        let last = parts.peek().is_none();
        match cursor {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                cursor = map
                    .entry(part.to_string())
                    .or_insert_with(|| Value::Object(serde_json::Map::new()));
            }
            Value::Array(items) => {
                let idx: usize = part.parse().map_err(|_| {
                    Error::Config(format!(
                        "override path '{path}': '{part}' is not an array index"
                    ))
                })?;
                let slot = items.get_mut(idx).ok_or_else(|| {
                    Error::Config(format!(
                        "override path '{path}': index {idx} out of bounds"
                    ))
                })?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                cursor = slot;
            }
            other => {
                return Err(Error::Config(format!(
                    "override path '{path}': '{part}' descends into non-container {other}"
                )));
            }
        }
    }
    Err(Error::Config(format!("override path '{path}' is empty")))
}

/// Loads a typed config: read the file, apply `--set` overrides on the raw
/// JSON, then parse strictly (unknown keys rejected).
pub fn load_config<T: DeserializeOwned>(path: &Path, overrides: &[String]) -> Result<T> {
    let mut value = load_value(path)?;
    for arg in overrides {
        let (path, v) = parse_override(arg)?;
        apply_override(&mut value, &path, v)?;
    }
    typed_config(value).map(|(t, _)| t)
}

/// Loads a typed config and also hands back the resolved JSON document for
/// artifact headers.
pub fn load_config_with_value<T: DeserializeOwned>(
    path: &Path,
    overrides: &[String],
) -> Result<(T, Value)> {
    let mut value = load_value(path)?;
    for arg in overrides {
        let (path, v) = parse_override(arg)?;
        apply_override(&mut value, &path, v)?;
    }
    typed_config(value)
}

fn typed_config<T: DeserializeOwned>(value: Value) -> Result<(T, Value)> {
    let typed =
        serde_json::from_value(value.clone()).map_err(|e| Error::Config(e.to_string()))?;
    Ok((typed, value))
}
