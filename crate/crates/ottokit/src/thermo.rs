//! Baths, dissipation-rate models, machine modes, and thermodynamic
//! primitives: equilibrium excitation, detailed-balance rate split, and the
//! per-mode energy quantum.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default smallest admissible |eps| for the bosonic n = 0 model, whose rate
/// diverges at zero gap. In units of the inverse hot-bath temperature.
pub const DEFAULT_EPS_FLOOR: f64 = 1e-9;

fn default_eps_floor() -> f64 {
    DEFAULT_EPS_FLOOR
}

/// Effective dissipation-rate model Gamma(eps). All variants are even in
/// eps (power laws and coth act on |eps|), so gap-sign inversions leave the
/// rate unchanged; the Lorentzian filter is even about its center instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RateModel {
    /// Gap-independent rate k.
    Constant { k: f64 },
    /// k |eps|^n, the fermionic power-law family.
    FermiPower { k: f64, n: u32 },
    /// k |eps|^n coth(beta |eps| / 2), the bosonic power-law family.
    /// Diverges at eps -> 0 when n = 0; evaluation below `eps_floor` is an
    /// error rather than a silent clip.
    BosePower {
        k: f64,
        n: u32,
        #[serde(default = "default_eps_floor")]
        eps_floor: f64,
    },
    /// Energy filter gamma sigma^2 / (sigma^2 + (eps - eps_bar)^2), peaked
    /// at eps_bar with height gamma.
    Lorentzian { gamma: f64, sigma: f64, eps_bar: f64 },
    /// k exp(-(beta |eps| - x_bar)^2): depends on the gap only through
    /// x = beta eps, which makes refrigerator optima in x temperature
    /// independent (used to exercise the universal COP curve with a finite
    /// interior optimum).
    GaussianX { k: f64, x_bar: f64 },
}

impl RateModel {
    /// Validates the model parameters.
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            RateModel::Constant { k } => k > 0.0 && k.is_finite(),
            RateModel::FermiPower { k, .. } => k > 0.0 && k.is_finite(),
            RateModel::BosePower { k, eps_floor, .. } => {
                k > 0.0 && k.is_finite() && eps_floor > 0.0
            }
            RateModel::Lorentzian { gamma, sigma, eps_bar } => {
                gamma > 0.0 && sigma > 0.0 && gamma.is_finite() && sigma.is_finite() && eps_bar.is_finite()
            }
            RateModel::GaussianX { k, x_bar } => k > 0.0 && k.is_finite() && x_bar.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid rate model parameters: {self:?}")))
        }
    }

    /// Amplitude prefactor (k or gamma), used for the coupling ratio
    /// r = k_H / k_C of a bath pair.
    pub fn amplitude(&self) -> f64 {
        match *self {
            RateModel::Constant { k }
            | RateModel::FermiPower { k, .. }
            | RateModel::BosePower { k, .. }
            | RateModel::GaussianX { k, .. } => k,
            RateModel::Lorentzian { gamma, .. } => gamma,
        }
    }
}

/// Which physical reservoir a bath plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathLabel {
    Hot,
    Cold,
}

impl std::fmt::Display for BathLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BathLabel::Hot => "hot",
            BathLabel::Cold => "cold",
        })
    }
}

/// A thermal bath: inverse temperature plus its dissipation-rate model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bath {
    pub beta: f64,
    pub label: BathLabel,
    pub rate_model: RateModel,
}

/// The hot/cold bath pair every protocol runs against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathPair {
    pub hot: Bath,
    pub cold: Bath,
}

/// Machine operating mode, fixed by the signs of the averaged heat currents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatingMode {
    /// Work extracted from a hot-to-cold heat flow.
    Engine,
    /// Heat extracted from the cold bath at a work cost.
    Refrigerator,
    /// Hot-to-cold heat flow boosted by injected work.
    Accelerator,
    /// Work dumped as heat into both baths.
    Heater,
}

impl std::fmt::Display for OperatingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OperatingMode::Engine => "engine",
            OperatingMode::Refrigerator => "refrigerator",
            OperatingMode::Accelerator => "accelerator",
            OperatingMode::Heater => "heater",
        };
        f.write_str(s)
    }
}

/// Admissible gap range (the same interval constrains both gaps). For the
/// accelerator the additional heat-direction feasibility constraint applies
/// unless explicitly disabled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintBox {
    pub eps_min: f64,
    pub eps_max: f64,
    #[serde(default = "default_true")]
    pub mode_a_feasibility: bool,
}

fn default_true() -> bool {
    true
}

impl ConstraintBox {
    pub fn new(eps_min: f64, eps_max: f64) -> Result<Self> {
        let b = ConstraintBox { eps_min, eps_max, mode_a_feasibility: true };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_min.is_finite() && self.eps_max.is_finite() && self.eps_min <= self.eps_max {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "invalid gap box: [{}, {}]",
                self.eps_min, self.eps_max
            )))
        }
    }

    pub fn width(&self) -> f64 {
        self.eps_max - self.eps_min
    }

    pub fn contains(&self, eps: f64) -> bool {
        eps >= self.eps_min && eps <= self.eps_max
    }
}

/// Overflow-safe logistic: 1 / (1 + e^x) evaluated without large exponents.
pub(crate) fn logistic_neg(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// coth on positive arguments, with a series branch near zero for accuracy.
pub(crate) fn coth(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 1e-4 {
        1.0 / x + x / 3.0 - x * x * x / 45.0
    } else {
        1.0 / x.tanh()
    }
}

/// Equilibrium excitation probability p_eq = 1 / (1 + e^(beta eps)) of a
/// two-level gap eps against a bath at inverse temperature beta.
pub fn equilibrium_excitation(beta: f64, eps: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!("inverse temperature must be positive, got {beta}")));
    }
    if !eps.is_finite() {
        return Err(Error::Domain(format!("gap must be finite, got {eps}")));
    }
    Ok(logistic_neg(beta * eps))
}

/// Total dissipation rate Gamma(eps) of `model` against a bath at inverse
/// temperature `beta` (only the bosonic and Gaussian families use beta).
pub fn rate_value(model: &RateModel, eps: f64, beta: f64) -> Result<f64> {
    if !eps.is_finite() {
        return Err(Error::Domain(format!("gap must be finite, got {eps}")));
    }
    let a = eps.abs();
    match *model {
        RateModel::Constant { k } => Ok(k),
        RateModel::FermiPower { k, n } => Ok(k * a.powi(n as i32)),
        RateModel::BosePower { k, n, eps_floor } => {
            if n == 0 && a < eps_floor {
                return Err(Error::Singularity(format!(
                    "bosonic n = 0 rate diverges: |eps| = {a:.3e} below floor {eps_floor:.3e}"
                )));
            }
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::Domain(format!(
                    "bosonic rate needs a positive inverse temperature, got {beta}"
                )));
            }
            if a == 0.0 {
                // n >= 1 here: |eps|^n coth(beta |eps| / 2) -> 0 for n >= 2,
                // and -> 2/beta for n = 1.
                return Ok(if n == 1 { 2.0 * k / beta } else { 0.0 });
            }
            let x = beta * a / 2.0;
            if x < 1e-8 {
                // Series of |eps|^n coth(beta |eps|/2) avoids 0 * inf.
                Ok(k * (2.0 * a.powi(n as i32 - 1) / beta + beta * a.powi(n as i32 + 1) / 6.0))
            } else {
                Ok(k * a.powi(n as i32) * coth(x))
            }
        }
        RateModel::Lorentzian { gamma, sigma, eps_bar } => {
            let d = eps - eps_bar;
            Ok(gamma * sigma * sigma / (sigma * sigma + d * d))
        }
        RateModel::GaussianX { k, x_bar } => {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::Domain(format!(
                    "gaussian-in-x rate needs a positive inverse temperature, got {beta}"
                )));
            }
            let d = beta * a - x_bar;
            Ok(k * (-d * d).exp())
        }
    }
}

impl Bath {
    pub fn new(label: BathLabel, beta: f64, rate_model: RateModel) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("inverse temperature must be positive, got {beta}")));
        }
        rate_model.validate().map_err(|_| {
            Error::Config(format!("invalid rate model for bath: {rate_model:?}"))
        })?;
        Ok(Bath { beta, label, rate_model })
    }

    /// Equilibrium excitation probability of gap `eps` against this bath.
    pub fn p_eq(&self, eps: f64) -> Result<f64> {
        equilibrium_excitation(self.beta, eps)
    }

    /// Total dissipation rate at gap `eps`.
    pub fn rate(&self, eps: f64) -> Result<f64> {
        rate_value(&self.rate_model, eps, self.beta)
    }
}

/// Detailed-balance split of the total rate into excitation and decay parts:
/// Gamma_up = Gamma p_eq and Gamma_down = Gamma (1 - p_eq), so their ratio is
/// e^(-beta eps) and their sum reconstructs Gamma.
pub fn rate_components(model: &RateModel, eps: f64, bath: &Bath) -> Result<(f64, f64)> {
    let g = rate_value(model, eps, bath.beta)?;
    let p = bath.p_eq(eps)?;
    Ok((g * p, g * (1.0 - p)))
}

impl BathPair {
    pub fn new(hot: Bath, cold: Bath) -> Result<Self> {
        if hot.label != BathLabel::Hot || cold.label != BathLabel::Cold {
            return Err(Error::Config("bath pair labels are swapped".into()));
        }
        Ok(BathPair { hot, cold })
    }

    /// Convenience constructor from inverse temperatures and rate models.
    pub fn from_parts(beta_h: f64, rate_h: RateModel, beta_c: f64, rate_c: RateModel) -> Result<Self> {
        BathPair::new(
            Bath::new(BathLabel::Hot, beta_h, rate_h)?,
            Bath::new(BathLabel::Cold, beta_c, rate_c)?,
        )
    }

    /// Coupling-amplitude ratio r = k_H / k_C.
    pub fn coupling_ratio(&self) -> f64 {
        self.hot.rate_model.amplitude() / self.cold.rate_model.amplitude()
    }

    pub fn get(&self, label: BathLabel) -> &Bath {
        match label {
            BathLabel::Hot => &self.hot,
            BathLabel::Cold => &self.cold,
        }
    }
}

/// Energy quantum exchanged per cycle, weighting the common current bracket
/// in the fast-cycle power: engine eps_H - eps_C, refrigerator -eps_C,
/// accelerator eps_C, heater eps_C - eps_H.
pub fn mode_energy_quantum(mode: OperatingMode, eps_h: f64, eps_c: f64) -> f64 {
    match mode {
        OperatingMode::Engine => eps_h - eps_c,
        OperatingMode::Refrigerator => -eps_c,
        OperatingMode::Accelerator => eps_c,
        OperatingMode::Heater => eps_c - eps_h,
    }
}
