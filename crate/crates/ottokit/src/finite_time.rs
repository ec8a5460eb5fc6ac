//! Finite-period and finite-quench corrections to fast-cycle power.
//!
//! The fast-cycle optimum assumes an infinitesimal period and instantaneous
//! gap switches.  Backing off either idealization attenuates the power: a
//! finite period `dt` multiplies it by a closed-form factor (exact for
//! square waves at the optimal split), and switching ramps of duration `tau`
//! remove a further first-order `tau/dt` share.

use serde::Serialize;

use crate::dynamics::{heat_fluxes, mode_power, rate_coeffs, Protocol};
use crate::error::{Error, Result};
use crate::numerics::quad::integrate;
use crate::optimize::effective_rate;
use crate::thermo::{coth, BathPair, OperatingMode};

/// Period called fast, crossover, or slow relative to the exchange rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DtRegime {
    /// Both coth arguments below 0.1: the quadratic correction describes
    /// the factor to better than a part in 1e3.
    SmallDt,
    Crossover,
    /// Both coth arguments above 4: the factor follows the 1/dt tail to
    /// better than a part in 1e3.
    LargeDt,
}

/// Finite-period attenuation of the fast-cycle power.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FiniteTimeReport {
    pub dt: f64,
    /// Power relative to the infinitesimal-period optimum, in (0, 1].
    pub factor: f64,
    pub gamma_tilde: f64,
    pub gamma_tilde_h: f64,
    pub gamma_tilde_c: f64,
    pub regime: DtRegime,
}

/// Attenuation factor of a two-stroke cycle of period `dt` between channels
/// with relaxation rates `gamma_h`, `gamma_c`, at the optimal time split.
///
/// With `gt = effective_rate(gamma_h, gamma_c)` and
/// `gt_a = sqrt(gt * gamma_a)`, the factor is
/// `[(gt_h dt/2)^-1 + (gt_c dt/2)^-1] / [coth(gt_h dt/2) + coth(gt_c dt/2)]`.
/// It is exact for square waves (not merely asymptotic), tends to 1 as
/// `dt -> 0` with quadratic correction `gt_h gt_c dt^2 / 12`, and decays as
/// `[(gt_h dt/2)^-1 + (gt_c dt/2)^-1] / 2` for large `dt`.
pub fn finite_period_factor(dt: f64, gamma_h: f64, gamma_c: f64) -> Result<FiniteTimeReport> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!(
            "period must be finite and positive, got {dt}"
        )));
    }
    let gt = effective_rate(gamma_h, gamma_c)?;
    if gt == 0.0 {
        return Err(Error::Domain(
            "a dead relaxation channel leaves no cycle to attenuate".into(),
        ));
    }
    let gt_h = (gt * gamma_h).sqrt();
    let gt_c = (gt * gamma_c).sqrt();
    let (xh, xc) = (0.5 * gt_h * dt, 0.5 * gt_c * dt);
    let factor = (1.0 / xh + 1.0 / xc) / (coth(xh) + coth(xc));
    let regime = if xh.max(xc) <= 0.1 {
        DtRegime::SmallDt
    } else if xh.min(xc) >= 4.0 {
        DtRegime::LargeDt
    } else {
        DtRegime::Crossover
    };
    Ok(FiniteTimeReport {
        dt,
        factor,
        gamma_tilde: gt,
        gamma_tilde_h: gt_h,
        gamma_tilde_c: gt_c,
        regime,
    })
}

/// Finite-period attenuation of the symmetric heater cycle as a function of
/// the dimensionless period `x = dt * Gamma`: `tanh(x/4) / (x/4)`.
///
/// Equal rates reduce the general factor to this curve: both effective
/// channel rates become `Gamma / 2`.
pub fn heater_finite_period_factor(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::Domain(format!(
            "dimensionless period must be nonnegative, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let y = 0.25 * x;
    Ok(y.tanh() / y)
}

/// Largest instantaneous total relaxation rate along the protocol, from a
/// per-segment scan (65 points each; the rate profiles are smooth within a
/// segment).
fn max_total_rate(protocol: &Protocol, baths: &BathPair) -> Result<f64> {
    let mut top = 0.0f64;
    for seg in protocol.segments() {
        for k in 0..=64 {
            let t = seg.duration * k as f64 / 64.0;
            let (a, _) = rate_coeffs(seg, t, baths)?;
            top = top.max(a);
        }
    }
    Ok(top)
}

/// Reject protocols outside the frozen-population regime, where the period
/// must satisfy `T * max Gamma <= 0.01`.
fn fast_driving_gate(protocol: &Protocol, baths: &BathPair) -> Result<f64> {
    let product = protocol.period() * max_total_rate(protocol, baths)?;
    if product > 0.01 * (1.0 + 1e-12) {
        return Err(Error::Regime(format!(
            "period times peak rate is {product:.3e}; the frozen-population \
             treatment needs at most 0.01"
        )));
    }
    Ok(product)
}

/// Population the system freezes at under fast driving: the rate-weighted
/// period average of the instantaneous stationary population,
/// `p = int G(s) p_eq(s) ds / int G(s) ds`.
///
/// Requires `T * max Gamma <= 0.01`.
pub fn quench_average_population(protocol: &Protocol, baths: &BathPair) -> Result<f64> {
    fast_driving_gate(protocol, baths)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for seg in protocol.segments() {
        let a_int = integrate(
            &|t| match rate_coeffs(seg, t, baths) {
                Ok((a, _)) => a,
                Err(_) => f64::NAN,
            },
            0.0,
            seg.duration,
            1e-12,
            1e-300,
        )?;
        let b_int = integrate(
            &|t| match rate_coeffs(seg, t, baths) {
                Ok((_, b)) => b,
                Err(_) => f64::NAN,
            },
            0.0,
            seg.duration,
            1e-12,
            1e-300,
        )?;
        den += a_int;
        num += b_int;
    }
    if !(den.is_finite() && num.is_finite()) || den <= 0.0 {
        return Err(Error::Integration(
            "protocol never couples to a bath; no frozen population exists".into(),
        ));
    }
    Ok(num / den)
}

/// Power of a switching-ramp cycle relative to its instantaneous-switch
/// reference.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuenchReport {
    /// Duration of each of the two linear switching ramps.
    pub tau: f64,
    /// Total bath-contact time (the cycle period is `dt + 2 tau`).
    pub dt: f64,
    /// Frozen population of the ramped cycle.
    pub p_bar: f64,
    pub power: f64,
    /// First-order power loss `1 - P(tau) / P(0)`.
    pub deficit: f64,
}

/// Mode power of a fast protocol with the population frozen at its average:
/// each segment contributes its work integral at fixed `p_bar`.
fn frozen_mode_power(
    protocol: &Protocol,
    baths: &BathPair,
    mode: OperatingMode,
) -> Result<(f64, f64)> {
    let p_bar = quench_average_population(protocol, baths)?;
    let mut j_hot = 0.0;
    let mut j_cold = 0.0;
    for seg in protocol.segments() {
        j_hot += integrate(
            &|t| match heat_fluxes(seg, t, p_bar, baths) {
                Ok((jh, _)) => jh,
                Err(_) => f64::NAN,
            },
            0.0,
            seg.duration,
            1e-12,
            1e-300,
        )?;
        j_cold += integrate(
            &|t| match heat_fluxes(seg, t, p_bar, baths) {
                Ok((_, jc)) => jc,
                Err(_) => f64::NAN,
            },
            0.0,
            seg.duration,
            1e-12,
            1e-300,
        )?;
    }
    let period = protocol.period();
    Ok((mode_power(mode, j_hot / period, j_cold / period), p_bar))
}

/// Power and first-order deficit of a trapezoid cycle whose gap switches
/// take a finite time `tau` each, against the square wave with the same
/// strokes.
///
/// Preconditions: `tau <= (tau_h + tau_c) / 5` and the fast-driving gate
/// `T * max Gamma <= 0.01`; the reference square wave must deliver positive
/// power for the deficit to mean anything.
pub fn quench_power(
    eps_h: f64,
    eps_c: f64,
    tau_h: f64,
    tau_c: f64,
    tau: f64,
    baths: &BathPair,
    mode: OperatingMode,
) -> Result<QuenchReport> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain(format!(
            "quench duration must be finite and nonnegative, got {tau}"
        )));
    }
    let dt = tau_h + tau_c;
    if tau > dt / 5.0 {
        return Err(Error::Regime(format!(
            "quench duration {tau:.3e} exceeds a fifth of the contact time {dt:.3e}; \
             the first-order treatment does not apply"
        )));
    }
    let ramped = Protocol::trapezoid(eps_h, eps_c, tau_h, tau_c, tau)?;
    let (power, p_bar) = frozen_mode_power(&ramped, baths, mode)?;
    let reference = Protocol::trapezoid(eps_h, eps_c, tau_h, tau_c, 0.0)?;
    let (p0, _) = frozen_mode_power(&reference, baths, mode)?;
    if p0 <= 0.0 {
        return Err(Error::Regime(format!(
            "instantaneous-switch reference power is {p0:.3e}; \
             the deficit needs a positive baseline"
        )));
    }
    Ok(QuenchReport {
        tau,
        dt,
        p_bar,
        power,
        deficit: 1.0 - power / p0,
    })
}
