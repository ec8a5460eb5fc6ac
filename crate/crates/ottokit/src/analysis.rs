//! Efficiency and coefficient-of-performance analysis at maximum power.
//!
//! The fast-cycle optimum fixes both gaps, and the tight coupling between
//! heat and work turns gap ratios directly into efficiencies.  This module
//! derives the standard comparison bounds, the universal COP curve for
//! beta-homogeneous rates, deep-cooling power laws, the reciprocal scaling
//! of the capped refrigerator COP, and the small-temperature-difference
//! expansion of the efficiency at maximum power, both in closed form and by
//! fitting the actual optimizer output.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::fit::{polyfit, polyfit_standard_errors};
use crate::numerics::minimize::{bisect_root, golden_max, scan_sign_change};
use crate::optimize::{effective_rate, max_power, OptimizationResult};
use crate::thermo::{
    coth, logistic_neg, rate_value, Bath, BathLabel, BathPair, ConstraintBox, OperatingMode,
    RateModel,
};

/// Reference efficiencies of a bath pair.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EfficiencyBounds {
    /// Carnot efficiency 1 - T_C/T_H.
    pub eta_carnot: f64,
    /// Square-root bound 1 - sqrt(T_C/T_H), the classic endoreversible
    /// efficiency at maximum power.
    pub eta_ca: f64,
    /// Strong-coupling bound eta_c / (2 - eta_c).
    pub eta_ss: f64,
    /// Carnot coefficient of performance T_C / (T_H - T_C).
    pub cop_carnot: f64,
}

/// Reference efficiencies for hot/cold inverse temperatures; requires a
/// strictly colder cold bath.
pub fn carnot_bounds(beta_h: f64, beta_c: f64) -> Result<EfficiencyBounds> {
    if !(beta_h.is_finite() && beta_h > 0.0 && beta_c.is_finite() && beta_c > 0.0) {
        return Err(Error::Domain(format!(
            "inverse temperatures must be positive, got ({beta_h}, {beta_c})"
        )));
    }
    if beta_c <= beta_h {
        return Err(Error::Domain(format!(
            "cold bath must be strictly colder than hot: beta_c = {beta_c} <= beta_h = {beta_h}"
        )));
    }
    let eta_c = 1.0 - beta_h / beta_c;
    Ok(EfficiencyBounds {
        eta_carnot: eta_c,
        eta_ca: 1.0 - (beta_h / beta_c).sqrt(),
        eta_ss: eta_c / (2.0 - eta_c),
        cop_carnot: beta_h / (beta_c - beta_h),
    })
}

/// Engine efficiency at maximum power.
#[derive(Debug, Clone, Serialize)]
pub struct EmpReport {
    pub opt: OptimizationResult,
    /// Efficiency at the power optimum: 1 - eps_c / eps_h via tight
    /// coupling.
    pub eta: f64,
    pub bounds: EfficiencyBounds,
}

/// Maximize engine power over the gap box and report the efficiency at the
/// optimum.  Tight coupling gives `eta = 1 - eps_c / eps_h` exactly.
pub fn emp(baths: &BathPair, gap_box: &ConstraintBox) -> Result<EmpReport> {
    let bounds = carnot_bounds(baths.hot.beta, baths.cold.beta)?;
    let opt = max_power(OperatingMode::Engine, baths, gap_box)?;
    let (Some(eh), Some(ec)) = (opt.eps_h, opt.eps_c) else {
        return Err(Error::UndefinedEfficiency);
    };
    if eh == 0.0 {
        return Err(Error::UndefinedEfficiency);
    }
    Ok(EmpReport {
        eta: 1.0 - ec / eh,
        opt,
        bounds,
    })
}

/// Refrigerator coefficient of performance at maximum cooling power.
#[derive(Debug, Clone, Serialize)]
pub struct CmpReport {
    pub opt: OptimizationResult,
    /// COP at the cooling optimum: eps_c / (eps_h - eps_c).
    pub cop: f64,
    pub cop_carnot: f64,
}

/// Maximize cooling power over the gap box and report the coefficient of
/// performance at the optimum: `eps_c / (eps_h - eps_c)`.
pub fn cmp(baths: &BathPair, gap_box: &ConstraintBox) -> Result<CmpReport> {
    let bounds = carnot_bounds(baths.hot.beta, baths.cold.beta)?;
    let opt = max_power(OperatingMode::Refrigerator, baths, gap_box)?;
    let (Some(eh), Some(ec)) = (opt.eps_h, opt.eps_c) else {
        return Err(Error::UndefinedCop);
    };
    if eh - ec <= 0.0 {
        return Err(Error::UndefinedCop);
    }
    Ok(CmpReport {
        cop: ec / (eh - ec),
        opt,
        cop_carnot: bounds.cop_carnot,
    })
}

/// Universal COP-at-maximum-power curve for rates that depend on the gaps
/// only through `beta * eps`: `c0 * cop_carnot / (1 + c0 + cop_carnot)`.
///
/// `c0` is the temperature-independent constant `x_c / (x_h - x_c)` built
/// from the reduced-variable optimum; the curve then gives the COP at any
/// Carnot COP.
pub fn universal_cop_curve(c0: f64, cop_carnot: f64) -> Result<f64> {
    if !(c0.is_finite() && c0 > 0.0) {
        return Err(Error::Domain(format!(
            "reduced-variable constant must be positive, got {c0}"
        )));
    }
    if !(cop_carnot.is_finite() && cop_carnot > 0.0) {
        return Err(Error::Domain(format!(
            "carnot cop must be positive, got {cop_carnot}"
        )));
    }
    Ok(c0 * cop_carnot / (1.0 + c0 + cop_carnot))
}

/// Deep-cooling scaling law of the maximum cooling power.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawScaling {
    /// Dimensionless prefactor of the law.
    pub c_n: f64,
    /// Power of the cold temperature: P_max = c_n k_C T_C^(n+1).
    pub exponent: u32,
    /// Optimal cold-stroke gap in units of the cold temperature.
    pub x_c: f64,
    /// Maximum cooling power at the given cold inverse temperature.
    pub p_max: f64,
}

/// Maximum cooling power in the cold-temperature power-law regime, where
/// the cold-stroke gap locks to the cold temperature and the hot stroke
/// saturates.
///
/// For a cold-bath rate `k |eps|^n` (optionally with the bosonic
/// `coth(beta |eps| / 2)` factor) the cooling power obeys
/// `P_max = c_n k_C / beta_C^(n+1)`.  `r` is the hot/cold amplitude ratio;
/// it only enters for `n = 0`, where the hot stroke no longer dominates the
/// exchange rate.
pub fn refrigerator_power_law(
    cold_model: &RateModel,
    beta_c: f64,
    r: f64,
) -> Result<PowerLawScaling> {
    cold_model.validate()?;
    if !(beta_c.is_finite() && beta_c > 0.0) {
        return Err(Error::Domain(format!(
            "cold inverse temperature must be positive, got {beta_c}"
        )));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!(
            "amplitude ratio must be positive, got {r}"
        )));
    }
    let (k, n, reduced): (f64, u32, Box<dyn Fn(f64) -> f64>) = match *cold_model {
        RateModel::FermiPower { k, n } => {
            if n == 0 {
                let pre = r / (r.sqrt() + 1.0).powi(2);
                (k, n, Box::new(move |x: f64| pre * x * logistic_neg(x)))
            } else {
                (
                    k,
                    n,
                    Box::new(move |x: f64| x.powi(n as i32 + 1) * logistic_neg(x)),
                )
            }
        }
        RateModel::BosePower { k, n, .. } => {
            if n == 0 {
                (
                    k,
                    n,
                    Box::new(move |x: f64| {
                        let c = coth(x / 2.0);
                        r * c / (r.sqrt() + c.sqrt()).powi(2) * x * logistic_neg(x)
                    }),
                )
            } else {
                (
                    k,
                    n,
                    Box::new(move |x: f64| {
                        x.powi(n as i32 + 1) * coth(x / 2.0) * logistic_neg(x)
                    }),
                )
            }
        }
        _ => {
            return Err(Error::Domain(
                "deep-cooling scaling law applies to power-law rate families only".into(),
            ))
        }
    };
    let (x_c, c_n) = golden_max(&|x| reduced(x), 1e-6, 60.0, 1e-12);
    if !(c_n.is_finite() && c_n > 0.0) {
        return Err(Error::Regime(
            "no positive cooling power in the reduced-variable window".into(),
        ));
    }
    Ok(PowerLawScaling {
        c_n,
        exponent: n + 1,
        x_c,
        p_max: c_n * k / beta_c.powi(n as i32 + 1),
    })
}

/// One point of a capped-COP sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CmpScalingPoint {
    pub delta: f64,
    pub cop: f64,
    pub eps_h: f64,
    pub eps_c: f64,
}

/// Reciprocal scaling of the COP at maximum cooling power under a gap cap.
#[derive(Debug, Clone, Serialize)]
pub struct CmpScalingReport {
    pub points: Vec<CmpScalingPoint>,
    /// Log-log slope of COP versus cap; -1 in the scaling regime.
    pub slope: f64,
    /// Set when some cap is too close to the optimal cold gap for the
    /// reciprocal regime to hold.
    pub warning: Option<String>,
}

/// Sweep the gap cap and record the COP at maximum cooling power for each.
///
/// When the cap binds the hot gap while the cold gap stays interior, the
/// COP falls off as `1 / (beta_c * delta)`; the report carries the fitted
/// log-log slope and a warning if any cap is within a factor 20 of the
/// optimal cold gap (where the asymptotic regime has not set in).
pub fn constrained_cmp_scaling(baths: &BathPair, deltas: &[f64]) -> Result<CmpScalingReport> {
    if deltas.len() < 2 {
        return Err(Error::Domain(
            "cap sweep needs at least two cap values".into(),
        ));
    }
    if deltas.iter().any(|&d| !d.is_finite() || d <= 0.0) {
        return Err(Error::Domain("cap values must be finite and positive".into()));
    }
    let mut points = Vec::with_capacity(deltas.len());
    let mut warning: Option<String> = None;
    for &delta in deltas {
        let gap_box = ConstraintBox::new(delta * 1e-9, delta)?;
        let report = cmp(baths, &gap_box)?;
        let eps_h = report.opt.eps_h.expect("cop defined implies gaps present");
        let eps_c = report.opt.eps_c.expect("cop defined implies gaps present");
        if warning.is_none() && delta < 20.0 * eps_c {
            warning = Some(format!(
                "cap {delta} is within 20x of the optimal cold gap {eps_c:.6}; \
                 reciprocal scaling regime not reached"
            ));
        }
        points.push(CmpScalingPoint {
            delta,
            cop: report.cop,
            eps_h,
            eps_c,
        });
    }
    let lx: Vec<f64> = points.iter().map(|p| p.delta.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.cop.ln()).collect();
    let coeffs = polyfit(&lx, &ly, 1)?;
    Ok(CmpScalingReport {
        points,
        slope: coeffs[1],
        warning,
    })
}

/// Small-temperature-difference expansion of the efficiency at maximum
/// power: `eta* = a1 eta_c + a2 eta_c^2 + O(eta_c^3)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExpansionCoefficients {
    /// Root of the degenerate-limit stationarity condition; the optimal
    /// reduced gap at vanishing temperature difference.
    pub m0: f64,
    /// First-order coefficient of the reduced cold gap; -1/2 universally.
    pub b1: f64,
    /// Second-order coefficient of the reduced cold gap.
    pub b2: f64,
    /// eta_c coefficient: (1 + b1), i.e. the universal 1/2.
    pub a1: f64,
    /// eta_c^2 coefficient: (1 + b2) / 2.
    pub a2: f64,
    /// True when the rate gradients were below resolution and the
    /// symmetric-branch value b2 = -3/4 applies.
    pub degenerate: bool,
}

/// Closed-form expansion coefficients of the efficiency at maximum power
/// around vanishing temperature difference, for the given rate models at
/// the hot-bath temperature.
///
/// The reduced exchange rate `g(x_h, x_c) = geff(G_H(x_h/b), G_C(x_c/b))`
/// (with `b` the hot inverse temperature) and its gradient at the
/// degenerate optimum `(m0, m0)` fix the quadratic coefficient.
pub fn emp_expansion_closed_form(baths: &BathPair) -> Result<ExpansionCoefficients> {
    // The coefficients live in the vanishing-temperature-difference limit,
    // so both rate models are evaluated at the hot-bath temperature.
    let beta = baths.hot.beta;
    let g = |xh: f64, xc: f64| -> f64 {
        let gh = match rate_value(&baths.hot.rate_model, xh / beta, beta) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        let gc = match rate_value(&baths.cold.rate_model, xc / beta, beta) {
            Ok(v) => v,
            Err(_) => return f64::NAN,
        };
        effective_rate(gh, gc).unwrap_or(f64::NAN)
    };
    let objective = |m: f64| -> f64 {
        let h = 1e-6 * m.max(1.0);
        let g0 = g(m, m);
        let dh = (g(m + h, m) - g(m - h, m)) / (2.0 * h);
        let dc = (g(m, m + h) - g(m, m - h)) / (2.0 * h);
        g0 * (2.0 - m * (m / 2.0).tanh()) + m * (dh + dc)
    };
    let bracket = scan_sign_change(&objective, 1e-3, 50.0, 400)
        .ok_or_else(|| Error::RootNotFound(
            "no stationary reduced gap in (0.001, 50)".into(),
        ))?;
    let m0 = if bracket.0 == bracket.1 {
        bracket.0
    } else {
        bisect_root(&objective, bracket.0, bracket.1, 1e-13).ok_or_else(|| {
            Error::RootNotFound("bisection failed on the stationarity bracket".into())
        })?
    };

    let h = 1e-6 * m0.max(1.0);
    let g0 = g(m0, m0);
    let dh = (g(m0 + h, m0) - g(m0 - h, m0)) / (2.0 * h);
    let dc = (g(m0, m0 + h) - g(m0, m0 - h)) / (2.0 * h);
    let b1 = -0.5;
    let degenerate = (dh.abs() + dc.abs()) * m0 < 1e-7 * g0;
    let b2 = if degenerate {
        -0.75
    } else {
        m0 * (m0 / 2.0).tanh() / 8.0 * (dh - dc) / (dh + dc)
            - (2.0 * dh + dc) / (2.0 * (dh + dc))
    };
    Ok(ExpansionCoefficients {
        m0,
        b1,
        b2,
        a1: 1.0 + b1,
        a2: (1.0 + b2) / 2.0,
        degenerate,
    })
}

/// Expansion coefficients fitted from actual optimizer output.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionFit {
    pub a1: f64,
    pub a2: f64,
    pub a1_se: f64,
    pub a2_se: f64,
    /// Uncertainty of a2 including truncation sensitivity: its standard
    /// error plus the shift from adding one more fit order.
    pub residual: f64,
    pub eta_c: Vec<f64>,
    pub emp: Vec<f64>,
}

/// Fit `eta* / eta_c` against `eta_c` over a geometric grid in the window,
/// recovering the expansion coefficients from optimizer runs.
///
/// The window must sit inside (0, 0.1] with at least eight samples.  Any
/// run whose optimum touches the gap box makes the expansion meaningless
/// and is rejected.
pub fn emp_expansion_fit(
    hot: &Bath,
    cold_model: &RateModel,
    gap_box: &ConstraintBox,
    window: (f64, f64),
    n_samples: usize,
) -> Result<ExpansionFit> {
    let (w0, w1) = window;
    if !(w0 > 0.0 && w1 > w0 && w1 <= 0.1) {
        return Err(Error::ExpansionInvalid(format!(
            "window ({w0}, {w1}) must sit inside (0, 0.1] with positive width"
        )));
    }
    if n_samples < 8 {
        return Err(Error::ExpansionInvalid(format!(
            "need at least 8 samples, got {n_samples}"
        )));
    }
    let mut eta_c_values = Vec::with_capacity(n_samples);
    let mut emp_values = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let eta_c = w0 * (w1 / w0).powf(i as f64 / (n_samples - 1) as f64);
        let beta_c = hot.beta / (1.0 - eta_c);
        let baths = BathPair::new(
            hot.clone(),
            Bath::new(BathLabel::Cold, beta_c, cold_model.clone())?,
        )?;
        let report = emp(&baths, gap_box)?;
        if report.opt.boundary.any() {
            return Err(Error::ExpansionInvalid(format!(
                "optimum pinned to the gap box at eta_c = {eta_c:.4}; \
                 enlarge the box or shrink the window"
            )));
        }
        eta_c_values.push(eta_c);
        emp_values.push(report.eta);
    }
    let ys: Vec<f64> = eta_c_values
        .iter()
        .zip(&emp_values)
        .map(|(&x, &y)| y / x)
        .collect();
    let cubic = polyfit(&eta_c_values, &ys, 2)?;
    let quartic = polyfit(&eta_c_values, &ys, 3)?;
    let ses = polyfit_standard_errors(&eta_c_values, &ys, &cubic)?;
    Ok(ExpansionFit {
        a1: cubic[0],
        a2: cubic[1],
        a1_se: ses[0],
        a2_se: ses[1],
        residual: ses[1] + (cubic[1] - quartic[1]).abs(),
        eta_c: eta_c_values,
        emp: emp_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn pair(beta_h: f64, beta_c: f64, mh: RateModel, mc: RateModel) -> BathPair {
        BathPair::from_parts(beta_h, mh, beta_c, mc).unwrap()
    }

    fn sym_pair(beta_h: f64, beta_c: f64, m: RateModel) -> BathPair {
        pair(beta_h, beta_c, m.clone(), m)
    }

    #[test]
    fn carnot_bounds_examples() {
        let b = carnot_bounds(1.0, 2.0).unwrap();
        assert_relative_eq!(b.eta_carnot, 0.5);
        assert_relative_eq!(b.eta_ca, 1.0 - 0.5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(b.eta_ss, 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(b.cop_carnot, 1.0);
        assert!(carnot_bounds(2.0, 1.0).is_err());
        assert!(carnot_bounds(1.0, 1.0).is_err());
    }

    #[test]
    fn emp_leading_order_is_half_carnot() {
        let baths = sym_pair(
            1.0,
            1.0 / (1.0 - 0.01),
            RateModel::Constant { k: 1.0 },
        );
        let gap_box = ConstraintBox::new(1e-4, 30.0).unwrap();
        let report = emp(&baths, &gap_box).unwrap();
        assert_abs_diff_eq!(report.eta, 0.005, epsilon = 5e-5);
        assert!(!report.opt.boundary.any());
    }

    #[test]
    fn emp_sits_between_strong_coupling_bounds() {
        for model in [
            RateModel::Constant { k: 1.0 },
            RateModel::FermiPower { k: 1.0, n: 1 },
            RateModel::BosePower {
                k: 1.0,
                n: 1,
                eps_floor: 1e-9,
            },
        ] {
            let baths = sym_pair(1.0, 2.0, model);
            let gap_box = ConstraintBox::new(1e-4, 60.0).unwrap();
            let report = emp(&baths, &gap_box).unwrap();
            assert!(
                report.eta >= report.bounds.eta_carnot / 2.0 - 1e-9,
                "eta {} below eta_c/2",
                report.eta
            );
            assert!(
                report.eta <= report.bounds.eta_ss + 1e-9,
                "eta {} above eta_c/(2 - eta_c)",
                report.eta
            );
        }
    }

    #[test]
    fn undefined_efficiency_without_engine_regime() {
        // A single-point box forces equal gaps, where engine power is zero.
        let baths = sym_pair(1.0, 2.0, RateModel::Constant { k: 1.0 });
        let gap_box = ConstraintBox::new(2.0, 2.0).unwrap();
        assert!(matches!(
            emp(&baths, &gap_box),
            Err(Error::UndefinedEfficiency)
        ));
        // Equal temperatures are rejected upstream: the Carnot bounds
        // degenerate before the (null) optimization is even attempted.
        let equal = sym_pair(1.0, 1.0, RateModel::Constant { k: 1.0 });
        let wide = ConstraintBox::new(1e-3, 10.0).unwrap();
        assert!(matches!(emp(&equal, &wide), Err(Error::Domain(_))));
    }

    #[test]
    fn universal_cop_curve_matches_direct_optimization() {
        let x_h_star = 2.553_164_29;
        let x_c_star = 1.423_299_26;
        let c0 = x_c_star / (x_h_star - x_c_star);
        let gap_box = ConstraintBox::new(1e-3, 40.0).unwrap();
        for &(bh, bc) in &[(1.0, 1.4), (1.0, 2.0), (1.0, 3.0)] {
            let baths = sym_pair(bh, bc, RateModel::GaussianX { k: 1.0, x_bar: 2.0 });
            let report = cmp(&baths, &gap_box).unwrap();
            let curve = universal_cop_curve(c0, report.cop_carnot).unwrap();
            assert_relative_eq!(report.cop, curve, max_relative = 1e-5);
        }
    }

    #[test]
    fn power_law_prefactor_frozen_values() {
        // Constant cold rate at r = 1: c_0 = max x p(x) / 4, solved
        // independently from the stationarity condition.
        let law = refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 0 }, 1.0, 1.0)
            .unwrap();
        assert_relative_eq!(law.c_n, 0.069_616_135_690_268_46, max_relative = 1e-9);
        assert_relative_eq!(law.x_c, 1.278_464_542_849_917_5, max_relative = 1e-6);
        assert_eq!(law.exponent, 1);
        // Scaling in the cold temperature: halving T_C quarters nothing
        // here (n = 0): power falls linearly.
        let law2 =
            refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 0 }, 2.0, 1.0).unwrap();
        assert_relative_eq!(law2.p_max, law.p_max / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn power_law_r_independent_above_linear_order() {
        for model in [
            RateModel::FermiPower { k: 0.8, n: 1 },
            RateModel::BosePower {
                k: 0.8,
                n: 2,
                eps_floor: 1e-9,
            },
        ] {
            let a = refrigerator_power_law(&model, 1.0, 0.5).unwrap();
            let b = refrigerator_power_law(&model, 1.0, 4.0).unwrap();
            assert_relative_eq!(a.c_n, b.c_n, max_relative = 1e-12);
        }
        // r does matter at n = 0.
        let a = refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 0 }, 1.0, 0.5)
            .unwrap();
        let b = refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 0 }, 1.0, 4.0)
            .unwrap();
        assert!((a.c_n - b.c_n).abs() > 1e-3);
    }

    #[test]
    fn power_law_matches_direct_optimization_deep_in_the_cold() {
        let baths = pair(
            1.0,
            40.0,
            RateModel::FermiPower { k: 1.0, n: 1 },
            RateModel::FermiPower { k: 1.0, n: 1 },
        );
        // The law's supremum sends the hot gap to the box top (the hot bath
        // becomes infinitely fast), so the cap must be generous: a top of H
        // costs a factor (1 + sqrt(G_C/G_H))^-2 ~ 1 - 2 sqrt(x_c/(bc H)).
        let gap_box = ConstraintBox::new(1e-6, 5000.0).unwrap();
        let opt = max_power(OperatingMode::Refrigerator, &baths, &gap_box).unwrap();
        assert!(opt.boundary.eps_h_upper, "hot gap should pin to the cap");
        let law =
            refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 1 }, 40.0, 1.0).unwrap();
        assert_relative_eq!(opt.max_power, law.p_max, max_relative = 0.02);
    }

    #[test]
    fn capped_cop_scales_reciprocally() {
        let baths = sym_pair(1.0, 2.0, RateModel::FermiPower { k: 1.0, n: 1 });
        let deltas: Vec<f64> = (0..6).map(|i| 50.0 * 10f64.powf(i as f64 / 5.0)).collect();
        let report = constrained_cmp_scaling(&baths, &deltas).unwrap();
        assert!(report.warning.is_none(), "{:?}", report.warning);
        assert_abs_diff_eq!(report.slope, -1.0, epsilon = 0.05);
        // COP magnitude itself follows x_c*/(beta_c delta).
        let law =
            refrigerator_power_law(&RateModel::FermiPower { k: 1.0, n: 1 }, 2.0, 1.0).unwrap();
        let p0 = &report.points[5];
        assert_relative_eq!(p0.cop, law.x_c / (2.0 * p0.delta), max_relative = 0.05);
    }

    #[test]
    fn capped_cop_sweep_warns_when_cap_is_tight() {
        let baths = sym_pair(1.0, 2.0, RateModel::FermiPower { k: 1.0, n: 1 });
        let report = constrained_cmp_scaling(&baths, &[0.5, 1.0]).unwrap();
        assert!(report.warning.is_some());
    }

    #[test]
    fn expansion_closed_form_frozen_roots() {
        // Independent solves of the stationarity condition for each rate
        // family (hot and cold models equal unless stated).
        let cases: [(RateModel, RateModel, f64, f64); 5] = [
            (
                RateModel::Constant { k: 1.0 },
                RateModel::Constant { k: 1.0 },
                2.399_357,
                0.125,
            ),
            (
                RateModel::FermiPower { k: 1.0, n: 1 },
                RateModel::FermiPower { k: 1.0, n: 1 },
                3.243_637,
                0.125,
            ),
            (
                RateModel::BosePower {
                    k: 1.0,
                    n: 0,
                    eps_floor: 1e-9,
                },
                RateModel::BosePower {
                    k: 1.0,
                    n: 0,
                    eps_floor: 1e-9,
                },
                1.915_008,
                0.125,
            ),
            (
                RateModel::BosePower {
                    k: 1.0,
                    n: 1,
                    eps_floor: 1e-9,
                },
                RateModel::BosePower {
                    k: 1.0,
                    n: 1,
                    eps_floor: 1e-9,
                },
                2.984_705,
                0.125,
            ),
            (
                RateModel::FermiPower { k: 1.0, n: 1 },
                RateModel::BosePower {
                    k: 1.0,
                    n: 1,
                    eps_floor: 1e-9,
                },
                3.128_248,
                0.134_760,
            ),
        ];
        for (mh, mc, m0, a2) in cases {
            let baths = pair(1.0, 2.0, mh, mc);
            let coeffs = emp_expansion_closed_form(&baths).unwrap();
            assert_relative_eq!(coeffs.m0, m0, max_relative = 2e-6);
            assert_relative_eq!(coeffs.a2, a2, max_relative = 2e-5);
            assert_relative_eq!(coeffs.a1, 0.5);
            assert_relative_eq!(coeffs.b1, -0.5);
        }
    }

    #[test]
    fn expansion_fit_recovers_closed_form() {
        let hot = Bath::new(BathLabel::Hot, 1.0, RateModel::FermiPower { k: 1.0, n: 1 })
            .unwrap();
        let cold_model = RateModel::BosePower {
            k: 1.0,
            n: 1,
            eps_floor: 1e-9,
        };
        let gap_box = ConstraintBox::new(1e-3, 50.0).unwrap();
        let fit = emp_expansion_fit(&hot, &cold_model, &gap_box, (0.01, 0.1), 12).unwrap();
        let baths = pair(1.0, 2.0, RateModel::FermiPower { k: 1.0, n: 1 }, cold_model);
        let closed = emp_expansion_closed_form(&baths).unwrap();
        assert_relative_eq!(fit.a1, 0.5, max_relative = 1e-4);
        // The quadratic fit carries O(eta_c) truncation bias over this
        // window (~3e-4 here); the residual is built to cover it.
        assert_abs_diff_eq!(fit.a2, closed.a2, epsilon = 5e-4);
        assert!(fit.residual >= (fit.a2 - closed.a2).abs());
        assert!(fit.residual <= 5.0 * (fit.a2 - closed.a2).abs());
    }

    #[test]
    fn expansion_fit_rejects_pinned_box() {
        let hot =
            Bath::new(BathLabel::Hot, 1.0, RateModel::Constant { k: 1.0 }).unwrap();
        let gap_box = ConstraintBox::new(1.0, 1.2).unwrap();
        let err = emp_expansion_fit(
            &hot,
            &RateModel::Constant { k: 1.0 },
            &gap_box,
            (0.01, 0.1),
            8,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ExpansionInvalid(_)));
    }

    #[test]
    fn expansion_fit_window_validation() {
        let hot =
            Bath::new(BathLabel::Hot, 1.0, RateModel::Constant { k: 1.0 }).unwrap();
        let gap_box = ConstraintBox::new(1e-3, 50.0).unwrap();
        let model = RateModel::Constant { k: 1.0 };
        assert!(matches!(
            emp_expansion_fit(&hot, &model, &gap_box, (0.01, 0.2), 8),
            Err(Error::ExpansionInvalid(_))
        ));
        assert!(matches!(
            emp_expansion_fit(&hot, &model, &gap_box, (0.01, 0.1), 5),
            Err(Error::ExpansionInvalid(_))
        ));
    }
}
