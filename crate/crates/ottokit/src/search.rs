//! Brute-force checks of fast-cycle optimality.
//!
//! The closed-form optimum claims no protocol shape beats the two-stroke
//! cycle at the optimal gaps and split.  This module attacks that claim
//! directly: seeded random piecewise-constant protocols are evaluated
//! exactly and compared against the analytic ceiling, and the sub-cycle
//! decomposition identity behind the optimality argument is verified on
//! explicit splits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{mode_power, piecewise_constant_cycle, square_wave_closed_form};
use crate::error::{Error, Result};
use crate::optimize::max_power;
use crate::thermo::{BathLabel, BathPair, ConstraintBox, OperatingMode};

/// Budget and shape of a random-protocol search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    /// Strokes per protocol; at least 2.
    pub n_segments: usize,
    /// Common period of every sampled protocol.
    pub period: f64,
    /// Number of random protocols to evaluate.
    pub samples: u64,
    pub seed: u64,
    /// Gap interval sampled uniformly, `[lo, hi]`.
    pub gap_range: (f64, f64),
}

/// One stroke of the best protocol found.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stroke {
    pub gap: f64,
    pub bath: BathLabel,
    pub duration: f64,
}

/// Outcome of a random-protocol search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub mode: OperatingMode,
    pub seed: u64,
    pub samples: u64,
    pub n_segments: usize,
    pub period: f64,
    pub gap_range: (f64, f64),
    /// Highest mode power over all sampled protocols.
    pub best_power: f64,
    /// Sample index that produced it (lowest index on ties).
    pub best_index: u64,
    pub best_protocol: Vec<Stroke>,
    /// Analytic fast-cycle ceiling over the same gap range.
    pub bound: f64,
    /// `best_power / bound`; absent when the mode has no positive ceiling.
    pub ratio: Option<f64>,
    /// Samples that exceeded the ceiling beyond tolerance.  Any nonzero
    /// count falsifies the optimality claim.
    pub violations: u64,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.n_segments < 2 {
            return Err(Error::Config(format!(
                "search needs at least 2 segments per protocol, got {}",
                self.n_segments
            )));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::Config(format!(
                "search period must be finite and positive, got {}",
                self.period
            )));
        }
        if self.samples == 0 {
            return Err(Error::Config("search needs at least one sample".into()));
        }
        let (lo, hi) = self.gap_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!(
                "gap range must be a finite interval, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }
}

/// Largest relaxation rate either bath exhibits over the gap range, from a
/// dense scan (the rate curves are smooth).
fn peak_rate(baths: &BathPair, lo: f64, hi: f64) -> Result<f64> {
    let mut top = 0.0f64;
    for k in 0..=1024 {
        let eps = lo + (hi - lo) * k as f64 / 1024.0;
        top = top.max(baths.hot.rate(eps)?);
        top = top.max(baths.cold.rate(eps)?);
    }
    Ok(top)
}

/// Draw one random protocol: uniform gaps, fair bath assignment, Dirichlet(1)
/// durations (normalized exponentials) summing to the period.
fn draw_protocol(
    rng: &mut ChaCha8Rng,
    config: &SearchConfig,
    strokes: &mut Vec<(f64, BathLabel, f64)>,
) {
    let (lo, hi) = config.gap_range;
    strokes.clear();
    loop {
        let mut total = 0.0;
        for _ in 0..config.n_segments {
            let gap = rng.random_range(lo..=hi);
            let bath = if rng.random::<bool>() {
                BathLabel::Hot
            } else {
                BathLabel::Cold
            };
            let w: f64 = rng.sample(Exp1);
            strokes.push((gap, bath, w));
            total += w;
        }
        if total > 0.0 && strokes.iter().all(|s| s.2 > 0.0) {
            for s in strokes.iter_mut() {
                s.2 *= config.period / total;
            }
            return;
        }
        strokes.clear(); // astronomically rare zero draw; redraw
    }
}

/// Evaluate `samples` seeded random piecewise-constant protocols of the
/// given mode and report the best one against the analytic ceiling.
///
/// Sample `i` draws from an independent, reproducible stream (`set_stream`
/// of the seeded generator), so the outcome is identical for any thread
/// count.  Requires the fast-driving gate `period * peak rate <= 0.01`; an
/// accelerator search additionally requires a gap range closed under its
/// feasibility wedge (`beta_c * lo >= beta_h * hi` with `lo >= 0`), since
/// the analytic ceiling only bounds feasible gap pairs.
pub fn random_protocol_search(
    mode: OperatingMode,
    baths: &BathPair,
    config: &SearchConfig,
) -> Result<SearchReport> {
    config.validate()?;
    let (lo, hi) = config.gap_range;
    let product = config.period * peak_rate(baths, lo, hi)?;
    if product > 0.01 * (1.0 + 1e-12) {
        return Err(Error::Regime(format!(
            "period times peak rate is {product:.3e}; the fast-cycle ceiling \
             needs at most 0.01"
        )));
    }
    if mode == OperatingMode::Accelerator
        && !(lo >= 0.0 && baths.cold.beta * lo >= baths.hot.beta * hi)
    {
        return Err(Error::Infeasible(format!(
            "accelerator search needs a feasibility-closed gap range: \
             beta_c * lo >= beta_h * hi with lo >= 0, got ({lo}, {hi})"
        )));
    }

    let gap_box = ConstraintBox::new(lo, hi)?;
    let bound = max_power(mode, baths, &gap_box)?.max_power;
    // Tolerated overshoot before a sample counts as a violation: relative
    // headroom on a positive ceiling plus an absolute floor for roundoff on
    // a zero one.
    let tolerance = 1e-6 * bound.abs() + 1e-15;

    struct Best {
        power: f64,
        index: u64,
        strokes: Vec<(f64, BathLabel, f64)>,
        violations: u64,
    }
    let identity = || Best {
        power: f64::NEG_INFINITY,
        index: u64::MAX,
        strokes: Vec::new(),
        violations: 0,
    };
    let merged = (0..config.samples)
        .into_par_iter()
        .fold(identity, |mut acc, i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i + 1);
            let mut strokes = Vec::with_capacity(config.n_segments);
            draw_protocol(&mut rng, config, &mut strokes);
            // Gaps and durations in range keep the evaluation infallible.
            let (_, jh, jc) =
                piecewise_constant_cycle(&strokes, baths).expect("sampled protocol is valid");
            let power = mode_power(mode, jh, jc);
            if power > bound + tolerance {
                acc.violations += 1;
            }
            if power > acc.power || (power == acc.power && i < acc.index) {
                acc.power = power;
                acc.index = i;
                acc.strokes = strokes;
            }
            acc
        })
        .reduce(identity, |a, b| {
            let violations = a.violations + b.violations;
            let mut keep = if b.power > a.power || (b.power == a.power && b.index < a.index) {
                b
            } else {
                a
            };
            keep.violations = violations;
            keep
        });

    Ok(SearchReport {
        mode,
        seed: config.seed,
        samples: config.samples,
        n_segments: config.n_segments,
        period: config.period,
        gap_range: config.gap_range,
        best_power: merged.power,
        best_index: merged.index,
        best_protocol: merged
            .strokes
            .iter()
            .map(|&(gap, bath, duration)| Stroke {
                gap,
                bath,
                duration,
            })
            .collect(),
        bound,
        ratio: if bound > 0.0 {
            Some(merged.power / bound)
        } else {
            None
        },
        violations: merged.violations,
    })
}

/// One split level of a sub-cycle decomposition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SplitCase {
    /// Population level the cycle is cut at.
    pub p_split: f64,
    /// Crossing time within the hot stroke.
    pub t_hot: f64,
    /// Crossing time within the cold stroke.
    pub t_cold: f64,
    /// Powers of the two standalone sub-cycles.
    pub power_first: f64,
    pub power_second: f64,
    /// Duration-weighted mean of the sub-cycle powers.
    pub weighted_mean: f64,
    /// Deviation of the full-cycle power from the weighted mean, relative
    /// to the cycle's gross heat scale.
    pub identity_error: f64,
}

/// Sub-cycle decomposition report for one square-wave cycle.
#[derive(Debug, Clone, Serialize)]
pub struct SubcycleReport {
    pub mode: OperatingMode,
    /// Full-cycle power.
    pub power: f64,
    /// Population extremes of the cycle.
    pub p_low: f64,
    pub p_high: f64,
    pub splits: Vec<SplitCase>,
    /// Largest identity error across the splits.
    pub max_identity_error: f64,
}

/// Cut a square-wave cycle at `n_splits` interior population levels and
/// verify, for each, that the full-cycle power is the duration-weighted
/// mean of the two standalone sub-cycle powers.
///
/// Each stroke relaxes monotonically, so a level strictly between the
/// cycle's population extremes is crossed exactly once per stroke; the two
/// pieces between crossings are themselves closed square-wave cycles.  The
/// identity implies the full cycle can never beat both of its parts, which
/// is what makes the infinitesimal cycle optimal.
pub fn subcycle_split_check(
    eps_h: f64,
    eps_c: f64,
    tau_h: f64,
    tau_c: f64,
    baths: &BathPair,
    mode: OperatingMode,
    n_splits: usize,
) -> Result<SubcycleReport> {
    if n_splits == 0 {
        return Err(Error::Config("need at least one split level".into()));
    }
    let sol = square_wave_closed_form(eps_h, eps_c, tau_h, tau_c, baths)?;
    let swing = (sol.p_switch - sol.p_start).abs();
    if swing < 1e-14 {
        return Err(Error::SplitUndefined(format!(
            "population swing {swing:.3e} leaves no interior level to split at"
        )));
    }
    let p_low = sol.p_start.min(sol.p_switch);
    let p_high = sol.p_start.max(sol.p_switch);
    let gh = baths.hot.rate(eps_h)?;
    let gc = baths.cold.rate(eps_c)?;
    let ph = baths.hot.p_eq(eps_h)?;
    let pc = baths.cold.p_eq(eps_c)?;
    let period = tau_h + tau_c;
    let power = mode_power(mode, sol.avg_j_hot, sol.avg_j_cold);
    let heat_scale = ((sol.q_hot.abs() + sol.q_cold.abs()) / period).max(1e-300);

    let mut splits = Vec::with_capacity(n_splits);
    let mut max_err = 0.0f64;
    for k in 1..=n_splits {
        let frac = k as f64 / (n_splits + 1) as f64;
        let p_split = p_low + frac * (p_high - p_low);
        // Crossing times from the exponential relaxation toward each
        // stroke's equilibrium.
        let t_hot = ((sol.p_start - ph) / (p_split - ph)).ln() / gh;
        let t_cold = ((sol.p_switch - pc) / (p_split - pc)).ln() / gc;
        if !(0.0 < t_hot && t_hot < tau_h && 0.0 < t_cold && t_cold < tau_c) {
            return Err(Error::SplitUndefined(format!(
                "level {p_split} is not crossed inside both strokes"
            )));
        }
        // First piece: remainder of the hot stroke plus head of the cold
        // one; second piece: the complements.
        let first = [
            (eps_h, BathLabel::Hot, tau_h - t_hot),
            (eps_c, BathLabel::Cold, t_cold),
        ];
        let second = [
            (eps_c, BathLabel::Cold, tau_c - t_cold),
            (eps_h, BathLabel::Hot, t_hot),
        ];
        let (_, jh1, jc1) = piecewise_constant_cycle(&first, baths)?;
        let (_, jh2, jc2) = piecewise_constant_cycle(&second, baths)?;
        let p1 = mode_power(mode, jh1, jc1);
        let p2 = mode_power(mode, jh2, jc2);
        let t1 = tau_h - t_hot + t_cold;
        let t2 = period - t1;
        let weighted = (t1 * p1 + t2 * p2) / period;
        let err = (power - weighted).abs() / heat_scale;
        max_err = max_err.max(err);
        splits.push(SplitCase {
            p_split,
            t_hot,
            t_cold,
            power_first: p1,
            power_second: p2,
            weighted_mean: weighted,
            identity_error: err,
        });
    }

    Ok(SubcycleReport {
        mode,
        power,
        p_low,
        p_high,
        splits,
        max_identity_error: max_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::optimal_time_split;
    use crate::thermo::RateModel;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn const_baths(beta_h: f64, k_h: f64, beta_c: f64, k_c: f64) -> BathPair {
        BathPair::from_parts(
            beta_h,
            RateModel::Constant { k: k_h },
            beta_c,
            RateModel::Constant { k: k_c },
        )
        .unwrap()
    }

    #[test]
    fn duration_scan_peaks_at_the_optimal_split() {
        let baths = const_baths(1.0, 1.0, 2.0, 4.0);
        let (eh, ec) = (2.0, 1.5);
        let period = 1e-3;
        let theta_star = optimal_time_split(1.0, 4.0).unwrap();
        let n = 499;
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 1..n {
            let theta = i as f64 / n as f64;
            let strokes = [
                (eh, BathLabel::Hot, theta * period),
                (ec, BathLabel::Cold, (1.0 - theta) * period),
            ];
            let (_, jh, jc) = piecewise_constant_cycle(&strokes, &baths).unwrap();
            let p = mode_power(OperatingMode::Engine, jh, jc);
            if p > best.0 {
                best = (p, theta);
            }
        }
        assert_abs_diff_eq!(best.1, theta_star, epsilon = 1.0 / n as f64);
    }

    #[test]
    fn search_is_deterministic_and_bounded() {
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        let config = SearchConfig {
            n_segments: 4,
            period: 1e-3,
            samples: 3000,
            seed: 42,
            gap_range: (0.5, 4.0),
        };
        let a = random_protocol_search(OperatingMode::Engine, &baths, &config).unwrap();
        let b = random_protocol_search(OperatingMode::Engine, &baths, &config).unwrap();
        assert_eq!(a.best_power.to_bits(), b.best_power.to_bits());
        assert_eq!(a.best_index, b.best_index);
        assert_eq!(a.violations, 0);
        assert!(a.best_power <= a.bound * (1.0 + 1e-6));
        assert!(a.bound > 0.0);
        // 3000 four-segment draws land well inside the ceiling but not on it.
        let ratio = a.ratio.unwrap();
        assert!(ratio > 0.5 && ratio <= 1.0, "ratio {ratio}");
    }

    #[test]
    fn different_seeds_give_different_bests() {
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        let mut config = SearchConfig {
            n_segments: 3,
            period: 1e-3,
            samples: 200,
            seed: 1,
            gap_range: (0.5, 4.0),
        };
        let a = random_protocol_search(OperatingMode::Engine, &baths, &config).unwrap();
        config.seed = 2;
        let b = random_protocol_search(OperatingMode::Engine, &baths, &config).unwrap();
        assert_ne!(a.best_power.to_bits(), b.best_power.to_bits());
    }

    #[test]
    fn equal_temperature_engine_search_never_wins() {
        let baths = const_baths(1.0, 1.0, 1.0, 1.0);
        let config = SearchConfig {
            n_segments: 4,
            period: 1e-3,
            samples: 5000,
            seed: 7,
            gap_range: (0.2, 3.0),
        };
        let report = random_protocol_search(OperatingMode::Engine, &baths, &config).unwrap();
        assert!(report.best_power <= 0.0, "best {}", report.best_power);
        assert_eq!(report.bound, 0.0);
        assert!(report.ratio.is_none());
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn accelerator_search_requires_closed_range() {
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        let mut config = SearchConfig {
            n_segments: 4,
            period: 1e-3,
            samples: 100,
            seed: 3,
            gap_range: (0.5, 4.0), // 2 * 0.5 < 4: not closed
        };
        assert!(matches!(
            random_protocol_search(OperatingMode::Accelerator, &baths, &config),
            Err(Error::Infeasible(_))
        ));
        config.gap_range = (1.1, 2.2); // 2 * 1.1 >= 2.2: closed
        let report =
            random_protocol_search(OperatingMode::Accelerator, &baths, &config).unwrap();
        assert_eq!(report.violations, 0);
    }

    #[test]
    fn slow_search_is_rejected() {
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        let config = SearchConfig {
            n_segments: 4,
            period: 1.0,
            samples: 10,
            seed: 3,
            gap_range: (0.5, 4.0),
        };
        assert!(matches!(
            random_protocol_search(OperatingMode::Engine, &baths, &config),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn symmetric_cycle_splits_into_equal_halves() {
        // Equal rates and equal stroke lengths make the two sub-cycles at
        // the middle level mirror images.
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        let report =
            subcycle_split_check(2.0, 1.5, 5e-4, 5e-4, &baths, OperatingMode::Engine, 1)
                .unwrap();
        let s = &report.splits[0];
        assert_relative_eq!(s.power_first, s.power_second, max_relative = 1e-9);
        assert_relative_eq!(s.power_first, report.power, max_relative = 1e-9);
    }

    #[test]
    fn weighted_mean_identity_holds_across_levels() {
        let baths = const_baths(1.0, 1.0, 2.0, 4.0);
        let report =
            subcycle_split_check(2.0, 1.5, 7e-4, 3e-4, &baths, OperatingMode::Engine, 9)
                .unwrap();
        assert!(report.max_identity_error < 1e-10);
        // The composite sits strictly between the sub-cycle powers, so the
        // best standalone piece is at least as good as the whole.
        for s in &report.splits {
            let lo = s.power_first.min(s.power_second);
            let hi = s.power_first.max(s.power_second);
            assert!(lo <= report.power + 1e-15 && report.power <= hi + 1e-15);
        }
    }

    #[test]
    fn degenerate_cycle_has_no_split() {
        let baths = const_baths(1.0, 1.0, 2.0, 1.0);
        // Gaps on the degenerate diagonal: both strokes share one
        // equilibrium, so the population never moves.
        assert!(matches!(
            subcycle_split_check(2.0, 1.0, 5e-4, 5e-4, &baths, OperatingMode::Engine, 3),
            Err(Error::SplitUndefined(_))
        ));
    }
}
