//! Population dynamics of the driven two-level system.
//!
//! The excited-state population obeys a linear rate equation whose
//! coefficients follow the instantaneous gap and bath couplings.  Constant
//! segments are propagated with the exact exponential solution; ramps fall
//! back to an adaptive Runge-Kutta integrator.  Periodic steady states come
//! from the affine one-period map rather than from long transient runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ode::rk45;
use crate::numerics::quad;
use crate::thermo::{Bath, BathLabel, BathPair, OperatingMode, RateModel};

const RAMP_RTOL: f64 = 1e-10;
const RAMP_ATOL: f64 = 1e-14;

/// Energy gap profile over one segment, as a function of local time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GapSpec {
    /// Fixed gap for the whole segment.
    Const(f64),
    /// Linear sweep from `from` at the segment start to `to` at its end.
    Ramp { from: f64, to: f64 },
}

impl GapSpec {
    fn start(&self) -> f64 {
        match *self {
            GapSpec::Const(e) => e,
            GapSpec::Ramp { from, .. } => from,
        }
    }

    fn end(&self) -> f64 {
        match *self {
            GapSpec::Const(e) => e,
            GapSpec::Ramp { to, .. } => to,
        }
    }

    fn at(&self, frac: f64) -> f64 {
        match *self {
            GapSpec::Const(e) => e,
            GapSpec::Ramp { from, to } => from + (to - from) * frac,
        }
    }

    fn range(&self) -> (f64, f64) {
        let (a, b) = (self.start(), self.end());
        (a.min(b), a.max(b))
    }
}

/// Hot-bath coupling weight over one segment; the cold weight is always the
/// complement so exactly one unit of coupling is distributed at all times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSpec {
    /// Only the hot bath is attached.
    Hot,
    /// Only the cold bath is attached.
    Cold,
    /// Hot weight sweeps linearly from `from` to `to`, both in [0, 1].
    Ramp { from: f64, to: f64 },
}

impl CouplingSpec {
    fn hot_weight(&self, frac: f64) -> f64 {
        match *self {
            CouplingSpec::Hot => 1.0,
            CouplingSpec::Cold => 0.0,
            CouplingSpec::Ramp { from, to } => from + (to - from) * frac,
        }
    }

    fn touches_hot(&self) -> bool {
        match *self {
            CouplingSpec::Hot => true,
            CouplingSpec::Cold => false,
            CouplingSpec::Ramp { from, to } => from > 0.0 || to > 0.0,
        }
    }

    fn touches_cold(&self) -> bool {
        match *self {
            CouplingSpec::Hot => false,
            CouplingSpec::Cold => true,
            CouplingSpec::Ramp { from, to } => from < 1.0 || to < 1.0,
        }
    }
}

/// One stage of a periodic driving protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub gap: GapSpec,
    pub coupling: CouplingSpec,
    pub duration: f64,
}

impl Segment {
    /// True when the rate-equation coefficients are constant over the
    /// segment, which unlocks the exact exponential propagator.
    fn is_uniform(&self) -> bool {
        matches!(self.gap, GapSpec::Const(_))
            && matches!(self.coupling, CouplingSpec::Hot | CouplingSpec::Cold)
    }

    fn frac(&self, t_local: f64) -> f64 {
        (t_local / self.duration).clamp(0.0, 1.0)
    }
}

/// Piecewise protocol for gap and bath coupling over one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Protocol {
    segments: Vec<Segment>,
}

impl Protocol {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("protocol needs at least one segment".into()));
        }
        for (i, seg) in segments.iter().enumerate() {
            if !seg.duration.is_finite() || seg.duration <= 0.0 {
                return Err(Error::Domain(format!(
                    "segment {i}: duration must be finite and positive, got {}",
                    seg.duration
                )));
            }
            let ok_gap = match seg.gap {
                GapSpec::Const(e) => e.is_finite(),
                GapSpec::Ramp { from, to } => from.is_finite() && to.is_finite(),
            };
            if !ok_gap {
                return Err(Error::Domain(format!("segment {i}: gap must be finite")));
            }
            if let CouplingSpec::Ramp { from, to } = seg.coupling {
                if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) {
                    return Err(Error::Domain(format!(
                        "segment {i}: coupling weights must lie in [0, 1]"
                    )));
                }
            }
        }
        Ok(Protocol { segments })
    }

    /// Two-stroke protocol: hold `eps_h` on the hot bath for `tau_h`, then
    /// `eps_c` on the cold bath for `tau_c`.
    pub fn square_wave(eps_h: f64, eps_c: f64, tau_h: f64, tau_c: f64) -> Result<Self> {
        Protocol::new(vec![
            Segment {
                gap: GapSpec::Const(eps_h),
                coupling: CouplingSpec::Hot,
                duration: tau_h,
            },
            Segment {
                gap: GapSpec::Const(eps_c),
                coupling: CouplingSpec::Cold,
                duration: tau_c,
            },
        ])
    }

    /// Square wave with linear switching ramps of duration `tau` inserted
    /// between the strokes.  `tau == 0` reduces to the plain square wave.
    pub fn trapezoid(eps_h: f64, eps_c: f64, tau_h: f64, tau_c: f64, tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Domain(format!(
                "switch duration must be finite and nonnegative, got {tau}"
            )));
        }
        let mut segs = Vec::with_capacity(4);
        segs.push(Segment {
            gap: GapSpec::Const(eps_h),
            coupling: CouplingSpec::Hot,
            duration: tau_h,
        });
        if tau > 0.0 {
            segs.push(Segment {
                gap: GapSpec::Ramp {
                    from: eps_h,
                    to: eps_c,
                },
                coupling: CouplingSpec::Ramp { from: 1.0, to: 0.0 },
                duration: tau,
            });
        }
        segs.push(Segment {
            gap: GapSpec::Const(eps_c),
            coupling: CouplingSpec::Cold,
            duration: tau_c,
        });
        if tau > 0.0 {
            segs.push(Segment {
                gap: GapSpec::Ramp {
                    from: eps_c,
                    to: eps_h,
                },
                coupling: CouplingSpec::Ramp { from: 0.0, to: 1.0 },
                duration: tau,
            });
        }
        Protocol::new(segs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn period(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn min_segment_duration(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min)
    }

    /// Gap and hot-bath weight at a global time in [0, period].  The profile
    /// is right-continuous at internal switch points; the period end takes
    /// the final segment's closing values.
    pub fn sample(&self, t: f64) -> (f64, f64) {
        let mut acc = 0.0;
        for seg in &self.segments {
            if t < acc + seg.duration {
                let frac = seg.frac(t - acc);
                return (seg.gap.at(frac), seg.coupling.hot_weight(frac));
            }
            acc += seg.duration;
        }
        let last = self.segments.last().expect("protocol is nonempty");
        (last.gap.end(), last.coupling.hot_weight(1.0))
    }

    /// A divergent-rate model swept through its singular point makes the
    /// one-period map degenerate, so reject such ramps up front.
    fn check_ramp_singularities(&self, baths: &BathPair) -> Result<()> {
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.is_uniform() {
                continue;
            }
            let (lo, hi) = seg.gap.range();
            for (bath, touched) in [
                (&baths.hot, seg.coupling.touches_hot()),
                (&baths.cold, seg.coupling.touches_cold()),
            ] {
                if !touched {
                    continue;
                }
                if let RateModel::BosePower { n: 0, eps_floor, .. } = bath.rate_model {
                    if lo < eps_floor && hi > -eps_floor {
                        return Err(Error::Singularity(format!(
                            "segment {i}: ramp sweeps the {} bath's diverging \
                             zero-gap rate",
                            bath.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Decay coefficient and pump term of `dp/dt = -a(t) p + b(t)`.
pub(crate) fn rate_coeffs(seg: &Segment, t_local: f64, baths: &BathPair) -> Result<(f64, f64)> {
    let frac = seg.frac(t_local);
    let eps = seg.gap.at(frac);
    let lh = seg.coupling.hot_weight(frac);
    let mut a = 0.0;
    let mut b = 0.0;
    if lh > 0.0 {
        let g = baths.hot.rate(eps)?;
        a += lh * g;
        b += lh * g * baths.hot.p_eq(eps)?;
    }
    if lh < 1.0 {
        let g = baths.cold.rate(eps)?;
        a += (1.0 - lh) * g;
        b += (1.0 - lh) * g * baths.cold.p_eq(eps)?;
    }
    Ok((a, b))
}

/// Heat currents (hot, cold) out of each bath for population `p` at local
/// time `t_local` of `seg`.
pub(crate) fn heat_fluxes(seg: &Segment, t_local: f64, p: f64, baths: &BathPair) -> Result<(f64, f64)> {
    let frac = seg.frac(t_local);
    let eps = seg.gap.at(frac);
    let lh = seg.coupling.hot_weight(frac);
    let mut jh = 0.0;
    let mut jc = 0.0;
    if lh > 0.0 {
        let g = baths.hot.rate(eps)?;
        jh = eps * lh * g * (baths.hot.p_eq(eps)? - p);
    }
    if lh < 1.0 {
        let g = baths.cold.rate(eps)?;
        jc = eps * (1.0 - lh) * g * (baths.cold.p_eq(eps)? - p);
    }
    Ok((jh, jc))
}

/// Rate of change of the excited-state population in contact with one bath.
///
/// `dp/dt = rate(eps) * (p_eq(eps) - p)`: relaxation toward the bath's
/// instantaneous equilibrium population.
pub fn population_derivative(p: f64, eps: f64, active: &Bath) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("population must be finite, got {p}")));
    }
    Ok(active.rate(eps)? * (active.p_eq(eps)? - p))
}

/// Heat current flowing out of the active bath into the system.
///
/// Each absorbed quantum carries energy `eps`, so the current is
/// `eps * dp/dt`.  Positive means the bath loses energy to the system.
pub fn instantaneous_heat_flux(p: f64, eps: f64, active: &Bath) -> Result<f64> {
    Ok(eps * population_derivative(p, eps, active)?)
}

/// One sampled instant of a population trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub p: f64,
    pub eps: f64,
    pub lambda_hot: f64,
    pub j_hot: f64,
    pub j_cold: f64,
}

/// Sampled solution of the rate equation over a stretch of driving.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Nominal spacing between consecutive samples.
    pub step: f64,
}

impl Trajectory {
    pub fn final_population(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.p)
    }
}

/// Advance the population across `seg` from local time `t0` to `t1`.
fn advance_within(seg: &Segment, t0: f64, t1: f64, p: f64, baths: &BathPair) -> Result<f64> {
    debug_assert!(t0 <= t1);
    if t1 - t0 <= 0.0 {
        return Ok(p);
    }
    if seg.is_uniform() {
        let (a, b) = rate_coeffs(seg, t0, baths)?;
        // a > 0 whenever the rate model is positive; p_star is the fixed
        // point the population relaxes toward.
        let p_star = b / a;
        Ok(p_star + (p - p_star) * (-(a * (t1 - t0))).exp())
    } else {
        let y = rk45(
            &|t, y: &[f64; 1]| {
                let (a, b) = match rate_coeffs(seg, t, baths) {
                    Ok(v) => v,
                    Err(_) => return [f64::NAN],
                };
                [b - a * y[0]]
            },
            t0,
            t1,
            [p],
            RAMP_RTOL,
            RAMP_ATOL,
        )?;
        Ok(y[0])
    }
}

/// Advance across `seg` while accumulating the heat absorbed from each bath.
/// Returns (population, heat_hot, heat_cold) at local time `t1`.
fn advance_with_heat(
    seg: &Segment,
    t0: f64,
    t1: f64,
    p: f64,
    baths: &BathPair,
) -> Result<(f64, f64, f64)> {
    debug_assert!(t0 <= t1);
    if t1 - t0 <= 0.0 {
        return Ok((p, 0.0, 0.0));
    }
    if seg.is_uniform() {
        let p_end = advance_within(seg, t0, t1, p, baths)?;
        // On a constant stroke every transferred quantum has the same energy,
        // so the integrated heat is exactly eps * (change in population).
        let eps = seg.gap.start();
        let q = eps * (p_end - p);
        match seg.coupling {
            CouplingSpec::Hot => Ok((p_end, q, 0.0)),
            CouplingSpec::Cold => Ok((p_end, 0.0, q)),
            CouplingSpec::Ramp { .. } => unreachable!("uniform segment has pure coupling"),
        }
    } else {
        let y = rk45(
            &|t, y: &[f64; 3]| {
                let (jh, jc) = match heat_fluxes(seg, t, y[0], baths) {
                    Ok(v) => v,
                    Err(_) => return [f64::NAN; 3],
                };
                let frac = seg.frac(t);
                let eps = seg.gap.at(frac);
                let dp = if eps == 0.0 {
                    // Flux/eps is indeterminate at a closing gap; recompute
                    // the derivative directly.
                    match rate_coeffs(seg, t, baths) {
                        Ok((a, b)) => b - a * y[0],
                        Err(_) => return [f64::NAN; 3],
                    }
                } else {
                    (jh + jc) / eps
                };
                [dp, jh, jc]
            },
            t0,
            t1,
            [p, 0.0, 0.0],
            RAMP_RTOL,
            RAMP_ATOL,
        )?;
        Ok((y[0], y[1], y[2]))
    }
}

/// Integrate the rate equation from `p0` over `n_periods` repetitions of the
/// protocol, sampling every `step`.
///
/// `step` must not exceed one tenth of the shortest segment so that every
/// stage of the drive is visible in the output.  Samples fall on the exact
/// grid `k * step`; the integrator advances with closed-form exponentials on
/// constant segments and an adaptive Runge-Kutta scheme on ramps, so `step`
/// controls reporting resolution only, not accuracy.
pub fn integrate_protocol(
    protocol: &Protocol,
    baths: &BathPair,
    p0: f64,
    step: f64,
    n_periods: usize,
) -> Result<Trajectory> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::Domain(format!(
            "initial population must lie in [0, 1], got {p0}"
        )));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::Domain(format!(
            "sample step must be finite and positive, got {step}"
        )));
    }
    if n_periods == 0 {
        return Err(Error::Domain("need at least one period".into()));
    }
    let min_dur = protocol.min_segment_duration();
    if step > min_dur / 10.0 {
        return Err(Error::Domain(format!(
            "sample step {step} exceeds one tenth of the shortest segment ({min_dur})"
        )));
    }
    protocol.check_ramp_singularities(baths)?;

    let period = protocol.period();
    let total = period * n_periods as f64;
    let n_samples = (total / step).floor() as usize;

    let mut samples = Vec::with_capacity(n_samples + 2);
    let mut p = p0;
    // Global cursor: segment index within the current period plus local time.
    let mut seg_idx = 0usize;
    let mut seg_local = 0.0f64;
    let mut t_global = 0.0f64;

    let record =
        |samples: &mut Vec<TrajectorySample>, t: f64, p: f64, seg: &Segment, t_local: f64| {
            let frac = seg.frac(t_local);
            let (jh, jc) = heat_fluxes(seg, t_local, p, baths)?;
            samples.push(TrajectorySample {
                t,
                p,
                eps: seg.gap.at(frac),
                lambda_hot: seg.coupling.hot_weight(frac),
                j_hot: jh,
                j_cold: jc,
            });
            Ok::<(), Error>(())
        };

    let segs = protocol.segments();
    record(&mut samples, 0.0, p, &segs[0], 0.0)?;

    let mut k = 1usize;
    loop {
        let t_target = if k <= n_samples {
            k as f64 * step
        } else {
            total
        };
        let t_target = t_target.min(total);
        // Walk segment boundaries until the target lies inside the current
        // segment.
        loop {
            let seg = &segs[seg_idx];
            let remaining = seg.duration - seg_local;
            if t_global + remaining >= t_target - 1e-15 * total {
                break;
            }
            p = advance_within(seg, seg_local, seg.duration, p, baths)?;
            t_global += remaining;
            seg_local = 0.0;
            seg_idx = (seg_idx + 1) % segs.len();
        }
        let seg = &segs[seg_idx];
        let t_local_target = (seg_local + (t_target - t_global)).min(seg.duration);
        p = advance_within(seg, seg_local, t_local_target, p, baths)?;
        if !(-1e-9..=1.0 + 1e-9).contains(&p) {
            return Err(Error::Integration(format!(
                "population left [0, 1] at t = {t_target}: p = {p}"
            )));
        }
        p = p.clamp(0.0, 1.0);
        seg_local = t_local_target;
        t_global = t_target;
        record(&mut samples, t_target, p, seg, seg_local)?;
        if k > n_samples {
            break;
        }
        if (t_target - total).abs() <= 1e-15 * total {
            break;
        }
        k += 1;
    }

    Ok(Trajectory { samples, step })
}

/// Periodic steady state of a driving protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCycle {
    pub protocol: Protocol,
    /// Population at the period start of the closed cycle.
    pub p_start: f64,
    /// Contraction factor of the one-period map; deviations from the cycle
    /// shrink by this factor each period.
    pub contraction: f64,
    /// Period-averaged heat current out of the hot bath.
    pub avg_j_hot: f64,
    /// Period-averaged heat current out of the cold bath.
    pub avg_j_cold: f64,
    /// Populations at each segment start of the closed cycle.
    pub seg_start_p: Vec<f64>,
    /// One period of the closed cycle, sampled on a uniform grid.
    pub orbit: Trajectory,
}

impl LimitCycle {
    pub fn period(&self) -> f64 {
        self.protocol.period()
    }
}

/// Log of the one-period contraction factor: `-∫ a(t) dt` over the period.
fn log_contraction(protocol: &Protocol, baths: &BathPair) -> Result<f64> {
    let mut log_d = 0.0;
    for seg in protocol.segments() {
        if seg.is_uniform() {
            let (a, _) = rate_coeffs(seg, 0.0, baths)?;
            log_d -= a * seg.duration;
        } else {
            let integral = quad::integrate(
                &|t| match rate_coeffs(seg, t, baths) {
                    Ok((a, _)) => a,
                    Err(_) => f64::NAN,
                },
                0.0,
                seg.duration,
                1e-12,
                1e-300,
            )?;
            if !integral.is_finite() {
                return Err(Error::Integration(
                    "rate coefficients not integrable over ramp".into(),
                ));
            }
            log_d -= integral;
        }
    }
    Ok(log_d)
}

/// Number of orbit samples per period used by [`limit_cycle`].
const ORBIT_SAMPLES: usize = 512;

/// Periodic steady state of the protocol, found from the affine one-period
/// map `p -> c + d p`: the unique fixed point is `c / (1 - d)`.
///
/// Requires net dissipation over the period (`d < 1`); a protocol with no
/// bath contact at all would map every population to itself and has no
/// unique cycle.
pub fn limit_cycle(protocol: &Protocol, baths: &BathPair) -> Result<LimitCycle> {
    protocol.check_ramp_singularities(baths)?;
    let log_d = log_contraction(protocol, baths)?;
    if log_d >= -1e-14 {
        return Err(Error::NoUniqueCycle(format!(
            "one-period map is not contracting (log factor {log_d:.3e})"
        )));
    }
    let d = log_d.exp();

    // Affine offset: image of p = 0 under one period.
    let mut c = 0.0;
    for seg in protocol.segments() {
        c = advance_within(seg, 0.0, seg.duration, c, baths)?;
    }
    let p_star = c / (-log_d.exp_m1());
    if !(-1e-9..=1.0 + 1e-9).contains(&p_star) {
        return Err(Error::Integration(format!(
            "cycle fixed point {p_star} outside [0, 1]"
        )));
    }
    let p_star = p_star.clamp(0.0, 1.0);

    // Closed pass: segment-start populations and per-period heat.
    let mut seg_start_p = Vec::with_capacity(protocol.segments().len());
    let mut p = p_star;
    let mut q_hot = 0.0;
    let mut q_cold = 0.0;
    for seg in protocol.segments() {
        seg_start_p.push(p);
        let (p_end, qh, qc) = advance_with_heat(seg, 0.0, seg.duration, p, baths)?;
        p = p_end;
        q_hot += qh;
        q_cold += qc;
    }
    let period = protocol.period();

    // Uniform orbit sampling; sub-stepping handles segments shorter than the
    // grid spacing, so no resolution precondition applies here.
    let step = period / ORBIT_SAMPLES as f64;
    let mut samples = Vec::with_capacity(ORBIT_SAMPLES + 1);
    let segs = protocol.segments();
    let mut seg_idx = 0usize;
    let mut seg_local = 0.0f64;
    let mut t_global = 0.0f64;
    let mut p = p_star;
    for k in 0..=ORBIT_SAMPLES {
        let t_target = if k == ORBIT_SAMPLES {
            period
        } else {
            k as f64 * step
        };
        loop {
            let seg = &segs[seg_idx];
            let remaining = seg.duration - seg_local;
            if t_global + remaining >= t_target - 1e-15 * period || seg_idx + 1 == segs.len() {
                break;
            }
            p = advance_within(seg, seg_local, seg.duration, p, baths)?;
            t_global += remaining;
            seg_local = 0.0;
            seg_idx += 1;
        }
        let seg = &segs[seg_idx];
        let t_local_target = (seg_local + (t_target - t_global)).min(seg.duration);
        p = advance_within(seg, seg_local, t_local_target, p, baths)?;
        seg_local = t_local_target;
        t_global = t_target;
        let frac = seg.frac(seg_local);
        let (jh, jc) = heat_fluxes(seg, seg_local, p, baths)?;
        samples.push(TrajectorySample {
            t: t_target,
            p,
            eps: seg.gap.at(frac),
            lambda_hot: seg.coupling.hot_weight(frac),
            j_hot: jh,
            j_cold: jc,
        });
    }

    Ok(LimitCycle {
        protocol: protocol.clone(),
        p_start: p_star,
        contraction: d,
        avg_j_hot: q_hot / period,
        avg_j_cold: q_cold / period,
        seg_start_p,
        orbit: Trajectory { samples, step },
    })
}

/// Periodic-state currents of a piecewise-constant protocol given as
/// `(gap, bath, duration)` strokes.  Returns the contraction factor and the
/// period-averaged heat currents `(d, avg_j_hot, avg_j_cold)`.
///
/// This is the allocation-free path used by bulk protocol searches; it
/// agrees with [`limit_cycle`] on the same protocol to rounding error.
pub fn piecewise_constant_cycle(
    strokes: &[(f64, BathLabel, f64)],
    baths: &BathPair,
) -> Result<(f64, f64, f64)> {
    if strokes.is_empty() {
        return Err(Error::Domain("protocol needs at least one stroke".into()));
    }
    let mut log_d = 0.0;
    for &(eps, label, dur) in strokes {
        if !dur.is_finite() || dur <= 0.0 {
            return Err(Error::Domain(format!(
                "stroke duration must be finite and positive, got {dur}"
            )));
        }
        log_d -= baths.get(label).rate(eps)? * dur;
    }
    if log_d >= -1e-14 {
        return Err(Error::NoUniqueCycle(format!(
            "one-period map is not contracting (log factor {log_d:.3e})"
        )));
    }
    let d = log_d.exp();

    let mut c = 0.0;
    for &(eps, label, dur) in strokes {
        let bath = baths.get(label);
        let g = bath.rate(eps)?;
        let peq = bath.p_eq(eps)?;
        c = peq + (c - peq) * (-(g * dur)).exp();
    }
    let p_star = (c / (-log_d.exp_m1())).clamp(0.0, 1.0);

    let mut p = p_star;
    let mut q_hot = 0.0;
    let mut q_cold = 0.0;
    let mut period = 0.0;
    for &(eps, label, dur) in strokes {
        let bath = baths.get(label);
        let g = bath.rate(eps)?;
        let peq = bath.p_eq(eps)?;
        let p_end = peq + (p - peq) * (-(g * dur)).exp();
        let q = eps * (p_end - p);
        match label {
            BathLabel::Hot => q_hot += q,
            BathLabel::Cold => q_cold += q,
        }
        p = p_end;
        period += dur;
    }
    Ok((d, q_hot / period, q_cold / period))
}

/// Closed-form periodic state of the two-stroke square-wave protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquareWaveSolution {
    /// Population at the start of the hot stroke.
    pub p_start: f64,
    /// Population at the hot-to-cold switch.
    pub p_switch: f64,
    /// Contraction factor of the one-period map.
    pub contraction: f64,
    pub avg_j_hot: f64,
    pub avg_j_cold: f64,
    /// Heat absorbed from the hot bath per period.
    pub q_hot: f64,
    /// Heat absorbed from the cold bath per period.
    pub q_cold: f64,
}

/// Exact periodic state of the square-wave protocol: gap `eps_h` on the hot
/// bath for `tau_h`, then `eps_c` on the cold bath for `tau_c`.
///
/// With `a = rate_h * tau_h`, `b = rate_c * tau_c` and the equilibrium gap
/// populations `p_h`, `p_c`, the per-period transferred population is
/// `S * (p_h - p_c)` with `S = (1 - e^-a)(1 - e^-b) / (1 - e^-(a+b))`, all
/// evaluated through `expm1` so short cycles keep full precision.
pub fn square_wave_closed_form(
    eps_h: f64,
    eps_c: f64,
    tau_h: f64,
    tau_c: f64,
    baths: &BathPair,
) -> Result<SquareWaveSolution> {
    for (name, tau) in [("hot", tau_h), ("cold", tau_c)] {
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::Domain(format!(
                "{name} stroke duration must be finite and positive, got {tau}"
            )));
        }
    }
    let gh = baths.hot.rate(eps_h)?;
    let gc = baths.cold.rate(eps_c)?;
    let ph = baths.hot.p_eq(eps_h)?;
    let pc = baths.cold.p_eq(eps_c)?;
    let a = gh * tau_h;
    let b = gc * tau_c;
    if a + b <= 1e-14 {
        return Err(Error::NoUniqueCycle(format!(
            "one-period map is not contracting (log factor {:.3e})",
            -(a + b)
        )));
    }
    let ea = -(-a).exp_m1(); // 1 - e^-a
    let eb = -(-b).exp_m1();
    let eab = -(-(a + b)).exp_m1();
    let s = ea * eb / eab;
    // Fixed point at the hot-stroke start and its image at the switch.
    let p_start = (pc * eb + ph * (-b).exp() * ea) / eab;
    let p_switch = p_start + (ph - p_start) * ea;
    let dt = tau_h + tau_c;
    let transfer = s * (ph - pc);
    let q_hot = eps_h * transfer;
    let q_cold = -eps_c * transfer;
    Ok(SquareWaveSolution {
        p_start,
        p_switch,
        contraction: (-(a + b)).exp(),
        avg_j_hot: q_hot / dt,
        avg_j_cold: q_cold / dt,
        q_hot,
        q_cold,
    })
}

/// Signed figure of merit of a pair of average heat currents under a given
/// operating mode: the net output power for an engine, the cold-bath intake
/// rate for a refrigerator, the heat delivered into the cold bath for an
/// accelerator, and the total heat dumped into both baths for a heater.
/// Positive values mean the machine performs its function.
pub fn mode_power(mode: OperatingMode, avg_j_hot: f64, avg_j_cold: f64) -> f64 {
    match mode {
        OperatingMode::Engine => avg_j_hot + avg_j_cold,
        OperatingMode::Refrigerator => avg_j_cold,
        OperatingMode::Accelerator => -avg_j_cold,
        OperatingMode::Heater => -(avg_j_hot + avg_j_cold),
    }
}

/// Figure of merit of a limit cycle under `mode`; see [`mode_power`].
pub fn average_power(cycle: &LimitCycle, mode: OperatingMode) -> f64 {
    mode_power(mode, cycle.avg_j_hot, cycle.avg_j_cold)
}

/// Work done on the system per period by the drive: the cycle integral
/// `∮ p dε`, including the population-weighted gap jumps at instantaneous
/// switches (and the wrap-around jump from period end to start).
///
/// Energy balance over the closed cycle makes this equal to minus the total
/// heat intake per period.
pub fn gap_work_per_period(cycle: &LimitCycle, baths: &BathPair) -> Result<f64> {
    let segs = cycle.protocol.segments();
    let mut work = 0.0;
    let mut p = cycle.p_start;
    let mut end_eps = segs.last().expect("protocol is nonempty").gap.end();
    let mut prev_end_eps: Option<f64> = None;
    for seg in segs {
        if let Some(e_prev) = prev_end_eps {
            // Instantaneous gap jump between segments at frozen population.
            work += p * (seg.gap.start() - e_prev);
        }
        match seg.gap {
            GapSpec::Const(_) => {
                p = advance_within(seg, 0.0, seg.duration, p, baths)?;
            }
            GapSpec::Ramp { from, to } => {
                let slope = (to - from) / seg.duration;
                let y = rk45(
                    &|t, y: &[f64; 2]| {
                        let (a, b) = match rate_coeffs(seg, t, baths) {
                            Ok(v) => v,
                            Err(_) => return [f64::NAN; 2],
                        };
                        [b - a * y[0], slope * y[0]]
                    },
                    0.0,
                    seg.duration,
                    [p, 0.0],
                    RAMP_RTOL,
                    RAMP_ATOL,
                )?;
                p = y[0];
                work += y[1];
            }
        }
        prev_end_eps = Some(seg.gap.end());
        end_eps = seg.gap.end();
    }
    // Wrap-around jump back to the period start.
    work += p * (segs[0].gap.start() - end_eps);
    Ok(work)
}
