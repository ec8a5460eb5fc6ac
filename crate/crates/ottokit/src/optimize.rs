//! Power optimization of the fast two-stroke cycle over the two gap values.
//!
//! In the fast-driving regime the period-averaged currents depend only on
//! the two gaps and on how the period splits between the strokes.  The split
//! has a closed-form optimum, which reduces power maximization to a smooth
//! two-variable problem over the admissible gap box.  A coarse grid scan
//! locates candidate basins; simplex descent plus a Newton or golden-section
//! polish refines them to near machine precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::minimize::{golden_max, nelder_mead_max_2d, newton_polish_max_2d};
use crate::thermo::{mode_energy_quantum, rate_value, BathPair, ConstraintBox, OperatingMode, RateModel};

/// Grid resolution per axis of the coarse scan stage.
const GRID_N: usize = 200;
/// Relative distance from a box edge below which the optimum is treated as
/// pinned to that edge.
const EDGE_TOL_REL: f64 = 1e-6;

/// Effective exchange rate of a fast cycle alternating between two
/// relaxation channels with optimally divided time:
/// `gh * gc / (sqrt(gh) + sqrt(gc))^2`.
///
/// A dead channel (zero rate) blocks the exchange entirely.
pub fn effective_rate(rate_h: f64, rate_c: f64) -> Result<f64> {
    if !(rate_h.is_finite() && rate_c.is_finite()) || rate_h < 0.0 || rate_c < 0.0 {
        return Err(Error::Domain(format!(
            "rates must be finite and nonnegative, got ({rate_h}, {rate_c})"
        )));
    }
    if rate_h == 0.0 || rate_c == 0.0 {
        return Ok(0.0);
    }
    let s = rate_h.sqrt() + rate_c.sqrt();
    Ok(rate_h * rate_c / (s * s))
}

/// Fraction of the period spent on the hot stroke that maximizes the
/// exchanged heat per period: `sqrt(gc) / (sqrt(gh) + sqrt(gc))`.  The
/// slower channel gets the larger share.
pub fn optimal_time_split(rate_h: f64, rate_c: f64) -> Result<f64> {
    if !(rate_h.is_finite() && rate_c.is_finite()) || rate_h < 0.0 || rate_c < 0.0 {
        return Err(Error::Domain(format!(
            "rates must be finite and nonnegative, got ({rate_h}, {rate_c})"
        )));
    }
    if rate_h == 0.0 && rate_c == 0.0 {
        return Err(Error::DegenerateSplit);
    }
    Ok(rate_c.sqrt() / (rate_h.sqrt() + rate_c.sqrt()))
}

/// Period-averaged heat currents out of each bath in the fast-cycle limit at
/// the optimal time split: `J_H = eps_h * geff * (p_h - p_c)` and
/// `J_C = -eps_c * geff * (p_h - p_c)`, where `p_h`, `p_c` are the
/// equilibrium excitations of the two strokes.
pub fn ideal_average_currents(eps_h: f64, eps_c: f64, baths: &BathPair) -> Result<(f64, f64)> {
    let gh = baths.hot.rate(eps_h)?;
    let gc = baths.cold.rate(eps_c)?;
    let geff = effective_rate(gh, gc)?;
    let dp = baths.hot.p_eq(eps_h)? - baths.cold.p_eq(eps_c)?;
    Ok((eps_h * geff * dp, -eps_c * geff * dp))
}

/// Fast-cycle figure of merit of `mode` at gaps `(eps_h, eps_c)`: the mode's
/// energy quantum times the common current bracket `geff * (p_h - p_c)`.
pub fn ideal_mode_power(
    mode: OperatingMode,
    eps_h: f64,
    eps_c: f64,
    baths: &BathPair,
) -> Result<f64> {
    let gh = baths.hot.rate(eps_h)?;
    let gc = baths.cold.rate(eps_c)?;
    let geff = effective_rate(gh, gc)?;
    let dp = baths.hot.p_eq(eps_h)? - baths.cold.p_eq(eps_c)?;
    Ok(mode_energy_quantum(mode, eps_h, eps_c) * geff * dp)
}

/// Whether a gap pair can run as an accelerator, i.e. absorb heat from the
/// hot bath while dumping heat into the cold one.  The hot intake changes
/// sign on `beta_h eps_h = beta_c eps_c`, giving a wedge with two branches
/// (one per sign of `eps_h`).
pub fn accelerator_feasible(eps_h: f64, eps_c: f64, beta_h: f64, beta_c: f64) -> bool {
    (eps_h >= 0.0 && beta_c * eps_c >= beta_h * eps_h)
        || (eps_h <= 0.0 && beta_c * eps_c <= beta_h * eps_h)
}

/// Which edges of the gap box the optimum is pinned to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryFlags {
    pub eps_h_lower: bool,
    pub eps_h_upper: bool,
    pub eps_c_lower: bool,
    pub eps_c_upper: bool,
}

impl BoundaryFlags {
    pub fn any(&self) -> bool {
        self.eps_h_lower || self.eps_h_upper || self.eps_c_lower || self.eps_c_upper
    }
}

/// Outcome of a gap-space power maximization.
///
/// `eps_h`/`eps_c` are `None` (and `max_power` is zero) when the mode cannot
/// deliver positive power anywhere in the box.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    pub mode: OperatingMode,
    pub eps_h: Option<f64>,
    pub eps_c: Option<f64>,
    pub max_power: f64,
    /// Optimal hot-stroke time fraction at the optimal gaps.
    pub time_split: Option<f64>,
    pub boundary: BoundaryFlags,
    /// True when the accelerator heat-direction constraint is binding at the
    /// optimum (only ever set for accelerator runs with the constraint on).
    pub feasibility_active: bool,
}

/// Grid coordinates: log-spaced when the box is strictly positive (gap
/// optima often sit orders of magnitude below the box top), linear
/// otherwise.
fn grid_coords(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    if lo > 0.0 {
        let ratio = hi / lo;
        for i in 0..n {
            v.push(lo * ratio.powf(i as f64 / (n - 1) as f64));
        }
    } else {
        for i in 0..n {
            v.push(lo + (hi - lo) * i as f64 / (n - 1) as f64);
        }
    }
    v
}

/// Feasible interval for one gap when the other is held fixed, under the
/// accelerator wedge; `None` when the slice misses the wedge.  Used to keep
/// edge line searches inside the constraint.
fn feasible_slice(
    fix_h: Option<f64>,
    fix_c: Option<f64>,
    beta_h: f64,
    beta_c: f64,
    lo: f64,
    hi: f64,
) -> Option<(f64, f64)> {
    let (mut a, mut b) = (lo, hi);
    match (fix_h, fix_c) {
        (Some(eh), None) => {
            // eps_c ranges; wedge branch follows the sign of eps_h.
            let cut = beta_h * eh / beta_c;
            if eh >= 0.0 {
                a = a.max(cut);
            }
            if eh <= 0.0 {
                b = b.min(cut);
            }
        }
        (None, Some(ec)) => {
            // eps_h ranges; slice the union of both branches.
            let cut = beta_c * ec / beta_h;
            if ec >= 0.0 {
                a = a.max(0.0);
                b = b.min(cut);
            }
            if ec <= 0.0 {
                a = a.max(cut);
                b = b.min(0.0);
            }
        }
        _ => unreachable!("exactly one coordinate must be fixed"),
    }
    if a <= b {
        Some((a, b))
    } else {
        None
    }
}

/// Maximum fast-cycle power of `mode` over the gap box, with the optimal
/// gaps, time split, and edge diagnostics.
///
/// For the accelerator, points outside its feasibility wedge are excluded
/// whenever `gap_box.mode_a_feasibility` is set.  If no point in the box
/// yields positive power the machine cannot operate in that mode there and
/// the result carries zero power with absent gaps.
pub fn max_power(
    mode: OperatingMode,
    baths: &BathPair,
    gap_box: &ConstraintBox,
) -> Result<OptimizationResult> {
    gap_box.validate()?;
    let (lo, hi) = (gap_box.eps_min, gap_box.eps_max);
    let width = gap_box.width();
    let enforce_wedge = mode == OperatingMode::Accelerator && gap_box.mode_a_feasibility;
    let (beta_h, beta_c) = (baths.hot.beta, baths.cold.beta);

    let obj = |eh: f64, ec: f64| -> f64 {
        if !(gap_box.contains(eh) && gap_box.contains(ec)) {
            return f64::NEG_INFINITY;
        }
        if enforce_wedge && !accelerator_feasible(eh, ec, beta_h, beta_c) {
            return f64::NEG_INFINITY;
        }
        ideal_mode_power(mode, eh, ec, baths).unwrap_or(f64::NEG_INFINITY)
    };
    let obj2 = |x: &[f64; 2]| obj(x[0], x[1]);

    let null_result = || OptimizationResult {
        mode,
        eps_h: None,
        eps_c: None,
        max_power: 0.0,
        time_split: None,
        boundary: BoundaryFlags::default(),
        feasibility_active: false,
    };

    if width == 0.0 {
        let p = obj(lo, lo);
        return Ok(if p > 0.0 {
            OptimizationResult {
                mode,
                eps_h: Some(lo),
                eps_c: Some(lo),
                max_power: p,
                time_split: Some(optimal_time_split(
                    baths.hot.rate(lo)?,
                    baths.cold.rate(lo)?,
                )?),
                boundary: BoundaryFlags {
                    eps_h_lower: true,
                    eps_h_upper: true,
                    eps_c_lower: true,
                    eps_c_upper: true,
                },
                feasibility_active: false,
            }
        } else {
            null_result()
        });
    }

    // Stage 1: coarse scan.
    let coords = grid_coords(lo, hi, GRID_N);
    let spacing = |v: f64| -> f64 {
        if lo > 0.0 {
            v * ((hi / lo).powf(1.0 / (GRID_N - 1) as f64) - 1.0)
        } else {
            width / (GRID_N - 1) as f64
        }
    };
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &eh) in coords.iter().enumerate() {
        for (j, &ec) in coords.iter().enumerate() {
            let f = obj(eh, ec);
            if f.is_finite() {
                cells.push((i, j, f));
            }
        }
    }
    cells.sort_by(|a, b| b.2.partial_cmp(&a.2).expect("finite cells"));

    // Candidate starts with their simplex scales.  Up to five well-separated
    // positive grid cells guard against secondary basins.
    let mut starts: Vec<([f64; 2], [f64; 2])> = Vec::new();
    let mut grid_seeds: Vec<(usize, usize)> = Vec::new();
    for &(i, j, f) in &cells {
        if f <= 0.0 {
            break;
        }
        if grid_seeds
            .iter()
            .all(|&(si, sj)| si.abs_diff(i).max(sj.abs_diff(j)) >= 8)
        {
            grid_seeds.push((i, j));
            starts.push((
                [coords[i], coords[j]],
                [spacing(coords[i]), spacing(coords[j])],
            ));
            if grid_seeds.len() == 5 {
                break;
            }
        }
    }

    // The engine's positive-power region is the wedge between the bare
    // diagonal and the temperature-scaled one; near-degenerate temperatures
    // make it thinner than any fixed grid, so seed its midline explicitly.
    if mode == OperatingMode::Engine {
        let r = beta_c / beta_h;
        let mut band: Vec<(usize, [f64; 2], f64, f64)> = Vec::new();
        for (j, &s) in coords.iter().enumerate() {
            let a = s.min(r * s).max(lo);
            let b = s.max(r * s).min(hi);
            if a >= b {
                continue;
            }
            let mid = 0.5 * (a + b);
            let f = obj(mid, s);
            if f > 0.0 {
                band.push((j, [mid, s], 0.25 * (b - a), f));
            }
        }
        band.sort_by(|x, y| y.3.partial_cmp(&x.3).expect("finite band"));
        let mut picked: Vec<usize> = Vec::new();
        for &(j, x, sc, _) in &band {
            if picked.iter().all(|&pj| pj.abs_diff(j) >= 8) {
                picked.push(j);
                starts.push((x, [sc, sc]));
                if picked.len() == 3 {
                    break;
                }
            }
        }
    }

    if starts.is_empty() {
        return Ok(null_result());
    }

    // Stage 2: simplex refinement from each start.
    let mut best_x = starts[0].0;
    let mut best_f = f64::NEG_INFINITY;
    for &(x0, scale) in &starts {
        let (x, fx) = nelder_mead_max_2d(&obj2, x0, scale, width * 1e-12, 600);
        if fx > best_f {
            best_f = fx;
            best_x = x;
        }
    }

    // Stage 3: snap near-edge coordinates and polish.
    let edge_tol = EDGE_TOL_REL * width;
    let snap = |v: f64| -> Option<f64> {
        if (v - lo).abs() <= edge_tol {
            Some(lo)
        } else if (hi - v).abs() <= edge_tol {
            Some(hi)
        } else {
            None
        }
    };
    for _ in 0..2 {
        let sh = snap(best_x[0]);
        let sc = snap(best_x[1]);
        match (sh, sc) {
            (Some(eh), Some(ec)) => {
                let f = obj(eh, ec);
                if f >= best_f {
                    best_x = [eh, ec];
                    best_f = f;
                }
                break;
            }
            (Some(eh), None) => {
                let range = if enforce_wedge {
                    feasible_slice(Some(eh), None, beta_h, beta_c, lo, hi)
                } else {
                    Some((lo, hi))
                };
                if let Some((a, b)) = range {
                    let (ec, f) = golden_max(&|ec| obj(eh, ec), a, b, width * 1e-13);
                    if f >= best_f {
                        best_x = [eh, ec];
                        best_f = f;
                    }
                }
            }
            (None, Some(ec)) => {
                let range = if enforce_wedge {
                    feasible_slice(None, Some(ec), beta_h, beta_c, lo, hi)
                } else {
                    Some((lo, hi))
                };
                if let Some((a, b)) = range {
                    let (eh, f) = golden_max(&|eh| obj(eh, ec), a, b, width * 1e-13);
                    if f >= best_f {
                        best_x = [eh, ec];
                        best_f = f;
                    }
                }
            }
            (None, None) => {
                let (x, fx) = newton_polish_max_2d(
                    &obj2,
                    best_x,
                    1e-6,
                    ([lo, lo], [hi, hi]),
                    40,
                );
                if fx >= best_f {
                    best_x = x;
                    best_f = fx;
                }
                break;
            }
        }
        // A line search may have moved the free coordinate onto another
        // edge; loop once more to re-check.
        if snap(best_x[0]).is_some() == sh.is_some() && snap(best_x[1]).is_some() == sc.is_some()
        {
            break;
        }
    }

    if !best_f.is_finite() || best_f <= 0.0 {
        return Ok(null_result());
    }

    let (eh, ec) = (best_x[0], best_x[1]);
    let boundary = BoundaryFlags {
        eps_h_lower: (eh - lo).abs() <= edge_tol,
        eps_h_upper: (hi - eh).abs() <= edge_tol,
        eps_c_lower: (ec - lo).abs() <= edge_tol,
        eps_c_upper: (hi - ec).abs() <= edge_tol,
    };
    let feasibility_active = enforce_wedge
        && (beta_h * eh - beta_c * ec).abs() <= edge_tol * beta_h.max(beta_c);
    let theta = optimal_time_split(baths.hot.rate(eh)?, baths.cold.rate(ec)?)?;

    Ok(OptimizationResult {
        mode,
        eps_h: Some(eh),
        eps_c: Some(ec),
        max_power: best_f,
        time_split: Some(theta),
        boundary,
        feasibility_active,
    })
}

/// Optimal symmetric heater working between two copies of the same bath.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymmetricHeaterOptimum {
    /// Optimal half-gap: the cycle runs between `-eps` and `+eps`.
    pub eps: f64,
    pub max_power: f64,
    /// Hot-stroke time fraction; the symmetric cycle always splits evenly.
    pub time_split: f64,
    /// True when the optimum is pinned to the gap cap `delta`.
    pub boundary: bool,
}

/// Maximum heating power into two equal-temperature baths with a common
/// rate model, over antisymmetric gap pairs `(-eps, +eps)` with
/// `eps <= delta`.
///
/// Evenness of the rate makes the two strokes identical up to the gap sign,
/// so the power reduces to the single-variable form
/// `eps * rate(eps) * tanh(beta eps / 2) / 2`.
pub fn heater_max_power_symmetric(
    model: &RateModel,
    beta: f64,
    delta: f64,
) -> Result<SymmetricHeaterOptimum> {
    model.validate()?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Domain(format!(
            "gap cap must be finite and positive, got {delta}"
        )));
    }
    let f = |e: f64| match rate_value(model, e, beta) {
        Ok(g) => 0.5 * e * g * (beta * e / 2.0).tanh(),
        Err(_) => f64::NEG_INFINITY,
    };
    let (mut x, mut fx) = golden_max(&f, 0.0, delta, delta * 1e-13);
    let f_cap = f(delta);
    if f_cap >= fx {
        x = delta;
        fx = f_cap;
    }
    if !fx.is_finite() || fx <= 0.0 {
        return Err(Error::Regime(
            "no attainable heating power below the gap cap".into(),
        ));
    }
    Ok(SymmetricHeaterOptimum {
        eps: x,
        max_power: fx,
        time_split: 0.5,
        boundary: delta - x <= EDGE_TOL_REL * delta,
    })
}
