//! Derivative-free maximization helpers: golden section (1-D), Nelder-Mead
//! (2-D), a Newton polish on central differences, and bisection root finding.

/// Golden-section maximization of `f` on [a, b] to an abscissa tolerance
/// `tol`. Returns (x, f(x)). Assumes `f` is unimodal on the bracket; on a
/// monotone slice it converges to the appropriate endpoint.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (lo + hi);
    let fm = f(xm);
    // Return the best of the probes so a flat or monotone slice still yields
    // the best sampled point.
    let mut best = (xm, fm);
    for (x, v) in [(x1, f1), (x2, f2), (a, f(a)), (b, f(b))] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Nelder-Mead maximization in two dimensions. `scale` sets the initial
/// simplex edge per coordinate; iteration stops when the simplex diameter
/// falls below `tol` (absolute, per coordinate scale) or `max_iter` is hit.
pub fn nelder_mead_max_2d<F: Fn(&[f64; 2]) -> f64>(
    f: &F,
    x0: [f64; 2],
    scale: [f64; 2],
    tol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut pts = [
        x0,
        [x0[0] + scale[0], x0[1]],
        [x0[0], x0[1] + scale[1]],
    ];
    let mut vals = [f(&pts[0]), f(&pts[1]), f(&pts[2])];

    let order = |pts: &mut [[f64; 2]; 3], vals: &mut [f64; 3]| {
        // Descending by value: best first.
        for i in 0..3 {
            for j in (i + 1)..3 {
                if vals[j] > vals[i] {
                    vals.swap(i, j);
                    pts.swap(i, j);
                }
            }
        }
    };

    for _ in 0..max_iter {
        order(&mut pts, &mut vals);
        let diam = (pts[0][0] - pts[2][0]).abs().max((pts[0][1] - pts[2][1]).abs())
            .max((pts[0][0] - pts[1][0]).abs())
            .max((pts[0][1] - pts[1][1]).abs());
        if diam <= tol {
            break;
        }
        let centroid = [
            0.5 * (pts[0][0] + pts[1][0]),
            0.5 * (pts[0][1] + pts[1][1]),
        ];
        let worst = pts[2];
        let refl = [
            centroid[0] + (centroid[0] - worst[0]),
            centroid[1] + (centroid[1] - worst[1]),
        ];
        let f_r = f(&refl);
        if f_r > vals[0] {
            let exp = [
                centroid[0] + 2.0 * (centroid[0] - worst[0]),
                centroid[1] + 2.0 * (centroid[1] - worst[1]),
            ];
            let f_e = f(&exp);
            if f_e > f_r {
                pts[2] = exp;
                vals[2] = f_e;
            } else {
                pts[2] = refl;
                vals[2] = f_r;
            }
        } else if f_r > vals[1] {
            pts[2] = refl;
            vals[2] = f_r;
        } else {
            let contr = [
                centroid[0] + 0.5 * (worst[0] - centroid[0]),
                centroid[1] + 0.5 * (worst[1] - centroid[1]),
            ];
            let f_c = f(&contr);
            if f_c > vals[2] {
                pts[2] = contr;
                vals[2] = f_c;
            } else {
                // Shrink toward the best vertex.
                for i in 1..3 {
                    pts[i] = [
                        pts[0][0] + 0.5 * (pts[i][0] - pts[0][0]),
                        pts[0][1] + 0.5 * (pts[i][1] - pts[0][1]),
                    ];
                    vals[i] = f(&pts[i]);
                }
            }
        }
    }
    order(&mut pts, &mut vals);
    (pts[0], vals[0])
}

/// Newton refinement of an interior maximum using central-difference
/// gradient and Hessian with relative step `h_rel`. Steps that leave the
/// rectangle `bounds` or hit a non-concave Hessian stop the iteration.
/// Returns the refined point only if it does not decrease `f`.
pub fn newton_polish_max_2d<F: Fn(&[f64; 2]) -> f64>(
    f: &F,
    x0: [f64; 2],
    h_rel: f64,
    bounds: ([f64; 2], [f64; 2]),
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut x = x0;
    let mut fx = f(&x);
    for _ in 0..max_iter {
        let h = [
            h_rel * x[0].abs().max(1.0),
            h_rel * x[1].abs().max(1.0),
        ];
        let at = |dx: f64, dy: f64| f(&[x[0] + dx, x[1] + dy]);
        let fpp = at(h[0], 0.0);
        let fmm = at(-h[0], 0.0);
        let fqq = at(0.0, h[1]);
        let fnn = at(0.0, -h[1]);
        let g = [
            (fpp - fmm) / (2.0 * h[0]),
            (fqq - fnn) / (2.0 * h[1]),
        ];
        let hxx = (fpp - 2.0 * fx + fmm) / (h[0] * h[0]);
        let hyy = (fqq - 2.0 * fx + fnn) / (h[1] * h[1]);
        let hxy = (at(h[0], h[1]) - at(h[0], -h[1]) - at(-h[0], h[1]) + at(-h[0], -h[1]))
            / (4.0 * h[0] * h[1]);
        let det = hxx * hyy - hxy * hxy;
        // Concavity check: Hessian must be negative definite.
        if !(hxx < 0.0 && det > 0.0) {
            break;
        }
        let step = [
            -(hyy * g[0] - hxy * g[1]) / det,
            -(hxx * g[1] - hxy * g[0]) / det,
        ];
        let cand = [x[0] + step[0], x[1] + step[1]];
        let inside = cand[0] >= bounds.0[0]
            && cand[0] <= bounds.1[0]
            && cand[1] >= bounds.0[1]
            && cand[1] <= bounds.1[1];
        if !inside {
            break;
        }
        let fc = f(&cand);
        if !fc.is_finite() || fc < fx - (fx.abs() + 1.0) * 1e-12 {
            break;
        }
        let moved = step[0].abs().max(step[1].abs());
        x = cand;
        fx = fc;
        if moved < 1e-13 * (x[0].abs().max(x[1].abs()).max(1.0)) {
            break;
        }
    }
    (x, fx)
}

/// Bisection root of `f` on a bracket with a sign change; `tol` is absolute
/// in the abscissa.
pub fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() <= tol {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Scans `n` log-spaced nodes over [lo, hi] (both positive) and returns the
/// first sub-interval where `f` changes sign.
pub fn scan_sign_change<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, n: usize) -> Option<(f64, f64)> {
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..=n {
        let x = lo * (hi / lo).powf(i as f64 / n as f64);
        let fx = f(x);
        if prev_f == 0.0 {
            return Some((prev_x, prev_x));
        }
        if prev_f.signum() != fx.signum() {
            return Some((prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    None
}
