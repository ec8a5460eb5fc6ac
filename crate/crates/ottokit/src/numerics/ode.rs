//! Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

/// Integrates dy/dt = f(t, y) from `t0` to `t1` with adaptive step control.
/// The error per step is held below `atol + rtol * |y|` componentwise.
pub fn rk45<const N: usize, F>(f: &F, t0: f64, t1: f64, y0: [f64; N], rtol: f64, atol: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if t1 == t0 {
        return Ok(y0);
    }
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = span / 64.0;
    let h_min = span.abs() * 1e-14;
    let mut steps = 0u64;

    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    // 5th-order solution weights (also the 7th stage position).
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // Difference between 5th- and embedded 4th-order weights.
    const E1: f64 = 71.0 / 57600.0;
    const E3: f64 = -71.0 / 16695.0;
    const E4: f64 = 71.0 / 1920.0;
    const E5: f64 = -17253.0 / 339200.0;
    const E6: f64 = 22.0 / 525.0;
    const E7: f64 = -1.0 / 40.0;

    let axpy = |y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64| {
        let mut out = *y;
        for (i, o) in out.iter_mut().enumerate() {
            for (c, k) in terms {
                *o += h * c * k[i];
            }
        }
        out
    };

    while (t1 - t) * span.signum() > 0.0 {
        if (t + h - t1) * span.signum() > 0.0 {
            h = t1 - t;
        }
        let k1 = f(t, &y);
        let k2 = f(t + A21 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + 0.3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + 0.8 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            t + 8.0 / 9.0 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let y5 = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(t + h, &y5);

        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((e / scale).abs());
        }

        if err <= 1.0 {
            t += h;
            y = y5;
        }
        // Non-finite error (e.g. the right-hand side returned NaN) forces a
        // retry with a smaller step; persistent failure hits the underflow
        // guard below.
        let grow = if !err.is_finite() {
            0.2
        } else if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= grow;
        if h.abs() < h_min {
            return Err(Error::Integration(format!(
                "step size underflow at t = {t}: requested tolerance not attainable"
            )));
        }
        steps += 1;
        if steps > 50_000_000 {
            return Err(Error::Integration("step budget exhausted".into()));
        }
    }
    Ok(y)
}
