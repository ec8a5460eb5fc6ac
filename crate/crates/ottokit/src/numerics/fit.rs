//! Polynomial least squares via Householder QR.

use crate::error::{Error, Result};

/// Solves min ||A x - y||_2 for a dense column-major-free small system using
/// Householder QR. `a` is row-major with `cols` columns.
pub fn lstsq(a: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let rows = a.len();
    if rows == 0 || rows != y.len() {
        return Err(Error::Domain("least squares: empty or mismatched system".into()));
    }
    let cols = a[0].len();
    if rows < cols {
        return Err(Error::Domain("least squares: underdetermined system".into()));
    }
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let mut b = y.to_vec();

    for k in 0..cols {
        // Householder vector for column k below the diagonal.
        let mut norm = 0.0;
        for row in r.iter().skip(k) {
            norm += row[k] * row[k];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("least squares: rank-deficient matrix".into()));
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v = vec![0.0; rows - k];
        v[0] = r[k][k] - alpha;
        for i in (k + 1)..rows {
            v[i - k] = r[i][k];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv > 0.0 {
            for j in k..cols {
                let dot: f64 = (k..rows).map(|i| v[i - k] * r[i][j]).sum();
                let c = 2.0 * dot / vtv;
                for i in k..rows {
                    r[i][j] -= c * v[i - k];
                }
            }
            let dot: f64 = (k..rows).map(|i| v[i - k] * b[i]).sum();
            let c = 2.0 * dot / vtv;
            for i in k..rows {
                b[i] -= c * v[i - k];
            }
        }
        r[k][k] = alpha;
    }

    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = b[k];
        for j in (k + 1)..cols {
            s -= r[k][j] * x[j];
        }
        if r[k][k] == 0.0 {
            return Err(Error::Domain("least squares: singular triangular factor".into()));
        }
        x[k] = s / r[k][k];
    }
    Ok(x)
}

/// Least-squares polynomial fit of degree `deg`; returns coefficients in
/// ascending order [c0, c1, ...].
pub fn polyfit(xs: &[f64], ys: &[f64], deg: usize) -> Result<Vec<f64>> {
    let a: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| (0..=deg).map(|p| x.powi(p as i32)).collect())
        .collect();
    lstsq(&a, ys)
}

/// Evaluates an ascending-coefficient polynomial at `x`.
pub fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Standard errors of fitted polynomial coefficients: sqrt of the diagonal
/// of s^2 (X^T X)^-1 with s^2 the residual variance.
pub fn polyfit_standard_errors(xs: &[f64], ys: &[f64], coeffs: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    let p = coeffs.len();
    if n <= p {
        return Err(Error::Domain("standard errors need more points than parameters".into()));
    }
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - polyval(coeffs, x);
            r * r
        })
        .sum();
    let s2 = ssr / (n - p) as f64;

    // Normal matrix X^T X, inverted by Gauss-Jordan (tiny and symmetric).
    let mut m = vec![vec![0.0; 2 * p]; p];
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..p {
            row[j] = xs.iter().map(|&x| x.powi((i + j) as i32)).sum();
        }
        row[p + i] = 1.0;
    }
    for col in 0..p {
        let pivot_row = (col..p)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        if pivot == 0.0 {
            return Err(Error::Domain("singular normal matrix".into()));
        }
        for j in 0..2 * p {
            m[col][j] /= pivot;
        }
        for i in 0..p {
            if i != col {
                let c = m[i][col];
                for j in 0..2 * p {
                    m[i][j] -= c * m[col][j];
                }
            }
        }
    }
    Ok((0..p).map(|i| (s2 * m[i][p + i]).max(0.0).sqrt()).collect())
}
