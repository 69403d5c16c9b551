//! Wigner small-d functions d^j_{m,n}(theta) for integer and half-integer
//! orders, evaluated by the three-term recurrence in j.
//!
//! Indices are passed doubled (`two_j = 2j`, ...) so half-integers stay
//! exact. The recurrence runs upward in j from the closed-form seed at
//! j0 = max(|m|, |n|); values are bounded by 1, which keeps the upward sweep
//! stable to j of a few hundred. Seeds are computed in log space to avoid
//! factorial overflow.

use crate::error::{Error, Result};

/// ln(k!) for k = 0..=n.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Closed-form d^{j}_{m,n} at the seed degree j = max(|m|,|n|).
///
/// For m = j the single surviving term of the defining sum gives
///   d^j_{j,n} = (-1)^{j-n} sqrt( (2j)! / ((j+n)!(j-n)!) ) cos^{j+n} sin^{j-n}
/// (half angles); for m = -j the sign is +1 with the cos/sin powers swapped.
/// When |n| > |m| the symmetry d^j_{m,n} = (-1)^{m-n} d^j_{n,m} reduces to
/// the previous cases.
fn seed_value(two_j: i32, two_m: i32, two_n: i32, theta: f64) -> f64 {
    debug_assert_eq!(two_j, two_m.abs().max(two_n.abs()));
    if two_n.abs() > two_m.abs() {
        let phase = if ((two_m - two_n) / 2).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        return phase * seed_value(two_j, two_n, two_m, theta);
    }
    let j_plus_n = ((two_j + two_n) / 2) as usize;
    let j_minus_n = ((two_j - two_n) / 2) as usize;
    let lf = ln_factorials(two_j as usize);
    let ln_c = 0.5 * (lf[two_j as usize] - lf[j_plus_n] - lf[j_minus_n]);
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    debug_assert!(c > 0.0 && s > 0.0, "theta must lie strictly inside (0, pi)");
    if two_m >= 0 {
        let sign = if j_minus_n % 2 == 0 { 1.0 } else { -1.0 };
        sign * (ln_c + j_plus_n as f64 * c.ln() + j_minus_n as f64 * s.ln()).exp()
    } else {
        (ln_c + j_minus_n as f64 * c.ln() + j_plus_n as f64 * s.ln()).exp()
    }
}

/// Table of d^j_{m,n}(theta) for all j = j0, j0+1, ..., jmax at fixed (m, n).
///
/// Returns one row per angle; each row holds the values indexed by
/// (j - j0). `thetas` must lie in (0, pi) (open interval: quadrature grids
/// never touch the poles).
pub fn d_column(two_m: i32, two_n: i32, two_j_max: i32, thetas: &[f64]) -> Result<Vec<Vec<f64>>> {
    let two_j0 = two_m.abs().max(two_n.abs());
    if (two_j_max - two_j0) % 2 != 0 || two_j_max < two_j0 {
        return Err(Error::InvalidArgument(format!(
            "degree 2j={two_j_max} incompatible with 2m={two_m}, 2n={two_n}"
        )));
    }
    let n_j = ((two_j_max - two_j0) / 2 + 1) as usize;
    let m = two_m as f64 / 2.0;
    let n = two_n as f64 / 2.0;
    let mut out = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        let x = theta.cos();
        let mut row = Vec::with_capacity(n_j);
        let mut d_prev = 0.0; // d^{j0-1}, multiplied by a vanishing coefficient
        let mut d = seed_value(two_j0, two_m, two_n, theta);
        row.push(d);
        let mut two_j = two_j0;
        while (two_j as usize) < (two_j0 as usize) + 2 * (n_j - 1) {
            let j = two_j as f64 / 2.0;
            let next = if two_j == 0 {
                // j = 0 only occurs for m = n = 0; d^1_{00} = cos(theta)
                x * d
            } else {
                let a = (2.0 * j + 1.0) * (j * (j + 1.0) * x - m * n);
                let b = (j + 1.0) * ((j * j - m * m) * (j * j - n * n)).sqrt();
                let c =
                    j * (((j + 1.0) * (j + 1.0) - m * m) * ((j + 1.0) * (j + 1.0) - n * n)).sqrt();
                (a * d - b * d_prev) / c
            };
            d_prev = d;
            d = next;
            row.push(d);
            two_j += 2;
        }
        out.push(row);
    }
    Ok(out)
}

/// Direct evaluation from the defining finite sum. Accurate for small j;
/// used as an independent reference for the recurrence.
pub fn d_direct(two_j: i32, two_m: i32, two_n: i32, theta: f64) -> f64 {
    let j_plus_m = (two_j + two_m) / 2;
    let j_minus_m = (two_j - two_m) / 2;
    let j_plus_n = (two_j + two_n) / 2;
    let j_minus_n = (two_j - two_n) / 2;
    assert!(j_plus_m >= 0 && j_minus_m >= 0 && j_plus_n >= 0 && j_minus_n >= 0);
    let lf = ln_factorials(two_j.max(1) as usize);
    let ln_pref = 0.5
        * (lf[j_plus_m as usize]
            + lf[j_minus_m as usize]
            + lf[j_plus_n as usize]
            + lf[j_minus_n as usize]);
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    // m - n is an integer even when m, n are half-integers
    let m_minus_n = j_plus_m - j_plus_n;
    let t_lo = 0.max(-m_minus_n);
    let t_hi = j_plus_n.min(j_minus_m);
    let mut acc = 0.0;
    for t in t_lo..=t_hi {
        // powers: cos^{2j + n - m - 2t}, sin^{m - n + 2t}
        let pc = j_plus_n + j_minus_m - 2 * t;
        let ps = m_minus_n + 2 * t;
        let ln_den = lf[(j_plus_n - t) as usize]
            + lf[t as usize]
            + lf[(m_minus_n + t) as usize]
            + lf[(j_minus_m - t) as usize];
        let sign = if (m_minus_n + t).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        acc += sign * (ln_pref - ln_den).exp() * c.powi(pc) * s.powi(ps);
    }
    acc
}
