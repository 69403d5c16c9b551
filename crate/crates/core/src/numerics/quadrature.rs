//! Gauss–Legendre rules and adaptive Simpson integration.

/// Legendre polynomial P_n(x) and its derivative, by the three-term
/// recurrence.
pub fn legendre_p(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    // derivative from P_n, P_{n-1}
    let dp = if (x.abs() - 1.0).abs() < 1e-14 {
        let nf = n as f64;
        0.5 * x.powi(n as i32 + 1) * nf * (nf + 1.0)
    } else {
        let nf = n as f64;
        nf * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

/// Gauss–Legendre nodes (ascending) and weights on [-1, 1].
///
/// Newton iteration from the Chebyshev-based initial guess; exact for
/// polynomials of degree <= 2n - 1.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // descending guess, store ascending at the end
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_p(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_p(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let err = left + right - whole;
        if depth == 0 || err.abs() < 15.0 * tol {
            left + right + err / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 polynomial
        let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(14)).sum();
        assert_abs_diff_eq!(val, 2.0 / 15.0, epsilon = 1e-13);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn gl_nodes_ascending() {
        let (x, _) = gauss_legendre(33);
        for i in 1..x.len() {
            assert!(x[i] > x[i - 1]);
        }
    }

    #[test]
    fn simpson_smooth_integral() {
        let v = adaptive_simpson(&|t: f64| t.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-10);
    }
}
