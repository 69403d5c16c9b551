//! Barycentric polynomial interpolation and local Lagrange resampling.

/// Barycentric interpolant over a fixed set of distinct nodes.
///
/// Weights are rescaled during accumulation so that node counts of a few
/// hundred stay in range; only weight ratios matter.
#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    pub fn new(nodes: &[f64]) -> Self {
        let n = nodes.len();
        assert!(n >= 2, "interpolation needs at least two nodes");
        // scale factor ~ quarter width keeps products of differences near 1
        let span = nodes[n - 1] - nodes[0];
        let c = 0.25 * span.abs().max(1e-300);
        let mut weights = vec![1.0; n];
        for i in 0..n {
            let mut w: f64 = 1.0;
            for j in 0..n {
                if j != i {
                    w /= (nodes[i] - nodes[j]) / c;
                }
            }
            weights[i] = w;
        }
        let max = weights.iter().fold(0.0f64, |m, &w| m.max(w.abs()));
        for w in &mut weights {
            *w /= max;
        }
        Self {
            nodes: nodes.to_vec(),
            weights,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Evaluate the interpolant of `values` (same ordering as nodes) at `x`.
    pub fn eval(&self, values: &[f64], x: f64) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..self.nodes.len() {
            let dx = x - self.nodes[i];
            if dx.abs() < 1e-300 {
                return values[i];
            }
            let t = self.weights[i] / dx;
            num += t * values[i];
            den += t;
        }
        num / den
    }
}

/// Resample `(xs, ys)` (xs strictly increasing) onto `targets` with sliding
/// Lagrange interpolation of the given stencil `order` (number of points).
pub fn lagrange_resample(xs: &[f64], ys: &[f64], targets: &[f64], order: usize) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let k = order.min(n);
    let mut out = Vec::with_capacity(targets.len());
    for &t in targets {
        // index of first node >= t
        let pos = xs.partition_point(|&x| x < t);
        let lo = pos.saturating_sub(k / 2).min(n - k);
        let window_x = &xs[lo..lo + k];
        let window_y = &ys[lo..lo + k];
        out.push(lagrange_eval(window_x, window_y, t));
    }
    out
}

fn lagrange_eval(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let k = xs.len();
    let mut acc = 0.0;
    for i in 0..k {
        let mut li = 1.0;
        for j in 0..k {
            if i != j {
                li *= (t - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += li * ys[i];
    }
    acc
}
