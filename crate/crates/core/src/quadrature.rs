//! Gauss-Legendre rules, composite panels and kink-aware product integration.

use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        t.iter().map(|x| mid + half * x).collect(),
        w.iter().map(|x| half * x).collect(),
    )
}

/// One Gauss-Legendre panel of a composite rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    /// Index of the panel's first node in the composite node list.
    pub start: usize,
    pub len: usize,
    /// Barycentric interpolation weights for the panel's nodes.
    bary: Vec<f64>,
}

impl Panel {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }
}

/// Composite Gauss-Legendre rule: one panel between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub panels: Vec<Panel>,
}

impl CompositeRule {
    /// Distributes `total` nodes over the panels `[b_0,b_1], [b_1,b_2], ...`
    /// proportionally to panel length, with at least `min_per_panel` each.
    pub fn new(breaks: &[f64], total: usize, min_per_panel: usize) -> Self {
        assert!(breaks.len() >= 2, "need at least one panel");
        let lens: Vec<f64> = breaks.windows(2).map(|w| w[1] - w[0]).collect();
        let span: f64 = lens.iter().sum();
        let np = lens.len();
        let mut counts: Vec<usize> = lens
            .iter()
            .map(|l| ((l / span) * total as f64).floor() as usize)
            .map(|c| c.max(min_per_panel))
            .collect();
        // Hand out the rounding remainder to the longest panels.
        let mut assigned: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..np).collect();
        order.sort_by(|&i, &j| lens[j].total_cmp(&lens[i]));
        let mut cursor = 0;
        while assigned < total {
            counts[order[cursor % np]] += 1;
            assigned += 1;
            cursor += 1;
        }

        let mut nodes = Vec::with_capacity(assigned);
        let mut weights = Vec::with_capacity(assigned);
        let mut panels = Vec::with_capacity(np);
        for (p, w) in breaks.windows(2).enumerate() {
            let n = counts[p];
            let (t, tw) = gauss_legendre(n);
            let bary = t
                .iter()
                .zip(&tw)
                .enumerate()
                .map(|(j, (x, wj))| {
                    let s = ((1.0 - x * x) * wj).sqrt();
                    if j % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                })
                .collect();
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            panels.push(Panel {
                a: w[0],
                b: w[1],
                start: nodes.len(),
                len: n,
                bary,
            });
            nodes.extend(t.iter().map(|x| mid + half * x));
            weights.extend(tw.iter().map(|x| half * x));
        }
        Self {
            nodes,
            weights,
            panels,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Values at `x` of the Lagrange basis polynomials of panel `p`.
    fn lagrange_row(&self, p: usize, x: f64, out: &mut [f64]) {
        let panel = &self.panels[p];
        let xs = &self.nodes[panel.start..panel.start + panel.len];
        for (j, xj) in xs.iter().enumerate() {
            if x == *xj {
                out.iter_mut().for_each(|v| *v = 0.0);
                out[j] = 1.0;
                return;
            }
        }
        let mut denom = 0.0;
        for (j, xj) in xs.iter().enumerate() {
            let t = panel.bary[j] / (x - xj);
            out[j] = t;
            denom += t;
        }
        out.iter_mut().for_each(|v| *v /= denom);
    }

    /// Product-integration matrix `W[a][b] = ∫ K(x_a, y) ℓ_b(y) dy`, where `ℓ_b`
    /// is the panel-local Lagrange basis polynomial of node `b`.
    ///
    /// Each panel integral is split at `x_a` when `x_a` falls inside it, so a
    /// kernel with a derivative jump on the diagonal is integrated to the
    /// accuracy of the smooth pieces. `sub` is the number of Gauss points per
    /// sub-interval.
    pub fn product_weights<K>(&self, kernel: K, sub: usize) -> DMatrix<f64>
    where
        K: Fn(f64, f64) -> f64,
    {
        let n = self.len();
        let (t, tw) = gauss_legendre(sub);
        let mut w = DMatrix::zeros(n, n);
        let max_len = self.panels.iter().map(|p| p.len).max().unwrap_or(0);
        let mut basis = vec![0.0; max_len];
        for a in 0..n {
            let xa = self.nodes[a];
            for (p, panel) in self.panels.iter().enumerate() {
                let pieces: Vec<(f64, f64)> = if xa > panel.a && xa < panel.b {
                    vec![(panel.a, xa), (xa, panel.b)]
                } else {
                    vec![(panel.a, panel.b)]
                };
                for (lo, hi) in pieces {
                    let half = 0.5 * (hi - lo);
                    let mid = 0.5 * (hi + lo);
                    for (ti, wi) in t.iter().zip(&tw) {
                        let y = mid + half * ti;
                        let kv = kernel(xa, y) * wi * half;
                        if kv == 0.0 {
                            continue;
                        }
                        let row = &mut basis[..panel.len];
                        self.lagrange_row(p, y, row);
                        for (j, l) in row.iter().enumerate() {
                            w[(a, panel.start + j)] += kv * l;
                        }
                    }
                }
            }
        }
        w
    }

    /// Integrates `f` with the composite rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| f(*x) * w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_rule() {
        let (x, w) = gauss_legendre(3);
        let r = (0.6_f64).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[2] - r).abs() < 1e-15 && x[1] == 0.0);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials() {
        for n in [4, 17, 64, 200] {
            let (x, w) = gauss_legendre(n);
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let exact = 2.0 / (deg as f64 + 1.0);
            assert!((s - exact).abs() < 1e-13, "n={n}: {s} vs {exact}");
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn composite_rule_integrates_across_breakpoints() {
        let rule = CompositeRule::new(&[-2.0, 0.0, 3.0], 60, 8);
        assert_eq!(rule.len(), 60);
        let v = rule.integrate(|x| (-x.abs()).exp());
        let exact = (1.0 - (-2.0_f64).exp()) + (1.0 - (-3.0_f64).exp());
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn product_weights_integrate_kinked_kernel() {
        // ∫_{-1}^{1} |x - y| dy = 1 + x² exactly.
        let rule = CompositeRule::new(&[-1.0, 1.0], 12, 4);
        let w = rule.product_weights(|x, y| (x - y).abs(), 16);
        for a in 0..rule.len() {
            let s: f64 = (0..rule.len()).map(|b| w[(a, b)]).sum();
            let x = rule.nodes[a];
            assert!((s - (1.0 + x * x)).abs() < 1e-13);
        }
    }
}
