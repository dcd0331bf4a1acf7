//! Independent reference computations used to validate the numerical routes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;

/// Orthogonal projection onto the span of `basis` by modified Gram-Schmidt.
pub fn gram_schmidt_projection(dim: usize, basis: &[DVector<f64>]) -> DMatrix<f64> {
    let mut q: Vec<DVector<f64>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for _ in 0..2 {
            for u in &q {
                let c = u.dot(&v);
                v -= u * c;
            }
        }
        let n = v.norm();
        if n > 1e-12 {
            q.push(v / n);
        }
    }
    let mut p = DMatrix::zeros(dim, dim);
    for u in &q {
        p += u * u.transpose();
    }
    p
}

/// `4 sin²(jπ / (2(n+1))) / h²`, `j = 1..n`: the Dirichlet second-difference spectrum.
pub fn free_lattice_eigenvalues(n: usize, h: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| 4.0 * (j as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2) / (h * h))
        .collect()
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Bound states of the continuum square well `V = -depth` on `|x| < a`, ascending.
///
/// With `q² + κ² = depth` the even states solve `q tan(qa) = κ` and the odd
/// ones `-q cot(qa) = κ`; each branch of `tan` holds at most one root.
pub fn square_well_bound_states(depth: f64, a: f64) -> Vec<f64> {
    if !(depth > 0.0 && a > 0.0) {
        return Vec::new();
    }
    let q_max = depth.sqrt();
    let kappa = |q: f64| (depth - q * q).max(0.0).sqrt();
    let mut energies = Vec::new();
    // Roots in q·a ∈ (mπ/2, (m+1)π/2); even for m even, odd for m odd.
    let mut m = 0;
    while (m as f64) * PI / 2.0 < q_max * a {
        let lo = (m as f64 * PI / 2.0 + 1e-14) / a;
        let hi = (((m + 1) as f64 * PI / 2.0 - 1e-14) / a).min(q_max);
        let f = |q: f64| {
            let (s, c) = (q * a).sin_cos();
            if m % 2 == 0 {
                q * s - kappa(q) * c
            } else {
                -q * c - kappa(q) * s
            }
        };
        if hi > lo && (f(lo) < 0.0) != (f(hi) < 0.0) {
            let q = bisect(f, lo, hi);
            energies.push(q * q - depth);
        }
        m += 1;
    }
    energies.sort_by(f64::total_cmp);
    energies
}

/// Eigenphases `2δ_even`, `2δ_odd` of the square well `-depth·1_{|x|<a}` at `λ`, in `[0, 2π)`, ascending.
pub fn square_well_eigenphases(depth: f64, a: f64, lam: f64) -> [f64; 2] {
    let k = lam.sqrt();
    let q = (lam + depth).sqrt();
    let even = ((q / k) * (q * a).tan()).atan() - k * a;
    let odd = ((k / q) * (q * a).tan()).atan() - k * a;
    let mut p = [(2.0 * even).rem_euclid(2.0 * PI), (2.0 * odd).rem_euclid(2.0 * PI)];
    p.sort_by(f64::total_cmp);
    p
}

/// The only nonzero eigenvalue of the s-wave `B0(λ)` for `V = -depth` on
/// `r < a`: `(depth/k) ∫₀^a sin²(kr) dr`.
pub fn s_wave_b0_square_well(depth: f64, a: f64, lam: f64) -> f64 {
    let k = lam.sqrt();
    depth.abs() / k * (0.5 * a - (2.0 * k * a).sin() / (4.0 * k))
}

/// `(1/k) ∫₀^R |V(r)| sin²(kr) dr` by a single high-order Gauss-Legendre rule.
pub fn s_wave_b0_separable<F: Fn(f64) -> f64>(v: F, radius: f64, lam: f64, nodes: usize) -> f64 {
    let k = lam.sqrt();
    let (x, w) = gauss_legendre_on(nodes, 0.0, radius);
    x.iter().zip(&w).map(|(r, w)| w * v(*r).abs() * (k * r).sin().powi(2)).sum::<f64>() / k
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

/// `(1/16π²) ∫∫ |V(x)||V(y)| / |x-y|² dx dy` for `V = -depth` on the ball of
/// radius `a` in ℝ³, sampled in six dimensions.
///
/// `x` is uniform in the ball and `y = x + d` with `|d|` uniform on `[0, 2a]`
/// and a uniform direction; the density of `d` cancels `1/|d|²`, leaving the
/// weight `8πa·1[y ∈ B]`.
pub fn hs_ball_monte_carlo(depth: f64, a: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 || !(a > 0.0) {
        return Err(Error::InvalidArgument("need a positive radius and at least one sample".into()));
    }
    const CHUNK: u64 = 1 << 16;
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut hits = 0;
            for _ in 0..n {
                let x = unit_vector(&mut rng) * (a * rng.random::<f64>().cbrt());
                let y = x + unit_vector(&mut rng) * (2.0 * a * rng.random::<f64>());
                if y.norm_squared() < a * a {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let p = hits as f64 / samples as f64;
    let vol = 4.0 / 3.0 * PI * a.powi(3);
    let scale = depth * depth / (16.0 * PI * PI) * vol * 8.0 * PI * a;
    Ok(McEstimate {
        value: scale * p,
        std_err: scale * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}

fn unit_vector<R: Rng>(rng: &mut R) -> nalgebra::Vector3<f64> {
    loop {
        let v = nalgebra::Vector3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n: f64 = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_is_a_projection() {
        let b = vec![DVector::from_vec(vec![1.0, 1.0, 0.0]), DVector::from_vec(vec![0.0, 1.0, 1.0])];
        let p = gram_schmidt_projection(3, &b);
        assert!((&p * &p - &p).norm() < 1e-14);
        assert!((p.trace() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn square_well_states_solve_their_equations() {
        let e = square_well_bound_states(2.0, 1.0);
        assert_eq!(e.len(), 1);
        let kappa = (-e[0]).sqrt();
        let q = (2.0 + e[0]).sqrt();
        assert!((q * q.tan() - kappa).abs() < 1e-10);
        // depth π²/4·n² on a = 1 holds n states just above each threshold.
        assert_eq!(square_well_bound_states(10.0, 1.0).len(), 3);
    }

    #[test]
    fn b0_closed_form_matches_quadrature() {
        let got = s_wave_b0_separable(|_| 3.0, 1.5, 2.0, 64);
        assert!((got - s_wave_b0_square_well(3.0, 1.5, 2.0)).abs() < 1e-13);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = hs_ball_monte_carlo(1.0, 1.0, 100_000, 7).unwrap();
        let b = hs_ball_monte_carlo(1.0, 1.0, 100_000, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.std_err < 0.01 * a.value);
    }
}
