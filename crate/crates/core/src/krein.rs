//! Krein's example: `H₀ = (h₀ + I)⁻¹` with `h₀` the Dirichlet Laplacian on
//! the half-line and the rank-one `G f = ∫₀^∞ f(x) e^{-x} dx`. Here
//! `T₀(λ + i0) = -1 + i√(1/λ - 1)` on `(0, 1)`, so `1 + A₀(λ)` vanishes
//! identically and the index exists nowhere on that interval.
//!
//! The resolvent of `H₀` is reduced to one of `h₀`:
//! `(H₀ - z)⁻¹ = -1/z - z⁻² (h₀ - w)⁻¹` with `w = 1/z - 1`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::TridiagonalLu;

/// Relative amplitude of the solution at the far wall above which the box is
/// rejected; the reflected wave enters the result squared.
const WALL_AMPLITUDE: f64 = 1e-3;

/// Closed-form `T₀(λ + i0) = -1 + i√(1/λ - 1)`.
pub fn krein_t0_closed(lam: f64) -> Result<Complex64> {
    check_lam(lam)?;
    Ok(Complex64::new(-1.0, (1.0 / lam - 1.0).sqrt()))
}

fn check_lam(lam: f64) -> Result<()> {
    if lam > 0.0 && lam < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "lambda",
            value: lam,
            range: "(0, 1)",
        })
    }
}

/// `⟨(H₀ - z)⁻¹ g, g⟩` on `n` interior points of `[0, x_max]`.
fn sandwiched(z: Complex64, x_max: f64, n: usize) -> Result<(Complex64, f64)> {
    let h = x_max / (n + 1) as f64;
    let w = Complex64::new(1.0, 0.0) / z - 1.0;
    let off = Complex64::new(-1.0 / (h * h), 0.0);
    let diag = vec![Complex64::new(2.0 / (h * h), 0.0) - w; n];
    let side = vec![off; n - 1];
    let lu = TridiagonalLu::factor(&side, &diag, &side)?;
    let g: Vec<f64> = (1..=n).map(|j| (-(j as f64) * h).exp()).collect();
    let mut u: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    lu.solve_in_place(&mut u);
    let inner: Complex64 = u.iter().zip(&g).map(|(a, b)| a * b).sum::<Complex64>() * h;
    let norm_sq = h * (0.5 + g.iter().map(|v| v * v).sum::<f64>());
    let peak = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let wall = u[n - 1].norm() / peak.max(f64::MIN_POSITIVE);
    Ok((-norm_sq / z - inner / (z * z), wall))
}

/// Weights of polynomial extrapolation to `ε = 0` through the given points.
fn extrapolation_weights(eps: &[f64]) -> Vec<f64> {
    (0..eps.len())
        .map(|i| {
            eps.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, e)| e / (e - eps[i]))
                .product()
        })
        .collect()
}

/// `T₀(λ + iε)` on a box of length `x_max` with `n` interior points,
/// extrapolated to `ε → 0` through `eps_seq`.
pub fn krein_t0_numeric(lam: f64, x_max: f64, n: usize, eps_seq: &[f64]) -> Result<Complex64> {
    check_lam(lam)?;
    if x_max < 40.0 {
        return Err(Error::InvalidArgument(format!("box length {x_max} is below 40")));
    }
    if n < 2000 {
        return Err(Error::InvalidArgument(format!("{n} grid points is below 2000")));
    }
    if eps_seq.is_empty() || eps_seq.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("eps_seq must be non-empty and positive".into()));
    }
    let mut sorted = eps_seq.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() != eps_seq.len() {
        return Err(Error::InvalidArgument("eps_seq has repeated entries".into()));
    }
    let values: Vec<(Complex64, f64)> = eps_seq
        .par_iter()
        .map(|&e| sandwiched(Complex64::new(lam, e), x_max, n))
        .collect::<Result<_>>()?;
    let wall = values.iter().map(|v| v.1).fold(0.0, f64::max);
    if wall > WALL_AMPLITUDE {
        return Err(Error::BoxTooSmall {
            change: wall,
            allowed: WALL_AMPLITUDE,
        });
    }
    Ok(extrapolation_weights(eps_seq)
        .iter()
        .zip(&values)
        .map(|(c, v)| v.0 * *c)
        .sum())
}

/// Box, grid and `ε` sequence adapted to `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinResolution {
    pub x_max: f64,
    pub n: usize,
    pub eps_seq: Vec<f64>,
}

impl KreinResolution {
    /// `ε = κ λ(1-λ)·{1, 1/2, 1/4}`; the box holds eight decay lengths of the
    /// outgoing solution at the smallest `ε`, the grid resolves its wavelength.
    pub fn for_lambda(lam: f64, kappa: f64) -> Result<Self> {
        check_lam(lam)?;
        let base = kappa * lam * (1.0 - lam);
        let eps_seq = vec![base, 0.5 * base, 0.25 * base];
        let p = (1.0 / lam - 1.0).sqrt();
        let decay = 0.25 * base / (2.0 * p * lam * lam);
        let x_max = (8.0 / decay).max(40.0);
        let h = 0.02_f64.min(0.02 / p);
        let n = ((x_max / h).ceil() as usize).max(2000);
        Ok(Self { x_max, n, eps_seq })
    }
}

pub const DEFAULT_KAPPA: f64 = 0.1;

/// Closed form and numerical value of `T₀(λ + i0)` side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KreinEval {
    pub lam: f64,
    pub t0_closed: Complex64,
    pub t0_numeric: Complex64,
    pub abs_err: f64,
}

pub fn krein_eval(lam: f64) -> Result<KreinEval> {
    let res = KreinResolution::for_lambda(lam, DEFAULT_KAPPA)?;
    let t0_numeric = krein_t0_numeric(lam, res.x_max, res.n, &res.eps_seq)?;
    let t0_closed = krein_t0_closed(lam)?;
    Ok(KreinEval {
        lam,
        t0_closed,
        t0_numeric,
        abs_err: (t0_numeric - t0_closed).norm(),
    })
}

/// `max |1 + Re T₀(λ + i0)|` over the grid, computed numerically.
pub fn krein_degenerate_scan(lam_grid: &[f64]) -> Result<f64> {
    let evals: Vec<KreinEval> = lam_grid.par_iter().map(|&l| krein_eval(l)).collect::<Result<_>>()?;
    Ok(evals.iter().map(|e| (1.0 + e.t0_numeric.re).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(krein_t0_closed(0.5).unwrap(), Complex64::new(-1.0, 1.0));
        assert_eq!(krein_t0_closed(0.2).unwrap(), Complex64::new(-1.0, 2.0));
        assert!(krein_t0_closed(1.0 - 1e-12).unwrap().im < 1e-5);
        assert!(matches!(krein_t0_closed(1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn extrapolation_is_exact_on_quadratics() {
        let eps = [0.4, 0.2, 0.1];
        let w = extrapolation_weights(&eps);
        let f = |e: f64| 3.0 - 2.0 * e + 5.0 * e * e;
        let got: f64 = w.iter().zip(&eps).map(|(c, e)| c * f(*e)).sum();
        assert!((got - 3.0).abs() < 1e-12);
        assert!((w[2] - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for lam in [0.2, 0.5, 0.8] {
            let e = krein_eval(lam).unwrap();
            assert!((e.t0_numeric.re + 1.0).abs() < 1e-3, "{e:?}");
            assert!((e.t0_numeric.im - e.t0_closed.im).abs() < 1e-3, "{e:?}");
        }
    }

    #[test]
    fn short_box_is_rejected() {
        let r = krein_t0_numeric(0.5, 40.0, 4000, &[1e-3, 5e-4]);
        assert!(matches!(r, Err(Error::BoxTooSmall { .. })));
    }

    #[test]
    fn halving_eps_shrinks_the_error() {
        let lam = 0.5;
        let closed = krein_t0_closed(lam).unwrap();
        let err = |kappa: f64| {
            let r = KreinResolution::for_lambda(lam, kappa).unwrap();
            (krein_t0_numeric(lam, r.x_max, r.n, &r.eps_seq[..1]).unwrap() - closed).norm()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        assert!(e2 < 0.7 * e1, "{e1} {e2}");
    }
}

