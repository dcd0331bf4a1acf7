//! Adaptive Dormand-Prince 5(4) integrator for real systems `y' = f(x, y)`.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Largest allowed step.
    pub h_max: f64,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 2_000_000,
            h_max: f64::INFINITY,
        }
    }
}

/// Statistics of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `x0` to `x1` (either direction), overwriting `y`.
pub fn integrate<F>(f: F, x0: f64, x1: f64, y: &mut [f64], opts: &OdeOptions) -> Result<OdeStats>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y.len();
    let mut stats = OdeStats::default();
    if x0 == x1 {
        return Ok(stats);
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y5 = vec![0.0; n];
    f(x, y, &mut k[0]);

    // Initial step from the derivative scale.
    let d0 = y.iter().fold(0.0_f64, |m, v| m.max(v.abs())) + opts.atol;
    let d1 = k[0].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut h = if d1 > 0.0 { 0.01 * d0 / d1 } else { 0.01 * span };
    h = h.min(span).min(opts.h_max).max(1e-12 * span);

    while (x1 - x) * dir > 0.0 {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::OdeFailure(format!(
                "step budget of {} exhausted at x = {x}",
                opts.max_steps
            )));
        }
        let last = h >= (x1 - x).abs();
        if last {
            h = (x1 - x).abs();
        }
        let hs = h * dir;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += hs * A[s][j] * kj[i];
                }
                tmp[i] = acc;
            }
            f(x + C[s] * hs, &tmp, &mut k[s]);
        }
        let mut err = 0.0_f64;
        for i in 0..n {
            let mut acc = y[i];
            let mut e = 0.0;
            for s in 0..7 {
                acc += hs * B[s] * k[s][i];
                e += hs * E[s] * k[s][i];
            }
            y5[i] = acc;
            let scale = opts.atol + opts.rtol * y[i].abs().max(acc.abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::OdeFailure(format!("non-finite error estimate at x = {x}")));
        }
        if err <= 1.0 {
            stats.accepted += 1;
            x = if last { x1 } else { x + hs };
            y.copy_from_slice(&y5);
            // First-same-as-last: stage 7 is the derivative at the new point.
            k.swap(0, 6);
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(opts.h_max);
        if h < 1e-14 * span {
            return Err(Error::OdeFailure(format!("step size underflow at x = {x}")));
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let mut y = [1.0, 0.0];
        integrate(|_, y, d| {
            d[0] = y[1];
            d[1] = -y[0];
        }, 0.0, 10.0, &mut y, &OdeOptions::with_tol(1e-11))
        .unwrap();
        assert!((y[0] - 10.0_f64.cos()).abs() < 1e-8);
        assert!((y[1] + 10.0_f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn backwards_exponential() {
        let mut y = [1.0];
        integrate(|_, y, d| d[0] = y[0], 2.0, 0.0, &mut y, &OdeOptions::with_tol(1e-12)).unwrap();
        assert!((y[0] - (-2.0_f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn step_budget_is_enforced() {
        let mut y = [1.0, 0.0];
        let opts = OdeOptions {
            max_steps: 10,
            ..OdeOptions::with_tol(1e-12)
        };
        let r = integrate(|_, y, d| {
            d[0] = 100.0 * y[1];
            d[1] = -100.0 * y[0];
        }, 0.0, 10.0, &mut y, &opts);
        assert!(matches!(r, Err(Error::OdeFailure(_))));
    }
}
