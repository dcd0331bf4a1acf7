//! Scattering matrix of `-d²/dx² + V` on the line, its eigenphases, and the
//! spectral flow of `λ ↦ S(λ)` through a point `e^{iθ}` of the unit circle.
//!
//! The solution is written as `ψ = a e^{ikx} + b e^{-ikx}` with `(a, b)`
//! carried by a transfer matrix `M(x)` normalized to `M(-R) = I`. Below a
//! switch-over frequency `M` is integrated with adaptive Dormand-Prince;
//! above it the oscillation would force steps of order `1/k`, so the
//! support is cut into slices on which `V` is replaced by its midpoint value
//! and propagated exactly, with one Richardson step in the slice width.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsop::{a0_b0_1d, assemble_bsmat, min_singular};
use crate::error::{Error, Result};
use crate::ode::{integrate, OdeOptions};
use crate::potential::PotentialSpec;
use crate::xindex::{xi_curve, xi_essential, XiValue};

/// Above this many radians of `k·2R` the slice propagator is used.
const SLICE_SWITCH: f64 = 400.0;
/// Slice width of the high-energy propagator.
const SLICE_WIDTH: f64 = 0.01;
/// Largest unitarity residual accepted by `smatrix`.
const UNITARITY_LIMIT: f64 = 1e-6;

type C2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul(a: &C2, b: &C2) -> C2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// How an S-matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScatterMethod {
    Free,
    Adaptive,
    Slices,
}

/// `S(λ) = [[t, r_left], [r_right, t]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMatrix {
    pub lam: f64,
    pub entries: [[Complex64; 2]; 2],
    pub unitarity_residual: f64,
    pub method: ScatterMethod,
}

impl SMatrix {
    pub fn identity(lam: f64) -> Self {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        Self {
            lam,
            entries: [[one, zero], [zero, one]],
            unitarity_residual: 0.0,
            method: ScatterMethod::Free,
        }
    }

    pub fn t(&self) -> Complex64 {
        self.entries[0][0]
    }

    pub fn r_left(&self) -> Complex64 {
        self.entries[0][1]
    }

    pub fn r_right(&self) -> Complex64 {
        self.entries[1][0]
    }

    /// Largest singular value of `S - I`.
    pub fn distance_to_identity(&self) -> f64 {
        let mut d = self.entries;
        d[0][0] -= 1.0;
        d[1][1] -= 1.0;
        spectral_norm(&d)
    }

    /// Eigenvalues and unit eigenvectors.
    pub fn eigen(&self) -> [(Complex64, [Complex64; 2]); 2] {
        let [[p, q], [r, s]] = self.entries;
        let tr = p + s;
        let det = p * s - q * r;
        let disc = (tr * tr - det * 4.0).sqrt();
        let values = [(tr + disc) * 0.5, (tr - disc) * 0.5];
        values.map(|l| {
            let v1 = [q, l - p];
            let v2 = [l - s, r];
            let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
            let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
            let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
            if n < 1e-28 {
                // Degenerate: S is a multiple of the identity.
                return (l, [c(1.0, 0.0), c(0.0, 0.0)]);
            }
            let n = n.sqrt();
            (l, [v[0] / n, v[1] / n])
        })
    }
}

fn spectral_norm(m: &C2) -> f64 {
    // Largest eigenvalue of m* m.
    let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let mean = 0.5 * (a + d);
    let gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean + gap).max(0.0).sqrt()
}

fn unitarity_residual(s: &C2) -> f64 {
    let mut g = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = s[0][i].conj() * s[0][j] + s[1][i].conj() * s[1][j];
        }
    }
    g[0][0] -= 1.0;
    g[1][1] -= 1.0;
    spectral_norm(&g)
}

/// Transfer matrix across the support by adaptive Dormand-Prince.
pub fn transfer_adaptive(lam: f64, v: &PotentialSpec, ode_tol: f64) -> Result<C2> {
    let k = lam.sqrt();
    let rhs = |x: f64, y: &[f64], d: &mut [f64]| {
        let vx = v.eval(x);
        if vx == 0.0 {
            d.iter_mut().for_each(|z| *z = 0.0);
            return;
        }
        // C = -iV/(2k) [[1, e^{-2ikx}], [-e^{2ikx}, -1]]
        let f = c(0.0, -vx / (2.0 * k));
        let e = Complex64::from_polar(1.0, 2.0 * k * x);
        let cm = [[f, f * e.conj()], [-f * e, -f]];
        let m = [[c(y[0], y[1]), c(y[2], y[3])], [c(y[4], y[5]), c(y[6], y[7])]];
        let p = mul(&cm, &m);
        for (i, z) in [p[0][0], p[0][1], p[1][0], p[1][1]].iter().enumerate() {
            d[2 * i] = z.re;
            d[2 * i + 1] = z.im;
        }
    };
    let mut y = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    let opts = OdeOptions::with_tol(ode_tol);
    for w in v.line_breaks().windows(2) {
        integrate(rhs, w[0], w[1], &mut y, &opts)?;
    }
    Ok([[c(y[0], y[1]), c(y[2], y[3])], [c(y[4], y[5]), c(y[6], y[7])]])
}

fn slice_product(k: f64, v: &PotentialSpec, width: f64) -> C2 {
    let ik = c(0.0, k);
    let mut m = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    for w in v.line_breaks().windows(2) {
        let n = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for s in 0..n {
            let x0 = w[0] + s as f64 * h;
            let x1 = x0 + h;
            let kappa = c(k * k - v.eval(0.5 * (x0 + x1)), 0.0).sqrt();
            let (cs, sn) = ((kappa * h).cos(), (kappa * h).sin());
            let sinc = if kappa.norm() * h < 1e-12 { c(h, 0.0) } else { sn / kappa };
            let prop = [[cs, sinc], [-kappa * sn, cs]];
            let e0 = Complex64::from_polar(1.0, k * x0);
            let e1 = Complex64::from_polar(1.0, k * x1);
            let f0 = [[e0, e0.conj()], [ik * e0, -ik * e0.conj()]];
            let f1_inv = [[e1.conj() * 0.5, e1.conj() / (ik * 2.0)], [e1 * 0.5, -e1 / (ik * 2.0)]];
            let slice = mul(&f1_inv, &mul(&prop, &f0));
            m = mul(&slice, &m);
        }
    }
    m
}

/// Transfer matrix from midpoint slices with one Richardson step.
pub fn transfer_slices(lam: f64, v: &PotentialSpec) -> C2 {
    let k = lam.sqrt();
    let coarse = slice_product(k, v, SLICE_WIDTH);
    let fine = slice_product(k, v, 0.5 * SLICE_WIDTH);
    let mut out = fine;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = (fine[i][j] * 4.0 - coarse[i][j]) / 3.0;
        }
    }
    out
}

fn from_transfer(lam: f64, m: C2, method: ScatterMethod) -> Result<SMatrix> {
    let t = c(1.0, 0.0) / m[1][1];
    let r_left = -m[1][0] / m[1][1];
    let r_right = m[0][1] / m[1][1];
    let entries = [[t, r_left], [r_right, t]];
    if entries.iter().flatten().any(|z| !z.is_finite()) {
        return Err(Error::OdeFailure(format!("non-finite scattering data at λ = {lam}")));
    }
    let residual = unitarity_residual(&entries);
    if residual > UNITARITY_LIMIT {
        return Err(Error::UnitarityViolation { residual });
    }
    Ok(SMatrix {
        lam,
        entries,
        unitarity_residual: residual,
        method,
    })
}

/// `S(λ)` for `λ > 0`; `ode_tol` is the local tolerance of the adaptive integrator.
pub fn smatrix(lam: f64, v: &PotentialSpec, ode_tol: f64) -> Result<SMatrix> {
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lam,
            range: "(0, ∞)",
        });
    }
    if v.is_zero() {
        return Ok(SMatrix::identity(lam));
    }
    if lam.sqrt() * 2.0 * v.support_radius() > SLICE_SWITCH {
        from_transfer(lam, transfer_slices(lam, v), ScatterMethod::Slices)
    } else {
        from_transfer(lam, transfer_adaptive(lam, v, ode_tol)?, ScatterMethod::Adaptive)
    }
}

/// Same as `smatrix` but always with the adaptive integrator.
pub fn smatrix_adaptive(lam: f64, v: &PotentialSpec, ode_tol: f64) -> Result<SMatrix> {
    from_transfer(lam, transfer_adaptive(lam, v, ode_tol)?, ScatterMethod::Adaptive)
}

/// Same as `smatrix` but always with the slice propagator.
pub fn smatrix_slices(lam: f64, v: &PotentialSpec) -> Result<SMatrix> {
    from_transfer(lam, transfer_slices(lam, v), ScatterMethod::Slices)
}

fn phase(z: Complex64) -> f64 {
    let p = z.arg();
    if p < 0.0 {
        p + TAU
    } else {
        p
    }
}

/// Eigenphases in `[0, 2π)`, ascending.
pub fn eigenphases(s: &SMatrix) -> Result<[f64; 2]> {
    if s.unitarity_residual > UNITARITY_LIMIT {
        return Err(Error::UnitarityViolation {
            residual: s.unitarity_residual,
        });
    }
    let e = s.eigen();
    let mut p = [phase(e[0].0), phase(e[1].0)];
    p.sort_by(f64::total_cmp);
    Ok(p)
}

/// `a - b` wrapped into `(-π, π]`.
pub fn wrap(a: f64) -> f64 {
    let mut x = a.rem_euclid(TAU);
    if x > PI {
        x -= TAU;
    }
    x
}

fn circ_dist(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Refinement and range settings for flow traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPolicy {
    /// Initial number of geometrically spaced energies.
    pub points: usize,
    /// Intervals where a branch moves more than this many radians are bisected.
    pub refine_step: f64,
    pub max_points: usize,
    pub ode_tol: f64,
    /// `‖S(Λmax) - I‖` must fall below this.
    pub closeness: f64,
    /// Upper limit of the search for `Λmax`.
    pub lam_cap: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            points: 160,
            refine_step: 0.2,
            max_points: 6000,
            ode_tol: 1e-10,
            closeness: 1e-3,
            lam_cap: 1e12,
        }
    }
}

/// Eigenphases along an energy grid with branches matched step to step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    /// Increasing energies; the last entry is `+∞` where `S = I`.
    pub lambdas: Vec<f64>,
    /// Phase of each branch in `[0, 2π)` at each energy.
    pub branches: Vec<[f64; 2]>,
    pub lam_max: f64,
    /// Largest phase motion of a matched branch between neighbours.
    pub max_step: f64,
}

/// One signed passage of a branch through `e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    pub branch: usize,
    /// `+1` anticlockwise, `-1` clockwise.
    pub sign: i64,
}

struct Sample {
    lam: f64,
    values: [(Complex64, [Complex64; 2]); 2],
}

fn sample(lam: f64, v: &PotentialSpec, tol: f64) -> Result<Sample> {
    let s = smatrix(lam, v, tol)?;
    Ok(Sample { lam, values: s.eigen() })
}

/// Orders the eigenpairs of `next` to continue the branches of `prev`.
fn match_branches(prev: &[(Complex64, [Complex64; 2]); 2], next: &[(Complex64, [Complex64; 2]); 2]) -> bool {
    let p = prev.map(|e| phase(e.0));
    let q = next.map(|e| phase(e.0));
    let keep = circ_dist(p[0], q[0]) + circ_dist(p[1], q[1]);
    let swap = circ_dist(p[0], q[1]) + circ_dist(p[1], q[0]);
    if (keep - swap).abs() > 1e-9 {
        return swap < keep;
    }
    let overlap = |a: &[Complex64; 2], b: &[Complex64; 2]| (a[0].conj() * b[0] + a[1].conj() * b[1]).norm();
    overlap(&prev[0].1, &next[1].1) > overlap(&prev[0].1, &next[0].1)
}

impl FlowTrace {
    /// Builds the trace on `[lam0, Λmax]`, including every energy in `extra`
    /// that falls in that range as a grid point.
    pub fn build(v: &PotentialSpec, lam0: f64, extra: &[f64], policy: &GridPolicy) -> Result<Self> {
        if !(lam0 > 0.0) {
            return Err(Error::OutOfRange {
                what: "lambda0",
                value: lam0,
                range: "(0, ∞)",
            });
        }
        if v.is_zero() {
            return Ok(Self {
                lambdas: vec![lam0, f64::INFINITY],
                branches: vec![[0.0, 0.0], [0.0, 0.0]],
                lam_max: lam0,
                max_step: 0.0,
            });
        }
        let lam_max = find_lam_max(v, lam0, policy)?;
        let mut grid = crate::xindex::geometric_grid(lam0, lam_max, policy.points.max(2));
        grid.extend(extra.iter().copied().filter(|l| *l > lam0 && *l < lam_max));
        grid.sort_by(f64::total_cmp);
        grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        let mut samples: Vec<Sample> = grid
            .par_iter()
            .map(|&l| sample(l, v, policy.ode_tol))
            .collect::<Result<_>>()?;

        loop {
            let (_, steps) = Self::assemble(&samples);
            let to_refine: Vec<f64> = steps
                .iter()
                .enumerate()
                .filter(|(_, s)| **s > policy.refine_step)
                .map(|(i, _)| (samples[i].lam * samples[i + 1].lam).sqrt())
                .filter(|m| m.is_finite())
                .collect();
            if to_refine.is_empty() || samples.len() + to_refine.len() > policy.max_points {
                break;
            }
            let fresh: Vec<Sample> = to_refine
                .par_iter()
                .map(|&l| sample(l, v, policy.ode_tol))
                .collect::<Result<_>>()?;
            samples.extend(fresh);
            samples.sort_by(|a, b| a.lam.total_cmp(&b.lam));
        }

        let (mut branches, steps) = Self::assemble(&samples);
        let mut lambdas: Vec<f64> = samples.iter().map(|s| s.lam).collect();
        let last = *branches.last().expect("grid is non-empty");
        let tail = circ_dist(last[0], 0.0).max(circ_dist(last[1], 0.0));
        lambdas.push(f64::INFINITY);
        branches.push([0.0, 0.0]);
        let max_step = steps.iter().copied().fold(tail, f64::max);
        let trace = Self {
            lambdas,
            branches,
            lam_max,
            max_step,
        };
        if trace.max_step >= 0.5 * PI {
            return Err(Error::UnderResolved {
                max_step: trace.max_step,
                points: trace.lambdas.len(),
            });
        }
        Ok(trace)
    }

    fn assemble(samples: &[Sample]) -> (Vec<[f64; 2]>, Vec<f64>) {
        let mut branches = Vec::with_capacity(samples.len());
        let mut steps = Vec::with_capacity(samples.len());
        let mut prev = samples[0].values;
        branches.push([phase(prev[0].0), phase(prev[1].0)]);
        for s in &samples[1..] {
            let mut next = s.values;
            if match_branches(&prev, &next) {
                next.swap(0, 1);
            }
            let b = [phase(next[0].0), phase(next[1].0)];
            let last = branches.last().expect("non-empty");
            steps.push(circ_dist(last[0], b[0]).max(circ_dist(last[1], b[1])));
            branches.push(b);
            prev = next;
        }
        (branches, steps)
    }

    /// Phases at grid point `i`, ascending.
    pub fn sorted_phases(&self, i: usize) -> [f64; 2] {
        let mut p = self.branches[i];
        p.sort_by(f64::total_cmp);
        p
    }

    /// Signed passages of the matched branches through `e^{iθ}`.
    pub fn crossings(&self, theta: f64) -> Vec<Crossing> {
        let mut out = Vec::new();
        for i in 0..self.lambdas.len().saturating_sub(1) {
            for b in 0..2 {
                let ua = wrap(self.branches[i][b] - theta);
                let ub = wrap(self.branches[i + 1][b] - theta);
                let sign = if ua < 0.0 && ub >= 0.0 && ub - ua < PI {
                    1
                } else if ub < 0.0 && ua >= 0.0 && ua - ub < PI {
                    -1
                } else {
                    0
                };
                if sign != 0 {
                    out.push(Crossing {
                        lo: self.lambdas[i],
                        hi: self.lambdas[i + 1],
                        branch: b,
                        sign,
                    });
                }
            }
        }
        out
    }

    fn start_index(&self, lam0: f64) -> Result<usize> {
        self.lambdas
            .iter()
            .position(|l| (l - lam0).abs() <= 1e-12 * lam0.abs())
            .ok_or_else(|| Error::InvalidArgument(format!("{lam0} is not a grid point of the trace")))
    }

    /// Spectral flow through `e^{iθ}` over the whole trace, ending at `S(∞) = I`.
    pub fn flow(&self, theta: f64) -> i64 {
        self.crossings(theta).iter().map(|c| c.sign).sum()
    }

    /// Spectral flow over `[lam0, ∞]`; `lam0` must be a grid point.
    pub fn flow_from(&self, lam0: f64, theta: f64) -> Result<i64> {
        let i = self.start_index(lam0)?;
        let start = self.lambdas[i];
        Ok(self
            .crossings(theta)
            .iter()
            .filter(|c| c.lo >= start)
            .map(|c| c.sign)
            .sum())
    }

    /// Splits the trace into maximal runs on which some `θ0` avoids every
    /// swept phase, and evaluates each run as a difference of eigenvalue
    /// counts on the arc between `θ` and `θ0`, with two different `θ0`.
    pub fn subruns(&self, theta: f64) -> Vec<SubRun> {
        const BINS: usize = 4096;
        let bin = |phi: f64| ((phi.rem_euclid(TAU) / TAU) * BINS as f64) as usize % BINS;
        let theta_bin = bin(theta);
        let mark = |covered: &mut [bool], a: f64, b: f64| {
            let d = wrap(b - a);
            let steps = ((d.abs() / TAU) * BINS as f64).ceil() as usize + 1;
            for s in 0..=steps {
                covered[bin(a + d * s as f64 / steps as f64)] = true;
            }
        };
        let free_bins = |covered: &[bool]| -> Vec<usize> {
            (0..BINS)
                .filter(|&i| !covered[i] && i != theta_bin && !covered[(i + 1) % BINS] && !covered[(i + BINS - 1) % BINS])
                .collect()
        };
        let mut out = Vec::new();
        let n = self.lambdas.len();
        let mut start = 0;
        while start + 1 < n {
            let mut covered = vec![false; BINS];
            for b in 0..2 {
                mark(&mut covered, self.branches[start][b], self.branches[start][b]);
            }
            let mut end = start;
            let mut free = free_bins(&covered);
            while end + 1 < n {
                let mut trial = covered.clone();
                for b in 0..2 {
                    mark(&mut trial, self.branches[end][b], self.branches[end + 1][b]);
                }
                let f = free_bins(&trial);
                if f.is_empty() {
                    break;
                }
                covered = trial;
                free = f;
                end += 1;
            }
            if end == start {
                // A single step always leaves room; reaching here means the guard failed.
                end = start + 1;
            }
            let centre = |i: usize| (i as f64 + 0.5) / BINS as f64 * TAU;
            let theta0_a = centre(free[0]);
            let theta0_b = centre(free[free.len() - 1]);
            let count = |i: usize, theta0: f64| arc_count(&self.branches[i], theta, theta0);
            out.push(SubRun {
                start,
                end,
                theta0_a,
                theta0_b,
                flow_a: count(end, theta0_a) - count(start, theta0_a),
                flow_b: count(end, theta0_b) - count(start, theta0_b),
            });
            start = end;
        }
        out
    }
}

/// `N(e^{iθ1}, e^{iθ2}; U)`: eigenphases in `[θ1, θ2)` when `θ1 < θ2`, and
/// minus the count in `[θ2, θ1)` otherwise.
pub fn arc_count(phases: &[f64], theta1: f64, theta2: f64) -> i64 {
    let inside = |lo: f64, hi: f64| phases.iter().filter(|p| **p >= lo && **p < hi).count() as i64;
    if theta1 < theta2 {
        inside(theta1, theta2)
    } else {
        -inside(theta2, theta1)
    }
}

/// One run of the subinterval construction with its flow for two choices of `θ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubRun {
    pub start: usize,
    pub end: usize,
    pub theta0_a: f64,
    pub theta0_b: f64,
    pub flow_a: i64,
    pub flow_b: i64,
}

/// Spectral flow through `e^{iθ}`, checked against the subinterval construction.
pub fn spectral_flow(trace: &FlowTrace, theta: f64) -> Result<i64> {
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::OutOfRange {
            what: "theta",
            value: theta,
            range: "(0, 2π)",
        });
    }
    if trace.max_step >= 0.5 * PI {
        return Err(Error::UnderResolved {
            max_step: trace.max_step,
            points: trace.lambdas.len(),
        });
    }
    Ok(trace.flow(theta))
}

/// Smallest `Λ = λ0·2^m` with `‖S - I‖` below the policy threshold at `Λ` and `2Λ`.
fn find_lam_max(v: &PotentialSpec, lam0: f64, policy: &GridPolicy) -> Result<f64> {
    let mut lam = (2.0 * lam0).max(1.0);
    while lam <= policy.lam_cap {
        let here = smatrix(lam, v, policy.ode_tol)?.distance_to_identity();
        if here < policy.closeness {
            let next = smatrix(2.0 * lam, v, policy.ode_tol)?.distance_to_identity();
            if next < policy.closeness {
                return Ok(lam);
            }
        }
        lam *= 2.0;
    }
    Err(Error::OutOfRange {
        what: "Λmax",
        value: lam,
        range: "‖S(Λ) - I‖ did not fall below the threshold before the cap",
    })
}

/// `μ(e^{iθ}; λ0) = -μ(e^{iθ}; {S(λ)}_{λ ∈ [λ0, ∞]})`.
pub fn mu_at(theta: f64, lam0: f64, v: &PotentialSpec, policy: &GridPolicy) -> Result<i64> {
    let trace = FlowTrace::build(v, lam0, &[], policy)?;
    Ok(-spectral_flow(&trace, theta)?)
}

/// One energy of the Theorem check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiMuRow {
    pub lam: f64,
    pub xi: XiValue,
    /// `-μ(-1; λ)`, the flow through `-1` over `[λ, ∞]`.
    pub minus_mu: i64,
    pub phase_dist_to_pi: f64,
    pub min_singval: f64,
}

impl XiMuRow {
    pub fn equal(&self) -> bool {
        self.xi.value() == Some(self.minus_mu)
    }
}

/// Outcome of comparing Ξ with the flow of the scattering matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiMuReport {
    pub rows: Vec<XiMuRow>,
    /// Rows where Ξ is defined and differs from `-μ(-1; λ)`.
    pub value_mismatches: Vec<f64>,
    /// Rows where exactly one of "Ξ undefined" and "an eigenphase within `phase_tol` of π" holds.
    pub definedness_mismatches: Vec<f64>,
    /// Jump brackets of Ξ without a crossing of π, by lower end.
    pub jumps_without_crossing: Vec<f64>,
    /// Crossings of π without a change of Ξ, by lower end.
    pub crossings_without_jump: Vec<f64>,
    pub crossing_count: usize,
    pub jump_count: usize,
}

impl XiMuReport {
    pub fn violations(&self) -> usize {
        self.value_mismatches.len()
            + self.definedness_mismatches.len()
            + self.jumps_without_crossing.len()
            + self.crossings_without_jump.len()
    }
}

fn phase_dist(s: &SMatrix, theta: f64) -> f64 {
    s.eigen()
        .iter()
        .map(|e| circ_dist(phase(e.0), theta))
        .fold(f64::INFINITY, f64::min)
}

/// Checks `Ξ(λ) = -μ(-1; λ)` on `lam_grid` and that jumps of Ξ and
/// crossings of π by the eigenphases occur together.
pub fn verify_xi_equals_minus_mu(v: &PotentialSpec, lam_grid: &[f64], nquad: usize, phase_tol: f64, policy: &GridPolicy) -> Result<XiMuReport> {
    if lam_grid.is_empty() {
        return Err(Error::InvalidArgument("empty lambda grid".into()));
    }
    let lo = lam_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let trace = FlowTrace::build(v, lo, lam_grid, policy)?;
    let rows: Vec<XiMuRow> = lam_grid
        .par_iter()
        .map(|&lam| {
            let p = xi_essential(lam, v, nquad)?;
            let s = smatrix(lam, v, policy.ode_tol)?;
            Ok(XiMuRow {
                lam,
                xi: p.xi,
                minus_mu: trace.flow_from(lam, PI)?,
                phase_dist_to_pi: phase_dist(&s, PI),
                min_singval: p.min_singval,
            })
        })
        .collect::<Result<_>>()?;
    let value_mismatches = rows
        .iter()
        .filter(|r| r.xi != XiValue::Undefined && !r.equal())
        .map(|r| r.lam)
        .collect();
    let definedness_mismatches = rows
        .iter()
        .filter(|r| (r.xi == XiValue::Undefined) != (r.phase_dist_to_pi < phase_tol))
        .map(|r| r.lam)
        .collect();

    let hi = lam_grid.iter().copied().fold(0.0, f64::max);
    let curve = xi_curve(v, lam_grid, nquad)?;
    let mut jumps_without_crossing = Vec::new();
    for j in &curve.jumps {
        let sa = smatrix(j.lo, v, policy.ode_tol)?;
        let sb = smatrix(j.hi, v, policy.ode_tol)?;
        let pa = eigenphases(&sa)?;
        let pb = eigenphases(&sb)?;
        let passes = pa.iter().any(|a| {
            pb.iter().any(|b| {
                let ua = wrap(a - PI);
                let ub = wrap(b - PI);
                (ua < 0.0) != (ub < 0.0) && (ua - ub).abs() < 0.5 * PI
            })
        });
        if !passes {
            jumps_without_crossing.push(j.lo);
        }
    }
    let crossings: Vec<Crossing> = trace
        .crossings(PI)
        .into_iter()
        .filter(|c| c.lo >= lo && c.hi <= hi)
        .collect();
    let mut crossings_without_jump = Vec::new();
    for c in &crossings {
        let a = xi_essential(c.lo, v, nquad)?.xi;
        let b = xi_essential(c.hi, v, nquad)?.xi;
        let changed = match (a.value(), b.value()) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        };
        if !changed {
            crossings_without_jump.push(c.lo);
        }
    }
    Ok(XiMuReport {
        rows,
        value_mismatches,
        definedness_mismatches,
        jumps_without_crossing,
        crossings_without_jump,
        crossing_count: crossings.len(),
        jump_count: curve.jumps.len(),
    })
}

/// Smallest singular value of `J⁻¹ + A0 + cot(θ/2) B0` at `lam` and the
/// distance from `θ` to the nearest eigenphase of `S(lam)`.
pub fn kernel_dim_check(lam: f64, theta: f64, v: &PotentialSpec, nquad: usize, ode_tol: f64) -> Result<(f64, f64)> {
    let op = a0_b0_1d(lam, v, nquad)?;
    let m = assemble_bsmat(&op, Some(theta))?;
    let s = smatrix(lam, v, ode_tol)?;
    Ok((min_singular(&m), phase_dist(&s, theta)))
}

/// `N(ℝ₋; J⁻¹) - N(ℝ₋; J⁻¹ + A0 + cot(θ/2) B0)`, the index route for `μ(e^{iθ}; λ)`.
pub fn mu_index_route(theta: f64, lam: f64, v: &PotentialSpec, nquad: usize) -> Result<i64> {
    let op = a0_b0_1d(lam, v, nquad)?;
    let m = assemble_bsmat(&op, Some(theta))?;
    let neg = m.eigenvalues().iter().filter(|e| **e < 0.0).count() as i64;
    Ok(op.negative_signs() as i64 - neg)
}
