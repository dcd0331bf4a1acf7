//! Limiting Birman-Schwinger operators `A0(λ) = Re T0(λ+i0)` and
//! `B0(λ) = Im T0(λ+i0)` on Nyström nodes.
//!
//! The free outgoing resolvent kernel in one dimension is
//! `i e^{ik|x-y|} / (2k)`; for a radial channel ℓ in three dimensions it is
//! `Ŝ_ℓ(kr<) [Ĉ_ℓ(kr>) + i Ŝ_ℓ(kr>)] / k`. The real parts have a derivative
//! jump on the diagonal, so `A0` is discretized by product integration,
//! which keeps spectral convergence. The imaginary parts are smooth and
//! separable and use plain sampled Nyström.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::DenseSelfAdjoint;
use crate::linalg::{sym_eigenvalues, symmetrize, TridiagonalLu};
use crate::potential::PotentialSpec;
use crate::quadrature::{gauss_legendre_on, CompositeRule};
use crate::special::{riccati_c, riccati_s};

/// Smallest accepted number of Nyström nodes.
pub const MIN_NQUAD: usize = 32;
/// Nodes per Gauss-Legendre panel.
const PANEL_NODES: usize = 16;
/// Gauss points per sub-interval in the product weights.
const PRODUCT_SUB: usize = 24;

/// How the diagonal kink of the `A0` kernel is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NystromRule {
    /// Product integration against the panel interpolants.
    #[default]
    Product,
    /// Kernel sampled at the nodes, `W^{1/2} K W^{1/2}`.
    Sampled,
}

/// `A0(λ)` and `B0(λ)` on a set of quadrature nodes.
#[derive(Debug, Clone)]
pub struct BSOperator {
    pub a0: DMatrix<f64>,
    pub b0: DMatrix<f64>,
    pub lam: f64,
    pub k: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Angular momentum for the radial three-dimensional reduction.
    pub channel: Option<usize>,
    /// `sign V` at the nodes (`+1` where `V` vanishes).
    pub signs: Vec<f64>,
}

impl BSOperator {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// Number of negative entries of `J`.
    pub fn negative_signs(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0.0).count()
    }
}

/// Composite rule on `breaks` with about `PANEL_NODES` nodes per panel.
pub fn panel_rule(breaks: &[f64], nquad: usize) -> CompositeRule {
    let lens: Vec<f64> = breaks.windows(2).map(|w| w[1] - w[0]).collect();
    let span: f64 = lens.iter().sum();
    let panels = nquad.div_ceil(PANEL_NODES).max(lens.len());
    let mut fine = vec![breaks[0]];
    for (i, len) in lens.iter().enumerate() {
        let m = ((len / span) * panels as f64).round().max(1.0) as usize;
        for s in 1..=m {
            fine.push(breaks[i] + len * s as f64 / m as f64);
        }
    }
    let min = (nquad / (fine.len() - 1)).clamp(4, PANEL_NODES);
    CompositeRule::new(&fine, nquad, min)
}

fn check_inputs(lam: f64, nquad: usize) -> Result<()> {
    if nquad < MIN_NQUAD {
        return Err(Error::BadQuadrature {
            nquad,
            min: MIN_NQUAD,
        });
    }
    if !(lam > 0.0) || !lam.is_finite() {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lam,
            range: "(0, ∞)",
        });
    }
    Ok(())
}

fn signs_of(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect()
}

/// `√w_a g_a W_ab g_b / √w_b`, symmetrized.
fn product_matrix<K: Fn(f64, f64) -> f64>(rule: &CompositeRule, g: &[f64], kernel: K) -> DMatrix<f64> {
    let w = rule.product_weights(kernel, PRODUCT_SUB);
    let n = rule.len();
    let sw: Vec<f64> = rule.weights.iter().map(|x| x.sqrt()).collect();
    let mut m = DMatrix::from_fn(n, n, |a, b| sw[a] * g[a] * w[(a, b)] * g[b] / sw[b]);
    symmetrize(&mut m);
    m
}

/// `√w_a g_a K(x_a, x_b) g_b √w_b`.
fn sampled_matrix<K: Fn(f64, f64) -> f64>(rule: &CompositeRule, g: &[f64], kernel: K) -> DMatrix<f64> {
    let n = rule.len();
    let s: Vec<f64> = (0..n).map(|a| rule.weights[a].sqrt() * g[a]).collect();
    let mut m = DMatrix::from_fn(n, n, |a, b| s[a] * kernel(rule.nodes[a], rule.nodes[b]) * s[b]);
    symmetrize(&mut m);
    m
}

/// One-dimensional `A0(λ)`, `B0(λ)` with the default product rule.
pub fn a0_b0_1d(lam: f64, v: &PotentialSpec, nquad: usize) -> Result<BSOperator> {
    a0_b0_1d_with(lam, v, nquad, NystromRule::Product)
}

pub fn a0_b0_1d_with(lam: f64, v: &PotentialSpec, nquad: usize, rule: NystromRule) -> Result<BSOperator> {
    check_inputs(lam, nquad)?;
    let k = lam.sqrt();
    let quad = panel_rule(&v.line_breaks(), nquad);
    let vals: Vec<f64> = quad.nodes.iter().map(|x| v.eval(*x)).collect();
    let g: Vec<f64> = vals.iter().map(|x| x.abs().sqrt()).collect();
    let re = move |x: f64, y: f64| -(k * (x - y).abs()).sin() / (2.0 * k);
    let im = move |x: f64, y: f64| (k * (x - y)).cos() / (2.0 * k);
    let a0 = match rule {
        NystromRule::Product => product_matrix(&quad, &g, re),
        NystromRule::Sampled => sampled_matrix(&quad, &g, re),
    };
    let b0 = sampled_matrix(&quad, &g, im);
    Ok(BSOperator {
        a0,
        b0,
        lam,
        k,
        signs: signs_of(&vals),
        nodes: quad.nodes,
        weights: quad.weights,
        channel: None,
    })
}

/// Channel-ℓ operators for a radial potential in three dimensions, on `[0, R]`.
pub fn a0_b0_radial_d3(lam: f64, v: &PotentialSpec, ell: usize, nquad: usize) -> Result<BSOperator> {
    check_inputs(lam, nquad)?;
    let k = lam.sqrt();
    let quad = panel_rule(&v.radial_breaks(), nquad);
    let vals: Vec<f64> = quad.nodes.iter().map(|r| v.eval(*r)).collect();
    let g: Vec<f64> = vals.iter().map(|x| x.abs().sqrt()).collect();
    let re = move |r: f64, s: f64| {
        let (lo, hi) = if r < s { (r, s) } else { (s, r) };
        riccati_s(ell, k * lo) * riccati_c(ell, k * hi) / k
    };
    let a0 = product_matrix(&quad, &g, re);
    let n = quad.len();
    let u: Vec<f64> = (0..n)
        .map(|a| quad.weights[a].sqrt() * g[a] * riccati_s(ell, k * quad.nodes[a]) / k.sqrt())
        .collect();
    let b0 = DMatrix::from_fn(n, n, |a, b| u[a] * u[b]);
    Ok(BSOperator {
        a0,
        b0,
        lam,
        k,
        signs: signs_of(&vals),
        nodes: quad.nodes,
        weights: quad.weights,
        channel: Some(ell),
    })
}

/// Geometry of the lattice used by the ε-oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleGeometry {
    /// The whole line, Dirichlet at `±L`.
    Line,
    /// The half-line with Dirichlet at 0 (the s-wave channel).
    HalfLine,
}

/// Settings of the ε → 0 lattice oracle for `T0(λ+i0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsOracle {
    /// Lattice spacing.
    pub h: f64,
    /// Multipliers of `λ` giving the ε sequence, decreasing.
    pub eps_factors: Vec<f64>,
    /// Number of decay lengths `1/Im k` of padding outside the support.
    pub pad: f64,
    pub geometry: OracleGeometry,
    /// Double the box once and fail if the result moves by more than `10·target`.
    pub probe: Option<f64>,
}

impl Default for EpsOracle {
    fn default() -> Self {
        Self {
            h: 0.02,
            eps_factors: vec![0.2, 0.1, 0.05, 0.025],
            pad: 18.0,
            geometry: OracleGeometry::Line,
            probe: None,
        }
    }
}

/// Richardson extrapolation to ε = 0 for a halving sequence, error `O(ε^m)` with `m = len`.
fn richardson(t: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let coeffs: &[f64] = match t.len() {
        1 => &[1.0],
        2 => &[-1.0, 2.0],
        3 => &[1.0 / 3.0, -2.0, 8.0 / 3.0],
        _ => &[-1.0 / 21.0, 14.0 / 21.0, -56.0 / 21.0, 64.0 / 21.0],
    };
    let tail = &t[t.len() - coeffs.len()..];
    let mut out = DMatrix::zeros(t[0].nrows(), t[0].ncols());
    for (m, c) in tail.iter().zip(coeffs) {
        out += m * Complex64::new(*c, 0.0);
    }
    out
}

/// Sampled kernel of the lattice resolvent `(H0d - λ - iε)⁻¹ / h` at the nodes.
fn lattice_kernel(lam: f64, eps: f64, nodes: &[f64], h: f64, half_width: f64, geometry: OracleGeometry) -> Result<DMatrix<Complex64>> {
    let (x0, span) = match geometry {
        OracleGeometry::Line => (-half_width, 2.0 * half_width),
        OracleGeometry::HalfLine => (0.0, half_width),
    };
    let n_lat = ((span / h).round() as usize).saturating_sub(1);
    let h = span / (n_lat + 1) as f64;
    let z = Complex64::new(lam, eps);
    let off = Complex64::new(-1.0 / (h * h), 0.0);
    let diag = vec![Complex64::new(2.0 / (h * h), 0.0) - z; n_lat];
    let lu = TridiagonalLu::factor(&vec![off; n_lat - 1], &diag, &vec![off; n_lat - 1])?;

    // Node a sits between lattice points j0 and j0+1 at fraction f (index -1 and n_lat are the walls).
    let locate: Vec<(i64, f64)> = nodes
        .iter()
        .map(|x| {
            let pos = (x - x0) / h - 1.0;
            let j0 = pos.floor();
            (j0 as i64, pos - j0)
        })
        .collect();
    let mut cols: Vec<i64> = locate
        .iter()
        .flat_map(|(j, _)| [j - 1, *j, j + 1, j + 2])
        .filter(|c| *c >= 0 && (*c as usize) < n_lat)
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let solved: Vec<Vec<Complex64>> = cols
        .par_iter()
        .map(|&c| {
            let mut rhs = vec![Complex64::new(0.0, 0.0); n_lat];
            rhs[c as usize] = Complex64::new(1.0 / h, 0.0);
            lu.solve_in_place(&mut rhs);
            rhs
        })
        .collect();
    let u = |row: i64, col: i64| -> Complex64 {
        if row < 0 || row as usize >= n_lat || col < 0 || col as usize >= n_lat {
            return Complex64::new(0.0, 0.0);
        }
        let ci = cols.binary_search(&col).expect("column was solved");
        solved[ci][row as usize]
    };

    let n = nodes.len();
    let mut k = DMatrix::zeros(n, n);
    for a in 0..n {
        let (ja, fa) = locate[a];
        let col = |c: i64| u(ja, c) * (1.0 - fa) + u(ja + 1, c) * fa;
        for b in 0..n {
            let (jb, fb) = locate[b];
            k[(a, b)] = if a == b {
                u(ja, ja) * (1.0 - fa) + u(ja + 1, ja + 1) * fa
            } else if ja != jb {
                col(jb) * (1.0 - fb) + col(jb + 1) * fb
            } else if nodes[b] > nodes[a] {
                // Same cell: extrapolate from the side of x_b so the kink is not straddled.
                col(jb + 1) + (col(jb + 2) - col(jb + 1)) * (fb - 1.0)
            } else {
                col(jb) + (col(jb) - col(jb - 1)) * fb
            };
        }
    }
    Ok(k)
}

/// Lattice estimate of `T0(λ+i0)` on the given nodes, from `T0(λ+iε)` at a
/// halving sequence of ε with Richardson extrapolation.
pub fn t0_eps_oracle(lam: f64, v: &PotentialSpec, nodes: &[f64], weights: &[f64], cfg: &EpsOracle) -> Result<DMatrix<Complex64>> {
    if nodes.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            left: nodes.len(),
            right: weights.len(),
        });
    }
    if !(lam > 0.0) {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lam,
            range: "(0, ∞)",
        });
    }
    if cfg.eps_factors.is_empty() || cfg.eps_factors.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("eps factors must be a decreasing sequence".into()));
    }
    let n = nodes.len();
    let s: Vec<f64> = (0..n)
        .map(|a| (v.eval(nodes[a]).abs() * weights[a]).sqrt())
        .collect();
    if s.iter().all(|x| *x == 0.0) {
        return Ok(DMatrix::zeros(n, n));
    }
    let k = lam.sqrt();
    let eps_min = cfg.eps_factors.last().copied().unwrap() * lam;
    let im_k = eps_min / (2.0 * k);
    let reach = nodes.iter().fold(v.support_radius(), |m, x| m.max(x.abs()));
    let half_width = reach + cfg.pad / (2.0 * im_k);

    let run = |half_width: f64| -> Result<DMatrix<Complex64>> {
        let t: Vec<DMatrix<Complex64>> = cfg
            .eps_factors
            .iter()
            .map(|f| lattice_kernel(lam, f * lam, nodes, cfg.h, half_width, cfg.geometry))
            .collect::<Result<_>>()?;
        let kern = richardson(&t);
        Ok(DMatrix::from_fn(n, n, |a, b| kern[(a, b)] * (s[a] * s[b])))
    };
    let out = run(half_width)?;
    if let Some(target) = cfg.probe {
        let wide = run(2.0 * half_width)?;
        let change = crate::linalg::complex_norm(&(&wide - &out));
        if change > 10.0 * target {
            return Err(Error::BoxTooSmall {
                change,
                allowed: 10.0 * target,
            });
        }
    }
    Ok(out)
}

/// `J⁻¹ + A0(λ) + cot(θ/2) B0(λ)`; without `theta` the `B0` term is dropped.
pub fn assemble_bsmat(op: &BSOperator, theta: Option<f64>) -> Result<DenseSelfAdjoint> {
    let mut m = op.a0.clone();
    for (i, s) in op.signs.iter().enumerate() {
        m[(i, i)] += s;
    }
    if let Some(theta) = theta {
        let c = cot_half(theta)?;
        if c != 0.0 {
            m += &op.b0 * c;
        }
    }
    symmetrize(&mut m);
    DenseSelfAdjoint::new(m, None, "J+A0")
}

/// `cot(θ/2)` for `θ ∈ (0, 2π)`, exactly zero at `θ = π`.
pub fn cot_half(theta: f64) -> Result<f64> {
    use std::f64::consts::PI;
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::ThetaDegenerate { theta });
    }
    if theta == PI {
        return Ok(0.0);
    }
    let c = 1.0 / (0.5 * theta).tan();
    if c.abs() > 1e12 {
        return Err(Error::ThetaDegenerate { theta });
    }
    Ok(c)
}

/// Smallest singular value of a symmetric matrix.
pub fn min_singular(m: &DenseSelfAdjoint) -> f64 {
    m.eigenvalues().iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()))
}

/// Energies scanned for the singular set of `J⁻¹ + A0(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSet {
    pub lambdas: Vec<f64>,
    pub min_singvals: Vec<f64>,
    pub tol_sing: f64,
}

impl SingularSet {
    pub fn flags(&self) -> Vec<bool> {
        self.min_singvals.iter().map(|s| *s < self.tol_sing).collect()
    }

    pub fn flagged(&self) -> Vec<f64> {
        self.lambdas
            .iter()
            .zip(&self.min_singvals)
            .filter(|(_, s)| **s < self.tol_sing)
            .map(|(l, _)| *l)
            .collect()
    }
}

pub fn scan_singular_set(v: &PotentialSpec, lam_grid: &[f64], nquad: usize, tol_sing: f64) -> Result<SingularSet> {
    if lam_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("lambda grid must be strictly increasing".into()));
    }
    let min_singvals = lam_grid
        .par_iter()
        .map(|&lam| {
            let op = a0_b0_1d(lam, v, nquad)?;
            Ok(min_singular(&assemble_bsmat(&op, None)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SingularSet {
        lambdas: lam_grid.to_vec(),
        min_singvals,
        tol_sing,
    })
}

/// Eigenvalues of `A0` and `B0`, ascending.
pub fn spectra(op: &BSOperator) -> (Vec<f64>, Vec<f64>) {
    (sym_eigenvalues(&op.a0), sym_eigenvalues(&op.b0))
}

/// `(1/16π²) ∫∫ |V(x)||V(y)| / |x-y|² dx dy` over ℝ³ for radial `V`.
///
/// The angular integrals are done analytically, leaving
/// `(1/2) ∫∫ r s |V(r)||V(s)| ln((r+s)/|r-s|) dr ds`. The inner integral is
/// split at `s = r` and graded cubically towards the logarithmic singularity.
pub fn hs_bound_d3(v: &PotentialSpec, nquad: usize) -> Result<f64> {
    if nquad < MIN_NQUAD {
        return Err(Error::BadQuadrature {
            nquad,
            min: MIN_NQUAD,
        });
    }
    if v.is_zero() {
        return Ok(0.0);
    }
    if v.rho() <= 2.0 {
        return Err(Error::DivergentBound {
            reason: format!("decay exponent {} does not exceed 2", v.rho()),
        });
    }
    let outer = panel_rule(&v.radial_breaks(), nquad);
    let breaks = v.radial_breaks();
    let inner_n = 24;
    let f = |s: f64| s * v.eval(s).abs();
    let inner = |r: f64| -> f64 {
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let pieces: Vec<(f64, f64)> = if r > a && r < b { vec![(a, r), (r, b)] } else { vec![(a, b)] };
            for (lo, hi) in pieces {
                let len = hi - lo;
                let at_lo = (lo - r).abs() < 1e-15 * (1.0 + r);
                let at_hi = (hi - r).abs() < 1e-15 * (1.0 + r);
                let (u, wu) = gauss_legendre_on(inner_n, 0.0, 1.0);
                for (t, wt) in u.iter().zip(&wu) {
                    // Grade towards the singular end with s = end ± len·t³.
                    let (s, jac) = if at_hi {
                        (hi - len * t * t * t, 3.0 * len * t * t)
                    } else if at_lo {
                        (lo + len * t * t * t, 3.0 * len * t * t)
                    } else {
                        (lo + len * t, len)
                    };
                    let d = (r - s).abs();
                    if d == 0.0 {
                        continue;
                    }
                    total += wt * jac * f(s) * ((r + s) / d).ln();
                }
            }
        }
        total
    };
    let value: f64 = outer
        .nodes
        .par_iter()
        .zip(outer.weights.par_iter())
        .map(|(r, w)| w * f(*r) * inner(*r))
        .sum();
    Ok(0.5 * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_norm;

    fn gaussian() -> PotentialSpec {
        PotentialSpec::gaussian(3.0, 1.0).unwrap()
    }

    #[test]
    fn zero_potential_gives_zero_operators() {
        let op = a0_b0_1d(1.0, &PotentialSpec::zero(), 32).unwrap();
        assert_eq!(op.a0.abs().max(), 0.0);
        assert_eq!(op.b0.abs().max(), 0.0);
        let m = assemble_bsmat(&op, None).unwrap();
        assert!(m.eigenvalues().iter().all(|e| (e.abs() - 1.0).abs() < 1e-15));
        let op = a0_b0_radial_d3(1.0, &PotentialSpec::zero(), 0, 32).unwrap();
        assert_eq!(op.a0.abs().max() + op.b0.abs().max(), 0.0);
    }

    #[test]
    fn too_few_nodes() {
        assert!(matches!(a0_b0_1d(1.0, &gaussian(), 16), Err(Error::BadQuadrature { .. })));
    }

    #[test]
    fn sampled_a0_has_zero_diagonal() {
        let op = a0_b0_1d_with(1.0, &gaussian(), 48, NystromRule::Sampled).unwrap();
        assert!((0..op.dim()).all(|i| op.a0[(i, i)] == 0.0));
    }

    #[test]
    fn operators_are_symmetric_and_b0_nonnegative() {
        for lam in [0.3, 1.0, 7.0] {
            let op = a0_b0_1d(lam, &gaussian(), 64).unwrap();
            assert!(crate::linalg::asymmetry(&op.a0) <= 1e-12);
            assert!(crate::linalg::asymmetry(&op.b0) <= 1e-12);
            assert!(sym_eigenvalues(&op.b0)[0] > -1e-10);
        }
    }

    #[test]
    fn product_rule_converges_spectrally() {
        let top = |n| {
            let e = sym_eigenvalues(&a0_b0_1d(1.0, &gaussian(), n).unwrap().a0);
            [e[0], e[1], e[e.len() - 2], e[e.len() - 1]]
        };
        let (a, b) = (top(64), top(128));
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-8, "{diff:e}");
    }

    #[test]
    fn s_wave_b0_is_rank_one() {
        let v = PotentialSpec::exponential(2.0, 1.0).unwrap();
        let lam = 1.7;
        let op = a0_b0_radial_d3(lam, &v, 0, 96).unwrap();
        let e = sym_eigenvalues(&op.b0);
        let top = e[e.len() - 1];
        assert!(e[e.len() - 2].abs() < 1e-8 * top);
        let k = lam.sqrt();
        let rule = CompositeRule::new(&[0.0, 10.0, v.support_radius()], 600, 100);
        let exact = rule.integrate(|r| v.eval(r).abs() * (k * r).sin().powi(2)) / k;
        assert!((top - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn theta_handling() {
        let op = a0_b0_1d(1.0, &gaussian(), 48).unwrap();
        let pi = std::f64::consts::PI;
        let at_pi = assemble_bsmat(&op, Some(pi)).unwrap();
        let plain = assemble_bsmat(&op, None).unwrap();
        assert_eq!(at_pi.matrix(), plain.matrix());
        let quarter = assemble_bsmat(&op, Some(pi / 2.0)).unwrap();
        let expected = plain.matrix() + &op.b0;
        assert!((quarter.matrix() - expected).abs().max() < 1e-14);
        assert!(matches!(assemble_bsmat(&op, Some(0.0)), Err(Error::ThetaDegenerate { .. })));
        assert!(matches!(assemble_bsmat(&op, Some(1e-13)), Err(Error::ThetaDegenerate { .. })));
    }

    #[test]
    fn high_energy_decay() {
        let v = gaussian();
        let norms: Vec<(f64, f64)> = [10.0, 40.0, 160.0]
            .iter()
            .map(|&lam| {
                let op = a0_b0_1d(lam, &v, 128).unwrap();
                (sym_norm(&op.a0), sym_norm(&op.b0))
            })
            .collect();
        assert!(norms.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1));
        let scan = scan_singular_set(&v, &[40.0, 80.0], 128, 1e-6).unwrap();
        assert!(scan.flagged().is_empty());
        let zero = scan_singular_set(&PotentialSpec::zero(), &[0.5, 1.0], 32, 1e-6).unwrap();
        assert!(zero.min_singvals.iter().all(|s| (s - 1.0).abs() < 1e-15));
    }

    #[test]
    fn eps_oracle_matches_sampled_nystrom() {
        let v = gaussian();
        let op = a0_b0_1d_with(1.0, &v, 64, NystromRule::Sampled).unwrap();
        let t = t0_eps_oracle(1.0, &v, &op.nodes, &op.weights, &EpsOracle::default()).unwrap();
        let re = t.map(|c| c.re);
        let im = t.map(|c| c.im);
        assert!(sym_norm(&(&re - &op.a0)) < 1e-3);
        assert!(sym_norm(&(&im - &op.b0)) < 1e-3);
    }

    #[test]
    fn hs_bound_scales_quadratically() {
        let b1 = hs_bound_d3(&PotentialSpec::square_well(1.0, 1.0).unwrap(), 64).unwrap();
        let b3 = hs_bound_d3(&PotentialSpec::square_well(3.0, 1.0).unwrap(), 64).unwrap();
        assert!((b3 / b1 - 9.0).abs() < 1e-10);
        assert_eq!(hs_bound_d3(&PotentialSpec::zero(), 64).unwrap(), 0.0);
        let b_hi = hs_bound_d3(&PotentialSpec::square_well(1.0, 1.0).unwrap(), 256).unwrap();
        assert!((b1 - b_hi).abs() < 1e-6 * b_hi, "{b1} {b_hi}");
    }
}
