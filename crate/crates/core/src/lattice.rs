//! Finite-difference Schrödinger operators on a Dirichlet box.
//!
//! Everything here is finite dimensional, so the index of the spectral
//! projections reduces to counting, and the Birman-Schwinger identities
//! become exact integer statements that the tests check without tolerance.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{complex_norm, inertia, sym_eigen, sym_eigenvalues, ShiftedSolver};
use crate::potential::{PotentialSpec, SUPPORT_CUTOFF};
use crate::projpair::{index_pair, OrthProjection, DEFAULT_GAP, DEFAULT_TOL};

/// Uniform grid of `n` interior points on `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("grid endpoints must satisfy a < b, got ({a}, {b})")));
        }
        if n < 3 {
            return Err(Error::InvalidArgument(format!("grid needs at least 3 points, got {n}")));
        }
        Ok(Self {
            a,
            b,
            n,
            h: (b - a) / (n + 1) as f64,
        })
    }

    /// The grid with spacing `h` on `(-half_width, half_width)`, `h` rounded to fit.
    pub fn symmetric_with_spacing(half_width: f64, h: f64) -> Result<Self> {
        let n = ((2.0 * half_width / h).round() as usize).saturating_sub(1);
        Self::new(-half_width, half_width, n)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Point `j` for `j` in `0..n`.
    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.a + (j + 1) as f64 * self.h
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }
}

/// Real symmetric matrix standing in for a self-adjoint operator.
#[derive(Debug, Clone)]
pub struct DenseSelfAdjoint {
    matrix: DMatrix<f64>,
    grid: Option<Grid1D>,
    label: String,
    eigenvalues: OnceLock<Vec<f64>>,
}

impl DenseSelfAdjoint {
    pub fn new(matrix: DMatrix<f64>, grid: Option<Grid1D>, label: impl Into<String>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let scale = matrix.abs().max();
        let asym = crate::linalg::asymmetry(&matrix);
        if asym > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument(format!("matrix asymmetry {asym:e} is too large")));
        }
        Ok(Self {
            matrix,
            grid,
            label: label.into(),
            eigenvalues: OnceLock::new(),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        self.grid.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues, computed once.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eigenvalues.get_or_init(|| sym_eigenvalues(&self.matrix))
    }

    pub fn norm(&self) -> f64 {
        let ev = self.eigenvalues();
        match (ev.first(), ev.last()) {
            (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
            _ => 0.0,
        }
    }

    fn check_threshold(&self, lam: f64) -> Result<()> {
        let tol = 1e-9 * self.norm();
        let ev = self.eigenvalues();
        let i = ev.partition_point(|v| *v < lam);
        let near = [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|j| ev.get(j))
            .map(|v| (v - lam).abs())
            .fold(f64::INFINITY, f64::min);
        if near <= tol {
            return Err(Error::EigenvalueAtThreshold { lam, distance: near });
        }
        Ok(())
    }
}

/// Dirichlet Laplacian `-d²/dx²` by the three-point stencil.
pub fn build_h0(grid: &Grid1D) -> DenseSelfAdjoint {
    let n = grid.n();
    let h2 = grid.h() * grid.h();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = 2.0 / h2;
        if j + 1 < n {
            m[(j, j + 1)] = -1.0 / h2;
            m[(j + 1, j)] = -1.0 / h2;
        }
    }
    DenseSelfAdjoint::new(m, Some(*grid), "H0").expect("stencil is symmetric")
}

/// `H0 + diag(V(x_j))`.
pub fn build_h(grid: &Grid1D, v: &PotentialSpec) -> Result<DenseSelfAdjoint> {
    let half = grid.a().abs().min(grid.b().abs());
    if !v.is_zero() && v.support_radius() > half {
        return Err(Error::SupportExceedsBox {
            support: v.support_radius(),
            half_width: half,
        });
    }
    let mut m = build_h0(grid).matrix;
    for j in 0..grid.n() {
        m[(j, j)] += v.eval(grid.x(j));
    }
    DenseSelfAdjoint::new(m, Some(*grid), format!("H[{}]", v.label()))
}

/// Number of eigenvalues strictly below `lam`.
pub fn counting(m: &DenseSelfAdjoint, lam: f64) -> Result<usize> {
    m.check_threshold(lam)?;
    Ok(m.eigenvalues().partition_point(|v| *v < lam))
}

/// Spectral projection `E((-∞, lam); M)`.
pub fn spectral_projection(m: &DenseSelfAdjoint, lam: f64) -> Result<OrthProjection> {
    m.check_threshold(lam)?;
    let (values, vectors) = sym_eigen(m.matrix());
    let r = values.partition_point(|v| *v < lam);
    let cols = vectors.columns(0, r).into_owned();
    Ok(OrthProjection::from_orthonormal_columns(&cols))
}

/// `Ξ(λ; H, H0) = index(E(H0), E(H))` from the two spectral projections.
pub fn xi_direct(h0d: &DenseSelfAdjoint, hd: &DenseSelfAdjoint, lam: f64) -> Result<i64> {
    if h0d.dim() != hd.dim() {
        return Err(Error::DimensionMismatch {
            left: h0d.dim(),
            right: hd.dim(),
        });
    }
    let p = spectral_projection(h0d, lam)?;
    let q = spectral_projection(hd, lam)?;
    Ok(index_pair(&p, &q, DEFAULT_TOL, DEFAULT_GAP)?.value)
}

/// `N((-∞,λ); H0) - N((-∞,λ); H)` by counting alone.
pub fn xi_counting(h0d: &DenseSelfAdjoint, hd: &DenseSelfAdjoint, lam: f64) -> Result<i64> {
    Ok(counting(h0d, lam)? as i64 - counting(hd, lam)? as i64)
}

/// `G R(z) G*` restricted to the grid points where `V` is not negligible.
#[derive(Debug, Clone)]
pub struct SandwichedResolvent {
    pub matrix: DMatrix<Complex64>,
    pub z: Complex64,
    /// Grid indices of the support points, in order.
    pub support: Vec<usize>,
    /// Quadrature weight of each support point (the grid spacing).
    pub weights: Vec<f64>,
    /// `sign V` at each support point.
    pub signs: Vec<f64>,
}

impl SandwichedResolvent {
    pub fn dim(&self) -> usize {
        self.support.len()
    }

    /// Real part, which is the whole matrix for real `z` below the spectrum.
    pub fn real(&self) -> DMatrix<f64> {
        self.matrix.map(|c| c.re)
    }

    /// The sign matrix `J` as a dense diagonal.
    pub fn j(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, k| if i == k { self.signs[i] } else { 0.0 })
    }
}

fn support_indices(grid: &Grid1D, v: &PotentialSpec) -> (Vec<usize>, Vec<f64>) {
    let vals: Vec<f64> = (0..grid.n()).map(|j| v.eval(grid.x(j))).collect();
    let max = vals.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let idx: Vec<usize> = (0..grid.n())
        .filter(|&j| max > 0.0 && vals[j].abs() > SUPPORT_CUTOFF * max)
        .collect();
    let sel = idx.iter().map(|&j| vals[j]).collect();
    (idx, sel)
}

fn sandwich(m: &DenseSelfAdjoint, v: &PotentialSpec, z: Complex64) -> Result<SandwichedResolvent> {
    let grid = m
        .grid()
        .ok_or_else(|| Error::InvalidArgument("operator has no grid".into()))?;
    let (support, vals) = support_indices(grid, v);
    let d = support.len();
    let mut out = DMatrix::zeros(d, d);
    if d > 0 {
        if z.im == 0.0 {
            let dist = m
                .eigenvalues()
                .iter()
                .map(|e| (e - z.re).abs())
                .fold(f64::INFINITY, f64::min);
            if dist <= 1e-12 * m.norm() {
                return Err(Error::SingularShift { z });
            }
        }
        let solver = ShiftedSolver::new(m.matrix(), z)?;
        let g: Vec<f64> = vals.iter().map(|x| x.abs().sqrt()).collect();
        let n = m.dim();
        for (c, &j) in support.iter().enumerate() {
            let mut rhs = vec![Complex64::new(0.0, 0.0); n];
            rhs[j] = Complex64::new(1.0, 0.0);
            let col = solver.solve(&rhs);
            if col.iter().any(|x| !x.is_finite()) {
                return Err(Error::SingularShift { z });
            }
            for (r, &i) in support.iter().enumerate() {
                out[(r, c)] = col[i] * (g[r] * g[c]);
            }
        }
    }
    Ok(SandwichedResolvent {
        matrix: out,
        z,
        support,
        weights: vec![grid.h(); d],
        signs: vals.iter().map(|x| if *x < 0.0 { -1.0 } else { 1.0 }).collect(),
    })
}

/// `T0(z) = G (H0d - z)^{-1} G*` by column solves.
pub fn t0_matrix(h0d: &DenseSelfAdjoint, v: &PotentialSpec, z: Complex64) -> Result<SandwichedResolvent> {
    sandwich(h0d, v, z)
}

/// `T(z) = G (Hd - z)^{-1} G*`.
pub fn t_matrix(hd: &DenseSelfAdjoint, v: &PotentialSpec, z: Complex64) -> Result<SandwichedResolvent> {
    sandwich(hd, v, z)
}

/// `‖(J⁻¹ + T0(z))(J - J T(z) J) - I‖`, which vanishes when `Hd = H0d + V`.
pub fn resolvent_identity_residual(
    h0d: &DenseSelfAdjoint,
    hd: &DenseSelfAdjoint,
    v: &PotentialSpec,
    z: Complex64,
) -> Result<f64> {
    let t0 = t0_matrix(h0d, v, z)?;
    let t = t_matrix(hd, v, z)?;
    let d = t0.dim();
    if d == 0 {
        return Ok(0.0);
    }
    let j = t0.j().map(|x| Complex64::new(x, 0.0));
    let left = &j + &t0.matrix;
    let right = &j - &j * &t.matrix * &j;
    let prod = left * right - DMatrix::<Complex64>::identity(d, d);
    Ok(complex_norm(&prod))
}

/// Zero tolerance for inertia counts of `J + T0`.
fn zero_tol(m: &DMatrix<f64>) -> f64 {
    1e-13 * (1.0 + m.abs().max())
}

/// `N(ℝ₋; J) - N(ℝ₋; J + T0(λ))`, which equals the count of eigenvalues of
/// `Hd` below `λ` minus that of `H0d`, for real `λ` off both spectra.
pub fn bs_count_difference(h0d: &DenseSelfAdjoint, v: &PotentialSpec, lam: f64) -> Result<i64> {
    let t0 = t0_matrix(h0d, v, Complex64::new(lam, 0.0))?;
    let j = t0.j();
    let m = &j + t0.real();
    let neg_j = t0.signs.iter().filter(|s| **s < 0.0).count() as i64;
    Ok(neg_j - inertia(&m, zero_tol(&m)).negative as i64)
}

/// Index route on the lattice: `-index(E(ℝ₋; J⁻¹), E(ℝ₋; J⁻¹+T0(λ)))`.
pub fn xi_birman_schwinger(h0d: &DenseSelfAdjoint, v: &PotentialSpec, lam: f64) -> Result<i64> {
    let t0 = t0_matrix(h0d, v, Complex64::new(lam, 0.0))?;
    let j = t0.j();
    let m = DenseSelfAdjoint::new(&j + t0.real(), None, "J+T0")?;
    let jm = DenseSelfAdjoint::new(j, None, "J")?;
    let p = spectral_projection(&m, 0.0)?;
    let q = spectral_projection(&jm, 0.0)?;
    Ok(-index_pair(&q, &p, DEFAULT_TOL, DEFAULT_GAP)?.value)
}

/// Eigenvalues of `Hd` below zero, located as the energies where an
/// eigenvalue of `J + T0(λ)` crosses zero.
///
/// The negative count of `J + T0(λ)` changes by one at each crossing, so the
/// search bisects on that integer rather than tracking individual branches.
pub fn bs_bound_states(h0d: &DenseSelfAdjoint, v: &PotentialSpec) -> Result<Vec<f64>> {
    if v.is_zero() {
        return Ok(Vec::new());
    }
    let grid = h0d
        .grid()
        .ok_or_else(|| Error::InvalidArgument("operator has no grid".into()))?;
    let floor = (0..grid.n()).map(|j| v.eval(grid.x(j))).fold(0.0_f64, f64::min);
    let top = h0d.eigenvalues()[0].min(0.0);
    let hi = if top < 0.0 { top } else { -1e-12 };
    let lo = floor - 1.0;
    let count = |lam: f64| -> Result<i64> { bs_count_difference(h0d, v, lam) };
    let c_lo = count(lo)?;
    let c_hi = count(hi)?;
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi, c_lo, c_hi)];
    while let Some((a, b, ca, cb)) = stack.pop() {
        if ca == cb {
            continue;
        }
        if b - a <= 1e-10 {
            for _ in 0..(cb - ca) {
                out.push(0.5 * (a + b));
            }
            continue;
        }
        let mid = 0.5 * (a + b);
        let cm = count(mid)?;
        stack.push((a, mid, ca, cm));
        stack.push((mid, b, cm, cb));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Rank bounds `-rank V₋ ≤ Ξ ≤ rank V₊` from the grid values of `V`.
pub fn rank_bounds(grid: &Grid1D, v: &PotentialSpec) -> (i64, i64) {
    let (_, vals) = support_indices(grid, v);
    let plus = vals.iter().filter(|x| **x > 0.0).count() as i64;
    let minus = vals.iter().filter(|x| **x < 0.0).count() as i64;
    (-minus, plus)
}

/// Gap bounds `-N((-∞,-a); V) ≤ Ξ(λ) ≤ N((a,∞); V)`, valid when
/// `[λ-a, λ+a]` avoids the spectrum of `H0d`. Returns `None` otherwise.
pub fn gap_bounds(h0d: &DenseSelfAdjoint, v: &PotentialSpec, lam: f64, a: f64) -> Option<(i64, i64)> {
    let ev = h0d.eigenvalues();
    if ev.iter().any(|e| (e - lam).abs() <= a) {
        return None;
    }
    let grid = h0d.grid()?;
    let vals: Vec<f64> = (0..grid.n()).map(|j| v.eval(grid.x(j))).collect();
    let lo = vals.iter().filter(|x| **x < -a).count() as i64;
    let hi = vals.iter().filter(|x| **x > a).count() as i64;
    Some((-lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_norm;

    fn well_grid() -> Grid1D {
        Grid1D::new(-20.0, 20.0, 800).unwrap()
    }

    #[test]
    fn small_free_spectrum() {
        let g = Grid1D::new(0.0, 4.0, 3).unwrap();
        assert_eq!(g.h(), 1.0);
        let h0 = build_h0(&g);
        let ev = h0.eigenvalues();
        let s = 2.0_f64.sqrt();
        for (a, b) in ev.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn lowest_box_mode() {
        let g = Grid1D::new(-20.0, 20.0, 200).unwrap();
        let e = build_h0(&g).eigenvalues()[0];
        let target = (std::f64::consts::PI / 40.0).powi(2);
        assert!(e > 0.0 && ((e - target) / target).abs() < 0.01);
    }

    #[test]
    fn counting_matches_closed_form() {
        let g = Grid1D::new(-1.0, 1.0, 60).unwrap();
        let h0 = build_h0(&g);
        let h = g.h();
        let lam = 3.0 / (h * h);
        let expected = (1..=60)
            .filter(|j| {
                let s = (*j as f64 * std::f64::consts::PI / (2.0 * 61.0)).sin();
                4.0 * s * s < 3.0
            })
            .count();
        assert_eq!(counting(&h0, lam).unwrap(), expected);
        assert_eq!(counting(&h0, -1.0).unwrap(), 0);
        assert_eq!(counting(&h0, 1e9).unwrap(), 60);
        let e = h0.eigenvalues()[4];
        assert!(matches!(counting(&h0, e), Err(Error::EigenvalueAtThreshold { .. })));
    }

    #[test]
    fn constant_shift_moves_spectrum() {
        let g = Grid1D::new(-5.0, 5.0, 50).unwrap();
        let c = PotentialSpec::square_well(0.7, 5.0).unwrap();
        let h = build_h(&g, &c).unwrap();
        let h0 = build_h0(&g);
        for (a, b) in h.eigenvalues().iter().zip(h0.eigenvalues()) {
            assert!((a - (b - 0.7)).abs() < 1e-12);
        }
    }

    #[test]
    fn support_must_fit_the_box() {
        let g = Grid1D::new(-2.0, 2.0, 50).unwrap();
        let v = PotentialSpec::gaussian(1.0, 1.0).unwrap();
        assert!(matches!(build_h(&g, &v), Err(Error::SupportExceedsBox { .. })));
    }

    #[test]
    fn square_well_single_bound_state() {
        let g = well_grid();
        let v = PotentialSpec::square_well(2.0, 1.0).unwrap();
        let h = build_h(&g, &v).unwrap();
        let h0 = build_h0(&g);
        assert_eq!(counting(&h, -1e-6).unwrap(), 1);
        assert_eq!(xi_direct(&h0, &h, -1e-6).unwrap(), -1);
    }

    #[test]
    fn projection_commutes_and_has_counting_rank() {
        let g = Grid1D::new(-3.0, 3.0, 40).unwrap();
        let v = PotentialSpec::gaussian(4.0, 0.5).unwrap();
        let h = build_h(&g, &v).unwrap();
        let p = spectral_projection(&h, 3.0).unwrap();
        assert_eq!(p.rank(), counting(&h, 3.0).unwrap());
        let comm = h.matrix() * p.matrix() - p.matrix() * h.matrix();
        assert!(comm.abs().max() < 1e-8 * h.norm());
    }

    #[test]
    fn rank_one_sandwich_is_resolvent_diagonal() {
        let g = Grid1D::new(-1.0, 1.0, 9).unwrap();
        let x4 = g.x(4);
        let v = PotentialSpec::new("spike", move |x| if (x - x4).abs() < 1e-9 { -3.0 } else { 0.0 }, 2.0, 3.0 * 4.0, 1.0, vec![])
            .unwrap();
        let h0 = build_h0(&g);
        let z = Complex64::new(0.3, 0.2);
        let t = t0_matrix(&h0, &v, z).unwrap();
        assert_eq!(t.dim(), 1);
        let shifted = h0.matrix().map(|x| Complex64::new(x, 0.0)) - DMatrix::identity(9, 9) * z;
        let inv = shifted.try_inverse().unwrap();
        assert!((t.matrix[(0, 0)] - inv[(4, 4)] * 3.0).norm() < 1e-12);
    }

    #[test]
    fn t0_below_spectrum_is_positive_for_attractive_wells() {
        let g = Grid1D::new(-8.0, 8.0, 200).unwrap();
        let v = PotentialSpec::gaussian(1.0, 1.0).unwrap();
        let h0 = build_h0(&g);
        let t = t0_matrix(&h0, &v, Complex64::new(-0.5, 0.0)).unwrap();
        let re = t.real();
        assert!(crate::linalg::asymmetry(&re) <= 1e-10 * sym_norm(&re));
        assert!(sym_eigenvalues(&re)[0] > -1e-12);
        let empty = t0_matrix(&h0, &PotentialSpec::zero(), Complex64::new(-0.5, 0.0)).unwrap();
        assert_eq!(empty.dim(), 0);
    }

    #[test]
    fn resolvent_identity_and_negative_control() {
        let g = Grid1D::new(-10.0, 10.0, 200).unwrap();
        let v = PotentialSpec::bumps("mixed", vec![(-2.0, -1.0, 0.6), (1.5, 1.0, 0.8)]).unwrap();
        let h0 = build_h0(&g);
        let h = build_h(&g, &v).unwrap();
        for z in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(-2.0, 0.0)] {
            assert!(resolvent_identity_residual(&h0, &h, &v, z).unwrap() < 1e-8);
        }
        let corrupted = build_h(&g, &v.scaled(1.1)).unwrap();
        let r = resolvent_identity_residual(&h0, &corrupted, &v, Complex64::new(0.0, 1.0)).unwrap();
        assert!(r > 1e-4);
    }

    #[test]
    fn one_point_identity() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        let x2 = g.x(2);
        let v = PotentialSpec::new("spike", move |x| if (x - x2).abs() < 1e-9 { -1.0 } else { 0.0 }, 2.0, 4.0, 1.0, vec![])
            .unwrap();
        let h0 = build_h0(&g);
        let h = build_h(&g, &v).unwrap();
        assert!(resolvent_identity_residual(&h0, &h, &v, Complex64::new(0.0, 1.0)).unwrap() < 1e-10);
    }

    #[test]
    fn poschl_teller_has_one_bound_state() {
        let g = well_grid();
        let v = PotentialSpec::poschl_teller(2.0).unwrap();
        let h0 = build_h0(&g);
        let states = bs_bound_states(&h0, &v).unwrap();
        assert_eq!(states.len(), 1);
        assert!((states[0] + 1.0).abs() < 1e-3);
        let h = build_h(&g, &v).unwrap();
        assert!((states[0] - h.eigenvalues()[0]).abs() < 1e-6);
        assert!(bs_bound_states(&h0, &PotentialSpec::zero()).unwrap().is_empty());
    }

    #[test]
    fn repulsive_potential_has_nonnegative_index() {
        let g = Grid1D::new(-10.0, 10.0, 200).unwrap();
        let v = PotentialSpec::gaussian(-3.0, 1.0).unwrap();
        let h0 = build_h0(&g);
        let h = build_h(&g, &v).unwrap();
        for lam in [-0.5, 0.013, 0.7, 2.1, 9.3] {
            if let Ok(x) = xi_counting(&h0, &h, lam) {
                assert!(x >= 0, "lam={lam}: {x}");
            }
        }
    }

    #[test]
    fn index_route_matches_counting() {
        let grid = Grid1D::new(-20.0, 20.0, 400).unwrap();
        let h0 = build_h0(&grid);
        for v in [
            PotentialSpec::square_well(3.0, 1.5).unwrap(),
            PotentialSpec::bumps("mixed", vec![(-4.0, -1.0, 0.8), (2.0, 1.5, 0.6)]).unwrap(),
        ] {
            let hd = build_h(&grid, &v).unwrap();
            for lam in [-0.5, -0.1] {
                let direct = xi_direct(&h0, &hd, lam).unwrap();
                assert!(direct < 0);
                assert_eq!(direct, xi_counting(&h0, &hd, lam).unwrap());
                assert_eq!(direct, xi_birman_schwinger(&h0, &v, lam).unwrap());
                assert_eq!(direct, -bs_count_difference(&h0, &v, lam).unwrap());
            }
        }
    }
}
