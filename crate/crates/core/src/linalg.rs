//! Dense and tridiagonal linear algebra shared by the index routes.
//!
//! Eigenvalue counts are the backbone of every route, so two independent
//! counters are kept: a full symmetric eigensolve, and a Sylvester inertia
//! count from a Bunch-Kaufman LDLᵀ factorization. The latter is cheaper and
//! is what the Birman-Schwinger sweeps use inside bisection loops.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric matrix in ascending order.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending, eigenvectors as columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Spectral norm of a symmetric matrix.
pub fn sym_norm(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m)
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Spectral norm of a general complex matrix.
pub fn complex_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(*v))
}

/// Spectral norm of a general real matrix.
pub fn real_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(*v))
}

/// Largest entry of `|M - Mᵀ|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in (j + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Numbers of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

/// Sylvester inertia of a real symmetric matrix via Bunch-Kaufman LDLᵀ.
///
/// Pivots with magnitude at most `zero_tol` are reported as zero.
pub fn inertia(m: &DMatrix<f64>, zero_tol: f64) -> Inertia {
    let n = m.nrows();
    let mut a: Vec<f64> = m.as_slice().to_vec();
    let idx = |i: usize, j: usize| i + j * n;
    let alpha = (1.0 + 17.0_f64.sqrt()) / 8.0;
    let mut out = Inertia::default();

    let swap = |a: &mut Vec<f64>, p: usize, q: usize| {
        if p == q {
            return;
        }
        for j in 0..n {
            a.swap(idx(p, j), idx(q, j));
        }
        for i in 0..n {
            a.swap(idx(i, p), idx(i, q));
        }
    };

    let mut k = 0;
    while k < n {
        let akk = a[idx(k, k)].abs();
        let (mut r, mut colmax) = (k, 0.0_f64);
        for i in (k + 1)..n {
            let v = a[idx(i, k)].abs();
            if v > colmax {
                colmax = v;
                r = i;
            }
        }
        if akk.max(colmax) == 0.0 {
            out.zero += 1;
            k += 1;
            continue;
        }

        let mut two_by_two = false;
        if akk < alpha * colmax {
            let mut rowmax = 0.0_f64;
            for j in k..n {
                if j != r {
                    rowmax = rowmax.max(a[idx(r, j)].abs());
                }
            }
            if akk * rowmax >= alpha * colmax * colmax {
                // 1x1 pivot at k
            } else if a[idx(r, r)].abs() >= alpha * rowmax {
                swap(&mut a, k, r);
            } else {
                swap(&mut a, k + 1, r);
                two_by_two = true;
            }
        }

        if !two_by_two {
            let d = a[idx(k, k)];
            classify(d, zero_tol, &mut out);
            if d != 0.0 {
                for j in (k + 1)..n {
                    let l = a[idx(j, k)] / d;
                    if l == 0.0 {
                        continue;
                    }
                    for i in (k + 1)..n {
                        a[idx(i, j)] -= a[idx(i, k)] * l;
                    }
                }
            }
            k += 1;
        } else {
            let d11 = a[idx(k, k)];
            let d21 = a[idx(k + 1, k)];
            let d22 = a[idx(k + 1, k + 1)];
            let det = d11 * d22 - d21 * d21;
            if det < 0.0 {
                out.negative += 1;
                out.positive += 1;
            } else {
                // Bunch-Kaufman never selects a singular 2x2 block; both
                // eigenvalues share the sign of the trace otherwise.
                let tr = d11 + d22;
                classify(0.5 * tr, zero_tol, &mut out);
                classify(0.5 * tr, zero_tol, &mut out);
            }
            let (i11, i12, i22) = (d22 / det, -d21 / det, d11 / det);
            for j in (k + 2)..n {
                let (cj1, cj2) = (a[idx(j, k)], a[idx(j, k + 1)]);
                let l1 = cj1 * i11 + cj2 * i12;
                let l2 = cj1 * i12 + cj2 * i22;
                for i in (k + 2)..n {
                    a[idx(i, j)] -= a[idx(i, k)] * l1 + a[idx(i, k + 1)] * l2;
                }
            }
            k += 2;
        }
    }
    out
}

fn classify(d: f64, zero_tol: f64, out: &mut Inertia) {
    if d.abs() <= zero_tol {
        out.zero += 1;
    } else if d < 0.0 {
        out.negative += 1;
    } else {
        out.positive += 1;
    }
}

/// LU factorization of a complex tridiagonal matrix with partial pivoting.
///
/// Follows the LAPACK `gttrf`/`gtts2` layout: row interchanges introduce a
/// second superdiagonal `du2`.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    dl: Vec<Complex64>,
    d: Vec<Complex64>,
    du: Vec<Complex64>,
    du2: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    /// Factor the matrix with subdiagonal `sub`, diagonal `diag` and superdiagonal `sup`.
    pub fn factor(sub: &[Complex64], diag: &[Complex64], sup: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: sub.len() + 1,
            });
        }
        let scale = diag
            .iter()
            .chain(sub)
            .chain(sup)
            .fold(0.0_f64, |acc, v| acc.max(v.norm()));
        let tiny = f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE);

        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![Complex64::new(0.0, 0.0); n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];

        for i in 0..n.saturating_sub(1) {
            if d[i].norm() >= dl[i].norm() {
                if d[i].norm() <= tiny {
                    return Err(Error::SingularShift { z: d[i] });
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1].norm() <= tiny {
            return Err(Error::SingularShift { z: d[n - 1] });
        }
        Ok(Self {
            dl,
            d,
            du,
            du2,
            swapped,
        })
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Solve in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                let bi = b[i];
                b[i + 1] -= self.dl[i] * bi;
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Returns `(sub, diag, sup)` if the matrix has no entries beyond the first off-diagonals.
pub fn as_tridiagonal(m: &DMatrix<f64>) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..n {
            if i.abs_diff(j) > 1 && m[(i, j)] != 0.0 {
                return None;
            }
        }
    }
    let diag = (0..n).map(|i| m[(i, i)]).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| m[(i + 1, i)]).collect();
    let sup = (0..n.saturating_sub(1)).map(|i| m[(i, i + 1)]).collect();
    Some((sub, diag, sup))
}

/// Solver for `(M - z) X = B` that picks the tridiagonal path when possible.
pub enum ShiftedSolver {
    Tridiagonal(TridiagonalLu),
    Dense(nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl ShiftedSolver {
    pub fn new(m: &DMatrix<f64>, z: Complex64) -> Result<Self> {
        if let Some((sub, diag, sup)) = as_tridiagonal(m) {
            let c = |v: &Vec<f64>| v.iter().map(|x| Complex64::new(*x, 0.0)).collect::<Vec<_>>();
            let diag: Vec<Complex64> = diag.iter().map(|x| Complex64::new(*x, 0.0) - z).collect();
            if diag.len() == 1 {
                if diag[0].norm() == 0.0 {
                    return Err(Error::SingularShift { z });
                }
                return Ok(Self::Tridiagonal(TridiagonalLu::factor(&[], &diag, &[])?));
            }
            let lu = TridiagonalLu::factor(&c(&sub), &diag, &c(&sup))
                .map_err(|_| Error::SingularShift { z })?;
            return Ok(Self::Tridiagonal(lu));
        }
        let n = m.nrows();
        let shifted = DMatrix::from_fn(n, n, |i, j| {
            let v = Complex64::new(m[(i, j)], 0.0);
            if i == j {
                v - z
            } else {
                v
            }
        });
        let lu = shifted.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularShift { z });
        }
        Ok(Self::Dense(lu))
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        match self {
            Self::Tridiagonal(lu) => lu.solve(b),
            Self::Dense(lu) => {
                let rhs = DVector::from_column_slice(b);
                lu.solve(&rhs)
                    .map(|x| x.as_slice().to_vec())
                    .unwrap_or_else(|| vec![Complex64::new(f64::NAN, 0.0); b.len()])
            }
        }
    }
}
