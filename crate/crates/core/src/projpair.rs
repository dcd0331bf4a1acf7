//! Pairs of orthogonal projections in finite dimension and their index.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{real_norm, sym_eigenvalues};

/// Default half-width of the eigenvalue clusters at ±1.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default outer edge of the band that must be empty around the clusters.
pub const DEFAULT_GAP: f64 = 1e-3;

const IDEMPOTENCY_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

/// A self-adjoint idempotent matrix together with its idempotency residual.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthProjection {
    matrix: DMatrix<f64>,
    idem_residual: f64,
    rank: usize,
}

impl OrthProjection {
    /// Validates `m` as an orthogonal projection.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let asym = (&m - m.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotAProjection {
                reason: format!("asymmetry {asym:e}"),
            });
        }
        let idem_residual = real_norm(&(&m * &m - &m));
        if idem_residual > IDEMPOTENCY_TOL {
            return Err(Error::NotAProjection {
                reason: format!("idempotency residual {idem_residual:e}"),
            });
        }
        let ev = sym_eigenvalues(&m);
        if let Some(bad) = ev
            .iter()
            .find(|v| **v < -IDEMPOTENCY_TOL || **v > 1.0 + IDEMPOTENCY_TOL)
        {
            return Err(Error::NotAProjection {
                reason: format!("eigenvalue {bad} outside [0, 1]"),
            });
        }
        let rank = m.trace().round() as usize;
        let by_count = ev.iter().filter(|v| **v >= 0.5).count();
        if rank != by_count {
            return Err(Error::NotAProjection {
                reason: format!("trace rank {rank} disagrees with eigenvalue count {by_count}"),
            });
        }
        Ok(Self {
            matrix: m,
            idem_residual,
            rank,
        })
    }

    /// Builds `V Vᵀ` from orthonormal columns without re-validating.
    pub(crate) fn from_orthonormal_columns(v: &DMatrix<f64>) -> Self {
        let matrix = v * v.transpose();
        let idem_residual = if v.ncols() == 0 {
            0.0
        } else {
            real_norm(&(&matrix * &matrix - &matrix))
        };
        Self {
            matrix,
            idem_residual,
            rank: v.ncols(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
            idem_residual: 0.0,
            rank: 0,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn idem_residual(&self) -> f64 {
        self.idem_residual
    }
}

/// Orthogonal projection onto the span of `basis`, all vectors of length `dim`.
pub fn make_projection(dim: usize, basis: &[DVector<f64>]) -> Result<OrthProjection> {
    if basis.is_empty() {
        return Ok(OrthProjection::zero(dim));
    }
    if let Some(v) = basis.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: v.len(),
        });
    }
    if basis.len() > dim {
        return Err(Error::DegenerateBasis {
            smallest_singular: 0.0,
        });
    }
    let b = DMatrix::from_columns(basis);
    let svd = b.svd(true, false);
    let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest <= 1e-10 {
        return Err(Error::DegenerateBasis {
            smallest_singular: smallest,
        });
    }
    let u = svd.u.expect("left singular vectors requested");
    let q = u.columns(0, basis.len()).into_owned();
    let mut p = OrthProjection::from_orthonormal_columns(&q);
    crate::linalg::symmetrize(&mut p.matrix);
    Ok(p)
}

/// Certificate for `index(P, Q) = dim Ker(P-Q-I) - dim Ker(P-Q+I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexCertificate {
    pub value: i64,
    pub plus_cluster: usize,
    pub minus_cluster: usize,
    pub gap_ok: bool,
    pub spectrum: Vec<f64>,
}

fn certificate(p: &OrthProjection, q: &OrthProjection, tol: f64, gap: f64) -> Result<IndexCertificate> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    if !(0.0 < tol && tol < gap && gap < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < tol < gap < 1, got tol={tol}, gap={gap}"
        )));
    }
    let spectrum = sym_eigenvalues(&(p.matrix() - q.matrix()));
    let plus_cluster = spectrum.iter().filter(|v| **v >= 1.0 - tol).count();
    let minus_cluster = spectrum.iter().filter(|v| **v <= -1.0 + tol).count();
    let ambiguous = spectrum
        .iter()
        .filter(|v| {
            let a = v.abs();
            a > 1.0 - gap && a < 1.0 - tol
        })
        .count();
    Ok(IndexCertificate {
        value: plus_cluster as i64 - minus_cluster as i64,
        plus_cluster,
        minus_cluster,
        gap_ok: ambiguous == 0,
        spectrum,
    })
}

/// Index of the pair `(P, Q)` from the ±1 clusters of `P - Q`.
///
/// Fails with `NotFredholm` when an eigenvalue sits in the band between
/// `1 - gap` and `1 - tol` (in absolute value).
pub fn index_pair(p: &OrthProjection, q: &OrthProjection, tol: f64, gap: f64) -> Result<IndexCertificate> {
    let cert = certificate(p, q, tol, gap)?;
    if !cert.gap_ok {
        let ambiguous = cert
            .spectrum
            .iter()
            .filter(|v| v.abs() > 1.0 - gap && v.abs() < 1.0 - tol)
            .count();
        return Err(Error::NotFredholm { ambiguous });
    }
    Ok(cert)
}

/// One cluster of `|λ|` values of `P - Q` with its signed multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingEntry {
    pub lambda: f64,
    pub plus: usize,
    pub minus: usize,
}

/// Clusters of eigenvalue magnitudes in `(tol, 1 - tol)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PairingReport {
    pub entries: Vec<PairingEntry>,
}

impl PairingReport {
    /// Clusters whose `+λ` and `-λ` multiplicities differ.
    pub fn violations(&self) -> Vec<&PairingEntry> {
        self.entries.iter().filter(|e| e.plus != e.minus).collect()
    }
}

/// Groups the eigenvalues of `P - Q` with magnitude in `(tol, 1 - tol)` by
/// magnitude (clusters chained at spacing `tol`) and counts each sign.
pub fn eigenvalue_pairing_report(p: &OrthProjection, q: &OrthProjection, tol: f64) -> Result<PairingReport> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let spectrum = sym_eigenvalues(&(p.matrix() - q.matrix()));
    let mut mags: Vec<(f64, bool)> = spectrum
        .iter()
        .filter(|v| v.abs() > tol && v.abs() < 1.0 - tol)
        .map(|v| (v.abs(), *v > 0.0))
        .collect();
    mags.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut report = PairingReport::default();
    let mut i = 0;
    while i < mags.len() {
        let mut j = i + 1;
        while j < mags.len() && mags[j].0 - mags[j - 1].0 <= tol {
            j += 1;
        }
        let group = &mags[i..j];
        let plus = group.iter().filter(|m| m.1).count();
        report.entries.push(PairingEntry {
            lambda: group.iter().map(|m| m.0).sum::<f64>() / group.len() as f64,
            plus,
            minus: group.len() - plus,
        });
        i = j;
    }
    Ok(report)
}

/// Result of comparing `Tr(P - Q)` with the index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCheck {
    pub trace: f64,
    pub index: i64,
    pub agree: bool,
}

pub fn trace_index_check(p: &OrthProjection, q: &OrthProjection, tol: f64) -> Result<TraceCheck> {
    let cert = index_pair(p, q, tol, (10.0 * tol).min(0.5))?;
    let trace = p.matrix().trace() - q.matrix().trace();
    Ok(TraceCheck {
        trace,
        index: cert.value,
        agree: (trace - cert.value as f64).abs() < 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_vectors(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<DVector<f64>> {
        (0..count)
            .map(|_| DVector::from_fn(dim, |_, _| StandardNormal.sample(rng)))
            .collect()
    }

    fn diag(entries: &[f64]) -> OrthProjection {
        OrthProjection::from_matrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries))).unwrap()
    }

    #[test]
    fn empty_and_coordinate_projections() {
        let p = make_projection(3, &[]).unwrap();
        assert_eq!(p.rank(), 0);
        assert_eq!(p.matrix(), &DMatrix::zeros(3, 3));
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        let p = make_projection(2, &[e1]).unwrap();
        assert!((p.matrix() - DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])).abs().max() < 1e-15);
    }

    #[test]
    fn degenerate_basis_is_rejected() {
        let v = DVector::from_column_slice(&[1.0, 2.0, 3.0]);
        let err = make_projection(3, &[v.clone(), 2.0 * v]).unwrap_err();
        assert!(matches!(err, Error::DegenerateBasis { .. }));
    }

    #[test]
    fn rejects_non_projections() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        assert!(OrthProjection::from_matrix(m).is_err());
        let m = DMatrix::from_diagonal(&DVector::from_column_slice(&[0.5, 1.0]));
        assert!(OrthProjection::from_matrix(m).is_err());
    }

    #[test]
    fn coordinate_index_and_trace() {
        let c = index_pair(&diag(&[1.0, 0.0, 0.0]), &diag(&[0.0, 0.0, 0.0]), DEFAULT_TOL, DEFAULT_GAP).unwrap();
        assert_eq!(c.value, 1);
        let t = trace_index_check(&diag(&[1.0, 1.0, 0.0]), &diag(&[1.0, 0.0, 0.0]), DEFAULT_TOL).unwrap();
        assert_eq!(t.index, 1);
        assert!((t.trace - 1.0).abs() < 1e-15 && t.agree);
        let p = diag(&[0.0, 1.0]);
        let t = trace_index_check(&p, &p, DEFAULT_TOL).unwrap();
        assert_eq!((t.trace, t.index, t.agree), (0.0, 0, true));
    }

    #[test]
    fn two_by_two_pairing() {
        let alpha = 0.7_f64;
        let p = diag(&[1.0, 0.0]);
        let q = make_projection(2, &[DVector::from_column_slice(&[alpha.cos(), alpha.sin()])]).unwrap();
        let report = eigenvalue_pairing_report(&p, &q, 1e-9).unwrap();
        assert_eq!(report.entries.len(), 1);
        let e = &report.entries[0];
        assert!((e.lambda - alpha.sin()).abs() < 1e-12);
        assert_eq!((e.plus, e.minus), (1, 1));
        assert!(eigenvalue_pairing_report(&p, &p, 1e-9).unwrap().entries.is_empty());
    }

    #[test]
    fn ambiguous_band_is_not_fredholm() {
        let alpha = 1.55_f64;
        let p = diag(&[1.0, 0.0]);
        let q = make_projection(2, &[DVector::from_column_slice(&[alpha.cos(), alpha.sin()])]).unwrap();
        // sin(1.55) ≈ 0.99978 sits between 1 - gap and 1 - tol.
        assert!(matches!(
            index_pair(&p, &q, DEFAULT_TOL, DEFAULT_GAP),
            Err(Error::NotFredholm { ambiguous: 2 })
        ));
    }

    #[test]
    fn random_pairs_obey_rank_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = make_projection(5, &random_vectors(&mut rng, 5, 2)).unwrap();
        assert!((p.matrix().trace() - 2.0).abs() < 1e-10);
        let p = make_projection(8, &random_vectors(&mut rng, 8, 3)).unwrap();
        let q = make_projection(8, &random_vectors(&mut rng, 8, 1)).unwrap();
        assert_eq!(index_pair(&p, &q, DEFAULT_TOL, DEFAULT_GAP).unwrap().value, 2);
        assert_eq!(index_pair(&q, &p, DEFAULT_TOL, DEFAULT_GAP).unwrap().value, -2);
    }
}
