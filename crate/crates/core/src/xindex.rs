//! The index `Ξ(λ; H, H0)` on the continuous spectrum,
//! `Ξ = N(ℝ₋; J⁻¹ + A0(λ)) - N(ℝ₋; J⁻¹)`, with curves, jump localization
//! and the accompanying bounds.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsop::{a0_b0_1d, a0_b0_radial_d3, assemble_bsmat, BSOperator};
use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::potential::PotentialSpec;

/// Width to which jump brackets are narrowed.
pub const BRACKET_WIDTH: f64 = 1e-4;
/// Relative singularity tolerance: `tol_sing = TOL_SING_REL·(1 + ‖A0‖)`.
pub const TOL_SING_REL: f64 = 1e-6;

/// Ξ at one energy, or a marker that `J⁻¹ + A0(λ)` is numerically singular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XiValue {
    Defined(i64),
    Undefined,
}

impl XiValue {
    pub fn value(&self) -> Option<i64> {
        match self {
            Self::Defined(v) => Some(*v),
            Self::Undefined => None,
        }
    }
}

/// Ξ at one energy with the data needed by the bound checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiPoint {
    pub lam: f64,
    pub xi: XiValue,
    pub min_singval: f64,
    pub tol_sing: f64,
    pub norm_a0: f64,
    /// `-N([1,∞); A0(λ))`.
    pub lower: i64,
    /// `N((-∞,-1]; A0(λ))`.
    pub upper: i64,
    /// `-rank V₋` on the nodes.
    pub rank_lower: i64,
    /// `rank V₊` on the nodes.
    pub rank_upper: i64,
}

/// Evaluates Ξ from an assembled operator pair.
pub fn xi_from_operator(op: &BSOperator) -> Result<XiPoint> {
    let m = assemble_bsmat(op, None)?;
    let ev = m.eigenvalues();
    let min_singval = ev.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
    let a0_ev = sym_eigenvalues(&op.a0);
    let norm_a0 = a0_ev.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let tol_sing = TOL_SING_REL * (1.0 + norm_a0);
    let neg_j = op.negative_signs() as i64;
    let xi = if min_singval < tol_sing {
        XiValue::Undefined
    } else {
        XiValue::Defined(ev.iter().filter(|v| **v < 0.0).count() as i64 - neg_j)
    };
    let pos_j = op.signs.len() as i64 - neg_j;
    Ok(XiPoint {
        lam: op.lam,
        xi,
        min_singval,
        tol_sing,
        norm_a0,
        lower: -(a0_ev.iter().filter(|v| **v >= 1.0).count() as i64),
        upper: a0_ev.iter().filter(|v| **v <= -1.0).count() as i64,
        rank_lower: -neg_j,
        rank_upper: pos_j,
    })
}

/// `Ξ(λ; H0 + V, H0)` for `λ > 0` from the one-dimensional `A0(λ)`.
pub fn xi_essential(lam: f64, v: &PotentialSpec, nquad: usize) -> Result<XiPoint> {
    xi_from_operator(&a0_b0_1d(lam, v, nquad)?)
}

/// A located jump of Ξ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub lo: f64,
    pub hi: f64,
    pub left: i64,
    pub right: i64,
}

impl Jump {
    pub fn size(&self) -> i64 {
        self.right - self.left
    }

    pub fn contains(&self, lam: f64) -> bool {
        lam >= self.lo && lam <= self.hi
    }
}

/// Ξ sampled on a grid, with refined jump brackets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiCurve {
    pub points: Vec<XiPoint>,
    pub jumps: Vec<Jump>,
}

impl XiCurve {
    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lam).collect()
    }

    pub fn fredholm_flags(&self) -> Vec<bool> {
        self.points.iter().map(|p| p.xi != XiValue::Undefined).collect()
    }

    /// True when every defined grid value equals the value implied by the
    /// jumps to its left, starting from the first defined value.
    pub fn consistent_with_jumps(&self) -> bool {
        let mut defined = self.points.iter().filter_map(|p| p.xi.value().map(|x| (p.lam, x)));
        let Some((_, start)) = defined.next() else {
            return true;
        };
        defined.all(|(lam, x)| {
            let acc: i64 = self.jumps.iter().filter(|j| j.hi <= lam).map(Jump::size).sum();
            x == start + acc
        })
    }
}

/// Evaluates Ξ on `lam_grid` and narrows every change of value to a bracket
/// of width `BRACKET_WIDTH`.
pub fn xi_curve(v: &PotentialSpec, lam_grid: &[f64], nquad: usize) -> Result<XiCurve> {
    if lam_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("lambda grid must be strictly increasing".into()));
    }
    if let Some(bad) = lam_grid.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: *bad,
            range: "(0, ∞)",
        });
    }
    let points: Vec<XiPoint> = lam_grid
        .par_iter()
        .map(|&lam| xi_essential(lam, v, nquad))
        .collect::<Result<_>>()?;
    let defined: Vec<(f64, i64)> = points
        .iter()
        .filter_map(|p| p.xi.value().map(|x| (p.lam, x)))
        .collect();
    let brackets: Vec<(f64, f64, i64, i64)> = defined
        .windows(2)
        .filter(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0, w[1].0, w[0].1, w[1].1))
        .collect();
    let jumps: Vec<Vec<Jump>> = brackets
        .par_iter()
        .map(|&(a, b, xa, xb)| refine_bracket(v, nquad, a, b, xa, xb))
        .collect::<Result<_>>()?;
    Ok(XiCurve {
        points,
        jumps: jumps.into_iter().flatten().collect(),
    })
}

/// Defined value of Ξ near `lam`, nudging off numerically singular points.
fn defined_near(v: &PotentialSpec, nquad: usize, lam: f64, a: f64, b: f64) -> Result<Option<(f64, i64)>> {
    let width = b - a;
    for nudge in [0.0, 0.137, -0.137, 0.291, -0.291] {
        let x = lam + nudge * width;
        if x <= a || x >= b {
            continue;
        }
        if let XiValue::Defined(val) = xi_essential(x, v, nquad)?.xi {
            return Ok(Some((x, val)));
        }
    }
    Ok(None)
}

fn refine_bracket(v: &PotentialSpec, nquad: usize, a: f64, b: f64, xa: i64, xb: i64) -> Result<Vec<Jump>> {
    let mut out = Vec::new();
    let mut stack = vec![(a, b, xa, xb)];
    while let Some((a, b, xa, xb)) = stack.pop() {
        if xa == xb {
            continue;
        }
        if b - a <= BRACKET_WIDTH {
            out.push(Jump {
                lo: a,
                hi: b,
                left: xa,
                right: xb,
            });
            continue;
        }
        match defined_near(v, nquad, 0.5 * (a + b), a, b)? {
            Some((m, xm)) => {
                stack.push((a, m, xa, xm));
                stack.push((m, b, xm, xb));
            }
            None => out.push(Jump {
                lo: a,
                hi: b,
                left: xa,
                right: xb,
            }),
        }
    }
    out.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    Ok(out)
}

/// One failed bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub lam: f64,
    pub xi: i64,
    pub lower: i64,
    pub upper: i64,
    pub which: String,
}

/// `-N([1,∞); A0) ≤ Ξ ≤ N((-∞,-1]; A0)` and `-rank V₋ ≤ Ξ ≤ rank V₊` at each defined point.
pub fn bound_report(curve: &XiCurve) -> Vec<BoundViolation> {
    let mut out = Vec::new();
    for p in &curve.points {
        let Some(xi) = p.xi.value() else { continue };
        if xi < p.lower || xi > p.upper {
            out.push(BoundViolation {
                lam: p.lam,
                xi,
                lower: p.lower,
                upper: p.upper,
                which: "A0 eigenvalue bounds".into(),
            });
        }
        if xi < p.rank_lower || xi > p.rank_upper {
            out.push(BoundViolation {
                lam: p.lam,
                xi,
                lower: p.rank_lower,
                upper: p.rank_upper,
                which: "rank bounds".into(),
            });
        }
    }
    out
}

/// Nodes needed to resolve the oscillation of the kernel at energy `lam`.
pub fn nodes_for_energy(lam: f64, v: &PotentialSpec, nquad: usize) -> usize {
    nquad.max((4.0 * lam.sqrt() * v.support_radius()).ceil() as usize)
}

/// Energy above which `‖A0(λ)‖ < 1`, hence `Ξ(λ) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighEnergy {
    /// Smallest scanned energy from which all scanned norms stay below 1.
    pub lam_star: f64,
    /// `(∫|V| / 2)²`: beyond it the Hilbert-Schmidt norm of `T0(λ+i0)` is below 1.
    pub lam_bound: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Finds Λ* by scanning `‖A0(λ)‖` on a geometric grid below the analytic
/// bound `(∫|V|/2)²`.
pub fn high_energy_threshold(v: &PotentialSpec, nquad: usize) -> Result<HighEnergy> {
    let l1 = v.l1_norm();
    let lam_bound = (0.5 * l1).powi(2).max(1e-3);
    if v.is_zero() {
        return Ok(HighEnergy {
            lam_star: 1e-3,
            lam_bound,
            samples: Vec::new(),
        });
    }
    let ratio: f64 = 1.25;
    let count = 48;
    let grid: Vec<f64> = (0..=count).map(|i| lam_bound * ratio.powi(-i)).collect();
    let samples: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&lam| {
            let op = a0_b0_1d(lam, v, nodes_for_energy(lam, v, nquad))?;
            let ev = sym_eigenvalues(&op.a0);
            Ok((lam, ev.iter().fold(0.0_f64, |m, x| m.max(x.abs()))))
        })
        .collect::<Result<_>>()?;
    let mut lam_star = lam_bound;
    for (lam, norm) in &samples {
        if *norm < 1.0 {
            lam_star = *lam;
        } else {
            break;
        }
    }
    Ok(HighEnergy {
        lam_star,
        lam_bound,
        samples,
    })
}

/// `Σ_{ℓ ≤ ℓmax} (2ℓ+1) Ξ_ℓ(λ)` for a radial potential in three dimensions,
/// or `None` when some channel is numerically singular.
pub fn xi_radial_truncated(lam: f64, v: &PotentialSpec, ell_max: usize, nquad: usize) -> Result<Option<i64>> {
    let mut total = 0;
    for ell in 0..=ell_max {
        let p = xi_from_operator(&a0_b0_radial_d3(lam, v, ell, nquad)?)?;
        match p.xi {
            XiValue::Defined(x) => total += (2 * ell as i64 + 1) * x,
            XiValue::Undefined => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// Geometric grid of `n` points on `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let r = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| lo * (r * i as f64).exp()).collect()
}

/// Uniform grid of `n` points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
