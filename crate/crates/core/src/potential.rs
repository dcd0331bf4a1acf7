//! Short-range potentials V with declared decay and effective support.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative cutoff defining the effective support: |V| ≤ CUTOFF·max|V| outside.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Pointwise evaluator for V with a declared short-range envelope
/// `|V(x)| ≤ C (1+|x|)^(-rho)` and an effective support radius.
///
/// `breakpoints` lists the points where V (or |V|^{1/2}) is not smooth; the
/// quadrature routines place panel boundaries there.
#[derive(Clone)]
pub struct PotentialSpec {
    label: String,
    eval: Eval,
    rho: f64,
    envelope: f64,
    support_radius: f64,
    breakpoints: Vec<f64>,
    max_abs: f64,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("label", &self.label)
            .field("rho", &self.rho)
            .field("envelope", &self.envelope)
            .field("support_radius", &self.support_radius)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl PotentialSpec {
    /// Builds a potential and spot-checks the declared envelope on a sample grid.
    pub fn new<F>(
        label: impl Into<String>,
        eval: F,
        rho: f64,
        envelope: f64,
        support_radius: f64,
        breakpoints: Vec<f64>,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(rho > 1.0) {
            return Err(Error::InvalidPotential(format!("decay exponent {rho} must exceed 1")));
        }
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(Error::InvalidPotential(format!(
                "support radius {support_radius} must be positive"
            )));
        }
        let eval: Eval = Arc::new(eval);
        let samples = 2001;
        let mut max_abs = 0.0_f64;
        for i in 0..samples {
            let x = -support_radius + 2.0 * support_radius * i as f64 / (samples - 1) as f64;
            max_abs = max_abs.max(eval(x).abs());
        }
        for bp in &breakpoints {
            max_abs = max_abs.max(eval(*bp).abs());
        }
        for i in 0..samples {
            let x = -3.0 * support_radius + 6.0 * support_radius * i as f64 / (samples - 1) as f64;
            let v = eval(x);
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!("V({x}) is not finite")));
            }
            let bound = envelope * (1.0 + x.abs()).powf(-rho);
            if v.abs() > bound * (1.0 + 1e-9) + 1e-300 {
                return Err(Error::InvalidPotential(format!(
                    "|V({x})| = {} exceeds the declared envelope {bound}",
                    v.abs()
                )));
            }
            if x.abs() > support_radius * (1.0 + 1e-9)
                && v.abs() > SUPPORT_CUTOFF * max_abs * (1.0 + 1e-6)
            {
                return Err(Error::InvalidPotential(format!(
                    "|V({x})| = {} is above the support cutoff",
                    v.abs()
                )));
            }
        }
        let mut bps: Vec<f64> = breakpoints
            .into_iter()
            .filter(|b| b.abs() < support_radius)
            .collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        Ok(Self {
            label: label.into(),
            eval,
            rho,
            envelope,
            support_radius,
            breakpoints: bps,
            max_abs,
        })
    }

    pub fn zero() -> Self {
        Self {
            label: "zero".into(),
            eval: Arc::new(|_| 0.0),
            rho: 2.0,
            envelope: 0.0,
            support_radius: 1.0,
            breakpoints: Vec::new(),
            max_abs: 0.0,
        }
    }

    /// `V(x) = -depth` on `|x| < half_width`, zero outside.
    pub fn square_well(depth: f64, half_width: f64) -> Result<Self> {
        let rho = 4.0;
        let c = depth.abs() * (1.0 + half_width).powf(rho);
        Self::new(
            format!("square_well(depth={depth}, half_width={half_width})"),
            move |x| if x.abs() < half_width { -depth } else { 0.0 },
            rho,
            c,
            half_width,
            vec![-half_width, half_width],
        )
    }

    /// `V(x) = -depth·exp(-(x/width)²)`.
    pub fn gaussian(depth: f64, width: f64) -> Result<Self> {
        let support = width * (1.0 / SUPPORT_CUTOFF).ln().sqrt();
        let rho = 4.0;
        let c = depth.abs() * gaussian_envelope(width, rho);
        Self::new(
            format!("gaussian(depth={depth}, width={width})"),
            move |x| -depth * (-(x / width).powi(2)).exp(),
            rho,
            c,
            support,
            Vec::new(),
        )
    }

    /// `V(x) = -strength·sech²(x)`; strength 2 is the reflectionless well with a bound state at -1.
    pub fn poschl_teller(strength: f64) -> Result<Self> {
        // sech²x ≤ 4e^{-2|x|} falls below the cutoff at |x| = ln(2/√cutoff).
        let support = (2.0 / SUPPORT_CUTOFF.sqrt()).ln();
        let rho = 4.0;
        let c = 4.0 * strength.abs() * exp_envelope(2.0, rho);
        Self::new(
            format!("poschl_teller(strength={strength})"),
            move |x| {
                let s = 1.0 / x.cosh();
                -strength * s * s
            },
            rho,
            c,
            support,
            Vec::new(),
        )
    }

    /// `V(x) = -depth·exp(-gamma|x|)`.
    pub fn exponential(depth: f64, gamma: f64) -> Result<Self> {
        let support = (1.0 / SUPPORT_CUTOFF).ln() / gamma;
        let rho = 4.0;
        let c = depth.abs() * exp_envelope(gamma, rho);
        Self::new(
            format!("exponential(depth={depth}, gamma={gamma})"),
            move |x| -depth * (-gamma * x.abs()).exp(),
            rho,
            c,
            support,
            vec![0.0],
        )
    }

    /// Piecewise-linear interpolation of `(x, V)` samples, zero outside the table.
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPotential("table needs at least two points".into()));
        }
        let mut pts = points;
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidPotential("table abscissae must be distinct".into()));
        }
        let lo = pts[0].0;
        let hi = pts[pts.len() - 1].0;
        let support = lo.abs().max(hi.abs());
        let max_abs = pts.iter().fold(0.0_f64, |m, p| m.max(p.1.abs()));
        let rho = 4.0;
        let c = max_abs * (1.0 + support).powf(rho);
        let breaks: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let table = pts.clone();
        Self::new(
            format!("table({} points)", table.len()),
            move |x| interpolate_table(&table, x),
            rho,
            c,
            support,
            breaks,
        )
    }

    /// Sum of Gaussian bumps `Σ a_i exp(-((x-c_i)/w_i)²)`.
    pub fn bumps(label: impl Into<String>, bumps: Vec<(f64, f64, f64)>) -> Result<Self> {
        if bumps.is_empty() {
            return Ok(Self::zero());
        }
        let reach = (1.0 / SUPPORT_CUTOFF).ln().sqrt();
        let total: f64 = bumps.iter().map(|b| b.0.abs()).sum();
        let biggest = bumps.iter().fold(0.0_f64, |m, b| m.max(b.0.abs()));
        // Pad the support so the sum of tails stays below the cutoff.
        let pad = (total / biggest.max(f64::MIN_POSITIVE)).ln().max(0.0).sqrt();
        let support = bumps
            .iter()
            .map(|(_, c, w)| c.abs() + w * (reach + pad))
            .fold(0.0_f64, f64::max);
        let rho = 4.0;
        let c = bumps
            .iter()
            .map(|(a, cen, w)| a.abs() * gaussian_envelope(*w, rho) * (1.0 + cen.abs()).powf(rho))
            .sum();
        let b2 = bumps.clone();
        Self::new(
            label,
            move |x| {
                b2.iter()
                    .map(|(a, cen, w)| a * (-((x - cen) / w).powi(2)).exp())
                    .sum()
            },
            rho,
            c,
            support,
            Vec::new(),
        )
    }

    /// Random attractive potential: 1-3 negative Gaussian bumps.
    pub fn random_attractive<R: Rng>(rng: &mut R, max_depth: f64, max_center: f64) -> Result<Self> {
        let count = rng.random_range(1..=3);
        let bumps = (0..count)
            .map(|_| {
                (
                    -rng.random_range(0.2..max_depth),
                    rng.random_range(-max_center..=max_center),
                    rng.random_range(0.4..1.5),
                )
            })
            .collect();
        Self::bumps("random_attractive", bumps)
    }

    /// Random mixed-sign potential: 2-4 Gaussian bumps with both signs present.
    pub fn random_mixed<R: Rng>(rng: &mut R, max_amp: f64, max_center: f64) -> Result<Self> {
        let count = rng.random_range(2..=4);
        let bumps = (0..count)
            .map(|i| {
                let sign = if i == 0 {
                    -1.0
                } else if i == 1 || rng.random_bool(0.5) {
                    1.0
                } else {
                    -1.0
                };
                (
                    sign * rng.random_range(0.2..max_amp),
                    rng.random_range(-max_center..=max_center),
                    rng.random_range(0.4..1.5),
                )
            })
            .collect();
        Self::bumps("random_mixed", bumps)
    }

    /// `s·V`.
    pub fn scaled(&self, s: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            label: format!("{}*{s}", self.label),
            eval: Arc::new(move |x| s * inner(x)),
            rho: self.rho,
            envelope: self.envelope * s.abs(),
            support_radius: self.support_radius,
            breakpoints: self.breakpoints.clone(),
            max_abs: self.max_abs * s.abs(),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn envelope(&self) -> f64 {
        self.envelope
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Largest |V| seen on the support sample grid.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs == 0.0
    }

    /// Panel boundaries covering `[-R, R]`.
    pub fn line_breaks(&self) -> Vec<f64> {
        let r = self.support_radius;
        let mut v = vec![-r];
        v.extend(self.breakpoints.iter().copied());
        v.push(r);
        v
    }

    /// Panel boundaries covering `[0, R]` for radial use.
    pub fn radial_breaks(&self) -> Vec<f64> {
        let r = self.support_radius;
        let mut v = vec![0.0];
        v.extend(self.breakpoints.iter().copied().filter(|b| *b > 0.0));
        v.push(r);
        v
    }

    /// `∫ |V|` over the support, by composite Gauss-Legendre.
    pub fn l1_norm(&self) -> f64 {
        let rule = crate::quadrature::CompositeRule::new(&self.line_breaks(), 400, 32);
        rule.integrate(|x| self.eval(x).abs())
    }
}

fn interpolate_table(pts: &[(f64, f64)], x: f64) -> f64 {
    if x < pts[0].0 || x > pts[pts.len() - 1].0 {
        return 0.0;
    }
    let i = pts.partition_point(|p| p.0 <= x);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// `max_x exp(-(x/w)²)(1+|x|)^rho`, taken as a safe constant.
fn gaussian_envelope(width: f64, rho: f64) -> f64 {
    let mut best = 1.0_f64;
    let mut x = 0.0;
    while x < 20.0 * width + 20.0 {
        best = best.max((-(x / width).powi(2)).exp() * (1.0 + x).powf(rho));
        x += 1e-3 * (1.0 + width);
    }
    best * 1.01
}

/// `max_x exp(-g x)(1+x)^rho`; attained at `x = rho/g - 1` when positive.
fn exp_envelope(gamma: f64, rho: f64) -> f64 {
    let x = (rho / gamma - 1.0).max(0.0);
    (-gamma * x).exp() * (1.0 + x).powf(rho) * 1.0001
}

/// Named built-in potentials, as accepted by the command line and configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinPotential {
    SquareWell { depth: f64, half_width: f64 },
    Gaussian { depth: f64, width: f64 },
    PoschlTeller { strength: f64 },
    Exponential { depth: f64, gamma: f64 },
    CustomTable { points: Vec<(f64, f64)> },
    Zero,
}

impl BuiltinPotential {
    pub fn build(&self) -> Result<PotentialSpec> {
        match self {
            Self::SquareWell { depth, half_width } => PotentialSpec::square_well(*depth, *half_width),
            Self::Gaussian { depth, width } => PotentialSpec::gaussian(*depth, *width),
            Self::PoschlTeller { strength } => PotentialSpec::poschl_teller(*strength),
            Self::Exponential { depth, gamma } => PotentialSpec::exponential(*depth, *gamma),
            Self::CustomTable { points } => PotentialSpec::table(points.clone()),
            Self::Zero => Ok(PotentialSpec::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtins_satisfy_their_envelopes() {
        PotentialSpec::square_well(2.0, 1.0).unwrap();
        PotentialSpec::gaussian(8.0, 1.0).unwrap();
        PotentialSpec::gaussian(0.5, 2.5).unwrap();
        PotentialSpec::poschl_teller(2.0).unwrap();
        PotentialSpec::exponential(3.0, 1.0).unwrap();
        PotentialSpec::table(vec![(-1.0, 0.0), (0.0, -2.0), (1.0, 0.0)]).unwrap();
    }

    #[test]
    fn random_potentials_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let v = PotentialSpec::random_attractive(&mut rng, 3.0, 2.0).unwrap();
            assert!((-40..=40).all(|i| v.eval(i as f64 * 0.25) <= 0.0));
            PotentialSpec::random_mixed(&mut rng, 3.0, 2.0).unwrap();
        }
    }

    #[test]
    fn rejects_bad_declarations() {
        assert!(PotentialSpec::new("slow", |x: f64| 1.0 / (1.0 + x * x), 0.5, 1.0, 5.0, vec![]).is_err());
        // envelope too small
        assert!(PotentialSpec::new("tight", |x: f64| (-x * x).exp(), 2.0, 0.1, 6.0, vec![]).is_err());
        // support too small for the cutoff
        assert!(PotentialSpec::new("wide", |x: f64| (-x.abs()).exp(), 2.0, 10.0, 3.0, vec![]).is_err());
    }

    #[test]
    fn table_interpolates_linearly() {
        let v = PotentialSpec::table(vec![(-1.0, 0.0), (0.0, -2.0), (1.0, 0.0)]).unwrap();
        assert_eq!(v.eval(-0.5), -1.0);
        assert_eq!(v.eval(0.0), -2.0);
        assert_eq!(v.eval(2.0), 0.0);
        assert_eq!(v.breakpoints(), &[0.0]);
    }

    #[test]
    fn builtin_serde_round_trip() {
        let b = BuiltinPotential::Gaussian { depth: 8.0, width: 1.0 };
        let v = b.build().unwrap();
        assert!((v.eval(0.0) + 8.0).abs() < 1e-15);
    }
}
