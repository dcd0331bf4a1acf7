//! The acceptance suite: eleven end-to-end checks across all routes.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bsop::{a0_b0_1d, a0_b0_1d_with, a0_b0_radial_d3, hs_bound_d3, t0_eps_oracle, EpsOracle, NystromRule};
use crate::error::Result;
use crate::krein::{krein_degenerate_scan, krein_eval};
use crate::lattice::{
    build_h, build_h0, bs_bound_states, bs_count_difference, resolvent_identity_residual, xi_birman_schwinger,
    xi_counting, DenseSelfAdjoint, Grid1D,
};
use crate::linalg::{complex_norm, sym_eigenvalues};
use crate::oracle::{hs_ball_monte_carlo, s_wave_b0_separable, s_wave_b0_square_well};
use crate::potential::{BuiltinPotential, PotentialSpec};
use crate::projpair::{eigenvalue_pairing_report, index_pair, make_projection, trace_index_check};
use crate::scatter1d::{mu_at, mu_index_route, verify_xi_equals_minus_mu, GridPolicy};
use crate::xindex::{
    bound_report, geometric_grid, high_energy_threshold, linear_grid, nodes_for_energy, xi_curve, xi_from_operator,
    xi_radial_truncated, XiValue,
};

/// Settings shared by all checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceConfig {
    pub seed: u64,
    pub nquad: usize,
    pub mc_samples: u64,
    /// Perturbs the lattice Hamiltonian in check 2 so that it must fail.
    pub corrupt_resolvent: bool,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        Self {
            seed: 20240611,
            nquad: 64,
            mc_samples: 10_000_000,
            corrupt_resolvent: false,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub time_limit: Option<f64>,
}

pub const CRITERIA: [(u32, &str, Option<f64>); 11] = [
    (1, "krein closed form", Some(30.0)),
    (2, "resolvent identity", Some(10.0)),
    (3, "birman-schwinger equivalence", Some(120.0)),
    (4, "bound-state locations", None),
    (5, "xi equals minus mu at -1", Some(180.0)),
    (6, "general theta identity", None),
    (7, "high energy vanishing", None),
    (8, "eigenvalue and rank bounds", None),
    (9, "projection pair algebra", None),
    (10, "kernel oracle agreement", None),
    (11, "hilbert-schmidt bound", None),
];

/// Runs the check with the given number.
pub fn run_criterion(id: u32, cfg: &AcceptanceConfig) -> Option<CheckResult> {
    let (_, name, limit) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let outcome = match id {
        1 => krein(),
        2 => resolvent(cfg),
        3 => birman_schwinger(cfg),
        4 => bound_states(cfg),
        5 => theorem(cfg),
        6 => general_theta(cfg),
        7 => high_energy(cfg),
        8 => bounds(cfg),
        9 => projections(cfg),
        10 => kernels(cfg),
        11 => hilbert_schmidt(cfg),
        _ => unreachable!(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(l) = limit {
        if seconds > *l {
            passed = false;
            detail = format!("{detail}; took {seconds:.1} s, limit {l} s");
        }
    }
    Some(CheckResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        seconds,
        time_limit: *limit,
    })
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CheckResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0, cfg)).collect()
}

type Outcome = Result<(bool, String)>;

fn krein() -> Outcome {
    let e = krein_eval(0.5)?;
    let grid = linear_grid(0.05, 0.95, 22)[1..21].to_vec();
    let scan = krein_degenerate_scan(&grid)?;
    Ok((
        e.abs_err < 1e-3 && scan < 1e-3,
        format!("|T0(0.5) - (-1+i)| = {:.2e}, max |1 + A0| over 20 points = {scan:.2e}", e.abs_err),
    ))
}

fn lattice_400() -> Result<Grid1D> {
    Grid1D::new(-20.0, 20.0, 400)
}

fn resolvent(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 2);
    let grid = lattice_400()?;
    let h0 = build_h0(&grid);
    let mut worst = 0.0_f64;
    for i in 0..5 {
        let v = if i % 2 == 0 {
            PotentialSpec::random_mixed(&mut rng, 4.0, 3.0)?
        } else {
            PotentialSpec::random_attractive(&mut rng, 4.0, 3.0)?
        };
        let mut hd = build_h(&grid, &v)?;
        if cfg.corrupt_resolvent {
            let mut m = hd.matrix().clone();
            let c = grid.n() / 2;
            m[(c, c)] += 0.5;
            hd = DenseSelfAdjoint::new(m, Some(grid), "corrupted")?;
        }
        for z in [Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(-2.0, 0.0)] {
            worst = worst.max(resolvent_identity_residual(&h0, &hd, &v, z)?);
        }
    }
    Ok((worst < 1e-8, format!("max residual over 5 potentials and 3 energies = {worst:.2e}")))
}

fn birman_schwinger(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 3);
    let grid = lattice_400()?;
    let h0 = build_h0(&grid);
    let mut potentials = Vec::new();
    for _ in 0..20 {
        potentials.push(PotentialSpec::random_attractive(&mut rng, 6.0, 3.0)?);
    }
    for _ in 0..10 {
        potentials.push(PotentialSpec::random_mixed(&mut rng, 6.0, 3.0)?);
    }
    let mut mismatches = 0;
    let mut nonzero = 0;
    for v in &potentials {
        let hd = build_h(&grid, v)?;
        for lam in [-0.5, -0.1, -0.01] {
            let direct = xi_counting(&h0, &hd, lam)?;
            let index = xi_birman_schwinger(&h0, v, lam)?;
            let count = -bs_count_difference(&h0, v, lam)?;
            if direct != index || direct != count {
                mismatches += 1;
            }
            if direct != 0 {
                nonzero += 1;
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} mismatches in 90 comparisons ({nonzero} with nonzero index)"),
    ))
}

fn bound_states(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4);
    let grid = Grid1D::new(-20.0, 20.0, 800)?;
    let h0 = build_h0(&grid);
    let mut worst = 0.0_f64;
    let mut count_mismatch = 0;
    let mut total = 0;
    for _ in 0..20 {
        let depth = rng.random_range(0.5..6.0);
        let half = rng.random_range(0.5..3.0);
        let v = PotentialSpec::square_well(depth, half)?;
        let hd = build_h(&grid, &v)?;
        let want: Vec<f64> = hd.eigenvalues().iter().copied().filter(|e| *e < 0.0).collect();
        let got = bs_bound_states(&h0, &v)?;
        total += want.len();
        if got.len() != want.len() {
            count_mismatch += 1;
            continue;
        }
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    let mut errors = Vec::new();
    let mut single = true;
    for h in [0.2, 0.1, 0.05] {
        let grid = Grid1D::symmetric_with_spacing(20.0, h)?;
        let states = bs_bound_states(&build_h0(&grid), &PotentialSpec::poschl_teller(2.0)?)?;
        single &= states.len() == 1;
        errors.push(states.first().map_or(f64::INFINITY, |e| (e + 1.0).abs()));
    }
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    let converges = ratios.iter().all(|r| *r >= 3.5);
    Ok((
        count_mismatch == 0 && worst < 1e-6 && single && converges,
        format!(
            "square wells: {total} states, {count_mismatch} count mismatches, max error {worst:.2e}; \
             Pöschl-Teller errors {:.2e}, {:.2e}, {:.2e} (ratios {:.2}, {:.2})",
            errors[0], errors[1], errors[2], ratios[0], ratios[1]
        ),
    ))
}

fn deep_gaussian() -> Result<PotentialSpec> {
    PotentialSpec::gaussian(8.0, 1.0)
}

fn theorem(cfg: &AcceptanceConfig) -> Outcome {
    let v = deep_gaussian()?;
    let grid = Grid1D::new(-20.0, 20.0, 800)?;
    let bound = build_h(&grid, &v)?.eigenvalues().iter().filter(|e| **e < 0.0).count();
    let lam_grid = geometric_grid(0.06, 24.0, 40);
    let report = verify_xi_equals_minus_mu(&v, &lam_grid, cfg.nquad, 1e-3, &GridPolicy::default())?;
    let undefined = report.rows.iter().filter(|r| r.xi == XiValue::Undefined).count();
    Ok((
        bound >= 2 && report.violations() == 0,
        format!(
            "{bound} bound states; {} points ({undefined} undefined), {} jumps, {} crossings of -1, {} violations",
            report.rows.len(),
            report.jump_count,
            report.crossing_count,
            report.violations()
        ),
    ))
}

fn general_theta(cfg: &AcceptanceConfig) -> Outcome {
    let v = deep_gaussian()?;
    let policy = GridPolicy::default();
    let mut mismatches = Vec::new();
    let mut values = Vec::new();
    for theta in [0.5 * PI, PI, 1.5 * PI] {
        for lam in [0.2, 1.0, 5.0] {
            let flow = mu_at(theta, lam, &v, &policy)?;
            let index = mu_index_route(theta, lam, &v, cfg.nquad)?;
            values.push(flow);
            if flow != index {
                mismatches.push(format!("θ={theta:.3}, λ={lam}: {flow} vs {index}"));
            }
        }
    }
    Ok((
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("9 of 9 agree, values {values:?}")
        } else {
            mismatches.join("; ")
        },
    ))
}

fn builtins() -> Vec<BuiltinPotential> {
    vec![
        BuiltinPotential::SquareWell { depth: 4.0, half_width: 1.5 },
        BuiltinPotential::Gaussian { depth: 8.0, width: 1.0 },
        BuiltinPotential::PoschlTeller { strength: 2.0 },
        BuiltinPotential::Exponential { depth: 3.0, gamma: 1.0 },
        BuiltinPotential::CustomTable {
            points: vec![(-2.0, 0.0), (-1.0, -3.0), (0.0, 1.0), (1.0, -3.0), (2.0, 0.0)],
        },
        BuiltinPotential::Zero,
    ]
}

fn high_energy(cfg: &AcceptanceConfig) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for b in builtins() {
        let v = b.build()?;
        let he = high_energy_threshold(&v, cfg.nquad)?;
        ok &= he.lam_star.is_finite();
        for f in [1.0, 1.7, 3.0] {
            let lam = he.lam_star * f;
            let p = xi_from_operator(&a0_b0_1d(lam, &v, nodes_for_energy(lam, &v, cfg.nquad))?)?;
            if !(p.norm_a0 < 1.0 && p.xi == XiValue::Defined(0)) {
                ok = false;
                notes.push(format!("{} at λ={lam:.3}: ‖A0‖={:.3}, Ξ={:?}", v.label(), p.norm_a0, p.xi));
            }
        }
        notes.push(format!("{} Λ*={:.3}", v.label(), he.lam_star));
    }
    Ok((ok, notes.join(", ")))
}

fn bounds(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 8);
    let potentials = vec![
        deep_gaussian()?,
        PotentialSpec::square_well(4.0, 1.5)?,
        PotentialSpec::exponential(3.0, 1.0)?,
        PotentialSpec::gaussian(-3.0, 1.0)?,
        PotentialSpec::random_mixed(&mut rng, 6.0, 2.0)?,
    ];
    let grid = geometric_grid(0.06, 24.0, 50);
    let mut violations = 0;
    let mut points = 0;
    for v in &potentials {
        let curve = xi_curve(v, &grid, cfg.nquad)?;
        points += curve.points.iter().filter(|p| p.xi.value().is_some()).count();
        violations += bound_report(&curve).len();
    }
    Ok((
        violations == 0,
        format!("{violations} violations at {points} defined points on {} curves", potentials.len()),
    ))
}

fn random_projection(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> Result<crate::projpair::OrthProjection> {
    let basis: Vec<DVector<f64>> = (0..rank)
        .map(|_| DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal)))
        .collect();
    make_projection(dim, &basis)
}

fn projections(cfg: &AcceptanceConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 9);
    let (mut index_bad, mut pairing_bad, mut trace_bad) = (0, 0, 0);
    for _ in 0..100 {
        let dim = rng.random_range(2..=14);
        let rp = rng.random_range(0..=dim);
        let rq = rng.random_range(0..=dim);
        let p = random_projection(&mut rng, dim, rp)?;
        let q = random_projection(&mut rng, dim, rq)?;
        if index_pair(&p, &q, 1e-9, 1e-8)?.value != rp as i64 - rq as i64 {
            index_bad += 1;
        }
        if !eigenvalue_pairing_report(&p, &q, 1e-9)?.violations().is_empty() {
            pairing_bad += 1;
        }
        if !trace_index_check(&p, &q, 1e-9)?.agree {
            trace_bad += 1;
        }
    }
    Ok((
        index_bad + pairing_bad + trace_bad == 0,
        format!("100 pairs: {index_bad} index, {pairing_bad} pairing, {trace_bad} trace failures"),
    ))
}

fn kernels(cfg: &AcceptanceConfig) -> Outcome {
    let mut worst = 0.0_f64;
    for v in [deep_gaussian()?, PotentialSpec::exponential(3.0, 1.0)?] {
        for lam in [0.5, 1.0, 4.0] {
            let op = a0_b0_1d_with(lam, &v, cfg.nquad, NystromRule::Sampled)?;
            let t = t0_eps_oracle(lam, &v, &op.nodes, &op.weights, &EpsOracle::default())?;
            let nystrom = DMatrix::from_fn(op.dim(), op.dim(), |a, b| Complex64::new(op.a0[(a, b)], op.b0[(a, b)]));
            worst = worst.max(complex_norm(&(&t - &nystrom)));
        }
    }
    let mut b0_err = 0.0_f64;
    let well = PotentialSpec::square_well(3.0, 1.5)?;
    let bump = PotentialSpec::gaussian(2.0, 1.0)?;
    let top = |v: &PotentialSpec, lam: f64| -> Result<f64> {
        let op = a0_b0_radial_d3(lam, v, 0, cfg.nquad)?;
        Ok(sym_eigenvalues(&op.b0).last().copied().unwrap_or(0.0))
    };
    for lam in [0.5, 1.0, 4.0] {
        b0_err = b0_err.max((top(&well, lam)? - s_wave_b0_square_well(3.0, 1.5, lam)).abs());
        let want = s_wave_b0_separable(|r| bump.eval(r), bump.support_radius(), lam, 400);
        b0_err = b0_err.max((top(&bump, lam)? - want).abs());
    }
    Ok((
        worst < 1e-3 && b0_err < 1e-8,
        format!("max ‖T0 - oracle‖ = {worst:.2e}; s-wave B0 eigenvalue error {b0_err:.2e}"),
    ))
}

fn hilbert_schmidt(cfg: &AcceptanceConfig) -> Outcome {
    let (depth, radius) = (15.0, 1.0);
    let v = PotentialSpec::square_well(depth, radius)?;
    let bound = hs_bound_d3(&v, cfg.nquad)?;
    let mc = hs_ball_monte_carlo(depth, radius, cfg.mc_samples, cfg.seed ^ 11)?;
    let rel = (bound - mc.value).abs() / mc.value;
    let mut worst = 0;
    let mut dominated = true;
    for lam in geometric_grid(0.1, 30.0, 10) {
        let ell_max = (lam.sqrt() * radius).ceil() as usize + 4;
        match xi_radial_truncated(lam, &v, ell_max, cfg.nquad)? {
            Some(x) => {
                worst = worst.max(x.abs());
                dominated &= (x.abs() as f64) <= bound;
            }
            None => dominated = false,
        }
    }
    Ok((
        rel < 0.01 && dominated,
        format!(
            "bound {bound:.5}, Monte-Carlo {:.5} ± {:.1e} (rel. diff {rel:.1e}); max |Ξ| over 10 energies = {worst}",
            mc.value, mc.std_err
        ),
    ))
}
