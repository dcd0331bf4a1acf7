use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use specidx::acceptance::{run_criterion, AcceptanceConfig, CheckResult, CRITERIA};
use specidx::bsop::{a0_b0_1d, spectra};
use specidx::krein::{krein_eval, KreinEval};
use specidx::scatter1d::{Crossing, FlowTrace};
use specidx::xindex::{bound_report, xi_curve, xi_essential, BoundViolation, Jump};

use crate::args::{Command, RunArgs, ValidateArgs};
use crate::config::{LamWindow, RunConfig, Spacing};
use crate::output::{num, write_csv, write_json};
use crate::CliError;

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::XiCurve(a) => with_config(&a, RunConfig::default(), |c| xi_curve_cmd(&c)),
        Command::Flow(a) => with_config(&a, RunConfig::default(), |c| flow_cmd(&c)),
        Command::BsSpectrum(a) => with_config(&a, RunConfig::default(), |c| bs_spectrum_cmd(&c)),
        Command::KreinDemo(a) => with_config(&a, krein_defaults(), |c| krein_cmd(&c)),
        Command::Validate(v) => {
            let base = RunConfig::default();
            with_config(&v.run, base, |c| validate_cmd(&c, &v))
        }
    }
}

fn krein_defaults() -> RunConfig {
    RunConfig {
        lam_window: LamWindow {
            min: 0.05,
            max: 0.95,
            npoints: 19,
            spacing: Spacing::Linear,
        },
        ..RunConfig::default()
    }
}

fn with_config<F>(args: &RunArgs, base: RunConfig, f: F) -> Result<(), CliError>
where
    F: FnOnce(RunConfig) -> Result<(), CliError>,
{
    let cfg = args.resolve(base)?;
    if args.print_config {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", cfg.to_json());
        return Ok(());
    }
    f(cfg)
}

#[derive(Serialize)]
struct XiSidecar<'a> {
    command: &'static str,
    config: &'a RunConfig,
    undefined_points: usize,
    jumps: &'a [Jump],
    bound_violations: &'a [BoundViolation],
}

pub fn xi_curve_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let v = cfg.potential.build()?;
    let curve = xi_curve(&v, &cfg.lam_window.grid(), cfg.nquad)?;
    let rows: Vec<Vec<String>> = curve
        .points
        .iter()
        .map(|p| {
            let xi = p.xi.value();
            vec![
                num(p.lam),
                xi.map(|x| x.to_string()).unwrap_or_default(),
                xi.is_some().to_string(),
                num(p.min_singval),
            ]
        })
        .collect();
    let csv_path = cfg.csv_path("xi_curve");
    write_csv(&csv_path, &["lambda", "xi", "fredholm", "min_singval"], &rows)?;
    let violations = bound_report(&curve);
    write_json(
        &cfg.json_path("xi_curve"),
        &XiSidecar {
            command: "xi-curve",
            config: cfg,
            undefined_points: curve.points.iter().filter(|p| p.xi.value().is_none()).count(),
            jumps: &curve.jumps,
            bound_violations: &violations,
        },
    )?;
    println!(
        "wrote {} points and {} jumps to {}",
        rows.len(),
        curve.jumps.len(),
        csv_path.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct FlowSidecar<'a> {
    command: &'static str,
    config: &'a RunConfig,
    lam0: f64,
    /// `μ(-1; λ0)`.
    mu_minus_one: i64,
    xi_at_lam0: Option<i64>,
    lam_max: f64,
    max_step: f64,
    points: usize,
    crossings: &'a [Crossing],
}

pub fn flow_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let v = cfg.potential.build()?;
    let lam0 = cfg.lam_window.min;
    let grid = cfg.lam_window.grid();
    let trace = FlowTrace::build(&v, lam0, &grid, &cfg.policy())?;
    let crossings = trace.crossings(PI);
    let mu = -trace.flow_from(lam0, PI)?;
    let mut so_far = 0;
    let mut next = 0;
    let mut rows = Vec::new();
    for (i, &lam) in trace.lambdas.iter().enumerate() {
        while next < crossings.len() && crossings[next].hi <= lam {
            so_far += crossings[next].sign;
            next += 1;
        }
        if lam.is_finite() {
            let p = trace.sorted_phases(i);
            rows.push(vec![num(lam), num(p[0]), num(p[1]), so_far.to_string()]);
        }
    }
    let csv_path = cfg.csv_path("flow");
    write_csv(&csv_path, &["lambda", "phase_1", "phase_2", "crossings_so_far"], &rows)?;
    let xi = xi_essential(lam0, &v, cfg.nquad)?.xi.value();
    write_json(
        &cfg.json_path("flow"),
        &FlowSidecar {
            command: "flow",
            config: cfg,
            lam0,
            mu_minus_one: mu,
            xi_at_lam0: xi,
            lam_max: trace.lam_max,
            max_step: trace.max_step,
            points: rows.len(),
            crossings: &crossings,
        },
    )?;
    println!("mu(-1; {lam0}) = {mu}; wrote {} points to {}", rows.len(), csv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct SpectrumSummary {
    lambda: f64,
    dim: usize,
    norm_a0: f64,
    norm_b0: f64,
    /// `N([1, ∞); A0)`.
    a0_at_least_one: usize,
    /// `N((-∞, -1]; A0)`.
    a0_at_most_minus_one: usize,
}

#[derive(Serialize)]
struct SpectrumSidecar<'a> {
    command: &'static str,
    config: &'a RunConfig,
    energies: Vec<SpectrumSummary>,
}

pub fn bs_spectrum_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let v = cfg.potential.build()?;
    let grid = cfg.lam_window.grid();
    let spectra: Vec<(f64, Vec<f64>, Vec<f64>)> = grid
        .par_iter()
        .map(|&lam| {
            let op = a0_b0_1d(lam, &v, cfg.nquad)?;
            let (a, b) = spectra(&op);
            Ok((lam, a, b))
        })
        .collect::<Result<_, specidx::Error>>()?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (lam, a, b) in &spectra {
        for (name, ev) in [("A0", a), ("B0", b)] {
            for (k, e) in ev.iter().enumerate() {
                rows.push(vec![num(*lam), name.to_string(), k.to_string(), num(*e)]);
            }
        }
        let norm = |ev: &[f64]| ev.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        summary.push(SpectrumSummary {
            lambda: *lam,
            dim: a.len(),
            norm_a0: norm(a),
            norm_b0: norm(b),
            a0_at_least_one: a.iter().filter(|x| **x >= 1.0).count(),
            a0_at_most_minus_one: a.iter().filter(|x| **x <= -1.0).count(),
        });
    }
    let csv_path = cfg.csv_path("bs_spectrum");
    write_csv(&csv_path, &["lambda", "operator", "index", "eigenvalue"], &rows)?;
    write_json(
        &cfg.json_path("bs_spectrum"),
        &SpectrumSidecar {
            command: "bs-spectrum",
            config: cfg,
            energies: summary,
        },
    )?;
    println!("wrote {} eigenvalues to {}", rows.len(), csv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct KreinSidecar<'a> {
    command: &'static str,
    config: &'a RunConfig,
    max_abs_err: f64,
    /// `max |1 + Re T0(λ + i0)|` over the grid.
    max_one_plus_a0: f64,
}

pub fn krein_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let w = &cfg.lam_window;
    if !(w.min > 0.0 && w.max < 1.0) {
        return Err(CliError::Config(format!(
            "krein-demo needs a window inside (0, 1), got [{}, {}]",
            w.min, w.max
        )));
    }
    let evals: Vec<KreinEval> = w
        .grid()
        .par_iter()
        .map(|&l| krein_eval(l))
        .collect::<Result<_, specidx::Error>>()?;
    let rows: Vec<Vec<String>> = evals
        .iter()
        .map(|e| {
            vec![
                num(e.lam),
                num(e.t0_closed.re),
                num(e.t0_closed.im),
                num(e.t0_numeric.re),
                num(e.t0_numeric.im),
                num(e.abs_err),
            ]
        })
        .collect();
    let csv_path = cfg.csv_path("krein");
    write_csv(
        &csv_path,
        &["lambda", "t0_closed_re", "t0_closed_im", "t0_numeric_re", "t0_numeric_im", "abs_err"],
        &rows,
    )?;
    let max_abs_err = evals.iter().map(|e| e.abs_err).fold(0.0, f64::max);
    let max_one_plus_a0 = evals.iter().map(|e| (1.0 + e.t0_numeric.re).abs()).fold(0.0, f64::max);
    write_json(
        &cfg.json_path("krein"),
        &KreinSidecar {
            command: "krein-demo",
            config: cfg,
            max_abs_err,
            max_one_plus_a0,
        },
    )?;
    println!("max |1 + A0| = {max_one_plus_a0:e}; wrote {} points to {}", rows.len(), csv_path.display());
    Ok(())
}

#[derive(Serialize)]
struct ValidationReport<'a> {
    command: &'static str,
    acceptance: &'a AcceptanceConfig,
    passed: usize,
    total: usize,
    first_failure: Option<u32>,
    results: &'a [CheckResult],
}

pub fn validate_cmd(cfg: &RunConfig, args: &ValidateArgs) -> Result<(), CliError> {
    let mut acc = AcceptanceConfig {
        seed: cfg.seed,
        nquad: cfg.nquad,
        corrupt_resolvent: args.negative_control,
        ..AcceptanceConfig::default()
    };
    if let Some(n) = args.mc_samples {
        if n == 0 {
            return Err(CliError::Config("mc-samples must be positive".into()));
        }
        acc.mc_samples = n;
    }
    let ids: Vec<u32> = if args.criteria.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        args.criteria.clone()
    };
    let mut results = Vec::new();
    for id in ids {
        let r = run_criterion(id, &acc).ok_or_else(|| CliError::Config(format!("no criterion numbered {id}")))?;
        println!(
            "{} {:>2} {} ({:.1} s): {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.detail
        );
        results.push(r);
    }
    let first = results.iter().find(|r| !r.passed);
    let report = ValidationReport {
        command: "validate",
        acceptance: &acc,
        passed: results.iter().filter(|r| r.passed).count(),
        total: results.len(),
        first_failure: first.map(|r| r.id),
        results: &results,
    };
    write_json(&cfg.json_path("validate"), &report)?;
    match first {
        Some(r) => Err(CliError::Validation {
            id: r.id,
            name: r.name.clone(),
        }),
        None => Ok(()),
    }
}
