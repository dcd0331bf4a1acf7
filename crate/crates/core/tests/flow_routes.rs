use std::f64::consts::PI;

use specidx::oracle::square_well_eigenphases;
use specidx::potential::PotentialSpec;
use specidx::scatter1d::{FlowTrace, GridPolicy};
use specidx::xindex::{geometric_grid, xi_essential};

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[test]
fn square_well_trace_follows_closed_form_phases() {
    let (depth, a) = (4.0, 1.5);
    let v = PotentialSpec::square_well(depth, a).unwrap();
    let grid = geometric_grid(0.1, 10.0, 7);
    let trace = FlowTrace::build(&v, 0.1, &grid, &GridPolicy::default()).unwrap();
    for (i, lam) in trace.lambdas.iter().enumerate().filter(|(_, l)| l.is_finite() && **l <= 50.0) {
        let got = trace.sorted_phases(i);
        let want = square_well_eigenphases(depth, a, *lam);
        let pairs = circ(got[0], want[0]).max(circ(got[1], want[1]));
        let swapped = circ(got[0], want[1]).max(circ(got[1], want[0]));
        assert!(pairs.min(swapped) < 1e-6, "λ = {lam}: {got:?} vs {want:?}");
    }
}

#[test]
fn flow_is_additive_and_reproduces_xi() {
    let v = PotentialSpec::gaussian(8.0, 1.0).unwrap();
    let grid = geometric_grid(0.06, 24.0, 9);
    let trace = FlowTrace::build(&v, grid[0], &grid, &GridPolicy::default()).unwrap();
    for w in grid.windows(2) {
        let between: i64 = trace
            .crossings(PI)
            .iter()
            .filter(|c| c.lo >= w[0] && c.hi <= w[1])
            .map(|c| c.sign)
            .sum();
        assert_eq!(trace.flow_from(w[0], PI).unwrap(), between + trace.flow_from(w[1], PI).unwrap());
    }
    for lam in &grid {
        let xi = xi_essential(*lam, &v, 64).unwrap().xi.value().unwrap();
        assert_eq!(trace.flow_from(*lam, PI).unwrap(), xi, "λ = {lam}");
    }
}

#[test]
fn zero_potential_has_no_flow() {
    let trace = FlowTrace::build(&PotentialSpec::zero(), 0.5, &[], &GridPolicy::default()).unwrap();
    assert!(trace.crossings(PI).is_empty());
    assert_eq!(trace.flow(1.0), 0);
}
