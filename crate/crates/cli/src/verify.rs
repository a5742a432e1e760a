//! The `verify` battery: seeded random trials of every operator inequality
//! and smoothing contract, reported as one CSV row per check.

use std::time::Instant;

use rand::Rng;
use smoothspec::random::{
    random_bipartite, random_density, random_effect, random_hermitian, random_positive, random_subnormalized, StateRng,
};
use smoothspec::rates::{conditional_projector_traces, proposition_chain_check};
use smoothspec::smoothing::{additive_lemma_smooth, excess_weight, projector_lemma_smooth};
use smoothspec::{
    check_lemma1, check_lemma2, fidelity, gentle_project, h_min, trace_distance, BipartiteState, HermitianOperator,
    Subsystem,
};

use crate::error::Result;
use crate::report::{slack, RunReport, Table};
use crate::trial_rng;

/// Default tolerance for the operator inequalities.
pub const CHECK_TOLERANCE: f64 = 1e-8;

/// Largest operator dimension drawn by the battery.
pub const MAX_CHECK_DIM: usize = 8;

/// Slack of one contract (`bound - value`, negative when violated) and the
/// tolerance it is judged against.
struct Contract {
    slack: f64,
    tolerance: f64,
}

fn contract(slack: f64) -> Contract {
    Contract { slack, tolerance: CHECK_TOLERANCE }
}

type Trial = fn(&mut StateRng, usize) -> smoothspec::Result<Vec<Contract>>;

const CHECKS: [(&str, Trial); 9] = [
    ("projectorTraceSandwich", projector_trace_sandwich),
    ("thresholdWeight", threshold_weight),
    ("conditionalThresholdWeight", conditional_threshold_weight),
    ("effectDifference", effect_difference),
    ("fidelityChain", fidelity_chain),
    ("gentleMeasurement", gentle_measurement),
    ("additiveConstruction", additive_construction),
    ("projectorConstruction", projector_construction),
    ("divergenceChain", divergence_chain),
];

/// Names of the checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(name, _)| *name).collect()
}

fn dim_for(trial: usize) -> usize {
    1 + trial % MAX_CHECK_DIM
}

fn projector_trace_sandwich(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = dim_for(trial);
    let a = random_hermitian(rng, d, 1.0)?;
    let b = random_hermitian(rng, d, 1.0)?;
    let p = random_effect(rng, d)?;
    let v = check_lemma1(&a, &b, &p)?;
    Ok(vec![contract(v.upper - v.lhs), contract(v.lhs - v.lower)])
}

fn threshold_weight(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = dim_for(trial);
    let rho = random_density(rng, d)?;
    let omega = random_positive(rng, d)?;
    let gamma = rng.random_range(-2.0..2.0);
    let n = rng.random_range(1..=3);
    let v = check_lemma2(&rho, &omega, gamma, n)?;
    Ok(vec![contract(v.bound - v.trace_value)])
}

fn conditional_threshold_weight(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let dim_a = 1 + trial % 2;
    let dim_b = 1 + (trial / 2) % (MAX_CHECK_DIM / dim_a);
    let rho = random_bipartite(rng, dim_a, dim_b)?;
    let gamma = rng.random_range(-2.0..2.0);
    let (_, weight) = conditional_projector_traces(&rho, gamma)?;
    Ok(vec![contract(gamma.exp2() - weight)])
}

fn effect_difference(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = dim_for(trial);
    let eps = rng.random_range(0.01..1.0);
    let a = random_hermitian(rng, d, 1.0)?;
    let pert = random_hermitian(rng, d, 1.0)?;
    let norm = trace_distance(&pert, &HermitianOperator::zeros(d))?;
    let b = a.add(&pert.scale(eps / norm.max(1e-300)))?;
    let p = random_effect(rng, d)?;
    Ok(vec![contract(eps - trace_distance(&a, &b)?), contract(eps - p.trace_product(&a.sub(&b)?)?)])
}

fn fidelity_chain(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = dim_for(trial);
    let r = random_density(rng, d)?;
    let s = random_density(rng, d)?;
    let f = fidelity(&r, &s)?;
    let half = 0.5 * trace_distance(r.op(), s.op())?;
    let mid = (1.0 - f * f).max(0.0).sqrt();
    let top = (2.0 * (1.0 - f)).max(0.0).sqrt();
    Ok(vec![contract(mid - half), contract(top - mid), contract(1.0 - f)])
}

fn gentle_measurement(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = dim_for(trial);
    let trace = rng.random_range(0.5..=1.0);
    let rho = random_subnormalized(rng, d, trace)?;
    let lambda = random_effect(rng, d)?;
    let g = gentle_project(&rho, &lambda)?;
    let delta = rho.trace() - lambda.trace_product(rho.op())?;
    Ok(vec![contract(2.0 * delta.max(0.0).sqrt() - g.distance)])
}

fn conditional_instance(rng: &mut StateRng) -> smoothspec::Result<(BipartiteState, smoothspec::QuantumState, f64)> {
    let rho = random_bipartite(rng, 2, 2)?;
    let sigma = rho.marginal(Subsystem::B)?;
    let h0 = h_min(&rho, &sigma)?.bits();
    Ok((rho, sigma, h0))
}

fn additive_construction(rng: &mut StateRng, _trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let (rho, sigma, h0) = conditional_instance(rng)?;
    let lambda = h0 + rng.random_range(0.0..1.0);
    let k = HermitianOperator::identity(2).kron(sigma.op()).scale((-lambda).exp2());
    let (delta, _) = rho.op().sub(&k)?.jordan_parts()?;
    let r = additive_lemma_smooth(&rho, &sigma, lambda, &delta)?;
    let cert = r.certificate.expect("additive construction certificate");
    let w = BipartiteState::new(r.witness.expect("additive construction witness"), 2, 2)?;
    let distance = trace_distance(w.op(), rho.op())?;
    Ok(vec![
        Contract { slack: h_min(&w, &sigma)?.bits() - lambda, tolerance: 1e-6 },
        contract((8.0 * delta.trace()).sqrt() - distance),
        Contract { slack: 1.0 - cert.tbar_max_eigenvalue, tolerance: 1e-9 },
        Contract { slack: rho.state().trace() - w.state().trace(), tolerance: 1e-9 },
    ])
}

fn projector_construction(rng: &mut StateRng, _trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let (rho, sigma, h0) = conditional_instance(rng)?;
    let lambda = h0 + rng.random_range(0.0..1.5);
    let r = projector_lemma_smooth(&rho, &sigma, lambda)?;
    let formula = (8.0 * excess_weight(&rho, &sigma, lambda)?.max(0.0)).sqrt();
    Ok(vec![
        contract(-(r.epsilon - formula).abs()),
        contract(r.epsilon - r.distance),
        Contract { slack: r.value.bits() - lambda, tolerance: 1e-6 },
    ])
}

fn divergence_chain(rng: &mut StateRng, trial: usize) -> smoothspec::Result<Vec<Contract>> {
    let d = 1 + trial % 6;
    let rho = random_density(rng, d)?;
    let omega = random_positive(rng, d)?;
    let alpha = rng.random_range(-3.0..3.0);
    let gamma = alpha - rng.random_range(0.0..3.0);
    let c = proposition_chain_check(&rho, &omega, alpha, gamma)?;
    Ok(vec![contract(c.bound - c.lhs), contract(c.coarse_bound - c.bound)])
}

/// Outcome of one check over all trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Smallest slack seen; `-inf` if a trial errored.
    pub worst_slack: f64,
}

/// Runs `trials` seeded trials of one check. Trial `t` of check `c` draws from
/// its own stream of the master seed, so checks are independent of each
/// other and of the trial count. `tolerance_override` replaces every
/// contract tolerance.
pub fn run_check(index: usize, seed: u64, trials: usize, tolerance_override: Option<f64>) -> CheckSummary {
    let (name, check) = CHECKS[index];
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for t in 0..trials {
        let mut rng = trial_rng(seed, index as u64 + 1, t as u64);
        match check(&mut rng, t) {
            Ok(contracts) => {
                let mut failed = false;
                for c in contracts {
                    worst = worst.min(c.slack);
                    failed |= !(c.slack >= -tolerance_override.unwrap_or(c.tolerance));
                }
                failures += failed as usize;
            }
            Err(_) => {
                failures += 1;
                worst = f64::NEG_INFINITY;
            }
        }
    }
    CheckSummary { name, trials, failures, worst_slack: worst }
}

/// The `verify` battery; `checks_failed` is the total number of failed trials.
pub fn cmd_verify(seed: u64, trials: usize, tolerance_override: Option<f64>) -> Result<RunReport> {
    if trials == 0 {
        return Err(crate::error::CliError::BadArgument("trials must be >= 1".into()));
    }
    let start = Instant::now();
    let mut table = Table::new(&["check", "trials", "failures", "worstSlack"]);
    let mut failed = 0;
    for index in 0..CHECKS.len() {
        let s = run_check(index, seed, trials, tolerance_override);
        failed += s.failures;
        table.push(vec![s.name.into(), s.trials.to_string(), s.failures.to_string(), slack(s.worst_slack)]);
    }
    let mut params = vec![("seed".to_string(), seed.to_string()), ("trials".to_string(), trials.to_string())];
    if let Some(tol) = tolerance_override {
        params.push(("tolerance".into(), tol.to_string()));
    }
    let mut report = RunReport::new("verify", params);
    report.tables.push(table);
    report.checks_failed = failed;
    report.elapsed = start.elapsed();
    Ok(report)
}
