use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use smoothspec::oracle::{smooth_hmin_conditional_oracle, ORACLE_MAX_DIM};
use smoothspec::random::random_bipartite;
use smoothspec::rates::{rate_profile, DenseConditional, DenseEntropy, IidSpectral, TraceFamily};
use smoothspec::smoothing::{
    smooth_hmax_classical, smooth_hmax_conditional_upper, smooth_hmax_unconditional, smooth_hmin_classical,
    smooth_hmin_conditional_lower, smooth_hmin_unconditional, SmoothingResult,
};
use smoothspec::spectrum::rate_scan;
use smoothspec::{
    h_max, h_max_unconditional, h_min, h_min_unconditional, iid_spectrum, von_neumann_entropy, BipartiteState,
    OperatorJson, QuantumState, Subsystem,
};

use crate::error::{CliError, Result};
use crate::report::{bits, grid, real, RunReport, Table};
use crate::state::{Resolved, StateSpec};
use crate::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

/// Largest gap allowed between the certified lower bound and the oracle.
pub const SANDWICH_TOLERANCE: f64 = 1e-3;

fn param(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn list<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// `S(AB) + Tr[rho_B log sigma_B]`, which is `S(A|B)` when `sigma_B = rho_B`.
fn conditional_von_neumann(rho_ab: &BipartiteState, sigma_b: &QuantumState) -> Result<f64> {
    let s_ab = von_neumann_entropy(rho_ab.state())?.bits();
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    let eig = sigma_b.op().eigh()?;
    let mut cross = 0.0;
    for (i, &s) in eig.values.iter().enumerate() {
        let v = eig.vector(i);
        let weight = (v.adjoint() * rho_b.op().matrix() * &v)[(0, 0)].re;
        if weight > 1e-12 {
            if s <= 1e-12 {
                return Ok(f64::NEG_INFINITY);
            }
            cross += weight * s.log2();
        }
    }
    Ok(s_ab + cross)
}

/// `S`, `Hmin` and `Hmax`; conditional when `sigma` is given or the state has a nontrivial `B`.
pub fn cmd_entropy(state: &StateSpec, sigma: Option<&StateSpec>) -> Result<RunReport> {
    let start = Instant::now();
    let mut params = vec![param("state", &state.payload)];
    let rho = state.resolve()?.dense()?;
    let sigma_b = match sigma {
        Some(spec) => {
            params.push(param("sigma", &spec.payload));
            Some(spec.resolve_single()?)
        }
        None if rho.dim_b() > 1 => Some(rho.marginal(Subsystem::B)?),
        None => None,
    };
    let (s, hmin, hmax) = match &sigma_b {
        Some(sig) => (conditional_von_neumann(&rho, sig)?, h_min(&rho, sig)?.bits(), h_max(&rho, sig)?.bits()),
        None => {
            let r = rho.state();
            (von_neumann_entropy(r)?.bits(), h_min_unconditional(r)?.bits(), h_max_unconditional(r)?.bits())
        }
    };
    let mut table = Table::new(&["quantity", "bits"]);
    for (name, v) in [("S", s), ("Hmin", hmin), ("Hmax", hmax)] {
        table.push(vec![name.into(), bits(v)]);
    }
    let mut report = RunReport::new("entropy", params);
    report.tables.push(table);
    report.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct SmoothArgs<'a> {
    pub state: &'a StateSpec,
    pub sigma: Option<&'a StateSpec>,
    pub epsilons: &'a [f64],
    pub mode: Mode,
    pub conditional: bool,
    /// Block length for i.i.d. specifications.
    pub n: u32,
    pub json_witness: Option<&'a Path>,
}

#[derive(Serialize)]
struct WitnessRecord {
    epsilon: f64,
    method: String,
    witness: OperatorJson,
}

/// Smoothed entropy per `epsilon`. Conditional min-entropy rows carry the
/// certified lower bound, followed by an oracle row at small dimension.
pub fn cmd_smooth(args: &SmoothArgs) -> Result<RunReport> {
    let start = Instant::now();
    if let Some(&eps) = args.epsilons.iter().find(|e| !(0.0..1.0).contains(*e)) {
        return Err(CliError::BadArgument(format!("epsilon {eps} is outside [0, 1)")));
    }
    let mut params = vec![
        param("state", &args.state.payload),
        param("eps", list(args.epsilons)),
        param("mode", if args.mode == Mode::Min { "min" } else { "max" }),
    ];
    let resolved = args.state.resolve()?;
    let mut results: Vec<SmoothingResult> = Vec::new();
    match (&resolved, args.conditional) {
        (Resolved::Iid(base), false) => {
            params.push(param("n", args.n));
            let spec = iid_spectrum(base, args.n)?;
            for &eps in args.epsilons {
                results.push(match args.mode {
                    Mode::Min => smooth_hmin_classical(&spec, eps)?,
                    Mode::Max => smooth_hmax_classical(&spec, eps)?,
                });
            }
        }
        (_, false) => {
            let rho = resolved.dense()?;
            for &eps in args.epsilons {
                results.push(match args.mode {
                    Mode::Min => smooth_hmin_unconditional(rho.state(), eps)?,
                    Mode::Max => smooth_hmax_unconditional(rho.state(), eps)?,
                });
            }
        }
        (_, true) => {
            params.push(param("conditional", true));
            let rho = resolved.dense()?;
            let sigma_b = match args.sigma {
                Some(spec) => {
                    params.push(param("sigma", &spec.payload));
                    spec.resolve_single()?
                }
                None => rho.marginal(Subsystem::B)?,
            };
            let full_rank =
                sigma_b.op().min_eigenvalue()? > smoothspec::TOL.rank_cutoff * sigma_b.op().max_eigenvalue()?;
            for &eps in args.epsilons {
                match args.mode {
                    Mode::Min => {
                        results.push(smooth_hmin_conditional_lower(&rho, &sigma_b, eps)?);
                        if rho.dim() <= ORACLE_MAX_DIM && full_rank {
                            results.push(smooth_hmin_conditional_oracle(&rho, &sigma_b, eps)?);
                        }
                    }
                    Mode::Max => results.push(smooth_hmax_conditional_upper(&rho, &sigma_b, eps)?),
                }
            }
        }
    }

    let mut table = Table::new(&["epsilon", "bits", "method", "distance"]);
    for r in &results {
        table.push(vec![grid(r.epsilon), bits(r.value.bits()), r.method.to_string(), real(r.distance)]);
    }
    if let Some(path) = args.json_witness {
        let records: Vec<WitnessRecord> = results
            .iter()
            .filter_map(|r| {
                r.witness.as_ref().map(|w| WitnessRecord {
                    epsilon: r.epsilon,
                    method: r.method.to_string(),
                    witness: OperatorJson::from_operator(w.op()),
                })
            })
            .collect();
        let text = serde_json::to_string_pretty(&records)?;
        std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    let mut report = RunReport::new("smooth", params);
    report.tables.push(table);
    report.elapsed = start.elapsed();
    Ok(report)
}

fn iid_base(state: &StateSpec) -> Result<Vec<f64>> {
    match state.resolve()? {
        Resolved::Iid(base) => Ok(base),
        Resolved::Dense(_) => Err(CliError::bad_spec(&state.payload, "expected an i.i.d. base iid:p1,p2,...")),
    }
}

/// Smooth entropy rates of `rho^(x)n` next to the von Neumann entropy of the base.
pub fn cmd_converge(state: &StateSpec, n_list: &[u32], epsilons: &[f64]) -> Result<RunReport> {
    let start = Instant::now();
    let base = iid_base(state)?;
    let svn = smoothspec::entropy::shannon_entropy(&base);
    let mut table = Table::new(&["n", "epsilon", "hmin_rate", "hmax_rate", "svn"]);
    for row in rate_scan(&base, n_list, epsilons)? {
        table.push(vec![row.n.to_string(), grid(row.epsilon), bits(row.hmin_rate), bits(row.hmax_rate), bits(svn)]);
    }
    let mut report = RunReport::new(
        "converge",
        vec![param("state", &state.payload), param("n", list(n_list)), param("eps", list(epsilons))],
    );
    report.tables.push(table);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Parses `lo:hi:step` into an ascending grid including both ends.
pub fn parse_gamma_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || CliError::BadArgument(format!("gamma grid `{text}` is not lo:hi:step"));
    let parts: Vec<f64> =
        text.split(':').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(CliError::BadArgument(format!("gamma grid `{text}` has too many points")));
    }
    Ok((0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
}

pub struct RateScanArgs<'a> {
    pub state: &'a StateSpec,
    pub gamma_grid: &'a [f64],
    pub n_list: &'a [u32],
    pub thresholds: (f64, f64),
    pub conditional: bool,
}

/// Traces over `n x gamma`, then the transition brackets at the largest `n`.
/// I.i.d. bases use type classes; dense states with a nontrivial `B` (or
/// `conditional`) use the conditional functional on tensor powers.
pub fn cmd_rate_scan(args: &RateScanArgs) -> Result<RunReport> {
    let start = Instant::now();
    let family: Box<dyn TraceFamily> = match args.state.resolve()? {
        Resolved::Iid(base) => Box::new(IidSpectral { base }),
        Resolved::Dense(rho_ab) if args.conditional || rho_ab.dim_b() > 1 => Box::new(DenseConditional { rho_ab }),
        Resolved::Dense(rho) => Box::new(DenseEntropy { rho: rho.state().clone() }),
    };
    let (t_low, t_high) = args.thresholds;
    let profile = rate_profile(family.as_ref(), args.n_list, args.gamma_grid, t_low, t_high)?;
    let mut table = Table::new(&["n", "gamma", "trace"]);
    for row in &profile.rows {
        table.push(vec![row.n.to_string(), grid(row.gamma), real(row.trace)]);
    }
    let mut summary = Table::new(&["lowerBracket", "upperBracket"]);
    summary.push(vec![grid(profile.lower_bracket), grid(profile.upper_bracket)]);
    let mut report = RunReport::new(
        "rate-scan",
        vec![
            param("state", &args.state.payload),
            param("n", list(args.n_list)),
            param("thresholds", format!("{t_low},{t_high}")),
        ],
    );
    report.tables.push(table);
    report.tables.push(summary);
    report.elapsed = start.elapsed();
    Ok(report)
}

pub struct OracleCompareArgs<'a> {
    /// A fixed instance; random 2x2 instances when absent.
    pub state: Option<&'a StateSpec>,
    pub sigma: Option<&'a StateSpec>,
    pub epsilons: &'a [f64],
    pub seed: u64,
    pub trials: usize,
}

/// Certified lower bound against the oracle. `checks_failed` counts rows
/// where the bound exceeds the oracle by more than [`SANDWICH_TOLERANCE`].
pub fn cmd_oracle_compare(args: &OracleCompareArgs) -> Result<RunReport> {
    let start = Instant::now();
    let mut params = vec![param("eps", list(args.epsilons))];
    let instances: Vec<BipartiteState> = match args.state {
        Some(spec) => {
            params.push(param("state", &spec.payload));
            vec![spec.resolve()?.dense()?]
        }
        None => {
            params.push(param("seed", args.seed));
            params.push(param("trials", args.trials));
            (0..args.trials)
                .map(|t| random_bipartite(&mut trial_rng(args.seed, 0, t as u64), 2, 2))
                .collect::<Result<_, _>>()?
        }
    };
    let sigma = args.sigma.map(|s| s.resolve_single()).transpose()?;
    let mut table = Table::new(&["trial", "epsilon", "lower", "oracle", "gap"]);
    let mut failed = 0;
    for (t, rho) in instances.iter().enumerate() {
        let sigma_b = match &sigma {
            Some(s) => s.clone(),
            None => rho.marginal(Subsystem::B)?,
        };
        for &eps in args.epsilons {
            let lower = smooth_hmin_conditional_lower(rho, &sigma_b, eps)?.value.bits();
            let oracle = smooth_hmin_conditional_oracle(rho, &sigma_b, eps)?.value.bits();
            if lower > oracle + SANDWICH_TOLERANCE {
                failed += 1;
            }
            table.push(vec![t.to_string(), grid(eps), bits(lower), bits(oracle), bits(oracle - lower)]);
        }
    }
    let mut report = RunReport::new("oracle-compare", params);
    report.tables.push(table);
    report.checks_failed = failed;
    report.elapsed = start.elapsed();
    Ok(report)
}
