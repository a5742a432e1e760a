use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smoothspec_cli::commands::{self, Mode, OracleCompareArgs, RateScanArgs, SmoothArgs};
use smoothspec_cli::verify::cmd_verify;
use smoothspec_cli::{CliError, OutputOptions, RunReport, StateSpec};

#[derive(Parser, Debug)]
#[command(name = "smoothspec", version, about = "Smooth min/max-entropies, spectral rates and their checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct Output {
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    no_header: bool,

    /// Omit the leading `# ...` metadata line.
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// Master seed for random states and trials.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Min,
    Max,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// von Neumann, min- and max-entropy.
    Entropy {
        #[arg(long)]
        state: String,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Smooth min- or max-entropy over a list of epsilons.
    Smooth {
        #[arg(long)]
        state: String,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, value_enum, default_value = "min")]
        mode: ModeArg,
        #[arg(long)]
        conditional: bool,
        /// Block length for `iid:` states.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        json_witness: Option<PathBuf>,
    },
    /// Smooth entropy rates of an i.i.d. base over n and epsilon.
    Converge {
        #[arg(long)]
        state: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Spectral traces over a gamma grid and the transition brackets.
    RateScan {
        #[arg(long)]
        state: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        /// lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        gamma_grid: String,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.99")]
        thresholds: Vec<f64>,
        #[arg(long)]
        conditional: bool,
    },
    /// Seeded battery of operator inequalities and smoothing contracts.
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, hide = true, allow_hyphen_values = true)]
        corrupt_tolerance: Option<f64>,
    },
    /// Conditional lower bound against the reference optimizer.
    OracleCompare {
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let seed = cli.output.seed;
    let spec = |text: &str| StateSpec::parse(text, seed);
    let optional = |text: &Option<String>| text.as_deref().map(spec).transpose();
    match &cli.command {
        Command::Entropy { state, sigma } => commands::cmd_entropy(&spec(state)?, optional(sigma)?.as_ref()),
        Command::Smooth { state, sigma, eps, mode, conditional, n, json_witness } => {
            commands::cmd_smooth(&SmoothArgs {
                state: &spec(state)?,
                sigma: optional(sigma)?.as_ref(),
                epsilons: eps,
                mode: match mode {
                    ModeArg::Min => Mode::Min,
                    ModeArg::Max => Mode::Max,
                },
                conditional: *conditional,
                n: *n,
                json_witness: json_witness.as_deref(),
            })
        }
        Command::Converge { state, n, eps } => commands::cmd_converge(&spec(state)?, n, eps),
        Command::RateScan { state, n, gamma_grid, thresholds, conditional } => {
            let [t_low, t_high] = thresholds[..] else {
                return Err(CliError::BadArgument("--thresholds takes tLow,tHigh".into()));
            };
            commands::cmd_rate_scan(&RateScanArgs {
                state: &spec(state)?,
                gamma_grid: &commands::parse_gamma_grid(gamma_grid)?,
                n_list: n,
                thresholds: (t_low, t_high),
                conditional: *conditional,
            })
        }
        Command::Verify { trials, corrupt_tolerance } => cmd_verify(seed, *trials, *corrupt_tolerance),
        Command::OracleCompare { state, sigma, eps, trials } => commands::cmd_oracle_compare(&OracleCompareArgs {
            state: optional(state)?.as_ref(),
            sigma: optional(sigma)?.as_ref(),
            epsilons: eps,
            seed,
            trials: *trials,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = OutputOptions { header: !cli.output.no_header, timestamp: !cli.output.no_timestamp };
    let result = run(&cli).and_then(|report| {
        let text = report.render(options)?;
        match &cli.output.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|source| CliError::Io { path: path.display().to_string(), source })?,
            None => print!("{text}"),
        }
        Ok(report.checks_failed)
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
