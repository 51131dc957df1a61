//   Copyright 2026 hypersupport developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypersupport::experiment::{
    emit, generate_body, run, BodySource, ExperimentConfig, OutputFormat, S0Policy, EXIT_USAGE,
};
use hypersupport::verify::ThinKind;
use hypersupport::Error;

const SEED_ENV: &str = "HYPERSUPPORT_SEED";

#[derive(Parser)]
#[command(
    name = "hypersupport",
    version,
    about = "Supporting-hyperplane selection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct OutputArgs {
    /// Report format: csv or json.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-series worst ratios for log-log plots.
    #[arg(long)]
    plotdata: Option<PathBuf>,
    /// Directory receiving the traces of failing instances.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded thin-family body as JSON.
    Generate {
        #[arg(long)]
        kind: ThinKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        thinness: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a sweep over generated bodies.
    Sweep {
        #[arg(long, num_args = 1.., default_values_t = [2usize, 3, 4, 5])]
        n: Vec<usize>,
        #[arg(long, num_args = 1.., default_values_t = [1e-1, 1e-3, 1e-6])]
        s: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// `paper` for 1/(2n) or `fixed:<value>`.
        #[arg(long, default_value = "paper")]
        s0: S0Policy,
        #[arg(long, num_args = 1..)]
        kinds: Option<Vec<ThinKind>>,
        #[arg(long, num_args = 1..)]
        thinness: Option<Vec<f64>>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random directions in the oracle candidate set.
        #[arg(long)]
        oracle_budget: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn env_seed() -> Result<Option<u64>, Error> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Input(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn resolve_seed(explicit: Option<u64>) -> Result<u64, Error> {
    match explicit {
        Some(s) => Ok(s),
        None => env_seed()?.ok_or_else(|| Error::Input(format!("no seed: pass --seed or set {SEED_ENV}"))),
    }
}

fn apply_output(config: &mut ExperimentConfig, output: OutputArgs) {
    if let Some(f) = output.format {
        config.output.format = f;
    }
    if output.out.is_some() {
        config.output.report = output.out;
    }
    if output.plotdata.is_some() {
        config.output.plotdata = output.plotdata;
    }
    if output.trace_dir.is_some() {
        config.output.trace_dir = output.trace_dir;
    }
}

fn execute(config: ExperimentConfig) -> Result<u8, Error> {
    let outcome = run(&config)?;
    let out = &config.output;
    emit(
        &outcome.rows,
        out.format,
        out.report.as_deref(),
        out.plotdata.as_deref(),
    )?;
    if let Some(first) = outcome.failures.first() {
        eprintln!(
            "{} failing instance(s); first: n={} trial {}: {}",
            outcome.failures.len(),
            first.n,
            first.trial_id,
            first.detail
        );
        match &out.trace_dir {
            Some(dir) => {
                for path in outcome.dump_traces(dir)? {
                    eprintln!("trace written to {}", path.display());
                }
            }
            None => {
                if let Some(trace) = &first.trace {
                    eprintln!("{}", trace.to_json()?);
                }
            }
        }
    }
    Ok(outcome.exit_code() as u8)
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            thinness,
            seed,
            out,
        } => {
            let body = generate_body(kind, n, thinness, resolve_seed(seed)?)?;
            match out {
                Some(path) => body.write(&path)?,
                None => println!("{}", body.to_json()?),
            }
            Ok(0)
        }
        Command::Run { config, output } => {
            let text =
                std::fs::read_to_string(&config).map_err(|e| Error::Input(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if cfg.seed.is_none() {
                cfg.seed = env_seed()?;
            }
            resolve_relative_paths(&mut cfg, config.parent().unwrap_or(Path::new(".")));
            apply_output(&mut cfg, output);
            execute(cfg)
        }
        Command::Sweep {
            n,
            s,
            trials,
            s0,
            kinds,
            thinness,
            seed,
            oracle_budget,
            output,
        } => {
            let mut cfg = ExperimentConfig {
                n_list: n,
                s_list: s,
                trials,
                s0,
                seed: Some(resolve_seed(seed)?),
                ..ExperimentConfig::default()
            };
            if let BodySource::Generated { kinds: k, thinness: t } = &mut cfg.bodies {
                if let Some(kinds) = kinds {
                    *k = kinds;
                }
                if let Some(thinness) = thinness {
                    *t = thinness;
                }
            }
            if let Some(b) = oracle_budget {
                cfg.oracle_budget = b;
            }
            apply_output(&mut cfg, output);
            execute(cfg)
        }
    }
}

/// Body files in a config are relative to the config's directory.
fn resolve_relative_paths(cfg: &mut ExperimentConfig, base: &Path) {
    if let BodySource::Files { paths } = &mut cfg.bodies {
        for p in paths.iter_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Input(_) | Error::Json(_) => EXIT_USAGE,
                Error::Io(_) | Error::Csv(_) => EXIT_USAGE,
                _ => 1,
            };
            ExitCode::from(code as u8)
        }
    }
}
