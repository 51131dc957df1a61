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

//! Seeded sweeps: generate or load bodies, well-center them, pick boundary
//! points, run the selector and the comparison strategies, and collect
//! report rows.

mod config;
mod report;

pub use config::{BodySource, ExperimentConfig, OutputFormat, OutputPaths, S0Policy, Tolerances};
pub use report::{
    csv_without_wall_ms, emit, fit_loglog_slope, plot_series, read_csv, read_json, rows_to_csv, rows_to_json,
    write_csv, write_plotdata, PlotPoint, ReportRow,
};

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::body::VPolytope;
use crate::centering::{inner_containment, outer_containment, well_center};
use crate::error::{Error, Result};
use crate::numkit::vector::scale;
use crate::sampling::{split, unit_vector};
use crate::selector::{select_hyperplane_with, SelectionTrace, SelectorConfig, StepCase};
use crate::verify::{check_bound, naive_strategies, oracle_best_ratio, thin_family, CandidateSet, Strategy, ThinKind};

/// Exit code for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit code when the algorithm violated its bound or an invariant.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit code for invalid configuration or unreadable input.
pub const EXIT_USAGE: i32 = 2;

/// Directions used for the inner-containment diagnostic.
const CONTAINMENT_DIRECTIONS: usize = 200;

/// Seeded body from a thin family: rotated, each vertex radially rescaled
/// by a factor in `[0.75, 1.25]`, then translated. In one dimension every
/// kind gives an interval with log-uniform half-length in `[1e-3, 1e3]`.
pub fn generate_body(kind: ThinKind, n: usize, thinness: f64, seed: u64) -> Result<VPolytope> {
    let mut rng = split(seed, 0);
    if n == 1 {
        let half = 10f64.powf(rng.random_range(-3.0..=3.0));
        let shift = rng.random_range(-1.0..=1.0) * half;
        return VPolytope::new(1, vec![vec![shift - half], vec![shift + half]]);
    }
    let base = thin_family(kind, n, thinness, Some(seed))?;
    let shift: Vec<f64> = unit_vector(&mut rng, n);
    let factors: Vec<f64> = (0..base.vertices().len())
        .map(|_| rng.random_range(0.75..=1.25))
        .collect();
    let vertices = base
        .vertices()
        .iter()
        .zip(&factors)
        .map(|(v, f)| v.iter().zip(&shift).map(|(x, t)| f * x + t).collect())
        .collect();
    VPolytope::new(n, vertices)
}

/// Well-centering quality of one body.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyDiagnostics {
    pub n: usize,
    pub body_index: usize,
    pub body_kind: String,
    pub thinness: f64,
    /// `max_v Σ(vⁱ/(n·aⁱ))²`; at most 1 when `S ⊂ nE`.
    pub outer: f64,
    /// `min_u h_S(u)/h_E(u)`; at least 1 when `E ⊂ S`.
    pub inner: f64,
}

/// Per-instance facts that are not part of the CSV schema.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDiagnostics {
    pub n: usize,
    pub trial_id: String,
    pub depth: usize,
    pub steps: usize,
    pub conditions_passed: bool,
}

/// A failing instance: bound violation, invariant violation, or a numerical
/// error inside the algorithm.
#[derive(Debug, Clone)]
pub struct Failure {
    pub n: usize,
    pub trial_id: String,
    pub detail: String,
    pub trace: Option<SelectionTrace>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub rows: Vec<ReportRow>,
    pub bodies: Vec<BodyDiagnostics>,
    pub instances: Vec<InstanceDiagnostics>,
    pub failures: Vec<Failure>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }

    /// Writes the trace of every failure as `<n>-<trial>.json` in `dir`.
    pub fn dump_traces(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for f in &self.failures {
            if let Some(trace) = &f.trace {
                let path = dir.join(format!("{}-{}.json", f.n, f.trial_id.replace(':', "-")));
                trace.write(&path)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

struct BodyJob {
    n: usize,
    index: usize,
    kind: String,
    thinness: f64,
    seed: u64,
    source: JobSource,
}

enum JobSource {
    Generated(ThinKind),
    File,
}

fn jobs(config: &ExperimentConfig, seed: u64) -> Vec<BodyJob> {
    let mut out = Vec::new();
    match &config.bodies {
        BodySource::Generated { kinds, thinness } => {
            for &n in &config.n_list {
                for index in 0..config.trials {
                    let kind = kinds[index % kinds.len()];
                    let eps = thinness[(index / kinds.len()) % thinness.len()];
                    out.push(BodyJob {
                        n,
                        index,
                        kind: kind.as_str().to_string(),
                        thinness: eps,
                        seed: split(seed, ((n as u64) << 32) | index as u64).random(),
                        source: JobSource::Generated(kind),
                    });
                }
            }
        }
        BodySource::Files { paths } => {
            for (index, path) in paths.iter().enumerate() {
                out.push(BodyJob {
                    n: 0,
                    index,
                    kind: format!(
                        "file:{}",
                        path.file_stem()
                            .map(|s| s.to_string_lossy().into_owned())
                            .unwrap_or_default()
                    ),
                    thinness: f64::NAN,
                    seed: split(seed, index as u64).random(),
                    source: JobSource::File,
                });
            }
        }
    }
    out
}

/// Loads every file-sourced body up front so unreadable inputs surface as
/// usage errors before any work starts.
fn load_files(config: &ExperimentConfig) -> Result<Vec<VPolytope>> {
    match &config.bodies {
        BodySource::Files { paths } => paths
            .iter()
            .map(|p| VPolytope::read(p).map_err(|e| Error::Input(format!("{}: {e}", p.display()))))
            .collect(),
        BodySource::Generated { .. } => Ok(Vec::new()),
    }
}

#[derive(Default)]
struct BodyResult {
    rows: Vec<ReportRow>,
    body: Option<BodyDiagnostics>,
    instances: Vec<InstanceDiagnostics>,
    failures: Vec<Failure>,
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn run_body(job: &BodyJob, body: Result<VPolytope>, config: &ExperimentConfig) -> BodyResult {
    let mut out = BodyResult::default();
    let fail = |n: usize, trial_id: String, detail: String| Failure {
        n,
        trial_id,
        detail,
        trace: None,
    };
    let body_id = format!("{:04}", job.index);
    let body = match body {
        Ok(b) => b,
        Err(e) => {
            out.failures
                .push(fail(job.n, body_id, format!("body generation failed: {e}")));
            return out;
        }
    };
    let n = body.dim();
    let s0 = config.s0.value(n);
    let wc = match well_center(&body, config.tolerances.mvee_eps) {
        Ok(wc) => wc,
        Err(e) => {
            out.failures
                .push(fail(n, body_id, format!("well-centering failed: {e}")));
            return out;
        }
    };
    let fb = &wc.frame_body;
    let a = &wc.frame.semi_axes;
    let mut rng = split(job.seed, 1);
    let dirs: Vec<Vec<f64>> = (0..CONTAINMENT_DIRECTIONS).map(|_| unit_vector(&mut rng, n)).collect();
    let thinness = if job.thinness.is_nan() {
        a[n - 1] / a[0]
    } else {
        job.thinness
    };
    out.body = Some(BodyDiagnostics {
        n,
        body_index: job.index,
        body_kind: job.kind.clone(),
        thinness,
        outer: outer_containment(fb, a),
        inner: inner_containment(fb, a, &dirs).unwrap_or(f64::NAN),
    });

    let candidates = match CandidateSet::build(fb, config.oracle_budget, split(job.seed, 2).random()) {
        Ok(c) => c,
        Err(e) => {
            out.failures
                .push(fail(n, body_id, format!("oracle candidates failed: {e}")));
            return out;
        }
    };

    let mut directions: Vec<Vec<f64>> = fb.vertices().to_vec();
    directions.extend((0..config.random_directions).map(|_| unit_vector(&mut rng, n)));
    let selector = SelectorConfig {
        condition_tolerance: config.tolerances.condition,
        ..SelectorConfig::default()
    };

    for (di, d) in directions.iter().enumerate() {
        let p = match fb.ray_boundary(d) {
            Ok(p) => p,
            Err(e) => {
                out.failures
                    .push(fail(n, format!("{body_id}:{di:03}"), format!("ray failed: {e}")));
                continue;
            }
        };
        for (si, &s) in config.s_list.iter().enumerate() {
            let trial_id = format!("{body_id}:{di:03}:{si}");
            let y = scale(&p, 1.0 - s);
            let row =
                |strategy: Strategy, ratio: f64, bound: f64, depth: usize, case: &str, perturbed: bool, ms: f64| {
                    ReportRow {
                        n,
                        trial_id: trial_id.clone(),
                        body_kind: job.kind.clone(),
                        thinness,
                        s,
                        s0,
                        strategy,
                        ratio,
                        bound,
                        depth,
                        case_terminated: case.to_string(),
                        perturbed,
                        wall_ms: ms,
                    }
                };

            let t = Instant::now();
            let selection = match select_hyperplane_with(fb, a, &y, s0, &selector) {
                Ok(sel) => sel,
                Err(Error::Invariant { k, detail, trace }) => {
                    out.failures.push(Failure {
                        n,
                        trial_id: trial_id.clone(),
                        detail: format!("invariant violated at k={k}: {detail}"),
                        trace: Some(*trace),
                    });
                    continue;
                }
                Err(e) => {
                    out.failures
                        .push(fail(n, trial_id.clone(), format!("selection failed: {e}")));
                    continue;
                }
            };
            let alg_ms = elapsed_ms(t);
            let alg = match check_bound(fb, &y, s0, &selection) {
                Ok(r) => r,
                Err(e) => {
                    out.failures.push(Failure {
                        n,
                        trial_id: trial_id.clone(),
                        detail: format!("verification failed: {e}"),
                        trace: Some(selection.trace),
                    });
                    continue;
                }
            };
            let trace = &selection.trace;
            let conditions_passed = trace.steps.iter().all(|st| st.conditions.passed());
            let depth = trace.depth();
            out.instances.push(InstanceDiagnostics {
                n,
                trial_id: trial_id.clone(),
                depth,
                steps: trace.steps.len(),
                conditions_passed,
            });
            let case = match trace.outcome.as_ref().map(|f| f.case_terminated) {
                Some(StepCase::Initial) => "initial",
                Some(StepCase::CaseI) => "case_i",
                Some(StepCase::TerminalK1) => "terminal_k1",
                Some(StepCase::CaseII) | None => "unknown",
            };
            out.rows.push(row(
                Strategy::Algorithm,
                alg.ratio,
                alg.bound,
                depth,
                case,
                trace.perturbed(),
                alg_ms,
            ));
            if !alg.within_bound() {
                out.failures.push(Failure {
                    n,
                    trial_id: trial_id.clone(),
                    detail: format!("ratio {:.6e} exceeds bound {:.6e}", alg.ratio, alg.bound),
                    trace: Some(trace.clone()),
                });
            } else if !conditions_passed || depth + 1 > n {
                out.failures.push(Failure {
                    n,
                    trial_id: trial_id.clone(),
                    detail: format!("recursion invariants failed (depth {depth})"),
                    trace: Some(trace.clone()),
                });
            }

            let t = Instant::now();
            let naive = match naive_strategies(fb, &y, s0, &candidates) {
                Ok(r) => r,
                Err(e) => {
                    out.failures
                        .push(fail(n, trial_id.clone(), format!("naive strategies failed: {e}")));
                    continue;
                }
            };
            let naive_ms = elapsed_ms(t) / 3.0;
            for r in &naive {
                out.rows
                    .push(row(r.strategy, r.ratio, r.bound, 0, "n/a", false, naive_ms));
            }

            let t = Instant::now();
            let mut extra = vec![alg.normal.clone()];
            extra.extend(naive.iter().map(|r| r.normal.clone()));
            match oracle_best_ratio(fb, &y, s0, &candidates, &extra) {
                Ok(best) => out.rows.push(row(
                    Strategy::OracleBest,
                    best.ratio,
                    best.bound,
                    0,
                    "n/a",
                    false,
                    elapsed_ms(t),
                )),
                Err(e) => out
                    .failures
                    .push(fail(n, trial_id.clone(), format!("oracle failed: {e}"))),
            }
        }
    }
    out
}

/// Runs every instance of `config`. Fails only on configuration or input
/// errors; algorithm failures are collected in the outcome.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let seed = config.seed.ok_or_else(|| Error::Input("a seed is required".into()))?;
    let files = load_files(config)?;
    if let BodySource::Files { .. } = config.bodies {
        for (body, path) in files.iter().zip(config.bodies.paths()) {
            let n = body.dim();
            let s0 = config.s0.value(n);
            if let Some(s) = config.s_list.iter().find(|&&s| s > s0) {
                return Err(Error::Input(format!(
                    "s = {s} exceeds s0 = {s0} for {} (n = {n})",
                    path.display()
                )));
            }
        }
    }
    let jobs = jobs(config, seed);
    let results: Vec<BodyResult> = jobs
        .par_iter()
        .map(|job| {
            let body = match &job.source {
                JobSource::Generated(kind) => generate_body(*kind, job.n, job.thinness, job.seed),
                JobSource::File => Ok(files[job.index].clone()),
            };
            run_body(job, body, config)
        })
        .collect();

    let mut outcome = RunOutcome::default();
    for r in results {
        outcome.rows.extend(r.rows);
        outcome.bodies.extend(r.body);
        outcome.instances.extend(r.instances);
        outcome.failures.extend(r.failures);
    }
    outcome
        .rows
        .sort_by(|a, b| (a.n, &a.trial_id, a.strategy).cmp(&(b.n, &b.trial_id, b.strategy)));
    outcome
        .instances
        .sort_by(|a, b| (a.n, &a.trial_id).cmp(&(b.n, &b.trial_id)));
    outcome
        .failures
        .sort_by(|a, b| (a.n, &a.trial_id).cmp(&(b.n, &b.trial_id)));
    outcome.bodies.sort_by_key(|b| (b.n, b.body_index));
    Ok(outcome)
}
