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

//! Seeded sweep over thin families; writes the CSV report and plot data.
//!
//! `cargo run --release --example thin_sweep -- <out-dir>`

use std::path::PathBuf;

use hypersupport::experiment::{emit, fit_loglog_slope, run, ExperimentConfig, OutputFormat};
use hypersupport::verify::Strategy;

fn main() -> hypersupport::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    let config = ExperimentConfig {
        n_list: vec![2, 3],
        trials: 24,
        seed: Some(1),
        oracle_budget: 256,
        ..ExperimentConfig::default()
    };
    let outcome = run(&config)?;
    let report = dir.join("report.csv");
    let plot = dir.join("plotdata.csv");
    emit(&outcome.rows, OutputFormat::Csv, Some(&report), Some(&plot))?;
    println!("{} rows -> {}", outcome.rows.len(), report.display());
    for n in &config.n_list {
        let pts: Vec<(f64, f64)> = config
            .s_list
            .iter()
            .map(|&s| {
                let worst = outcome
                    .rows
                    .iter()
                    .filter(|r| r.n == *n && r.s == s && r.strategy == Strategy::Algorithm)
                    .map(|r| r.ratio)
                    .fold(0.0, f64::max);
                (s, worst)
            })
            .collect();
        println!(
            "n = {n}: worst-ratio slope {:.3}",
            fit_loglog_slope(&pts).unwrap_or(f64::NAN)
        );
    }
    println!("exit code {}", outcome.exit_code());
    Ok(())
}
