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

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centering::DEFAULT_MVEE_EPS;
use crate::error::{input, Error, Result};
use crate::selector::CONDITION_TOLERANCE;
use crate::verify::{ThinKind, DEFAULT_DIRECTION_BUDGET};

/// How `s₀` is chosen for each dimension.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S0Policy {
    /// `s₀ = 1/(2n)`.
    #[default]
    Paper,
    Fixed(f64),
}

impl S0Policy {
    pub fn value(self, n: usize) -> f64 {
        match self {
            S0Policy::Paper => 1.0 / (2.0 * n as f64),
            S0Policy::Fixed(v) => v,
        }
    }
}

impl fmt::Display for S0Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            S0Policy::Paper => f.write_str("paper"),
            S0Policy::Fixed(v) => write!(f, "fixed:{v}"),
        }
    }
}

/// Parses `paper` or `fixed:<value>`.
impl FromStr for S0Policy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "paper" {
            return Ok(S0Policy::Paper);
        }
        let v = s
            .strip_prefix("fixed:")
            .and_then(|v| v.parse::<f64>().ok())
            .ok_or_else(|| Error::Input(format!("expected `paper` or `fixed:<value>`, got {s:?}")))?;
        Ok(S0Policy::Fixed(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodySource {
    Generated { kinds: Vec<ThinKind>, thinness: Vec<f64> },
    Files { paths: Vec<PathBuf> },
}

impl BodySource {
    pub fn paths(&self) -> &[PathBuf] {
        match self {
            BodySource::Files { paths } => paths,
            BodySource::Generated { .. } => &[],
        }
    }
}

impl Default for BodySource {
    fn default() -> Self {
        BodySource::Generated {
            kinds: ThinKind::ALL.to_vec(),
            thinness: vec![1.0, 1e-2, 1e-4, 1e-6],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => input(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputPaths {
    /// Report destination; standard output when absent.
    pub report: Option<PathBuf>,
    pub format: OutputFormat,
    pub plotdata: Option<PathBuf>,
    pub trace_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative tolerance for the recursion conditions.
    pub condition: f64,
    /// Stopping gap of the enclosing-ellipsoid iteration.
    pub mvee_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            condition: CONDITION_TOLERANCE,
            mvee_eps: DEFAULT_MVEE_EPS,
        }
    }
}

/// Sweep description; the JSON config file mirrors this struct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_list: Vec<usize>,
    /// Generated bodies per dimension.
    pub trials: usize,
    pub s_list: Vec<f64>,
    pub s0: S0Policy,
    pub bodies: BodySource,
    pub seed: Option<u64>,
    /// Random boundary directions per body, on top of the vertex directions.
    pub random_directions: usize,
    /// Random directions in the oracle candidate set.
    pub oracle_budget: usize,
    pub output: OutputPaths,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_list: vec![2, 3, 4, 5],
            trials: 100,
            s_list: vec![1e-1, 1e-3, 1e-6],
            s0: S0Policy::Paper,
            bodies: BodySource::default(),
            seed: None,
            random_directions: 8,
            oracle_budget: DEFAULT_DIRECTION_BUDGET,
            output: OutputPaths::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid config: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Structural checks. File-sourced bodies are checked against `s₀`
    /// after loading, once their dimension is known.
    pub fn validate(&self) -> Result<()> {
        if self.s_list.is_empty() {
            return input("s_list is empty");
        }
        if self.s_list.iter().any(|s| !(*s >= 0.0 && *s < 1.0)) {
            return input("every s must lie in [0, 1)");
        }
        if let S0Policy::Fixed(v) = self.s0 {
            if !(v > 0.0 && v < 1.0) {
                return input(format!("s0 = {v} must lie in (0, 1)"));
            }
        }
        if self.seed.is_none() {
            return input("a seed is required");
        }
        if !(self.tolerances.condition > 0.0) {
            return input("condition tolerance must be positive");
        }
        if !(self.tolerances.mvee_eps > 0.0 && self.tolerances.mvee_eps <= 0.1) {
            return input("mvee_eps must lie in (0, 0.1]");
        }
        match &self.bodies {
            BodySource::Generated { kinds, thinness } => {
                if self.n_list.is_empty() || self.n_list.contains(&0) {
                    return input("n_list must be nonempty with positive entries");
                }
                if self.trials == 0 {
                    return input("trials must be positive");
                }
                if kinds.is_empty() || thinness.is_empty() {
                    return input("generated bodies need at least one kind and one thinness");
                }
                if thinness.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
                    return input("thinness values must lie in (0, 1]");
                }
                for &n in &self.n_list {
                    let s0 = self.s0.value(n);
                    if let Some(s) = self.s_list.iter().find(|&&s| s > s0) {
                        return input(format!("s = {s} exceeds s0 = {s0} for n = {n}"));
                    }
                }
            }
            BodySource::Files { paths } => {
                if paths.is_empty() {
                    return input("no body files given");
                }
            }
        }
        Ok(())
    }
}
