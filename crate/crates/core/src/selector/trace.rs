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

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::body::Hyperplane;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCase {
    /// First step at `k = n`; favorable if `favorable` is set on the record.
    Initial,
    /// Favorable level `k ≥ 2`: the recursion stops here.
    CaseI,
    /// Unfavorable level: the recursion descends to `k − 1`.
    CaseII,
    /// Reached `k = 1`.
    TerminalK1,
}

/// Residuals of the three recursion conditions for one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    /// `|u·p − h|`.
    pub a_plane_residual: f64,
    /// Distance of `y` from the segment `[0, p]`.
    pub a_segment_residual: f64,
    /// `max_i (|pⁱ| − wᵢ)`, positive when `p` leaves the box.
    pub a_box_excess: f64,
    /// `dist(y, P)/dist(0, P)`.
    pub b_ratio: f64,
    pub b_limit: f64,
    /// `max_v (ũ·v − h)` over frame-body vertices for the lifted plane.
    pub c_excess: f64,
    pub tolerance: f64,
    pub a_pass: bool,
    pub b_pass: bool,
    pub c_pass: bool,
}

impl ConditionCheck {
    pub fn passed(&self) -> bool {
        self.a_pass && self.b_pass && self.c_pass
    }
}

/// Constructions made when a level is unfavorable. Coordinates are those of
/// level `k` after the face reordering, except `r` and `r_plus` which are
/// recorded before it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentRecord {
    /// Closest point of `P_k` to the origin.
    pub r: Vec<f64>,
    /// Exit point of the segment `[0, r]` through the box boundary.
    pub r_plus: Vec<f64>,
    /// Current-coordinate index of the exit face before reordering.
    pub face_index: usize,
    /// Frame axis that became the last coordinate, and whether it was flipped.
    pub face_axis: usize,
    pub face_flipped: bool,
    pub q_plus: Vec<f64>,
    pub q_zero: Vec<f64>,
    pub q_minus: Vec<f64>,
    /// `(α, β)` with `α·p_k + β·e_k ∈ ℓ_k ∩ Q_k⁻`.
    pub line_params: (f64, f64),
    /// `(|r|² + b·r^k)/|π(r)|²`, diagnostic only.
    pub lambda_diag: f64,
    /// `P_{k−1}` in the coordinates of level `k − 1`.
    pub next_plane: Hyperplane,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub k: usize,
    pub case: StepCase,
    pub favorable_ratio: f64,
    pub gamma: f64,
    pub favorable: bool,
    pub perturbed: bool,
    /// Conditions of the state at level `k`.
    pub conditions: ConditionCheck,
    pub descent: Option<DescentRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFinal {
    pub hyperplane_frame: Hyperplane,
    /// `dist(y, P) / diam(P^⊥ ∩ S)`.
    pub ratio: f64,
    pub bound: f64,
    /// Achievable bound for the level at which the recursion stopped.
    pub level_bound: f64,
    pub depth: usize,
    pub case_terminated: StepCase,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub n: usize,
    pub s: f64,
    pub s0: f64,
    pub steps: Vec<TraceStep>,
    #[serde(rename = "final")]
    pub outcome: Option<TraceFinal>,
}

impl SelectionTrace {
    pub fn depth(&self) -> usize {
        self.steps.iter().filter(|s| s.case == StepCase::CaseII).count()
    }

    pub fn perturbed(&self) -> bool {
        self.steps.iter().any(|s| s.perturbed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}
