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

//! Recursive selection of a supporting hyperplane whose distance to an
//! interior point `y` is small relative to the body's chord in the normal
//! direction.
//!
//! Everything here works in the frame produced by
//! [`well_center`](crate::centering::well_center): the inner ellipsoid is
//! `{Σ(xⁱ/aⁱ)² ≤ 1}` and the body sits inside the box `R_n = ∏[−n·aⁱ, n·aⁱ]`.
//!
//! The initial step takes the supporting hyperplane `P_n` at the boundary
//! point on the ray through `y`. If the box chord along its normal is long
//! compared with its distance to the origin, `P_n` is returned. Otherwise the
//! recursion slices `P_k` with the lower face `x^k = −b_k` of the (dilated,
//! projected) box, drops the last coordinate, and repeats in dimension `k−1`,
//! until a level is favorable or `k = 1`. The hyperplane reached is then
//! lifted back to `n` dimensions and translated until it supports the body.
//!
//! Each intermediate state is checked against three conditions (point on the
//! plane and in the box, relative offset of `y` bounded by the schedule, lift
//! not cutting into the body); a violation is reported as
//! [`Error::Invariant`] with the trace so far.

pub mod schedule;
pub mod trace;

use serde::{Deserialize, Serialize};

pub use schedule::{dilation_factor, make_schedule, root_power, theorem_constant, Schedule};
pub use trace::{ConditionCheck, DescentRecord, SelectionTrace, StepCase, TraceFinal, TraceStep};

use crate::body::{Hyperplane, VPolytope};
use crate::error::{input, Error, Result};
use crate::numkit::vector::{dot, norm, scale, sub};

/// Relative tolerance for the recursion conditions.
pub const CONDITION_TOLERANCE: f64 = 1e-8;
/// Rotation applied to break a degenerate configuration.
pub const PERTURBATION_ANGLE: f64 = 1e-10;
/// Slack when clamping the separation `s = 1 − gauge(y)` into `[0, s₀]`.
pub const SEPARATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectorConfig {
    pub condition_tolerance: f64,
    pub separation_slack: f64,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        SelectorConfig {
            condition_tolerance: CONDITION_TOLERANCE,
            separation_slack: SEPARATION_SLACK,
        }
    }
}

/// Signed permutation from the current `k` coordinates to frame axes:
/// current coordinate `c` equals `sign_c · x_frame[axis_c]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPerm {
    axes: Vec<usize>,
    flipped: Vec<bool>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            axes: (0..n).collect(),
            flipped: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn axis(&self, c: usize) -> usize {
        self.axes[c]
    }

    fn sign(&self, c: usize) -> f64 {
        if self.flipped[c] {
            -1.0
        } else {
            1.0
        }
    }

    /// Current coordinates of a frame point.
    pub fn project(&self, x_frame: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|c| self.sign(c) * x_frame[self.axes[c]]).collect()
    }

    /// Embeds a current-coordinate vector into `n` frame coordinates, zero on
    /// the axes already dropped.
    pub fn lift(&self, x: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for c in 0..self.len() {
            out[self.axes[c]] = self.sign(c) * x[c];
        }
        out
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.axes.swap(i, j);
        self.flipped.swap(i, j);
    }

    fn flip(&mut self, c: usize) {
        self.flipped[c] = !self.flipped[c];
    }

    fn truncate_last(&mut self) {
        self.axes.pop();
        self.flipped.pop();
    }
}

/// Box `R_k = ∏[−wᵢ, wᵢ]` in the current coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxK {
    pub k: usize,
    pub half_widths: Vec<f64>,
}

impl BoxK {
    /// `R_n`, the box circumscribing `nE_a`.
    pub fn outer(a: &[f64]) -> Self {
        let n = a.len() as f64;
        BoxK {
            k: a.len(),
            half_widths: a.iter().map(|x| n * x).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionState {
    pub k: usize,
    pub p: Vec<f64>,
    pub plane: Hyperplane,
    pub y: Vec<f64>,
    pub bbox: BoxK,
    pub perm: SignedPerm,
}

impl RecursionState {
    fn scale(&self) -> f64 {
        1f64.max(self.plane.offset).max(norm(&self.p))
    }

    /// Applies a signed coordinate transposition to every stored quantity.
    fn swap(&mut self, i: usize, j: usize) {
        self.p.swap(i, j);
        self.y.swap(i, j);
        self.plane.normal.swap(i, j);
        self.bbox.half_widths.swap(i, j);
        self.perm.swap(i, j);
    }

    fn flip(&mut self, c: usize) {
        self.p[c] = -self.p[c];
        self.y[c] = -self.y[c];
        self.plane.normal[c] = -self.plane.normal[c];
        self.perm.flip(c);
    }
}

/// `diam(P^⊥ ∩ R_k) / (2·dist(0, P))`.
pub fn favorable_ratio(plane: &Hyperplane, bbox: &BoxK) -> f64 {
    let half_chord = plane
        .normal
        .iter()
        .zip(&bbox.half_widths)
        .filter(|(u, _)| **u != 0.0)
        .map(|(u, w)| w / u.abs())
        .fold(f64::INFINITY, f64::min);
    half_chord / plane.offset
}

/// `1 − gauge(y)`.
pub fn separation(frame_body: &VPolytope, y: &[f64]) -> Result<f64> {
    if y.iter().all(|&v| v == 0.0) {
        return input("y must be nonzero");
    }
    Ok(1.0 - frame_body.gauge(y)?)
}

/// Evaluates the three recursion conditions for `state`, with the relative
/// offset bound `b_limit`.
pub fn check_conditions(
    state: &RecursionState,
    b_limit: f64,
    frame_body: &VPolytope,
    tolerance: f64,
) -> Result<ConditionCheck> {
    let scale_k = state.scale();
    let tol = tolerance * scale_k;
    let plane = &state.plane;

    let a_plane_residual = plane.signed_distance(&state.p).abs();
    let pp = dot(&state.p, &state.p);
    let t = if pp > 0.0 { dot(&state.y, &state.p) / pp } else { 0.0 };
    let t_clamped = t.clamp(0.0, 1.0);
    let a_segment_residual = norm(&sub(&state.y, &scale(&state.p, t_clamped)));
    let a_box_excess = state
        .p
        .iter()
        .zip(&state.bbox.half_widths)
        .map(|(x, w)| x.abs() - w)
        .fold(f64::NEG_INFINITY, f64::max);

    let b_ratio = plane.distance(&state.y) / plane.distance_to_origin();

    let n = frame_body.dim();
    let lifted = state.perm.lift(&plane.normal, n);
    let mut c_pass = true;
    let mut c_excess = f64::NEG_INFINITY;
    for v in frame_body.vertices() {
        let excess = dot(&lifted, v) - plane.offset;
        c_excess = c_excess.max(excess);
        let vtol = tolerance * 1f64.max(plane.offset).max(norm(v));
        if excess > vtol {
            c_pass = false;
        }
    }

    Ok(ConditionCheck {
        a_plane_residual,
        a_segment_residual,
        a_box_excess,
        b_ratio,
        b_limit,
        c_excess,
        tolerance: tol,
        a_pass: a_plane_residual <= tol && a_segment_residual <= tol && a_box_excess <= tol,
        b_pass: b_ratio <= b_limit + tolerance,
        c_pass,
    })
}

fn invariant_error(k: usize, detail: String, steps: Vec<TraceStep>, schedule: &Schedule) -> Error {
    Error::Invariant {
        k,
        detail,
        trace: Box::new(SelectionTrace {
            n: schedule.n,
            s: schedule.s,
            s0: schedule.s0,
            steps,
            outcome: None,
        }),
    }
}

fn describe_failure(c: &ConditionCheck) -> String {
    let mut parts = Vec::new();
    if !c.a_pass {
        parts.push(format!(
            "A (plane {:.3e}, segment {:.3e}, box {:.3e})",
            c.a_plane_residual, c.a_segment_residual, c.a_box_excess
        ));
    }
    if !c.b_pass {
        parts.push(format!("B (ratio {:.6e} > {:.6e})", c.b_ratio, c.b_limit));
    }
    if !c.c_pass {
        parts.push(format!("C (excess {:.3e})", c.c_excess));
    }
    parts.join(", ")
}

/// Outcome of [`initial_step`].
#[derive(Debug, Clone, PartialEq)]
pub enum InitialOutcome {
    /// The boundary hyperplane at the ray point is already favorable.
    Done {
        hyperplane: Hyperplane,
        step: TraceStep,
    },
    Continue {
        state: RecursionState,
        step: TraceStep,
    },
}

/// Supporting hyperplane `P_n` at `p_n = ray(0, y) ∩ ∂S`, then the favorable
/// test against `γ₁ = s^{1/2}`.
pub fn initial_step(
    frame_body: &VPolytope,
    a: &[f64],
    y: &[f64],
    schedule: &Schedule,
    config: &SelectorConfig,
) -> Result<InitialOutcome> {
    let n = frame_body.dim();
    if a.len() != n || y.len() != n || schedule.n != n {
        return input("dimension mismatch between body, semi-axes, point and schedule");
    }
    let s = separation(frame_body, y)?;
    if (s.clamp(0.0, schedule.s0) - schedule.s).abs() > config.separation_slack {
        return input(format!("schedule was built for s = {} but y has s = {s}", schedule.s));
    }
    let p = frame_body.ray_boundary(y)?;
    let plane = frame_body.supporting_hyperplane_at(&p)?;
    let similar = plane.signed_distance(y).abs() / plane.offset;
    if (similar - schedule.s).abs() > CONDITION_TOLERANCE.max(config.separation_slack) {
        return Err(Error::Numerical(format!(
            "dist(y, P_n)/dist(0, P_n) = {similar} differs from s = {}",
            schedule.s
        )));
    }
    let state = RecursionState {
        k: n,
        p,
        plane,
        y: y.to_vec(),
        bbox: BoxK::outer(a),
        perm: SignedPerm::identity(n),
    };
    let conditions = check_conditions(&state, schedule.delta(1), frame_body, config.condition_tolerance)?;
    let fav = favorable_ratio(&state.plane, &state.bbox);
    let gamma = schedule.gamma(1);
    let favorable = fav >= gamma;
    let step = TraceStep {
        k: n,
        case: StepCase::Initial,
        favorable_ratio: fav,
        gamma,
        favorable,
        perturbed: false,
        conditions: conditions.clone(),
        descent: None,
    };
    if favorable {
        return Ok(InitialOutcome::Done {
            hyperplane: state.plane,
            step,
        });
    }
    if !conditions.passed() {
        let detail = describe_failure(&conditions);
        return Err(invariant_error(n, detail, vec![step], schedule));
    }
    Ok(InitialOutcome::Continue { state, step })
}

/// Outcome of [`descend_step`].
#[derive(Debug, Clone, PartialEq)]
pub enum DescentOutcome {
    /// Case I at the input level: lift the input state's plane.
    Terminate { step: TraceStep },
    /// Case II: the state one dimension down.
    Next { state: RecursionState, step: TraceStep },
}

fn rotate_in_plane(v: &mut [f64], i: usize, j: usize, angle: f64) {
    let (s, c) = angle.sin_cos();
    let (vi, vj) = (v[i], v[j]);
    v[i] = c * vi - s * vj;
    v[j] = s * vi + c * vj;
}

/// `π_{k−1}(P_k ∩ {x^k = −b})` for a plane with unit normal `u` and offset
/// `h`. When `P_k` is parallel to the slicing face the normal is first
/// rotated by [`PERTURBATION_ANGLE`]; the flag reports whether that happened.
pub fn slice_at_lower_face(u: &[f64], h: f64, b: f64) -> Result<(Hyperplane, bool)> {
    let k = u.len();
    if k < 2 {
        return input("slicing needs at least two coordinates");
    }
    let mut u = u.to_vec();
    let mut perturbed = false;
    if norm(&u[..k - 1]) < 1e-12 {
        rotate_in_plane(&mut u, 0, k - 1, PERTURBATION_ANGLE);
        perturbed = true;
    }
    // Hyperplane::new divides normal and offset by |u'|.
    let plane = Hyperplane::new(&u[..k - 1], h + u[k - 1] * b)?;
    Ok((plane, perturbed))
}

/// Point `α·p + β·e_k` on the line `ℓ_k = span(p, e_k) ∩ P_k` at height
/// `x^k = height`.
fn line_point(p: &[f64], u: &[f64], h: f64, height: f64) -> Option<((f64, f64), Vec<f64>)> {
    let k = p.len();
    let det = dot(u, p) - u[k - 1] * p[k - 1];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let alpha = (h - u[k - 1] * height) / det;
    let beta = height - alpha * p[k - 1];
    let mut point = scale(p, alpha);
    point[k - 1] += beta;
    Some(((alpha, beta), point))
}

/// One level of the recursion: Case I stops, Case II builds the state at
/// `k − 1` and checks its conditions.
pub fn descend_step(
    state: &RecursionState,
    schedule: &Schedule,
    frame_body: &VPolytope,
    config: &SelectorConfig,
) -> Result<DescentOutcome> {
    let n = schedule.n;
    let k = state.k;
    if k < 2 {
        return input("descend_step needs k ≥ 2");
    }
    let level = n - k + 1;
    let conditions = check_conditions(state, schedule.delta(level), frame_body, config.condition_tolerance)?;
    let fav = favorable_ratio(&state.plane, &state.bbox);
    let gamma = schedule.gamma(level);
    let mut step = TraceStep {
        k,
        case: StepCase::CaseI,
        favorable_ratio: fav,
        gamma,
        favorable: fav >= gamma,
        perturbed: false,
        conditions,
        descent: None,
    };
    if step.favorable {
        return Ok(DescentOutcome::Terminate { step });
    }
    step.case = StepCase::CaseII;

    // Exit face of the segment [0, r_k] through the box boundary.
    let r = scale(&state.plane.normal, state.plane.offset);
    let (face_index, exit) = r
        .iter()
        .zip(&state.bbox.half_widths)
        .map(|(x, w)| x.abs() / w)
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );
    if !(exit > 1.0) {
        let detail = format!("closest point r_k lies inside R_k (exit ratio {exit}) in an unfavorable level");
        return Err(invariant_error(k, detail, vec![step], schedule));
    }
    let r_plus = scale(&r, 1.0 / exit);

    // Reorder so the exit face is x^k = +b_k.
    let mut cur = state.clone();
    cur.swap(face_index, k - 1);
    let face_flipped = r[face_index] < 0.0;
    if face_flipped {
        cur.flip(k - 1);
    }
    let face_axis = cur.perm.axis(k - 1);
    let b = cur.bbox.half_widths[k - 1];
    let u = cur.plane.normal.clone();
    let h = cur.plane.offset;

    let (next_plane, mut perturbed) = slice_at_lower_face(&u, h, b)?;

    let mut p = cur.p.clone();
    if norm(&p[..k - 1]) < 1e-12 * cur.scale() {
        rotate_in_plane(&mut p, 0, k - 1, PERTURBATION_ANGLE);
        perturbed = true;
    }
    let Some((line_params, q_minus)) = line_point(&p, &u, h, -b) else {
        let detail = "line through p_k in its plane with the x^k axis is degenerate".to_string();
        return Err(invariant_error(k, detail, vec![step], schedule));
    };
    let q_plus = line_point(&p, &u, h, b).map(|x| x.1).unwrap_or_default();
    let q_zero = line_point(&p, &u, h, 0.0).map(|x| x.1).unwrap_or_default();

    let r_cur = scale(&u, h);
    let proj_sq = dot(&r_cur[..k - 1], &r_cur[..k - 1]);
    let lambda_diag = (dot(&r_cur, &r_cur) + b * r_cur[k - 1]) / proj_sq;

    let mut perm = cur.perm.clone();
    perm.truncate_last();
    let next = RecursionState {
        k: k - 1,
        p: q_minus[..k - 1].to_vec(),
        plane: next_plane,
        y: cur.y[..k - 1].to_vec(),
        bbox: BoxK {
            k: k - 1,
            half_widths: cur.bbox.half_widths[..k - 1].iter().map(|w| schedule.c0 * w).collect(),
        },
        perm,
    };

    step.perturbed = perturbed;
    step.descent = Some(DescentRecord {
        r,
        r_plus,
        face_index,
        face_axis,
        face_flipped,
        q_plus,
        q_zero,
        q_minus,
        line_params,
        lambda_diag,
        next_plane: next.plane.clone(),
    });

    let next_conditions = check_conditions(&next, schedule.delta(level + 1), frame_body, config.condition_tolerance)?;
    if !next_conditions.passed() {
        let detail = format!("state at k={} fails {}", k - 1, describe_failure(&next_conditions));
        return Err(invariant_error(k - 1, detail, vec![step], schedule));
    }
    Ok(DescentOutcome::Next { state: next, step })
}

/// Lifts a level-`k` plane to `n` frame coordinates (zero on dropped axes)
/// and translates it until it supports the body.
pub fn lift_to_support(plane: &Hyperplane, perm: &SignedPerm, frame_body: &VPolytope) -> Result<Hyperplane> {
    let n = frame_body.dim();
    if plane.dim() != perm.len() {
        return input("plane and permutation dimensions differ");
    }
    let normal = perm.lift(&plane.normal, n);
    let offset = frame_body.support_value(&normal)?;
    Ok(Hyperplane { normal, offset })
}

/// Selected hyperplane (frame coordinates) and the full trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub hyperplane: Hyperplane,
    pub trace: SelectionTrace,
}

pub fn select_hyperplane(frame_body: &VPolytope, a: &[f64], y: &[f64], s0: f64) -> Result<Selection> {
    select_hyperplane_with(frame_body, a, y, s0, &SelectorConfig::default())
}

fn level_bound(schedule: &Schedule, k: usize) -> f64 {
    let n = schedule.n;
    let nf = n as f64;
    let c0_pow = schedule.c0.powi((n - k) as i32);
    if k == 1 {
        schedule.bound()
    } else {
        nf.powf(1.5) * c0_pow * ((n - k) as f64 + 0.5) * root_power(schedule.s, n - k + 1)
    }
}

pub fn select_hyperplane_with(
    frame_body: &VPolytope,
    a: &[f64],
    y: &[f64],
    s0: f64,
    config: &SelectorConfig,
) -> Result<Selection> {
    let n = frame_body.dim();
    if y.len() != n || a.len() != n {
        return input("dimension mismatch between body, semi-axes and point");
    }
    if a.iter().any(|x| !(*x > 0.0)) {
        return input("semi-axes must be positive");
    }
    let raw_s = separation(frame_body, y)?;
    if raw_s < -config.separation_slack {
        return input(format!("y lies outside the body (s = {raw_s})"));
    }
    if raw_s > s0 + config.separation_slack {
        return input(format!("s = {raw_s} exceeds s0 = {s0}"));
    }
    let schedule = make_schedule(n, raw_s.clamp(0.0, s0), s0)?;
    let mut trace = SelectionTrace {
        n,
        s: schedule.s,
        s0,
        steps: Vec::new(),
        outcome: None,
    };
    let with_history = |err: Error, history: &[TraceStep]| match err {
        Error::Invariant {
            k,
            detail,
            trace: partial,
        } => {
            let mut steps = history.to_vec();
            steps.extend(partial.steps);
            invariant_error(k, detail, steps, &schedule)
        }
        other => other,
    };

    let (plane, perm, stop_k, case) = match initial_step(frame_body, a, y, &schedule, config)? {
        InitialOutcome::Done { hyperplane, step } => {
            trace.steps.push(step);
            (hyperplane, SignedPerm::identity(n), n, StepCase::Initial)
        }
        InitialOutcome::Continue { state, step } => {
            trace.steps.push(step);
            let mut state = state;
            loop {
                if state.k == 1 {
                    let conditions =
                        check_conditions(&state, schedule.delta(n), frame_body, config.condition_tolerance)?;
                    trace.steps.push(TraceStep {
                        k: 1,
                        case: StepCase::TerminalK1,
                        favorable_ratio: favorable_ratio(&state.plane, &state.bbox),
                        gamma: schedule.gamma(n),
                        favorable: true,
                        perturbed: false,
                        conditions,
                        descent: None,
                    });
                    break (state.plane, state.perm, 1, StepCase::TerminalK1);
                }
                match descend_step(&state, &schedule, frame_body, config).map_err(|e| with_history(e, &trace.steps))? {
                    DescentOutcome::Terminate { step } => {
                        trace.steps.push(step);
                        break (state.plane, state.perm, state.k, StepCase::CaseI);
                    }
                    DescentOutcome::Next { state: next, step } => {
                        trace.steps.push(step);
                        state = next;
                    }
                }
            }
        }
    };

    let hyperplane = lift_to_support(&plane, &perm, frame_body)?;
    let chord = frame_body.chord_diameter(&hyperplane.normal)?;
    let ratio = hyperplane.distance(y) / chord;
    trace.outcome = Some(TraceFinal {
        hyperplane_frame: hyperplane.clone(),
        ratio,
        bound: schedule.bound(),
        level_bound: level_bound(&schedule, stop_k),
        depth: trace.depth(),
        case_terminated: case,
    });
    Ok(Selection { hyperplane, trace })
}

#[cfg(test)]
mod tests;
