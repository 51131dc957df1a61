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

//! Independent checks of a selection: the bound itself recomputed from
//! scratch, a sampled lower-bound oracle over many supporting hyperplanes,
//! the three naive choices (normal along `y`, support at the ray point,
//! nearest supporting hyperplane), and generators of thin body families.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::body::{Hyperplane, VPolytope};
use crate::error::{input, Error, Result};
use crate::numkit::vector::{dot, norm, normalized, sub};
use crate::sampling::{orthogonal_matrix, seeded, unit_vector};
use crate::selector::{make_schedule, Selection};

/// Default number of random directions in the oracle candidate set.
pub const DEFAULT_DIRECTION_BUDGET: usize = 4096;
/// Relative slack on the theorem bound.
pub const BOUND_SLACK: f64 = 1e-6;
/// Absolute floor for the bound comparison, reached only at `s = 0`.
pub const BOUND_FLOOR: f64 = 1e-12;
/// Support-condition tolerance, relative to the body scale.
pub const SUPPORT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Algorithm,
    NaiveOrthogonal,
    NaiveRaySupport,
    NaiveClosest,
    OracleBest,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Algorithm,
        Strategy::NaiveOrthogonal,
        Strategy::NaiveRaySupport,
        Strategy::NaiveClosest,
        Strategy::OracleBest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Algorithm => "algorithm",
            Strategy::NaiveOrthogonal => "naive_orthogonal",
            Strategy::NaiveRaySupport => "naive_ray_support",
            Strategy::NaiveClosest => "naive_closest",
            Strategy::OracleBest => "oracle_best",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown strategy {s:?}")))
    }
}

/// `dist(y, P) / diam(P^⊥ ∩ S)` for one strategy, against the theorem bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub strategy: Strategy,
    pub s: f64,
    pub ratio: f64,
    pub bound: f64,
    pub depth: usize,
    pub normal: Vec<f64>,
    pub distance: f64,
    pub chord: f64,
}

impl RatioReport {
    pub fn within_bound(&self) -> bool {
        self.ratio <= self.bound * (1.0 + BOUND_SLACK) + BOUND_FLOOR
    }
}

/// Distance and chord for the supporting hyperplane with normal `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalRatio {
    pub support: f64,
    pub distance: f64,
    pub chord: f64,
    pub ratio: f64,
}

/// Supporting hyperplane `{u·x = h_S(u)}` evaluated at `y`.
pub fn ratio_for_normal(body: &VPolytope, u: &[f64], y: &[f64]) -> Result<NormalRatio> {
    let support = body.support_value(u)?;
    let chord = body.chord_diameter(u)?;
    let distance = (dot(u, y) - support).abs();
    Ok(NormalRatio {
        support,
        distance,
        chord,
        ratio: distance / chord,
    })
}

fn separation_clamped(body: &VPolytope, y: &[f64], s0: f64) -> Result<f64> {
    let s = 1.0 - body.gauge(y)?;
    Ok(s.clamp(0.0, s0))
}

fn bound_for(n: usize, s: f64, s0: f64) -> Result<f64> {
    Ok(make_schedule(n, s, s0)?.bound())
}

/// Checks that `hp` supports `body`: every vertex on the origin side and at
/// least one vertex on the plane, within `SUPPORT_TOLERANCE` of the scale.
pub fn assert_supporting(body: &VPolytope, hp: &Hyperplane) -> Result<()> {
    let tol = SUPPORT_TOLERANCE * 1f64.max(hp.offset.abs()).max(body.scale());
    if (norm(&hp.normal) - 1.0).abs() > 1e-9 {
        return Err(Error::Verification("hyperplane normal is not unit length".into()));
    }
    let top = body
        .vertices()
        .iter()
        .map(|v| dot(&hp.normal, v))
        .fold(f64::NEG_INFINITY, f64::max);
    if top > hp.offset + tol {
        return Err(Error::Verification(format!(
            "a vertex lies {:.3e} beyond the hyperplane",
            top - hp.offset
        )));
    }
    if top < hp.offset - tol {
        return Err(Error::Verification(format!(
            "hyperplane is {:.3e} away from the body",
            hp.offset - top
        )));
    }
    Ok(())
}

/// Recomputes `s`, the distance, chord and bound for a selection without
/// reading its trace.
pub fn check_bound(frame_body: &VPolytope, y: &[f64], s0: f64, result: &Selection) -> Result<RatioReport> {
    let hp = &result.hyperplane;
    assert_supporting(frame_body, hp)?;
    let s = separation_clamped(frame_body, y, s0)?;
    let distance = hp.distance(y);
    let chord = frame_body.chord_diameter(&hp.normal)?;
    if !(chord > 0.0) {
        return Err(Error::Verification("non-positive chord".into()));
    }
    Ok(RatioReport {
        strategy: Strategy::Algorithm,
        s,
        ratio: distance / chord,
        bound: bound_for(frame_body.dim(), s, s0)?,
        depth: result.trace.depth(),
        normal: hp.normal.clone(),
        distance,
        chord,
    })
}

/// A candidate supporting normal with its precomputed support value and chord.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub normal: Vec<f64>,
    pub support: f64,
    pub chord: f64,
}

/// Supporting normals against which the oracle and the nearest-plane strategy
/// search. Independent of `y`, so it is built once per body.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    /// Dual normals at boundary points next to every vertex, plus `budget`
    /// seeded uniform directions.
    pub fn build(body: &VPolytope, budget: usize, seed: u64) -> Result<Self> {
        let n = body.dim();
        let verts = body.vertices();
        let mut normals: Vec<Vec<f64>> = Vec::new();
        let neighbors = (2 * n).min(verts.len() - 1);
        for (i, v) in verts.iter().enumerate() {
            let mut others: Vec<(f64, usize)> = verts
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(j, w)| (norm(&sub(w, v)), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut samples = vec![v.clone()];
            samples.extend(
                others
                    .iter()
                    .take(neighbors)
                    .map(|&(_, j)| v.iter().zip(&verts[j]).map(|(a, b)| 0.95 * a + 0.05 * b).collect()),
            );
            for x in samples {
                if x.iter().all(|c| *c == 0.0) {
                    continue;
                }
                let p = body.ray_boundary(&x)?;
                normals.push(body.supporting_hyperplane_at(&p)?.normal);
            }
        }
        let mut rng = seeded(seed);
        normals.extend((0..budget).map(|_| unit_vector(&mut rng, n)));

        let mut candidates: Vec<Candidate> = Vec::with_capacity(normals.len());
        for u in normals {
            if candidates.iter().any(|c| norm(&sub(&c.normal, &u)) < 1e-9) {
                continue;
            }
            candidates.push(Candidate {
                support: body.support_value(&u)?,
                chord: body.chord_diameter(&u)?,
                normal: u,
            });
        }
        Ok(CandidateSet { candidates })
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

fn report_from(strategy: Strategy, s: f64, bound: f64, u: Vec<f64>, r: NormalRatio) -> RatioReport {
    RatioReport {
        strategy,
        s,
        ratio: r.ratio,
        bound,
        depth: 0,
        normal: u,
        distance: r.distance,
        chord: r.chord,
    }
}

/// Smallest ratio over the candidate set and any `extra` normals (for
/// example the normals other strategies chose, which makes the oracle
/// dominate them by construction).
pub fn oracle_best_ratio(
    frame_body: &VPolytope,
    y: &[f64],
    s0: f64,
    candidates: &CandidateSet,
    extra: &[Vec<f64>],
) -> Result<RatioReport> {
    let s = separation_clamped(frame_body, y, s0)?;
    let bound = bound_for(frame_body.dim(), s, s0)?;
    let mut best: Option<(Vec<f64>, NormalRatio)> = None;
    let mut consider = |u: &[f64], r: NormalRatio| {
        if best.as_ref().is_none_or(|(_, b)| r.ratio < b.ratio) {
            best = Some((u.to_vec(), r));
        }
    };
    for c in &candidates.candidates {
        let distance = (dot(&c.normal, y) - c.support).abs();
        consider(
            &c.normal,
            NormalRatio {
                support: c.support,
                distance,
                chord: c.chord,
                ratio: distance / c.chord,
            },
        );
    }
    for u in extra {
        consider(u, ratio_for_normal(frame_body, u, y)?);
    }
    let (u, r) = best.ok_or_else(|| Error::Input("oracle needs at least one candidate".into()))?;
    Ok(report_from(Strategy::OracleBest, s, bound, u, r))
}

/// The three naive choices: (i) normal along `y`, (ii) supporting at the ray
/// point, (iii) the candidate supporting hyperplane nearest to `y`.
pub fn naive_strategies(
    frame_body: &VPolytope,
    y: &[f64],
    s0: f64,
    candidates: &CandidateSet,
) -> Result<[RatioReport; 3]> {
    let s = separation_clamped(frame_body, y, s0)?;
    let bound = bound_for(frame_body.dim(), s, s0)?;

    let u1 = normalized(y).ok_or_else(|| Error::Input("y must be nonzero".into()))?;
    let r1 = ratio_for_normal(frame_body, &u1, y)?;

    let p = frame_body.ray_boundary(y)?;
    let u2 = frame_body.supporting_hyperplane_at(&p)?.normal;
    let r2 = ratio_for_normal(frame_body, &u2, y)?;

    let closest = candidates
        .candidates
        .iter()
        .map(|c| (c, (dot(&c.normal, y) - c.support).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Input("empty candidate set".into()))?
        .0;
    let r3 = NormalRatio {
        support: closest.support,
        distance: (dot(&closest.normal, y) - closest.support).abs(),
        chord: closest.chord,
        ratio: (dot(&closest.normal, y) - closest.support).abs() / closest.chord,
    };

    Ok([
        report_from(Strategy::NaiveOrthogonal, s, bound, u1, r1),
        report_from(Strategy::NaiveRaySupport, s, bound, u2, r2),
        report_from(Strategy::NaiveClosest, s, bound, closest.normal.clone(), r3),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThinKind {
    Box,
    NeedleSimplex,
    SlabCross,
}

impl ThinKind {
    pub const ALL: [ThinKind; 3] = [ThinKind::Box, ThinKind::NeedleSimplex, ThinKind::SlabCross];

    pub fn as_str(self) -> &'static str {
        match self {
            ThinKind::Box => "box",
            ThinKind::NeedleSimplex => "needle_simplex",
            ThinKind::SlabCross => "slab_cross",
        }
    }
}

impl fmt::Display for ThinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ThinKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown body kind {s:?}")))
    }
}

/// Thin polytopes with aspect ratio about `1 : thinness`:
///
/// * `box`: `∏[−1, 1]` with the last axis scaled by `thinness`;
/// * `needle_simplex`: `±e₁` and `thinness·eⱼ` for `j ≥ 2`;
/// * `slab_cross`: cross-polytope with the last axis scaled by `thinness`.
///
/// With a rotation seed the result is rotated by a seeded random orthogonal
/// matrix.
pub fn thin_family(kind: ThinKind, n: usize, thinness: f64, rotation_seed: Option<u64>) -> Result<VPolytope> {
    if n < 2 {
        return input("thin families need n ≥ 2");
    }
    if thinness == 0.0 {
        return Err(Error::Degenerate("thinness 0 collapses the body".into()));
    }
    if !(thinness > 0.0 && thinness <= 1.0) {
        return input(format!("thinness {thinness} must lie in (0, 1]"));
    }
    let vertices: Vec<Vec<f64>> = match kind {
        ThinKind::Box => {
            let mut w = vec![1.0; n];
            w[n - 1] = thinness;
            return rotate(VPolytope::centered_box(&w)?, rotation_seed);
        }
        ThinKind::NeedleSimplex => {
            let mut v = vec![vec![0.0; n], vec![0.0; n]];
            v[0][0] = -1.0;
            v[1][0] = 1.0;
            for j in 1..n {
                let mut e = vec![0.0; n];
                e[j] = thinness;
                v.push(e);
            }
            v
        }
        ThinKind::SlabCross => (0..n)
            .flat_map(|j| {
                let len = if j == n - 1 { thinness } else { 1.0 };
                [1.0, -1.0].map(|sgn| {
                    let mut e = vec![0.0; n];
                    e[j] = sgn * len;
                    e
                })
            })
            .collect(),
    };
    rotate(VPolytope::new(n, vertices)?, rotation_seed)
}

fn rotate(body: VPolytope, seed: Option<u64>) -> Result<VPolytope> {
    match seed {
        None => Ok(body),
        Some(seed) => {
            let q = orthogonal_matrix(&mut seeded(seed), body.dim());
            body.map_vertices(|v| q.iter().map(|row| dot(row, v)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centering::well_center;
    use crate::numkit::vector::rank;
    use crate::selector::select_hyperplane;

    #[test]
    fn thin_box_example() {
        let b = thin_family(ThinKind::Box, 2, 1e-3, None).unwrap();
        let mut vs: Vec<Vec<f64>> = b.vertices().to_vec();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            vs,
            vec![vec![-1.0, -1e-3], vec![-1.0, 1e-3], vec![1.0, -1e-3], vec![1.0, 1e-3]]
        );
    }

    #[test]
    fn needle_triangle_is_full_dimensional() {
        let b = thin_family(ThinKind::NeedleSimplex, 2, 1e-3, None).unwrap();
        let v = b.vertices();
        let diffs: Vec<Vec<f64>> = v[1..].iter().map(|w| sub(w, &v[0])).collect();
        assert_eq!(rank(&diffs, 1e-12), 2);
        // base 2 along the first axis, height 1e-3
        assert_eq!(v[0], vec![-1.0, 0.0]);
        assert_eq!(v[1], vec![1.0, 0.0]);
        assert_eq!(v[2], vec![0.0, 1e-3]);
    }

    #[test]
    fn family_errors() {
        assert!(matches!(
            thin_family(ThinKind::Box, 2, 0.0, None),
            Err(Error::Degenerate(_))
        ));
        assert!(thin_family(ThinKind::Box, 1, 0.5, None).is_err());
        assert!(thin_family(ThinKind::Box, 2, 1.5, None).is_err());
    }

    #[test]
    fn families_well_center_with_expected_aspect() {
        for kind in ThinKind::ALL {
            for n in 2..=4 {
                let eps = 1e-3;
                let body = thin_family(kind, n, eps, Some(17)).unwrap();
                let wc = well_center(&body, 1e-7).unwrap();
                let a = &wc.frame.semi_axes;
                let aspect = a[n - 1] / a[0];
                assert!(aspect > eps / 10.0 && aspect < eps * 10.0, "{kind} n={n}: {aspect}");
            }
        }
    }

    #[test]
    fn unit_square_oracle_is_half_s() {
        let body = VPolytope::centered_box(&[1.0, 1.0]).unwrap();
        let cands = CandidateSet::build(&body, 64, 1).unwrap();
        let s = 0.01;
        let y = vec![1.0 - s, 0.0];
        let best = oracle_best_ratio(&body, &y, 0.25, &cands, &[]).unwrap();
        assert!((best.ratio - s / 2.0).abs() < 1e-12);
        assert!((best.normal[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn polygon_strategies_are_near_half_s() {
        let body = VPolytope::regular_polygon(64, 1.0).unwrap();
        let cands = CandidateSet::build(&body, 256, 2).unwrap();
        for s in [1e-1, 1e-2, 1e-3] {
            let y = vec![1.0 - s, 0.0];
            let best = oracle_best_ratio(&body, &y, 0.25, &cands, &[]).unwrap();
            assert!(best.ratio <= s / 2.0 * (1.0 + 1e-9));
            assert!(best.ratio >= s / 2.0 * 0.95);
            let naive = naive_strategies(&body, &y, 0.25, &cands).unwrap();
            for r in &naive {
                assert!((r.ratio - s / 2.0).abs() <= 0.05 * s / 2.0, "{:?}", r);
            }
        }
    }

    #[test]
    fn one_dimensional_strategies_coincide() {
        let body = VPolytope::new(1, vec![vec![-2.0], vec![2.0]]).unwrap();
        let s = 0.1;
        let y = vec![2.0 * (1.0 - s)];
        let cands = CandidateSet::build(&body, 8, 3).unwrap();
        let sel = select_hyperplane(&body, &[2.0], &y, 0.5).unwrap();
        let alg = check_bound(&body, &y, 0.5, &sel).unwrap();
        for r in naive_strategies(&body, &y, 0.5, &cands).unwrap() {
            assert!((r.ratio - alg.ratio).abs() < 1e-15);
        }
        assert!((alg.ratio - s / 2.0).abs() < 1e-12);
        assert!((alg.bound - s / 2.0).abs() < 1e-12);
    }

    #[test]
    fn check_bound_rejects_non_supporting_plane() {
        let body = VPolytope::centered_box(&[1.0, 1.0]).unwrap();
        let y = vec![0.9, 0.0];
        let mut sel = select_hyperplane(&body, &[0.5, 0.5], &y, 0.25).unwrap();
        sel.hyperplane.offset = 0.5;
        assert!(matches!(
            check_bound(&body, &y, 0.25, &sel),
            Err(Error::Verification(_))
        ));
        sel.hyperplane.offset = 3.0;
        assert!(matches!(
            check_bound(&body, &y, 0.25, &sel),
            Err(Error::Verification(_))
        ));
    }

    #[test]
    fn oracle_dominates_extras() {
        let body = thin_family(ThinKind::NeedleSimplex, 3, 1e-2, Some(4)).unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        let fb = &wc.frame_body;
        let cands = CandidateSet::build(fb, 32, 5).unwrap();
        let p = fb.ray_boundary(&fb.vertices()[0]).unwrap();
        let y: Vec<f64> = p.iter().map(|x| x * (1.0 - 1e-3)).collect();
        let s0 = 1.0 / 6.0;
        let sel = select_hyperplane(fb, &wc.frame.semi_axes, &y, s0).unwrap();
        let alg = check_bound(fb, &y, s0, &sel).unwrap();
        let naive = naive_strategies(fb, &y, s0, &cands).unwrap();
        let mut extra = vec![alg.normal.clone()];
        extra.extend(naive.iter().map(|r| r.normal.clone()));
        let best = oracle_best_ratio(fb, &y, s0, &cands, &extra).unwrap();
        assert!(best.ratio <= alg.ratio + 1e-9);
        for r in &naive {
            assert!(best.ratio <= r.ratio + 1e-9);
        }
    }
}
