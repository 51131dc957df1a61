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

use super::*;
use crate::centering::well_center;
use crate::numkit::vector::scale;
use crate::sampling::seeded;
use crate::verify::{thin_family, ThinKind};
use rand::Rng;

fn square() -> VPolytope {
    VPolytope::centered_box(&[1.0, 1.0]).unwrap()
}

#[test]
fn favorable_ratio_examples() {
    let bbox = BoxK {
        k: 2,
        half_widths: vec![4.0, 1.0],
    };
    let p = Hyperplane::new(&[1.0, 0.0], 2.0).unwrap();
    assert_eq!(favorable_ratio(&p, &bbox), 2.0);
    let p = Hyperplane::new(&[0.0, 1.0], 0.5).unwrap();
    assert_eq!(favorable_ratio(&p, &bbox), 2.0);
}

#[test]
fn square_stops_at_initial_step() {
    let s = 0.01;
    let y = vec![1.0 - s, 0.0];
    let sel = select_hyperplane(&square(), &[0.5_f64.sqrt(); 2], &y, 0.25).unwrap();
    assert_eq!(sel.trace.steps.len(), 1);
    assert_eq!(sel.trace.depth(), 0);
    assert_eq!(sel.hyperplane.normal, vec![1.0, 0.0]);
    let fin = sel.trace.outcome.as_ref().unwrap();
    assert!((fin.ratio - s / 2.0).abs() < 1e-12);
    assert_eq!(fin.case_terminated, StepCase::Initial);
}

#[test]
fn one_dimensional_is_done_immediately() {
    let body = VPolytope::new(1, vec![vec![-1.0], vec![1.0]]).unwrap();
    let sel = select_hyperplane(&body, &[1.0], &[0.7], 0.5).unwrap();
    assert_eq!(sel.trace.steps.len(), 1);
    assert!((sel.trace.outcome.unwrap().ratio - 0.15).abs() < 1e-12);
}

fn chamfered_hexagon() -> (VPolytope, Vec<f64>) {
    let (eps, d) = (1e-4, 1e-2);
    let body = VPolytope::new(
        2,
        vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![1.0 - d, eps],
            vec![1.0 - d, -eps],
            vec![-(1.0 - d), eps],
            vec![-(1.0 - d), -eps],
        ],
    )
    .unwrap();
    let wc = well_center(&body, 1e-7).unwrap();
    (wc.frame_body, wc.frame.semi_axes)
}

#[test]
fn chamfered_corner_descends() {
    let (fb, a) = chamfered_hexagon();
    // y just inside the chamfer facet near the +x tip
    let target = fb
        .vertices()
        .iter()
        .max_by(|p, q| p[0].abs().total_cmp(&q[0].abs()))
        .unwrap()
        .clone();
    let dir: Vec<f64> = fb
        .vertices()
        .iter()
        .filter(|v| v[0].signum() == target[0].signum() && v != &&target)
        .fold(target.clone(), |acc, v| {
            acc.iter().zip(v).map(|(x, y)| x + 0.2 * y).collect()
        });
    let p = fb.ray_boundary(&dir).unwrap();
    let s = 0.01;
    let y: Vec<f64> = p.iter().map(|x| x * (1.0 - s)).collect();
    let schedule = make_schedule(2, s, 0.25).unwrap();
    let out = initial_step(&fb, &a, &y, &schedule, &SelectorConfig::default()).unwrap();
    match out {
        InitialOutcome::Continue { state, step } => {
            assert_eq!(state.k, 2);
            assert!(!step.favorable);
            assert!(step.conditions.passed());
        }
        InitialOutcome::Done { .. } => panic!("expected a descent"),
    }
    let sel = select_hyperplane(&fb, &a, &y, 0.25).unwrap();
    assert!(sel.trace.depth() <= 1);
    let fin = sel.trace.outcome.unwrap();
    assert!(fin.ratio <= fin.bound * (1.0 + 1e-6));
}

#[test]
fn slice_example() {
    let (plane, perturbed) = slice_at_lower_face(&[0.6, 0.8], 10.0, 1.0).unwrap();
    assert!(!perturbed);
    assert_eq!(plane.normal, vec![1.0]);
    assert!((plane.offset - 18.0).abs() < 1e-12);
}

#[test]
fn slice_parallel_face_is_perturbed() {
    let (plane, perturbed) = slice_at_lower_face(&[0.0, 1.0], 5.0, 1.0).unwrap();
    assert!(perturbed);
    assert!(plane.offset.is_finite());
    assert!(slice_at_lower_face(&[1.0], 1.0, 1.0).is_err());
}

#[test]
fn descend_reports_exit_face() {
    let state = RecursionState {
        k: 2,
        p: vec![0.3, -1.0],
        plane: Hyperplane::new(&[0.3, -1.0], 1.09).unwrap(),
        y: vec![0.29, -0.97],
        bbox: BoxK {
            k: 2,
            half_widths: vec![4.0, 0.05],
        },
        perm: SignedPerm::identity(2),
    };
    let body = VPolytope::new(2, vec![vec![-1.0, 1.0], vec![1.0, 1.0], vec![0.3, -1.0]]).unwrap();
    let schedule = make_schedule(2, 0.01, 0.25).unwrap();
    let cfg = SelectorConfig {
        condition_tolerance: 1.0,
        ..SelectorConfig::default()
    };
    match descend_step(&state, &schedule, &body, &cfg) {
        Ok(DescentOutcome::Next { step, .. }) => {
            let d = step.descent.unwrap();
            assert_eq!(d.face_index, 1);
            assert!(d.face_flipped);
        }
        Err(Error::Invariant { trace, .. }) => {
            let d = trace.steps[0].descent.as_ref().unwrap();
            assert_eq!(d.face_index, 1);
            assert!(d.face_flipped);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn lift_translates_to_support() {
    let sq = square();
    let hp = lift_to_support(
        &Hyperplane::new(&[1.0, 0.0], 3.0).unwrap(),
        &SignedPerm::identity(2),
        &sq,
    )
    .unwrap();
    assert_eq!(hp.normal, vec![1.0, 0.0]);
    assert!((hp.offset - 1.0).abs() < 1e-12);
    let hp2 = lift_to_support(&hp, &SignedPerm::identity(2), &sq).unwrap();
    assert!((hp2.offset - hp.offset).abs() < 1e-12);
}

#[test]
fn lift_fills_dropped_axes_with_zero() {
    let mut perm = SignedPerm::identity(3);
    perm.swap(0, 2);
    perm.flip(0);
    perm.truncate_last();
    assert_eq!(perm.lift(&[1.0, 2.0], 3), vec![0.0, 2.0, -1.0]);
    assert_eq!(perm.project(&[5.0, 6.0, 7.0]), vec![-7.0, 6.0]);
}

#[test]
fn boundary_point_has_zero_distance() {
    let sq = square();
    let sel = select_hyperplane(&sq, &[0.5_f64.sqrt(); 2], &[1.0, 0.3], 0.25).unwrap();
    assert_eq!(sel.trace.s, 0.0);
    assert!(sel.hyperplane.distance(&[1.0, 0.3]) < 1e-12);
}

#[test]
fn rejects_bad_inputs() {
    let sq = square();
    let a = [0.5_f64.sqrt(); 2];
    assert!(select_hyperplane(&sq, &a, &[0.0, 0.0], 0.25).is_err());
    assert!(select_hyperplane(&sq, &a, &[0.5, 0.0], 0.25).is_err());
    assert!(select_hyperplane(&sq, &a, &[1.5, 0.0], 0.25).is_err());
    assert!(select_hyperplane(&sq, &a[..1], &[0.9, 0.0], 0.25).is_err());
}

#[test]
fn random_thin_bodies_keep_invariants() {
    let mut rng = seeded(99);
    for trial in 0..40u64 {
        let kind = ThinKind::ALL[(trial % 3) as usize];
        let eps = 10f64.powf(-rng.random::<f64>() * 4.0);
        let body = thin_family(kind, 3, eps, Some(trial)).unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        let fb = &wc.frame_body;
        let v = &fb.vertices()[trial as usize % fb.vertices().len()];
        let w = crate::sampling::unit_vector(&mut rng, 3);
        let dir: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + 0.05 * b).collect();
        let p = fb.ray_boundary(&dir).unwrap();
        for s in [1e-1, 1e-3, 1e-6] {
            let y: Vec<f64> = p.iter().map(|x| x * (1.0 - s)).collect();
            let sel = select_hyperplane(fb, &wc.frame.semi_axes, &y, 1.0 / 6.0).unwrap();
            assert!(sel.trace.depth() <= 2);
            for step in &sel.trace.steps {
                assert!(step.conditions.passed(), "trial {trial} s {s}: {step:?}");
            }
            let fin = sel.trace.outcome.unwrap();
            assert!(fin.ratio <= fin.bound * (1.0 + 1e-6), "trial {trial} s {s}");
            assert!(fin.ratio <= fin.level_bound * (1.0 + 1e-6) + 1e-12);
        }
    }
}

#[test]
fn level_bounds_never_exceed_theorem_bound() {
    for n in 2..=8 {
        let s0 = 1.0 / (2.0 * n as f64);
        for e in 0..=12 {
            let s = s0 * 10f64.powi(-e);
            let schedule = make_schedule(n, s, s0).unwrap();
            for k in 1..=n {
                assert!(
                    level_bound(&schedule, k) <= schedule.bound() * (1.0 + 1e-12),
                    "n={n} k={k} s={s}"
                );
            }
            for i in 1..n {
                assert!(schedule.gamma(i) <= schedule.gamma(i + 1));
                assert!(schedule.delta(i) <= schedule.delta(i + 1) * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn two_descents_leave_the_remaining_axis() {
    let schedule = make_schedule(3, 1e-2, 1.0 / 6.0).unwrap();
    let loose = SelectorConfig {
        condition_tolerance: 1e300,
        ..SelectorConfig::default()
    };
    let body = VPolytope::centered_box(&[1e-3, 1e-3, 1e-5]).unwrap();
    let plane = Hyperplane::new(&[0.6, 0.01, 0.8], 1.0).unwrap();
    let p = scale(&plane.normal, plane.offset);
    let state = RecursionState {
        k: 3,
        y: scale(&p, 0.99),
        p,
        plane,
        bbox: BoxK {
            k: 3,
            half_widths: vec![0.01, 1.0, 1e-4],
        },
        perm: SignedPerm::identity(3),
    };
    let DescentOutcome::Next { state: s2, step } = descend_step(&state, &schedule, &body, &loose).unwrap() else {
        panic!("expected Case II at k=3");
    };
    assert_eq!(step.case, StepCase::CaseII);
    assert_eq!(step.descent.as_ref().unwrap().face_index, 2);
    assert_eq!(s2.k, 2);
    assert_eq!(s2.bbox.half_widths, vec![0.01 * schedule.c0, schedule.c0]);
    let DescentOutcome::Next { state: s1, step } = descend_step(&s2, &schedule, &body, &loose).unwrap() else {
        panic!("expected Case II at k=2");
    };
    let d = step.descent.unwrap();
    assert_eq!((d.face_index, d.face_axis, d.face_flipped), (0, 0, false));
    assert_eq!(s1.k, 1);
    assert_eq!(s1.perm.axis(0), 1);
    let lifted = lift_to_support(&s1.plane, &s1.perm, &body).unwrap();
    assert_eq!(lifted.normal, vec![0.0, 1.0, 0.0]);
    assert!((lifted.offset - 1e-3).abs() < 1e-15);
}
