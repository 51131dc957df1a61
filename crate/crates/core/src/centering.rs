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

//! Well-centering: translate a body and find an origin-centered ellipsoid `E`
//! with `E ⊂ S ⊂ nE`, expressed in the frame of `E`'s principal axes.
//!
//! `E` is the minimum-volume enclosing ellipsoid of the vertices shrunk by the
//! factor `n` about its center. The enclosing ellipsoid is computed with a
//! Frank–Wolfe iteration with away steps on the lifted (centrally symmetric)
//! problem, after an affine whitening of the points that only serves to keep
//! the iteration well conditioned for very thin bodies. The principal axes
//! and their lengths are then recomputed in world coordinates directly from
//! the optimal weights, which keeps the short axes accurate to relative
//! precision even when the aspect ratio is extreme.

use serde::{Deserialize, Serialize};

use crate::body::{Hyperplane, VPolytope};
use crate::error::{input, Error, Result};
use crate::numkit::vector::{dot, rank, sub};
use crate::numkit::{sym_eigen, SymMatrix};

pub const DEFAULT_MVEE_EPS: f64 = 1e-7;
const MAX_ITERATIONS: usize = 1_000_000;

/// `{x : (x−c)ᵀQ(x−c) ≤ 1}`, stored together with its principal axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    pub center: Vec<f64>,
    pub shape: SymMatrix,
    /// Unit principal axes, ordered with `semi_axes`.
    pub axes: Vec<Vec<f64>>,
    /// Descending.
    pub semi_axes: Vec<f64>,
}

impl Ellipsoid {
    fn from_axes(center: Vec<f64>, axes: Vec<Vec<f64>>, semi_axes: Vec<f64>) -> Result<Self> {
        let n = center.len();
        let mut q = vec![vec![0.0; n]; n];
        for (axis, a) in axes.iter().zip(&semi_axes) {
            for i in 0..n {
                for j in 0..n {
                    q[i][j] += axis[i] * axis[j] / (a * a);
                }
            }
        }
        Ok(Ellipsoid {
            center,
            shape: SymMatrix::symmetrized(q)?,
            axes,
            semi_axes,
        })
    }

    /// `(x−c)ᵀQ(x−c)`, evaluated through the principal axes.
    pub fn level(&self, x: &[f64]) -> f64 {
        let d = sub(x, &self.center);
        self.axes
            .iter()
            .zip(&self.semi_axes)
            .map(|(axis, a)| (dot(&d, axis) / a).powi(2))
            .sum()
    }
}

/// Optimal barycentric weights and the final optimality gap of the
/// enclosing-ellipsoid iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct MveeCertificate {
    pub weights: Vec<f64>,
    pub gap: f64,
    pub iterations: usize,
}

/// Rigid frame of the inner ellipsoid: `x_frame = rotationᵀ (x_world − translation)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnFrame {
    pub translation: Vec<f64>,
    /// Row-major; column `j` is the `j`-th principal axis in world coordinates.
    pub rotation: Vec<Vec<f64>>,
    pub semi_axes: Vec<f64>,
}

impl JohnFrame {
    pub fn identity(semi_axes: Vec<f64>) -> Self {
        let n = semi_axes.len();
        JohnFrame {
            translation: vec![0.0; n],
            rotation: SymMatrix::identity(n).entries().to_vec(),
            semi_axes,
        }
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    pub fn to_frame(&self, x_world: &[f64]) -> Vec<f64> {
        let d = sub(x_world, &self.translation);
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|r| self.rotation[r][j] * d[r]).sum())
            .collect()
    }

    pub fn from_frame(&self, x_frame: &[f64]) -> Vec<f64> {
        self.rotation
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| t + dot(row, x_frame))
            .collect()
    }

    /// Maps a frame hyperplane to world coordinates. The orientation is kept
    /// relative to the image of the frame origin, so the returned offset is
    /// negative when the world origin lies on the far side.
    pub fn hyperplane_from_frame(&self, hp: &Hyperplane) -> Hyperplane {
        let normal: Vec<f64> = self.rotation.iter().map(|row| dot(row, &hp.normal)).collect();
        let offset = dot(&normal, &self.translation) + hp.offset;
        Hyperplane { normal, offset }
    }
}

/// Result of [`well_center`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellCentered {
    pub frame: JohnFrame,
    pub frame_body: VPolytope,
}

fn validate_points(points: &[Vec<f64>]) -> Result<usize> {
    let n = match points.first() {
        Some(p) if !p.is_empty() => p.len(),
        _ => return input("need at least one point of positive dimension"),
    };
    if points.iter().any(|p| p.len() != n) {
        return input("points have inconsistent dimensions");
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return input("points must be finite");
    }
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    if points.len() < n + 1 || rank(&diffs, 1e-12) < n {
        return Err(Error::Degenerate(format!("points do not span dimension {n}")));
    }
    Ok(n)
}

/// Cholesky factor `L` of a symmetric positive definite matrix.
fn cholesky(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = m[i][i] - s;
                if !(d > 0.0) {
                    return Err(Error::Numerical("scatter matrix lost definiteness".into()));
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (m[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

/// `qᵀ (LLᵀ)⁻¹ q` by forward substitution.
fn quadratic_form(l: &[Vec<f64>], q: &[f64]) -> f64 {
    let n = q.len();
    let mut w = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i][k] * w[k]).sum();
        w[i] = (q[i] - s) / l[i][i];
    }
    dot(&w, &w)
}

fn whiten(points: &[Vec<f64>], n: usize) -> Result<Vec<Vec<f64>>> {
    let m = points.len() as f64;
    let mean: Vec<f64> = (0..n).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / m).collect();
    let mut cov = vec![vec![0.0; n]; n];
    for p in points {
        let d = sub(p, &mean);
        for i in 0..n {
            for j in 0..n {
                cov[i][j] += d[i] * d[j] / m;
            }
        }
    }
    let eig = sym_eigen(&SymMatrix::symmetrized(cov)?)?;
    let axes: Vec<(Vec<f64>, f64)> = (0..n).map(|j| (eig.vector(j), eig.eigenvalues[j])).collect();
    Ok(points
        .iter()
        .map(|p| {
            let d = sub(p, &mean);
            axes.iter()
                .map(|(v, lambda)| {
                    let proj = dot(&d, v);
                    // Only conditioning depends on this scale; fall back to the
                    // raw projection if the variance estimate is unusable.
                    if *lambda > 0.0 {
                        proj / lambda.sqrt()
                    } else {
                        proj
                    }
                })
                .collect()
        })
        .collect())
}

fn khachiyan_weights(lifted: &[Vec<f64>], eps: f64) -> Result<MveeCertificate> {
    let m = lifted.len();
    let d = lifted[0].len() as f64;
    let mut u = vec![1.0 / m as f64; m];
    for it in 0..MAX_ITERATIONS {
        let dd = lifted[0].len();
        let mut x = vec![vec![0.0; dd]; dd];
        for (q, &w) in lifted.iter().zip(&u) {
            if w == 0.0 {
                continue;
            }
            for i in 0..dd {
                for j in 0..=i {
                    x[i][j] += w * q[i] * q[j];
                }
            }
        }
        for i in 0..dd {
            for j in 0..i {
                x[j][i] = x[i][j];
            }
        }
        let l = cholesky(&x)?;
        let levels: Vec<f64> = lifted.iter().map(|q| quadratic_form(&l, q)).collect();

        let (jmax, &kmax) = levels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let (imin, kmin) = levels
            .iter()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, k)| (i, *k))
            .expect("weights sum to one");
        let gap_up = kmax / d - 1.0;
        let gap_down = 1.0 - kmin / d;
        let gap = gap_up.max(gap_down);
        if gap <= eps {
            return Ok(MveeCertificate {
                weights: u,
                gap,
                iterations: it,
            });
        }
        if gap_up >= gap_down {
            let tau = (kmax - d) / (d * (kmax - 1.0));
            u.iter_mut().for_each(|w| *w *= 1.0 - tau);
            u[jmax] += tau;
        } else {
            let cap = u[imin] / (1.0 - u[imin]);
            let tau = if kmin - 1.0 > 1e-15 {
                ((d - kmin) / (d * (kmin - 1.0))).min(cap)
            } else {
                cap
            };
            u.iter_mut().for_each(|w| *w *= 1.0 + tau);
            u[imin] -= tau;
            if tau == cap || u[imin] < 0.0 {
                u[imin] = 0.0;
            }
        }
    }
    Err(Error::Numerical(
        "enclosing-ellipsoid iteration did not converge".into(),
    ))
}

/// Minimum-volume enclosing ellipsoid of `points` together with its
/// optimality certificate.
pub fn mvee_with_certificate(points: &[Vec<f64>], eps: f64) -> Result<(Ellipsoid, MveeCertificate)> {
    if !(eps > 0.0 && eps <= 0.1) {
        return input("eps must lie in (0, 0.1]");
    }
    let n = validate_points(points)?;
    let lifted: Vec<Vec<f64>> = whiten(points, n)?
        .into_iter()
        .map(|mut z| {
            z.push(1.0);
            z
        })
        .collect();
    let cert = khachiyan_weights(&lifted, eps)?;
    let u = &cert.weights;

    let center: Vec<f64> = (0..n)
        .map(|j| points.iter().zip(u).map(|(p, w)| w * p[j]).sum())
        .collect();
    let centered: Vec<Vec<f64>> = points.iter().map(|p| sub(p, &center)).collect();
    let mut scatter = vec![vec![0.0; n]; n];
    for (c, &w) in centered.iter().zip(u) {
        for i in 0..n {
            for j in 0..n {
                scatter[i][j] += w * c[i] * c[j];
            }
        }
    }
    let eig = sym_eigen(&SymMatrix::symmetrized(scatter)?)?;
    let mut axes: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|j| {
            let v = eig.vector(j);
            let var: f64 = centered.iter().zip(u).map(|(c, w)| w * dot(c, &v).powi(2)).sum();
            (v, (n as f64 * var).sqrt())
        })
        .collect();
    if axes.iter().any(|(_, a)| !(*a > 0.0)) {
        return Err(Error::Degenerate("enclosing ellipsoid is flat".into()));
    }
    // Inflate so every point is enclosed; the certificate bounds this factor
    // by sqrt(1 + O(eps)).
    let worst = centered
        .iter()
        .map(|c| axes.iter().map(|(v, a)| (dot(c, v) / a).powi(2)).sum::<f64>())
        .fold(0.0, f64::max);
    let inflate = worst.sqrt() * (1.0 + 1e-12);
    axes.iter_mut().for_each(|(_, a)| *a *= inflate);
    axes.sort_by(|x, y| y.1.total_cmp(&x.1));
    let (axis_vecs, semi): (Vec<_>, Vec<_>) = axes.into_iter().unzip();
    Ok((Ellipsoid::from_axes(center, axis_vecs, semi)?, cert))
}

pub fn mvee(points: &[Vec<f64>], eps: f64) -> Result<Ellipsoid> {
    Ok(mvee_with_certificate(points, eps)?.0)
}

/// Translates and rotates `body` into the principal-axis frame of its inner
/// ellipsoid `E_a = {Σ(xⁱ/aⁱ)² ≤ 1}`, where `a` is the enclosing ellipsoid's
/// semi-axes divided by `n`.
pub fn well_center(body: &VPolytope, eps: f64) -> Result<WellCentered> {
    let ell = mvee(body.vertices(), eps)?;
    let n = body.dim();
    let rotation: Vec<Vec<f64>> = (0..n).map(|r| ell.axes.iter().map(|ax| ax[r]).collect()).collect();
    let frame = JohnFrame {
        translation: ell.center.clone(),
        rotation,
        semi_axes: ell.semi_axes.iter().map(|a| a / n as f64).collect(),
    };
    let frame_body = body.map_vertices(|v| frame.to_frame(v))?;
    Ok(WellCentered { frame, frame_body })
}

/// Support function of the axis-aligned ellipsoid with semi-axes `a`.
pub fn ellipsoid_support(a: &[f64], u: &[f64]) -> f64 {
    a.iter().zip(u).map(|(ai, ui)| (ai * ui).powi(2)).sum::<f64>().sqrt()
}

/// `max_v Σ(vⁱ/(n·aⁱ))²`; at most 1 when the body lies in `nE_a`.
pub fn outer_containment(frame_body: &VPolytope, a: &[f64]) -> f64 {
    let n = a.len() as f64;
    frame_body
        .vertices()
        .iter()
        .map(|v| v.iter().zip(a).map(|(x, ai)| (x / (n * ai)).powi(2)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `min_u h_S(u)/h_{E_a}(u)` over the given directions; at least 1 when
/// `E_a ⊂ S`.
pub fn inner_containment(frame_body: &VPolytope, a: &[f64], directions: &[Vec<f64>]) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for u in directions {
        let ratio = frame_body.support_value(u)? / ellipsoid_support(a, u);
        worst = worst.min(ratio);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{orthogonal_matrix, seeded, unit_vector};

    fn square_points() -> Vec<Vec<f64>> {
        vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]]
    }

    #[test]
    fn square_gives_circumscribed_circle() {
        let (e, cert) = mvee_with_certificate(&square_points(), 1e-6).unwrap();
        assert!(e.center.iter().all(|c| c.abs() < 1e-12));
        for a in &e.semi_axes {
            assert!((a - 2f64.sqrt()).abs() < 1e-4);
        }
        for p in square_points() {
            assert!((e.level(&p) - 1.0).abs() < 1e-6);
        }
        assert!(cert.gap <= 1e-6);
    }

    #[test]
    fn regular_simplex_gives_circumsphere() {
        // Regular triangle and tetrahedron, centered off the origin.
        let tri: Vec<Vec<f64>> = (0..3)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0 + 0.3;
                vec![2.0 + t.cos(), -1.0 + t.sin()]
            })
            .collect();
        let tet = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ];
        for pts in [tri, tet] {
            let e = mvee(&pts, 1e-8).unwrap();
            let radii: Vec<f64> = pts
                .iter()
                .map(|p| crate::numkit::vector::norm(&sub(p, &e.center)))
                .collect();
            for r in &radii {
                assert!((r - radii[0]).abs() < 1e-6);
            }
            for a in &e.semi_axes {
                assert!((a - radii[0]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        assert!(matches!(mvee(&pts, 1e-6), Err(Error::Degenerate(_))));
        assert!(mvee(&square_points(), 0.5).is_err());
    }

    #[test]
    fn certificate_gap_recomputed_from_weights() {
        let mut rng = seeded(11);
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|_| unit_vector(&mut rng, 3))
            .map(|v| vec![v[0] * 3.0, v[1], v[2] * 0.2 + 1.0])
            .collect();
        let eps = 1e-7;
        let (e, cert) = mvee_with_certificate(&pts, eps).unwrap();
        assert!(cert.gap <= eps);
        // Independent check: levels of the weighted lifted scatter.
        let lifted: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.push(1.0);
                q
            })
            .collect();
        let mut x = vec![vec![0.0; 4]; 4];
        for (q, w) in lifted.iter().zip(&cert.weights) {
            for i in 0..4 {
                for j in 0..4 {
                    x[i][j] += w * q[i] * q[j];
                }
            }
        }
        let l = cholesky(&x).unwrap();
        let kmax = lifted.iter().map(|q| quadratic_form(&l, q)).fold(0.0, f64::max);
        assert!(kmax / 4.0 - 1.0 <= 1e-6);
        for p in &pts {
            assert!(e.level(p) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn square_well_centered() {
        let body = VPolytope::centered_box(&[1.0, 1.0]).unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        assert!(wc.frame.translation.iter().all(|t| t.abs() < 1e-12));
        for a in &wc.frame.semi_axes {
            assert!((a - 2f64.sqrt() / 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn thin_rectangle_semi_axes() {
        let eps = 1e-3;
        let body = VPolytope::centered_box(&[1.0, eps]).unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        let a = &wc.frame.semi_axes;
        assert!((a[0] - 2f64.sqrt() / 2.0).abs() < 1e-6);
        assert!((a[1] - eps * 2f64.sqrt() / 2.0).abs() < 1e-6 * eps);
        assert!(wc.frame.translation.iter().all(|t| t.abs() < 1e-12));
    }

    #[test]
    fn rotated_thin_box_keeps_relative_accuracy() {
        let mut rng = seeded(5);
        let q = orthogonal_matrix(&mut rng, 3);
        let base = VPolytope::centered_box(&[1.0, 1e-3, 1e-6]).unwrap();
        let body = base
            .map_vertices(|v| (0..3).map(|i| dot(&q[i], v) + 0.5).collect())
            .unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        let a = &wc.frame.semi_axes;
        let expect = [1.0, 1e-3, 1e-6].map(|w: f64| w * 3f64.sqrt() / 3.0);
        for (x, e) in a.iter().zip(expect) {
            assert!(((x - e) / e).abs() < 1e-6, "{x} vs {e}");
        }
        assert!(outer_containment(&wc.frame_body, a) <= 1.0 + 1e-6);
        let dirs: Vec<Vec<f64>> = (0..200).map(|_| unit_vector(&mut rng, 3)).collect();
        assert!(inner_containment(&wc.frame_body, a, &dirs).unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn recentering_is_idempotent() {
        let mut rng = seeded(9);
        let pts: Vec<Vec<f64>> = (0..12)
            .map(|_| unit_vector(&mut rng, 3))
            .map(|v| vec![v[0] + 3.0, 2.0 * v[1], v[2] - 1.0])
            .collect();
        let body = VPolytope::new(3, pts).unwrap();
        let wc = well_center(&body, 1e-7).unwrap();
        let again = well_center(&wc.frame_body, 1e-7).unwrap();
        assert!(again.frame.translation.iter().all(|t| t.abs() < 1e-6));
    }

    #[test]
    fn frame_round_trip() {
        let mut rng = seeded(1);
        let q = orthogonal_matrix(&mut rng, 4);
        let frame = JohnFrame {
            translation: vec![1.0, -2.0, 0.5, 3.0],
            rotation: q,
            semi_axes: vec![1.0; 4],
        };
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x = unit_vector(&mut rng, 4);
            let back = frame.from_frame(&frame.to_frame(&x));
            worst = worst.max(crate::numkit::vector::max_abs(&sub(&back, &x)));
        }
        assert!(worst <= 1e-12);

        let id = JohnFrame::identity(vec![1.0, 1.0]);
        assert_eq!(id.to_frame(&[0.3, -0.7]), vec![0.3, -0.7]);
    }

    #[test]
    fn axis_hyperplane_maps_rigidly() {
        let theta: f64 = 0.4;
        let frame = JohnFrame {
            translation: vec![1.0, 2.0],
            rotation: vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]],
            semi_axes: vec![1.0, 1.0],
        };
        let h = 1.5;
        let hp = Hyperplane::new(&[1.0, 0.0], h).unwrap();
        let w = frame.hyperplane_from_frame(&hp);
        let e1_world = vec![theta.cos(), theta.sin()];
        assert!(crate::numkit::vector::max_abs(&sub(&w.normal, &e1_world)) < 1e-15);
        let anchor = frame.from_frame(&[h, 0.0]);
        assert!(w.signed_distance(&anchor).abs() < 1e-12);
        assert!(w.signed_distance(&frame.translation) < 0.0);
    }
}
