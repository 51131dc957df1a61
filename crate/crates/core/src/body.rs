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

//! Vertex-represented convex polytopes and the LP-based oracles that run
//! against them: Minkowski gauge, support function, ray/boundary
//! intersection, supporting hyperplanes, chord lengths and membership.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::numkit::vector::{dot, max_abs, norm, normalized, rank, scale, sub};
use crate::numkit::{solve_lp, LinearProgram, LpStatus};

/// Gauge tolerance accepted by [`VPolytope::supporting_hyperplane_at`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-7;

/// Hyperplane `{x : normal·x = offset}` with a unit normal and `offset ≥ 0`,
/// so the origin lies on the side `normal·x ≤ offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Hyperplane {
    /// Normalizes `normal` and flips orientation if needed so that the
    /// offset is nonnegative.
    pub fn new(normal: &[f64], offset: f64) -> Result<Self> {
        let len = norm(normal);
        if !(len > 0.0 && len.is_finite() && offset.is_finite()) {
            return input("hyperplane needs a nonzero finite normal and finite offset");
        }
        let (mut u, mut h) = (scale(normal, 1.0 / len), offset / len);
        if h < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
            h = -h;
        }
        Ok(Hyperplane { normal: u, offset: h })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// Signed value `normal·x − offset`; negative on the origin side.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        self.signed_distance(x).abs()
    }

    pub fn distance_to_origin(&self) -> f64 {
        self.offset
    }
}

/// On-disk body format: `{ "dim": n, "vertices": [[...], ...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

/// A full-dimensional polytope given by a list of points whose convex hull it
/// is. Points need not all be extreme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodyFile", into = "BodyFile")]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<BodyFile> for VPolytope {
    type Error = Error;
    fn try_from(f: BodyFile) -> Result<Self> {
        VPolytope::new(f.dim, f.vertices)
    }
}

impl From<VPolytope> for BodyFile {
    fn from(p: VPolytope) -> Self {
        BodyFile {
            dim: p.dim,
            vertices: p.vertices,
        }
    }
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return input("dimension must be positive");
        }
        if vertices.len() < dim + 1 {
            return input(format!("{} vertices cannot span dimension {dim}", vertices.len()));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return input(format!("vertex of length {} in dimension {dim}", v.len()));
        }
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return input("vertices must be finite");
        }
        let diffs: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        if rank(&diffs, 1e-12) < dim {
            return Err(Error::Degenerate(format!("vertices do not span dimension {dim}")));
        }
        Ok(VPolytope { dim, vertices })
    }

    /// Axis-aligned box `∏[−wᵢ, wᵢ]`.
    pub fn centered_box(half_widths: &[f64]) -> Result<Self> {
        let n = half_widths.len();
        if half_widths.iter().any(|&w| !(w > 0.0)) {
            return input("box half-widths must be positive");
        }
        let vertices = (0..1usize << n)
            .map(|mask| {
                half_widths
                    .iter()
                    .enumerate()
                    .map(|(i, w)| if mask >> i & 1 == 1 { -w } else { *w })
                    .collect()
            })
            .collect();
        Self::new(n, vertices)
    }

    /// Regular polygon with `sides` vertices on the circle of radius `radius`,
    /// the first at angle zero.
    pub fn regular_polygon(sides: usize, radius: f64) -> Result<Self> {
        if sides < 3 {
            return input("a polygon needs at least three sides");
        }
        let vertices = (0..sides)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
                vec![radius * t.cos(), radius * t.sin()]
            })
            .collect();
        Self::new(2, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Applies `f` to every vertex and revalidates.
    pub fn map_vertices(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(self.dim, self.vertices.iter().map(|v| f(v)).collect())
    }

    /// Largest absolute coordinate over all vertices.
    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|v| max_abs(v)).fold(0.0, f64::max)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return input(format!("point of length {} in dimension {}", x.len(), self.dim));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return input("point must be finite");
        }
        Ok(())
    }

    fn vertex_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|r| self.vertices.iter().map(|v| v[r]).collect())
            .collect()
    }

    /// Gauge LP `min Σμ s.t. Σμᵢvᵢ = x, μ ≥ 0`, returning the value and the
    /// dual multipliers `z` (with `vᵢ·z ≤ 1` for all vertices).
    fn gauge_lp(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let lp = LinearProgram::new(vec![1.0; self.vertices.len()], self.vertex_rows(), x.to_vec());
        let sol = solve_lp(&lp)?;
        match sol.status {
            LpStatus::Optimal => Ok((sol.value, sol.dual)),
            LpStatus::Infeasible => Err(Error::Numerical(
                "gauge LP infeasible: origin is not interior to the body".into(),
            )),
            LpStatus::Unbounded => Err(Error::Numerical("gauge LP unbounded".into())),
        }
    }

    /// Minkowski gauge `min{t ≥ 0 : x ∈ tS}`. Requires the origin to be
    /// interior.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        if x.iter().all(|&v| v == 0.0) {
            return Ok(0.0);
        }
        Ok(self.gauge_lp(x)?.0)
    }

    /// Checks that every signed coordinate direction has a finite gauge, i.e.
    /// the vertices positively span the space.
    pub fn assert_origin_interior(&self) -> Result<()> {
        let s = self.scale();
        for i in 0..self.dim {
            for sign in [1.0, -1.0] {
                let mut e = vec![0.0; self.dim];
                e[i] = sign * s;
                match self.gauge(&e) {
                    Ok(g) if g.is_finite() => {}
                    _ => return Err(Error::Input("origin is not in the interior of the body".into())),
                }
            }
        }
        Ok(())
    }

    /// `max_i u·vᵢ`.
    pub fn support_value(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        if u.iter().all(|&v| v == 0.0) {
            return input("support direction must be nonzero");
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Intersection of the ray from the origin through `y` with the boundary.
    pub fn ray_boundary(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(y)?;
        if y.iter().all(|&v| v == 0.0) {
            return input("ray direction must be nonzero");
        }
        let g = self.gauge(y)?;
        Ok(scale(y, 1.0 / g))
    }

    /// A supporting hyperplane at the boundary point `p`, read off the dual of
    /// the gauge LP. At non-smooth points this is whichever normal of the
    /// cone the simplex lands on.
    pub fn supporting_hyperplane_at(&self, p: &[f64]) -> Result<Hyperplane> {
        self.check_point(p)?;
        if p.iter().all(|&v| v == 0.0) {
            return input("the origin is not a boundary point");
        }
        let (g, z) = self.gauge_lp(p)?;
        if (g - 1.0).abs() > BOUNDARY_TOLERANCE {
            return input(format!("point has gauge {g}, not on the boundary"));
        }
        let u = normalized(&z).ok_or_else(|| Error::Numerical("gauge LP returned a zero dual".into()))?;
        let h = self.support_value(&u)?;
        Hyperplane::new(&u, h)
    }

    /// Length of the chord of the body along the line through the origin with
    /// direction `u`.
    pub fn chord_diameter(&self, u: &[f64]) -> Result<f64> {
        self.check_point(u)?;
        let len = norm(u);
        if (len - 1.0).abs() > 1e-9 {
            return input("chord direction must be a unit vector");
        }
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        let forward = 1.0 / self.gauge(u)?;
        let backward = 1.0 / self.gauge(&neg)?;
        Ok(forward + backward)
    }

    /// Whether `x` is a convex combination of the vertices, within `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if self.check_point(x).is_err() || !(tol > 0.0) {
            return false;
        }
        let mut rows = self.vertex_rows();
        rows.push(vec![1.0; self.vertices.len()]);
        let mut rhs = x.to_vec();
        rhs.push(1.0);
        let lp = LinearProgram::new(vec![0.0; self.vertices.len()], rows, rhs).with_tolerance(tol);
        matches!(solve_lp(&lp), Ok(s) if s.status == LpStatus::Optimal)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}
