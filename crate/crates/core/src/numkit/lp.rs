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

//! Dense two-phase revised simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Problems in this crate have a handful of rows (the ambient dimension, plus
//! one for convex combinations) and at most a few hundred columns, so the
//! basis inverse is kept explicitly and refreshed from scratch every few
//! pivots. Entering and leaving variables follow Bland's rule, which makes the
//! solver both cycle-free and fully deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

const DEFAULT_TOLERANCE: f64 = 1e-10;
const PIVOT_TOLERANCE: f64 = 1e-9;
const REFACTOR_EVERY: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    /// Row-major, `equality_rhs.len()` rows by `objective.len()` columns.
    pub equality_matrix: Vec<Vec<f64>>,
    pub equality_rhs: Vec<f64>,
    /// When false every variable is free (split internally into two
    /// nonnegative parts).
    pub nonneg: bool,
    pub tolerance: f64,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, equality_matrix: Vec<Vec<f64>>, equality_rhs: Vec<f64>) -> Self {
        LinearProgram {
            objective,
            equality_matrix,
            equality_rhs,
            nonneg: true,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_free_variables(mut self) -> Self {
        self.nonneg = false;
        self
    }

    fn validate(&self) -> Result<()> {
        let cols = self.objective.len();
        if cols == 0 {
            return input("linear program has no variables");
        }
        if self.equality_matrix.len() != self.equality_rhs.len() {
            return input(format!(
                "equality matrix has {} rows but rhs has {} entries",
                self.equality_matrix.len(),
                self.equality_rhs.len()
            ));
        }
        if let Some(row) = self.equality_matrix.iter().find(|r| r.len() != cols) {
            return input(format!(
                "equality row has {} columns, objective has {}",
                row.len(),
                cols
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return input("tolerance must be positive and finite");
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.equality_rhs.iter().all(|x| x.is_finite())
            && self.equality_matrix.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return input("linear program contains non-finite entries");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// Multipliers `y` of the equality rows, with `Aᵀy ≤ c` and `bᵀy` equal to
    /// the optimal value. Only meaningful when `status` is optimal.
    pub dual: Vec<f64>,
    pub value: f64,
}

impl LpSolution {
    fn without_solution(status: LpStatus, vars: usize, rows: usize) -> Self {
        let value = match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        };
        LpSolution {
            status,
            primal: vec![0.0; vars],
            dual: vec![0.0; rows],
            value,
        }
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// Scaled constraint matrix including one artificial column per row.
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    pivots_since_refactor: usize,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.b.len()
    }

    fn column(&self, j: usize) -> Vec<f64> {
        let m = self.rows();
        (0..m)
            .map(|r| (0..m).map(|k| self.binv[r][k] * self.a[k][j]).sum())
            .collect()
    }

    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.rows();
        let mut y = vec![0.0; m];
        for (r, &col) in self.basis.iter().enumerate() {
            let c = cost[col];
            if c != 0.0 {
                for (yk, bk) in y.iter_mut().zip(&self.binv[r]) {
                    *yk += c * bk;
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, j: usize, w: &[f64]) {
        let theta = self.xb[r] / w[r];
        for (i, x) in self.xb.iter_mut().enumerate() {
            if i != r {
                *x -= theta * w[i];
            }
        }
        self.xb[r] = theta;
        let inv_p = 1.0 / w[r];
        for v in self.binv[r].iter_mut() {
            *v *= inv_p;
        }
        let pivot_row = self.binv[r].clone();
        for (i, row) in self.binv.iter_mut().enumerate() {
            if i != r && w[i] != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= w[i] * p;
                }
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[j] = true;
        self.basis[r] = j;
        self.pivots_since_refactor += 1;
        if self.pivots_since_refactor >= REFACTOR_EVERY {
            // A singular refactor means the incremental inverse has drifted;
            // keep the incremental one in that case.
            let _ = self.refactor();
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.rows();
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|r| {
                let mut row: Vec<f64> = self.basis.iter().map(|&c| self.a[r][c]).collect();
                row.extend((0..m).map(|k| if k == r { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&i, &k| aug[i][col].abs().total_cmp(&aug[k][col].abs()))
                .unwrap_or(col);
            if aug[piv][col].abs() < 1e-14 {
                return Err(Error::Numerical("singular simplex basis".into()));
            }
            aug.swap(col, piv);
            let inv = 1.0 / aug[col][col];
            for v in aug[col].iter_mut() {
                *v *= inv;
            }
            let prow = aug[col].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != col && row[col] != 0.0 {
                    let f = row[col];
                    for (v, p) in row.iter_mut().zip(&prow) {
                        *v -= f * p;
                    }
                }
            }
        }
        self.binv = aug.into_iter().map(|row| row[m..].to_vec()).collect();
        self.xb = (0..m)
            .map(|r| (0..m).map(|k| self.binv[r][k] * self.b[k]).sum())
            .collect();
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn run(&mut self, cost: &[f64], enterable: usize, tol: f64) -> Result<Phase> {
        let ncols = self.a[0].len();
        let max_iter = 50 * (ncols + self.rows()) + 1000;
        for _ in 0..max_iter {
            let y = self.duals(cost);
            let entering = (0..enterable).find(|&j| {
                if self.is_basic[j] {
                    return false;
                }
                let reduced: f64 = cost[j] - (0..self.rows()).map(|r| y[r] * self.a[r][j]).sum::<f64>();
                reduced < -tol
            });
            let Some(j) = entering else {
                return Ok(Phase::Optimal);
            };
            let w = self.column(j);
            let mut leave: Option<(usize, f64)> = None;
            for (r, &wr) in w.iter().enumerate() {
                if wr <= PIVOT_TOLERANCE {
                    continue;
                }
                let ratio = self.xb[r].max(0.0) / wr;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((br, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * best.max(1.0);
                        if (tie && self.basis[r] < self.basis[br]) || (!tie && ratio < best) {
                            Some((r, ratio))
                        } else {
                            Some((br, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(r, j, &w);
        }
        Err(Error::Numerical("simplex iteration limit reached".into()))
    }
}

/// Solves a linear program in equality standard form.
///
/// Infeasibility and unboundedness are reported through [`LpStatus`];
/// malformed dimensions or non-finite data are input errors.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let nvars = lp.objective.len();
    let m_orig = lp.equality_rhs.len();
    let tol = lp.tolerance;

    // Working columns: the variables, or their positive/negative parts.
    let split = !lp.nonneg;
    let nreal = if split { 2 * nvars } else { nvars };
    let expand = |row: &[f64]| -> Vec<f64> {
        if split {
            row.iter().copied().chain(row.iter().map(|x| -x)).collect()
        } else {
            row.to_vec()
        }
    };

    let cost_scale = {
        let c = lp.objective.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if c > 0.0 {
            c
        } else {
            1.0
        }
    };

    // Row equilibration and sign normalization (b ≥ 0). Zero rows are either
    // redundant (dropped) or make the problem infeasible.
    let mut row_factor = vec![0.0; m_orig];
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    let mut kept: Vec<usize> = Vec::new();
    for (r, (row, &rhs)) in lp.equality_matrix.iter().zip(&lp.equality_rhs).enumerate() {
        let big = row.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if big == 0.0 {
            if rhs.abs() > tol {
                return Ok(LpSolution::without_solution(LpStatus::Infeasible, nvars, m_orig));
            }
            continue;
        }
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        let f = sign / big;
        row_factor[r] = f;
        a.push(expand(row).into_iter().map(|x| x * f).collect());
        b.push(rhs * f);
        kept.push(r);
    }
    let m = b.len();

    if m == 0 {
        // Only nonnegativity: bounded below iff the scaled cost is nonnegative.
        let c = expand(&lp.objective);
        if c.iter().any(|&x| x < -tol * cost_scale) {
            return Ok(LpSolution::without_solution(LpStatus::Unbounded, nvars, m_orig));
        }
        return Ok(LpSolution {
            status: LpStatus::Optimal,
            primal: vec![0.0; nvars],
            dual: vec![0.0; m_orig],
            value: 0.0,
        });
    }

    for (r, row) in a.iter_mut().enumerate() {
        row.extend((0..m).map(|k| if k == r { 1.0 } else { 0.0 }));
    }
    let ncols = nreal + m;
    let mut is_basic = vec![false; ncols];
    for k in 0..m {
        is_basic[nreal + k] = true;
    }
    let mut t = Tableau {
        binv: (0..m)
            .map(|r| (0..m).map(|k| if k == r { 1.0 } else { 0.0 }).collect())
            .collect(),
        xb: b.clone(),
        a,
        b,
        basis: (nreal..ncols).collect(),
        is_basic,
        pivots_since_refactor: 0,
    };

    // Phase 1: minimize the sum of artificials.
    let phase1_cost: Vec<f64> = (0..ncols).map(|j| if j < nreal { 0.0 } else { 1.0 }).collect();
    t.run(&phase1_cost, ncols, tol)?;
    let infeasibility: f64 = t
        .basis
        .iter()
        .zip(&t.xb)
        .filter(|(&c, _)| c >= nreal)
        .map(|(_, &x)| x.max(0.0))
        .sum();
    let bscale = t.b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if infeasibility > tol * (1.0 + bscale) * m as f64 {
        return Ok(LpSolution::without_solution(LpStatus::Infeasible, nvars, m_orig));
    }

    // Drive artificials out of the basis where a real column can replace them.
    // Artificials left behind sit on redundant rows at level zero.
    for r in 0..m {
        if t.basis[r] < nreal {
            continue;
        }
        let candidate = (0..nreal).filter(|&j| !t.is_basic[j]).find_map(|j| {
            let w = t.column(j);
            (w[r].abs() > PIVOT_TOLERANCE).then_some((j, w))
        });
        if let Some((j, w)) = candidate {
            t.pivot(r, j, &w);
        }
    }

    // Phase 2 on the scaled objective; artificials may not re-enter.
    let c_real = expand(&lp.objective);
    let phase2_cost: Vec<f64> = (0..ncols)
        .map(|j| if j < nreal { c_real[j] / cost_scale } else { 0.0 })
        .collect();
    if let Phase::Unbounded = t.run(&phase2_cost, nreal, tol)? {
        return Ok(LpSolution::without_solution(LpStatus::Unbounded, nvars, m_orig));
    }
    t.refactor()?;

    let mut x_work = vec![0.0; nreal];
    for (&col, &val) in t.basis.iter().zip(&t.xb) {
        if col < nreal {
            x_work[col] = val.max(0.0);
        }
    }
    let primal: Vec<f64> = if split {
        (0..nvars).map(|i| x_work[i] - x_work[nvars + i]).collect()
    } else {
        x_work
    };
    let value = primal.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();

    let y_scaled = t.duals(&phase2_cost);
    let mut dual = vec![0.0; m_orig];
    for (k, &r) in kept.iter().enumerate() {
        dual[r] = y_scaled[k] * row_factor[r] * cost_scale;
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        value,
    })
}
