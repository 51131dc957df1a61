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

//! Cyclic Jacobi eigensolver for small symmetric matrices.

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

const MAX_ORDER: usize = 16;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<Vec<f64>>,
}

impl SymMatrix {
    /// Builds from a full square array; rejects anything not exactly symmetric.
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let order = entries.len();
        if order == 0 {
            return input("symmetric matrix must have positive order");
        }
        if entries.iter().any(|r| r.len() != order) {
            return input("symmetric matrix must be square");
        }
        for i in 0..order {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return input(format!("matrix is not symmetric at ({i}, {j})"));
                }
            }
        }
        Ok(SymMatrix { order, entries })
    }

    /// Symmetrizes `(m + mᵀ)/2` so that rounding noise in a product is
    /// accepted.
    pub fn symmetrized(mut entries: Vec<Vec<f64>>) -> Result<Self> {
        let order = entries.len();
        if entries.iter().any(|r| r.len() != order) {
            return input("symmetric matrix must be square");
        }
        for i in 0..order {
            for j in 0..i {
                let v = 0.5 * (entries[i][j] + entries[j][i]);
                entries[i][j] = v;
                entries[j][i] = v;
            }
        }
        Self::new(entries)
    }

    pub fn identity(order: usize) -> Self {
        let entries = (0..order)
            .map(|i| (0..order).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        SymMatrix { order, entries }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::identity(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.entries[i][i] = *d;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Column `i` (i.e. `eigenvectors[r][i]` over `r`) pairs with
    /// `eigenvalues[i]`. Each column has its first significant entry positive.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.iter().map(|row| row[i]).collect()
    }
}

pub fn sym_eigen(m: &SymMatrix) -> Result<Eigen> {
    let n = m.order;
    if n > MAX_ORDER {
        return input(format!("eigensolver supports order ≤ {MAX_ORDER}, got {n}"));
    }
    if m.entries.iter().flatten().any(|x| !x.is_finite()) {
        return input("matrix has non-finite entries");
    }
    let mut a = m.entries.clone();
    let mut v: Vec<Vec<f64>> = SymMatrix::identity(n).entries;
    let scale = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= OFF_DIAGONAL_THRESHOLD * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let mut eigenvectors = vec![vec![0.0; n]; n];
    for (col, &src) in order.iter().enumerate() {
        let mut vec: Vec<f64> = v.iter().map(|row| row[src]).collect();
        canonical_sign(&mut vec);
        for (r, x) in vec.into_iter().enumerate() {
            eigenvectors[r][col] = x;
        }
    }
    Ok(Eigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Flips `v` so its first entry of magnitude above 1e-12 is positive.
pub fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(theta: f64) -> Vec<Vec<f64>> {
        vec![vec![theta.cos(), -theta.sin()], vec![theta.sin(), theta.cos()]]
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = sym_eigen(&SymMatrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted_descending() {
        let e = sym_eigen(&SymMatrix::diagonal(&[1.0, 4.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![4.0, 1.0]);
        assert_eq!(e.vector(0), vec![0.0, 1.0]);
        assert_eq!(e.vector(1), vec![1.0, 0.0]);
    }

    #[test]
    fn rotated_diagonal_recovers_axes() {
        let theta = std::f64::consts::PI / 6.0;
        let r = rotation(theta);
        let d = [9.0, 1.0];
        // R diag(d) Rᵀ, built independently of the solver.
        let m: Vec<Vec<f64>> = (0..2)
            .map(|i| (0..2).map(|j| (0..2).map(|k| r[i][k] * d[k] * r[j][k]).sum()).collect())
            .collect();
        let e = sym_eigen(&SymMatrix::symmetrized(m).unwrap()).unwrap();
        assert!((e.eigenvalues[0] - 9.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
        let v0 = e.vector(0);
        assert!((v0[0] - theta.cos()).abs() < 1e-12);
        assert!((v0[1] - theta.sin()).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_and_non_finite() {
        assert!(SymMatrix::new(vec![vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        let m = SymMatrix::new(vec![vec![f64::NAN]]).unwrap();
        assert!(sym_eigen(&m).is_err());
        assert!(sym_eigen(&SymMatrix::identity(17)).is_err());
    }
}
