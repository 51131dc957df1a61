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

//! Numeric kernel: a small dense LP solver, a symmetric eigensolver, and
//! vector helpers shared by the geometry modules.

pub mod eigen;
pub mod lp;
pub mod vector;

pub use eigen::{sym_eigen, Eigen, SymMatrix};
pub use lp::{solve_lp, LinearProgram, LpSolution, LpStatus};
