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

//! Eigen-decomposition of a small symmetric matrix.

use hypersupport::numkit::{sym_eigen, SymMatrix};

fn main() -> hypersupport::Result<()> {
    let (c, s) = (30f64.to_radians().cos(), 30f64.to_radians().sin());
    // R · diag(9, 1) · Rᵀ
    let m = SymMatrix::symmetrized(vec![
        vec![9.0 * c * c + s * s, 8.0 * c * s],
        vec![8.0 * c * s, 9.0 * s * s + c * c],
    ])?;
    let e = sym_eigen(&m)?;
    for (i, lambda) in e.eigenvalues.iter().enumerate() {
        println!("λ{i} = {lambda:.12}  v = {:?}", e.vector(i));
    }
    Ok(())
}
