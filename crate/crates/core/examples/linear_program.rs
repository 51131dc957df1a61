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

//! Solve `min cᵀx s.t. Ax = b, x ≥ 0` and read the dual certificate.

use hypersupport::numkit::{solve_lp, LinearProgram};

fn main() -> hypersupport::Result<()> {
    // min x₁ + 2x₂ + 3x₃  s.t.  x₁ + x₂ + x₃ = 2,  x₁ − x₂ = 0
    let lp = LinearProgram::new(
        vec![1.0, 2.0, 3.0],
        vec![vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0]],
        vec![2.0, 0.0],
    );
    let sol = solve_lp(&lp)?;
    println!("status: {:?}", sol.status);
    println!("value:  {}", sol.value);
    println!("primal: {:?}", sol.primal);
    println!("dual:   {:?}", sol.dual);
    Ok(())
}
