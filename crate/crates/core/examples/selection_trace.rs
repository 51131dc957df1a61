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

//! Print the JSON trace of one selection: per-level favorable test,
//! recursion conditions and, for descents, the slicing geometry.

use hypersupport::centering::well_center;
use hypersupport::numkit::vector::scale;
use hypersupport::select_hyperplane;
use hypersupport::VPolytope;

fn main() -> hypersupport::Result<()> {
    // a hexagon with a very short chamfer at each end of its long axis
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
    )?;
    let wc = well_center(&body, 1e-9)?;
    let fb = &wc.frame_body;
    let tip = wc.frame.to_frame(&[1.0 - d / 2.0, eps / 2.0]);
    let y = scale(&fb.ray_boundary(&tip)?, 1.0 - 1e-2);
    let sel = select_hyperplane(fb, &wc.frame.semi_axes, &y, 0.25)?;
    println!("{}", sel.trace.to_json()?);
    Ok(())
}
