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

//! Pick a supporting hyperplane near an interior point of a thin body and
//! compare its distance/chord ratio with the guaranteed bound.

use hypersupport::centering::well_center;
use hypersupport::numkit::vector::scale;
use hypersupport::verify::{thin_family, ThinKind};
use hypersupport::{check_bound, select_hyperplane};

fn main() -> hypersupport::Result<()> {
    let body = thin_family(ThinKind::NeedleSimplex, 3, 1e-2, Some(3))?;
    let wc = well_center(&body, 1e-9)?;
    let fb = &wc.frame_body;
    let s0 = 1.0 / 6.0;
    let p = fb.ray_boundary(&[1.0, 0.2, -0.1])?;
    for s in [1e-1, 1e-3, 1e-6] {
        let y = scale(&p, 1.0 - s);
        let sel = select_hyperplane(fb, &wc.frame.semi_axes, &y, s0)?;
        let report = check_bound(fb, &y, s0, &sel)?;
        let world = wc.frame.hyperplane_from_frame(&sel.hyperplane);
        println!(
            "s = {s:e}: ratio {:.3e} <= bound {:.3e}, depth {}, world normal {:?}",
            report.ratio, report.bound, report.depth, world.normal
        );
    }
    Ok(())
}
