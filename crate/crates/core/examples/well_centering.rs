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

//! Put a thin rotated body in its John frame and check `E ⊂ S ⊂ nE`.

use hypersupport::centering::{inner_containment, outer_containment, well_center};
use hypersupport::sampling::{seeded, unit_vector};
use hypersupport::verify::{thin_family, ThinKind};

fn main() -> hypersupport::Result<()> {
    let body = thin_family(ThinKind::SlabCross, 3, 1e-3, Some(7))?;
    let body = body.map_vertices(|v| v.iter().map(|x| x + 5.0).collect())?;
    let wc = well_center(&body, 1e-9)?;
    println!("center:     {:?}", wc.frame.translation);
    println!("semi-axes:  {:?}", wc.frame.semi_axes);
    let mut rng = seeded(1);
    let dirs: Vec<Vec<f64>> = (0..200).map(|_| unit_vector(&mut rng, 3)).collect();
    println!(
        "max vertex level in nE:   {:.9}",
        outer_containment(&wc.frame_body, &wc.frame.semi_axes).sqrt()
    );
    println!(
        "min h_S / h_E (200 dirs): {:.9}",
        inner_containment(&wc.frame_body, &wc.frame.semi_axes, &dirs)?
    );
    Ok(())
}
