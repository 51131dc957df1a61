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

//! Gauge, support function, ray-boundary point, supporting hyperplane and
//! chord length of a vertex-described polytope.

use hypersupport::VPolytope;

fn main() -> hypersupport::Result<()> {
    let hexagon = VPolytope::regular_polygon(6, 2.0)?;
    let x = [1.0, 0.5];
    println!("gauge({x:?}) = {:.6}", hexagon.gauge(&x)?);
    println!("h([0, 1]) = {:.6}", hexagon.support_value(&[0.0, 1.0])?);
    let p = hexagon.ray_boundary(&x)?;
    println!("ray boundary point: {p:?}");
    let hp = hexagon.supporting_hyperplane_at(&p)?;
    println!("supporting hyperplane: normal {:?}, offset {:.6}", hp.normal, hp.offset);
    println!("chord along the normal: {:.6}", hexagon.chord_diameter(&hp.normal)?);
    println!("contains (1.9, 0): {}", hexagon.contains(&[1.9, 0.0], 1e-9));
    Ok(())
}
