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

//! Compare the algorithm with the three naive choices and the sampled
//! lower-bound oracle on one thin body.

use hypersupport::centering::well_center;
use hypersupport::numkit::vector::scale;
use hypersupport::verify::{naive_strategies, oracle_best_ratio, thin_family, CandidateSet, ThinKind};
use hypersupport::{check_bound, select_hyperplane};

fn main() -> hypersupport::Result<()> {
    let body = thin_family(ThinKind::Box, 2, 1e-4, Some(11))?;
    let wc = well_center(&body, 1e-9)?;
    let fb = &wc.frame_body;
    let s0 = 0.25;
    let candidates = CandidateSet::build(fb, 1024, 5)?;
    let y = scale(&fb.ray_boundary(&[1.0, 3e-5])?, 1.0 - 1e-3);

    let sel = select_hyperplane(fb, &wc.frame.semi_axes, &y, s0)?;
    let alg = check_bound(fb, &y, s0, &sel)?;
    let naive = naive_strategies(fb, &y, s0, &candidates)?;
    let mut extra = vec![alg.normal.clone()];
    extra.extend(naive.iter().map(|r| r.normal.clone()));
    let best = oracle_best_ratio(fb, &y, s0, &candidates, &extra)?;

    println!("bound {:.3e}", alg.bound);
    for r in std::iter::once(&alg).chain(&naive).chain(std::iter::once(&best)) {
        println!("{:<18} ratio {:.3e}", r.strategy.as_str(), r.ratio);
    }
    Ok(())
}
