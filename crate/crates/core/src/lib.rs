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

//! Supporting hyperplanes of well-centered convex polytopes whose distance to
//! a near-boundary point `y` is controlled by the body's thickness in the
//! normal direction:
//!
//! ```text
//! dist(y, P) ≤ c(n, s₀) · s^{1/2^{n−1}} · diam(P^⊥ ∩ S),    s = 1 − gauge_S(y)
//! ```
//!
//! The crate is organized bottom-up:
//!
//! * [`numkit`]: dense simplex LP solver and Jacobi eigensolver.
//! * [`body`]: vertex-represented polytopes and their LP oracles.
//! * [`centering`]: enclosing-ellipsoid well-centering and the principal-axis frame.
//! * [`selector`]: the dimension-reducing hyperplane selection with its trace.
//! * [`verify`]: bound checking, a sampled best-hyperplane oracle, naive
//!   strategies and thin body families.
//! * [`experiment`]: seeded sweeps, CSV/JSON reports and plot data.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too; matrix code
// indexes by position.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod body;
pub mod centering;
pub mod error;
pub mod experiment;
pub mod numkit;
pub mod sampling;
pub mod selector;
pub mod verify;

pub use body::{Hyperplane, VPolytope};
pub use centering::{well_center, Ellipsoid, JohnFrame, WellCentered};
pub use error::{Error, Result};
pub use selector::{select_hyperplane, Selection, SelectionTrace};
pub use verify::{check_bound, RatioReport, Strategy};
