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

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// Exponent schedule of the recursion: `γᵢ = s^{1/2^i}`,
/// `δᵢ = (2i−1)·s^{1/2^{i−1}}`, the box dilation factor `c₀` and the final
/// constant `c(n, s₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub n: usize,
    pub s: f64,
    pub s0: f64,
    pub c0: f64,
    pub c_theorem: f64,
}

impl Schedule {
    pub fn gamma(&self, i: usize) -> f64 {
        root_power(self.s, i)
    }

    pub fn delta(&self, i: usize) -> f64 {
        (2 * i - 1) as f64 * root_power(self.s, i - 1)
    }

    /// `c(n, s₀)·s^{1/2^{n−1}}`.
    pub fn bound(&self) -> f64 {
        self.c_theorem * root_power(self.s, self.n - 1)
    }
}

/// `s^{1/2^i}`.
pub fn root_power(s: f64, i: usize) -> f64 {
    if i == 0 {
        return s;
    }
    (0..i).fold(s, |x, _| x.sqrt())
}

/// `(1 + s₀^{1/2^n}) / (1 − s₀^{1/2^n})`.
pub fn dilation_factor(n: usize, s0: f64) -> f64 {
    let g = root_power(s0, n);
    (1.0 + g) / (1.0 - g)
}

/// `n^{3/2}·(n − 1/2)·c₀^{n−1}`.
pub fn theorem_constant(n: usize, s0: f64) -> f64 {
    let nf = n as f64;
    nf.powf(1.5) * (nf - 0.5) * dilation_factor(n, s0).powi(n as i32 - 1)
}

pub fn make_schedule(n: usize, s: f64, s0: f64) -> Result<Schedule> {
    if n == 0 {
        return input("dimension must be at least 1");
    }
    if !(s0 > 0.0 && s0 < 1.0) {
        return input(format!("s0 = {s0} must lie in (0, 1)"));
    }
    if !(s >= 0.0 && s <= s0) {
        return input(format!("s = {s} must lie in [0, s0 = {s0}]"));
    }
    Ok(Schedule {
        n,
        s,
        s0,
        c0: dilation_factor(n, s0),
        c_theorem: theorem_constant(n, s0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_examples() {
        let sch = make_schedule(2, 0.25, 0.25).unwrap();
        assert!((sch.gamma(1) - 0.5).abs() < 1e-15);
        assert!((sch.delta(2) - 1.5).abs() < 1e-15);
        // c0 from the closed form evaluated with powf, independent of root_power.
        let g = 0.25f64.powf(0.25);
        assert!((sch.c0 - (1.0 + g) / (1.0 - g)).abs() < 1e-12);
        assert!((sch.c0 - 5.828427124746).abs() < 1e-9);
        assert_eq!(make_schedule(1, 0.1, 0.5).unwrap().c_theorem, 0.5);
    }

    #[test]
    fn schedule_rejects_bad_parameters() {
        assert!(make_schedule(2, 0.3, 0.25).is_err());
        assert!(make_schedule(2, 0.1, 1.0).is_err());
        assert!(make_schedule(2, -0.1, 0.5).is_err());
        assert!(make_schedule(0, 0.1, 0.5).is_err());
    }

    #[test]
    fn c0_is_the_max_of_its_defining_family() {
        // Brute force over the grid of s ∈ [0, s0], i ≤ n.
        for n in 1..=6 {
            let s0 = 1.0 / (2.0 * n as f64);
            let mut best: f64 = 1.0;
            for step in 0..=2000 {
                let s = s0 * step as f64 / 2000.0;
                for i in 1..=n {
                    let g = s.powf(1.0 / 2f64.powi(i as i32));
                    best = best.max(1.0 + 2.0 * g / (1.0 - g));
                }
            }
            assert!((best - dilation_factor(n, s0)).abs() < 1e-9 * best);
        }
    }
}
