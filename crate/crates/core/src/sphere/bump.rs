//! Bump profiles for compactly supported test functions `χ = φ(Q)`.

use serde::{Deserialize, Serialize};

/// `φ(t) = exp(a − a/(1 − tᵐ))` on `[0, 1)`, zero beyond; `φ(0) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub a: f64,
    pub m: u32,
}

impl Profile {
    /// `(φ, φ′, φ″)` at `t`.
    pub fn jet(&self, t: f64) -> (f64, f64, f64) {
        if !(0.0..1.0).contains(&t) {
            return (0.0, 0.0, 0.0);
        }
        let (a, m) = (self.a, self.m as i32);
        let g = 1.0 - t.powi(m);
        let h = a - a / g;
        let h1 = -a * m as f64 * t.powi(m - 1) / (g * g);
        let lead = if m == 1 { 0.0 } else { (m - 1) as f64 * t.powi(m - 2) / (g * g) };
        let h2 = -a * m as f64 * (lead + 2.0 * m as f64 * t.powi(2 * m - 2) / (g * g * g));
        let e = h.exp();
        (e, h1 * e, (h2 + h1 * h1) * e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matches_finite_differences() {
        for p in [Profile { a: 1.0, m: 1 }, Profile { a: 1.0, m: 2 }, Profile { a: 2.5, m: 3 }] {
            for t in [0.1, 0.4, 0.7] {
                let h = 1e-5;
                let (f0, d1, d2) = p.jet(t);
                let (fp, d1p, _) = p.jet(t + h);
                let (fm, d1m, _) = p.jet(t - h);
                assert!(((fp - fm) / (2.0 * h) - d1).abs() < 1e-6 * (1.0 + d1.abs()));
                assert!(((d1p - d1m) / (2.0 * h) - d2).abs() < 1e-5 * (1.0 + d2.abs()));
                assert!(f0 > 0.0);
            }
            assert_eq!(p.jet(0.0).0, 1.0);
            assert_eq!(p.jet(1.0), (0.0, 0.0, 0.0));
        }
    }
}
