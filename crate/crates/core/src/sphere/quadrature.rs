//! Product Gauss rules in coordinates adapted to the Heisenberg dilations:
//! `|z|² = ρ² cos ψ`, `u = ρ² sin ψ`, `arg z = φ`, with
//! `dx dy du = ρ³ dρ dψ dφ`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use super::SphereError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss nodes in ρ, per radial piece (core and tail).
    pub radial: usize,
    /// Gauss nodes in ψ.
    pub angular: usize,
    /// Trapezoid nodes in φ.
    pub azimuthal: usize,
    /// Radius splitting the core `[0, R]` from the tail `[R, ∞)`.
    pub radius: f64,
    /// Relative tolerance the error estimate must meet.
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { radial: 48, angular: 48, azimuthal: 8, radius: 2.0, tol: 1e-6 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), SphereError> {
        if self.radial < 4 || self.angular < 4 || self.azimuthal < 4 {
            return Err(SphereError::InvalidConfig("node counts must be at least 4".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(SphereError::InvalidConfig("truncation radius must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(SphereError::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        QuadratureConfig { radial: 2 * self.radial, angular: 2 * self.angular, azimuthal: 2 * self.azimuthal, ..self.clone() }
    }
}

/// An integral with its node-doubling error estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    /// Value with all node counts doubled.
    pub doubled: f64,
    /// `2|doubled − value|` plus a rounding floor.
    pub error: f64,
    pub evaluations: usize,
}

impl Integral {
    pub fn relative_error(&self) -> f64 {
        self.error / self.value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("nonzero");
    let half = 0.5 * (b - a);
    GaussLegendre::new(n).as_node_weight_pairs().iter().map(|(x, w)| (a + half * (x + 1.0), half * w)).collect()
}

/// `(x, y, u)` for the adapted coordinates.
pub fn chart_point(rho: f64, psi: f64, phi: f64) -> (f64, f64, f64) {
    let r = rho * psi.cos().max(0.0).sqrt();
    (r * phi.cos(), r * phi.sin(), rho * rho * psi.sin())
}

/// `∫ f dx dy du` over `ρ < rho_max` (or the whole chart), with the
/// azimuth rotated by `alpha`.
fn integrate_once(f: &dyn Fn(f64, f64, f64) -> f64, cfg: &QuadratureConfig, rho_max: Option<f64>, alpha: f64) -> (f64, usize) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let psi_rule = gauss(cfg.angular, -half_pi, half_pi);
    let dphi = 2.0 * std::f64::consts::PI / cfg.azimuthal as f64;
    let mut count = 0;
    let mut shell = |rho: f64| -> f64 {
        let mut acc = 0.0;
        for &(psi, wpsi) in &psi_rule {
            for k in 0..cfg.azimuthal {
                let (x, y, u) = chart_point(rho, psi, alpha + dphi * k as f64);
                acc += wpsi * dphi * f(x, y, u);
                count += 1;
            }
        }
        acc * rho.powi(3)
    };
    let mut total = 0.0;
    match rho_max {
        Some(rm) => {
            for (rho, w) in gauss(cfg.radial, 0.0, rm) {
                total += w * shell(rho);
            }
        }
        None => {
            let r = cfg.radius;
            for (rho, w) in gauss(cfg.radial, 0.0, r) {
                total += w * shell(rho);
            }
            // ρ = R/t, dρ = R/t² dt
            for (t, w) in gauss(cfg.radial, 0.0, 1.0) {
                total += w * r / (t * t) * shell(r / t);
            }
        }
    }
    (total, count)
}

pub fn integrate_chart(
    f: &dyn Fn(f64, f64, f64) -> f64,
    cfg: &QuadratureConfig,
    rho_max: Option<f64>,
    alpha: f64,
) -> Result<Integral, SphereError> {
    cfg.validate()?;
    let (value, n1) = integrate_once(f, cfg, rho_max, alpha);
    let (doubled, n2) = integrate_once(f, &cfg.doubled(), rho_max, alpha);
    if !value.is_finite() || !doubled.is_finite() {
        return Err(SphereError::NotConverged("non-finite quadrature value".into()));
    }
    let error = 2.0 * (doubled - value).abs() + 1e-14 * value.abs();
    Ok(Integral { value, doubled, error, evaluations: n1 + n2 })
}

/// `∫ f dx dy du` over the box `center ± half` with a tensor Gauss rule.
pub fn integrate_box(f: &dyn Fn(f64, f64, f64) -> f64, center: [f64; 3], half: f64, n: usize) -> f64 {
    let rules: Vec<Vec<(f64, f64)>> = center.iter().map(|c| gauss(n, c - half, c + half)).collect();
    let mut acc = 0.0;
    for &(x, wx) in &rules[0] {
        for &(y, wy) in &rules[1] {
            for &(u, wu) in &rules[2] {
                acc += wx * wy * wu * f(x, y, u);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_volume() {
        // ∫ exp(−|z|⁴ − u²) dx dy du = π·∫∫ exp(−a² − u²) da du over a > 0 = π·(√π/2)·√π
        let f = |x: f64, y: f64, u: f64| (-(x * x + y * y).powi(2) - u * u).exp();
        let got = integrate_chart(&f, &QuadratureConfig::default(), None, 0.0).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 2.0;
        assert!((got.value - expect).abs() < 1e-9, "{got:?}");
        assert!(got.error < 1e-8);
    }

    #[test]
    fn bounded_ball_volume() {
        // {ρ < 1} has volume ∫ρ³dρ · ∫dψ · 2π = (1/4)·π·2π
        let got = integrate_chart(&|_, _, _| 1.0, &QuadratureConfig::default(), Some(1.0), 0.0).unwrap();
        assert!((got.value - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn box_rule_is_exact_on_polynomials() {
        let v = integrate_box(&|x, y, u| x * x * y + u, [1.0, 0.0, 2.0], 0.5, 4);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig { radial: 3, ..Default::default() }.validate().is_err());
        assert!(QuadratureConfig { radius: 0.0, ..Default::default() }.validate().is_err());
        assert!(QuadratureConfig::default().validate().is_ok());
    }
}
