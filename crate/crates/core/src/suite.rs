//! Verification suites: configuration, dispatch and report assembly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::heisenberg::{self, flat_model};
use crate::moser::{
    cartan_coefficient, chain_check, fefferman_j, moser_structure, order_pattern, sublaplacian_pattern,
    verify_expansion, Golden, MoserData, MoserError, OrderComponent,
};
use crate::report::{Check, Provenance, Residual, VerificationReport};
use crate::sphere::{self, QuadratureConfig};
use crate::structure::{
    conformal_change, qprime_conformal_rhs, solve_structure, torsion_transform, ConformalFactor, StructureError,
};
use crate::symbolic::{GaussRational, GradedSeries, Poly, RatFn, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Moser,
    Heisenberg,
    Conformal,
    Sphere,
}

impl Suite {
    pub const PARTS: [Suite; 4] = [Suite::Moser, Suite::Heisenberg, Suite::Conformal, Suite::Sphere];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Moser => "moser",
            Suite::Heisenberg => "heisenberg",
            Suite::Conformal => "conformal",
            Suite::Sphere => "sphere",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(Suite::All)
            .chain(Suite::PARTS)
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

/// Deliberate departures from the normal form, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Perturbation {
    None,
    /// `E += z²z̄²`.
    WeightFour,
}

impl Perturbation {
    fn poly(self) -> Poly {
        match self {
            Perturbation::None => Poly::zero(),
            Perturbation::WeightFour => Poly::monomial(GaussRational::one(), [2, 2, 0]),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Perturbation::None => "none",
            Perturbation::WeightFour => "weight4",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub order: u32,
    pub tol: f64,
    /// Radial and angular node count of the chart quadrature.
    pub grid: usize,
    pub seed: u64,
    pub golden: Golden,
    /// Where the golden data came from, for the report.
    pub golden_source: String,
    pub perturbation: Perturbation,
    /// Power `k` in `1/(2π ρ^{2k})` used as the flat Green's function.
    pub green_power: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            order: crate::moser::DEFAULT_ORDER,
            tol: 1e-6,
            grid: 48,
            seed: 1,
            golden: Golden::builtin(),
            golden_source: "builtin".into(),
            perturbation: Perturbation::None,
            green_power: 1,
        }
    }
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::Value { key: key.to_string(), value: value.to_string() }
}

impl SuiteConfig {
    /// Applies one `key = value` setting. The golden file is loaded by the
    /// caller.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value.parse().map_err(|_| bad(key, value))
        }
        match key {
            "order" => {
                let n: u32 = num(key, value)?;
                if !(6..=16).contains(&n) {
                    return Err(bad(key, value));
                }
                self.order = n;
            }
            "tol" => {
                let t: f64 = num(key, value)?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(bad(key, value));
                }
                self.tol = t;
            }
            "grid" => {
                let g: usize = num(key, value)?;
                if !(4..=512).contains(&g) {
                    return Err(bad(key, value));
                }
                self.grid = g;
            }
            "seed" => self.seed = num(key, value)?,
            "perturbation" => {
                self.perturbation = match value {
                    "none" => Perturbation::None,
                    "weight4" => Perturbation::WeightFour,
                    _ => return Err(bad(key, value)),
                }
            }
            "green_power" => {
                let k: u32 = num(key, value)?;
                if !(1..=4).contains(&k) {
                    return Err(bad(key, value));
                }
                self.green_power = k;
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Returns the pairs
    /// in file order without applying them.
    pub fn parse_file(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax(n + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::Syntax(n + 1));
            }
            out.push((k.to_string(), v.to_string()));
        }
        Ok(out)
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig { radial: self.grid, angular: self.grid, tol: self.tol, ..QuadratureConfig::default() }
    }

    /// Effective configuration as recorded in reports.
    pub fn describe(&self) -> BTreeMap<String, String> {
        [
            ("order", self.order.to_string()),
            ("tol", format!("{:e}", self.tol)),
            ("grid", self.grid.to_string()),
            ("seed", self.seed.to_string()),
            ("golden", self.golden_source.clone()),
            ("perturbation", self.perturbation.name().to_string()),
            ("green_power", self.green_power.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    fn instance(&self, k: u64, order: u32) -> Result<MoserData, MoserError> {
        let md = MoserData::random(self.seed.wrapping_add(k), order)?;
        MoserData::unchecked(md.c42, md.c33, &md.extra + &self.perturbation.poly(), order)
    }
}

/// Number of random instances in the chain and Fefferman checks.
pub const CHAIN_INSTANCES: u64 = 5;
/// Number of random instances in each golden comparison.
pub const GOLDEN_INSTANCES: u64 = 3;

fn moser_fail(id: &str, anchor: &str, e: impl ToString) -> Check {
    Check::failed(id, Provenance::Printed, anchor, e)
}

fn pattern_check(id: &str, anchor: &str, comps: &[OrderComponent]) -> Check {
    let mut ch = Check::new(id, Provenance::Printed, anchor);
    for c in comps {
        let printed = c.printed.map_or("absent".to_string(), |p| format!("O({p})"));
        let measured = c.measured.map_or("0".to_string(), |m| format!("O({m})"));
        let tracked = c.tracked.map_or("exact".to_string(), |t| format!("O({t})"));
        ch.expect(&c.name, format!("printed {printed}, measured {measured}, tracked {tracked}"), c.pass);
    }
    ch
}

pub fn moser_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let instances: Vec<_> = (0..CHAIN_INSTANCES).map(|k| cfg.instance(k, cfg.order)).collect();
    let structures: Vec<_> = instances
        .iter()
        .map(|md| md.clone().and_then(|md| moser_structure(&md)))
        .collect();

    for ex in &cfg.golden.expansions {
        let id = format!("moser.golden.{}", ex.id);
        let mut ch = Check::new(&id, Provenance::Printed, &ex.display);
        let mut failed = None;
        for (k, ms) in structures.iter().take(GOLDEN_INSTANCES as usize).enumerate() {
            let seed = cfg.seed.wrapping_add(k as u64);
            match ms.as_ref().map_err(Clone::clone).and_then(|ms| verify_expansion(ms, ex)) {
                Ok(r) => {
                    let deep = r.compared_to >= r.printed_order;
                    let label = format!("seed {seed}, compared to O({})", r.compared_to);
                    let value = match r.first_difference {
                        Some(w) => format!("differs at weight {w}: {}", r.residual),
                        None => "0".to_string(),
                    };
                    ch.expect(&label, value, r.pass && deep);
                }
                Err(e) => failed = Some(e),
            }
        }
        out.push(match failed {
            Some(e) => moser_fail(&id, &ex.display, e),
            None => ch,
        });
    }

    let anchor = "pseudo-Einstein tensor vanishes on the chain z = 0";
    let mut chain = Check::new("moser.chain", Provenance::Printed, anchor);
    let anchor_j = "J[4^{1/3} r] = 1 + O(ρ⁴)";
    let mut fefferman = Check::new("moser.fefferman", Provenance::Printed, anchor_j);
    let four = GaussRational::from_int(4);
    for (k, (md, ms)) in instances.iter().zip(&structures).enumerate() {
        let seed = cfg.seed.wrapping_add(k as u64);
        match ms.as_ref().map_err(Clone::clone).and_then(chain_check) {
            Ok(r) => {
                chain.expect(&format!("seed {seed}"), &r.restriction, r.pass);
            }
            Err(e) => chain = moser_fail("moser.chain", anchor, e),
        }
        if let Ok(md) = md {
            let dev = &fefferman_j(&md.defining_function(), &four, &md.graph()) - &Poly::one();
            let w = dev.min_weight();
            let shown = w.map_or("J − 1 = 0".to_string(), |w| format!("J − 1 starts at weight {w}"));
            fefferman.expect(&format!("seed {seed}"), shown, w.map_or(true, |w| w >= 4));
        }
    }
    out.push(chain);
    out.push(fefferman);

    match &instances[0] {
        Ok(md) => {
            let mut ch = Check::new("moser.cartan_coefficient", Provenance::Derived, "coefficient of z in E_{zzzz̄z̄}");
            let got = cartan_coefficient(md);
            ch.note("value", &got);
            ch.expect("equals −48 c₄₂(u)", "", got == md.c42.scale(&GaussRational::from_int(-48)));
            out.push(ch);
        }
        Err(e) => out.push(Check::failed("moser.cartan_coefficient", Provenance::Derived, "", e)),
    }

    match &structures[0] {
        Ok(ms) => {
            let mut ch = Check::new("moser.hand_route", Provenance::Derived, "generic solver = Moser hand computation");
            match ms.consistency() {
                Ok(diffs) => {
                    for (name, d) in diffs {
                        let low = d.poly().truncate(d.error_order().unwrap_or(u32::MAX));
                        ch.expect(name, &low, low.is_zero());
                    }
                }
                Err(e) => ch = Check::failed("moser.hand_route", Provenance::Derived, "", e),
            }
            out.push(ch);
        }
        Err(e) => out.push(Check::failed("moser.hand_route", Provenance::Derived, "", e)),
    }

    // the order patterns need tracked orders above the printed ones
    let deep = cfg.instance(0, cfg.order.max(10)).and_then(|md| moser_structure(&md));
    let anchor_o = "θ, θ¹, ω, A, R, g orders along the flat coframe";
    let anchor_l = "Δ_b = (1+O(ρ⁴))Δ̊_b + O(ρ¹⁰)∂u² + …";
    match deep {
        Ok(ms) => {
            out.push(match order_pattern(&ms) {
                Ok(c) => pattern_check("moser.order_pattern", anchor_o, &c),
                Err(e) => moser_fail("moser.order_pattern", anchor_o, e),
            });
            out.push(match sublaplacian_pattern(&ms) {
                Ok(c) => pattern_check("moser.sublaplacian_pattern", anchor_l, &c),
                Err(e) => moser_fail("moser.sublaplacian_pattern", anchor_l, e),
            });
        }
        Err(e) => {
            out.push(moser_fail("moser.order_pattern", anchor_o, &e));
            out.push(moser_fail("moser.sublaplacian_pattern", anchor_l, e));
        }
    }
    out
}

pub fn heisenberg_checks(cfg: &SuiteConfig) -> Vec<Check> {
    heisenberg::checks_for(flat_model().and_then(|fm| fm.with_green_power(cfg.green_power)))
}

/// Positive rational `f` for the exact `Q′`-law battery, with labels.
pub fn conformal_battery() -> Vec<(&'static str, RatFn)> {
    let p = |m: [u32; 3], c: i64| Poly::monomial(GaussRational::from_int(c), m);
    let sum = |xs: &[Poly]| xs.iter().fold(Poly::zero(), |a, b| &a + b);
    let zzb = p([1, 1, 0], 1);
    let uu = p([0, 0, 2], 1);
    vec![
        ("1 + zz̄", RatFn::from_poly(sum(&[p([0, 0, 0], 1), zzb.clone()]))),
        ("1 + u²", RatFn::from_poly(sum(&[p([0, 0, 0], 1), uu.clone()]))),
        ("2 + z + z̄", RatFn::from_poly(sum(&[p([0, 0, 0], 2), p([1, 0, 0], 1), p([0, 1, 0], 1)]))),
        ("3 + zz̄ + u", RatFn::from_poly(sum(&[p([0, 0, 0], 3), zzb.clone(), p([0, 0, 1], 1)]))),
        ("(1 + zz̄)² + u²", RatFn::from_poly(sum(&[p([0, 0, 0], 1), p([1, 1, 0], 2), p([2, 2, 0], 1), uu]))),
    ]
}

/// `Υ = z + z̄ + zz̄ + u²` in graded arithmetic.
pub fn graded_upsilon(order: u32) -> GradedSeries {
    let p = |m: [u32; 3]| Poly::monomial(GaussRational::one(), m);
    let poly = [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 2]].into_iter().fold(Poly::zero(), |a, m| &a + &p(m));
    GradedSeries::exact(poly, order)
}

pub fn conformal_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let anchor = "e^{2Υ}Q̂′ = Q′ + P′Υ + ½P(Υ²) − ΥP(Υ) − 16Re(∇¹Υ(P₃Υ)₁)";
    let anchor_t = "Â₁₁ = A₁₁ + 2i f₁₁ − 4i f₁f₁, f = Υ/2";
    let mut law = Check::new("conformal.qprime_law", Provenance::Printed, anchor);
    let mut torsion = Check::new("conformal.torsion_law", Provenance::Printed, anchor_t);
    let mut run = || -> Result<(), StructureError> {
        let flat = flat_model()?.structure;
        for (label, f) in conformal_battery() {
            let factor = ConformalFactor::log_of(&f)?;
            let hat = conformal_change(&flat, &factor)?;
            let lhs = factor.multiplier.square().times(&hat.q_prime()?);
            let d = lhs.minus(&qprime_conformal_rhs(&flat, &factor)?);
            law.expect(&format!("Υ = log({label})"), &d, d.is_zero());
            let dt = hat.torsion_lower().minus(&torsion_transform(&flat, &factor)?);
            torsion.expect(&format!("Υ = log({label})"), &dt, dt.is_zero());
        }
        Ok(())
    };
    let outcome = run();
    if let Err(e) = outcome {
        law = Check::failed("conformal.qprime_law", Provenance::Printed, anchor, &e);
        torsion = Check::failed("conformal.torsion_law", Provenance::Printed, anchor_t, e);
    }
    vec![law, torsion, graded_qprime_check(cfg.order)]
}

/// The `Q′` law with a polynomial `Υ` on the flat model in graded arithmetic.
pub fn graded_qprime_check(order: u32) -> Check {
    let id = "conformal.qprime_law_graded";
    let anchor = "e^{2Υ}Q̂′ = Q′ + … with Υ = z + z̄ + zz̄ + u², to the truncation order";
    let body = || -> Result<Check, StructureError> {
        let md = MoserData::flat(order).map_err(|e| StructureError::Symbolic(moser_symbolic(e)))?;
        let flat = solve_structure(&md.contact_form(), None)?;
        let factor = ConformalFactor::graded(graded_upsilon(order))?;
        let hat = conformal_change(&flat, &factor)?;
        let lhs = factor.multiplier.square().times(&hat.q_prime()?);
        let d = lhs.minus(&qprime_conformal_rhs(&flat, &factor)?);
        let tracked = d.error_order();
        let low = d.poly().truncate(tracked.unwrap_or(u32::MAX));
        let mut ch = Check::new(id, Provenance::Printed, anchor);
        ch.note("truncation order", order);
        ch.note("tracked order of the difference", tracked.map_or("exact".into(), |t| format!("O({t})")));
        ch.expect("difference below the tracked order", &low, low.is_zero() && tracked.map_or(true, |t| t > 0));
        let seen = lhs.poly().truncate(tracked.unwrap_or(u32::MAX));
        ch.expect("e^{2Υ}Q̂′ below the tracked order", &seen, !seen.is_zero());
        ch.residual(Residual::Exact(low.to_string()));
        Ok(ch)
    };
    body().unwrap_or_else(|e| Check::failed(id, Provenance::Printed, anchor, e))
}

fn moser_symbolic(e: MoserError) -> crate::symbolic::SymbolicError {
    crate::symbolic::SymbolicError::NonRepresentable(e.to_string())
}

pub fn sphere_checks(cfg: &SuiteConfig) -> Vec<Check> {
    let q = cfg.quadrature();
    if let Err(e) = q.validate() {
        return vec![Check::failed("sphere.quadrature", Provenance::Trivial, "quadrature configuration", e)];
    }
    sphere::all_checks(&q)
}

fn checks_of(suite: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    match suite {
        Suite::Moser => moser_checks(cfg),
        Suite::Heisenberg => heisenberg_checks(cfg),
        Suite::Conformal => conformal_checks(cfg),
        Suite::Sphere => sphere_checks(cfg),
        Suite::All => run_parts(&Suite::PARTS, cfg),
    }
}

/// Runs the parts concurrently; the result is sorted by check id.
fn run_parts(parts: &[Suite], cfg: &SuiteConfig) -> Vec<Check> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = parts.iter().map(|&s| scope.spawn(move || checks_of(s, cfg))).collect();
        handles.into_iter().flat_map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> VerificationReport {
    VerificationReport::new(suite.name(), cfg.describe(), checks_of(suite, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let pairs = SuiteConfig::parse_file("# c\norder = 10\n\ntol=1e-8 # x\n").unwrap();
        assert_eq!(pairs, [("order".into(), "10".into()), ("tol".into(), "1e-8".into())]);
        assert_eq!(SuiteConfig::parse_file("order 10").unwrap_err(), ConfigError::Syntax(1));
        let mut cfg = SuiteConfig::default();
        for (k, v) in pairs {
            cfg.set(&k, &v).unwrap();
        }
        assert_eq!((cfg.order, cfg.tol), (10, 1e-8));
        assert!(matches!(cfg.set("order", "3"), Err(ConfigError::Value { .. })));
        assert!(matches!(cfg.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert_eq!("sphere".parse::<Suite>().unwrap(), Suite::Sphere);
        assert!("spheres".parse::<Suite>().is_err());
    }

    #[test]
    fn graded_qprime_law_holds() {
        let c = graded_qprime_check(8);
        assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn wrong_green_power_fails() {
        let cfg = SuiteConfig { green_power: 2, ..SuiteConfig::default() };
        let failing: Vec<_> = heisenberg_checks(&cfg).into_iter().filter(|c| !c.passed()).map(|c| c.id).collect();
        assert!(failing.contains(&"heisenberg.green_log_identity".to_string()), "{failing:?}");
    }
}
