//! Exact chart expressions compiled to floating-point evaluators.

use num_complex::Complex64;

use super::SphereError;
use crate::symbolic::{GaussRational, LogAtom, LogExpr, Poly};

#[derive(Clone, Debug)]
struct CPoly(Vec<(Complex64, [i32; 3])>);

impl CPoly {
    fn new(p: &Poly) -> Self {
        CPoly(p.terms().map(|(m, c)| (c.to_complex(), [m[0] as i32, m[1] as i32, m[2] as i32])).collect())
    }

    fn eval(&self, z: Complex64, zb: Complex64, u: f64) -> Complex64 {
        self.0.iter().map(|(c, m)| c * z.powi(m[0]) * zb.powi(m[1]) * u.powi(m[2])).sum()
    }
}

#[derive(Clone, Debug)]
enum CAtom {
    Log(CPoly),
    Const(f64),
}

#[derive(Clone, Debug)]
struct CTerm {
    a: CPoly,
    b: CPoly,
    den: CPoly,
    logs: Vec<(CAtom, i32)>,
}

/// Behaviour of an integrand at the origin of the chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Singularity {
    /// Bounded near the origin.
    None,
    /// Declared blow-up `O(ρ^exponent)` at the origin (`exponent < 0`).
    Origin { exponent: i32 },
}

/// An exact scalar on the chart together with a compiled evaluator.
#[derive(Clone, Debug)]
pub struct ChartIntegrand {
    pub expr: LogExpr,
    pub singularity: Singularity,
    terms: Vec<CTerm>,
}

impl ChartIntegrand {
    /// Compiles `expr`; a pole at the origin must be declared.
    pub fn compile(expr: &LogExpr, singularity: Singularity) -> Result<Self, SphereError> {
        let mut terms = Vec::new();
        let mut pole = false;
        for (mono, r) in expr.terms() {
            let den = r.denominator().expand();
            pole |= den.constant_term().is_zero();
            let logs = mono
                .iter()
                .map(|(a, k)| {
                    let atom = match a {
                        LogAtom::Log(p) => {
                            pole |= p.constant_term().is_zero();
                            CAtom::Log(CPoly::new(p))
                        }
                        LogAtom::Const { bits, .. } => CAtom::Const(f64::from_bits(*bits)),
                    };
                    (atom, *k as i32)
                })
                .collect();
            terms.push(CTerm { a: CPoly::new(&r.numerator().a), b: CPoly::new(&r.numerator().b), den: CPoly::new(&den), logs });
        }
        if pole && singularity == Singularity::None {
            return Err(SphereError::UndeclaredPole(expr.to_string()));
        }
        Ok(ChartIntegrand { expr: expr.clone(), singularity, terms })
    }

    /// Value at `z = x + iy`, `u`.
    pub fn eval_complex(&self, x: f64, y: f64, u: f64) -> Complex64 {
        let z = Complex64::new(x, y);
        let zb = z.conj();
        let s = ((x * x + y * y).powi(2) + u * u).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = (t.a.eval(z, zb, u) + t.b.eval(z, zb, u) * s) / t.den.eval(z, zb, u);
            for (atom, k) in &t.logs {
                let l = match atom {
                    CAtom::Log(p) => p.eval(z, zb, u).ln(),
                    CAtom::Const(c) => Complex64::new(*c, 0.0),
                };
                v *= l.powi(*k);
            }
            acc += v;
        }
        acc
    }

    /// Real part of the value; the integrands used here are real.
    pub fn eval(&self, x: f64, y: f64, u: f64) -> f64 {
        self.eval_complex(x, y, u).re
    }

    /// Largest relative deviation of the compiled value from exact
    /// evaluation over the probe points (log-free expressions only).
    pub fn probe_error(&self, points: &[ProbePoint]) -> Result<f64, SphereError> {
        let mut worst: f64 = 0.0;
        for p in points {
            let mut exact = GaussRational::zero();
            for (mono, r) in self.expr.terms() {
                if !mono.is_empty() {
                    return Err(SphereError::Unsupported("exact probe of a logarithmic expression".into()));
                }
                exact += &r.eval_exact(&p.z, &p.z.conj(), &p.u, Some(&p.s))?;
            }
            let (x, y) = (p.z.to_complex().re, p.z.to_complex().im);
            let got = self.eval_complex(x, y, p.u.to_complex().re);
            let want = exact.to_complex();
            let err = (got - want).norm() / want.norm().max(1e-300);
            worst = worst.max(if want.norm() == 0.0 { got.norm() } else { err });
        }
        Ok(worst)
    }
}

/// A rational point `(z, u)` at which `s = (|z|⁴ + u²)^{1/2}` is rational.
#[derive(Clone, Debug)]
pub struct ProbePoint {
    pub z: GaussRational,
    pub u: GaussRational,
    pub s: GaussRational,
}

/// Probe points built from triples `k⁴ + u² = s²`, rotated by rational unit
/// complex numbers and dilated.
pub fn probe_points() -> Vec<ProbePoint> {
    let triples: [(i64, i64, i64); 5] = [(1, 0, 1), (2, 3, 5), (3, 12, 15), (3, 40, 41), (4, 12, 20)];
    let dirs = [
        GaussRational::from_parts(3, 5, 4, 5),
        GaussRational::from_parts(5, 13, -12, 13),
        GaussRational::from_parts(-1, 1, 0, 1),
        GaussRational::from_parts(0, 1, 1, 1),
    ];
    let dil = [GaussRational::ratio(1, 2), GaussRational::one(), GaussRational::ratio(3, 2)];
    let mut out = Vec::new();
    for (i, (k, u, s)) in triples.iter().enumerate() {
        for (j, d) in dirs.iter().enumerate() {
            let t = &dil[(i + j) % 3];
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            out.push(ProbePoint {
                z: &(d * &GaussRational::from_int(*k)) * t,
                u: &GaussRational::from_int(sign * u) * &t.pow(2),
                s: &GaussRational::from_int(*s) * &t.pow(2),
            });
        }
    }
    out
}
