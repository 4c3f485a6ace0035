//! Exact arithmetic in the Gaussian rationals ℚ(i).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SymbolicError;

/// An element `re + i·im` of ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRational::from_int(1)
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRational::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(re_num/re_den) + i(im_num/im_den)`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussRational::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn real(re: BigRational) -> Self {
        GaussRational::new(re, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    /// |c|² as a rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, rhs: &GaussRational) -> Result<GaussRational, SymbolicError> {
        let n = rhs.norm_sqr();
        if n.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        let num = self * &rhs.conj();
        Ok(GaussRational::new(num.re / &n, num.im / n))
    }

    pub fn inv(&self) -> Result<GaussRational, SymbolicError> {
        GaussRational::one().checked_div(self)
    }

    pub fn scale_int(&self, k: i64) -> GaussRational {
        let k = BigRational::from_integer(BigInt::from(k));
        GaussRational::new(&self.re * &k, &self.im * &k)
    }

    pub fn pow(&self, e: u32) -> GaussRational {
        let mut acc = GaussRational::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `[re_num, re_den, im_num, im_den]` as decimal strings.
    pub fn to_parts(&self) -> [String; 4] {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
        ]
    }

    pub fn from_str_parts(parts: &[String]) -> Result<GaussRational, SymbolicError> {
        if parts.len() != 4 {
            return Err(SymbolicError::Parse(format!(
                "expected 4 coefficient parts, got {}",
                parts.len()
            )));
        }
        let int = |s: &str| {
            s.parse::<BigInt>()
                .map_err(|e| SymbolicError::Parse(format!("bad integer {s:?}: {e}")))
        };
        let (rn, rd, inn, id) = (int(&parts[0])?, int(&parts[1])?, int(&parts[2])?, int(&parts[3])?);
        if rd.is_zero() || id.is_zero() {
            return Err(SymbolicError::Parse("zero denominator".into()));
        }
        Ok(GaussRational::new(BigRational::new(rn, rd), BigRational::new(inn, id)))
    }

    /// Parses `a`, `a/b`, `bi`, `a/b+c/di`, `-i` and similar compact forms.
    pub fn parse(text: &str) -> Result<GaussRational, SymbolicError> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(SymbolicError::Parse("empty coefficient".into()));
        }
        // split at a sign that is not the first character
        let mut split = None;
        for (k, ch) in t.char_indices().skip(1) {
            if ch == '+' || ch == '-' {
                split = Some(k);
            }
        }
        let (a, b) = match split {
            Some(k) => (&t[..k], Some(&t[k..])),
            None => (&t[..], None),
        };
        let mut out = GaussRational::zero();
        for part in std::iter::once(a).chain(b) {
            out = out + parse_real_or_imag(part)?;
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, SymbolicError> {
    let err = || SymbolicError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| err())?;
            let d: BigInt = d.parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

fn parse_real_or_imag(s: &str) -> Result<GaussRational, SymbolicError> {
    if let Some(body) = s.strip_suffix('i') {
        let body = match body {
            "" | "+" => "1",
            "-" => "-1",
            b => b.strip_prefix('+').unwrap_or(b),
        };
        Ok(GaussRational::new(BigRational::zero(), parse_rational(body)?))
    } else {
        let body = s.strip_prefix('+').unwrap_or(s);
        Ok(GaussRational::real(parse_rational(body)?))
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", self.im)
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                let mag = self.im.abs();
                if mag.is_one() {
                    write!(f, "({}{}i)", self.re, sign)
                } else {
                    write!(f, "({}{}{}i)", self.re, sign, mag)
                }
            }
        }
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: GaussRational) -> GaussRational {
        GaussRational::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, rhs: &GaussRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: GaussRational) -> GaussRational {
        GaussRational::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRational::real(&self.re * &rhs.re);
        }
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: GaussRational) -> GaussRational {
        &self * &rhs
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = GaussRational::from_parts(1, 2, 3, 4);
        let b = GaussRational::from_parts(-2, 3, 1, 5);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(&q * &b, a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&GaussRational::i() * &GaussRational::i()), GaussRational::from_int(-1));
        assert!(GaussRational::one().checked_div(&GaussRational::zero()).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3", "-1/2", "i", "-i", "2/3i", "1/2-3i", "-4+i", "(1/2+5/7i)"] {
            let t = s.trim_start_matches('(').trim_end_matches(')');
            let g = GaussRational::parse(t).unwrap();
            let back = GaussRational::parse(
                g.to_string().trim_start_matches('(').trim_end_matches(')'),
            )
            .unwrap();
            assert_eq!(g, back, "{s}");
        }
        assert_eq!(GaussRational::parse("1/2-3i").unwrap(), GaussRational::from_parts(1, 2, -3, 1));
    }
}
