use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type C64 = Complex64;

/// Arithmetic needed by the dense kernel. Method names avoid clashing with
/// `std::ops`, which `BigRational` also implements on references.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// True when equality and zero tests are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn over(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> f64;
    fn to_c64(&self) -> C64;
    fn render(&self) -> String;
    fn to_rational(&self) -> Option<Rational>;

    /// Rank decisions: exact zero test, or |x| ≤ tol·scale for floats.
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= tol * scale
        }
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> f64 {
        rat_to_f64(&Signed::abs(self))
    }
    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(self), 0.0)
    }
    fn render(&self) -> String {
        fmt_rational(self)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        C64::new(rat_to_f64(q), 0.0)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn over(&self, o: &Self) -> Self {
        self / o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn render(&self) -> String {
        Scalar::Complex(*self).to_string()
    }
    fn to_rational(&self) -> Option<Rational> {
        None
    }
}

/// Nearest double; falls back to a scaled quotient when numerator or
/// denominator alone overflow f64.
pub fn rat_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let shift = n - d;
    let scaled = if shift > 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Accepts "p/q", a plain integer, or a finite decimal such as "-0.25".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), fp.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn binom(k: u64, l: u64) -> f64 {
    if l > k {
        return 0.0;
    }
    let l = l.min(k - l);
    let mut acc = 1.0f64;
    for i in 0..l {
        acc = acc * (k - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Tagged scalar, used where the domain is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Complex(C64),
}

impl Scalar {
    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Rational(q) => q.to_c64(),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Complex(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => f.write_str(&fmt_rational(q)),
            Scalar::Complex(z) if z.im == 0.0 => f.write_str(&fmt_f64(z.re)),
            Scalar::Complex(z) => write!(f, "{}{:+.16e}i", fmt_f64(z.re), z.im),
        }
    }
}
