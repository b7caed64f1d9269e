//! Scalar rings for the matrix kernel: arbitrary-precision rationals,
//! the ring Z[1/sqrt(2)], dense univariate polynomials over the
//! rationals, and binary floats.
//!
//! Everything the exact kernel needs is a commutative ring with 1; the
//! float kernel additionally wants `Real`. Concrete matrix aliases over
//! these scalars live at the crate root.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Ring operations shared by every scalar the dense kernel accepts.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    /// Embeds a small rational, if the ring can represent it exactly.
    fn from_ratio(num: i64, den: i64) -> Option<Self>;

    /// Parses the string form used by the JSON matrix format.
    fn parse(s: &str) -> Result<Self>;

    /// JSON representation: strings for exact scalars, numbers for floats.
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse(s),
            Value::Number(x) => {
                let f = x.as_f64().ok_or_else(|| Error::Invalid("bad number".into()))?;
                if f == f.trunc() && f.abs() < 9e15 {
                    Self::from_ratio(f as i64, 1)
                        .ok_or_else(|| Error::Invalid(format!("cannot embed {f}")))
                } else {
                    Err(Error::Invalid(format!("ring cannot read float {f}")))
                }
            }
            _ => Err(Error::Invalid("expected string or number scalar".into())),
        }
    }
}

impl Scalar for Rat {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        (den != 0).then(|| rat(num, den))
    }

    fn parse(s: &str) -> Result<Self> {
        Rat::from_str(s.trim()).map_err(|e| Error::Invalid(format!("bad rational {s:?}: {e}")))
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        (den != 0).then(|| num as f64 / den as f64)
    }

    fn parse(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| Error::Invalid(format!("bad float {s:?}: {e}")))
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(round_sig(*self))
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(x) => x.as_f64().ok_or_else(|| Error::Invalid("bad number".into())),
            Value::String(s) => Self::parse(s),
            _ => Err(Error::Invalid("expected number".into())),
        }
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        (den != 0).then(|| num as f32 / den as f32)
    }

    fn parse(s: &str) -> Result<Self> {
        s.trim()
            .parse()
            .map_err(|e| Error::Invalid(format!("bad float {s:?}: {e}")))
    }

    fn from_json(v: &Value) -> Result<Self> {
        f64::from_json(v).map(|x| x as f32)
    }
}

/// Rounds to 12 significant digits; all emitted numeric output goes
/// through this so byte output is stable under reordering of exact
/// computations.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Floating scalars accepted by the numeric kernel (charts, exponentials,
/// decomposition). `f64` everywhere in practice; `f32` kept for parity.
pub trait Real:
    Scalar + num_traits::Float + num_traits::FloatConst + num_traits::NumAssign + Default + 'static
{
    fn of(x: f64) -> Self;
    fn to_f64c(self) -> f64;
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64c(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn of(x: f64) -> Self {
        x as f32
    }
    fn to_f64c(self) -> f64 {
        self as f64
    }
}

/// Element (a + b*sqrt(2))/2^m of Z[1/sqrt(2)], kept normalized with m
/// minimal. Houses the Clifford-algebra coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Root2 {
    a: i128,
    b: i128,
    m: u32,
}

impl Root2 {
    pub fn new(a: i128, b: i128, m: u32) -> Self {
        let mut r = Root2 { a, b, m };
        r.normalize();
        r
    }

    pub fn from_int(a: i128) -> Self {
        Root2 { a, b: 0, m: 0 }
    }

    /// sqrt(2)
    pub fn sqrt2() -> Self {
        Root2 { a: 0, b: 1, m: 0 }
    }

    /// 1/sqrt(2) = sqrt(2)/2
    pub fn inv_sqrt2() -> Self {
        Root2 { a: 0, b: 1, m: 1 }
    }

    pub fn parts(&self) -> (i128, i128, u32) {
        (self.a, self.b, self.m)
    }

    fn normalize(&mut self) {
        if self.a == 0 && self.b == 0 {
            self.m = 0;
            return;
        }
        while self.m > 0 && self.a % 2 == 0 && self.b % 2 == 0 {
            self.a /= 2;
            self.b /= 2;
            self.m -= 1;
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2) / (2f64).powi(self.m as i32)
    }
}

impl Add for Root2 {
    type Output = Root2;
    fn add(self, rhs: Root2) -> Root2 {
        let m = self.m.max(rhs.m);
        let (s1, s2) = (m - self.m, m - rhs.m);
        Root2::new(
            (self.a << s1) + (rhs.a << s2),
            (self.b << s1) + (rhs.b << s2),
            m,
        )
    }
}

impl Sub for Root2 {
    type Output = Root2;
    fn sub(self, rhs: Root2) -> Root2 {
        self + (-rhs)
    }
}

impl Neg for Root2 {
    type Output = Root2;
    fn neg(self) -> Root2 {
        Root2 {
            a: -self.a,
            b: -self.b,
            m: self.m,
        }
    }
}

impl Mul for Root2 {
    type Output = Root2;
    fn mul(self, rhs: Root2) -> Root2 {
        Root2::new(
            self.a * rhs.a + 2 * self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
            self.m + rhs.m,
        )
    }
}

impl Zero for Root2 {
    fn zero() -> Self {
        Root2::from_int(0)
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl One for Root2 {
    fn one() -> Self {
        Root2::from_int(1)
    }
}

impl fmt::Display for Root2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 && self.m == 0 {
            return write!(f, "{}", self.a);
        }
        let (bs, babs) = if self.b < 0 { ("-", -self.b) } else { ("+", self.b) };
        write!(f, "({}{}{}r2)/2^{}", self.a, bs, babs, self.m)
    }
}

impl Scalar for Root2 {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        // only powers of two are representable denominators
        let mut d = den as u64;
        let mut m = 0u32;
        while d % 2 == 0 {
            d /= 2;
            m += 1;
        }
        if d == 1 {
            Some(Root2::new(num as i128, 0, m))
        } else if num % (d as i64) == 0 {
            Some(Root2::new((num / d as i64) as i128, 0, m))
        } else {
            None
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("bad Z[1/sqrt2] scalar {s:?}"));
        if let Ok(a) = s.parse::<i128>() {
            return Ok(Root2::from_int(a));
        }
        // form "(a+br2)/2^m" or "(a-br2)/2^m"
        let s = s.strip_prefix('(').ok_or_else(bad)?;
        let (body, tail) = s.split_once(')').ok_or_else(bad)?;
        let m: u32 = tail
            .strip_prefix("/2^")
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let body = body.strip_suffix("r2").ok_or_else(bad)?;
        let split = body[1..]
            .rfind(['+', '-'])
            .map(|i| i + 1)
            .ok_or_else(bad)?;
        let a: i128 = body[..split].parse().map_err(|_| bad())?;
        let b: i128 = match body[split..].strip_prefix('+') {
            Some(rest) => rest.parse().map_err(|_| bad())?,
            None => body[split..].parse().map_err(|_| bad())?,
        };
        Ok(Root2::new(a, b, m))
    }
}

/// Dense univariate polynomial over the rationals, trailing zeros
/// stripped; the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The variable t.
    pub fn var() -> Self {
        Poly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * rat(i as i64 + 1, 1))
                .collect(),
        )
    }

    /// Order of vanishing at t = 0: index of the lowest nonzero
    /// coefficient. `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { coeffs: vec![] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rat::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a} ")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl Scalar for Poly {
    fn from_ratio(num: i64, den: i64) -> Option<Self> {
        (den != 0).then(|| Poly::constant(rat(num, den)))
    }

    fn parse(s: &str) -> Result<Self> {
        // constants only; polynomials are not part of the wire format
        Rat::parse(s).map(Poly::constant)
    }
}
