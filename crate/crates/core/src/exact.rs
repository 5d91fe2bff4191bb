//! Exact rationals and elements `a + b√D` of real quadratic fields.
//!
//! Nothing here touches floating point. Decimal output is produced from
//! integer square roots and is only used for display.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ratio(n: &BigInt, d: &BigInt) -> Rational {
    Rational::new(n.clone(), d.clone())
}

pub fn rat_int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Division);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Writes `n = s²·k` with `k` squarefree and returns `(s, k)`. `n` must be positive.
pub fn square_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut k = BigUint::one();
    for (prime, exp) in num_prime::nt_funcs::factorize(n.clone()) {
        s *= num_traits::pow(prime.clone(), exp / 2);
        if exp % 2 == 1 {
            k *= prime;
        }
    }
    (s, k)
}

/// Returns `(c, k)` with `r = c²·k`, `k` squarefree.
pub fn sqrt_decompose(r: &Rational) -> Result<(Rational, BigInt), Error> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("sqrt_decompose needs r > 0, got {r}")));
    }
    // √(n/d) = √(nd)/d
    let nd = (r.numer() * r.denom()).magnitude().clone();
    let (s, k) = square_split(&nd);
    let coeff = Rational::new(BigInt::from(s), r.denom().clone());
    Ok((coeff, BigInt::from(k)))
}

/// Exact element `a + b√D`. Rational values are stored with `b = 0` and `D = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadExt {
    /// Builds `a + b√d`, pulling square factors out of `d`.
    pub fn new(a: Rational, b: Rational, d: &BigInt) -> Result<Self, Error> {
        if d.is_negative() {
            return Err(Error::Domain(format!("negative radicand {d}")));
        }
        if d.is_zero() || b.is_zero() {
            return Ok(Self::from_rational(a));
        }
        let (s, k) = square_split(d.magnitude());
        let b = b * Rational::from_integer(BigInt::from(s));
        if k.is_one() {
            return Ok(Self::from_rational(a + b));
        }
        Ok(QuadExt { a, b, d: BigInt::from(k) })
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n, 1))
    }

    /// The non-negative square root of `r ≥ 0`.
    pub fn sqrt(r: &Rational) -> Result<Self, Error> {
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let (c, k) = sqrt_decompose(r)?;
        Self::new(Rational::zero(), c, &k)
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// Squarefree radicand, `0` for rational values.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// `a² − b²D`
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat_int(&self.d)
    }

    /// Exact sign of the real value.
    pub fn sign(&self) -> i8 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * rat_int(&self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, Error> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::Field(self.d.clone(), other.d.clone()))
        }
    }

    fn raw(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::from_rational(a)
        } else {
            QuadExt { a, b, d }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        let d = self.common_radicand(other)?;
        Ok(Self::raw(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        let d = self.common_radicand(other)?;
        Ok(Self::raw(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        let d = self.common_radicand(other)?;
        let dr = rat_int(&d);
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::raw(a, b, d))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, Error> {
        self.common_radicand(other)?;
        if other.is_zero() {
            return Err(Error::Division);
        }
        let n = other.norm();
        let num = self.checked_mul(&other.conj())?;
        Ok(Self::raw(num.a / &n, num.b / &n, num.d))
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, Error> {
        Ok(self.checked_sub(other)?.sign().cmp(&0))
    }

    pub fn recip(&self) -> Result<Self, Error> {
        Self::one().checked_div(self)
    }

    /// Panics on mismatched radicands; use [`QuadExt::checked_cmp`] when fields may differ.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.checked_cmp(other).expect("comparison across different quadratic fields")
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::raw(&self.a * r, &self.b * r, self.d.clone())
    }

    /// Decimal expansion with `digits` digits after the point (display only).
    pub fn to_decimal(&self, digits: usize) -> String {
        // value · den = an + bn·√D with integers an, bn
        let den = self.a.denom().lcm(self.b.denom());
        let an = self.a.numer() * (&den / self.a.denom());
        let bn = self.b.numer() * (&den / self.b.denom());
        let guard = digits + 3;
        let scale = num_traits::pow(BigInt::from(10), guard);
        let mut n = &an * &scale;
        if !bn.is_zero() {
            let inside = (&bn * &bn * &self.d * &scale * &scale).magnitude().sqrt();
            let root = BigInt::from(inside);
            if bn.is_negative() {
                n -= root;
            } else {
                n += root;
            }
        }
        // round half away from zero at `digits`
        let drop = num_traits::pow(BigInt::from(10), guard - digits);
        let q = &n / &den;
        let neg = q.is_negative();
        let mut mag = q.magnitude().clone();
        let half = drop.magnitude() / 2u32;
        let (mut whole, rem) = mag.div_rem(drop.magnitude());
        if rem >= half {
            whole += 1u32;
        }
        mag = whole;
        format_scaled(neg && !mag.is_zero(), &mag, digits)
    }

    /// Display-only conversion.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }

    /// `"<exact> ≈ <decimal>"`
    pub fn render(&self, digits: usize) -> String {
        format!("{} ≈ {}", self, self.to_decimal(digits))
    }
}

fn format_scaled(neg: bool, mag: &BigUint, digits: usize) -> String {
    let s = mag.to_string();
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (int_part, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

fn sgn(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Exact sign of `a + b√D`.
pub fn quad_sign(x: &QuadExt) -> i8 {
    x.sign()
}

pub fn quad_arith(x: &QuadExt, y: &QuadExt, op: QuadOp) -> Result<QuadExt, Error> {
    match op {
        QuadOp::Add => x.checked_add(y),
        QuadOp::Sub => x.checked_sub(y),
        QuadOp::Mul => x.checked_mul(y),
        QuadOp::Div => x.checked_div(y),
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<&BigInt> for QuadExt {
    fn from(n: &BigInt) -> Self {
        Self::from_rational(rat_int(n))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt {
                self.$checked(rhs).expect(concat!("QuadExt ", stringify!($m)))
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt {
                (&self).$m(rhs)
            }
        }
    };
}

// Operators panic on mismatched radicands or a zero divisor.
forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::raw(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let unit = self.b.abs().is_one();
        let coef = if unit { String::new() } else { format!("{}*", self.b.abs()) };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coef}sqrt({})", self.d)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{coef}sqrt({})", self.a, self.d)
        }
    }
}

impl FromStr for QuadExt {
    type Err = Error;

    /// Accepts the `Display` form, e.g. `7/2+5/6*sqrt(21)`, `-sqrt(2)`, `3`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(s.to_string());
        let Some(pos) = t.find("sqrt(") else {
            return Ok(Self::from_rational(parse_rational(&t)?));
        };
        let close = t[pos..].find(')').ok_or_else(bad)? + pos;
        if close + 1 != t.len() {
            return Err(bad());
        }
        let d: BigInt = t[pos + 5..close].parse().map_err(|_| bad())?;
        let head = &t[..pos];
        // split head into rational part and signed coefficient of the root
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None if head.is_empty() || head == "+" || head == "-" => ("", head),
            None if head.contains('/') || head.chars().any(|c| c.is_ascii_digit()) => {
                // whole head is the coefficient, e.g. "5/6*sqrt(21)"
                ("", head)
            }
            None => return Err(bad()),
        };
        let a = if a_str.is_empty() { Rational::zero() } else { parse_rational(a_str)? };
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Self::new(a, b, &d)
    }
}
