//! Quasi-perfect classes `(d, m, p, q, t, ε)` and their integer vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::weight_expansion;
use crate::error::{domain, Error, Result};
use crate::exact::{ratio, Rational};

/// A tuple satisfying
/// `3d = p+q+m`, `d²−m² = pq−1`, `t² = p²−6pq+q²+8`,
/// `8d = 3(p+q)+εt`, `8m = (p+q)+3εt`.
///
/// Tuples with negative or zero entries (formal seeds) are allowed and
/// reported as non-geometric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ClassRecord", try_from = "ClassRecord")]
pub struct QuasiPerfect {
    d: BigInt,
    m: BigInt,
    p: BigInt,
    q: BigInt,
    t: BigInt,
    eps: i8,
}

/// `(d; m, m1, …, mN)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassVector {
    pub d: BigInt,
    pub coeffs: Vec<BigInt>,
}

pub fn is_quasi_perfect(d: &BigInt, m: &BigInt, p: &BigInt, q: &BigInt) -> bool {
    3 * d == p + q + m && d * d - m * m == p * q - 1
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl QuasiPerfect {
    pub fn new(d: BigInt, m: BigInt, p: BigInt, q: BigInt, t: BigInt, eps: i8) -> Result<Self> {
        let c = QuasiPerfect { d, m, p, q, t, eps };
        c.validate()?;
        Ok(c)
    }

    pub fn from_i64(d: i64, m: i64, p: i64, q: i64, t: i64, eps: i8) -> Result<Self> {
        Self::new(d.into(), m.into(), p.into(), q.into(), t.into(), eps)
    }

    /// Fills in `(d, m)` from `(p, q, t, ε)`.
    pub fn from_ptq(p: BigInt, q: BigInt, t: BigInt, eps: i8) -> Result<Self> {
        let s = &p + &q;
        let et = &t * BigInt::from(eps);
        let d8: BigInt = 3 * &s + &et;
        let m8: BigInt = &s + 3 * &et;
        if !d8.is_multiple_of(&BigInt::from(8)) || !m8.is_multiple_of(&BigInt::from(8)) {
            return Err(Error::Invalid(format!("(p,q,t,eps) = ({p},{q},{t},{eps}) gives non-integral (d,m)")));
        }
        Self::new(d8 / 8, m8 / 8, p, q, t, eps)
    }

    fn validate(&self) -> Result<()> {
        let QuasiPerfect { d, m, p, q, t, eps } = self;
        let bad = |what: &str| Err(Error::Invalid(format!("{self}: {what}")));
        if *eps != 1 && *eps != -1 {
            return bad("eps must be +1 or -1");
        }
        if !t.is_positive() {
            return bad("t must be positive");
        }
        if !is_quasi_perfect(d, m, p, q) {
            return bad("Diophantine conditions fail");
        }
        if t * t != p * p - 6 * p * q + q * q + 8 {
            return bad("t^2 != p^2 - 6pq + q^2 + 8");
        }
        let et = t * BigInt::from(*eps);
        if 8 * d != 3 * (p + q) + &et || 8 * m != p + q + 3 * &et {
            return bad("(d,m) do not match (p,q,t,eps)");
        }
        if p.is_positive() && q.is_positive() && !p.gcd(q).is_one() {
            return bad("p and q are not coprime");
        }
        Ok(())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn m(&self) -> &BigInt {
        &self.m
    }
    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn t(&self) -> &BigInt {
        &self.t
    }
    pub fn eps(&self) -> i8 {
        self.eps
    }

    /// `d, p, q > 0` and `m ≥ 0`.
    pub fn is_geometric(&self) -> bool {
        self.d.is_positive() && !self.m.is_negative() && self.p.is_positive() && self.q.is_positive()
    }

    /// `p/q` for tuples with positive `p, q`; formal tuples have no center.
    pub fn center(&self) -> Option<Rational> {
        (self.p.is_positive() && self.q.is_positive()).then(|| ratio(&self.p, &self.q))
    }

    /// `m/d` when `d ≠ 0`.
    pub fn ratio_md(&self) -> Option<Rational> {
        (!self.d.is_zero()).then(|| ratio(&self.m, &self.d))
    }

    /// `p² − 6pq + q²`
    pub fn sigma(&self) -> BigInt {
        &self.p * &self.p - 6 * &self.p * &self.q + &self.q * &self.q
    }

    /// `(−d, −m, −p, −q, t, −ε)`
    pub fn negate(&self) -> Self {
        QuasiPerfect {
            d: -&self.d,
            m: -&self.m,
            p: -&self.p,
            q: -&self.q,
            t: self.t.clone(),
            eps: -self.eps,
        }
    }

    /// `(d, m, p, q, t)` as a coordinate vector.
    pub fn coords(&self) -> [BigInt; 5] {
        [self.d.clone(), self.m.clone(), self.p.clone(), self.q.clone(), self.t.clone()]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("class serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("{s}: {e}")))
    }
}

/// The quasi-perfect tuple with center `p/q`, if there is one.
pub fn from_pq(p: &BigInt, q: &BigInt) -> Result<QuasiPerfect> {
    if !q.is_positive() || p <= q {
        return domain(format!("from_pq needs p > q >= 1, got {p}/{q}"));
    }
    if !p.gcd(q).is_one() {
        return domain(format!("{p}/{q} is not in lowest terms"));
    }
    let t2: BigInt = p * p - 6 * p * q + q * q + 8;
    if t2.is_negative() {
        return Err(Error::NoSolution(format!("{p}/{q}: t^2 = {t2} < 0")));
    }
    let t = exact_sqrt(&t2).ok_or_else(|| Error::NoSolution(format!("{p}/{q}: t^2 = {t2} is not a square")))?;
    if t.is_zero() {
        return Err(Error::NoSolution(format!("{p}/{q}: t = 0")));
    }
    for eps in [1i8, -1] {
        if let Ok(c) = QuasiPerfect::from_ptq(p.clone(), q.clone(), t.clone(), eps) {
            return Ok(c);
        }
    }
    Err(Error::NoSolution(format!("{p}/{q}: neither sign of eps gives integral (d,m)")))
}

/// Both signs of `ε` that give integral `(d, m)` at center `p/q`; used to
/// check that there is never more than one.
pub fn solutions_at(p: &BigInt, q: &BigInt) -> Vec<QuasiPerfect> {
    let t2: BigInt = p * p - 6 * p * q + q * q + 8;
    let Some(t) = exact_sqrt(&t2).filter(|t| !t.is_zero()) else {
        return Vec::new();
    };
    [1i8, -1]
        .into_iter()
        .filter_map(|e| QuasiPerfect::from_ptq(p.clone(), q.clone(), t.clone(), e).ok())
        .collect()
}

pub fn to_vector(c: &QuasiPerfect) -> Result<ClassVector> {
    if !c.is_geometric() {
        return domain(format!("{c} is not geometric"));
    }
    if c.p < c.q {
        return domain(format!("{c}: center below 1"));
    }
    let mut coeffs = vec![c.m.clone()];
    coeffs.extend(weight_expansion(&c.p, &c.q)?.entries());
    Ok(ClassVector { d: c.d.clone(), coeffs })
}

impl ClassVector {
    pub fn new(d: BigInt, coeffs: Vec<BigInt>) -> Self {
        ClassVector { d, coeffs }
    }

    pub fn from_i64(d: i64, coeffs: &[i64]) -> Self {
        ClassVector { d: d.into(), coeffs: coeffs.iter().map(|&x| x.into()).collect() }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ nᵢ = 3d − 1`
    pub fn chern_ok(&self) -> bool {
        self.coeffs.iter().sum::<BigInt>() == 3 * &self.d - 1
    }

    /// `Σ nᵢ² = d² + 1`
    pub fn self_intersection_ok(&self) -> bool {
        self.coeffs.iter().map(|n| n * n).sum::<BigInt>() == &self.d * &self.d + 1
    }

    /// `(0; −1, 0, …, 0)` up to order.
    pub fn is_terminal(&self) -> bool {
        self.d.is_zero()
            && self.coeffs.iter().filter(|n| !n.is_zero()).count() == 1
            && self.coeffs.iter().any(|n| *n == -BigInt::one())
    }
}

impl fmt::Display for QuasiPerfect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.eps > 0 { "+1" } else { "-1" };
        write!(f, "({},{},{},{},{},{e})", self.d, self.m, self.p, self.q, self.t)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", self.d, parts.join(","))
    }
}

/// Integers in JSON: plain numbers when they fit in `i64`, strings otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(n: &BigInt) -> Self {
        match n.to_i64() {
            Some(x) => JsonInt::Small(x),
            None => JsonInt::Big(n.to_string()),
        }
    }
}

impl TryFrom<JsonInt> for BigInt {
    type Error = Error;
    fn try_from(j: JsonInt) -> Result<BigInt> {
        match j {
            JsonInt::Small(x) => Ok(x.into()),
            JsonInt::Big(s) => s.parse().map_err(|_| Error::Parse(s)),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ClassRecord {
    d: JsonInt,
    m: JsonInt,
    p: JsonInt,
    q: JsonInt,
    t: JsonInt,
    eps: i8,
    #[serde(default, skip_deserializing)]
    geometric: bool,
}

impl From<QuasiPerfect> for ClassRecord {
    fn from(c: QuasiPerfect) -> Self {
        ClassRecord {
            d: (&c.d).into(),
            m: (&c.m).into(),
            p: (&c.p).into(),
            q: (&c.q).into(),
            t: (&c.t).into(),
            eps: c.eps,
            geometric: c.is_geometric(),
        }
    }
}

impl TryFrom<ClassRecord> for QuasiPerfect {
    type Error = Error;
    fn try_from(r: ClassRecord) -> Result<Self> {
        QuasiPerfect::new(r.d.try_into()?, r.m.try_into()?, r.p.try_into()?, r.q.try_into()?, r.t.try_into()?, r.eps)
    }
}
