//! Continued fractions and integral weight expansions of rationals `p/q ≥ 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// `[ℓ0; ℓ1, …, ℓk]` with every `ℓi ≥ 1` and `ℓk ≥ 2` when `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    coeffs: Vec<BigInt>,
}

/// Non-increasing weights `W1 = q ≥ W2 ≥ …`, stored run-length encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightExpansion {
    runs: Vec<(BigInt, usize)>,
}

fn check_pq(p: &BigInt, q: &BigInt) -> Result<(), Error> {
    if !q.is_positive() || p < q {
        return Err(Error::Domain(format!("need p >= q >= 1, got {p}/{q}")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::Domain(format!("{p}/{q} is not in lowest terms")));
    }
    Ok(())
}

/// Divides out `gcd(p, q)` and returns it alongside the reduced pair.
pub fn normalize(p: &BigInt, q: &BigInt) -> (BigInt, BigInt, BigInt) {
    let g = p.gcd(q);
    if g.is_zero() {
        return (p.clone(), q.clone(), g);
    }
    (p / &g, q / &g, g)
}

impl ContinuedFraction {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, Error> {
        if coeffs.is_empty() {
            return Err(Error::Domain("empty continued fraction".into()));
        }
        if coeffs.iter().any(|c| !c.is_positive()) {
            return Err(Error::Domain("continued fraction coefficients must be positive".into()));
        }
        let mut coeffs = coeffs;
        // [..., a, 1] and [..., a+1] are the same number
        if coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_one()) {
            coeffs.pop();
            *coeffs.last_mut().unwrap() += 1;
        }
        Ok(ContinuedFraction { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Evaluates to the reduced pair `(p, q)`.
    pub fn value(&self) -> (BigInt, BigInt) {
        let mut p = BigInt::one();
        let mut q = BigInt::zero();
        for a in self.coeffs.iter().rev() {
            let np = a * &p + &q;
            q = p;
            p = np;
        }
        (p, q)
    }
}

pub fn cf_expand(p: &BigInt, q: &BigInt) -> Result<ContinuedFraction, Error> {
    check_pq(p, q)?;
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut coeffs = Vec::new();
    while !b.is_zero() {
        let (quo, rem) = a.div_rem(&b);
        coeffs.push(quo);
        a = b;
        b = rem;
    }
    ContinuedFraction::new(coeffs)
}

pub fn cf_value(cf: &ContinuedFraction) -> (BigInt, BigInt) {
    cf.value()
}

pub fn weight_expansion(p: &BigInt, q: &BigInt) -> Result<WeightExpansion, Error> {
    check_pq(p, q)?;
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut runs = Vec::new();
    while !b.is_zero() {
        let (quo, rem) = a.div_rem(&b);
        let count = quo
            .to_usize()
            .ok_or_else(|| Error::Domain(format!("weight multiplicity {quo} too large")))?;
        runs.push((b.clone(), count));
        a = b;
        b = rem;
    }
    Ok(WeightExpansion { runs })
}

impl WeightExpansion {
    pub fn runs(&self) -> &[(BigInt, usize)] {
        &self.runs
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.runs.iter().map(|(_, k)| *k).collect()
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|(_, k)| k).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn entries(&self) -> Vec<BigInt> {
        self.runs.iter().flat_map(|(w, k)| std::iter::repeat_n(w.clone(), *k)).collect()
    }

    pub fn sum(&self) -> BigInt {
        self.runs.iter().map(|(w, k)| w * BigInt::from(*k)).sum()
    }

    pub fn sum_squares(&self) -> BigInt {
        self.runs.iter().map(|(w, k)| w * w * BigInt::from(*k)).sum()
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.coeffs[0])?;
        for (i, c) in self.coeffs[1..].iter().enumerate() {
            write!(f, "{}{c}", if i == 0 { ";" } else { "," })?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for WeightExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .runs
            .iter()
            .map(|(w, k)| if *k == 1 { w.to_string() } else { format!("{w}^{k}") })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    /// Parses `[a;b,c]`, expanding repeated blocks written `{x,y}^k`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
        let (head, tail) = match inner.split_once(';') {
            Some((h, rest)) => (h, rest),
            None => (inner, ""),
        };
        let mut coeffs = vec![head.parse::<BigInt>().map_err(|_| bad())?];
        let mut rest = tail;
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest);
            if let Some(body) = rest.strip_prefix('{') {
                let close = body.find('}').ok_or_else(bad)?;
                let block: Vec<BigInt> = body[..close]
                    .split(',')
                    .map(|x| x.parse().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?;
                let after = body[close + 1..].strip_prefix('^').ok_or_else(bad)?;
                let end = after.find(',').unwrap_or(after.len());
                let reps: usize = after[..end].parse().map_err(|_| bad())?;
                for _ in 0..reps {
                    coeffs.extend(block.iter().cloned());
                }
                rest = &after[end..];
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                coeffs.push(rest[..end].parse().map_err(|_| bad())?);
                rest = &rest[end..];
            }
        }
        ContinuedFraction::new(coeffs)
    }
}
