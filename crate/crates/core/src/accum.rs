//! The accumulation function `acc(b)`, its inverse branches and the volume curve.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::classes::exact_sqrt;
use crate::error::{domain, Result};
use crate::exact::{rat, rat_int, QuadExt, Rational};

/// Branch of `acc⁻¹`: `U` takes the larger root, `L` the smaller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    U,
    L,
}

impl Branch {
    /// `U` for `ε = +1`, `L` for `ε = −1`.
    pub fn of_eps(eps: i8) -> Branch {
        if eps > 0 {
            Branch::U
        } else {
            Branch::L
        }
    }
}

/// `p² − 6pq + q²`
pub fn sigma(p: &BigInt, q: &BigInt) -> BigInt {
    p * p - 6 * p * q + q * q
}

fn c_of_b(b: &Rational) -> Rational {
    let one = Rational::one();
    let three = rat(3, 1);
    let num = (&three - b) * (&three - b);
    num / (&one - b * b) - rat(2, 1)
}

/// The root `> 1` of `z² − c(b)z + 1 = 0`, `c(b) = (3−b)²/(1−b²) − 2`.
pub fn acc(b: &Rational) -> Result<QuadExt> {
    if b.is_negative() || *b >= Rational::one() {
        return domain(format!("acc needs 0 <= b < 1, got {b}"));
    }
    let c = c_of_b(b);
    let disc = &c * &c - rat(4, 1);
    let root = QuadExt::sqrt(&disc)?;
    Ok((QuadExt::from_rational(c) + root).scale(&rat(1, 2)))
}

/// `p/q > 3 + 2√2`, decided exactly.
pub fn above_a_min(p: &BigInt, q: &BigInt) -> bool {
    q.is_positive() && p > &(3 * q) && sigma(p, q).is_positive()
}

/// `b = (3pq ± (p+q)√σ)/(p²+q²+3pq)`, `+` for `U`, `−` for `L`.
pub fn acc_inv(p: &BigInt, q: &BigInt, branch: Branch) -> Result<QuadExt> {
    if !q.is_positive() || !p.gcd(q).is_one() {
        return domain(format!("acc_inv needs coprime p, q > 0, got {p}/{q}"));
    }
    if !above_a_min(p, q) {
        return domain(format!("{p}/{q} is not above 3+2sqrt(2)"));
    }
    let s = sigma(p, q);
    let pq3: BigInt = 3 * p * q;
    if branch == Branch::L && pq3.pow(2) < (p + q).pow(2) * &s {
        return domain(format!("{p}/{q} is above the L branch range (b would be negative)"));
    }
    let sign = if branch == Branch::U { 1 } else { -1 };
    let root = QuadExt::sqrt(&rat_int(&s))?;
    let den = rat_int(&(p * p + q * q + &pq3));
    let num = QuadExt::from_rational(rat_int(&pq3)) + root.scale(&rat_int(&(BigInt::from(sign) * (p + q))));
    Ok(num.scale(&den.recip()))
}

/// `V_b(z) = √(z/(1−b²))`, held as its square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Volume {
    square: QuadExt,
}

pub fn vol(b: &QuadExt, z: &QuadExt) -> Result<Volume> {
    let one = QuadExt::one();
    let den = one.checked_sub(&b.checked_mul(b)?)?;
    if den.sign() <= 0 || b.sign() < 0 {
        return domain(format!("vol needs 0 <= b < 1, got {b}"));
    }
    if z.sign() < 0 {
        return domain(format!("vol needs z >= 0, got {z}"));
    }
    Ok(Volume { square: z.checked_div(&den)? })
}

impl Volume {
    /// `V²`
    pub fn square(&self) -> &QuadExt {
        &self.square
    }

    /// `V` itself, when `V²` is rational (then `V` lies in some quadratic field).
    pub fn value_if_rational(&self) -> Option<QuadExt> {
        self.square.as_rational().and_then(|r| QuadExt::sqrt(r).ok())
    }

    /// Compares `V` with `x` by squaring.
    pub fn cmp_with(&self, x: &QuadExt) -> Result<Ordering> {
        if x.sign() <= 0 {
            return Ok(if self.square.is_zero() && x.is_zero() { Ordering::Equal } else { Ordering::Greater });
        }
        let x2 = x.checked_mul(x)?;
        self.square.checked_cmp(&x2)
    }

    pub fn equals(&self, x: &QuadExt) -> Result<bool> {
        Ok(self.cmp_with(x)? == Ordering::Equal)
    }

    pub fn to_f64(&self) -> f64 {
        self.square.to_f64().sqrt()
    }
}

/// `(z²+1)(1−b²) = ((3−b)² − 2(1−b²))z` with `z > 1` and `0 ≤ b < 1`.
pub fn acc_equation_check(b: &QuadExt, z: &QuadExt) -> Result<bool> {
    let one = QuadExt::one();
    let three = QuadExt::from_int(3);
    let omb2 = one.checked_sub(&b.checked_mul(b)?)?;
    let lhs = z.checked_mul(z)?.checked_add(&one)?.checked_mul(&omb2)?;
    let tmb = three.checked_sub(b)?;
    let c = tmb.checked_mul(&tmb)?.checked_sub(&omb2.scale(&rat(2, 1)))?;
    let rhs = c.checked_mul(z)?;
    let in_range = b.sign() >= 0 && omb2.sign() > 0 && z.checked_cmp(&one)? == Ordering::Greater;
    Ok(in_range && lhs.checked_sub(&rhs)?.is_zero())
}

/// The point `(b, acc(b))` together with its volume, in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccPoint {
    pub b: QuadExt,
    pub z: QuadExt,
}

impl AccPoint {
    pub fn at(b: &Rational) -> Result<Self> {
        Ok(AccPoint { b: QuadExt::from_rational(b.clone()), z: acc(b)? })
    }

    pub fn volume(&self) -> Result<Volume> {
        vol(&self.b, &self.z)
    }

    /// `(1+z)/(3−b)`, the line through the accumulation point.
    pub fn line_value(&self) -> Result<QuadExt> {
        let num = QuadExt::one().checked_add(&self.z)?;
        num.checked_div(&QuadExt::from_int(3).checked_sub(&self.b)?)
    }
}

/// All `(p, q)` with `q < p ≤ p_max` and `p² − 6pq + q² = k`.
pub fn sigma_solutions(k: &BigInt, p_max: &BigInt) -> Vec<(BigInt, BigInt)> {
    // p = 3q ± √(8q² + k); the larger root exceeds 5q, so q ≤ p_max/5 + 1 suffices
    let mut out = Vec::new();
    let mut q = BigInt::one();
    let q_max = p_max / 5 + 2;
    while q <= q_max {
        let disc: BigInt = 8 * &q * &q + k;
        if let Some(r) = exact_sqrt(&disc) {
            for p in [&q * 3 - &r, &q * 3 + &r] {
                let p: BigInt = p;
                if p > q && p <= *p_max && !out.contains(&(p.clone(), q.clone())) {
                    out.push((p, q.clone()));
                }
            }
        }
        q += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::symmetry::y;
    use proptest::prelude::*;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    #[test]
    fn acc_examples() {
        assert_eq!(acc(&rat(1, 3)).unwrap(), q("3+2*sqrt(2)"));
        assert_eq!(acc(&rat(1, 5)).unwrap(), QuadExt::from_int(6));
        assert_eq!(acc(&rat(5, 11)).unwrap(), QuadExt::from_int(6));
        assert!(acc(&rat(1, 1)).is_err());
        assert!(acc(&rat(-1, 7)).is_err());
    }

    #[test]
    fn acc_inv_examples() {
        assert_eq!(acc_inv(&int(6), &int(1), Branch::U).unwrap(), QuadExt::from_rational(rat(5, 11)));
        assert_eq!(acc_inv(&int(6), &int(1), Branch::L).unwrap(), QuadExt::from_rational(rat(1, 5)));
        assert_eq!(acc_inv(&int(7), &int(1), Branch::U).unwrap(), q("21/71+16/71*sqrt(2)"));
        assert!(acc_inv(&int(5), &int(1), Branch::U).is_err());
        // 7 > (7+3√5)/2, so the lower branch would give b < 0
        assert!(acc_inv(&int(7), &int(1), Branch::L).is_err());
        assert!(acc_inv(&int(12), &int(2), Branch::U).is_err());
    }

    #[test]
    fn vol_examples() {
        let v = vol(&QuadExt::from_rational(rat(2, 3)), &QuadExt::from_int(6)).unwrap();
        assert_eq!(v.square(), &QuadExt::from_rational(rat(54, 5)));
        let v = vol(&QuadExt::zero(), &QuadExt::one()).unwrap();
        assert_eq!(v.value_if_rational(), Some(QuadExt::one()));
        let pt = AccPoint::at(&rat(2, 7)).unwrap();
        assert!(pt.volume().unwrap().equals(&pt.line_value().unwrap()).unwrap());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&int(6), &int(1)), int(1));
        assert_eq!(sigma(&int(35), &int(6)), int(1));
        assert_eq!(sigma(&int(1), &int(1)), int(-4));
    }

    #[test]
    fn equation_check_examples() {
        assert!(acc_equation_check(&QuadExt::from_rational(rat(1, 3)), &q("3+2*sqrt(2)")).unwrap());
        assert!(acc_equation_check(&q("11/10-1/10*sqrt(21)"), &q("7/2+5/6*sqrt(21)")).unwrap());
        assert!(!acc_equation_check(&QuadExt::from_rational(rat(1, 5)), &QuadExt::from_int(7)).unwrap());
        // the other root of the quadratic is below 1
        assert!(!acc_equation_check(&QuadExt::from_rational(rat(1, 3)), &q("3-2*sqrt(2)")).unwrap());
        assert!(acc_equation_check(&q("sqrt(2)"), &q("sqrt(3)")).is_err());
    }

    #[test]
    fn consecutive_y_values() {
        for i in 2..=12 {
            let (p, qq) = (y(i), y(i - 1));
            let s = &p + &qq;
            let u = acc_inv(&p, &qq, Branch::U).unwrap();
            let l = acc_inv(&p, &qq, Branch::L).unwrap();
            assert_eq!(u, QuadExt::from_rational(Rational::new(&s + 3, 3 * &s + 1)));
            assert_eq!(l, QuadExt::from_rational(Rational::new(&s - 3, 3 * &s - 1)));
        }
    }

    #[test]
    fn sigma_one_solutions_are_y_pairs() {
        let sols = sigma_solutions(&int(1), &int(100_000));
        let expect: Vec<_> = (2..).map(|i| (y(i), y(i - 1))).take_while(|(p, _)| *p <= int(100_000)).collect();
        assert_eq!(sols, expect);
    }

    #[test]
    fn a_min_is_minimum() {
        let min = acc(&rat(1, 3)).unwrap();
        for k in 0..300 {
            let z = acc(&rat(k, 300)).unwrap();
            assert!(z.to_f64() >= min.to_f64() - 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn acc_solves_its_equation(n in 0i64..10_000, d in 1i64..10_000) {
            prop_assume!(n < d);
            let b = rat(n, d);
            let z = acc(&b).unwrap();
            prop_assert!(acc_equation_check(&QuadExt::from_rational(b.clone()), &z).unwrap());
            prop_assert_eq!(z.cmp_exact(&QuadExt::one()), Ordering::Greater);
            let pt = AccPoint::at(&b).unwrap();
            prop_assert!(pt.volume().unwrap().equals(&pt.line_value().unwrap()).unwrap());
        }

        #[test]
        fn acc_inv_inverts(qq in 1i64..500, extra in 0i64..3000) {
            let (p, qq) = (int(6 * qq + extra), int(qq));
            prop_assume!(p.gcd(&qq).is_one() && above_a_min(&p, &qq));
            let z = QuadExt::from_rational(Rational::new(p.clone(), qq.clone()));
            for br in [Branch::U, Branch::L] {
                if let Ok(b) = acc_inv(&p, &qq, br) {
                    prop_assert!(acc_equation_check(&b, &z).unwrap());
                    prop_assert_eq!(b.is_rational(), exact_sqrt(&sigma(&p, &qq)).is_some());
                }
            }
        }
    }
}
