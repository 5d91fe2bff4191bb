//! Obstruction functions `μ_{E,b}` and blocked intervals.

use std::cmp::Ordering;

use num_traits::One;

use crate::accum::{acc_inv, above_a_min, vol, Branch};
use crate::classes::QuasiPerfect;
use crate::error::{domain, Result};
use crate::exact::{rat_int, ratio, QuadExt, Rational};
use crate::staircase::{build_staircase, limits, make_family, Base, Dir, PreStaircase};
use crate::symmetry::{principal_class, GroupElem};

/// `d − mb`, which must be positive for `μ` to be defined.
fn denominator(c: &QuasiPerfect, b: &QuadExt) -> Result<QuadExt> {
    let den = QuadExt::from(c.d()).checked_sub(&b.scale(&rat_int(c.m())))?;
    if den.sign() <= 0 {
        return domain(format!("d - m*b <= 0 for {c} at b = {b}"));
    }
    Ok(den)
}

/// `μ_{E,b}(z) = qz/(d−mb)` for `z ≤ p/q`, `p/(d−mb)` for `z ≥ p/q`.
pub fn mu(c: &QuasiPerfect, b: &QuadExt, z: &Rational) -> Result<QuadExt> {
    if *z < Rational::one() {
        return domain(format!("mu needs z >= 1, got {z}"));
    }
    let den = denominator(c, b)?;
    let center = ratio(c.p(), c.q());
    let num = if *z <= center { rat_int(c.q()) * z } else { rat_int(c.p()) };
    QuadExt::from_rational(num).checked_div(&den)
}

/// `μ` at a point `z` of the same quadratic field as `b`.
pub fn mu_quad(c: &QuasiPerfect, b: &QuadExt, z: &QuadExt) -> Result<QuadExt> {
    let den = denominator(c, b)?;
    let center = QuadExt::from_rational(ratio(c.p(), c.q()));
    let num = if z.checked_cmp(&center)? != Ordering::Greater { z.scale(&rat_int(c.q())) } else { QuadExt::from(c.p()) };
    num.checked_div(&den)
}

/// `μ_{E,b}(z) > V_b(z)`, compared by squaring.
pub fn is_obstructive(c: &QuasiPerfect, b: &QuadExt, z: &Rational) -> Result<bool> {
    let m = mu(c, b, z)?;
    Ok(vol(b, &QuadExt::from_rational(z.clone()))?.cmp_with(&m)? == Ordering::Less)
}

/// The `b` at which a class with this center and `ε` would sit on the accumulation curve.
pub fn center_b(c: &QuasiPerfect) -> Result<QuadExt> {
    acc_inv(c.p(), c.q(), Branch::of_eps(c.eps()))
}

/// `μ_{c,b}(p/q) > V_b(p/q)` at `b = acc⁻¹(p/q)` on the branch of `ε`.
pub fn is_center_blocking(c: &QuasiPerfect) -> Result<bool> {
    if !c.is_geometric() {
        return domain(format!("{c} is not geometric"));
    }
    if !above_a_min(c.p(), c.q()) {
        return domain(format!("center of {c} is not above 3+2sqrt(2)"));
    }
    let b = center_b(c)?;
    let z = ratio(c.p(), c.q());
    let m = mu(c, &b, &z)?;
    Ok(vol(&b, &QuadExt::from_rational(z))?.cmp_with(&m)? == Ordering::Less)
}

/// `z₁ = (p²+1)/(pq−1)`, where `μ_{c,m/d}` stops being obstructive.
pub fn break_point_at_own_b(c: &QuasiPerfect) -> Result<Rational> {
    let pq = c.p() * c.q();
    if pq.is_one() {
        return domain(format!("pq = 1 for {c}"));
    }
    Ok(Rational::new(c.p() * c.p() + 1, pq - 1))
}

/// `(bd−m)² < 1−b²`: necessary for `c` to be obstructive at its center for `b`.
pub fn live_candidate(c: &QuasiPerfect, b: &Rational) -> bool {
    let x = b * rat_int(c.d()) - rat_int(c.m());
    &x * &x < Rational::one() - b * b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedInterval {
    pub class: QuasiPerfect,
    pub z_lo: QuadExt,
    pub z_hi: QuadExt,
    pub b_lo: QuadExt,
    pub b_hi: QuadExt,
}

impl BlockedInterval {
    pub fn contains_z(&self, z: &Rational) -> Result<bool> {
        let z = QuadExt::from_rational(z.clone());
        Ok(self.z_lo.checked_cmp(&z)? == Ordering::Less && z.checked_cmp(&self.z_hi)? == Ordering::Less)
    }

    /// `b` in the closure of the blocked `b`-interval.
    pub fn b_closure_contains(&self, b: &Rational) -> Result<bool> {
        let b = QuadExt::from_rational(b.clone());
        Ok(self.b_lo.checked_cmp(&b)? != Ordering::Greater && b.checked_cmp(&self.b_hi)? != Ordering::Greater)
    }

    pub fn b_contains(&self, b: &Rational) -> Result<bool> {
        let b = QuadExt::from_rational(b.clone());
        Ok(self.b_lo.checked_cmp(&b)? == Ordering::Less && b.checked_cmp(&self.b_hi)? == Ordering::Less)
    }
}

/// Endpoints are the limits of the ascending and descending staircases of `block`.
pub fn blocked_interval(block: &QuasiPerfect, asc: &PreStaircase, desc: &PreStaircase) -> Result<BlockedInterval> {
    let associated = |sc: &PreStaircase, ascends: bool| {
        sc.dir.ascends() == ascends && sc.block == *block && sc.steps.iter().all(|s| sc.linear_relation(s))
    };
    if !associated(asc, true) || !associated(desc, false) {
        return domain(format!("staircases {} / {} are not associated to {block}", asc.label(), desc.label()));
    }
    let la = limits(asc)?;
    let ld = limits(desc)?;
    let (b_lo, b_hi) = if la.b_inf.checked_cmp(&ld.b_inf)? == Ordering::Greater {
        (ld.b_inf, la.b_inf)
    } else {
        (la.b_inf, ld.b_inf)
    };
    Ok(BlockedInterval { class: block.clone(), z_lo: la.z_inf, z_hi: ld.z_inf, b_lo, b_hi })
}

/// The two staircases of `(Sⁱ)^♯(B^U_0)`: the lower one comes from `(S^{i+1}R)^♯(S^U)`.
pub fn principal_staircases(i: u32, count: usize) -> Result<(PreStaircase, PreStaircase)> {
    let asc = build_staircase(&make_family(GroupElem::new(i + 1, true), Base::U), 0, Dir::Lower, count)?;
    let desc = build_staircase(&make_family(GroupElem::shift_pow(i), Base::U), 0, Dir::Upper, count)?;
    debug_assert_eq!(asc.block, principal_class(i));
    Ok((asc, desc))
}

pub fn principal_interval(i: u32) -> Result<BlockedInterval> {
    let (asc, desc) = principal_staircases(i, 4)?;
    blocked_interval(&principal_class(i), &asc, &desc)
}

/// Blocked interval of `B^U_n` from `S^U_{ℓ,n}` and `S^U_{u,n}`; `n ≥ 1`.
pub fn base_u_interval(n: i64) -> Result<BlockedInterval> {
    let f = make_family(GroupElem::ID, Base::U);
    let asc = build_staircase(&f, n, Dir::Lower, 4)?;
    let desc = build_staircase(&f, n, Dir::Upper, 4)?;
    blocked_interval(&f.block(n)?, &asc, &desc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::acc;
    use crate::classes::{from_pq, QuasiPerfect};
    use crate::exact::{int, rat};
    use crate::staircase::base_block;
    use crate::symmetry::w;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn bu0() -> QuasiPerfect {
        base_block(Base::U, 0)
    }

    fn qr(n: i64, d: i64) -> QuadExt {
        QuadExt::from_rational(rat(n, d))
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&bu0(), &qr(2, 3), &rat(6, 1)).unwrap(), qr(18, 5));
        assert_eq!(mu(&bu0(), &qr(2, 3), &rat(8, 1)).unwrap(), qr(18, 5));
        assert_eq!(mu(&bu0(), &qr(0, 1), &rat(6, 1)).unwrap(), qr(2, 1));
        assert_eq!(mu(&bu0(), &qr(2, 3), &rat(5, 1)).unwrap(), qr(3, 1));
        assert!(mu(&bu0(), &qr(3, 2), &rat(6, 1)).is_err());
    }

    #[test]
    fn obstructive_examples() {
        assert!(is_obstructive(&bu0(), &qr(2, 3), &rat(6, 1)).unwrap());
        assert!(!is_obstructive(&bu0(), &qr(0, 1), &rat(6, 1)).unwrap());
        let c = QuasiPerfect::from_i64(1, 0, 2, 1, 1, -1).unwrap();
        assert!(is_obstructive(&c, &qr(0, 1), &rat(2, 1)).unwrap());
    }

    #[test]
    fn center_blocking_examples() {
        assert!(is_center_blocking(&bu0()).unwrap());
        assert!(is_center_blocking(&base_block(Base::L, 1)).unwrap());
        assert!(is_center_blocking(&QuasiPerfect::from_i64(1, 0, 2, 1, 1, -1).unwrap()).is_err());
    }

    #[test]
    fn from_pq_classes_are_center_blocking() {
        for p in 6..=400i64 {
            for q in 1..=p / 5 {
                if !p.gcd(&q).eq(&1) {
                    continue;
                }
                if let Ok(c) = from_pq(&int(p), &int(q)) {
                    if above_a_min(c.p(), c.q()) && c.is_geometric() {
                        if let Ok(res) = is_center_blocking(&c) {
                            assert!(res, "{c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn break_points() {
        assert_eq!(break_point_at_own_b(&bu0()).unwrap(), rat(37, 5));
        assert_eq!(break_point_at_own_b(&QuasiPerfect::from_i64(1, 0, 2, 1, 1, -1).unwrap()).unwrap(), rat(5, 1));
        assert_eq!(break_point_at_own_b(&base_block(Base::U, 1)).unwrap(), rat(65, 7));
        assert!(break_point_at_own_b(&QuasiPerfect::from_i64(1, 1, 1, 1, 2, 1).unwrap()).is_err());
    }

    #[test]
    fn own_b_break_point_matches_volume() {
        // at b = m/d the constant piece p/(d − mb) meets the line (1+z)/(3−b) at z₁
        for n in 0..8 {
            let c = base_block(Base::U, n);
            let b = ratio(c.m(), c.d());
            let z1 = break_point_at_own_b(&c).unwrap();
            let den = rat_int(c.d()) - &b * rat_int(c.m());
            let three = Rational::from_integer(3.into());
            assert_eq!(rat_int(c.p()) / den, (Rational::one() + &z1) / (three - &b));
        }
    }

    #[test]
    fn base_u_blocking_lemma() {
        for n in 0..=10 {
            let c = base_block(Base::U, n);
            let b = ratio(c.m(), c.d());
            assert!(acc(&b).unwrap().checked_cmp(&QuadExt::from_int(2 * n + 8)).unwrap() == Ordering::Less);
            let j = base_u_interval(n + 1).unwrap();
            assert!(j.b_contains(&b).unwrap(), "n={n}");
        }
    }

    #[test]
    fn principal_intervals() {
        for i in 0..=4u32 {
            let j = principal_interval(i).unwrap();
            let (lo, hi) = (w(i as i64 + 2).unwrap(), w(i as i64 + 1).unwrap());
            assert!(j.z_lo.checked_cmp(&QuadExt::from_rational(lo)).unwrap() == Ordering::Less, "i={i}");
            assert!(j.z_hi.checked_cmp(&QuadExt::from_rational(hi)).unwrap() == Ordering::Greater, "i={i}");
        }
        let j = principal_interval(0).unwrap();
        assert!(j.contains_z(&rat(41, 7)).unwrap() && j.contains_z(&rat(7, 1)).unwrap());
    }

    #[test]
    fn association_is_checked() {
        let f = make_family(GroupElem::ID, Base::U);
        let asc = build_staircase(&f, 1, Dir::Lower, 3).unwrap();
        let desc = build_staircase(&f, 2, Dir::Upper, 3).unwrap();
        assert!(blocked_interval(&f.block(1).unwrap(), &asc, &desc).is_err());
        assert!(blocked_interval(&f.block(1).unwrap(), &desc, &asc).is_err());
    }

    proptest! {
        #[test]
        fn live_candidate_matches_center_obstruction(n in 0i64..10, num in 1i64..999) {
            // for a perfect class, obstructive at its center iff (bd − m)² < 1 − b²
            let c = base_block(Base::U, n);
            let b = rat(num, 1000);
            prop_assume!(rat_int(c.d()) - &b * rat_int(c.m()) > Rational::from_integer(0.into()));
            let z = ratio(c.p(), c.q());
            let obs = is_obstructive(&c, &QuadExt::from_rational(b.clone()), &z).unwrap();
            prop_assert_eq!(obs, live_candidate(&c, &b));
        }
    }
}
