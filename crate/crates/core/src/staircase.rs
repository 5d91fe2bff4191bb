//! Pre-staircase families `T^♯(S^U)`, `T^♯(S^L)`, their limits and the liveness test.
//!
//! Steps are indexed by `κ`; step `κ` has polynomial degree `κ` in `n`.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::classes::QuasiPerfect;
use crate::error::{domain, Error, Result};
use crate::exact::{rat, rat_int, QuadExt, Rational};
use crate::symmetry::{sharp, v, w, GroupElem, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    U,
    L,
}

impl Base {
    pub fn other(self) -> Base {
        match self {
            Base::U => Base::L,
            Base::L => Base::U,
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::U => "U",
            Base::L => "L",
        })
    }
}

impl std::str::FromStr for Base {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "U" | "u" => Ok(Base::U),
            "L" | "l" => Ok(Base::L),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

/// Lower (`ℓ`, ascending steps) or upper (`u`, descending steps) staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Lower,
    Upper,
}

impl Dir {
    pub fn label(self) -> &'static str {
        match self {
            Dir::Lower => "l",
            Dir::Upper => "u",
        }
    }

    pub fn ascends(self) -> bool {
        self == Dir::Lower
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Dir {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "l" | "ℓ" | "lower" | "L" => Ok(Dir::Lower),
            "u" | "upper" | "U" => Ok(Dir::Upper),
            other => Err(Error::Parse(other.to_string())),
        }
    }
}

fn qp(d: i64, m: i64, p: i64, q: i64, t: i64, eps: i8) -> QuasiPerfect {
    QuasiPerfect::from_i64(d, m, p, q, t, eps).expect("base data")
}

/// `B^U_n = (n+3, n+2, 2n+6, 1, 2n+3, +1)`, `B^L_n = (5n, n−1, 12n+1, 2n, 2n+3, −1)`.
/// `B^L_0 = (0, −1, 1, 0, 3, −1)` is formal.
pub fn base_block(base: Base, n: i64) -> QuasiPerfect {
    let n = BigInt::from(n);
    let one = BigInt::one();
    let t = 2 * &n + 3;
    let (d, m, p, q, eps) = match base {
        Base::U => (&n + 3, &n + 2, 2 * &n + 6, one, 1),
        Base::L => (5 * &n, &n - 1, 12 * &n + 1, 2 * &n, -1),
    };
    QuasiPerfect::new(d, m, p, q, t, eps).expect("base blocking class")
}

/// Seeds of `S^U` and `S^L`.
pub fn base_seed(base: Base, dir: Dir) -> QuasiPerfect {
    match (base, dir) {
        (Base::U, Dir::Lower) => qp(1, 1, 1, 1, 2, 1),
        (Base::U, Dir::Upper) => qp(-2, 0, -5, -1, 2, 1),
        (Base::L, Dir::Lower) => qp(2, 0, 5, 1, 2, -1),
        (Base::L, Dir::Upper) => qp(-13, -5, -29, -5, 2, -1),
    }
}

/// `T^♯(S^base)`. Since `R^♯` maps `S^U` to `S^L` with the seed labels swapped,
/// every family is stored as `(S^i)^♯(S^F)` for a normalized base `F`;
/// `ℓ`/`u` always refer to the normalized family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub t: GroupElem,
    pub base: Base,
}

pub fn make_family(t: GroupElem, base: Base) -> Family {
    Family { t, base }
}

impl Family {
    pub fn shift_power(&self) -> u32 {
        self.t.i
    }

    pub fn normalized_base(&self) -> Base {
        if self.t.delta {
            self.base.other()
        } else {
            self.base
        }
    }

    fn shift(&self) -> GroupElem {
        GroupElem::shift_pow(self.t.i)
    }

    /// `T^♯(B^base_n)`.
    pub fn block(&self, n: i64) -> Result<QuasiPerfect> {
        if n < 0 {
            return domain(format!("blocking class index {n} < 0"));
        }
        sharp(&self.shift(), &base_block(self.normalized_base(), n))
    }

    /// Seed with the normalized label.
    pub fn seed(&self, dir: Dir) -> QuasiPerfect {
        sharp(&self.shift(), &base_seed(self.normalized_base(), dir)).expect("seed image")
    }

    /// Blocking-class centers increase with `n` exactly for normalized base `U`.
    pub fn centers_ascend(&self) -> bool {
        self.normalized_base() == Base::U
    }

    pub fn eps(&self) -> i8 {
        self.seed(Dir::Lower).eps()
    }

    pub fn is_admissible(&self, n: i64, dir: Dir) -> bool {
        let min = match (self.normalized_base(), dir) {
            (Base::U, Dir::Lower) | (Base::L, Dir::Upper) => 1,
            _ => 0,
        };
        n >= min
    }

    /// Index of the second seed: `B_{n∓1}` depending on direction and center order.
    fn second_seed_index(&self, n: i64, dir: Dir) -> i64 {
        match (self.centers_ascend(), dir) {
            (true, Dir::Lower) | (false, Dir::Upper) => n - 1,
            _ => n + 1,
        }
    }

    /// Interval in which the limits of this family lie:
    /// `(w_{i+1}, v_{i+1})` for `Sⁱ♯S^U`, `(v_{i+2}, w_{i+1})` for `SⁱR♯S^U = Sⁱ♯S^L`.
    pub fn limit_interval(&self) -> (Point, Point) {
        let i = self.t.i as i64;
        if self.normalized_base() == Base::L {
            (v(i + 2).expect("v"), Point::Finite(w(i + 1).expect("w")))
        } else {
            (Point::Finite(w(i + 1).expect("w")), v(i + 1).expect("v"))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})#S^{}", self.t, self.base)
    }
}

/// `(p, q, t)` with the form `A = (−1,3,0; 3,−1,0; 0,0,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeedTriple {
    pub p: BigInt,
    pub q: BigInt,
    pub t: BigInt,
}

impl SeedTriple {
    pub fn new(p: BigInt, q: BigInt, t: BigInt) -> Self {
        SeedTriple { p, q, t }
    }

    pub fn of(c: &QuasiPerfect) -> Self {
        SeedTriple { p: c.p().clone(), q: c.q().clone(), t: c.t().clone() }
    }

    /// `xᵀAy`
    pub fn pair(&self, o: &SeedTriple) -> BigInt {
        -(&self.p * &o.p) + 3 * (&self.p * &o.q + &self.q * &o.p) - &self.q * &o.q + &self.t * &o.t
    }

    pub fn form(&self) -> BigInt {
        self.pair(self)
    }
}

/// `x_{κ+1} = νx_κ − x_{κ−1}` componentwise; returns `count + 2` vectors.
pub fn recurse(x0: &[BigInt], x1: &[BigInt], nu: &BigInt, count: usize) -> Vec<Vec<BigInt>> {
    assert_eq!(x0.len(), x1.len(), "recurse needs equal lengths");
    let mut out = vec![x0.to_vec(), x1.to_vec()];
    for _ in 0..count {
        let k = out.len();
        let next = out[k - 1].iter().zip(&out[k - 2]).map(|(a, b)| nu * a - b).collect();
        out.push(next);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreStaircase {
    pub family: Family,
    pub n: i64,
    pub dir: Dir,
    pub nu: BigInt,
    pub block: QuasiPerfect,
    pub steps: Vec<QuasiPerfect>,
}

pub fn build_staircase(family: &Family, n: i64, dir: Dir, count: usize) -> Result<PreStaircase> {
    if !family.is_admissible(n, dir) {
        return domain(format!("{family}: no {dir} staircase at n = {n}"));
    }
    let block = family.block(n)?;
    let seed0 = family.seed(dir);
    let seed1 = family.block(family.second_seed_index(n, dir))?;
    let nu = block.t().clone();
    let eps = seed0.eps();
    let coords = |c: &QuasiPerfect| vec![c.d().clone(), c.m().clone(), c.p().clone(), c.q().clone(), c.t().clone()];
    let steps = recurse(&coords(&seed0), &coords(&seed1), &nu, count)
        .into_iter()
        .map(|x| {
            let [d, m, p, q, t]: [BigInt; 5] = x.try_into().expect("five coordinates");
            QuasiPerfect::new(d, m, p, q, t, eps)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PreStaircase { family: *family, n, dir, nu, block, steps })
}

impl PreStaircase {
    pub fn label(&self) -> String {
        format!("{}_{{{},{}}}", self.family, self.dir, self.n)
    }

    pub fn eps(&self) -> i8 {
        self.steps[0].eps()
    }

    pub fn sigma(&self) -> BigInt {
        &self.nu * &self.nu - 4
    }

    /// `x₁ᵀAx₀ = 4ν`
    pub fn compatible(&self) -> bool {
        let x0 = SeedTriple::of(&self.steps[0]);
        let x1 = SeedTriple::of(&self.steps[1]);
        x0.form() == BigInt::from(8) && x1.form() == BigInt::from(8) && x1.pair(&x0) == 4 * &self.nu
    }

    /// `m_B m = d_B d − q_B p` when ascending, `m_B m = d_B d − p_B q` when descending.
    pub fn linear_relation(&self, c: &QuasiPerfect) -> bool {
        linear_relation(&self.block, c, self.dir.ascends())
    }

    pub fn geometric_steps(&self) -> impl Iterator<Item = &QuasiPerfect> {
        self.steps.iter().filter(|c| c.is_geometric())
    }
}

/// Every admissible `SⁱR^δ♯S^{U,L}_{ℓ/u,n}` with `i`, `n` in the given ranges,
/// ordered by `(i, δ, base, n, dir)`.
pub fn corpus(i: RangeInclusive<u32>, n: RangeInclusive<i64>, count: usize) -> Result<Vec<PreStaircase>> {
    let mut out = Vec::new();
    for i in i {
        for delta in [false, true] {
            for base in [Base::U, Base::L] {
                let f = make_family(GroupElem::new(i, delta), base);
                for n in n.clone() {
                    for dir in [Dir::Lower, Dir::Upper] {
                        if f.is_admissible(n, dir) {
                            out.push(build_staircase(&f, n, dir, count)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn linear_relation(block: &QuasiPerfect, c: &QuasiPerfect, ascends: bool) -> bool {
    let lhs = block.m() * c.m();
    let rhs = if ascends {
        block.d() * c.d() - block.q() * c.p()
    } else {
        block.d() * c.d() - block.p() * c.q()
    };
    lhs == rhs
}

/// `x_κ = Xλ^κ + X̄λ̄^κ` data, all in `Q(√σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitData {
    pub nu: BigInt,
    pub sigma: BigInt,
    pub lambda: QuadExt,
    pub d: QuadExt,
    pub m: QuadExt,
    pub p: QuadExt,
    pub q: QuadExt,
    pub t: QuadExt,
    pub z_inf: QuadExt,
    pub b_inf: QuadExt,
}

/// `X = X' + X''√σ` with `X' = x₀/2`, `X'' = (2x₁ − νx₀)/(2σ)`.
pub fn leading_coefficient(x0: &BigInt, x1: &BigInt, nu: &BigInt) -> Result<QuadExt> {
    let sigma: BigInt = nu * nu - 4;
    if !sigma.is_positive() {
        return domain(format!("recursion parameter {nu} gives sigma = {sigma} <= 0"));
    }
    let a = Rational::new(x0.clone(), BigInt::from(2));
    let b = Rational::new(2 * x1 - nu * x0, &sigma * 2);
    QuadExt::new(a, b, &sigma)
}

pub fn limits(sc: &PreStaircase) -> Result<LimitData> {
    let nu = &sc.nu;
    if nu < &BigInt::from(3) {
        return domain(format!("limits need nu >= 3, got {nu}"));
    }
    let sigma = sc.sigma();
    let (s0, s1) = (&sc.steps[0], &sc.steps[1]);
    let lead = |a: &BigInt, b: &BigInt| leading_coefficient(a, b, nu);
    let d = lead(s0.d(), s1.d())?;
    let m = lead(s0.m(), s1.m())?;
    let p = lead(s0.p(), s1.p())?;
    let q = lead(s0.q(), s1.q())?;
    let t = lead(s0.t(), s1.t())?;
    let lambda = QuadExt::new(Rational::new(nu.clone(), BigInt::from(2)), rat(1, 2), &sigma)?;
    assert!(!lambda.is_rational(), "sigma = nu^2 - 4 is never a square for nu >= 3");
    let z_inf = p.checked_div(&q)?;
    let b_inf = m.checked_div(&d)?;
    Ok(LimitData { nu: nu.clone(), sigma, lambda, d, m, p, q, t, z_inf, b_inf })
}

/// `m₁d₀ − m₀d₁`
pub fn seed_determinant(sc: &PreStaircase) -> BigInt {
    let (s0, s1) = (&sc.steps[0], &sc.steps[1]);
    s1.m() * s0.d() - s0.m() * s1.d()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Direction of `m_κ/d_κ`.
pub fn monotonicity(sc: &PreStaircase) -> Result<Monotonicity> {
    let det = seed_determinant(sc);
    if det.is_zero() {
        return Err(Error::Degenerate(format!("{}: m1*d0 - m0*d1 = 0", sc.label())));
    }
    Ok(if det.is_positive() { Monotonicity::Increasing } else { Monotonicity::Decreasing })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeVerdict {
    /// `(3D−M)/|3M−D| > |m₁d₀ − m₀d₁|/√σ`
    Strict,
    /// Only the weaker bound with the factor `34/35` on the right holds.
    Relaxed,
    Fails,
}

fn slope_margin(ld: &LimitData, det: &BigInt, factor: &Rational) -> Result<i8> {
    let three = QuadExt::from_int(3);
    let lhs_num = three.checked_mul(&ld.d)?.checked_sub(&ld.m)?;
    let lhs_den = three.checked_mul(&ld.m)?.checked_sub(&ld.d)?.abs();
    let root = QuadExt::sqrt(&rat_int(&ld.sigma))?;
    // lhs_num·√σ − factor·|det|·lhs_den
    let rhs = lhs_den.scale(&(factor * rat_int(&det.abs())));
    Ok(lhs_num.checked_mul(&root)?.checked_sub(&rhs)?.sign())
}

/// Slope inequality for a descending staircase, evaluated exactly in `Q(√σ)`.
pub fn slope_condition(sc: &PreStaircase) -> Result<SlopeVerdict> {
    if sc.dir.ascends() {
        return domain(format!("{} is not descending", sc.label()));
    }
    let ld = limits(sc)?;
    let det = seed_determinant(sc);
    if slope_margin(&ld, &det, &rat(1, 1))? > 0 {
        return Ok(SlopeVerdict::Strict);
    }
    if slope_margin(&ld, &det, &rat(34, 35))? > 0 {
        return Ok(SlopeVerdict::Relaxed);
    }
    Ok(SlopeVerdict::Fails)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Liveness {
    Live,
    Unknown,
}

/// Outcome of each liveness requirement; `verdict` is `Live` only if all hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LivenessReport {
    pub verdict: Liveness,
    pub perfect: bool,
    pub nu_at_least_3: bool,
    pub irrational_limit: bool,
    pub monotone_side: bool,
    pub slope: Option<SlopeVerdict>,
}

impl LivenessReport {
    pub fn reasons(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.perfect {
            out.push("steps not certified perfect");
        }
        if !self.nu_at_least_3 {
            out.push("recursion parameter below 3");
        }
        if !self.irrational_limit {
            out.push("rational accumulation point");
        }
        if !self.monotone_side {
            out.push("m/d does not move away from 1/3");
        }
        if matches!(self.slope, Some(SlopeVerdict::Relaxed | SlopeVerdict::Fails)) {
            out.push("slope inequality fails");
        }
        out
    }
}

pub fn liveness_report(sc: &PreStaircase, perfect: bool) -> LivenessReport {
    let nu_ok = sc.nu >= BigInt::from(3);
    let ld = limits(sc).ok();
    let irrational = ld.as_ref().is_some_and(|l| !l.z_inf.is_rational());
    let monotone_side = match (&ld, monotonicity(sc)) {
        (Some(l), Ok(mono)) => {
            let third = QuadExt::from_rational(rat(1, 3));
            match l.b_inf.checked_cmp(&third) {
                Ok(std::cmp::Ordering::Greater) => mono == Monotonicity::Decreasing,
                Ok(std::cmp::Ordering::Less) => mono == Monotonicity::Increasing,
                _ => false,
            }
        }
        _ => false,
    };
    let slope = if sc.dir.ascends() { None } else { Some(slope_condition(sc).unwrap_or(SlopeVerdict::Fails)) };
    let slope_ok = slope.is_none_or(|s| s == SlopeVerdict::Strict);
    let live = perfect && nu_ok && irrational && monotone_side && slope_ok;
    LivenessReport {
        verdict: if live { Liveness::Live } else { Liveness::Unknown },
        perfect,
        nu_at_least_3: nu_ok,
        irrational_limit: irrational,
        monotone_side,
        slope,
    }
}

/// Sufficient criterion only: never reports a staircase as not live.
pub fn liveness(sc: &PreStaircase, perfect: bool) -> Liveness {
    liveness_report(sc, perfect).verdict
}

/// `g_{k+1} = 6g_k − g_{k−1}` with `g₀ = 1`, `g₁ = 2, 4, 5` for strands 0, 1, 2.
pub fn third_g(strand: usize, k: i64) -> Result<BigInt> {
    let g1 = match strand {
        0 => 2,
        1 => 4,
        2 => 5,
        _ => return domain(format!("strand {strand} not in 0..=2")),
    };
    if k < -1 {
        return domain(format!("g index {k} < -1"));
    }
    let (mut a, mut b) = (BigInt::from(6 - g1), BigInt::one());
    for _ in -1..k {
        let next = 6 * &b - &a;
        a = b;
        b = next;
    }
    Ok(a)
}

/// `t_i` of the strands: 1, 1, 2.
pub fn third_t(strand: usize) -> Result<BigInt> {
    match strand {
        0 | 1 => Ok(BigInt::one()),
        2 => Ok(BigInt::from(2)),
        _ => domain(format!("strand {strand} not in 0..=2")),
    }
}

/// First valid `k`: strand 2 extends back to `(1,1,1,1,2,+1)` at `k = 0`.
pub fn third_first_k(strand: usize) -> i64 {
    if strand == 2 {
        0
    } else {
        1
    }
}

/// `E_{k,i} = (d, m, g_k, g_{k−1}, t_i, (−1)^{k+i})`.
pub fn third_class(strand: usize, k: i64) -> Result<QuasiPerfect> {
    if k < third_first_k(strand) {
        return domain(format!("strand {strand} starts at k = {}", third_first_k(strand)));
    }
    let eps = if (k + strand as i64) % 2 == 0 { 1 } else { -1 };
    QuasiPerfect::from_ptq(third_g(strand, k)?, third_g(strand, k - 1)?, third_t(strand)?, eps)
}

/// The ascending strands of the staircase at `b = 1/3`.
pub fn third_strand(strand: usize, count: usize) -> Result<Vec<QuasiPerfect>> {
    let k0 = third_first_k(strand);
    (k0..k0 + count as i64).map(|k| third_class(strand, k)).collect()
}

/// `E_i = (d_i, m_i, g_i, g_{i−1}, 2, (−1)^i)`, the strand-2 classes.
pub fn ladder_class(i: i64) -> Result<QuasiPerfect> {
    third_class(2, i)
}

/// `x_{κ+2} = (ν²−2)x_κ − x_{κ−2}`
pub fn two_step_holds(sc: &PreStaircase) -> bool {
    let nu2 = &sc.nu * &sc.nu - 2;
    sc.steps.windows(5).all(|w| {
        let f = |c: &QuasiPerfect| [c.d().clone(), c.m().clone(), c.p().clone(), c.q().clone(), c.t().clone()];
        let (a, b, c) = (f(&w[0]), f(&w[2]), f(&w[4]));
        (0..5).all(|j| c[j] == &nu2 * &b[j] - &a[j])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accum::acc_equation_check;
    use crate::exact::int;
    use crate::symmetry::y;
    use proptest::prelude::*;

    fn q(d: i64, m: i64, p: i64, qq: i64, t: i64, e: i8) -> QuasiPerfect {
        QuasiPerfect::from_i64(d, m, p, qq, t, e).unwrap()
    }

    fn fam(t: &str, base: Base) -> Family {
        make_family(t.parse().unwrap(), base)
    }

    #[test]
    fn recurse_examples() {
        let r = recurse(&[int(1)], &[int(6)], &int(6), 2);
        assert_eq!(r.concat(), [1, 6, 35, 204].map(int));
        let r = recurse(&[int(3)], &[int(3)], &int(2), 3);
        assert!(r.iter().all(|x| x[0] == int(3)));
        let r = recurse(&[1, 1, 2].map(int), &[6, 1, 3].map(int), &int(5), 1);
        assert_eq!(r[2], [29, 4, 13].map(int));
    }

    #[test]
    fn family_examples() {
        assert_eq!(fam("id", Base::U).block(0).unwrap(), q(3, 2, 6, 1, 3, 1));
        assert_eq!(fam("S", Base::U).seed(Dir::Lower), q(2, 0, 5, 1, 2, -1));
        let r = fam("R", Base::U);
        for n in 0..6 {
            assert_eq!(r.block(n).unwrap(), base_block(Base::L, n));
            assert_eq!(sharp(&GroupElem::R, &base_block(Base::U, n)).unwrap(), base_block(Base::L, n));
        }
        // R♯ swaps the seed labels
        assert_eq!(sharp(&GroupElem::R, &base_seed(Base::U, Dir::Lower)).unwrap(), base_seed(Base::L, Dir::Upper));
        assert_eq!(sharp(&GroupElem::R, &base_seed(Base::U, Dir::Upper)).unwrap(), base_seed(Base::L, Dir::Lower));
        assert_eq!(sharp(&GroupElem::S, &base_seed(Base::U, Dir::Lower)).unwrap(), base_seed(Base::L, Dir::Lower));
        assert_eq!(sharp(&GroupElem::S, &base_block(Base::L, 0)).unwrap(), base_block(Base::U, 0));
    }

    #[test]
    fn build_examples() {
        let u = fam("id", Base::U);
        let sc = build_staircase(&u, 1, Dir::Lower, 1).unwrap();
        assert_eq!(sc.steps, vec![q(1, 1, 1, 1, 2, 1), q(3, 2, 6, 1, 3, 1), q(14, 9, 29, 4, 13, 1)]);
        assert_eq!(5 * 14, 2 * 29 + 3 * 4);
        let sc = build_staircase(&u, 1, Dir::Upper, 0).unwrap();
        assert_eq!(sc.steps[1], q(5, 4, 10, 1, 7, 1));
        assert!(build_staircase(&u, 0, Dir::Lower, 3).is_err());
        assert!(build_staircase(&fam("id", Base::L), 0, Dir::Upper, 3).is_err());
        assert_eq!(build_staircase(&fam("id", Base::L), 1, Dir::Upper, 0).unwrap().steps[1], base_block(Base::L, 0));
    }

    #[test]
    fn lower_centers_follow_pattern() {
        let sc = build_staircase(&fam("id", Base::U), 1, Dir::Lower, 5).unwrap();
        let cf = |c: &QuasiPerfect| crate::cfrac::cf_expand(c.p(), c.q()).unwrap().to_string();
        assert_eq!(cf(&sc.steps[2]), "[7;4]");
        assert_eq!(cf(&sc.steps[3]), "[7;3,6]");
        assert_eq!(cf(&sc.steps[4]), "[7;3,7,4]");
    }

    #[test]
    fn limits_of_first_lower_staircase() {
        let sc = build_staircase(&fam("id", Base::U), 1, Dir::Lower, 30).unwrap();
        let ld = limits(&sc).unwrap();
        assert_eq!(ld.z_inf, "7/2+5/6*sqrt(21)".parse().unwrap());
        assert_eq!(ld.b_inf, "11/10-1/10*sqrt(21)".parse().unwrap());
        assert!(acc_equation_check(&ld.b_inf, &ld.z_inf).unwrap());
        let last = sc.steps.last().unwrap();
        let z = last.p().to_string().parse::<f64>().unwrap() / last.q().to_string().parse::<f64>().unwrap();
        assert!((z - ld.z_inf.to_f64()).abs() < 1e-12);
        let lam = &ld.lambda;
        let nu = QuadExt::from_rational(rat_int(&sc.nu));
        assert!((lam * lam - &nu * lam + QuadExt::one()).is_zero());
    }

    #[test]
    fn upper_limit_at_zero() {
        // [7; {5,1}^∞] = 7 + 1/(5 + 1/(1 + 1/(5 + …)))
        let sc = build_staircase(&fam("id", Base::U), 0, Dir::Upper, 12).unwrap();
        let ld = limits(&sc).unwrap();
        // y = [5;1,y] ⇒ y = 5 + y/(y+1) ⇒ y² − 5y − 5 = 0
        let y = QuadExt::new(rat(5, 2), rat(3, 2), &int(5)).unwrap();
        let expect = QuadExt::from_int(7) + y.recip().unwrap();
        assert_eq!(ld.z_inf, expect);
    }

    #[test]
    fn b_limits_of_u_families_exceed_five_elevenths() {
        for n in 0..5 {
            for dir in [Dir::Lower, Dir::Upper] {
                let f = fam("id", Base::U);
                if !f.is_admissible(n, dir) {
                    continue;
                }
                let ld = limits(&build_staircase(&f, n, dir, 2).unwrap()).unwrap();
                assert_eq!(ld.b_inf.checked_cmp(&QuadExt::from_rational(rat(5, 11))).unwrap(), std::cmp::Ordering::Greater);
                assert_eq!(ld.b_inf.checked_cmp(&QuadExt::one()).unwrap(), std::cmp::Ordering::Less);
            }
        }
    }

    fn corpus(imax: u32, nmax: i64, count: usize) -> Vec<PreStaircase> {
        super::corpus(0..=imax, 0..=nmax, count).unwrap()
    }

    #[test]
    fn corpus_invariants() {
        for sc in corpus(4, 6, 10) {
            assert!(sc.compatible(), "{}", sc.label());
            assert!(two_step_holds(&sc), "{}", sc.label());
            for c in &sc.steps {
                assert!(sc.linear_relation(c), "{} {c}", sc.label());
                assert_eq!(c.eps(), sc.eps());
            }
            let ld = limits(&sc).unwrap();
            assert!(acc_equation_check(&ld.b_inf, &ld.z_inf).unwrap(), "{}", sc.label());
            let (lo, hi) = sc.family.limit_interval();
            let z = ld.z_inf.clone();
            if let Point::Finite(lo) = lo {
                assert_eq!(z.checked_cmp(&QuadExt::from_rational(lo)).unwrap(), std::cmp::Ordering::Greater, "{}", sc.label());
            }
            if let Point::Finite(hi) = hi {
                assert_eq!(z.checked_cmp(&QuadExt::from_rational(hi)).unwrap(), std::cmp::Ordering::Less, "{}", sc.label());
            }
        }
    }

    #[test]
    fn determinant_closed_forms() {
        for i in 0..5u32 {
            let e: i64 = if i % 2 == 0 { 1 } else { -1 };
            let ii = i as i64;
            for n in 0..6i64 {
                let cases = [
                    (Base::U, Dir::Lower, -e * (2 * n * y(ii) + y(ii + 1)).to_string().parse::<i64>().unwrap()),
                    (Base::U, Dir::Upper, -e * (2 * n * y(ii + 1) + y(ii + 2)).to_string().parse::<i64>().unwrap()),
                    (Base::L, Dir::Lower, e * (2 * n * y(ii + 1) + y(ii)).to_string().parse::<i64>().unwrap()),
                    (Base::L, Dir::Upper, e * (2 * n * y(ii + 2) + y(ii + 1)).to_string().parse::<i64>().unwrap()),
                ];
                for (base, dir, expect) in cases {
                    let f = make_family(GroupElem::shift_pow(i), base);
                    if f.is_admissible(n, dir) {
                        let sc = build_staircase(&f, n, dir, 0).unwrap();
                        assert_eq!(seed_determinant(&sc), int(expect), "{}", sc.label());
                    }
                }
            }
        }
    }

    #[test]
    fn monotonicity_examples() {
        for n in 1..5 {
            let sc = build_staircase(&fam("id", Base::U), n, Dir::Lower, 0).unwrap();
            assert_eq!(seed_determinant(&sc), int(-1));
            assert_eq!(monotonicity(&sc).unwrap(), Monotonicity::Decreasing);
            let sc = build_staircase(&fam("id", Base::L), n, Dir::Upper, 0).unwrap();
            assert_eq!(monotonicity(&sc).unwrap(), Monotonicity::Increasing);
        }
        let fib = build_staircase(&fam("id", Base::L), 0, Dir::Lower, 3).unwrap();
        assert!(fib.steps.iter().all(|c| c.m().is_zero()));
        assert!(matches!(monotonicity(&fib), Err(Error::Degenerate(_))));
    }

    #[test]
    fn slope_examples() {
        let u = fam("id", Base::U);
        let l = fam("id", Base::L);
        assert_eq!(slope_condition(&build_staircase(&u, 1, Dir::Upper, 2).unwrap()).unwrap(), SlopeVerdict::Strict);
        assert_eq!(slope_condition(&build_staircase(&u, 0, Dir::Upper, 2).unwrap()).unwrap(), SlopeVerdict::Relaxed);
        assert_eq!(slope_condition(&build_staircase(&l, 1, Dir::Upper, 2).unwrap()).unwrap(), SlopeVerdict::Strict);
        assert!(slope_condition(&build_staircase(&u, 1, Dir::Lower, 2).unwrap()).is_err());
    }

    #[test]
    fn liveness_examples() {
        let u = fam("id", Base::U);
        assert_eq!(liveness(&build_staircase(&u, 2, Dir::Lower, 3).unwrap(), true), Liveness::Live);
        assert_eq!(liveness(&build_staircase(&u, 2, Dir::Lower, 3).unwrap(), false), Liveness::Unknown);
        let r = liveness_report(&build_staircase(&u, 0, Dir::Upper, 3).unwrap(), true);
        assert_eq!(r.verdict, Liveness::Unknown);
        assert_eq!(r.slope, Some(SlopeVerdict::Relaxed));
        let mut fake = build_staircase(&u, 2, Dir::Lower, 0).unwrap();
        fake.nu = int(2);
        assert_eq!(liveness(&fake, true), Liveness::Unknown);
    }

    #[test]
    fn shared_second_step() {
        let u = fam("id", Base::U);
        for n in 0..10 {
            let a = build_staircase(&u, n, Dir::Upper, 1).unwrap();
            let b = build_staircase(&u, n + 1, Dir::Lower, 1).unwrap();
            assert_eq!(b.nu, int(2 * n + 5));
            assert_eq!(a.steps[2], b.steps[2]);
        }
    }

    #[test]
    fn third_table() {
        let g: Vec<BigInt> = (-1..=6).map(|k| third_g(2, k).unwrap()).collect();
        assert_eq!(g, [1, 1, 5, 29, 169, 985, 5741, 33461].map(int));
        let cls: Vec<QuasiPerfect> = (0..=6).map(|k| ladder_class(k).unwrap()).collect();
        let m: Vec<BigInt> = cls.iter().map(|c| c.m().clone()).collect();
        let d: Vec<BigInt> = cls.iter().map(|c| c.d().clone()).collect();
        assert_eq!(m, [1, 0, 5, 24, 145, 840, 4901].map(int));
        assert_eq!(d, [1, 2, 13, 74, 433, 2522, 14701].map(int));
        assert_eq!(third_class(0, 1).unwrap(), q(1, 0, 2, 1, 1, -1));
        assert_eq!(third_class(1, 1).unwrap(), q(2, 1, 4, 1, 1, 1));
        assert_eq!(third_class(2, 1).unwrap(), q(2, 0, 5, 1, 2, -1));
        assert!(third_class(0, 0).is_err());
    }

    #[test]
    fn third_strands_alternate_around_one_third() {
        for s in 0..3 {
            for c in third_strand(s, 10).unwrap() {
                let side: BigInt = (BigInt::from(3) * c.m() - c.d()).signum();
                assert_eq!(side, BigInt::from(c.eps()));
                assert_eq!(sharp(&GroupElem::S, &c).unwrap().t(), c.t());
            }
        }
    }

    #[test]
    fn seed_ladder() {
        for i in -1..5i64 {
            let f = make_family(GroupElem::shift_pow((i + 1) as u32), Base::U);
            assert_eq!(f.seed(Dir::Lower), ladder_class(i + 1).unwrap());
            assert_eq!(f.seed(Dir::Upper), ladder_class(i + 2).unwrap().negate());
            if i >= 0 {
                let g = make_family(GroupElem::new(i as u32, true), Base::U);
                assert_eq!(g.seed(Dir::Lower), ladder_class(i + 1).unwrap());
                assert_eq!(g.seed(Dir::Upper), ladder_class(i + 2).unwrap().negate());
            }
        }
    }

    proptest! {
        #[test]
        fn steps_satisfy_identities(i in 0u32..4, delta in any::<bool>(), base in prop_oneof![Just(Base::U), Just(Base::L)],
                                    n in 0i64..8, up in any::<bool>()) {
            let f = make_family(GroupElem::new(i, delta), base);
            let dir = if up { Dir::Upper } else { Dir::Lower };
            prop_assume!(f.is_admissible(n, dir));
            let sc = build_staircase(&f, n, dir, 6).unwrap();
            for c in &sc.steps {
                prop_assert_eq!(SeedTriple::of(c).form(), int(8));
            }
            for w in sc.steps.windows(2) {
                prop_assert_eq!(SeedTriple::of(&w[1]).pair(&SeedTriple::of(&w[0])), 4 * &sc.nu);
            }
        }
    }
}
