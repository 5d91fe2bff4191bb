//! Cremona moves and reduction of integer classes `(d; n₀, n₁, …)`.
//!
//! Coefficient indices are 0-based and include the `m` slot, so in
//! `to_vector(c)` index 0 is `m` and indices `1..` are the weights.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cfrac::weight_expansion;
use crate::classes::{ClassVector, QuasiPerfect};
use crate::error::{domain, Result};
use crate::symmetry::{sharp, GroupElem};

/// `c_{xyz}`: `δ = d − n_x − n_y − n_z` is added to `d`, `n_x`, `n_y`, `n_z`.
pub fn move_xyz(v: &ClassVector, x: usize, y: usize, z: usize) -> Result<ClassVector> {
    let len = v.coeffs.len();
    if x == y || y == z || x == z {
        return domain(format!("move indices ({x},{y},{z}) collide"));
    }
    if x >= len || y >= len || z >= len {
        return domain(format!("move indices ({x},{y},{z}) out of range for {len} coefficients"));
    }
    let delta = delta(v, x, y, z);
    let mut out = v.clone();
    out.d += &delta;
    for i in [x, y, z] {
        out.coeffs[i] += &delta;
    }
    Ok(out)
}

fn delta(v: &ClassVector, x: usize, y: usize, z: usize) -> BigInt {
    &v.d - &v.coeffs[x] - &v.coeffs[y] - &v.coeffs[z]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exceptional,
    NotExceptional,
    BudgetExceeded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Exceptional => "Exceptional",
            Verdict::NotExceptional => "NotExceptional",
            Verdict::BudgetExceeded => "BudgetExceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub indices: (usize, usize, usize),
    pub delta: BigInt,
    pub result: ClassVector,
    /// Positions of the coefficients in descending order before the move.
    pub order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: ClassVector,
    pub moves: Vec<MoveRecord>,
    pub verdict: Verdict,
    pub note: String,
}

impl ReductionTrace {
    pub fn is_exceptional(&self) -> bool {
        self.verdict == Verdict::Exceptional
    }

    pub fn final_vector(&self) -> &ClassVector {
        self.moves.last().map(|m| &m.result).unwrap_or(&self.initial)
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.initial)?;
        for (k, m) in self.moves.iter().enumerate() {
            let (x, y, z) = m.indices;
            writeln!(f, "{:>4}: c_{{{x},{y},{z}}} delta={} -> {}", k + 1, m.delta, m.result)?;
        }
        write!(f, "verdict {} ({})", self.verdict, self.note)
    }
}

pub fn default_budget(v: &ClassVector) -> usize {
    10 * v.coeffs.len().max(1)
}

/// Repeatedly applies the move on the three largest coefficients while `δ < 0`.
pub fn reduce(v: &ClassVector, budget: usize) -> ReductionTrace {
    let mut trace = ReductionTrace { initial: v.clone(), moves: Vec::new(), verdict: Verdict::NotExceptional, note: String::new() };
    if !v.chern_ok() || !v.self_intersection_ok() {
        trace.note = "sum n != 3d-1 or sum n^2 != d^2+1".into();
        return trace;
    }
    let mut cur = v.clone();
    while cur.coeffs.len() < 3 {
        cur.coeffs.push(BigInt::zero());
    }
    loop {
        if cur.is_terminal() {
            trace.verdict = Verdict::Exceptional;
            trace.note = "reached (0; -1, 0, ..., 0)".into();
            return trace;
        }
        if cur.d.is_negative() || cur.coeffs.iter().any(|c| c.is_negative()) {
            trace.note = "negative degree or coefficient".into();
            return trace;
        }
        let mut order: Vec<usize> = (0..cur.coeffs.len()).collect();
        order.sort_by(|&a, &b| cur.coeffs[b].cmp(&cur.coeffs[a]));
        let (x, y, z) = (order[0], order[1], order[2]);
        let dl = delta(&cur, x, y, z);
        if !dl.is_negative() {
            trace.note = format!("delta = {dl} >= 0 with d = {}", cur.d);
            return trace;
        }
        if trace.moves.len() >= budget {
            trace.verdict = Verdict::BudgetExceeded;
            trace.note = format!("budget of {budget} moves exhausted");
            return trace;
        }
        cur = move_xyz(&cur, x, y, z).expect("distinct in-range indices");
        trace.moves.push(MoveRecord { indices: (x, y, z), delta: dl, result: cur.clone(), order });
    }
}

pub fn reduce_default(v: &ClassVector) -> ReductionTrace {
    reduce(v, default_budget(v))
}

/// Certifies a geometric class as exceptional.
pub fn is_perfect(c: &QuasiPerfect) -> Result<bool> {
    let v = crate::classes::to_vector(c)?;
    Ok(reduce_default(&v).is_exceptional())
}

fn apply_chain(mut v: ClassVector, chain: &[(usize, usize, usize)]) -> Result<ClassVector> {
    for &(x, y, z) in chain {
        v = move_xyz(&v, x, y, z)?;
    }
    Ok(v)
}

fn weights(p: &BigInt, q: &BigInt) -> Result<Vec<BigInt>> {
    Ok(weight_expansion(p, q)?.entries())
}

/// Replays `c_{367}c_{345}c_{127}c_{456}c_{123}` (1-based) on the head
/// `(D; Q,Q,Q,Q,Q, M, P−5Q)` of `S^♯(c)` and checks it becomes `(d; 0,0,q,0,0,0,m)`,
/// with matching tails `W(P/Q) = (Q×5, P−5Q) ⧺ T` and `W(p/q) = (q) ⧺ T`.
pub fn verify_shift_equivalence(c: &QuasiPerfect) -> Result<bool> {
    if !c.is_geometric() || c.p() <= c.q() {
        return domain(format!("{c} is not a geometric class with p > q"));
    }
    let s = sharp(&GroupElem::S, c)?;
    let (dd, mm, pp, qq) = (s.d(), s.m(), s.p(), s.q());
    let mut head = vec![qq.clone(); 5];
    head.push(mm.clone());
    head.push(pp - 5 * qq);
    let chain = [(0, 1, 2), (3, 4, 5), (0, 1, 6), (2, 3, 4), (2, 5, 6)];
    let out = apply_chain(ClassVector::new(dd.clone(), head.clone()), &chain)?;
    let z = BigInt::zero();
    let target = vec![z.clone(), z.clone(), c.q().clone(), z.clone(), z.clone(), z, c.m().clone()];
    let heads_match = out.d == *c.d() && out.coeffs == target;
    let w_big = weights(pp, qq)?;
    let w_small = weights(c.p(), c.q())?;
    let tails_match = w_big.len() >= 6 && w_big[..6] == head[..5].iter().chain([&head[6]]).cloned().collect::<Vec<_>>()
        && w_small[0] == *c.q()
        && w_big[6..] == w_small[1..];
    Ok(heads_match && tails_match)
}

fn sorted(mut v: Vec<BigInt>) -> Vec<BigInt> {
    v.sort();
    v
}

/// Replays `c_{123}c_{456}` on `(D; M, Q×6)` of `R^♯(c)` and `c_{012}c_{034}c_{156}`
/// on `(d; m, q×6)` of `c`; the results must agree up to reordering and the
/// weight tails after the six leading entries must coincide.
pub fn verify_reflection_equivalence(c: &QuasiPerfect) -> Result<bool> {
    if !c.is_geometric() || c.eps() != 1 || c.p() <= &(7 * c.q()) {
        return domain(format!("{c} needs p/q > 7 and eps = +1"));
    }
    let r = sharp(&GroupElem::R, c)?;
    let big = std::iter::once(r.m().clone()).chain(std::iter::repeat_n(r.q().clone(), 6)).collect();
    let big = apply_chain(ClassVector::new(r.d().clone(), big), &[(1, 2, 3), (4, 5, 6)])?;
    let small = std::iter::once(c.m().clone()).chain(std::iter::repeat_n(c.q().clone(), 6)).collect();
    let small = apply_chain(ClassVector::new(c.d().clone(), small), &[(0, 1, 2), (0, 3, 4), (1, 5, 6)])?;
    let heads_match = big.d == small.d && sorted(big.coeffs) == sorted(small.coeffs);
    let w_big = weights(r.p(), r.q())?;
    let w_small = weights(c.p(), c.q())?;
    let tails_match = w_big.len() >= 6
        && w_big[..6].iter().all(|x| x == r.q())
        && w_small[..6].iter().all(|x| x == c.q())
        && w_big[6..] == w_small[6..];
    Ok(heads_match && tails_match)
}
