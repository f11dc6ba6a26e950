//! The rational-unknotting step count `k(p, q)` for torus knots.
//!
//! A single replacement step on coprime `1 < p < q` finds the least
//! `i ≤ p/2` with `i·q ≡ ±1 (mod p)`, sets `j = (i·q ∓ 1)/p`, and passes to
//! the normalized pair `(min, max)` of `(|p − 2i|, |q − 2j|)`. Iterating
//! until `p ∈ {0, 1}` takes `k(p, q)` steps; `k` is bounded by `⌊p/2⌋` and
//! every step preserves coprimality while strictly decreasing `p` — both
//! facts are asserted at runtime rather than assumed.

use serde::Serialize;

use crate::error::{Error, Result};

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Outcome of a single replacement step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Least index with `i·q ≡ ±1 (mod p)`, searched over `1 ≤ i ≤ p/2`.
    pub i: u32,
    /// Companion index: `i·q = j·p ± 1`.
    pub j: u32,
    /// `+1` or `−1`; when both congruences hold at the minimal `i` (only
    /// possible for `p ≤ 2`), `+1` is chosen.
    pub sign: i8,
    /// The normalized successor pair.
    pub next: (u32, u32),
}

/// One step of the recursion on coprime `1 < p < q`.
pub fn step(p: u32, q: u32) -> Result<Step> {
    check_params(p, q)?;
    for i in 1..=p / 2 {
        let iq = u64::from(i) * u64::from(q);
        let r = (iq % u64::from(p)) as u32;
        let sign: i8 = if r == 1 {
            1
        } else if r == p - 1 {
            -1
        } else {
            continue;
        };
        let j = if sign > 0 { (iq - 1) / u64::from(p) } else { (iq + 1) / u64::from(p) } as u32;
        let p_next = (i64::from(p) - 2 * i64::from(i)).unsigned_abs() as u32;
        let q_next = (i64::from(q) - 2 * i64::from(j)).unsigned_abs() as u32;
        let next = (p_next.min(q_next), p_next.max(q_next));
        return Ok(Step { i, j, sign, next });
    }
    Err(Error::Internal(format!(
        "no replacement index found for coprime pair ({p}, {q})"
    )))
}

/// One entry of a [`StepTrace`]: the pair before the step plus the chosen
/// indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub p: u32,
    pub q: u32,
    pub i: u32,
    pub j: u32,
    pub sign: i8,
}

/// The full recursion transcript; `k` is the number of steps taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub steps: Vec<StepRecord>,
    /// Final pair, with first coordinate 0 or 1.
    pub terminal: (u32, u32),
}

impl StepTrace {
    pub fn k(&self) -> usize {
        self.steps.len()
    }
}

fn check_params(p: u32, q: u32) -> Result<()> {
    if !(1 < p && p < q) {
        return Err(Error::Domain(format!(
            "recursion parameters must satisfy 1 < p < q, got ({p}, {q})"
        )));
    }
    if gcd(p, q) != 1 {
        return Err(Error::Domain(format!("recursion parameters must be coprime, got ({p}, {q})")));
    }
    Ok(())
}

/// Runs the recursion to termination and returns the transcript.
///
/// Terminal inputs (`p = 1` with any `q ≥ 1`, or the unknot pair `(0, 1)`)
/// return an empty trace with `k = 0`.
pub fn kpq(p: u32, q: u32) -> Result<StepTrace> {
    if p <= 1 {
        let coprime_terminal = (p == 1 && q >= 1) || (p == 0 && q == 1);
        if !coprime_terminal {
            return Err(Error::Domain(format!(
                "terminal pair must be (1, q) or (0, 1), got ({p}, {q})"
            )));
        }
        return Ok(StepTrace { steps: vec![], terminal: (p, q) });
    }
    check_params(p, q)?;
    let (mut p, mut q) = (p, q);
    let mut steps = Vec::new();
    while p > 1 {
        let s = step(p, q)?;
        steps.push(StepRecord { p, q, i: s.i, j: s.j, sign: s.sign });
        let (np, nq) = s.next;
        assert!(np < p, "recursion failed to decrease p at ({p}, {q})");
        if np > 1 {
            assert!(
                np < nq && gcd(np, nq) == 1,
                "recursion broke coprimality at ({p}, {q}) -> ({np}, {nq})"
            );
        }
        (p, q) = (np, nq);
    }
    assert!(
        steps.len() <= steps[0].p as usize / 2,
        "recursion exceeded the floor(p/2) bound"
    );
    Ok(StepTrace { steps, terminal: (p, q) })
}
