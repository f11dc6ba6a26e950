//! Staircase complexes of torus knots `T(p,q)`.
//!
//! The Alexander polynomial of `T(p,q)` is the exact quotient
//!
//! ```text
//! (t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1)) = Σ_{i=0}^{2n} (−1)^i t^{a_i}
//! ```
//!
//! with `a_0 = (p−1)(q−1) > a_1 > … > a_{2n} = 0`. The gap vector
//! `b_i = a_{i−1} − a_i` determines a staircase chain complex whose odd
//! generators map down by `u^{b_i}` and up by `w^{b_{i+1}}`; its two
//! specializations have purely monomial torsion, and the torsion orders are
//! read directly off `b` ([`closed_form_invariants`]):
//!
//! * `t_q  = max(b_1, b_3, …, b_{2n−1})`, which equals `p − 1`;
//! * `t_q'` is the top invariant factor of a bidiagonal presentation
//!   matrix, which reduces to a minimization over prefix/suffix sums of
//!   the gaps. The naive per-step guess `max_i min(b_{2i−1}, b_{2i})` is a
//!   lower bound that adjacent steps can beat by chaining — the smallest
//!   torus example is `T(8,11)`, where the chain raises it from 1 to 2.
//!
//! For `q = pk + 1` the gap vector has the closed form
//! `(j, p−j)` repeated `k` times for each `j = 1, …, p−1`
//! ([`closed_form_b_pk1`]), and there the invariant factors do split step
//! by step, giving `t_q' = ⌊p/2⌋`.

use crate::algebra::PolyUw;
use crate::complex::{FreeComplexUw, Generator};
use crate::error::{Error, Result};

/// Exponent and gap data of a torus-knot staircase.
///
/// Constructed by [`alexander_quotient`], which checks every structural
/// invariant (strict decrease, odd length, gap bounds) before handing the
/// data out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseData {
    pub p: u32,
    pub q: u32,
    /// Exponents `a_0 > a_1 > … > a_{2n} = 0` of the alternating sum.
    pub a: Vec<u32>,
    /// Gaps `b_i = a_{i−1} − a_i`, indexed 1-based in formulas.
    pub b: Vec<u32>,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks the torus parameter preconditions `1 < p < q`, `gcd(p, q) = 1`.
pub fn check_torus_params(p: u32, q: u32) -> Result<()> {
    if !(1 < p && p < q) {
        return Err(Error::Domain(format!("torus parameters must satisfy 1 < p < q, got ({p}, {q})")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::Domain(format!("torus parameters must be coprime, got ({p}, {q})")));
    }
    Ok(())
}

/// Dense integer polynomial product; index = exponent of `t`.
fn poly_mul_z(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `t^n − 1` as a dense coefficient vector.
fn t_power_minus_one(n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n + 1];
    v[0] = -1;
    v[n] = 1;
    v
}

/// Exact division of dense integer polynomials with monic divisor; the
/// remainder must vanish.
fn poly_div_exact_z(num: &[i64], den: &[i64]) -> Result<Vec<i64>> {
    let d_deg = den.len() - 1;
    assert_eq!(den[d_deg], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let n_deg = rem.len() - 1;
    if n_deg < d_deg {
        return Err(Error::Internal("quotient degree underflow".into()));
    }
    let mut quot = vec![0i64; n_deg - d_deg + 1];
    for s in (0..quot.len()).rev() {
        let c = rem[s + d_deg];
        if c == 0 {
            continue;
        }
        quot[s] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[s + j] -= c * dc;
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::Internal("Alexander quotient left a remainder".into()));
    }
    Ok(quot)
}

/// Computes the staircase data of `T(p,q)` by exact polynomial division.
///
/// The division, the strict `±1` alternation of the quotient, and every
/// structural invariant of the result are asserted; a failure there is an
/// internal error since these are theorems for coprime `1 < p < q`.
pub fn alexander_quotient(p: u32, q: u32) -> Result<StaircaseData> {
    check_torus_params(p, q)?;
    let (pu, qu) = (p as usize, q as usize);
    let num = poly_mul_z(&t_power_minus_one(pu * qu), &t_power_minus_one(1));
    let den = poly_mul_z(&t_power_minus_one(pu), &t_power_minus_one(qu));
    let quot = poly_div_exact_z(&num, &den)?;

    // Read the alternating sum top-down: signs must be +1, −1, +1, …
    let mut a = Vec::new();
    let mut expected_sign = 1i64;
    for (exp, &c) in quot.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if c != expected_sign {
            return Err(Error::Internal(format!(
                "Alexander quotient is not strictly alternating: coefficient {c} at t^{exp}"
            )));
        }
        a.push(exp as u32);
        expected_sign = -expected_sign;
    }
    StaircaseData::from_exponents(p, q, a)
}

impl StaircaseData {
    /// Validates exponents against every staircase invariant and fills in
    /// the gap vector.
    fn from_exponents(p: u32, q: u32, a: Vec<u32>) -> Result<Self> {
        let top = (p - 1) * (q - 1);
        let fail = |msg: String| Err(Error::Internal(format!("staircase T({p},{q}): {msg}")));
        if a.len().is_multiple_of(2) {
            return fail(format!("even number of terms ({})", a.len()));
        }
        if a.first() != Some(&top) {
            return fail(format!("leading exponent {:?}, expected {top}", a.first()));
        }
        if a.last() != Some(&0) {
            return fail("trailing exponent is not 0".into());
        }
        if !a.windows(2).all(|w| w[0] > w[1]) {
            return fail("exponents are not strictly decreasing".into());
        }
        let b: Vec<u32> = a.windows(2).map(|w| w[0] - w[1]).collect();
        if b.len() >= 2 {
            let (last, prev) = (b[b.len() - 1], b[b.len() - 2]);
            if (prev, last) != (p - 1, 1) {
                return fail(format!("final gaps ({prev}, {last}), expected ({}, 1)", p - 1));
            }
        }
        if let Some(&big) = b.iter().find(|&&g| g > p - 1) {
            return fail(format!("gap {big} exceeds p − 1 = {}", p - 1));
        }
        Ok(StaircaseData { p, q, a, b })
    }

    /// Number of odd-index steps (the staircase has `2n + 1` generators).
    pub fn n(&self) -> usize {
        self.b.len() / 2
    }
}

/// Closed-form gap vector of `T(p, pk+1)`: for each `j = 1, …, p−1` the
/// pair `(j, p−j)` repeated `k` times.
pub fn closed_form_b_pk1(p: u32, k: u32) -> Result<Vec<u32>> {
    if p < 2 || k < 1 {
        return Err(Error::Domain(format!("closed form requires p >= 2 and k >= 1, got ({p}, {k})")));
    }
    let mut b = Vec::with_capacity(2 * (p as usize - 1) * k as usize);
    for j in 1..p {
        for _ in 0..k {
            b.push(j);
            b.push(p - j);
        }
    }
    Ok(b)
}

/// Torsion invariants `(t_q, t_q')` straight from a gap vector of even
/// length `2n`, with no chain complexes or matrix reduction involved.
///
/// Write `α_j = b_{2j−1}` and `β_j = b_{2j}`. The `w → 0` homology is
/// presented by `diag(u^{α_1}, …, u^{α_n})`, so `t_q = max α_j`. The
/// `w → u` homology is presented by the bidiagonal matrix whose column `j`
/// is `u^{α_j} e_{j−1} + u^{β_j} e_j`, and every nonzero minor of that
/// matrix is a single monomial: a choice of `k` columns splits into runs,
/// each run of length `ℓ` touches `ℓ + 1` rows of which exactly one is
/// omitted, and the omission forces each column left of it to contribute
/// its `α` and each column right of it its `β`. The k-th determinantal
/// divisor is therefore `u^{γ_k}` with
///
/// ```text
/// γ_k = min over k-column choices of Σ_runs (α-prefix + β-suffix),
/// ```
///
/// and the largest invariant factor — `t_q'` — is `γ_n − γ_{n−1}`. For
/// `γ_n` the single run is everything and only the split position varies;
/// for `γ_{n−1}` one column is dropped and the two remaining runs split
/// independently, which prefix/suffix minima make an `O(n)` scan.
pub fn closed_form_invariants(b: &[u32]) -> Result<(u32, u32)> {
    if !b.len().is_multiple_of(2) {
        return Err(Error::Domain(format!("gap vector must have even length, got {}", b.len())));
    }
    let n = b.len() / 2;
    if n == 0 {
        return Ok((0, 0));
    }
    let alpha: Vec<u64> = b.iter().step_by(2).map(|&g| u64::from(g)).collect();
    let beta: Vec<u64> = b.iter().skip(1).step_by(2).map(|&g| u64::from(g)).collect();
    let tq = *alpha.iter().max().expect("n > 0") as u32;

    // a_sum[r] = Σ_{j ≤ r} α_j and b_sum[r] = Σ_{j > r} β_j, so that
    // m[r] = a_sum[r] + b_sum[r] is the cost of the full run split at r.
    let mut a_sum = vec![0u64; n + 1];
    let mut b_sum = vec![0u64; n + 1];
    for j in 1..=n {
        a_sum[j] = a_sum[j - 1] + alpha[j - 1];
    }
    for j in (0..n).rev() {
        b_sum[j] = b_sum[j + 1] + beta[j];
    }
    let m: Vec<u64> = (0..=n).map(|r| a_sum[r] + b_sum[r]).collect();
    let gamma_n = *m.iter().min().expect("nonempty");

    // pref[x] = min m[0..=x], suf[x] = min m[x..=n]; dropping column c
    // leaves the runs [1, c−1] and [c+1, n] with costs
    // pref[c−1] − b_sum[c−1] and suf[c] − a_sum[c].
    let mut pref = m.clone();
    for r in 1..=n {
        pref[r] = pref[r].min(pref[r - 1]);
    }
    let mut suf = m.clone();
    for r in (0..n).rev() {
        suf[r] = suf[r].min(suf[r + 1]);
    }
    let gamma_n1 = (1..=n)
        .map(|c| (pref[c - 1] - b_sum[c - 1]) + (suf[c] - a_sum[c]))
        .min()
        .expect("n > 0");

    Ok((tq, (gamma_n - gamma_n1) as u32))
}

/// Builds the staircase chain complex of a torus knot: generators
/// `x_0, …, x_{2n}` with `d(x_i) = u^{b_i} x_{i−1} + w^{b_{i+1}} x_{i+1}`
/// for odd `i` and `d(x_i) = 0` for even `i`.
///
/// Alexander gradings are the exponents recentered to be symmetric about
/// zero; Maslov gradings start at `maslov(x_0) = 0` and propagate along the
/// differential so that every arrow drops Maslov by exactly one.
pub fn staircase_complex(data: &StaircaseData) -> FreeComplexUw {
    let shift = ((data.p - 1) * (data.q - 1) / 2) as i64;
    let mut generators = Vec::with_capacity(data.a.len());
    let mut maslov = 0i64;
    for (i, &ae) in data.a.iter().enumerate() {
        if i > 0 {
            maslov += if i % 2 == 1 { 1 - 2 * data.b[i - 1] as i64 } else { -1 };
        }
        generators.push(Generator::new(format!("x{i}"), maslov, ae as i64 - shift));
    }
    let mut edges = Vec::new();
    for i in (1..data.a.len()).step_by(2) {
        edges.push((
            format!("x{i}"),
            format!("x{}", i - 1),
            PolyUw::monomial(data.b[i - 1], 0),
        ));
        edges.push((format!("x{i}"), format!("x{}", i + 1), PolyUw::monomial(0, data.b[i])));
    }
    FreeComplexUw::new(format!("T({},{})", data.p, data.q), 1, 1, generators, edges)
        .expect("staircase construction is structurally sound")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{t34, trefoil};
    use crate::torsion::invariants_of;

    #[test]
    fn alexander_quotient_trefoil() {
        let s = alexander_quotient(2, 3).unwrap();
        assert_eq!(s.a, vec![2, 1, 0]);
        assert_eq!(s.b, vec![1, 1]);
        assert_eq!(s.n(), 1);
    }

    #[test]
    fn alexander_quotient_t34_and_t35() {
        let s = alexander_quotient(3, 4).unwrap();
        assert_eq!(s.a, vec![6, 5, 3, 1, 0]);
        assert_eq!(s.b, vec![1, 2, 2, 1]);

        let s = alexander_quotient(3, 5).unwrap();
        assert_eq!(s.a, vec![8, 7, 5, 4, 3, 1, 0]);
        assert_eq!(s.b, vec![1, 2, 1, 1, 2, 1]);
    }

    #[test]
    fn alexander_quotient_t67_matches_closed_form() {
        let s = alexander_quotient(6, 7).unwrap();
        assert_eq!(s.b, closed_form_b_pk1(6, 1).unwrap());
        assert_eq!(s.b, vec![1, 5, 2, 4, 3, 3, 4, 2, 5, 1]);
    }

    #[test]
    fn alexander_quotient_rejects_bad_parameters() {
        assert!(alexander_quotient(2, 4).is_err());
        assert!(alexander_quotient(1, 5).is_err());
        assert!(alexander_quotient(4, 3).is_err());
        assert!(alexander_quotient(3, 3).is_err());
    }

    #[test]
    fn reconstruction_multiplies_back() {
        // Σ (−1)^i t^{a_i} · (t^p − 1)(t^q − 1) = (t^{pq} − 1)(t − 1).
        for (p, q) in [(2, 3), (3, 5), (4, 7), (5, 8)] {
            let s = alexander_quotient(p, q).unwrap();
            let mut quot = vec![0i64; s.a[0] as usize + 1];
            for (i, &e) in s.a.iter().enumerate() {
                quot[e as usize] = if i % 2 == 0 { 1 } else { -1 };
            }
            let den = poly_mul_z(&t_power_minus_one(p as usize), &t_power_minus_one(q as usize));
            let num =
                poly_mul_z(&t_power_minus_one((p * q) as usize), &t_power_minus_one(1));
            assert_eq!(poly_mul_z(&quot, &den), num);
        }
    }

    #[test]
    fn closed_form_b_examples() {
        assert_eq!(closed_form_b_pk1(6, 1).unwrap(), vec![1, 5, 2, 4, 3, 3, 4, 2, 5, 1]);
        assert_eq!(closed_form_b_pk1(3, 2).unwrap(), vec![1, 2, 1, 2, 2, 1, 2, 1]);
        assert_eq!(closed_form_b_pk1(2, 1).unwrap(), vec![1, 1]);
        assert!(closed_form_b_pk1(1, 1).is_err());
        assert!(closed_form_b_pk1(4, 0).is_err());
    }

    #[test]
    fn closed_form_b_matches_division() {
        for p in 2..=8u32 {
            for k in 1..=2u32 {
                let s = alexander_quotient(p, p * k + 1).unwrap();
                assert_eq!(s.b, closed_form_b_pk1(p, k).unwrap(), "T({p},{})", p * k + 1);
            }
        }
    }

    #[test]
    fn closed_form_invariants_examples() {
        assert_eq!(closed_form_invariants(&[1, 1]).unwrap(), (1, 1));
        assert_eq!(closed_form_invariants(&[1, 2, 2, 1]).unwrap(), (2, 1));
        assert_eq!(closed_form_invariants(&[1, 5, 2, 4, 3, 3, 4, 2, 5, 1]).unwrap(), (5, 3));
        assert_eq!(closed_form_invariants(&[]).unwrap(), (0, 0));
        assert!(closed_form_invariants(&[1, 2, 1]).is_err());
    }

    #[test]
    fn closed_form_detects_chained_torsion() {
        // The per-step minima of (2,1,1,2) are both 1, but the two steps
        // share their middle generator: eliminating it leaves a torsion
        // element of order 2. Flipping the gaps to (1,2,2,1) decouples the
        // steps and the maximum stays at 1.
        assert_eq!(closed_form_invariants(&[2, 1, 1, 2]).unwrap(), (2, 2));
        assert_eq!(closed_form_invariants(&[1, 2, 2, 1]).unwrap(), (2, 1));
    }

    #[test]
    fn t8_11_chains_beyond_the_per_step_minimum() {
        // Smallest torus case where adjacent steps chain: every per-step
        // minimum of the gap vector is 1, yet tq' = 2. The pipeline and the
        // closed form must agree on it.
        let data = alexander_quotient(8, 11).unwrap();
        assert_eq!(
            data.b,
            vec![
                1, 7, 1, 2, 1, 4, 1, 2, 1, 2, 1, 1, 1, 2, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 2, 1,
                2, 1, 1, 1, 2, 1, 2, 1, 4, 1, 2, 1, 7, 1
            ]
        );
        let per_step = data.b.chunks_exact(2).map(|s| s[0].min(s[1])).max().unwrap();
        assert_eq!(per_step, 1);
        let (tq, tqp) = closed_form_invariants(&data.b).unwrap();
        assert_eq!((tq, tqp), (7, 2));
        let inv = invariants_of(&staircase_complex(&data)).unwrap();
        assert_eq!((inv.tq(), inv.tqp()), (7, 2));
    }

    #[test]
    fn staircase_complex_matches_fixtures() {
        assert_eq!(staircase_complex(&alexander_quotient(2, 3).unwrap()), trefoil());
        assert_eq!(staircase_complex(&alexander_quotient(3, 4).unwrap()), t34());
    }

    #[test]
    fn bundled_fixture_files_match_generated_complexes() {
        // The JSON fixtures under data/ are regenerable; pin them byte for
        // byte so a serialization change cannot drift past them silently.
        for (p, q, text) in [
            (2, 3, include_str!("../data/t23.json")),
            (3, 4, include_str!("../data/t34.json")),
            (3, 5, include_str!("../data/t35.json")),
            (6, 7, include_str!("../data/t67.json")),
        ] {
            let c = staircase_complex(&alexander_quotient(p, q).unwrap());
            assert_eq!(c.to_json(), text, "T({p},{q}) fixture drifted");
            assert_eq!(FreeComplexUw::from_json(text).unwrap(), c, "T({p},{q})");
        }
    }

    #[test]
    fn staircase_complexes_validate() {
        for (p, q) in [(2, 5), (3, 7), (4, 5), (5, 6), (6, 7)] {
            let c = staircase_complex(&alexander_quotient(p, q).unwrap());
            assert!(c.validate().is_valid(), "T({p},{q}) failed validation");
        }
    }

    #[test]
    fn pipeline_agrees_with_closed_form_on_small_grid() {
        for p in 2..=5u32 {
            for q in (p + 1)..=9u32 {
                if gcd(p, q) != 1 {
                    continue;
                }
                let s = alexander_quotient(p, q).unwrap();
                let (tq, tqp) = closed_form_invariants(&s.b).unwrap();
                assert_eq!(tq, p - 1, "T({p},{q})");
                let inv = invariants_of(&staircase_complex(&s)).unwrap();
                assert_eq!((inv.tq(), inv.tqp()), (tq, tqp), "T({p},{q})");
                assert_eq!(inv.w_zero.free_rank, 1, "T({p},{q})");
                assert_eq!(inv.w_equals_u.free_rank, 1, "T({p},{q})");
            }
        }
    }
}
