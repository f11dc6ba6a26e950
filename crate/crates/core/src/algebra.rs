//! Exact polynomial arithmetic: `F₂[u,w]`, `F₂[u]`, and integer Laurent
//! polynomials in `q`, `t`.
//!
//! Polynomials over `F₂` are stored as the *set* of their monomials: a
//! coefficient is either present or absent, addition is symmetric
//! difference, and the zero polynomial is the empty set. [`PolyU`]
//! additionally bit-packs the coefficient set for fast division inside the
//! matrix kernels.
//!
//! [`LaurentQt`] carries exact `i64` coefficients. Every coefficient
//! operation is overflow-checked and panics rather than wraps; the CLI maps
//! such panics to its "internal assertion" exit code. The same policy
//! applies to exponent arithmetic in [`PolyUw::mul`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

// ---------------------------------------------------------------------------
// Monomials and polynomials in F₂[u, w]
// ---------------------------------------------------------------------------

/// A monomial `u^a w^b` with coefficient 1.
///
/// The derived ordering is lexicographic on `(u, w)`; this is the canonical
/// term order used everywhere a polynomial is iterated or serialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoUw {
    pub u: u32,
    pub w: u32,
}

impl MonoUw {
    pub fn new(u: u32, w: u32) -> Self {
        MonoUw { u, w }
    }
}

impl std::ops::Mul for MonoUw {
    type Output = MonoUw;

    /// Product of two monomials; panics if an exponent leaves `u32` range.
    fn mul(self, rhs: Self) -> Self {
        let u = self.u.checked_add(rhs.u).expect("u-exponent overflow");
        let w = self.w.checked_add(rhs.w).expect("w-exponent overflow");
        MonoUw { u, w }
    }
}

impl fmt::Display for MonoUw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u, self.w) {
            (0, 0) => write!(f, "1"),
            _ => {
                let mut first = true;
                for (sym, exp) in [("u", self.u), ("w", self.w)] {
                    if exp == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    if exp == 1 {
                        write!(f, "{sym}")?;
                    } else {
                        write!(f, "{sym}^{exp}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// A polynomial in `F₂[u, w]`: a finite set of monomials.
///
/// Addition toggles membership (characteristic 2), so the representation is
/// always canonical — no duplicate monomials, no explicit coefficients.
///
/// Serializes as a JSON array of `{"u": a, "w": b}` objects in canonical
/// `(u, w)` order; deserialization rejects duplicate monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyUw {
    terms: BTreeSet<MonoUw>,
}

impl PolyUw {
    pub fn zero() -> Self {
        PolyUw::default()
    }

    pub fn one() -> Self {
        PolyUw::monomial(0, 0)
    }

    /// The single monomial `u^a w^b`.
    pub fn monomial(u: u32, w: u32) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(MonoUw::new(u, w));
        PolyUw { terms }
    }

    /// Builds a polynomial from monomials, toggling repeated entries
    /// (so a monomial listed twice cancels).
    pub fn from_monomials<I: IntoIterator<Item = MonoUw>>(monos: I) -> Self {
        let mut p = PolyUw::zero();
        for m in monos {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Monomials in canonical `(u, w)` order.
    pub fn terms(&self) -> impl Iterator<Item = MonoUw> + '_ {
        self.terms.iter().copied()
    }

    pub fn contains(&self, m: MonoUw) -> bool {
        self.terms.contains(&m)
    }

    /// Adds the monomial `m` (characteristic 2: removes it if present).
    pub fn toggle(&mut self, m: MonoUw) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Sum (= difference) in `F₂[u, w]`.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut sum = self.clone();
        for m in rhs.terms() {
            sum.toggle(m);
        }
        sum
    }

    /// Product in `F₂[u, w]`; panics on exponent overflow.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut prod = PolyUw::zero();
        for a in self.terms() {
            for b in rhs.terms() {
                prod.toggle(a * b);
            }
        }
        prod
    }
}

impl fmt::Display for PolyUw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for PolyUw {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for m in self.terms() {
            seq.serialize_element(&m)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PolyUw {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let monos = Vec::<MonoUw>::deserialize(deserializer)?;
        let mut terms = BTreeSet::new();
        for m in monos {
            if !terms.insert(m) {
                return Err(D::Error::custom(format!("duplicate monomial {m}")));
            }
        }
        Ok(PolyUw { terms })
    }
}

// ---------------------------------------------------------------------------
// Bit-packed polynomials in F₂[u]
// ---------------------------------------------------------------------------

/// A polynomial in `F₂[u]`, bit-packed: bit `e` of the word vector is the
/// coefficient of `u^e`. The top word is always nonzero (canonical form).
///
/// `F₂[u]` is Euclidean; [`PolyU::div_rem`] is exact long division and is
/// the workhorse of the Hermite/Smith reductions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyU {
    words: Vec<u64>,
}

impl PolyU {
    pub fn zero() -> Self {
        PolyU::default()
    }

    pub fn one() -> Self {
        PolyU::monomial(0)
    }

    /// The monomial `u^exp`.
    pub fn monomial(exp: usize) -> Self {
        let mut words = vec![0u64; exp / 64 + 1];
        words[exp / 64] = 1 << (exp % 64);
        PolyU { words }
    }

    /// Builds a polynomial from a set of exponents (duplicates cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = PolyU::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    fn toggle(&mut self, exp: usize) {
        let word = exp / 64;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] ^= 1 << (exp % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Degree, or `None` for the zero polynomial (degree "minus infinity").
    pub fn degree(&self) -> Option<usize> {
        self.words
            .last()
            .map(|&hi| (self.words.len() - 1) * 64 + (63 - hi.leading_zeros() as usize))
    }

    /// `Some(e)` if the polynomial is exactly the monomial `u^e`.
    pub fn as_monomial(&self) -> Option<usize> {
        let bits: u32 = self.words.iter().map(|w| w.count_ones()).sum();
        if bits == 1 {
            self.degree()
        } else {
            None
        }
    }

    /// Exponents with coefficient 1, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut exps = Vec::new();
        for (i, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                exps.push(i * 64 + b);
                bits &= bits - 1;
            }
        }
        exps
    }

    /// Sum (= difference) in `F₂[u]`.
    pub fn add(&self, rhs: &Self) -> Self {
        let mut sum = self.clone();
        sum.add_assign(rhs);
        sum
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        if rhs.words.len() > self.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        self.trim();
    }

    /// Adds `rhs · u^shift` in place (carry-less shift-and-xor).
    pub fn add_shifted_assign(&mut self, rhs: &Self, shift: usize) {
        if rhs.is_zero() {
            return;
        }
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        let needed = rhs.words.len() + word_shift + 1;
        if needed > self.words.len() {
            self.words.resize(needed, 0);
        }
        for (i, &w) in rhs.words.iter().enumerate() {
            self.words[i + word_shift] ^= w << bit_shift;
            if bit_shift != 0 {
                self.words[i + word_shift + 1] ^= w >> (64 - bit_shift);
            }
        }
        self.trim();
    }

    /// Product in `F₂[u]`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut prod = PolyU::zero();
        for e in self.exponents() {
            prod.add_shifted_assign(rhs, e);
        }
        prod
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient · divisor + remainder` and
    /// `deg remainder < deg divisor`. The divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> crate::error::Result<(Self, Self)> {
        let d_deg = divisor
            .degree()
            .ok_or_else(|| crate::error::Error::Domain("division by zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quot = PolyU::zero();
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let shift = r_deg - d_deg;
            rem.add_shifted_assign(divisor, shift);
            quot.toggle(shift);
        }
        Ok((quot, rem))
    }

    /// Whether `self` divides `other` exactly (the zero polynomial divides
    /// only itself).
    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        let (_, rem) = other.div_rem(self).expect("nonzero divisor");
        rem.is_zero()
    }
}

impl fmt::Display for PolyU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let exps = self.exponents();
        for (i, e) in exps.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "u")?,
                _ => write!(f, "u^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Integer Laurent polynomials in q, t
// ---------------------------------------------------------------------------

/// A Laurent polynomial in `q` and `t` with exact `i64` coefficients.
///
/// Terms are keyed by `(t, q)`; that ordering is the canonical term order
/// for iteration, display, and serialization. Zero coefficients are never
/// stored. All coefficient arithmetic is overflow-checked and panics on
/// overflow rather than wrapping.
///
/// Serializes as a JSON array of `{"q": a, "t": b, "c": n}` objects in
/// canonical order; deserialization rejects duplicate exponent pairs and
/// explicit zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentQt {
    terms: BTreeMap<(i64, i64), i64>,
}

fn cadd(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("coefficient overflow in q,t arithmetic")
}

fn cmul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("coefficient overflow in q,t arithmetic")
}

impl LaurentQt {
    pub fn zero() -> Self {
        LaurentQt::default()
    }

    pub fn one() -> Self {
        LaurentQt::term(0, 0, 1)
    }

    /// The single term `c · q^q_exp t^t_exp` (zero `c` gives the zero
    /// polynomial).
    pub fn term(q_exp: i64, t_exp: i64, c: i64) -> Self {
        let mut p = LaurentQt::zero();
        p.add_term(q_exp, t_exp, c);
        p
    }

    /// Builds a polynomial from `(q_exp, t_exp, coefficient)` triples,
    /// summing repeats.
    pub fn from_terms(terms: &[(i64, i64, i64)]) -> Self {
        let mut p = LaurentQt::zero();
        for &(q, t, c) in terms {
            p.add_term(q, t, c);
        }
        p
    }

    /// The binomial `1 + qt`.
    pub fn one_plus_qt() -> Self {
        LaurentQt::from_terms(&[(0, 0, 1), (1, 1, 1)])
    }

    /// Adds `c · q^q_exp t^t_exp` in place.
    pub fn add_term(&mut self, q_exp: i64, t_exp: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry((t_exp, q_exp)).or_insert(0);
        *entry = cadd(*entry, c);
        if *entry == 0 {
            self.terms.remove(&(t_exp, q_exp));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^q_exp t^t_exp` (zero if absent).
    pub fn coeff(&self, q_exp: i64, t_exp: i64) -> i64 {
        self.terms.get(&(t_exp, q_exp)).copied().unwrap_or(0)
    }

    /// Terms as `(q_exp, t_exp, coefficient)` in canonical `(t, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        self.terms.iter().map(|(&(t, q), &c)| (q, t, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut sum = self.clone();
        for (q, t, c) in rhs.terms() {
            sum.add_term(q, t, c);
        }
        sum
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut diff = self.clone();
        for (q, t, c) in rhs.terms() {
            diff.add_term(q, t, c.checked_neg().expect("coefficient overflow in q,t arithmetic"));
        }
        diff
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut prod = LaurentQt::zero();
        for (q1, t1, c1) in self.terms() {
            for (q2, t2, c2) in rhs.terms() {
                prod.add_term(cadd(q1, q2), cadd(t1, t2), cmul(c1, c2));
            }
        }
        prod
    }

    /// Exact division by `1 + qt`: returns `Some(p)` with
    /// `(1 + qt) · p == self`, or `None` if no such Laurent polynomial
    /// exists.
    ///
    /// Multiplication by `qt` shifts along diagonals of constant `t − q`, so
    /// the division splits into independent one-dimensional recursions: on
    /// each diagonal, walking `q` upward, the quotient coefficient is the
    /// input coefficient minus the previous quotient coefficient, and the
    /// recursion must return to zero after the last input term.
    pub fn div_one_plus_qt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(LaurentQt::zero());
        }
        // Group terms by the diagonal t − q, keeping q-coordinates sorted.
        let mut diagonals: BTreeMap<i64, BTreeMap<i64, i64>> = BTreeMap::new();
        for (q, t, c) in self.terms() {
            diagonals.entry(t - q).or_default().insert(q, c);
        }
        let mut quotient = LaurentQt::zero();
        for (diag, chain) in diagonals {
            let (&q_min, _) = chain.first_key_value().expect("chain nonempty");
            let (&q_max, _) = chain.last_key_value().expect("chain nonempty");
            let mut running = 0i64;
            for q in q_min..=q_max {
                let c = chain.get(&q).copied().unwrap_or(0);
                running = c.checked_sub(running).expect("coefficient overflow in q,t arithmetic");
                quotient.add_term(q, q + diag, running);
            }
            if running != 0 {
                return None;
            }
        }
        Some(quotient)
    }
}

impl fmt::Display for LaurentQt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (q, t, c)) in self.terms().enumerate() {
            let neg = c < 0;
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.unsigned_abs();
            if abs != 1 || (q == 0 && t == 0) {
                write!(f, "{abs}")?;
            }
            for (sym, exp) in [("q", q), ("t", t)] {
                match exp {
                    0 => {}
                    1 => write!(f, "{sym}")?,
                    _ => write!(f, "{sym}^{exp}")?,
                }
            }
        }
        Ok(())
    }
}

/// Serialized shape of one [`LaurentQt`] term.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermQt {
    q: i64,
    t: i64,
    c: i64,
}

impl Serialize for LaurentQt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (q, t, c) in self.terms() {
            seq.serialize_element(&TermQt { q, t, c })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentQt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<TermQt>::deserialize(deserializer)?;
        let mut terms = BTreeMap::new();
        for TermQt { q, t, c } in raw {
            if c == 0 {
                return Err(D::Error::custom(format!("explicit zero coefficient at q^{q} t^{t}")));
            }
            if terms.insert((t, q), c).is_some() {
                return Err(D::Error::custom(format!("duplicate term q^{q} t^{t}")));
            }
        }
        Ok(LaurentQt { terms })
    }
}
