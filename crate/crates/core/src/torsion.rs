//! Torsion sequences and the torsion lower bounds for rational unknotting.
//!
//! Over the PID `F₂[u]`, the homology of a specialized complex decomposes
//! into a free part and cyclic torsion summands `F₂[u] / (u^{n_i})`. The
//! multiset of torsion exponents, sorted non-increasingly, is a
//! [`TorsionSequence`]. Two sequences are compared by a domination order
//! and by a pseudometric [`TorsionSequence::distance`]: the least uniform
//! drop `ℓ` after which each sequence dominates the other. The invariants
//! `t_q` and `t_q'` of a complex are the largest torsion orders of its two
//! specializations ([`invariants_of`]), and [`pair_lower_bound`] turns two
//! torsion sequences into a lower bound for the distance between the
//! underlying objects.

use serde::Serialize;
use std::fmt;

use crate::complex::{CoeffMode, FreeComplexUw};
use crate::error::{Error, Result};
use crate::homology::{homology, ModuleDecomp};

/// A possibly-empty, non-increasing sequence of positive torsion exponents.
///
/// Serializes as a plain JSON array, largest entry first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TorsionSequence(Vec<u32>);

impl TorsionSequence {
    /// Canonicalizes arbitrary input: sorts non-increasingly and discards
    /// non-positive entries.
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.retain(|&e| e > 0);
        entries.sort_unstable_by(|a, b| b.cmp(a));
        TorsionSequence(entries)
    }

    pub fn empty() -> Self {
        TorsionSequence::default()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest entry, or `None` when empty.
    pub fn max_entry(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Subtracts `ell` from every entry and discards entries that drop to
    /// zero or below.
    pub fn minus(&self, ell: u32) -> Self {
        TorsionSequence(self.0.iter().filter(|&&e| e > ell).map(|&e| e - ell).collect())
    }

    /// Repeats every entry `p` times (multiplicity scaling).
    pub fn scale(&self, p: usize) -> Self {
        let mut out = Vec::with_capacity(self.0.len() * p);
        for &e in &self.0 {
            out.extend(std::iter::repeat_n(e, p));
        }
        TorsionSequence(out)
    }

    /// Domination order: `self` is at least as long as `other` and at least
    /// as large entrywise on the common prefix.
    pub fn dominates(&self, other: &Self) -> bool {
        self.0.len() >= other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Pseudometric: the least `ell` with `self ≥ other − ell` and
    /// `other ≥ self − ell`.
    ///
    /// Always defined: once `ell` reaches the larger of the two maxima both
    /// shifted sequences are empty and domination is trivial.
    pub fn distance(&self, other: &Self) -> u32 {
        let bound = self.max_entry().unwrap_or(0).max(other.max_entry().unwrap_or(0));
        (0..=bound)
            .find(|&ell| {
                self.dominates(&other.minus(ell)) && other.dominates(&self.minus(ell))
            })
            .expect("domination holds at the maximum entry")
    }
}

impl fmt::Display for TorsionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Homology decompositions of both specializations of a knot complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    /// Homology of the `w = 0` specialization.
    pub w_zero: ModuleDecomp,
    /// Homology of the `w = u` specialization.
    pub w_equals_u: ModuleDecomp,
}

impl Invariants {
    /// Torsion sequence of the `w = 0` specialization.
    pub fn n_seq(&self) -> &TorsionSequence {
        &self.w_zero.torsion
    }

    /// Torsion sequence of the `w = u` specialization.
    pub fn m_seq(&self) -> &TorsionSequence {
        &self.w_equals_u.torsion
    }

    /// `t_q`: the largest `w = 0` torsion order (0 for torsion-free).
    pub fn tq(&self) -> u32 {
        self.n_seq().max_entry().unwrap_or(0)
    }

    /// `t_q'`: the largest `w = u` torsion order (0 for torsion-free).
    pub fn tqp(&self) -> u32 {
        self.m_seq().max_entry().unwrap_or(0)
    }
}

/// Computes both specializations' homology for a valid single-component
/// complex.
///
/// Errors if validation fails (the report is returned inside the error) or
/// if the complex has more than one component.
pub fn invariants_of(c: &FreeComplexUw) -> Result<Invariants> {
    let report = c.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    if c.components() != 1 {
        return Err(Error::Domain(format!(
            "torsion invariants are defined for single-component complexes; '{}' has {}",
            c.name(),
            c.components()
        )));
    }
    Ok(Invariants {
        w_zero: homology(&c.specialize(CoeffMode::WZero)?)?,
        w_equals_u: homology(&c.specialize(CoeffMode::WEqualsU)?)?,
    })
}

/// Lower bound for the distance between two objects from their torsion
/// sequences: each sequence is multiplicity-scaled by 2 to the power of the
/// *other* object's component count, then the pseudometric distance is
/// taken.
pub fn pair_lower_bound(
    seq_k: &TorsionSequence,
    seq_kp: &TorsionSequence,
    components_k: u32,
    components_kp: u32,
) -> Result<u32> {
    if components_k == 0 || components_kp == 0 {
        return Err(Error::Domain("component counts must be positive".into()));
    }
    let factor = |c: u32| -> Result<usize> {
        2usize
            .checked_pow(c)
            .ok_or_else(|| Error::Domain(format!("component count {c} is too large to scale by")))
    };
    let (f_k, f_kp) = (factor(components_kp)?, factor(components_k)?);
    const MAX_SCALED_LEN: usize = 10_000_000;
    for (seq, f) in [(seq_k, f_k), (seq_kp, f_kp)] {
        if seq.len().checked_mul(f).is_none_or(|l| l > MAX_SCALED_LEN) {
            return Err(Error::Domain("scaled torsion sequence would be too large".into()));
        }
    }
    Ok(seq_k.scale(f_k).distance(&seq_kp.scale(f_kp)))
}

/// Checks the expected module shape for the homology of a specialized
/// complex with the given component and marking counts: free rank
/// `2^(markings - 1)` and every torsion order appearing with multiplicity
/// divisible by `2^(markings - components)`.
pub fn structure_check(decomp: &ModuleDecomp, components: u32, markings: u32) -> bool {
    if components == 0 || markings < components {
        return false;
    }
    let expected_free = match 2usize.checked_pow(markings - 1) {
        Some(f) => f,
        None => return false,
    };
    if decomp.free_rank != expected_free {
        return false;
    }
    let multiple = match 2usize.checked_pow(markings - components) {
        Some(m) => m,
        None => return false,
    };
    let entries = decomp.torsion.entries();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i;
        while j < entries.len() && entries[j] == entries[i] {
            j += 1;
        }
        if (j - i) % multiple != 0 {
            return false;
        }
        i = j;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::{t34, trefoil};
    use proptest::prelude::*;

    fn seq(entries: &[u32]) -> TorsionSequence {
        TorsionSequence::new(entries.to_vec())
    }

    #[test]
    fn new_canonicalizes() {
        assert_eq!(seq(&[1, 3, 0, 2]).entries(), &[3, 2, 1]);
        assert!(seq(&[0, 0]).is_empty());
        assert_eq!(seq(&[2, 2, 1]).max_entry(), Some(2));
        assert_eq!(TorsionSequence::empty().max_entry(), None);
    }

    #[test]
    fn minus_examples() {
        assert_eq!(seq(&[3, 2, 1]).minus(1), seq(&[2, 1]));
        assert_eq!(seq(&[3, 2, 1]).minus(3), TorsionSequence::empty());
        assert_eq!(seq(&[3, 2, 1]).minus(0), seq(&[3, 2, 1]));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(seq(&[2, 1]).scale(2).entries(), &[2, 2, 1, 1]);
        assert_eq!(seq(&[2, 1]).scale(1), seq(&[2, 1]));
        assert!(TorsionSequence::empty().scale(4).is_empty());
    }

    #[test]
    fn domination_examples() {
        assert!(seq(&[2, 1]).dominates(&seq(&[2, 1])));
        assert!(seq(&[2, 1]).dominates(&seq(&[1])));
        assert!(!seq(&[1]).dominates(&seq(&[2, 1])));
        assert!(!seq(&[1, 1]).dominates(&seq(&[2])));
        assert!(seq(&[1]).dominates(&TorsionSequence::empty()));
        assert!(!TorsionSequence::empty().dominates(&seq(&[1])));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(seq(&[2, 1]).distance(&seq(&[1])), 1);
        assert_eq!(seq(&[2, 2, 1, 1]).distance(&seq(&[1, 1])), 1);
        assert_eq!(seq(&[5]).distance(&TorsionSequence::empty()), 5);
        assert_eq!(seq(&[3, 1]).distance(&seq(&[3, 1])), 0);
    }

    fn arb_seq() -> impl Strategy<Value = TorsionSequence> {
        proptest::collection::vec(1u32..8, 0..6).prop_map(TorsionSequence::new)
    }

    proptest! {
        #[test]
        fn prop_minus_composes(s in arb_seq(), a in 0u32..5, b in 0u32..5) {
            prop_assert_eq!(s.minus(a).minus(b), s.minus(a + b));
        }

        #[test]
        fn prop_distance_is_a_pseudometric(a in arb_seq(), b in arb_seq(), c in arb_seq()) {
            prop_assert_eq!(a.distance(&a), 0);
            prop_assert_eq!(a.distance(&b), b.distance(&a));
            prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c));
        }

        #[test]
        fn prop_domination_shifts_monotonically(a in arb_seq(), b in arb_seq(), ell in 0u32..5) {
            if a.dominates(&b) {
                prop_assert!(a.minus(ell).dominates(&b.minus(ell)));
            }
        }
    }

    #[test]
    fn invariants_of_trefoil() {
        let inv = invariants_of(&trefoil()).unwrap();
        assert_eq!(inv.w_zero.free_rank, 1);
        assert_eq!(inv.n_seq(), &seq(&[1]));
        assert_eq!(inv.w_equals_u.free_rank, 1);
        assert_eq!(inv.m_seq(), &seq(&[1]));
        assert_eq!((inv.tq(), inv.tqp()), (1, 1));
    }

    #[test]
    fn invariants_of_t34() {
        let inv = invariants_of(&t34()).unwrap();
        assert_eq!(inv.n_seq(), &seq(&[2, 1]));
        assert_eq!(inv.m_seq(), &seq(&[1, 1]));
        assert_eq!((inv.tq(), inv.tqp()), (2, 1));
    }

    #[test]
    fn invariants_of_one_generator_complex_are_trivial() {
        let unknot = crate::complex::FreeComplexUw::new(
            "U",
            1,
            1,
            vec![crate::complex::Generator::new("g", 0, 0)],
            vec![],
        )
        .unwrap();
        let inv = invariants_of(&unknot).unwrap();
        assert_eq!((inv.tq(), inv.tqp()), (0, 0));
        assert_eq!(inv.w_zero.free_rank, 1);
    }

    #[test]
    fn invariants_of_rejects_links_and_invalid_complexes() {
        let link = crate::complex::FreeComplexUw::new("L", 2, 2, vec![], vec![]).unwrap();
        assert!(matches!(invariants_of(&link), Err(Error::Domain(_))));

        let bad = crate::complex::FreeComplexUw::new(
            "bad",
            1,
            1,
            vec![
                crate::complex::Generator::new("a", 0, 0),
                crate::complex::Generator::new("a", 0, 0),
            ],
            vec![],
        )
        .unwrap();
        assert!(matches!(invariants_of(&bad), Err(Error::Invalid(_))));
    }

    #[test]
    fn pair_lower_bound_examples() {
        // Trefoil versus T(3,4), both knots: distance bound 1 from either
        // torsion sequence.
        assert_eq!(pair_lower_bound(&seq(&[1]), &seq(&[2, 1]), 1, 1).unwrap(), 1);
        assert_eq!(pair_lower_bound(&seq(&[1]), &seq(&[1, 1]), 1, 1).unwrap(), 1);
        // Identical sequences give no obstruction.
        assert_eq!(pair_lower_bound(&seq(&[2, 1]), &seq(&[2, 1]), 1, 1).unwrap(), 0);
        // Torsion-free versus trefoil.
        assert_eq!(pair_lower_bound(&TorsionSequence::empty(), &seq(&[1]), 1, 1).unwrap(), 1);
    }

    #[test]
    fn pair_lower_bound_rejects_absurd_component_counts() {
        assert!(pair_lower_bound(&seq(&[1]), &seq(&[1]), 0, 1).is_err());
        assert!(pair_lower_bound(&seq(&[1]), &seq(&[1]), 1, 40).is_err());
    }

    #[test]
    fn structure_check_examples() {
        let decomp = |free, torsion: &[u32]| ModuleDecomp {
            free_rank: free,
            torsion: TorsionSequence::new(torsion.to_vec()),
        };
        // Knot with one marking: free rank 1, any multiplicities.
        assert!(structure_check(&decomp(1, &[2, 1]), 1, 1));
        // Knot with two markings: free rank 2 and even multiplicities.
        assert!(structure_check(&decomp(2, &[1, 1]), 1, 2));
        assert!(!structure_check(&decomp(2, &[2, 1, 1]), 1, 2));
        assert!(!structure_check(&decomp(1, &[1, 1]), 1, 2));
        // Marking/component counts must be sane.
        assert!(!structure_check(&decomp(1, &[]), 2, 1));
    }
}
