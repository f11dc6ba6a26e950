//! Free chain complexes over `F₂[u, w]` and their one-variable
//! specializations.
//!
//! A [`FreeComplexUw`] is a finitely generated free complex with bigraded
//! generators (Maslov and Alexander) and a differential with `F₂[u, w]`
//! coefficients. Two ring maps produce [`FreeComplexU`] complexes over
//! `F₂[u]`: setting `w = 0` and setting `w = u`. Torsion invariants are read
//! off the homology of those specializations.
//!
//! Validation is report-based: [`FreeComplexUw::validate`] returns every
//! violated invariant instead of stopping at the first, so a bad input file
//! can be diagnosed in one pass. For single-component complexes (knots) the
//! differential must square to zero over the full ring and every term must
//! respect the grading conventions
//!
//! ```text
//! maslov(u) = -2   maslov(w) = 0    (d drops Maslov by 1)
//! alexander(u) = -1   alexander(w) = +1   (d preserves Alexander)
//! ```
//!
//! For multi-component complexes the grading conventions above do not apply
//! verbatim, so only the two specialized differentials are required to
//! square to zero.
//!
//! The JSON serialization is canonical: generators in declaration order,
//! differential entries sorted by `(from, to)`, terms in `(u, w)` order.
//! Loading rejects duplicate differential entries, duplicate monomials,
//! empty term lists, and references to unknown generator ids.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{MonoUw, PolyU, PolyUw};
use crate::error::{Error, Result};

/// Separator used to build tensor-product generator ids; input ids must not
/// contain it so that product ids stay unambiguous.
pub const TENSOR_SEPARATOR: char = '*';

/// A free module generator with its bigrading.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Generator {
    pub id: String,
    pub maslov: i64,
    pub alexander: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, maslov: i64, alexander: i64) -> Self {
        Generator { id: id.into(), maslov, alexander }
    }
}

/// Which ring map was applied to obtain an `F₂[u]` complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffMode {
    /// `w ↦ 0`; homology torsion gives the sequence behind `t_q`.
    #[serde(rename = "W_ZERO")]
    WZero,
    /// `w ↦ u`; homology torsion gives the sequence behind `t_q'`.
    #[serde(rename = "W_EQUALS_U")]
    WEqualsU,
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::WZero => write!(f, "W_ZERO"),
            CoeffMode::WEqualsU => write!(f, "W_EQUALS_U"),
        }
    }
}

/// One invariant violation found by [`FreeComplexUw::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateId { id: String },
    BadComponentCounts { components: u32, markings: u32 },
    DSquared { from: String, to: String, residual: PolyUw },
    SpecializedDSquared { mode: CoeffMode, from: String, to: String, residual: PolyU },
    MaslovGrading { from: String, to: String, term: MonoUw },
    AlexanderGrading { from: String, to: String, term: MonoUw },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(f, "duplicate generator id '{id}'"),
            Violation::BadComponentCounts { components, markings } => write!(
                f,
                "component counts invalid: components = {components}, markings = {markings} \
                 (need markings >= components >= 1)"
            ),
            Violation::DSquared { from, to, residual } => {
                write!(f, "d^2 != 0: component of d^2({from}) at {to} is {residual}")
            }
            Violation::SpecializedDSquared { mode, from, to, residual } => write!(
                f,
                "d^2 != 0 in {mode} specialization: component of d^2({from}) at {to} is {residual}"
            ),
            Violation::MaslovGrading { from, to, term } => write!(
                f,
                "Maslov grading mismatch on d({from}) at {to}, term {term}: \
                 expected maslov drop of 1 after maslov(u) = -2, maslov(w) = 0"
            ),
            Violation::AlexanderGrading { from, to, term } => write!(
                f,
                "Alexander grading mismatch on d({from}) at {to}, term {term}: \
                 expected preservation after alexander(u) = -1, alexander(w) = +1"
            ),
        }
    }
}

/// Outcome of validating a complex; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// A free, finitely generated chain complex over `F₂[u, w]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplexUw {
    name: String,
    components: u32,
    markings: u32,
    generators: Vec<Generator>,
    /// `differential[i]` lists `(target index, coefficient)` for generator
    /// `i`, sorted by target index; zero coefficients are never stored.
    differential: Vec<Vec<(usize, PolyUw)>>,
}

impl FreeComplexUw {
    /// Builds a complex from generators and differential edges
    /// `(from id, to id, coefficient)`.
    ///
    /// Structural errors — unknown ids or a repeated `(from, to)` pair —
    /// are rejected here; semantic invariants (`d² = 0`, gradings) are the
    /// job of [`validate`](Self::validate). Edges with a zero coefficient
    /// are dropped. Duplicate generator ids are tolerated here (resolving
    /// to the first occurrence) precisely so that `validate` can report
    /// them.
    pub fn new(
        name: impl Into<String>,
        components: u32,
        markings: u32,
        generators: Vec<Generator>,
        edges: Vec<(String, String, PolyUw)>,
    ) -> Result<Self> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            index.entry(&g.id).or_insert(i);
        }
        let mut differential = vec![Vec::new(); generators.len()];
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        for (from, to, poly) in &edges {
            let &fi = index
                .get(from.as_str())
                .ok_or_else(|| Error::Parse(format!("differential references unknown id '{from}'")))?;
            let &ti = index
                .get(to.as_str())
                .ok_or_else(|| Error::Parse(format!("differential references unknown id '{to}'")))?;
            if !seen.insert((fi, ti)) {
                return Err(Error::Parse(format!("duplicate differential entry {from} -> {to}")));
            }
            if !poly.is_zero() {
                differential[fi].push((ti, poly.clone()));
            }
        }
        for row in &mut differential {
            row.sort_by_key(|&(t, _)| t);
        }
        Ok(FreeComplexUw { name: name.into(), components, markings, generators, differential })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> u32 {
        self.components
    }

    pub fn markings(&self) -> u32 {
        self.markings
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Index of the first generator with the given id.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.id == id)
    }

    /// Differential of generator `i`: `(target index, coefficient)` pairs
    /// sorted by target.
    pub fn outgoing(&self, i: usize) -> &[(usize, PolyUw)] {
        &self.differential[i]
    }

    /// Checks every invariant and returns the full list of violations.
    ///
    /// Single-component complexes are checked over the full ring, gradings
    /// included; multi-component complexes are checked through their two
    /// specializations only.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        if self.components == 0 || self.markings < self.components {
            violations.push(Violation::BadComponentCounts {
                components: self.components,
                markings: self.markings,
            });
        }

        let mut ids = HashSet::new();
        for g in &self.generators {
            if !ids.insert(g.id.as_str()) {
                violations.push(Violation::DuplicateId { id: g.id.clone() });
            }
        }

        if self.components == 1 {
            self.check_gradings(&mut violations);
            self.check_d_squared_uw(&mut violations);
        } else {
            for mode in [CoeffMode::WZero, CoeffMode::WEqualsU] {
                let diff = self.specialized_differential(mode);
                for (fi, ti, residual) in d_squared_residuals_u(&diff) {
                    violations.push(Violation::SpecializedDSquared {
                        mode,
                        from: self.generators[fi].id.clone(),
                        to: self.generators[ti].id.clone(),
                        residual,
                    });
                }
            }
        }

        ValidationReport { violations }
    }

    fn check_gradings(&self, violations: &mut Vec<Violation>) {
        for (fi, row) in self.differential.iter().enumerate() {
            let from = &self.generators[fi];
            for (ti, poly) in row {
                let to = &self.generators[*ti];
                for term in poly.terms() {
                    let (u, w) = (term.u as i64, term.w as i64);
                    if to.maslov - 2 * u != from.maslov - 1 {
                        violations.push(Violation::MaslovGrading {
                            from: from.id.clone(),
                            to: to.id.clone(),
                            term,
                        });
                    }
                    if to.alexander - u + w != from.alexander {
                        violations.push(Violation::AlexanderGrading {
                            from: from.id.clone(),
                            to: to.id.clone(),
                            term,
                        });
                    }
                }
            }
        }
    }

    fn check_d_squared_uw(&self, violations: &mut Vec<Violation>) {
        for fi in 0..self.generators.len() {
            let mut acc: BTreeMap<usize, PolyUw> = BTreeMap::new();
            for (mi, f) in &self.differential[fi] {
                for (ti, g) in &self.differential[*mi] {
                    let entry = acc.entry(*ti).or_default();
                    *entry = entry.add(&f.mul(g));
                }
            }
            for (ti, residual) in acc {
                if !residual.is_zero() {
                    violations.push(Violation::DSquared {
                        from: self.generators[fi].id.clone(),
                        to: self.generators[ti].id.clone(),
                        residual,
                    });
                }
            }
        }
    }

    fn specialized_differential(&self, mode: CoeffMode) -> Vec<Vec<(usize, PolyU)>> {
        self.differential
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(ti, poly)| {
                        let spec = specialize_poly(poly, mode);
                        (!spec.is_zero()).then_some((*ti, spec))
                    })
                    .collect()
            })
            .collect()
    }

    /// Applies the ring map of `mode` to every coefficient.
    ///
    /// Errors if the resulting differential does not square to zero, which
    /// signals invalid input (specialization of a valid complex always
    /// squares to zero).
    pub fn specialize(&self, mode: CoeffMode) -> Result<FreeComplexU> {
        let differential = self.specialized_differential(mode);
        if let Some((fi, ti, _)) = d_squared_residuals_u(&differential).into_iter().next() {
            return Err(Error::Domain(format!(
                "d^2 != 0 after {mode} specialization of '{}': d^2({}) has a component at {}",
                self.name, self.generators[fi].id, self.generators[ti].id
            )));
        }
        Ok(FreeComplexU {
            name: self.name.clone(),
            mode,
            components: self.components,
            markings: self.markings,
            generators: self.generators.clone(),
            differential,
        })
    }

    /// Canonical JSON serialization (pretty-printed, trailing newline).
    pub fn to_json(&self) -> String {
        let file = ComplexFile {
            name: self.name.clone(),
            components: self.components,
            markings: self.markings,
            generators: self.generators.clone(),
            differential: self
                .differential
                .iter()
                .enumerate()
                .flat_map(|(fi, row)| {
                    row.iter().map(move |(ti, poly)| (fi, *ti, poly.clone()))
                })
                .map(|(fi, ti, poly)| DiffEntry {
                    from: self.generators[fi].id.clone(),
                    to: self.generators[ti].id.clone(),
                    terms: poly,
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("complex serialization");
        out.push('\n');
        out
    }

    /// Parses the canonical JSON format, rejecting structural defects:
    /// unknown fields, non-positive component counts, unknown ids, repeated
    /// `(from, to)` entries, duplicate monomials, and empty term lists.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text)?;
        if file.components == 0 {
            return Err(Error::Parse("components must be a positive integer".into()));
        }
        if file.markings == 0 {
            return Err(Error::Parse("markings must be a positive integer".into()));
        }
        for entry in &file.differential {
            if entry.terms.is_zero() {
                return Err(Error::Parse(format!(
                    "empty differential entry {} -> {}",
                    entry.from, entry.to
                )));
            }
        }
        FreeComplexUw::new(
            file.name,
            file.components,
            file.markings,
            file.generators,
            file.differential.into_iter().map(|e| (e.from, e.to, e.terms)).collect(),
        )
    }
}

/// Nonzero components of `d²` for a specialized differential, as
/// `(from, to, residual)` triples in deterministic order.
fn d_squared_residuals_u(diff: &[Vec<(usize, PolyU)>]) -> Vec<(usize, usize, PolyU)> {
    let mut out = Vec::new();
    for fi in 0..diff.len() {
        let mut acc: BTreeMap<usize, PolyU> = BTreeMap::new();
        for (mi, f) in &diff[fi] {
            for (ti, g) in &diff[*mi] {
                acc.entry(*ti).or_default().add_assign(&f.mul(g));
            }
        }
        for (ti, residual) in acc {
            if !residual.is_zero() {
                out.push((fi, ti, residual));
            }
        }
    }
    out
}

fn specialize_poly(poly: &PolyUw, mode: CoeffMode) -> PolyU {
    let mut out = PolyU::zero();
    for m in poly.terms() {
        match mode {
            CoeffMode::WZero => {
                if m.w == 0 {
                    out.add_assign(&PolyU::monomial(m.u as usize));
                }
            }
            CoeffMode::WEqualsU => {
                // w ↦ u merges exponents; repeated images cancel in char 2.
                out.add_assign(&PolyU::monomial(m.u as usize + m.w as usize));
            }
        }
    }
    out
}

/// Tensor product of two single-component, single-marking complexes.
///
/// Generators are the pairs `x*y` (row-major in the left factor), gradings
/// add, and the differential follows the Leibniz rule
/// `d(x⊗y) = d(x)⊗y + x⊗d(y)` — no signs in characteristic 2.
///
/// Inputs must be valid complexes (not re-checked here) whose generator ids
/// avoid [`TENSOR_SEPARATOR`]; the output of a tensor therefore cannot be
/// tensored again without relabeling, which keeps product ids unambiguous.
pub fn tensor(lhs: &FreeComplexUw, rhs: &FreeComplexUw) -> Result<FreeComplexUw> {
    for c in [lhs, rhs] {
        if c.components != 1 || c.markings != 1 {
            return Err(Error::Domain(format!(
                "tensor requires single-component, single-marking complexes; '{}' has \
                 components = {}, markings = {}",
                c.name, c.components, c.markings
            )));
        }
        if let Some(g) = c.generators.iter().find(|g| g.id.contains(TENSOR_SEPARATOR)) {
            return Err(Error::Domain(format!(
                "generator id '{}' in '{}' contains the reserved separator '{}'",
                g.id, c.name, TENSOR_SEPARATOR
            )));
        }
    }

    let cols = rhs.generators.len();
    let pair_index = |li: usize, ri: usize| li * cols + ri;

    let mut generators = Vec::with_capacity(lhs.generators.len() * cols);
    for x in &lhs.generators {
        for y in &rhs.generators {
            generators.push(Generator::new(
                format!("{}{}{}", x.id, TENSOR_SEPARATOR, y.id),
                x.maslov + y.maslov,
                x.alexander + y.alexander,
            ));
        }
    }

    let mut differential = vec![Vec::new(); generators.len()];
    for li in 0..lhs.generators.len() {
        for ri in 0..cols {
            let row = &mut differential[pair_index(li, ri)];
            for (lt, poly) in &lhs.differential[li] {
                row.push((pair_index(*lt, ri), poly.clone()));
            }
            for (rt, poly) in &rhs.differential[ri] {
                row.push((pair_index(li, *rt), poly.clone()));
            }
            row.sort_by_key(|&(t, _)| t);
        }
    }

    Ok(FreeComplexUw {
        name: format!("{}{}{}", lhs.name, TENSOR_SEPARATOR, rhs.name),
        components: 1,
        markings: 1,
        generators,
        differential,
    })
}

/// A free chain complex over `F₂[u]`, obtained by specializing a
/// [`FreeComplexUw`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplexU {
    name: String,
    mode: CoeffMode,
    components: u32,
    markings: u32,
    generators: Vec<Generator>,
    differential: Vec<Vec<(usize, PolyU)>>,
}

impl FreeComplexU {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn components(&self) -> u32 {
        self.components
    }

    pub fn markings(&self) -> u32 {
        self.markings
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn outgoing(&self, i: usize) -> &[(usize, PolyU)] {
        &self.differential[i]
    }

    /// Nonzero components of `d²`, empty iff the differential squares to
    /// zero.
    pub fn d_squared_residuals(&self) -> Vec<(usize, usize, PolyU)> {
        d_squared_residuals_u(&self.differential)
    }
}

/// Serialized shape of the complex JSON format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    name: String,
    components: u32,
    markings: u32,
    generators: Vec<Generator>,
    differential: Vec<DiffEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffEntry {
    from: String,
    to: String,
    terms: PolyUw,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Staircase model of the trefoil: x1 maps to x0 by u and to x2 by w.
    pub(crate) fn trefoil() -> FreeComplexUw {
        FreeComplexUw::new(
            "T(2,3)",
            1,
            1,
            vec![
                Generator::new("x0", 0, 1),
                Generator::new("x1", -1, 0),
                Generator::new("x2", -2, -1),
            ],
            vec![
                ("x1".into(), "x0".into(), PolyUw::monomial(1, 0)),
                ("x1".into(), "x2".into(), PolyUw::monomial(0, 1)),
            ],
        )
        .unwrap()
    }

    /// Staircase model of T(3,4): step vector (1, 2, 2, 1).
    pub(crate) fn t34() -> FreeComplexUw {
        FreeComplexUw::new(
            "T(3,4)",
            1,
            1,
            vec![
                Generator::new("x0", 0, 3),
                Generator::new("x1", -1, 2),
                Generator::new("x2", -2, 0),
                Generator::new("x3", -5, -2),
                Generator::new("x4", -6, -3),
            ],
            vec![
                ("x1".into(), "x0".into(), PolyUw::monomial(1, 0)),
                ("x1".into(), "x2".into(), PolyUw::monomial(0, 2)),
                ("x3".into(), "x2".into(), PolyUw::monomial(2, 0)),
                ("x3".into(), "x4".into(), PolyUw::monomial(0, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn t34_fixture_is_valid() {
        assert!(t34().validate().is_valid());
    }

    #[test]
    fn validate_accepts_trefoil_and_empty_complex() {
        assert!(trefoil().validate().is_valid());
        let empty = FreeComplexUw::new("empty", 1, 1, vec![], vec![]).unwrap();
        assert!(empty.validate().is_valid());
    }

    #[test]
    fn validate_reports_duplicate_ids_and_bad_counts() {
        let c = FreeComplexUw::new(
            "bad",
            2,
            1,
            vec![Generator::new("a", 0, 0), Generator::new("a", 1, 1)],
            vec![],
        )
        .unwrap();
        let report = c.validate();
        assert_eq!(report.violations.len(), 2);
        assert!(report
            .violations
            .contains(&Violation::BadComponentCounts { components: 2, markings: 1 }));
        assert!(report.violations.contains(&Violation::DuplicateId { id: "a".into() }));
    }

    #[test]
    fn validate_reports_grading_mismatches() {
        // d(a) = u b with Maslov(b) off by one and Alexander(b) off by one.
        let c = FreeComplexUw::new(
            "bad gradings",
            1,
            1,
            vec![Generator::new("a", 0, 0), Generator::new("b", 0, 2)],
            vec![("a".into(), "b".into(), PolyUw::monomial(1, 0))],
        )
        .unwrap();
        let report = c.validate();
        let term = MonoUw::new(1, 0);
        assert!(report.violations.contains(&Violation::MaslovGrading {
            from: "a".into(),
            to: "b".into(),
            term,
        }));
        assert!(report.violations.contains(&Violation::AlexanderGrading {
            from: "a".into(),
            to: "b".into(),
            term,
        }));
    }

    /// `a -> b -> c`, both arrows `u`, gradings consistent per edge, so the
    /// only defect is `d²(a) = u² c`.
    fn d_squared_failure() -> FreeComplexUw {
        FreeComplexUw::new(
            "d2",
            1,
            1,
            vec![
                Generator::new("a", 0, 0),
                Generator::new("b", 1, 1),
                Generator::new("c", 2, 2),
            ],
            vec![
                ("a".into(), "b".into(), PolyUw::monomial(1, 0)),
                ("b".into(), "c".into(), PolyUw::monomial(1, 0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validate_reports_d_squared() {
        let report = d_squared_failure().validate();
        assert_eq!(
            report.violations,
            vec![Violation::DSquared {
                from: "a".into(),
                to: "c".into(),
                residual: PolyUw::monomial(2, 0),
            }]
        );
    }

    #[test]
    fn multi_component_complexes_check_specializations_only() {
        // d(x) = w y, d(y) = (u + w) z: d² = (uw + w²) z over the full ring,
        // but both specializations square to zero.
        let gens = vec![
            Generator::new("x", 0, 0),
            Generator::new("y", 0, 0),
            Generator::new("z", 0, 0),
        ];
        let edges = vec![
            ("x".to_string(), "y".to_string(), PolyUw::monomial(0, 1)),
            (
                "y".to_string(),
                "z".to_string(),
                PolyUw::monomial(1, 0).add(&PolyUw::monomial(0, 1)),
            ),
        ];
        let link = FreeComplexUw::new("L", 2, 2, gens.clone(), edges.clone()).unwrap();
        assert!(link.validate().is_valid());

        // The same data declared as a knot fails the full-ring check (the
        // grading mismatches are reported too).
        let knot = FreeComplexUw::new("K", 1, 1, gens, edges).unwrap();
        assert!(knot
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DSquared { .. })));
    }

    #[test]
    fn specialize_trefoil() {
        let c = trefoil();
        let w0 = c.specialize(CoeffMode::WZero).unwrap();
        let x1 = 1;
        assert_eq!(w0.outgoing(x1), &[(0, PolyU::monomial(1))]);
        assert!(w0.outgoing(0).is_empty());
        assert!(w0.outgoing(2).is_empty());

        let wu = c.specialize(CoeffMode::WEqualsU).unwrap();
        assert_eq!(wu.outgoing(x1), &[(0, PolyU::monomial(1)), (2, PolyU::monomial(1))]);
    }

    #[test]
    fn specialize_cancels_merged_terms() {
        // d(a) = (u + w) b vanishes under w = u.
        let c = FreeComplexUw::new(
            "cancel",
            1,
            1,
            vec![Generator::new("a", 0, 0), Generator::new("b", 1, 1)],
            vec![(
                "a".into(),
                "b".into(),
                PolyUw::monomial(1, 0).add(&PolyUw::monomial(0, 1)),
            )],
        )
        .unwrap();
        let wu = c.specialize(CoeffMode::WEqualsU).unwrap();
        assert!(wu.outgoing(0).is_empty());
    }

    #[test]
    fn specialize_rejects_broken_differential() {
        let err = d_squared_failure().specialize(CoeffMode::WZero).unwrap_err();
        assert!(err.to_string().contains("d^2 != 0"));
    }

    #[test]
    fn tensor_of_trefoils() {
        let c = trefoil();
        let t = tensor(&c, &c).unwrap();
        assert_eq!(t.num_generators(), 9);
        assert_eq!(t.components(), 1);
        assert_eq!(t.markings(), 1);
        assert!(t.validate().is_valid());

        let i = t.index_of("x1*x1").unwrap();
        assert_eq!(t.generators()[i].maslov, -2);
        assert_eq!(t.generators()[i].alexander, 0);
        let targets: Vec<&str> =
            t.outgoing(i).iter().map(|(ti, _)| t.generators()[*ti].id.as_str()).collect();
        assert_eq!(targets, vec!["x0*x1", "x1*x0", "x1*x2", "x2*x1"]);
    }

    #[test]
    fn tensor_with_one_generator_complex_preserves_differential() {
        let unknot = FreeComplexUw::new(
            "U",
            1,
            1,
            vec![Generator::new("g", 0, 0)],
            vec![],
        )
        .unwrap();
        let t = tensor(&trefoil(), &unknot).unwrap();
        assert_eq!(t.num_generators(), 3);
        assert_eq!(t.outgoing(1).len(), 2);
        assert!(t.validate().is_valid());
    }

    #[test]
    fn tensor_rejects_bad_inputs() {
        let starred = FreeComplexUw::new(
            "bad",
            1,
            1,
            vec![Generator::new("a*b", 0, 0)],
            vec![],
        )
        .unwrap();
        assert!(tensor(&starred, &trefoil()).is_err());

        let link = FreeComplexUw::new("L", 2, 2, vec![Generator::new("a", 0, 0)], vec![]).unwrap();
        assert!(tensor(&link, &trefoil()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = trefoil();
        let json = c.to_json();
        let back = FreeComplexUw::from_json(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn json_rejects_structural_defects() {
        let dup_entry = r#"{
            "name": "x", "components": 1, "markings": 1,
            "generators": [{"id": "a", "maslov": 0, "alexander": 0},
                           {"id": "b", "maslov": -1, "alexander": -1}],
            "differential": [
                {"from": "a", "to": "b", "terms": [{"u": 1, "w": 0}]},
                {"from": "a", "to": "b", "terms": [{"u": 2, "w": 0}]}
            ]
        }"#;
        assert!(matches!(FreeComplexUw::from_json(dup_entry), Err(Error::Parse(_))));

        let unknown_id = r#"{
            "name": "x", "components": 1, "markings": 1,
            "generators": [{"id": "a", "maslov": 0, "alexander": 0}],
            "differential": [{"from": "a", "to": "zz", "terms": [{"u": 1, "w": 0}]}]
        }"#;
        assert!(matches!(FreeComplexUw::from_json(unknown_id), Err(Error::Parse(_))));

        let empty_terms = r#"{
            "name": "x", "components": 1, "markings": 1,
            "generators": [{"id": "a", "maslov": 0, "alexander": 0}],
            "differential": [{"from": "a", "to": "a", "terms": []}]
        }"#;
        assert!(matches!(FreeComplexUw::from_json(empty_terms), Err(Error::Parse(_))));

        let dup_monomial = r#"{
            "name": "x", "components": 1, "markings": 1,
            "generators": [{"id": "a", "maslov": 0, "alexander": 0}],
            "differential": [{"from": "a", "to": "a",
                              "terms": [{"u": 1, "w": 0}, {"u": 1, "w": 0}]}]
        }"#;
        assert!(matches!(FreeComplexUw::from_json(dup_monomial), Err(Error::Parse(_))));

        let zero_components = r#"{
            "name": "x", "components": 0, "markings": 1,
            "generators": [], "differential": []
        }"#;
        assert!(matches!(FreeComplexUw::from_json(zero_components), Err(Error::Parse(_))));

        let unknown_field = r#"{
            "name": "x", "components": 1, "markings": 1, "extra": 3,
            "generators": [], "differential": []
        }"#;
        assert!(matches!(FreeComplexUw::from_json(unknown_field), Err(Error::Parse(_))));
    }

    #[test]
    fn loader_keeps_duplicate_ids_for_validate_to_report() {
        let dup_ids = r#"{
            "name": "x", "components": 1, "markings": 1,
            "generators": [{"id": "a", "maslov": 0, "alexander": 0},
                           {"id": "a", "maslov": 0, "alexander": 0}],
            "differential": []
        }"#;
        let c = FreeComplexUw::from_json(dup_ids).unwrap();
        assert!(c.validate().violations.contains(&Violation::DuplicateId { id: "a".into() }));
    }
}
