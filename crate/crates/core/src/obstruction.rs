//! The `(1 + qt)`-divisibility obstruction for proper rational unknotting
//! number one.
//!
//! For a knot with quantum-graded dimension polynomial `Q` and
//! concordance invariant `τ`, proper rational unknotting number one forces
//! `Q − t^τ` to be divisible by `1 + qt` with a quotient whose coefficients
//! are non-negative (they count dimensions). [`prr_obstruction`] evaluates
//! both conditions and reports one of three verdicts.
//!
//! A bundled table ships `(name, τ, Q)` rows for the small knots this
//! obstruction is interesting for; [`ReducedComplexDesc`] covers the other
//! direction, reading `τ`, `t_q`, and `Q` off a reduced staircase-shaped
//! complex description.

use serde::{Deserialize, Serialize};

use crate::algebra::LaurentQt;
use crate::error::{Error, Result};

/// A dimension polynomial in `q`, `t` attached to a named knot; every
/// coefficient must be strictly positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    name: String,
    poly: LaurentQt,
}

impl QPoly {
    pub fn new(name: impl Into<String>, poly: LaurentQt) -> Result<Self> {
        let name = name.into();
        if let Some((q, t, c)) = poly.terms().find(|&(_, _, c)| c <= 0) {
            return Err(Error::Domain(format!(
                "dimension polynomial for '{name}' has non-positive coefficient {c} at q^{q} t^{t}"
            )));
        }
        Ok(QPoly { name, poly })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn poly(&self) -> &LaurentQt {
        &self.poly
    }

    /// Thin means every monomial lies on one diagonal: `t − q` constant.
    pub fn is_thin(&self) -> bool {
        let mut diags = self.poly.terms().map(|(q, t, _)| t - q);
        match diags.next() {
            None => true,
            Some(first) => diags.all(|d| d == first),
        }
    }
}

/// Verdict of the divisibility obstruction; quotients are carried whenever
/// the division succeeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Passes { quotient: LaurentQt },
    FailsDivisibility,
    FailsPositivity { quotient: LaurentQt },
}

impl Obstruction {
    pub fn verdict(&self) -> &'static str {
        match self {
            Obstruction::Passes { .. } => "PASSES",
            Obstruction::FailsDivisibility => "FAILS_DIVISIBILITY",
            Obstruction::FailsPositivity { .. } => "FAILS_POSITIVITY",
        }
    }

    pub fn quotient(&self) -> Option<&LaurentQt> {
        match self {
            Obstruction::Passes { quotient } | Obstruction::FailsPositivity { quotient } => {
                Some(quotient)
            }
            Obstruction::FailsDivisibility => None,
        }
    }
}

/// Evaluates the obstruction: `Q − t^τ` must be divisible by `1 + qt` and
/// the quotient must be coefficient-wise non-negative.
pub fn prr_obstruction(q: &QPoly, tau: i64) -> Obstruction {
    let candidate = q.poly.sub(&LaurentQt::term(0, tau, 1));
    match candidate.div_one_plus_qt() {
        None => Obstruction::FailsDivisibility,
        Some(quotient) => {
            // Exactness is an invariant of the division routine; re-check
            // by multiplication before reporting anything.
            assert_eq!(
                LaurentQt::one_plus_qt().mul(&quotient),
                candidate,
                "division by 1 + qt returned an inexact quotient"
            );
            if quotient.terms().any(|(_, _, c)| c < 0) {
                Obstruction::FailsPositivity { quotient }
            } else {
                Obstruction::Passes { quotient }
            }
        }
    }
}

/// A reduced staircase-shaped complex, described by generator pairs
/// `(s_i, μ_i)` of Alexander-type and Maslov-type gradings,
/// `i = 0, …, 2n`.
///
/// Constraints checked at construction: odd length, `μ_0 = 0`, each odd
/// position drops to the next even one (`s_{2j−1} > s_{2j}` and
/// `μ_{i+1} = μ_i − 1` for odd `i`), and every `s`-drop fits in `u32`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedComplexDesc {
    pairs: Vec<(i64, i64)>,
}

impl ReducedComplexDesc {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<Self> {
        if pairs.is_empty() || pairs.len().is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "reduced descriptor needs an odd number of generators, got {}",
                pairs.len()
            )));
        }
        if pairs[0].1 != 0 {
            return Err(Error::Domain(format!(
                "reduced descriptor must start at mu = 0, got {}",
                pairs[0].1
            )));
        }
        for i in (1..pairs.len()).step_by(2) {
            let ((s_odd, mu_odd), (s_even, mu_even)) = (pairs[i], pairs[i + 1]);
            if s_odd <= s_even {
                return Err(Error::Domain(format!(
                    "reduced descriptor must drop in s from position {i} to {}: {s_odd} <= {s_even}",
                    i + 1
                )));
            }
            if u32::try_from(s_odd - s_even).is_err() {
                return Err(Error::Domain("s-drop does not fit in 32 bits".into()));
            }
            if mu_even != mu_odd - 1 {
                return Err(Error::Domain(format!(
                    "reduced descriptor must drop mu by one from position {i} to {}: {mu_odd} -> {mu_even}",
                    i + 1
                )));
            }
        }
        Ok(ReducedComplexDesc { pairs })
    }

    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    /// `τ` is the top `s`-grading, carried by the first generator.
    pub fn tau(&self) -> i64 {
        self.pairs[0].0
    }

    /// `t_q` is the largest `s`-drop from an odd position to the following
    /// even one (0 for a single generator).
    pub fn tq(&self) -> u32 {
        (1..self.pairs.len())
            .step_by(2)
            .map(|i| (self.pairs[i].0 - self.pairs[i + 1].0) as u32)
            .max()
            .unwrap_or(0)
    }

    /// The dimension polynomial `Σ_i q^{μ_i} t^{s_i}`.
    pub fn q_poly(&self, name: impl Into<String>) -> Result<QPoly> {
        let mut poly = LaurentQt::zero();
        for &(s, mu) in &self.pairs {
            poly.add_term(mu, s, 1);
        }
        QPoly::new(name, poly)
    }
}

/// One row of the bundled knot table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotEntry {
    pub name: String,
    pub tau: i64,
    pub q: QPoly,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    name: String,
    tau: i64,
    #[serde(rename = "Q")]
    q: LaurentQt,
}

/// Parses a knot table: a JSON array of `{"name", "tau", "Q"}` rows with
/// strictly positive `Q` coefficients and unique names.
pub fn parse_table(json: &str) -> Result<Vec<KnotEntry>> {
    let rows: Vec<RawRow> = serde_json::from_str(json)?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        if entries.iter().any(|e: &KnotEntry| e.name == row.name) {
            return Err(Error::Parse(format!("duplicate knot name '{}'", row.name)));
        }
        let q = QPoly::new(row.name.clone(), row.q)
            .map_err(|e| Error::Parse(e.to_string()))?;
        entries.push(KnotEntry { name: row.name, tau: row.tau, q });
    }
    Ok(entries)
}

/// The table shipped with the crate.
pub fn bundled_table() -> Vec<KnotEntry> {
    parse_table(include_str!("../data/hfk_table.json")).expect("bundled table is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lqt(terms: &[(i64, i64, i64)]) -> LaurentQt {
        LaurentQt::from_terms(terms)
    }

    fn table_entry(name: &str) -> KnotEntry {
        bundled_table().into_iter().find(|e| e.name == name).unwrap_or_else(|| {
            panic!("knot '{name}' missing from bundled table")
        })
    }

    #[test]
    fn qpoly_rejects_non_positive_coefficients() {
        assert!(QPoly::new("bad", lqt(&[(0, 0, -1)])).is_err());
        assert!(QPoly::new("ok", lqt(&[(0, 0, 3)])).is_ok());
    }

    #[test]
    fn is_thin_examples() {
        assert!(table_entry("9_46").q.is_thin());
        assert!(table_entry("10_140").q.is_thin());
        assert!(!table_entry("10_128").q.is_thin());
        assert!(QPoly::new("empty", LaurentQt::zero()).unwrap().is_thin());
    }

    #[test]
    fn exactly_two_bundled_knots_are_thin() {
        let thin: Vec<String> =
            bundled_table().into_iter().filter(|e| e.q.is_thin()).map(|e| e.name).collect();
        assert_eq!(thin, vec!["9_46".to_string(), "10_140".to_string()]);
    }

    #[test]
    fn obstruction_passes_with_frozen_quotients() {
        let e = table_entry("9_46");
        let obs = prr_obstruction(&e.q, e.tau);
        assert_eq!(obs.verdict(), "PASSES");
        assert_eq!(obs.quotient(), Some(&lqt(&[(-1, -1, 2), (0, 0, 2)])));

        let e = table_entry("10_140");
        let obs = prr_obstruction(&e.q, e.tau);
        assert_eq!(
            obs.quotient(),
            Some(&lqt(&[(-2, -2, 1), (-1, -1, 1), (0, 0, 1), (1, 1, 1)]))
        );

        let e = table_entry("10_145");
        let obs = prr_obstruction(&e.q, e.tau);
        assert_eq!(
            obs.quotient(),
            Some(&lqt(&[(0, -1, 2), (1, -1, 1), (1, 0, 2), (3, 1, 1)]))
        );
    }

    #[test]
    fn obstruction_fails_divisibility_examples() {
        for name in ["10_128", "10_139", "10_152", "10_154", "10_161"] {
            let e = table_entry(name);
            let obs = prr_obstruction(&e.q, e.tau);
            assert_eq!(obs.verdict(), "FAILS_DIVISIBILITY", "{name}");
            assert_eq!(obs.quotient(), None, "{name}");
        }
    }

    #[test]
    fn obstruction_fails_positivity_on_synthetic_input() {
        // Q − t⁷ = 1 + q³t³ = (1 + qt)(1 − qt + q²t²): divisible, but the
        // quotient has a negative coefficient.
        let q = QPoly::new("synthetic", lqt(&[(0, 0, 1), (3, 3, 1), (0, 7, 1)])).unwrap();
        let obs = prr_obstruction(&q, 7);
        assert_eq!(obs.verdict(), "FAILS_POSITIVITY");
        assert_eq!(obs.quotient(), Some(&lqt(&[(0, 0, 1), (1, 1, -1), (2, 2, 1)])));
    }

    #[test]
    fn reduced_descriptor_tau_tq_and_q() {
        let desc = ReducedComplexDesc::new(vec![
            (3, 0),
            (2, -1),
            (0, -2),
            (-1, -5),
            (-3, -6),
        ])
        .unwrap();
        assert_eq!(desc.tau(), 3);
        assert_eq!(desc.tq(), 2);
        let q = desc.q_poly("test").unwrap();
        assert_eq!(
            q.poly(),
            &lqt(&[(0, 3, 1), (-1, 2, 1), (-2, 0, 1), (-5, -1, 1), (-6, -3, 1)])
        );

        let single = ReducedComplexDesc::new(vec![(0, 0)]).unwrap();
        assert_eq!((single.tau(), single.tq()), (0, 0));
    }

    #[test]
    fn reduced_descriptor_rejects_malformed_input() {
        // Even number of generators.
        assert!(ReducedComplexDesc::new(vec![(1, 0), (0, -1)]).is_err());
        // mu must start at zero.
        assert!(ReducedComplexDesc::new(vec![(1, 1)]).is_err());
        // s must strictly drop across each odd/even pair.
        assert!(ReducedComplexDesc::new(vec![(3, 0), (1, -1), (2, -2)]).is_err());
        // mu must drop by exactly one across each odd/even pair.
        assert!(ReducedComplexDesc::new(vec![(3, 0), (2, -1), (0, -3)]).is_err());
    }

    #[test]
    fn bundled_table_has_the_expected_rows() {
        let names: Vec<String> = bundled_table().into_iter().map(|e| e.name).collect();
        assert_eq!(
            names,
            vec![
                "9_46", "10_128", "10_139", "10_140", "10_145", "10_152", "10_153", "10_154",
                "10_161"
            ]
        );
    }

    #[test]
    fn bundled_10_153_expands_its_factored_form() {
        // q⁻²t⁻³ (1 + t + 2qt + 2qt²) plus the tail written out monomially.
        let factored = lqt(&[(-2, -3, 1)]).mul(&lqt(&[
            (0, 0, 1),
            (0, 1, 1),
            (1, 1, 2),
            (1, 2, 2),
        ]));
        let tail = lqt(&[
            (0, -1, 1),
            (0, 0, 3),
            (1, 1, 2),
            (2, 1, 1),
            (2, 2, 1),
            (3, 2, 2),
            (4, 3, 1),
        ]);
        assert_eq!(&factored.add(&tail), table_entry("10_153").q.poly());
    }

    #[test]
    fn bundled_10_154_expands_its_factored_form() {
        // q⁻⁶t⁻³ (1 + qt + q²t) plus the monomial tail.
        let factored =
            lqt(&[(-6, -3, 1)]).mul(&lqt(&[(0, 0, 1), (1, 1, 1), (2, 1, 1)]));
        let tail = lqt(&[
            (-3, -1, 4),
            (-2, 0, 7),
            (-1, 1, 4),
            (-1, 2, 1),
            (0, 2, 1),
            (0, 3, 1),
        ]);
        assert_eq!(&factored.add(&tail), table_entry("10_154").q.poly());
    }

    #[test]
    fn parse_table_rejects_duplicates_and_bad_coefficients() {
        let dup = r#"[
            {"name": "k", "tau": 0, "Q": [{"q": 0, "t": 0, "c": 1}]},
            {"name": "k", "tau": 1, "Q": [{"q": 0, "t": 0, "c": 1}]}
        ]"#;
        assert!(parse_table(dup).is_err());
        let neg = r#"[{"name": "k", "tau": 0, "Q": [{"q": 0, "t": 0, "c": -2}]}]"#;
        assert!(parse_table(neg).is_err());
    }
}
