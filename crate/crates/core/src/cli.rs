//! Command-line front end.
//!
//! Every command assembles a report whose byte content depends only on the
//! inputs: input files are identified by their SHA-256 digest, collections
//! are iterated in sorted order, and parallel sweeps collect results in a
//! fixed order before printing. Reports render as plain text by default or
//! as JSON with `--json`; every printed invariant is labeled with its
//! provenance (closed-form or pipeline).
//!
//! Exit codes: 0 success, 1 domain or validation error, 2 parse error,
//! 3 internal assertion failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::algebra::LaurentQt;
use crate::complex::{CoeffMode, FreeComplexUw};
use crate::error::{Error, Result};
use crate::homology::ModuleDecomp;
use crate::obstruction::{self, KnotEntry, QPoly};
use crate::staircase::{
    alexander_quotient, closed_form_b_pk1, closed_form_invariants, staircase_complex,
    StaircaseData,
};
use crate::torsion::{invariants_of, pair_lower_bound, structure_check, Invariants};
use crate::unknotting::{kpq, StepTrace};

/// Compute torsion lower bounds for rational unknotting from knot Floer
/// chain complexes.
#[derive(Parser, Debug)]
#[command(name = "cfk", version, about)]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form and pipeline invariants of the torus knot T(p,q).
    Torus {
        p: u32,
        q: u32,
        /// Write the staircase complex to FILE as JSON.
        #[arg(long, value_name = "FILE")]
        emit_complex: Option<PathBuf>,
    },
    /// Torsion invariants of a complex loaded from FILE.
    Invariants { file: PathBuf },
    /// Distance lower bound between two complexes.
    Distance { file_a: PathBuf, file_b: PathBuf },
    /// Tensor two complexes and write the product to OUT.
    Tensor { file_a: PathBuf, file_b: PathBuf, out: PathBuf },
    /// Replacement recursion k(p,q) with its full step trace.
    Kpq { p: u32, q: u32 },
    /// Divisibility obstruction for a named knot or an explicit polynomial.
    Obstruct {
        /// Knot name from the bundled table (e.g. 10_139).
        name: Option<String>,
        /// Concordance invariant tau (with --qfile).
        #[arg(long, requires = "qfile", conflicts_with = "name")]
        tau: Option<i64>,
        /// JSON file holding the dimension polynomial (with --tau).
        #[arg(long, requires = "tau", conflicts_with = "name")]
        qfile: Option<PathBuf>,
    },
    /// Validate a complex file and print every violation.
    Validate { file: PathBuf },
    /// Check the torus-knot identities over a coprime parameter grid.
    Sweep { pmax: u32, qmax: u32 },
}

/// Runs a parsed command, printing its report to stdout.
pub fn run(cli: Cli) -> Result<()> {
    let text = match cli.command {
        Command::Torus { p, q, emit_complex } => cmd_torus(p, q, emit_complex, cli.json)?,
        Command::Invariants { file } => cmd_invariants(&file, cli.json)?,
        Command::Distance { file_a, file_b } => cmd_distance(&file_a, &file_b, cli.json)?,
        Command::Tensor { file_a, file_b, out } => cmd_tensor(&file_a, &file_b, &out, cli.json)?,
        Command::Kpq { p, q } => cmd_kpq(p, q, cli.json)?,
        Command::Obstruct { name, tau, qfile } => cmd_obstruct(name, tau, qfile, cli.json)?,
        Command::Validate { file } => cmd_validate(&file, cli.json)?,
        Command::Sweep { pmax, qmax } => cmd_sweep(pmax, qmax, cli.json)?,
    };
    print!("{text}");
    Ok(())
}

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    inputs: Vec<InputDigest>,
    warnings: Vec<String>,
    result: T,
}

impl<T: Serialize> Report<T> {
    fn render(&self, json: bool, text_body: String) -> String {
        if json {
            let mut out = serde_json::to_string_pretty(self).expect("report serialization");
            out.push('\n');
            out
        } else {
            let mut out = String::new();
            let _ = writeln!(out, "# {}", self.command);
            for input in &self.inputs {
                let _ = writeln!(out, "input {} sha256={}", input.path, input.sha256);
            }
            for warning in &self.warnings {
                let _ = writeln!(out, "warning: {warning}");
            }
            out.push_str(&text_body);
            out
        }
    }
}

fn digest(path: &Path, bytes: &[u8]) -> InputDigest {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let sha: Vec<String> = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    InputDigest { path: path.display().to_string(), sha256: sha.concat() }
}

fn read_input(path: &Path) -> Result<(String, InputDigest)> {
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse(format!("{} is not valid UTF-8", path.display())))?;
    Ok((text, digest(path, &bytes)))
}

fn load_complex(path: &Path) -> Result<(FreeComplexUw, InputDigest)> {
    let (text, digest) = read_input(path)?;
    let complex = FreeComplexUw::from_json(&text)?;
    Ok((complex, digest))
}

/// Loads a validated complex, surfacing the violation report on failure.
fn load_valid_complex(path: &Path) -> Result<(FreeComplexUw, InputDigest)> {
    let (complex, digest) = load_complex(path)?;
    let report = complex.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(report));
    }
    Ok((complex, digest))
}

#[derive(Serialize)]
struct DecompJson {
    mode: CoeffMode,
    free_rank: usize,
    torsion: crate::torsion::TorsionSequence,
    structure_check: bool,
}

fn decomp_json(c: &FreeComplexUw, mode: CoeffMode, d: &ModuleDecomp) -> DecompJson {
    DecompJson {
        mode,
        free_rank: d.free_rank,
        torsion: d.torsion.clone(),
        structure_check: structure_check(d, c.components(), c.markings()),
    }
}

fn invariants_text(c: &FreeComplexUw, inv: &Invariants, provenance: &str) -> String {
    let mut out = String::new();
    for (mode, seq, d) in [
        (CoeffMode::WZero, "n", &inv.w_zero),
        (CoeffMode::WEqualsU, "m", &inv.w_equals_u),
    ] {
        let ok = structure_check(d, c.components(), c.markings());
        let _ = writeln!(
            out,
            "{mode}: free rank {}, {seq} = {} (structure check: {})",
            d.free_rank,
            d.torsion,
            if ok { "ok" } else { "FAILED" }
        );
    }
    let _ = writeln!(out, "tq  = {} [{provenance}]", inv.tq());
    let _ = writeln!(out, "tq' = {} [{provenance}]", inv.tqp());
    out
}

// ---------------------------------------------------------------------------
// torus
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TorusResult {
    p: u32,
    q: u32,
    exponents: Vec<u32>,
    gap_vector: Vec<u32>,
    closed_form: ClosedFormJson,
    pipeline: PipelineJson,
    k: usize,
    trace: StepTrace,
    emitted: Option<String>,
}

#[derive(Serialize)]
struct ClosedFormJson {
    tq: u32,
    tqp: u32,
}

#[derive(Serialize)]
struct PipelineJson {
    tq: u32,
    tqp: u32,
    w_zero: DecompJson,
    w_equals_u: DecompJson,
}

fn torus_pipeline(data: &StaircaseData) -> Result<(FreeComplexUw, Invariants)> {
    let complex = staircase_complex(data);
    let inv = invariants_of(&complex)?;
    Ok((complex, inv))
}

fn cmd_torus(p: u32, q: u32, emit: Option<PathBuf>, json: bool) -> Result<String> {
    let data = alexander_quotient(p, q)?;
    let (closed_tq, closed_tqp) = closed_form_invariants(&data.b)?;
    let (complex, inv) = torus_pipeline(&data)?;
    if (inv.tq(), inv.tqp()) != (closed_tq, closed_tqp) {
        return Err(Error::Internal(format!(
            "pipeline invariants ({}, {}) disagree with closed form ({closed_tq}, {closed_tqp}) \
             for T({p},{q})",
            inv.tq(),
            inv.tqp()
        )));
    }
    let trace = kpq(p, q)?;
    let emitted = match &emit {
        Some(path) => {
            std::fs::write(path, complex.to_json())?;
            Some(path.display().to_string())
        }
        None => None,
    };

    let report = Report {
        command: format!("torus {p} {q}"),
        inputs: vec![],
        warnings: vec![],
        result: TorusResult {
            p,
            q,
            exponents: data.a.clone(),
            gap_vector: data.b.clone(),
            closed_form: ClosedFormJson { tq: closed_tq, tqp: closed_tqp },
            pipeline: PipelineJson {
                tq: inv.tq(),
                tqp: inv.tqp(),
                w_zero: decomp_json(&complex, CoeffMode::WZero, &inv.w_zero),
                w_equals_u: decomp_json(&complex, CoeffMode::WEqualsU, &inv.w_equals_u),
            },
            k: trace.k(),
            trace: trace.clone(),
            emitted: emitted.clone(),
        },
    };

    let mut body = String::new();
    let _ = writeln!(body, "T({p},{q}) staircase");
    let _ = writeln!(body, "a = {:?}", data.a);
    let _ = writeln!(body, "b = {:?}", data.b);
    let _ = writeln!(body, "tq  = {closed_tq} [closed-form]");
    let _ = writeln!(body, "tq' = {closed_tqp} [closed-form]");
    body.push_str(&invariants_text(&complex, &inv, "pipeline"));
    let _ = writeln!(body, "k({p},{q}) = {} replacement steps", trace.k());
    body.push_str(&trace_lines(&trace));
    if let Some(path) = emitted {
        let _ = writeln!(body, "complex written to {path}");
    }
    Ok(report.render(json, body))
}

// ---------------------------------------------------------------------------
// invariants / distance / tensor / validate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct InvariantsResult {
    name: String,
    generators: usize,
    tq: u32,
    tqp: u32,
    w_zero: DecompJson,
    w_equals_u: DecompJson,
}

fn cmd_invariants(file: &Path, json: bool) -> Result<String> {
    let (complex, digest) = load_valid_complex(file)?;
    let inv = invariants_of(&complex)?;
    let report = Report {
        command: format!("invariants {}", file.display()),
        inputs: vec![digest],
        warnings: vec![],
        result: InvariantsResult {
            name: complex.name().to_string(),
            generators: complex.num_generators(),
            tq: inv.tq(),
            tqp: inv.tqp(),
            w_zero: decomp_json(&complex, CoeffMode::WZero, &inv.w_zero),
            w_equals_u: decomp_json(&complex, CoeffMode::WEqualsU, &inv.w_equals_u),
        },
    };
    let mut body = String::new();
    let _ = writeln!(body, "'{}': {} generators", complex.name(), complex.num_generators());
    body.push_str(&invariants_text(&complex, &inv, "pipeline"));
    Ok(report.render(json, body))
}

#[derive(Serialize)]
struct DistanceResult {
    name_a: String,
    name_b: String,
    bound_from_w_zero: u32,
    bound_from_w_equals_u: u32,
    lower_bound: u32,
}

fn cmd_distance(file_a: &Path, file_b: &Path, json: bool) -> Result<String> {
    let (a, dig_a) = load_valid_complex(file_a)?;
    let (b, dig_b) = load_valid_complex(file_b)?;
    let inv_a = invariants_of(&a)?;
    let inv_b = invariants_of(&b)?;
    let n_bound = pair_lower_bound(inv_a.n_seq(), inv_b.n_seq(), a.components(), b.components())?;
    let m_bound = pair_lower_bound(inv_a.m_seq(), inv_b.m_seq(), a.components(), b.components())?;
    let report = Report {
        command: format!("distance {} {}", file_a.display(), file_b.display()),
        inputs: vec![dig_a, dig_b],
        warnings: vec![],
        result: DistanceResult {
            name_a: a.name().to_string(),
            name_b: b.name().to_string(),
            bound_from_w_zero: n_bound,
            bound_from_w_equals_u: m_bound,
            lower_bound: n_bound.max(m_bound),
        },
    };
    let mut body = String::new();
    let _ = writeln!(body, "'{}' vs '{}'", a.name(), b.name());
    let _ = writeln!(
        body,
        "distance bound from W_ZERO torsion {} vs {}: {n_bound} [pipeline]",
        inv_a.n_seq(),
        inv_b.n_seq()
    );
    let _ = writeln!(
        body,
        "distance bound from W_EQUALS_U torsion {} vs {}: {m_bound} [pipeline]",
        inv_a.m_seq(),
        inv_b.m_seq()
    );
    let _ = writeln!(body, "combined lower bound: {}", n_bound.max(m_bound));
    Ok(report.render(json, body))
}

#[derive(Serialize)]
struct TensorResult {
    name: String,
    generators: usize,
    out: String,
}

fn cmd_tensor(file_a: &Path, file_b: &Path, out: &Path, json: bool) -> Result<String> {
    let (a, dig_a) = load_valid_complex(file_a)?;
    let (b, dig_b) = load_valid_complex(file_b)?;
    let product = crate::complex::tensor(&a, &b)?;
    std::fs::write(out, product.to_json())?;
    let report = Report {
        command: format!("tensor {} {}", file_a.display(), file_b.display()),
        inputs: vec![dig_a, dig_b],
        warnings: vec![],
        result: TensorResult {
            name: product.name().to_string(),
            generators: product.num_generators(),
            out: out.display().to_string(),
        },
    };
    let mut body = String::new();
    let _ = writeln!(
        body,
        "'{}': {} generators, written to {}",
        product.name(),
        product.num_generators(),
        out.display()
    );
    Ok(report.render(json, body))
}

#[derive(Serialize)]
struct ValidateResult {
    name: String,
    valid: bool,
    violations: Vec<String>,
}

fn cmd_validate(file: &Path, json: bool) -> Result<String> {
    let (complex, digest) = load_complex(file)?;
    let validation = complex.validate();
    let report = Report {
        command: format!("validate {}", file.display()),
        inputs: vec![digest],
        warnings: vec![],
        result: ValidateResult {
            name: complex.name().to_string(),
            valid: validation.is_valid(),
            violations: validation.violations.iter().map(|v| v.to_string()).collect(),
        },
    };
    let mut body = String::new();
    if validation.is_valid() {
        let _ = writeln!(body, "'{}' is valid", complex.name());
        Ok(report.render(json, body))
    } else {
        let _ = writeln!(body, "'{}' is INVALID:", complex.name());
        let _ = writeln!(body, "{validation}");
        // Print the full report, then fail with the validation exit code.
        print!("{}", report.render(json, body));
        Err(Error::Invalid(validation))
    }
}

// ---------------------------------------------------------------------------
// kpq
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct KpqResult {
    p: u32,
    q: u32,
    k: usize,
    trace: StepTrace,
}

/// Formats a replacement trace as indented step lines plus the terminal pair.
fn trace_lines(trace: &StepTrace) -> String {
    let mut out = String::new();
    for s in &trace.steps {
        let _ = writeln!(
            out,
            "  ({}, {}) -> i = {}, j = {}, sign = {:+}",
            s.p, s.q, s.i, s.j, s.sign
        );
    }
    let _ = writeln!(out, "terminal pair ({}, {})", trace.terminal.0, trace.terminal.1);
    out
}

fn cmd_kpq(p: u32, q: u32, json: bool) -> Result<String> {
    let trace = kpq(p, q)?;
    let report = Report {
        command: format!("kpq {p} {q}"),
        inputs: vec![],
        warnings: vec![],
        result: KpqResult { p, q, k: trace.k(), trace: trace.clone() },
    };
    let mut body = String::new();
    let _ = writeln!(body, "k({p},{q}) = {}", trace.k());
    body.push_str(&trace_lines(&trace));
    Ok(report.render(json, body))
}

// ---------------------------------------------------------------------------
// obstruct
// ---------------------------------------------------------------------------

/// Loads the knot table, honoring the `CFK_DATA_DIR` override.
pub fn load_table() -> Result<Vec<KnotEntry>> {
    match std::env::var_os("CFK_DATA_DIR") {
        Some(dir) => {
            let path = Path::new(&dir).join("hfk_table.json");
            let (text, _) = read_input(&path)?;
            obstruction::parse_table(&text)
        }
        None => Ok(obstruction::bundled_table()),
    }
}

#[derive(Serialize)]
struct ObstructResult {
    name: String,
    tau: i64,
    thin: bool,
    verdict: String,
    quotient: Option<LaurentQt>,
}

fn cmd_obstruct(
    name: Option<String>,
    tau: Option<i64>,
    qfile: Option<PathBuf>,
    json: bool,
) -> Result<String> {
    let (q, tau, inputs) = match (name, tau, qfile) {
        (Some(name), None, None) => {
            let table = load_table()?;
            let entry = table
                .into_iter()
                .find(|e| e.name == name)
                .ok_or_else(|| Error::Domain(format!("knot '{name}' is not in the table")))?;
            (entry.q, entry.tau, vec![])
        }
        (None, Some(tau), Some(path)) => {
            let (text, digest) = read_input(&path)?;
            let poly: LaurentQt = serde_json::from_str(&text)?;
            let q = QPoly::new(path.display().to_string(), poly)?;
            (q, tau, vec![digest])
        }
        _ => {
            return Err(Error::Parse(
                "obstruct needs a knot name, or --tau together with --qfile".into(),
            ))
        }
    };
    let obs = crate::obstruction::prr_obstruction(&q, tau);
    let mut warnings = Vec::new();
    if q.is_thin() {
        warnings.push(format!(
            "'{}' is thin; the obstruction passes for every thin knot",
            q.name()
        ));
    }
    let report = Report {
        command: format!("obstruct {}", q.name()),
        inputs,
        warnings,
        result: ObstructResult {
            name: q.name().to_string(),
            tau,
            thin: q.is_thin(),
            verdict: obs.verdict().to_string(),
            quotient: obs.quotient().cloned(),
        },
    };
    let mut body = String::new();
    let _ = writeln!(body, "'{}', tau = {tau}, Q = {}", q.name(), q.poly());
    let _ = writeln!(body, "thin: {}", if q.is_thin() { "yes" } else { "no" });
    let _ = writeln!(body, "verdict: {}", obs.verdict());
    if let Some(quotient) = obs.quotient() {
        let _ = writeln!(body, "quotient: {quotient}");
    }
    Ok(report.render(json, body))
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SweepResult {
    pmax: u32,
    qmax: u32,
    pairs_checked: usize,
    violations: Vec<String>,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks the closed-form identities for one coprime pair; returns
/// violations and informational warnings.
fn sweep_pair(p: u32, q: u32) -> Result<(Vec<String>, Vec<String>)> {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let data = alexander_quotient(p, q)?;
    let (tq, tqp) = closed_form_invariants(&data.b)?;
    if tq != p - 1 {
        violations.push(format!("T({p},{q}): tq = {tq}, expected p - 1 = {}", p - 1));
    }
    let b = &data.b;
    if b.len() % 2 != 0 || b.len() < 2 || (b[b.len() - 2], b[b.len() - 1]) != (p - 1, 1) {
        violations.push(format!("T({p},{q}): gap vector does not end in ({}, 1)", p - 1));
    }
    if b.iter().any(|&g| g > p - 1) {
        violations.push(format!("T({p},{q}): gap exceeds p - 1"));
    }
    if q % p == 1 {
        let n = (q - 1) / p;
        if *b != closed_form_b_pk1(p, n)? {
            violations.push(format!("T({p},{q}): gap vector differs from the q = pn+1 form"));
        }
        if tqp != p / 2 {
            violations.push(format!("T({p},{q}): tq' = {tqp}, expected floor(p/2) = {}", p / 2));
        }
    }
    let k = kpq(p, q)?.k() as u32;
    if tqp > k {
        violations.push(format!("T({p},{q}): tq' = {tqp} exceeds k = {k}"));
    } else if tqp < k {
        warnings.push(format!("T({p},{q}): tq' = {tqp} < k = {k}"));
    }
    Ok((violations, warnings))
}

fn cmd_sweep(pmax: u32, qmax: u32, json: bool) -> Result<String> {
    if pmax < 2 || qmax <= pmax {
        return Err(Error::Domain(format!(
            "sweep needs 2 <= pmax < qmax, got ({pmax}, {qmax})"
        )));
    }
    let pairs: Vec<(u32, u32)> = (2..=pmax)
        .flat_map(|p| ((p + 1)..=qmax).map(move |q| (p, q)))
        .filter(|&(p, q)| gcd(p, q) == 1)
        .collect();
    // Parallel evaluation, deterministic order: results are collected
    // pair-by-pair before any output is assembled.
    let outcomes: Vec<Result<(Vec<String>, Vec<String>)>> =
        pairs.par_iter().map(|&(p, q)| sweep_pair(p, q)).collect();
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    for outcome in outcomes {
        let (v, w) = outcome?;
        violations.extend(v);
        warnings.extend(w);
    }
    let report = Report {
        command: format!("sweep {pmax} {qmax}"),
        inputs: vec![],
        warnings,
        result: SweepResult {
            pmax,
            qmax,
            pairs_checked: pairs.len(),
            violations: violations.clone(),
        },
    };
    let mut body = String::new();
    let _ = writeln!(
        body,
        "checked {} coprime pairs with 1 < p <= {pmax}, p < q <= {qmax} [closed-form]",
        pairs.len()
    );
    for v in &violations {
        let _ = writeln!(body, "VIOLATION: {v}");
    }
    let _ = writeln!(body, "{} violations", violations.len());
    Ok(report.render(json, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_subcommands() {
        let cli = Cli::try_parse_from(["cfk", "torus", "3", "4"]).unwrap();
        assert!(matches!(cli.command, Command::Torus { p: 3, q: 4, emit_complex: None }));
        let cli = Cli::try_parse_from(["cfk", "--json", "kpq", "6", "7"]).unwrap();
        assert!(cli.json);
        assert!(Cli::try_parse_from(["cfk", "torus", "x", "4"]).is_err());
        assert!(Cli::try_parse_from(["cfk", "obstruct", "9_46", "--tau", "0"]).is_err());
    }

    #[test]
    fn torus_report_is_deterministic() {
        let a = cmd_torus(3, 4, None, false).unwrap();
        let b = cmd_torus(3, 4, None, false).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("tq  = 2 [closed-form]"));
        assert!(a.contains("tq' = 1 [closed-form]"));
        assert!(a.contains("tq  = 2 [pipeline]"));
        assert!(a.contains("k(3,4) = 1"));
    }

    #[test]
    fn obstruct_bundled_knot() {
        let out = cmd_obstruct(Some("10_139".into()), None, None, false).unwrap();
        assert!(out.contains("verdict: FAILS_DIVISIBILITY"));
        let out = cmd_obstruct(Some("9_46".into()), None, None, true).unwrap();
        assert!(out.contains("\"verdict\": \"PASSES\""));
        assert!(cmd_obstruct(Some("bogus".into()), None, None, false).is_err());
    }

    #[test]
    fn sweep_small_grid_is_clean() {
        let out = cmd_sweep(6, 13, false).unwrap();
        assert!(out.contains("0 violations"));
        assert!(cmd_sweep(1, 5, false).is_err());
    }
}
