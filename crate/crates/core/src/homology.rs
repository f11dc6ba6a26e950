//! Homology of free complexes over the PID `F₂[u]`.
//!
//! The decomposition `H ≅ F₂[u]^r ⊕ ⊕_i F₂[u]/(u^{n_i})` is computed in
//! three steps:
//!
//! 1. a column Hermite reduction of the differential yields a basis of the
//!    cycle module (kernel);
//! 2. every boundary (image column) is solved exactly in that basis, giving
//!    a presentation matrix of the homology;
//! 3. the Smith normal form of the presentation matrix reads off the free
//!    rank and the torsion exponents.
//!
//! For valid inputs every invariant factor is a power of `u` — the
//! differential drops the `δ = maslov − alexander` grading by exactly 1 and
//! `u` is `δ`-homogeneous, so the presentation matrix is homogeneous and
//! its Smith form diagonal is monomial. A non-monomial factor therefore
//! signals an internal bug and is reported as such, never silently
//! accepted.
//!
//! [`truncated_dimension`] is an independent cross-check: it computes
//! `dim_F₂ H(C ⊗ F₂[u]/(u^n))` by plain Gaussian elimination over `F₂`,
//! without touching the Hermite/Smith machinery.

use std::fmt;

use serde::Serialize;

use crate::algebra::PolyU;
use crate::complex::FreeComplexU;
use crate::error::{Error, Result};
use crate::torsion::TorsionSequence;

/// Hard ceiling on entry degrees during matrix reduction. Staying under it
/// is an internal invariant — legitimate inputs stay far below — so
/// exceeding it aborts rather than returning an error.
pub const DEGREE_CAP: usize = 1_000_000;

/// A dense matrix over `F₂[u]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixU {
    rows: usize,
    cols: usize,
    data: Vec<PolyU>,
}

impl MatrixU {
    pub fn zero(rows: usize, cols: usize) -> Self {
        MatrixU { rows, cols, data: vec![PolyU::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixU::zero(n, n);
        for i in 0..n {
            m.set(i, i, PolyU::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<PolyU>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatrixU { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix with the given number of rows from column vectors.
    pub fn from_columns(rows: usize, columns: Vec<Vec<PolyU>>) -> Self {
        let mut m = MatrixU::zero(rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, p) in col.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyU {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: PolyU) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(PolyU::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<PolyU> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, rhs: &MatrixU) -> MatrixU {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = MatrixU::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.mul(b);
                    self_entry_add(&mut out, i, j, &prod);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += f · row[src]` (characteristic 2, so this is also
    /// subtraction).
    fn add_scaled_row(&mut self, dst: usize, src: usize, f: &PolyU) {
        assert_ne!(dst, src);
        for j in 0..self.cols {
            let prod = f.mul(self.get(src, j));
            self_entry_add(self, dst, j, &prod);
        }
    }

    /// `col[dst] += f · col[src]`.
    fn add_scaled_col(&mut self, dst: usize, src: usize, f: &PolyU) {
        assert_ne!(dst, src);
        for i in 0..self.rows {
            let prod = f.mul(self.get(i, src));
            self_entry_add(self, i, dst, &prod);
        }
    }
}

fn self_entry_add(m: &mut MatrixU, i: usize, j: usize, p: &PolyU) {
    let entry = &mut m.data[i * m.cols + j];
    entry.add_assign(p);
    assert!(
        entry.degree().is_none_or(|d| d <= DEGREE_CAP),
        "degree cap {DEGREE_CAP} exceeded during matrix reduction"
    );
}

impl fmt::Display for MatrixU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Result of [`snf`]: `left · m · right` is diagonal with the entries of
/// `diag` (all nonzero, each dividing the next) in the top-left corner and
/// zeros elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub diag: Vec<PolyU>,
    pub left: MatrixU,
    pub right: MatrixU,
}

impl Snf {
    /// The diagonal embedded back into a full-size matrix.
    pub fn diag_matrix(&self, rows: usize, cols: usize) -> MatrixU {
        let mut m = MatrixU::zero(rows, cols);
        for (i, d) in self.diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }
}

/// Finds the minimal-degree nonzero entry of the trailing submatrix
/// starting at `(k, k)`; ties are broken by row-major scan order, which
/// makes the whole reduction deterministic.
fn pivot_search(a: &MatrixU, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if let Some(d) = a.get(i, j).degree() {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form over the Euclidean domain `F₂[u]`.
///
/// Deterministic for a given input; the zero matrix yields an empty
/// diagonal. The only unit in `F₂[u]` is 1, so no normalization step is
/// needed beyond the reduction itself.
pub fn snf(m: &MatrixU) -> Snf {
    let mut a = m.clone();
    let mut left = MatrixU::identity(a.rows());
    let mut right = MatrixU::identity(a.cols());
    let mut k = 0;
    while k < a.rows().min(a.cols()) {
        let Some((pi, pj)) = pivot_search(&a, k) else { break };
        a.swap_rows(k, pi);
        left.swap_rows(k, pi);
        a.swap_cols(k, pj);
        right.swap_cols(k, pj);

        // Clear below and right of the pivot. A nonzero remainder leaves a
        // smaller-degree entry behind, so re-run the pivot search.
        let mut exact = true;
        for i in k + 1..a.rows() {
            if a.get(i, k).is_zero() {
                continue;
            }
            let (q, r) = a.get(i, k).div_rem(a.get(k, k)).expect("pivot is nonzero");
            a.add_scaled_row(i, k, &q);
            left.add_scaled_row(i, k, &q);
            exact &= r.is_zero();
        }
        if !exact {
            continue;
        }
        for j in k + 1..a.cols() {
            if a.get(k, j).is_zero() {
                continue;
            }
            let (q, r) = a.get(k, j).div_rem(a.get(k, k)).expect("pivot is nonzero");
            a.add_scaled_col(j, k, &q);
            right.add_scaled_col(j, k, &q);
            exact &= r.is_zero();
        }
        if !exact {
            continue;
        }

        // Enforce the divisibility chain: fold a non-divisible entry into
        // row k (its row entries there are currently zero) and reduce again.
        let pivot = a.get(k, k).clone();
        let mut offending = None;
        'search: for i in k + 1..a.rows() {
            for j in k + 1..a.cols() {
                if !pivot.divides(a.get(i, j)) {
                    offending = Some(i);
                    break 'search;
                }
            }
        }
        if let Some(i) = offending {
            a.add_scaled_row(k, i, &PolyU::one());
            left.add_scaled_row(k, i, &PolyU::one());
            continue;
        }
        k += 1;
    }
    Snf { diag: (0..k).map(|i| a.get(i, i).clone()).collect(), left, right }
}

/// Column Hermite-style reduction. Returns `(echelon, transform, pivots)`
/// with `echelon = m · transform`, `transform` invertible, and `pivots` a
/// list of `(row, col)` pairs in increasing row order such that each pivot
/// column is the only column (among those not already pivoted higher up)
/// with a nonzero entry in its pivot row. Columns that end up without a
/// pivot are identically zero; the corresponding columns of `transform`
/// form a basis of the kernel of `m`.
pub(crate) fn column_echelon(m: &MatrixU) -> (MatrixU, MatrixU, Vec<(usize, usize)>) {
    let mut e = m.clone();
    let mut v = MatrixU::identity(m.cols());
    let mut pivots = Vec::new();
    let mut available: Vec<usize> = (0..m.cols()).collect();
    for r in 0..m.rows() {
        loop {
            // Minimal-degree nonzero entry in row r among available
            // columns; ties break toward the smallest column index.
            let mut best: Option<(usize, usize)> = None;
            for &c in &available {
                if let Some(d) = e.get(r, c).degree() {
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, c));
                    }
                }
            }
            let Some((_, pc)) = best else { break };
            let mut exact = true;
            for &c in &available {
                if c == pc || e.get(r, c).is_zero() {
                    continue;
                }
                let (q, rem) = e.get(r, c).div_rem(e.get(r, pc)).expect("pivot is nonzero");
                e.add_scaled_col(c, pc, &q);
                v.add_scaled_col(c, pc, &q);
                exact &= rem.is_zero();
            }
            if exact {
                pivots.push((r, pc));
                available.retain(|&c| c != pc);
                break;
            }
        }
    }
    (e, v, pivots)
}

/// Solves `echelon · β = target` by forward substitution along the pivots.
///
/// All divisions must be exact and non-pivot rows must cancel; failure
/// means the target is outside the column span, which callers treat as an
/// internal error.
fn solve_in_echelon(
    echelon: &MatrixU,
    pivots: &[(usize, usize)],
    target: &[PolyU],
) -> Result<Vec<PolyU>> {
    assert_eq!(target.len(), echelon.rows());
    let mut resid = target.to_vec();
    let mut beta = vec![PolyU::zero(); echelon.cols()];
    let mut next_pivot = pivots.iter().peekable();
    for r in 0..echelon.rows() {
        let pivot_here = next_pivot.peek().filter(|&&&(pr, _)| pr == r).copied().copied();
        match pivot_here {
            Some((_, pc)) => {
                next_pivot.next();
                if resid[r].is_zero() {
                    continue;
                }
                let (q, rem) = resid[r].div_rem(echelon.get(r, pc))?;
                if !rem.is_zero() {
                    return Err(Error::Internal(
                        "boundary vector is not an exact combination of cycles".into(),
                    ));
                }
                for (i, r_entry) in resid.iter_mut().enumerate().skip(r) {
                    r_entry.add_assign(&q.mul(echelon.get(i, pc)));
                }
                beta[pc] = q;
            }
            None => {
                if !resid[r].is_zero() {
                    return Err(Error::Internal(
                        "boundary vector leaves the cycle module".into(),
                    ));
                }
            }
        }
    }
    Ok(beta)
}

/// Homology of an `F₂[u]` complex as a finitely generated module: free rank
/// plus torsion exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDecomp {
    pub free_rank: usize,
    pub torsion: TorsionSequence,
}

impl fmt::Display for ModuleDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "free rank {}, torsion {}", self.free_rank, self.torsion)
    }
}

/// The differential as a matrix: entry `(i, j)` is the coefficient of
/// generator `i` in `d(generator j)`.
fn differential_matrix(c: &FreeComplexU) -> MatrixU {
    let g = c.num_generators();
    let mut m = MatrixU::zero(g, g);
    for j in 0..g {
        for (ti, poly) in c.outgoing(j) {
            m.set(*ti, j, poly.clone());
        }
    }
    m
}

/// Computes the homology decomposition of a complex whose differential
/// squares to zero (checked; violation is a domain error).
pub fn homology(c: &FreeComplexU) -> Result<ModuleDecomp> {
    if let Some((fi, ti, _)) = c.d_squared_residuals().first() {
        return Err(Error::Domain(format!(
            "d^2 != 0 in '{}' ({} mode): d^2({}) has a component at {}",
            c.name(),
            c.mode(),
            c.generators()[*fi].id,
            c.generators()[*ti].id
        )));
    }
    let g = c.num_generators();
    if g == 0 {
        return Ok(ModuleDecomp { free_rank: 0, torsion: TorsionSequence::empty() });
    }
    let d = differential_matrix(c);

    // Cycle module: kernel basis from the unpivoted transform columns.
    let (_, v, pivots) = column_echelon(&d);
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let kernel_cols: Vec<usize> =
        (0..g).filter(|c| !pivot_cols.contains(c)).collect();
    let k = kernel_cols.len();
    if k == 0 {
        return Ok(ModuleDecomp { free_rank: 0, torsion: TorsionSequence::empty() });
    }
    let kernel_basis =
        MatrixU::from_columns(g, kernel_cols.iter().map(|&c| v.column(c)).collect());

    // Presentation of H = ker / im: express every nonzero boundary column
    // in the kernel basis. Solving against a fixed echelon form of the
    // basis changes coordinates by an invertible transform, which leaves
    // the Smith form unchanged.
    let (ke, _, kpivots) = column_echelon(&kernel_basis);
    let mut presentation_cols = Vec::new();
    for j in 0..g {
        let col = d.column(j);
        if col.iter().all(PolyU::is_zero) {
            continue;
        }
        presentation_cols.push(solve_in_echelon(&ke, &kpivots, &col)?);
    }
    let presentation = MatrixU::from_columns(k, presentation_cols);

    let s = snf(&presentation);
    let mut exponents = Vec::new();
    for d in &s.diag {
        if d.is_one() {
            continue;
        }
        match d.as_monomial() {
            Some(e) => exponents.push(e as u32),
            None => {
                return Err(Error::Internal(format!(
                    "non-monomial invariant factor {d} in homology of '{}'",
                    c.name()
                )))
            }
        }
    }
    Ok(ModuleDecomp {
        free_rank: k - s.diag.len(),
        torsion: TorsionSequence::new(exponents),
    })
}

/// `dim_F₂ H(C ⊗ F₂[u]/(u^n))`, computed by Gaussian elimination over `F₂`
/// on the `n·g`-dimensional truncated complex — deliberately independent of
/// the Hermite/Smith pipeline so it can serve as an oracle for it.
///
/// For `H ≅ F₂[u]^r ⊕ ⊕ F₂[u]/(u^{n_i})` the universal-coefficient count
/// gives `r·n + Σ 2·min(n_i, n)`.
pub fn truncated_dimension(c: &FreeComplexU, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("truncation order must be positive".into()));
    }
    if !c.d_squared_residuals().is_empty() {
        return Err(Error::Domain(format!(
            "d^2 != 0 in '{}' ({} mode)",
            c.name(),
            c.mode()
        )));
    }
    let g = c.num_generators();
    let dim = g
        .checked_mul(n)
        .filter(|&d| d <= 1_000_000)
        .ok_or_else(|| Error::Domain("truncated complex is too large".into()))?;
    let words = dim.div_ceil(64);

    // Basis vector (i, j) = u^j · generator i at flat index i*n + j.
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(dim);
    for i in 0..g {
        for j in 0..n {
            let mut row = vec![0u64; words];
            for (ti, poly) in c.outgoing(i) {
                for e in poly.exponents() {
                    let jj = j + e;
                    if jj < n {
                        let idx = ti * n + jj;
                        row[idx / 64] ^= 1 << (idx % 64);
                    }
                }
            }
            rows.push(row);
        }
    }
    let rank = gf2_rank(rows, dim);
    Ok(dim - 2 * rank)
}

fn gf2_rank(rows: Vec<Vec<u64>>, dim: usize) -> usize {
    let mut pivot_rows: Vec<Option<Vec<u64>>> = vec![None; dim];
    let mut rank = 0;
    for mut row in rows {
        while let Some(lead) = leading_bit(&row) {
            match &pivot_rows[lead] {
                Some(p) => {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivot_rows[lead] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    for (i, &w) in row.iter().enumerate().rev() {
        if w != 0 {
            return Some(i * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}
