//! The gen engine: computes the smallest R-subgroup of R^n containing a
//! list of vectors, as a direct sum ⊕ u_iR.
//!
//! Plain row reduction is not enough, because (v+w)∘r ≠ v∘r + w∘r in
//! general: after reduction a column can still hold several non-zero
//! entries that no row operation can separate. The way out is the
//! distributivity trick: a failure (α+β)∘λ ≠ α∘λ + β∘λ of right
//! distributivity is steered into a new vector θ that vanishes before the
//! stuck column and is non-zero on it. Normalizing θ gives a row φ that
//! can clear the column. Sums of right multiples of existing rows stay
//! inside the generated R-subgroup, so appending φ changes nothing about
//! the set being described.
//!
//! Every run emits a certificate: the exact sequence of row operations,
//! trick applications, appends, and drops. Replaying it from the input
//! reproduces the basis, and each ingredient can be recomputed and
//! checked independently.

use crate::dickson::{NdTriple, NearfieldCtx};
use crate::error::NfError;
use crate::field::FieldElem;
use crate::nvs::{apply_row_op, rref_logged, NfMatrix, NfVector, RowOp};

/// Basis of a generated R-subgroup: non-zero rows u_1..u_k' with the set
/// equal to ⊕ u_iR. In the nearfield case (grade m > 1) every column of
/// the row stack has at most one non-zero entry; in the field case the
/// rows are reduced echelon rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenBasis {
    n: usize,
    rows: Vec<NfVector>,
}

impl GenBasis {
    pub fn new(n: usize, rows: Vec<NfVector>) -> Result<GenBasis, NfError> {
        for row in &rows {
            if row.len() != n {
                return Err(NfError::DimMismatch { expected: n, got: row.len() });
            }
            if row.is_zero() {
                return Err(NfError::BadRange("basis rows must be non-zero".into()));
            }
        }
        Ok(GenBasis { n, rows })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[NfVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &NfVector {
        &self.rows[i]
    }

    /// True when no column holds two non-zero entries, the shape that
    /// makes the sum ⊕ u_iR visibly direct.
    pub fn columns_disjoint(&self) -> bool {
        (0..self.n).all(|j| self.rows.iter().filter(|r| !r[j].is_zero()).count() <= 1)
    }
}

/// One application of the distributivity trick at column `col`: the two
/// source rows, the non-distributive triple used, and the produced
/// θ, γ = θ_col, φ = θ∘γ^{-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrickRecord {
    pub r: usize,
    pub s: usize,
    pub col: usize,
    pub triple: NdTriple,
    pub theta: NfVector,
    pub gamma: FieldElem,
    pub phi: NfVector,
}

/// A certificate step. Row operations and appends mutate the row list;
/// trick records justify the row appended right after them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertStep {
    Row(RowOp),
    Trick(TrickRecord),
    Append { index: usize, row: NfVector },
    Drop { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GenCertificate {
    pub steps: Vec<CertStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOutcome {
    pub basis: GenBasis,
    pub certificate: GenCertificate,
    /// Set when the context is a plain field (grade 1), where the basis is
    /// a classical reduced echelon basis instead of column-disjoint rows.
    pub field_mode: bool,
}

/// Runs the distributivity trick on rows w_r, w_s at column `col`
/// (0-based). Requires both rows non-zero there and no earlier column
/// where both are non-zero; under that shape θ provably vanishes before
/// `col` and equals γ = (α+β)∘λ − α∘λ − β∘λ ≠ 0 on it. The row indices
/// are carried into the record for certificate bookkeeping.
pub fn distributivity_trick(
    nf: &NearfieldCtx,
    w_r: &NfVector,
    w_s: &NfVector,
    r_idx: usize,
    s_idx: usize,
    col: usize,
    triple: &NdTriple,
) -> Result<TrickRecord, NfError> {
    if w_r.len() != w_s.len() {
        return Err(NfError::DimMismatch { expected: w_r.len(), got: w_s.len() });
    }
    if !triple.is_witness(nf) {
        return Err(NfError::TripleInvalid);
    }
    if w_r[col].is_zero() {
        return Err(NfError::PivotZero { row: r_idx, col });
    }
    if w_s[col].is_zero() {
        return Err(NfError::PivotZero { row: s_idx, col });
    }
    for l in 0..col {
        if !w_r[l].is_zero() && !w_s[l].is_zero() {
            return Err(NfError::TrickPrecondition { col: l });
        }
    }

    let (alpha, beta, lambda) = (triple.alpha, triple.beta, triple.lambda);
    let alpha_p = nf.mul(nf.inv(w_r[col])?, alpha);
    let beta_p = nf.mul(nf.inv(w_s[col])?, beta);

    let mixed = w_r.scale(alpha_p, nf).add(&w_s.scale(beta_p, nf), nf)?;
    let theta = mixed
        .scale(lambda, nf)
        .sub(&w_r.scale(nf.mul(alpha_p, lambda), nf), nf)?
        .sub(&w_s.scale(nf.mul(beta_p, lambda), nf), nf)?;

    let gamma = nf.sub(
        nf.mul(nf.add(alpha, beta), lambda),
        nf.add(nf.mul(alpha, lambda), nf.mul(beta, lambda)),
    );
    debug_assert!(!gamma.is_zero());
    if theta[col] != gamma {
        return Err(NfError::Internal("trick column value diverged from its triple".into()));
    }
    if (0..col).any(|l| !theta[l].is_zero()) {
        return Err(NfError::Internal("trick output non-zero before its column".into()));
    }

    let phi = theta.scale(nf.inv(gamma)?, nf);
    debug_assert_eq!(phi[col], FieldElem::ONE);

    Ok(TrickRecord { r: r_idx, s: s_idx, col, triple: *triple, theta, gamma, phi })
}

/// Expanded Gaussian elimination: reduced row echelon form first, then
/// repeated trick-and-clear passes until every column holds at most one
/// non-zero entry, then zero-row removal. The outcome's basis satisfies
/// gen(input rows) = ⊕ u_iR, with a replayable certificate.
///
/// Over a plain field (grade 1) right distributivity always holds, the
/// trick has no witness, and the reduced echelon rows already form a
/// basis; the outcome is flagged `field_mode`.
pub fn ege(nf: &NearfieldCtx, matrix: &NfMatrix) -> Result<GenOutcome, NfError> {
    let n = matrix.n();
    let (reduced, ops) = rref_logged(nf, matrix);
    let mut rows = reduced.rows().to_vec();
    let mut steps: Vec<CertStep> = ops.into_iter().map(CertStep::Row).collect();

    if !nf.is_field() {
        let triple = nf.find_nd_triple()?;
        loop {
            let Some(col) = (0..n)
                .find(|&j| rows.iter().filter(|r| !r[j].is_zero()).count() >= 2)
            else {
                break;
            };
            let mut hot = rows.iter().enumerate().filter(|(_, r)| !r[col].is_zero());
            let (r_idx, _) = hot.next().expect("column has two non-zero entries");
            let (s_idx, _) = hot.next().expect("column has two non-zero entries");
            let trick =
                distributivity_trick(nf, &rows[r_idx], &rows[s_idx], r_idx, s_idx, col, &triple)?;
            let phi = trick.phi.clone();
            steps.push(CertStep::Trick(trick));
            rows.push(phi.clone());
            let phi_index = rows.len() - 1;
            steps.push(CertStep::Append { index: phi_index, row: phi });

            for i in 0..phi_index {
                if rows[i][col].is_zero() {
                    continue;
                }
                let coeff = nf.neg(rows[i][col]);
                let op = RowOp::AddRightMultiple { target: i, source: phi_index, coeff };
                apply_row_op(nf, &mut rows, &op)?;
                steps.push(CertStep::Row(op));
            }
        }
    }

    // Normalize leading entries and order rows by first support so the
    // output is a fixpoint of the eliminator.
    for i in 0..rows.len() {
        let Some(col) = rows[i].first_support() else { continue };
        let lead = rows[i][col];
        if lead != nf.elem(1) {
            let op = RowOp::ScaleRight { row: i, lambda: nf.inv(lead)? };
            apply_row_op(nf, &mut rows, &op)?;
            steps.push(CertStep::Row(op));
        }
    }
    for i in 0..rows.len() {
        let target = (i..rows.len())
            .min_by_key(|&j| rows[j].first_support().unwrap_or(usize::MAX))
            .expect("range is non-empty");
        if target != i {
            let op = RowOp::Swap { r: i, s: target };
            apply_row_op(nf, &mut rows, &op)?;
            steps.push(CertStep::Row(op));
        }
    }

    for i in (0..rows.len()).rev() {
        if rows[i].is_zero() {
            rows.remove(i);
            steps.push(CertStep::Drop { index: i });
        }
    }

    let basis = GenBasis::new(n, rows)?;
    debug_assert!(nf.is_field() || basis.columns_disjoint());
    Ok(GenOutcome { basis, certificate: GenCertificate { steps }, field_mode: nf.is_field() })
}

/// Decides v ∈ ⊕ u_iR and returns the coefficients when it is. Each
/// row's coefficient is forced by the row's first support column; the
/// reconstructed sum is then compared against v in full.
pub fn gen_membership(
    nf: &NearfieldCtx,
    basis: &GenBasis,
    v: &NfVector,
) -> Result<Option<Vec<FieldElem>>, NfError> {
    if v.len() != basis.n() {
        return Err(NfError::DimMismatch { expected: basis.n(), got: v.len() });
    }
    let mut coeffs = Vec::with_capacity(basis.rank());
    for row in basis.rows() {
        let c = row.first_support().expect("basis rows are non-zero");
        coeffs.push(nf.mul(nf.inv(row[c])?, v[c]));
    }
    let mut sum = NfVector::zero(basis.n());
    for (row, &r) in basis.rows().iter().zip(&coeffs) {
        sum = sum.add(&row.scale(r, nf), nf)?;
    }
    Ok(if sum == *v { Some(coeffs) } else { None })
}

/// The n−1 vectors e_1 + e_{i+1}. For n ≥ 3 their generated R-subgroup is
/// all of R^n; for n = 2 it need not be (over DN(3,2) the single vector
/// (1,1) only generates the diagonal).
pub fn spanning_vectors(nf: &NearfieldCtx, n: usize) -> Result<Vec<NfVector>, NfError> {
    if n < 2 {
        return Err(NfError::BadRange(format!("need dimension at least 2, got {n}")));
    }
    if nf.is_field() {
        return Err(NfError::FullyDistributive);
    }
    Ok((1..n)
        .map(|i| {
            let mut entries = vec![FieldElem::ZERO; n];
            entries[0] = FieldElem::ONE;
            entries[i] = FieldElem::ONE;
            NfVector::new(entries)
        })
        .collect())
}

/// Replays a certificate from the input matrix. Every trick is recomputed
/// from the current rows and compared against its record, appended rows
/// must match the pending trick's φ, and dropped rows must be zero.
/// Returns the final row list, which callers compare to the basis.
pub fn replay_certificate(
    nf: &NearfieldCtx,
    input: &NfMatrix,
    cert: &GenCertificate,
) -> Result<Vec<NfVector>, NfError> {
    let mut rows = input.rows().to_vec();
    let mut pending_phi: Option<NfVector> = None;
    for step in &cert.steps {
        match step {
            CertStep::Row(op) => {
                apply_row_op(nf, &mut rows, op)?;
            }
            CertStep::Trick(rec) => {
                if rec.r >= rows.len() || rec.s >= rows.len() {
                    return Err(NfError::Internal("trick row index out of range".into()));
                }
                let again = distributivity_trick(
                    nf,
                    &rows[rec.r],
                    &rows[rec.s],
                    rec.r,
                    rec.s,
                    rec.col,
                    &rec.triple,
                )?;
                if again != *rec {
                    return Err(NfError::Internal("trick record does not recompute".into()));
                }
                pending_phi = Some(rec.phi.clone());
            }
            CertStep::Append { index, row } => {
                if *index != rows.len() {
                    return Err(NfError::Internal("append index out of order".into()));
                }
                match pending_phi.take() {
                    Some(phi) if phi == *row => rows.push(row.clone()),
                    _ => {
                        return Err(NfError::Internal(
                            "appended row is not the pending trick output".into(),
                        ))
                    }
                }
            }
            CertStep::Drop { index } => {
                if *index >= rows.len() {
                    return Err(NfError::Internal("drop index out of range".into()));
                }
                if !rows[*index].is_zero() {
                    return Err(NfError::Internal("dropped row is not zero".into()));
                }
                rows.remove(*index);
            }
        }
    }
    Ok(rows)
}

/// Searches, in canonical order and within a budget of candidate pairs,
/// for two vectors whose generated R-subgroup is all of R^n. Existence
/// for any particular n is an open experimental question; this utility
/// only reports what it finds.
pub fn search_two_vector_generators(
    nf: &NearfieldCtx,
    n: usize,
    caps: &crate::oracle::OracleCaps,
    budget: usize,
) -> Result<Option<(NfVector, NfVector)>, NfError> {
    let full = (nf.order() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let vectors = all_nonzero_vectors(nf, n);
    let mut tried = 0usize;
    for i in 0..vectors.len() {
        for j in (i + 1)..vectors.len() {
            if tried >= budget {
                return Ok(None);
            }
            tried += 1;
            let set = crate::oracle::gen_bruteforce(
                nf,
                n,
                &[vectors[i].clone(), vectors[j].clone()],
                caps,
            )?;
            if set.len() as u128 == full {
                return Ok(Some((vectors[i].clone(), vectors[j].clone())));
            }
        }
    }
    Ok(None)
}

fn all_nonzero_vectors(nf: &NearfieldCtx, n: usize) -> Vec<NfVector> {
    let mut out = Vec::new();
    let mut digits = vec![0u32; n];
    loop {
        let v = NfVector::new(digits.iter().map(|&c| nf.elem(c)).collect());
        if !v.is_zero() {
            out.push(v);
        }
        let mut d = 0;
        loop {
            if d == n {
                return out;
            }
            digits[d] += 1;
            if digits[d] < nf.order() {
                break;
            }
            digits[d] = 0;
            d += 1;
        }
    }
}
