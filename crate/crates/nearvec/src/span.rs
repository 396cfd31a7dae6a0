//! The span engine: computes the smallest subspace of R^n containing a
//! list of vectors.
//!
//! A subspace is an R-subgroup N that additionally absorbs the shifts
//! (m+s)∘r − m∘r for every m in R^n. Over a genuine nearfield (grade
//! m > 1) the subspaces of R^n are exactly the coordinate subspaces
//! S_1 × … × S_n with each S_i either 0 or R, so a span is described by a
//! mask of included coordinates. The constructive route runs the gen
//! engine first and then breaks every multi-support basis row into unit
//! vectors with the adjustment trick; the resulting mask always equals
//! the union of the input supports, and the two routes cross-check each
//! other. Over a plain field every R-subgroup is already a subspace and
//! the mask picture collapses, so the field case reports the echelon
//! basis instead.

use std::collections::BTreeSet;

use crate::dickson::{NdTriple, NearfieldCtx};
use crate::error::NfError;
use crate::field::FieldElem;
use crate::gen::{ege, replay_certificate, GenBasis, GenOutcome};
use crate::nvs::{NfMatrix, NfVector};

/// A coordinate subspace of R^n: ⊕_{i ∈ included} e_iR, with positions
/// stored 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordMask {
    n: usize,
    included: BTreeSet<usize>,
}

impl CoordMask {
    pub fn new(n: usize, included: BTreeSet<usize>) -> Result<CoordMask, NfError> {
        if n == 0 {
            return Err(NfError::BadRange("mask width must be at least 1".into()));
        }
        for &pos in &included {
            if pos == 0 || pos > n {
                return Err(NfError::BadRange(format!(
                    "mask position {pos} outside 1..={n}"
                )));
            }
        }
        Ok(CoordMask { n, included })
    }

    pub fn empty(n: usize) -> CoordMask {
        CoordMask { n, included: BTreeSet::new() }
    }

    pub fn full(n: usize) -> CoordMask {
        CoordMask { n, included: (1..=n).collect() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Included positions, 1-based, ascending.
    pub fn included(&self) -> &BTreeSet<usize> {
        &self.included
    }

    pub fn dimension(&self) -> usize {
        self.included.len()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.included.contains(&pos)
    }

    /// The unit vectors e_i for the included positions.
    pub fn unit_rows(&self) -> Vec<NfVector> {
        self.included.iter().map(|&pos| NfVector::unit(self.n, pos - 1)).collect()
    }
}

/// One adjustment at columns (j1, j2) of a working row u: the shift
/// vector v = (m+a)∘λ − m∘λ built from a = u∘((u_{j2})^{-1}∘β) and the
/// α-spike m at j2 leaves the single non-zero γ at j2 after subtracting
/// a∘λ, which normalizes to the unit vector e_{j2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustmentRecord {
    /// Index of the originating gen-basis row.
    pub row: usize,
    pub j1: usize,
    pub j2: usize,
    pub triple: NdTriple,
    pub a: NfVector,
    pub v: NfVector,
    pub gamma: FieldElem,
}

/// What the span is, structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanKind {
    /// Nearfield case: a coordinate mask, with the adjustment steps that
    /// certified it.
    Mask { mask: CoordMask, adjustments: Vec<AdjustmentRecord> },
    /// Field case: span = gen, described by the echelon basis carried in
    /// the gen outcome.
    FieldBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanOutcome {
    pub gen: GenOutcome,
    pub kind: SpanKind,
}

impl SpanOutcome {
    pub fn mask(&self) -> Option<&CoordMask> {
        match &self.kind {
            SpanKind::Mask { mask, .. } => Some(mask),
            SpanKind::FieldBasis => None,
        }
    }

    pub fn adjustments(&self) -> &[AdjustmentRecord] {
        match &self.kind {
            SpanKind::Mask { adjustments, .. } => adjustments,
            SpanKind::FieldBasis => &[],
        }
    }

    /// Dimension of the span: mask popcount, or the echelon rank in the
    /// field case.
    pub fn dimension(&self) -> usize {
        match &self.kind {
            SpanKind::Mask { mask, .. } => mask.dimension(),
            SpanKind::FieldBasis => self.gen.basis.rank(),
        }
    }
}

/// Runs the adjustment trick on row u at support columns j1 < j2, both
/// non-zero in u. Returns the record, the produced unit vector e_{j2},
/// and the reduced row u − e_{j2}∘u_{j2}, whose support lost exactly j2.
pub fn adjustment_trick(
    nf: &NearfieldCtx,
    u: &NfVector,
    row_idx: usize,
    j1: usize,
    j2: usize,
    triple: &NdTriple,
) -> Result<(AdjustmentRecord, NfVector, NfVector), NfError> {
    if j1 >= j2 || j2 >= u.len() {
        return Err(NfError::BadRange(format!(
            "adjustment columns must satisfy j1 < j2 < {}, got ({j1}, {j2})",
            u.len()
        )));
    }
    if !triple.is_witness(nf) {
        return Err(NfError::TripleInvalid);
    }
    if u[j1].is_zero() {
        return Err(NfError::PivotZero { row: row_idx, col: j1 });
    }
    if u[j2].is_zero() {
        return Err(NfError::PivotZero { row: row_idx, col: j2 });
    }

    let (alpha, beta, lambda) = (triple.alpha, triple.beta, triple.lambda);
    let a = u.scale(nf.mul(nf.inv(u[j2])?, beta), nf);
    let mut m_entries = vec![FieldElem::ZERO; u.len()];
    m_entries[j2] = alpha;
    let m = NfVector::new(m_entries);

    let v = m.add(&a, nf)?.scale(lambda, nf).sub(&m.scale(lambda, nf), nf)?;
    let diff = v.sub(&a.scale(lambda, nf), nf)?;

    let gamma = nf.sub(
        nf.mul(nf.add(alpha, beta), lambda),
        nf.add(nf.mul(alpha, lambda), nf.mul(beta, lambda)),
    );
    if diff[j2] != gamma || diff.support() != vec![j2] {
        return Err(NfError::Internal("adjustment shift did not isolate its column".into()));
    }

    let unit = diff.scale(nf.inv(gamma)?, nf);
    debug_assert_eq!(unit, NfVector::unit(u.len(), j2));
    let reduced = u.sub(&unit.scale(u[j2], nf), nf)?;

    Ok((AdjustmentRecord { row: row_idx, j1, j2, triple: *triple, a, v, gamma }, unit, reduced))
}

/// Adjusted expanded Gaussian elimination: run the gen engine, then
/// reduce every multi-support basis row from its last support column
/// backwards until only unit directions remain. The span is the
/// coordinate mask of every column touched by the basis, which is also
/// the union of the input supports.
pub fn aege(nf: &NearfieldCtx, matrix: &NfMatrix) -> Result<SpanOutcome, NfError> {
    let gen_out = ege(nf, matrix)?;
    if nf.is_field() {
        return Ok(SpanOutcome { gen: gen_out, kind: SpanKind::FieldBasis });
    }

    let n = matrix.n();
    let triple = nf.find_nd_triple()?;
    let mut adjustments = Vec::new();
    let mut unit_cols: BTreeSet<usize> = BTreeSet::new();
    for (i, row) in gen_out.basis.rows().iter().enumerate() {
        let mut working = row.clone();
        loop {
            let support = working.support();
            if support.len() < 2 {
                break;
            }
            let j1 = support[support.len() - 2];
            let j2 = support[support.len() - 1];
            let (rec, _unit, reduced) = adjustment_trick(nf, &working, i, j1, j2, &triple)?;
            unit_cols.insert(j2);
            adjustments.push(rec);
            working = reduced;
        }
        if let Some(c) = working.first_support() {
            unit_cols.insert(c);
        }
    }

    let mask_cols: BTreeSet<usize> =
        gen_out.basis.rows().iter().flat_map(|r| r.support()).collect();
    if unit_cols != mask_cols {
        return Err(NfError::Internal("adjusted units diverge from the support union".into()));
    }
    let mask = CoordMask::new(n, mask_cols.into_iter().map(|c| c + 1).collect())?;
    Ok(SpanOutcome { gen: gen_out, kind: SpanKind::Mask { mask, adjustments } })
}

/// The non-constructive route: the span's mask is simply the union of
/// the input supports. Must always agree with the aege mask; keeping both
/// routes alive is the point.
pub fn span_mask_shortcut(nf: &NearfieldCtx, matrix: &NfMatrix) -> Result<CoordMask, NfError> {
    if nf.is_field() {
        return Err(NfError::FullyDistributive);
    }
    let cols: BTreeSet<usize> =
        matrix.rows().iter().flat_map(|r| r.support()).map(|c| c + 1).collect();
    CoordMask::new(matrix.n(), cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceAnswer {
    pub is_subspace: bool,
    /// Over a plain field every R-subgroup is a subspace, which is why
    /// the answer there is always yes.
    pub field_mode: bool,
}

/// Whether the generated set ⊕ u_iR is itself a subspace: over a
/// nearfield exactly when every basis row has a single non-zero entry.
pub fn is_subspace(nf: &NearfieldCtx, basis: &GenBasis) -> SubspaceAnswer {
    if nf.is_field() {
        return SubspaceAnswer { is_subspace: true, field_mode: true };
    }
    SubspaceAnswer {
        is_subspace: basis.rows().iter().all(|r| r.support().len() == 1),
        field_mode: false,
    }
}

/// Number of subspaces of R^n over a grade-m Dickson nearfield with
/// m > 1: binomial(n, k) of dimension k, 2^n in total when k is omitted
/// (every subspace is a coordinate mask).
pub fn subspace_count(n: u64, k: Option<u64>) -> Result<u128, NfError> {
    match k {
        Some(k) => {
            if k > n {
                return Err(NfError::BadRange(format!("k = {k} exceeds n = {n}")));
            }
            binomial(n, k)
                .ok_or_else(|| NfError::BadRange(format!("binomial({n}, {k}) overflows")))
        }
        None => {
            if n >= 128 {
                return Err(NfError::BadRange(format!("2^{n} overflows")));
            }
            Ok(1u128 << n)
        }
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(acc)
}

/// Full verification of a span outcome against its input: the gen
/// certificate must replay to the gen basis, every adjustment must
/// recompute from the working rows it claims, and the collected unit
/// directions must be exactly the mask.
pub fn replay_span(
    nf: &NearfieldCtx,
    input: &NfMatrix,
    outcome: &SpanOutcome,
) -> Result<(), NfError> {
    let rows = replay_certificate(nf, input, &outcome.gen.certificate)?;
    if rows != outcome.gen.basis.rows() {
        return Err(NfError::Internal("gen certificate does not reach the basis".into()));
    }

    match &outcome.kind {
        SpanKind::FieldBasis => {
            if !nf.is_field() {
                return Err(NfError::Internal("field-shaped outcome over a nearfield".into()));
            }
            Ok(())
        }
        SpanKind::Mask { mask, adjustments } => {
            if nf.is_field() {
                return Err(NfError::Internal("mask-shaped outcome over a field".into()));
            }
            let n = input.n();
            let mut pending = adjustments.iter();
            let mut unit_cols: BTreeSet<usize> = BTreeSet::new();
            for (i, row) in outcome.gen.basis.rows().iter().enumerate() {
                let mut working = row.clone();
                loop {
                    let support = working.support();
                    if support.len() < 2 {
                        break;
                    }
                    let j1 = support[support.len() - 2];
                    let j2 = support[support.len() - 1];
                    let Some(rec) = pending.next() else {
                        return Err(NfError::Internal("certificate is missing adjustments".into()));
                    };
                    if rec.row != i || rec.j1 != j1 || rec.j2 != j2 {
                        return Err(NfError::Internal("adjustment applied out of order".into()));
                    }
                    let (again, _unit, reduced) =
                        adjustment_trick(nf, &working, i, j1, j2, &rec.triple)?;
                    if again != *rec {
                        return Err(NfError::Internal("adjustment record does not recompute".into()));
                    }
                    unit_cols.insert(j2);
                    working = reduced;
                }
                if let Some(c) = working.first_support() {
                    unit_cols.insert(c);
                }
            }
            if pending.next().is_some() {
                return Err(NfError::Internal("certificate has surplus adjustments".into()));
            }
            let replayed = CoordMask::new(n, unit_cols.into_iter().map(|c| c + 1).collect())?;
            if replayed != *mask {
                return Err(NfError::Internal("replayed mask differs from the outcome".into()));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvs::{parse_matrix, parse_vector};
    use crate::oracle::{enumerate_basis, span_bruteforce, OracleCaps};

    fn dn32() -> NearfieldCtx {
        NearfieldCtx::build(3, 2).unwrap()
    }

    fn v(nf: &NearfieldCtx, text: &str) -> NfVector {
        parse_vector(nf, text).unwrap()
    }

    fn m(nf: &NearfieldCtx, text: &str) -> NfMatrix {
        parse_matrix(nf, text).unwrap()
    }

    #[test]
    fn adjustment_frozen_case() {
        let nf = dn32();
        let triple = nf.find_nd_triple().unwrap();
        let (rec, unit, reduced) =
            adjustment_trick(&nf, &v(&nf, "(1, 1)"), 0, 0, 1, &triple).unwrap();
        assert_eq!(rec.a, v(&nf, "(x, x)"));
        assert_eq!(rec.v, v(&nf, "(2, 1+x)"));
        assert_eq!(rec.gamma, nf.parse("2+x").unwrap());
        assert_eq!(unit, v(&nf, "(0, 1)"));
        assert_eq!(reduced, v(&nf, "(1, 0)"));
    }

    #[test]
    fn adjustment_gamma_is_independent_of_the_row() {
        let nf = dn32();
        let triple = nf.find_nd_triple().unwrap();
        let mut gammas = BTreeSet::new();
        for text in ["(1, 1)", "(x, 2)", "(2+x, 1+2x)", "(1, 0, 2x)"] {
            let u = v(&nf, text);
            let j2 = u.len() - 1;
            let (rec, _, reduced) = adjustment_trick(&nf, &u, 0, 0, j2, &triple).unwrap();
            gammas.insert(rec.gamma.code());
            assert_eq!(reduced.support().len(), u.support().len() - 1);
        }
        assert_eq!(gammas.len(), 1);
    }

    #[test]
    fn adjustment_errors() {
        let nf = dn32();
        let triple = nf.find_nd_triple().unwrap();
        assert_eq!(
            adjustment_trick(&nf, &v(&nf, "(1, 0)"), 3, 0, 1, &triple).unwrap_err(),
            NfError::PivotZero { row: 3, col: 1 }
        );
        assert_eq!(
            adjustment_trick(&nf, &v(&nf, "(0, 1)"), 0, 0, 1, &triple).unwrap_err(),
            NfError::PivotZero { row: 0, col: 0 }
        );
        assert!(matches!(
            adjustment_trick(&nf, &v(&nf, "(1, 1)"), 0, 1, 1, &triple).unwrap_err(),
            NfError::BadRange(_)
        ));
        let bad = NdTriple {
            alpha: FieldElem::ONE,
            beta: FieldElem::ONE,
            lambda: FieldElem::ONE,
        };
        assert_eq!(
            adjustment_trick(&nf, &v(&nf, "(1, 1)"), 0, 0, 1, &bad).unwrap_err(),
            NfError::TripleInvalid
        );
    }

    #[test]
    fn aege_first_worked_example() {
        let nf = dn32();
        let input = m(
            &nf,
            "(0, 1, 1, 0, 0)\n(0, x+1, 2, 0, x+1)\n(1, x+1, 1, 0, x)",
        );
        let out = aege(&nf, &input).unwrap();
        let mask = out.mask().unwrap();
        assert_eq!(mask.included().iter().copied().collect::<Vec<_>>(), vec![1, 2, 3, 5]);
        assert_eq!(out.dimension(), 4);
        assert_eq!(span_mask_shortcut(&nf, &input).unwrap(), *mask);
        replay_span(&nf, &input, &out).unwrap();
    }

    #[test]
    fn aege_second_worked_example_fills_everything() {
        let nf = dn32();
        let input = m(
            &nf,
            "(1, 1, 2, x+1, 1)\n(0, 0, 0, 2x+2, 1)\n(1, 1, 1, x+2, 1)",
        );
        let out = aege(&nf, &input).unwrap();
        assert_eq!(out.mask().unwrap(), &CoordMask::full(5));
        assert_eq!(out.dimension(), 5);
        assert_eq!(span_mask_shortcut(&nf, &input).unwrap(), CoordMask::full(5));
        replay_span(&nf, &input, &out).unwrap();
    }

    #[test]
    fn aege_zero_and_single_inputs() {
        let nf = dn32();
        let zero = aege(&nf, &m(&nf, "(0, 0)")).unwrap();
        assert_eq!(zero.mask().unwrap(), &CoordMask::empty(2));
        assert_eq!(zero.dimension(), 0);

        let line = aege(&nf, &m(&nf, "(1, x)")).unwrap();
        assert_eq!(line.mask().unwrap(), &CoordMask::full(2));
        assert_eq!(line.adjustments().len(), 1);
        replay_span(&nf, &m(&nf, "(1, x)"), &line).unwrap();

        let axis = aege(&nf, &m(&nf, "(0, 2x)")).unwrap();
        let expected = CoordMask::new(2, [2].into_iter().collect()).unwrap();
        assert_eq!(axis.mask().unwrap(), &expected);
        assert!(axis.adjustments().is_empty());
    }

    #[test]
    fn aege_matches_the_closure_oracle() {
        let nf = dn32();
        let caps = OracleCaps::default();
        for text in ["(1, x)", "(0, 1)\n(2, 0)", "(1, 1, 0)\n(0, 0, x)"] {
            let input = m(&nf, text);
            let out = aege(&nf, &input).unwrap();
            let fast =
                enumerate_basis(&nf, input.n(), &out.mask().unwrap().unit_rows(), &caps).unwrap();
            let slow = span_bruteforce(&nf, input.n(), input.rows(), &caps).unwrap();
            assert_eq!(fast.elements(), slow.elements(), "inputs: {text}");
        }
    }

    #[test]
    fn field_case_keeps_the_echelon_basis() {
        let nf = NearfieldCtx::build(5, 1).unwrap();
        let input = m(&nf, "(1, 2)\n(3, 4)");
        let out = aege(&nf, &input).unwrap();
        assert_eq!(out.kind, SpanKind::FieldBasis);
        assert_eq!(out.dimension(), out.gen.basis.rank());
        assert!(out.gen.field_mode);
        replay_span(&nf, &input, &out).unwrap();

        assert_eq!(span_mask_shortcut(&nf, &input).unwrap_err(), NfError::FullyDistributive);
    }

    #[test]
    fn shortcut_is_the_union_of_supports() {
        let nf = dn32();
        let mask = span_mask_shortcut(&nf, &m(&nf, "(0, 1, 1, 0, 0)\n(0, x, 2, 0, x)\n(1, 2, 1, 0, x)"))
            .unwrap();
        assert_eq!(mask.included().iter().copied().collect::<Vec<_>>(), vec![1, 2, 3, 5]);

        let single = span_mask_shortcut(&nf, &m(&nf, "(x, 0, 2, 1)")).unwrap();
        assert_eq!(single.dimension(), 3);

        let zero = span_mask_shortcut(&nf, &m(&nf, "(0, 0, 0)")).unwrap();
        assert_eq!(zero.dimension(), 0);
    }

    #[test]
    fn span_dimension_counts_nonzeros_of_a_single_vector() {
        let nf = dn32();
        for n in 1..=5usize {
            let mut digits = vec![0u32; n];
            for _ in 0..40 {
                // simple deterministic drift through some vectors
                let mut carry = 7u32;
                for d in digits.iter_mut() {
                    *d = (*d * 3 + carry) % nf.order();
                    carry = carry.wrapping_mul(31).wrapping_add(11) % 97;
                }
                let w = NfVector::new(digits.iter().map(|&c| nf.elem(c)).collect());
                if w.is_zero() {
                    continue;
                }
                let input = NfMatrix::new(n, vec![w.clone()]).unwrap();
                let out = aege(&nf, &input).unwrap();
                assert_eq!(out.dimension(), w.support().len());
            }
        }
    }

    #[test]
    fn is_subspace_reads_the_basis_shape() {
        let nf = dn32();
        let line = ege(&nf, &m(&nf, "(1, x)")).unwrap();
        let ans = is_subspace(&nf, &line.basis);
        assert!(!ans.is_subspace);
        assert!(!ans.field_mode);

        let fixture = ege(
            &nf,
            &m(&nf, "(1, 1, 2, x+1, 1)\n(0, 0, 0, 2x+2, 1)\n(1, 1, 1, x+2, 1)"),
        )
        .unwrap();
        assert!(!is_subspace(&nf, &fixture.basis).is_subspace);

        let units = ege(&nf, &m(&nf, "(1, 0)\n(0, x)")).unwrap();
        assert!(is_subspace(&nf, &units.basis).is_subspace);

        let field = NearfieldCtx::build(3, 1).unwrap();
        let echelon = ege(&field, &m(&field, "(1, 2)")).unwrap();
        let ans = is_subspace(&field, &echelon.basis);
        assert!(ans.is_subspace);
        assert!(ans.field_mode);
    }

    #[test]
    fn counting_subspaces() {
        assert_eq!(subspace_count(5, Some(2)).unwrap(), 10);
        assert_eq!(subspace_count(7, Some(0)).unwrap(), 1);
        assert_eq!(subspace_count(7, Some(7)).unwrap(), 1);
        assert_eq!(subspace_count(3, None).unwrap(), 8);
        for n in 0..=5u64 {
            let total: u128 = (0..=n).map(|k| subspace_count(n, Some(k)).unwrap()).sum();
            assert_eq!(total, subspace_count(n, None).unwrap());
        }
        assert!(matches!(subspace_count(3, Some(4)).unwrap_err(), NfError::BadRange(_)));
        assert!(matches!(subspace_count(130, None).unwrap_err(), NfError::BadRange(_)));
    }

    #[test]
    fn mask_validation_and_units() {
        let nf = dn32();
        assert!(CoordMask::new(3, [0].into_iter().collect()).is_err());
        assert!(CoordMask::new(3, [4].into_iter().collect()).is_err());
        let mask = CoordMask::new(3, [1, 3].into_iter().collect()).unwrap();
        assert_eq!(mask.unit_rows(), vec![v(&nf, "(1, 0, 0)"), v(&nf, "(0, 0, 1)")]);
        assert!(mask.contains(1));
        assert!(!mask.contains(2));
    }

    #[test]
    fn replay_rejects_mask_tampering() {
        let nf = dn32();
        let input = m(&nf, "(1, x)");
        let mut out = aege(&nf, &input).unwrap();
        if let SpanKind::Mask { mask, .. } = &mut out.kind {
            *mask = CoordMask::new(2, [1].into_iter().collect()).unwrap();
        }
        assert!(replay_span(&nf, &input, &out).is_err());

        let mut dropped = aege(&nf, &input).unwrap();
        if let SpanKind::Mask { adjustments, .. } = &mut dropped.kind {
            adjustments.clear();
        }
        assert!(replay_span(&nf, &input, &dropped).is_err());
    }
}
