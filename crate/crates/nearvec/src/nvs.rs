//! Vectors and matrices over a Dickson nearfield.
//!
//! R^n is a right module: scalars act coordinate-wise from the right,
//! (x_1, ..., x_n) ∘ r = (x_1 ∘ r, ..., x_n ∘ r). Scalar sums distribute
//! (v ∘ (r+s) = v∘r + v∘s, from left distributivity), vector sums do not:
//! (v+w) ∘ r ≠ v∘r + w∘r in general, which is the whole point of the
//! elimination engines built on top.
//!
//! The reduced row echelon form here uses only operations that preserve the
//! generated R-subgroup, each invertible by an operation of the same kind:
//! row swaps, right-scaling a row by a non-zero scalar, and adding a right
//! multiple of another row (undone via -(w ∘ x) = w ∘ (-x), again left
//! distributivity).

use crate::dickson::NearfieldCtx;
use crate::error::NfError;
use crate::field::FieldElem;

/// Vector in R^n. Plain entry data; every operation takes the context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NfVector {
    entries: Vec<FieldElem>,
}

impl NfVector {
    /// Wraps entries into a vector; the length must be at least 1.
    pub fn new(entries: Vec<FieldElem>) -> NfVector {
        assert!(!entries.is_empty(), "vectors must have at least one coordinate");
        NfVector { entries }
    }

    pub fn zero(n: usize) -> NfVector {
        NfVector::new(vec![FieldElem::ZERO; n])
    }

    /// Unit vector with a 1 in (0-based) column `col`.
    pub fn unit(n: usize, col: usize) -> NfVector {
        let mut entries = vec![FieldElem::ZERO; n];
        entries[col] = FieldElem::ONE;
        NfVector::new(entries)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// 0-based columns holding non-zero entries.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn first_support(&self) -> Option<usize> {
        self.entries.iter().position(|e| !e.is_zero())
    }

    fn check_len(&self, other: &NfVector) -> Result<(), NfError> {
        if self.len() != other.len() {
            return Err(NfError::DimMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    pub fn add(&self, other: &NfVector, nf: &NearfieldCtx) -> Result<NfVector, NfError> {
        self.check_len(other)?;
        Ok(NfVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| nf.add(a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &NfVector, nf: &NearfieldCtx) -> Result<NfVector, NfError> {
        self.check_len(other)?;
        Ok(NfVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| nf.sub(a, b))
                .collect(),
        ))
    }

    pub fn neg(&self, nf: &NearfieldCtx) -> NfVector {
        NfVector::new(self.entries.iter().map(|&a| nf.neg(a)).collect())
    }

    /// Right scalar action v ∘ r.
    pub fn scale(&self, r: FieldElem, nf: &NearfieldCtx) -> NfVector {
        NfVector::new(self.entries.iter().map(|&a| nf.mul(a, r)).collect())
    }
}

impl std::ops::Index<usize> for NfVector {
    type Output = FieldElem;

    fn index(&self, i: usize) -> &FieldElem {
        &self.entries[i]
    }
}

/// A list of row vectors of equal width. Rows may be empty; the width is
/// always explicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfMatrix {
    n: usize,
    rows: Vec<NfVector>,
}

impl NfMatrix {
    pub fn new(n: usize, rows: Vec<NfVector>) -> Result<NfMatrix, NfError> {
        if n == 0 {
            return Err(NfError::BadRange("matrix width must be at least 1".into()));
        }
        for row in &rows {
            if row.len() != n {
                return Err(NfError::DimMismatch { expected: n, got: row.len() });
            }
        }
        Ok(NfMatrix { n, rows })
    }

    /// Builds from rows, inferring the width from the first.
    pub fn from_rows(rows: Vec<NfVector>) -> Result<NfMatrix, NfError> {
        match rows.first() {
            Some(first) => {
                let n = first.len();
                NfMatrix::new(n, rows)
            }
            None => Err(NfError::BadRange("cannot infer width from zero rows".into())),
        }
    }

    pub fn empty(n: usize) -> NfMatrix {
        NfMatrix::new(n, Vec::new()).expect("n >= 1")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row count.
    #[inline]
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn rows(&self) -> &[NfVector] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> &NfVector {
        &self.rows[i]
    }
}

// ----------------------------------------------------------------------
// row operations and reduced row echelon form
// ----------------------------------------------------------------------

/// One gen-preserving row operation. Sequences of these are the raw
/// material of elimination certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    /// Exchange rows r and s.
    Swap { r: usize, s: usize },
    /// row ← row ∘ lambda, lambda non-zero.
    ScaleRight { row: usize, lambda: FieldElem },
    /// target ← target + source ∘ coeff.
    AddRightMultiple { target: usize, source: usize, coeff: FieldElem },
}

/// Applies one operation in place. Indices must be in range; the scale
/// factor must be non-zero (zero would not be invertible, and would break
/// the gen-preservation the certificate relies on).
pub fn apply_row_op(nf: &NearfieldCtx, rows: &mut [NfVector], op: &RowOp) -> Result<(), NfError> {
    let bound = rows.len();
    let check = |i: usize| -> Result<(), NfError> {
        if i >= bound {
            return Err(NfError::BadRange(format!("row index {i} out of range for {bound} rows")));
        }
        Ok(())
    };
    match op {
        RowOp::Swap { r, s } => {
            check(*r)?;
            check(*s)?;
            rows.swap(*r, *s);
        }
        RowOp::ScaleRight { row, lambda } => {
            check(*row)?;
            if lambda.is_zero() {
                return Err(NfError::BadRange("scaling a row by zero".into()));
            }
            rows[*row] = rows[*row].scale(*lambda, nf);
        }
        RowOp::AddRightMultiple { target, source, coeff } => {
            check(*target)?;
            check(*source)?;
            let delta = rows[*source].scale(*coeff, nf);
            rows[*target] = rows[*target].add(&delta, nf)?;
        }
    }
    Ok(())
}

/// Reduced row echelon form, recording every operation applied.
///
/// Deterministic: the pivot for each step is the first column with a
/// non-zero entry at or below the working row, taking the topmost such row;
/// pivots normalize to 1; elimination clears the pivot column above and
/// below. Zero rows end up at the bottom. The recorded log replays from the
/// input to the output exactly.
pub fn rref_logged(nf: &NearfieldCtx, matrix: &NfMatrix) -> (NfMatrix, Vec<RowOp>) {
    let mut rows = matrix.rows().to_vec();
    let mut log = Vec::new();
    let n = matrix.n();
    let mut next = 0usize;
    for col in 0..n {
        if next == rows.len() {
            break;
        }
        let Some(pivot) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        if pivot != next {
            rows.swap(next, pivot);
            log.push(RowOp::Swap { r: next, s: pivot });
        }
        let pv = rows[next][col];
        if pv != FieldElem::ONE {
            let lambda = nf.inv(pv).expect("pivot entries are non-zero");
            rows[next] = rows[next].scale(lambda, nf);
            log.push(RowOp::ScaleRight { row: next, lambda });
        }
        for r in 0..rows.len() {
            if r == next || rows[r][col].is_zero() {
                continue;
            }
            // the pivot entry is 1, so the right multiple to cancel
            // entry e is exactly e: row ← row + pivot_row ∘ (-e)
            let coeff = nf.neg(rows[r][col]);
            rows[r] = rows[r].add(&rows[next].scale(coeff, nf), nf).expect("equal widths");
            log.push(RowOp::AddRightMultiple { target: r, source: next, coeff });
        }
        next += 1;
    }
    (NfMatrix::new(n, rows).expect("shape preserved"), log)
}

/// Reduced row echelon form without the operation log.
pub fn rref(nf: &NearfieldCtx, matrix: &NfMatrix) -> NfMatrix {
    rref_logged(nf, matrix).0
}

// ----------------------------------------------------------------------
// text formats
// ----------------------------------------------------------------------

/// Renders "(e1, e2, ..., en)" with canonical element forms.
pub fn render_vector(nf: &NearfieldCtx, v: &NfVector) -> String {
    let parts: Vec<String> = v.entries().iter().map(|&e| nf.render(e)).collect();
    format!("({})", parts.join(", "))
}

/// Parses "(e1, e2, ..., en)"; whitespace is free, elements use the field
/// text format.
pub fn parse_vector(nf: &NearfieldCtx, text: &str) -> Result<NfVector, NfError> {
    let s = text.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| NfError::Syntax(format!("vector must be parenthesized: {s}")))?;
    if inner.trim().is_empty() {
        return Err(NfError::Syntax("empty vector".into()));
    }
    let entries = inner
        .split(',')
        .map(|part| nf.parse(part))
        .collect::<Result<Vec<FieldElem>, NfError>>()?;
    Ok(NfVector::new(entries))
}

/// Parses a matrix from text: one vector literal per line, blank lines and
/// lines starting with '#' ignored. All vectors must have equal width.
pub fn parse_matrix(nf: &NearfieldCtx, text: &str) -> Result<NfMatrix, NfError> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        rows.push(parse_vector(nf, line)?);
    }
    if rows.is_empty() {
        return Err(NfError::Syntax("no vectors found".into()));
    }
    NfMatrix::from_rows(rows)
}

/// Renders a matrix as parse_matrix input: one vector per line.
pub fn render_matrix(nf: &NearfieldCtx, m: &NfMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| render_vector(nf, r))
        .collect::<Vec<String>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dickson::NearfieldCtx;

    fn dn32() -> NearfieldCtx {
        NearfieldCtx::build(3, 2).unwrap()
    }

    fn v(nf: &NearfieldCtx, text: &str) -> NfVector {
        parse_vector(nf, text).unwrap()
    }

    #[test]
    fn vector_arithmetic_basics() {
        let nf = dn32();
        let a = v(&nf, "(1, x)");
        let b = v(&nf, "(1, x+1)");
        assert_eq!(a.add(&b, &nf).unwrap(), v(&nf, "(2, 2x+1)"));
        assert_eq!(a.sub(&a, &nf).unwrap(), NfVector::zero(2));
        assert_eq!(a.add(&a.neg(&nf), &nf).unwrap(), NfVector::zero(2));
        assert_eq!(a.scale(FieldElem::ONE, &nf), a);
        assert_eq!(a.scale(FieldElem::ZERO, &nf), NfVector::zero(2));
    }

    #[test]
    fn scale_uses_the_twisted_product() {
        let nf = dn32();
        let x = nf.parse("x").unwrap();
        assert_eq!(v(&nf, "(1, x)").scale(x, &nf), v(&nf, "(x, 2)"));
        assert_eq!(v(&nf, "(1+x, 0)").scale(x, &nf), v(&nf, "(1+2x, 0)"));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let nf = dn32();
        let a = v(&nf, "(1, x)");
        let b = v(&nf, "(1, x, 0)");
        assert_eq!(a.add(&b, &nf).unwrap_err(), NfError::DimMismatch { expected: 2, got: 3 });
        assert!(NfMatrix::new(2, vec![a, b]).is_err());
    }

    #[test]
    fn support_and_zero_checks() {
        let nf = dn32();
        assert_eq!(v(&nf, "(0, x, 0, 2)").support(), vec![1, 3]);
        assert_eq!(v(&nf, "(0, x, 0, 2)").first_support(), Some(1));
        assert!(NfVector::zero(3).is_zero());
        assert_eq!(NfVector::zero(3).first_support(), None);
        assert_eq!(NfVector::unit(3, 1).support(), vec![1]);
    }

    #[test]
    fn scalar_sum_distributes_exhaustively() {
        // v ∘ (r+s) = v∘r + v∘s for every v in R^2 and all scalars
        let nf = dn32();
        for a in nf.elements() {
            for b in nf.elements() {
                let w = NfVector::new(vec![a, b]);
                for r in nf.elements() {
                    for s in nf.elements() {
                        assert_eq!(
                            w.scale(nf.add(r, s), &nf),
                            w.scale(r, &nf).add(&w.scale(s, &nf), &nf).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_action_is_associative() {
        let nf = dn32();
        let w = v(&nf, "(1, x, 2+x)");
        for r in nf.elements() {
            for s in nf.elements() {
                assert_eq!(w.scale(nf.mul(r, s), &nf), w.scale(r, &nf).scale(s, &nf));
            }
        }
    }

    #[test]
    fn vector_sum_scaling_fails_somewhere() {
        // (v+w) ∘ r = v∘r + w∘r must fail for some choice, or the engines
        // downstream would have nothing to do
        let nf = dn32();
        let mut found = false;
        'outer: for a in nf.elements() {
            for b in nf.elements() {
                for r in nf.elements() {
                    let vv = NfVector::new(vec![a]);
                    let ww = NfVector::new(vec![b]);
                    let lhs = vv.add(&ww, &nf).unwrap().scale(r, &nf);
                    let rhs = vv.scale(r, &nf).add(&ww.scale(r, &nf), &nf).unwrap();
                    if lhs != rhs {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn rref_of_small_matrix() {
        let nf = dn32();
        let m = NfMatrix::from_rows(vec![v(&nf, "(1, 1)"), v(&nf, "(0, 1)")]).unwrap();
        let r = rref(&nf, &m);
        assert_eq!(r.rows(), &[v(&nf, "(1, 0)"), v(&nf, "(0, 1)")]);
    }

    #[test]
    fn rref_fixture_r5() {
        let nf = dn32();
        let m = NfMatrix::from_rows(vec![
            v(&nf, "(1, 1, 2, x+1, 1)"),
            v(&nf, "(0, 0, 0, 2x+2, 1)"),
            v(&nf, "(1, 1, 1, x+2, 1)"),
        ])
        .unwrap();
        let (r, log) = rref_logged(&nf, &m);
        assert_eq!(
            r.rows(),
            &[
                v(&nf, "(1, 1, 0, 0, x)"),
                v(&nf, "(0, 0, 1, 0, 1+x)"),
                v(&nf, "(0, 0, 0, 1, 1+x)"),
            ]
        );

        // the log replays from the input to the output
        let mut rows = m.rows().to_vec();
        for op in &log {
            apply_row_op(&nf, &mut rows, op).unwrap();
        }
        assert_eq!(rows, r.rows());
    }

    #[test]
    fn rref_handles_zero_and_empty() {
        let nf = dn32();
        let zero = NfMatrix::new(3, vec![NfVector::zero(3), NfVector::zero(3)]).unwrap();
        let (r, log) = rref_logged(&nf, &zero);
        assert_eq!(r, zero);
        assert!(log.is_empty());

        let empty = NfMatrix::empty(4);
        assert_eq!(rref(&nf, &empty), empty);
    }

    #[test]
    fn rref_sinks_zero_rows() {
        let nf = dn32();
        let m = NfMatrix::from_rows(vec![
            v(&nf, "(0, 0)"),
            v(&nf, "(1, 1)"),
            v(&nf, "(2, 2)"),
        ])
        .unwrap();
        let r = rref(&nf, &m);
        assert_eq!(r.rows()[0], v(&nf, "(1, 1)"));
        assert!(r.rows()[1].is_zero());
        assert!(r.rows()[2].is_zero());
    }

    #[test]
    fn row_op_application_errors() {
        let nf = dn32();
        let mut rows = vec![v(&nf, "(1, x)")];
        assert!(apply_row_op(&nf, &mut rows, &RowOp::Swap { r: 0, s: 1 }).is_err());
        assert!(apply_row_op(
            &nf,
            &mut rows,
            &RowOp::ScaleRight { row: 0, lambda: FieldElem::ZERO }
        )
        .is_err());
        assert!(apply_row_op(
            &nf,
            &mut rows,
            &RowOp::AddRightMultiple { target: 0, source: 3, coeff: FieldElem::ONE }
        )
        .is_err());
    }

    #[test]
    fn vector_text_roundtrip() {
        let nf = dn32();
        let w = v(&nf, "( 1 , 2x + 1 , 0 )");
        assert_eq!(render_vector(&nf, &w), "(1, 1+2x, 0)");
        assert_eq!(parse_vector(&nf, &render_vector(&nf, &w)).unwrap(), w);
    }

    #[test]
    fn vector_parse_errors() {
        let nf = dn32();
        assert!(matches!(parse_vector(&nf, "1, 2").unwrap_err(), NfError::Syntax(_)));
        assert!(matches!(parse_vector(&nf, "()").unwrap_err(), NfError::Syntax(_)));
        assert!(matches!(parse_vector(&nf, "(1, y)").unwrap_err(), NfError::Syntax(_)));
        assert!(matches!(
            parse_vector(&nf, "(1, x^5)").unwrap_err(),
            NfError::DegreeTooHigh { .. }
        ));
    }

    #[test]
    fn matrix_text_format() {
        let nf = dn32();
        let text = "\n# fixture\n(1, 1, 2, x+1, 1)\n\n(0, 0, 0, 2x+2, 1)\n# trailing comment\n(1, 1, 1, x+2, 1)\n";
        let m = parse_matrix(&nf, text).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.n(), 5);
        assert_eq!(m.row(1), &v(&nf, "(0, 0, 0, 2x+2, 1)"));

        let rendered = render_matrix(&nf, &m);
        assert_eq!(parse_matrix(&nf, &rendered).unwrap(), m);

        assert!(matches!(parse_matrix(&nf, "# only comments\n").unwrap_err(), NfError::Syntax(_)));
        assert!(matches!(
            parse_matrix(&nf, "(1, x)\n(1, x, 0)").unwrap_err(),
            NfError::DimMismatch { .. }
        ));
    }
}
