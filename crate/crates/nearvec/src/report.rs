//! Serializable views of engine results and multiplication tables.
//!
//! Elements cross the boundary as their canonical text forms, so reports
//! are readable as-is and can be re-ingested: a basis parsed back from a
//! report answers membership queries exactly like the original. Row and
//! column indices inside certificates are 0-based; mask positions are
//! 1-based, matching how coordinate subspaces are written.

use serde::{Deserialize, Serialize};

use crate::dickson::NearfieldCtx;
use crate::error::NfError;
use crate::gen::{CertStep, GenBasis, GenOutcome};
use crate::nvs::{NfVector, RowOp};
use crate::span::{is_subspace, AdjustmentRecord, SpanKind, SpanOutcome};

/// One certificate step in wire form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum StepRecord {
    Swap { r: usize, s: usize },
    ScaleRight { row: usize, lambda: String },
    AddRightMultiple { target: usize, source: usize, coeff: String },
    Trick {
        r: usize,
        s: usize,
        col: usize,
        triple: [String; 3],
        theta: Vec<String>,
        gamma: String,
        phi: Vec<String>,
    },
    Append { index: usize, row: Vec<String> },
    Drop { index: usize },
    Adjust {
        row: usize,
        j1: usize,
        j2: usize,
        triple: [String; 3],
        a: Vec<String>,
        v: Vec<String>,
        gamma: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenReport {
    pub pair: [u32; 2],
    pub n: usize,
    pub basis: Vec<Vec<String>>,
    pub rank: usize,
    pub certificate: Vec<StepRecord>,
    pub field_mode: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub pair: [u32; 2],
    pub n: usize,
    /// Included coordinate positions, 1-based, ascending; empty in field
    /// mode, where `basis` carries the echelon rows instead.
    pub mask: Vec<usize>,
    pub dimension: usize,
    pub is_subspace_of_inputs_gen: bool,
    pub field_mode: bool,
    pub basis: Vec<Vec<String>>,
    pub certificate: Vec<StepRecord>,
}

fn render_row(nf: &NearfieldCtx, v: &NfVector) -> Vec<String> {
    v.entries().iter().map(|&e| nf.render(e)).collect()
}

fn parse_row(nf: &NearfieldCtx, strings: &[String]) -> Result<NfVector, NfError> {
    if strings.is_empty() {
        return Err(NfError::Syntax("empty row in report".into()));
    }
    Ok(NfVector::new(
        strings.iter().map(|s| nf.parse(s)).collect::<Result<Vec<_>, _>>()?,
    ))
}

fn step_record(nf: &NearfieldCtx, step: &CertStep) -> StepRecord {
    match step {
        CertStep::Row(RowOp::Swap { r, s }) => StepRecord::Swap { r: *r, s: *s },
        CertStep::Row(RowOp::ScaleRight { row, lambda }) => {
            StepRecord::ScaleRight { row: *row, lambda: nf.render(*lambda) }
        }
        CertStep::Row(RowOp::AddRightMultiple { target, source, coeff }) => {
            StepRecord::AddRightMultiple {
                target: *target,
                source: *source,
                coeff: nf.render(*coeff),
            }
        }
        CertStep::Trick(rec) => StepRecord::Trick {
            r: rec.r,
            s: rec.s,
            col: rec.col,
            triple: [
                nf.render(rec.triple.alpha),
                nf.render(rec.triple.beta),
                nf.render(rec.triple.lambda),
            ],
            theta: render_row(nf, &rec.theta),
            gamma: nf.render(rec.gamma),
            phi: render_row(nf, &rec.phi),
        },
        CertStep::Append { index, row } => {
            StepRecord::Append { index: *index, row: render_row(nf, row) }
        }
        CertStep::Drop { index } => StepRecord::Drop { index: *index },
    }
}

fn adjust_record(nf: &NearfieldCtx, rec: &AdjustmentRecord) -> StepRecord {
    StepRecord::Adjust {
        row: rec.row,
        j1: rec.j1,
        j2: rec.j2,
        triple: [
            nf.render(rec.triple.alpha),
            nf.render(rec.triple.beta),
            nf.render(rec.triple.lambda),
        ],
        a: render_row(nf, &rec.a),
        v: render_row(nf, &rec.v),
        gamma: nf.render(rec.gamma),
    }
}

/// Wire form of a gen outcome.
pub fn gen_report(nf: &NearfieldCtx, outcome: &GenOutcome) -> GenReport {
    GenReport {
        pair: [nf.q(), nf.m()],
        n: outcome.basis.n(),
        basis: outcome.basis.rows().iter().map(|r| render_row(nf, r)).collect(),
        rank: outcome.basis.rank(),
        certificate: outcome.certificate.steps.iter().map(|s| step_record(nf, s)).collect(),
        field_mode: outcome.field_mode,
    }
}

/// Wire form of a span outcome; the certificate is the gen certificate
/// followed by the adjustment steps.
pub fn span_report(nf: &NearfieldCtx, outcome: &SpanOutcome) -> SpanReport {
    let mut certificate: Vec<StepRecord> =
        outcome.gen.certificate.steps.iter().map(|s| step_record(nf, s)).collect();
    let (mask, basis) = match &outcome.kind {
        SpanKind::Mask { mask, adjustments } => {
            certificate.extend(adjustments.iter().map(|a| adjust_record(nf, a)));
            (mask.included().iter().copied().collect(), Vec::new())
        }
        SpanKind::FieldBasis => (
            Vec::new(),
            outcome.gen.basis.rows().iter().map(|r| render_row(nf, r)).collect(),
        ),
    };
    SpanReport {
        pair: [nf.q(), nf.m()],
        n: outcome.gen.basis.n(),
        mask,
        dimension: outcome.dimension(),
        is_subspace_of_inputs_gen: is_subspace(nf, &outcome.gen.basis).is_subspace,
        field_mode: matches!(outcome.kind, SpanKind::FieldBasis),
        basis,
        certificate,
    }
}

impl GenReport {
    /// Rebuilds the basis from its text rows, checking the context matches
    /// the pair the report was written for.
    pub fn basis_rows(&self, nf: &NearfieldCtx) -> Result<GenBasis, NfError> {
        if [nf.q(), nf.m()] != self.pair {
            return Err(NfError::BadRange(format!(
                "report is for DN({}, {}), context is DN({}, {})",
                self.pair[0],
                self.pair[1],
                nf.q(),
                nf.m()
            )));
        }
        let rows = self
            .basis
            .iter()
            .map(|r| parse_row(nf, r))
            .collect::<Result<Vec<_>, _>>()?;
        GenBasis::new(self.n, rows)
    }
}

// ----------------------------------------------------------------------
// multiplication tables
// ----------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Ascii,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub pair: [u32; 2],
    pub labels: Vec<String>,
    /// table[a][b] = a ∘ b, indices following `labels`.
    pub table: Vec<Vec<String>>,
}

/// Renders the full multiplication table, entry(row a, column b) = a ∘ b
/// in canonical element order.
pub fn render_cayley(nf: &NearfieldCtx, format: TableFormat) -> Result<String, NfError> {
    let table = nf.cayley_table()?;
    let labels: Vec<String> = nf.elements().map(|e| nf.render(e)).collect();
    let cells: Vec<Vec<String>> = table
        .iter()
        .map(|row| row.iter().map(|&e| nf.render(e)).collect())
        .collect();

    match format {
        TableFormat::Json => {
            let report = TableReport { pair: [nf.q(), nf.m()], labels, table: cells };
            serde_json::to_string_pretty(&report)
                .map_err(|e| NfError::Internal(format!("serialization failed: {e}")))
        }
        TableFormat::Csv => {
            let mut out = String::new();
            out.push_str("*,");
            out.push_str(&labels.join(","));
            out.push('\n');
            for (label, row) in labels.iter().zip(&cells) {
                out.push_str(label);
                out.push(',');
                out.push_str(&row.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        TableFormat::Ascii => {
            let width = labels.iter().map(|l| l.len()).max().unwrap_or(1);
            let pad = |s: &str| format!("{s:>width$}");
            let mut out = String::new();
            out.push_str(&pad("*"));
            for l in &labels {
                out.push(' ');
                out.push_str(&pad(l));
            }
            out.push('\n');
            out.push_str(&"-".repeat((width + 1) * (labels.len() + 1) - 1));
            out.push('\n');
            for (label, row) in labels.iter().zip(&cells) {
                out.push_str(&pad(label));
                for cell in row {
                    out.push(' ');
                    out.push_str(&pad(cell));
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}
