//! Exact linear algebra over finite Dickson nearfields.
//!
//! The crate builds finite fields GF(p^l) and the Dickson nearfields DN(q,m)
//! on top of them, then works in the right near-vector space R^n: vectors and
//! matrices with a right scalar action, and the two closure operators that
//! replace classical span when right distributivity fails. `gen` (smallest
//! R-subgroup) is computed by expanded Gaussian elimination, `span` (smallest
//! subspace) by its adjusted variant; both emit step-by-step certificates
//! that can be replayed against the input. Brute-force closure oracles and
//! set-level solver strategies back every engine result.

pub mod dickson;
pub mod error;
pub mod field;
pub mod gen;
pub mod nvs;
pub mod oracle;
pub mod report;
pub mod solver;
pub mod span;

pub use dickson::{is_dickson_pair, DicksonPair, NdTriple, NearfieldCtx, PairVerdict};
pub use error::NfError;
pub use field::{FieldCtx, FieldElem};
pub use gen::{ege, gen_membership, GenBasis, GenCertificate, GenOutcome};
pub use nvs::{NfMatrix, NfVector, RowOp};
pub use oracle::{OracleCaps, VectorSet};
pub use report::{gen_report, render_cayley, span_report, GenReport, SpanReport, StepRecord, TableFormat, TableReport};
pub use solver::{default_routes, lookup, registry, Problem, SetSolver};
pub use span::{aege, span_mask_shortcut, subspace_count, CoordMask, SpanKind, SpanOutcome};
