//! Named set-producing strategies behind one trait.
//!
//! Every strategy answers "which set of vectors does this input describe"
//! for either the gen or the span problem, and different strategies for
//! the same problem must agree. Putting the fast engine routes and the
//! slow closure routes behind the same interface makes the cross-checks
//! a matter of running two registry entries and diffing.

use std::collections::BTreeSet;

use crate::dickson::NearfieldCtx;
use crate::error::NfError;
use crate::gen::ege;
use crate::nvs::{NfMatrix, NfVector};
use crate::oracle::{enumerate_basis, gen_bruteforce, span_bruteforce, OracleCaps};
use crate::span::{aege, span_mask_shortcut, SpanKind};

/// Which question a strategy answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Gen,
    Span,
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Problem::Gen => write!(f, "gen"),
            Problem::Span => write!(f, "span"),
        }
    }
}

/// A strategy that turns input rows into the explicit set they describe.
pub trait SetSolver {
    /// Stable registry key.
    fn name(&self) -> &'static str;
    fn problem(&self) -> Problem;
    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError>;
}

/// Engine route for gen: eliminate, then enumerate the direct sum.
pub struct EgeEnumerate;

impl SetSolver for EgeEnumerate {
    fn name(&self) -> &'static str {
        "ege-enumerate"
    }

    fn problem(&self) -> Problem {
        Problem::Gen
    }

    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError> {
        let out = ege(nf, matrix)?;
        let set = enumerate_basis(nf, matrix.n(), out.basis.rows(), caps)?;
        Ok(set.elements().clone())
    }
}

/// Reference route for gen: brute-force fixpoint closure.
pub struct GenClosure;

impl SetSolver for GenClosure {
    fn name(&self) -> &'static str {
        "gen-closure"
    }

    fn problem(&self) -> Problem {
        Problem::Gen
    }

    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError> {
        let set = gen_bruteforce(nf, matrix.n(), matrix.rows(), caps)?;
        Ok(set.elements().clone())
    }
}

/// Engine route for span: adjust down to unit directions, then enumerate
/// the mask (or the echelon basis in the field case).
pub struct AegeEnumerate;

impl SetSolver for AegeEnumerate {
    fn name(&self) -> &'static str {
        "aege-enumerate"
    }

    fn problem(&self) -> Problem {
        Problem::Span
    }

    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError> {
        let out = aege(nf, matrix)?;
        let rows = match &out.kind {
            SpanKind::Mask { mask, .. } => mask.unit_rows(),
            SpanKind::FieldBasis => out.gen.basis.rows().to_vec(),
        };
        let set = enumerate_basis(nf, matrix.n(), &rows, caps)?;
        Ok(set.elements().clone())
    }
}

/// Support-union route for span: no elimination at all, just the mask
/// read off the inputs, then enumeration. Nearfield grades only.
pub struct SpanShortcut;

impl SetSolver for SpanShortcut {
    fn name(&self) -> &'static str {
        "span-shortcut"
    }

    fn problem(&self) -> Problem {
        Problem::Span
    }

    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError> {
        let mask = span_mask_shortcut(nf, matrix)?;
        let set = enumerate_basis(nf, matrix.n(), &mask.unit_rows(), caps)?;
        Ok(set.elements().clone())
    }
}

/// Reference route for span: brute-force shift closure.
pub struct SpanClosure;

impl SetSolver for SpanClosure {
    fn name(&self) -> &'static str {
        "span-closure"
    }

    fn problem(&self) -> Problem {
        Problem::Span
    }

    fn solve(
        &self,
        nf: &NearfieldCtx,
        matrix: &NfMatrix,
        caps: &OracleCaps,
    ) -> Result<BTreeSet<NfVector>, NfError> {
        let set = span_bruteforce(nf, matrix.n(), matrix.rows(), caps)?;
        Ok(set.elements().clone())
    }
}

/// All registered strategies.
pub fn registry() -> Vec<Box<dyn SetSolver>> {
    vec![
        Box::new(EgeEnumerate),
        Box::new(GenClosure),
        Box::new(AegeEnumerate),
        Box::new(SpanShortcut),
        Box::new(SpanClosure),
    ]
}

/// Looks a strategy up by its registry key.
pub fn lookup(name: &str) -> Option<Box<dyn SetSolver>> {
    registry().into_iter().find(|s| s.name() == name)
}

/// Default engine/reference pairing for each problem.
pub fn default_routes(problem: Problem) -> (&'static str, &'static str) {
    match problem {
        Problem::Gen => ("ege-enumerate", "gen-closure"),
        Problem::Span => ("aege-enumerate", "span-closure"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvs::parse_matrix;

    fn dn32() -> NearfieldCtx {
        NearfieldCtx::build(3, 2).unwrap()
    }

    #[test]
    fn registry_names_resolve() {
        for solver in registry() {
            let found = lookup(solver.name()).expect("name registered");
            assert_eq!(found.name(), solver.name());
            assert_eq!(found.problem(), solver.problem());
        }
        assert!(lookup("nonsense").is_none());
        let (engine, reference) = default_routes(Problem::Gen);
        assert_eq!(lookup(engine).unwrap().problem(), Problem::Gen);
        assert_eq!(lookup(reference).unwrap().problem(), Problem::Gen);
    }

    #[test]
    fn gen_routes_agree() {
        let nf = dn32();
        let caps = OracleCaps::default();
        let input = parse_matrix(&nf, "(1, 1)\n(2, x)").unwrap();
        let fast = lookup("ege-enumerate").unwrap().solve(&nf, &input, &caps).unwrap();
        let slow = lookup("gen-closure").unwrap().solve(&nf, &input, &caps).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn span_routes_agree_three_ways() {
        let nf = dn32();
        let caps = OracleCaps::default();
        let input = parse_matrix(&nf, "(1, x)\n(0, 2)").unwrap();
        let engine = lookup("aege-enumerate").unwrap().solve(&nf, &input, &caps).unwrap();
        let shortcut = lookup("span-shortcut").unwrap().solve(&nf, &input, &caps).unwrap();
        let closure = lookup("span-closure").unwrap().solve(&nf, &input, &caps).unwrap();
        assert_eq!(engine, shortcut);
        assert_eq!(engine, closure);
    }

    #[test]
    fn field_grade_routes() {
        let nf = NearfieldCtx::build(3, 1).unwrap();
        let caps = OracleCaps::default();
        let input = parse_matrix(&nf, "(1, 2)\n(2, 1)").unwrap();
        let engine = lookup("aege-enumerate").unwrap().solve(&nf, &input, &caps).unwrap();
        let closure = lookup("span-closure").unwrap().solve(&nf, &input, &caps).unwrap();
        assert_eq!(engine, closure);
        assert!(lookup("span-shortcut").unwrap().solve(&nf, &input, &caps).is_err());
    }
}
