//! Randomized invariants tying the constructive routes to the closure
//! oracle and pinning the shapes the eliminator promises.

use std::sync::OnceLock;

use proptest::prelude::*;

use nearvec::gen::{ege, gen_membership};
use nearvec::nvs::{parse_matrix, render_matrix, rref, NfMatrix, NfVector};
use nearvec::oracle::{gen_bruteforce, OracleCaps};
use nearvec::span::{aege, span_mask_shortcut};
use nearvec::NearfieldCtx;

fn dn32() -> &'static NearfieldCtx {
    static CTX: OnceLock<NearfieldCtx> = OnceLock::new();
    CTX.get_or_init(|| NearfieldCtx::build(3, 2).expect("small pair"))
}

fn matrix_from_codes(nf: &NearfieldCtx, n: usize, codes: &[Vec<u32>]) -> NfMatrix {
    let rows = codes
        .iter()
        .map(|r| NfVector::new(r.iter().map(|&c| nf.elem(c)).collect()))
        .collect();
    NfMatrix::new(n, rows).expect("generated at width n")
}

fn code_matrix(max_n: usize, max_k: usize) -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (1..=max_n, 0..=max_k).prop_flat_map(|(n, k)| {
        proptest::collection::vec(proptest::collection::vec(0u32..9, n), k)
            .prop_map(move |rows| (n, rows))
    })
}

proptest! {
    #[test]
    fn mask_always_agrees_with_the_support_union((n, codes) in code_matrix(5, 4)) {
        let nf = dn32();
        let input = matrix_from_codes(nf, n, &codes);
        let out = aege(nf, &input).unwrap();
        let shortcut = span_mask_shortcut(nf, &input).unwrap();
        prop_assert_eq!(out.mask().unwrap(), &shortcut);
    }

    #[test]
    fn echelon_shape_holds((n, codes) in code_matrix(5, 4)) {
        let nf = dn32();
        let input = matrix_from_codes(nf, n, &codes);
        let reduced = rref(nf, &input);

        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for row in reduced.rows() {
            match row.first_support() {
                None => seen_zero = true,
                Some(col) => {
                    prop_assert!(!seen_zero, "zero row above a non-zero row");
                    prop_assert_eq!(row[col], nf.elem(1), "pivot not normalized");
                    if let Some(prev) = last_pivot {
                        prop_assert!(col > prev, "pivot columns not increasing");
                    }
                    for other in reduced.rows() {
                        if other != row {
                            prop_assert!(other[col].is_zero(), "pivot column not cleared");
                        }
                    }
                    last_pivot = Some(col);
                }
            }
        }
    }

    #[test]
    fn eliminator_is_idempotent((n, codes) in code_matrix(4, 3)) {
        let nf = dn32();
        let input = matrix_from_codes(nf, n, &codes);
        let once = ege(nf, &input).unwrap();
        let again = ege(nf, &NfMatrix::new(n, once.basis.rows().to_vec()).unwrap()).unwrap();
        prop_assert_eq!(again.basis.rows(), once.basis.rows());
    }

    #[test]
    fn membership_matches_the_closure((n, codes) in code_matrix(3, 3), probes in proptest::collection::vec(proptest::collection::vec(0u32..9, 3), 8)) {
        let nf = dn32();
        let caps = OracleCaps::default();
        let input = matrix_from_codes(nf, n, &codes);
        let out = ege(nf, &input).unwrap();
        let closure = gen_bruteforce(nf, n, input.rows(), &caps).unwrap();

        for probe in &probes {
            let v = NfVector::new(probe.iter().take(n).map(|&c| nf.elem(c)).collect());
            let answer = gen_membership(nf, &out.basis, &v).unwrap();
            prop_assert_eq!(answer.is_some(), closure.contains(&v));
            if let Some(coeffs) = answer {
                let mut acc = NfVector::zero(n);
                for (row, &c) in out.basis.rows().iter().zip(&coeffs) {
                    acc = acc.add(&row.scale(c, nf), nf).unwrap();
                }
                prop_assert_eq!(acc, v, "claimed coefficients fail to rebuild the probe");
            }
        }
    }

    #[test]
    fn matrix_text_round_trips((n, codes) in code_matrix(5, 4)) {
        let nf = dn32();
        let input = matrix_from_codes(nf, n, &codes);
        prop_assume!(input.k() > 0);
        let text = render_matrix(nf, &input);
        let back = parse_matrix(nf, &text).unwrap();
        prop_assert_eq!(back, input);
    }
}
