//! Finite Dickson nearfields DN(q, m).
//!
//! DN(q, m) lives on the additive group of GF(q^m) and twists the
//! multiplication: a ∘ b = a · b^(q^k), where k is chosen per coset of the
//! index-m subgroup of the multiplicative group. Left distributivity
//! survives (Frobenius is additive), right distributivity fails somewhere
//! whenever m > 1, and (R*, ∘) is still a group. m = 1 degenerates to the
//! field itself.
//!
//! The coset labeling follows the canonical generator g of GF(q^m)*: an
//! element a gets twist index k when dlog(a) ≡ μ(k) (mod m), with
//! μ(k) = (q^k − 1)/(q − 1) mod m. For a Dickson pair, k ↦ μ(k) is a
//! bijection on Z_m; the build asserts this and sweeps the nearfield axioms
//! before handing the context out.

use crate::error::NfError;
use crate::field::{prime_factors, FieldCtx, FieldElem};

/// Cayley tables above this order are refused rather than materialized.
pub const TABLE_ORDER_CAP: u32 = 1024;

/// Exhaustive axiom sweeps run up to this order; larger contexts are
/// verified on a deterministic sample of triples.
const EXHAUSTIVE_SWEEP_CAP: u32 = 81;
const SAMPLED_SWEEP_TRIPLES: usize = 20_000;

/// A (q, m) parameter pair for a Dickson nearfield.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DicksonPair {
    pub q: u32,
    pub m: u32,
}

/// Outcome of checking the Dickson pair conditions, including which
/// condition failed. `is_dickson_pair` collapses this to a boolean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairVerdict {
    /// All conditions hold; carries the factorization q = p^l.
    Pair { p: u32, l: u32 },
    /// q is not a prime power.
    NotPrimePower,
    /// m is zero.
    ZeroGrade,
    /// Prime r divides m but not q − 1.
    BadPrimeDivisor { r: u32 },
    /// q ≡ 3 (mod 4) while 4 divides m.
    FourDividesGrade,
}

impl PairVerdict {
    pub fn is_pair(&self) -> bool {
        matches!(self, PairVerdict::Pair { .. })
    }

    /// Human-readable reason when the pair is rejected.
    pub fn reason(&self) -> Option<String> {
        match self {
            PairVerdict::Pair { .. } => None,
            PairVerdict::NotPrimePower => Some("q is not a prime power".to_string()),
            PairVerdict::ZeroGrade => Some("m must be at least 1".to_string()),
            PairVerdict::BadPrimeDivisor { r } => {
                Some(format!("prime {r} divides m but not q-1"))
            }
            PairVerdict::FourDividesGrade => {
                Some("q = 3 (mod 4) while 4 divides m".to_string())
            }
        }
    }
}

impl DicksonPair {
    /// Checks all Dickson pair conditions and reports the first failure:
    /// q must be a prime power, every prime divisor of m must divide q − 1,
    /// and q ≡ 3 (mod 4) forbids 4 | m.
    pub fn check(q: u32, m: u32) -> PairVerdict {
        let (p, l) = match prime_power(q) {
            Some(pl) => pl,
            None => return PairVerdict::NotPrimePower,
        };
        if m == 0 {
            return PairVerdict::ZeroGrade;
        }
        for r in prime_factors(m) {
            if (q - 1) % r != 0 {
                return PairVerdict::BadPrimeDivisor { r };
            }
        }
        if q % 4 == 3 && m % 4 == 0 {
            return PairVerdict::FourDividesGrade;
        }
        PairVerdict::Pair { p, l }
    }
}

/// Boolean form of [`DicksonPair::check`]. Non-prime-power q is an error
/// rather than `false`; condition failures on valid prime powers are `false`.
pub fn is_dickson_pair(q: u32, m: u32) -> Result<bool, NfError> {
    match DicksonPair::check(q, m) {
        PairVerdict::Pair { .. } => Ok(true),
        PairVerdict::NotPrimePower => Err(NfError::NotPrimePower(q as u64)),
        PairVerdict::ZeroGrade => Err(NfError::BadRange("m must be at least 1".into())),
        _ => Ok(false),
    }
}

/// A scalar triple witnessing a right-distributivity failure:
/// (alpha + beta) ∘ lambda ≠ alpha ∘ lambda + beta ∘ lambda.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NdTriple {
    pub alpha: FieldElem,
    pub beta: FieldElem,
    pub lambda: FieldElem,
}

impl NdTriple {
    /// True when the triple actually witnesses a failure in `nf`.
    pub fn is_witness(&self, nf: &NearfieldCtx) -> bool {
        let lhs = nf.mul(nf.add(self.alpha, self.beta), self.lambda);
        let rhs = nf.add(nf.mul(self.alpha, self.lambda), nf.mul(self.beta, self.lambda));
        lhs != rhs
    }
}

/// Arithmetic context for one Dickson nearfield DN(q, m).
///
/// Wraps the field GF(q^m) and the coset data for the twisted product.
/// Addition is the field's; `mul`/`inv` are the nearfield operations.
pub struct NearfieldCtx {
    pair: DicksonPair,
    field: FieldCtx,
    /// mu[k] = (q^k − 1)/(q − 1) mod m.
    mu: Vec<u32>,
    /// coset_of[dlog(a) mod m] = twist index k for a.
    coset_of: Vec<u32>,
    /// twist[k] = q^k mod (order − 1); right operands are raised to this.
    twist: Vec<u64>,
    /// Canonical right-distributivity witness, None when m = 1.
    nd_triple: Option<NdTriple>,
}

impl std::fmt::Debug for NearfieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NearfieldCtx")
            .field("q", &self.pair.q)
            .field("m", &self.pair.m)
            .field("order", &self.field.order())
            .finish_non_exhaustive()
    }
}

impl NearfieldCtx {
    /// Builds DN(q, m) with the default field order cap.
    pub fn build(q: u32, m: u32) -> Result<NearfieldCtx, NfError> {
        NearfieldCtx::build_with_cap(q, m, crate::field::DEFAULT_FIELD_CAP)
    }

    /// Builds DN(q, m), rejecting orders q^m above `cap`.
    ///
    /// Verifies the Dickson pair conditions, the bijectivity of the coset
    /// labeling, and the nearfield axioms themselves (left distributivity,
    /// associativity, identity, inverses) — exhaustively for orders up to
    /// 81, on a deterministic sample above that.
    pub fn build_with_cap(q: u32, m: u32, cap: u32) -> Result<NearfieldCtx, NfError> {
        let (p, l) = match DicksonPair::check(q, m) {
            PairVerdict::Pair { p, l } => (p, l),
            verdict => {
                return Err(NfError::NotDicksonPair {
                    q: q as u64,
                    m: m as u64,
                    reason: verdict.reason().unwrap_or_default(),
                })
            }
        };
        let degree = l.checked_mul(m).ok_or(NfError::BadRange("q^m overflows".into()))?;
        let field = FieldCtx::build_with_cap(p, degree, cap)?;
        let order = field.order();

        let mut mu = Vec::with_capacity(m as usize);
        let mut acc = 0u64;
        for _ in 0..m {
            mu.push((acc % m as u64) as u32);
            acc = acc * q as u64 + 1;
        }
        let mut coset_of = vec![u32::MAX; m as usize];
        for (k, &r) in mu.iter().enumerate() {
            if coset_of[r as usize] != u32::MAX {
                return Err(NfError::Internal(format!(
                    "coset labeling is not a bijection: mu({k}) collides at residue {r}"
                )));
            }
            coset_of[r as usize] = k as u32;
        }

        let n = (order - 1) as u64;
        let mut twist = Vec::with_capacity(m as usize);
        let mut t = 1u64 % n.max(1);
        for _ in 0..m {
            twist.push(t);
            t = t * q as u64 % n.max(1);
        }

        let mut nf = NearfieldCtx { pair: DicksonPair { q, m }, field, mu, coset_of, twist, nd_triple: None };
        if m > 1 {
            nf.nd_triple = Some(nf.find_nd_triple()?);
        }
        nf.verify_axioms()?;
        Ok(nf)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.pair.q
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.pair.m
    }

    #[inline]
    pub fn pair(&self) -> DicksonPair {
        self.pair
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// The underlying field GF(q^m); addition and the element text format
    /// live there.
    #[inline]
    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// True when m = 1 and the multiplication is plain field multiplication.
    #[inline]
    pub fn is_field(&self) -> bool {
        self.pair.m == 1
    }

    /// mu table (k ↦ (q^k−1)/(q−1) mod m), exposed for inspection.
    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    // additive structure and formats delegate to the field

    #[inline]
    pub fn elem(&self, code: u32) -> FieldElem {
        self.field.elem(code)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        self.field.elements()
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.field.add(a, b)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.field.neg(a)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.field.sub(a, b)
    }

    pub fn render(&self, a: FieldElem) -> String {
        self.field.render(a)
    }

    pub fn parse(&self, text: &str) -> Result<FieldElem, NfError> {
        self.field.parse(text)
    }

    /// Twist index k of a non-zero element.
    fn coset(&self, a: FieldElem) -> usize {
        let r = self.field.dlog(a).expect("coset of zero is undefined") % self.pair.m;
        self.coset_of[r as usize] as usize
    }

    /// The nearfield product a ∘ b = a · b^(q^k), k the coset index of a.
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let k = self.coset(a);
        self.field.mul(a, self.field.pow(b, self.twist[k]))
    }

    /// Two-sided inverse under ∘. The twist on the right operand is the
    /// Frobenius power x ↦ x^(q^k), whose inverse on GF(q^m) is
    /// x ↦ x^(q^(m−k)); applying it to the field inverse of a gives the
    /// unique b with a ∘ b = b ∘ a = 1.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, NfError> {
        if a.is_zero() {
            return Err(NfError::ZeroInverse);
        }
        let k = self.coset(a);
        let kk = (self.pair.m as usize - k) % self.pair.m as usize;
        let b = self.field.pow(self.field.inv(a)?, self.twist[kk]);
        debug_assert_eq!(self.mul(a, b), FieldElem::ONE);
        debug_assert_eq!(self.mul(b, a), FieldElem::ONE);
        Ok(b)
    }

    /// Canonical right-distributivity witness fixed at build time;
    /// None when m = 1.
    #[inline]
    pub fn nd_triple(&self) -> Option<NdTriple> {
        self.nd_triple
    }

    /// Searches for the first triple (alpha, beta, lambda), ordered by
    /// canonical element index, with (alpha+beta)∘lambda ≠ alpha∘lambda +
    /// beta∘lambda. The result is deterministic per context and is what
    /// `nd_triple` caches.
    pub fn find_nd_triple(&self) -> Result<NdTriple, NfError> {
        if self.pair.m == 1 {
            return Err(NfError::FullyDistributive);
        }
        for alpha in self.elements() {
            for beta in self.elements() {
                for lambda in self.elements() {
                    let t = NdTriple { alpha, beta, lambda };
                    if t.is_witness(self) {
                        return Ok(t);
                    }
                }
            }
        }
        Err(NfError::Internal(
            "no right-distributivity failure found although m > 1".into(),
        ))
    }

    /// The distributive elements R_d = {z : (x+y)∘z = x∘z + y∘z for all
    /// x, y}, computed exhaustively. Asserts the theory guarantees: exactly
    /// q of them, closed under addition, multiplication and inverses.
    pub fn distributive_elements(&self) -> Vec<FieldElem> {
        let out: Vec<FieldElem> = self
            .elements()
            .filter(|&z| {
                self.elements().all(|x| {
                    self.elements().all(|y| {
                        self.mul(self.add(x, y), z)
                            == self.add(self.mul(x, z), self.mul(y, z))
                    })
                })
            })
            .collect();

        assert_eq!(out.len() as u32, self.pair.q, "distributive elements must form GF(q)");
        let set: std::collections::BTreeSet<FieldElem> = out.iter().copied().collect();
        for &a in &out {
            for &b in &out {
                assert!(set.contains(&self.add(a, b)), "R_d not closed under +");
                assert!(set.contains(&self.mul(a, b)), "R_d not closed under *");
            }
            if !a.is_zero() {
                assert!(set.contains(&self.inv(a).unwrap()), "R_d not closed under inverse");
            }
        }
        out
    }

    /// Full multiplication table, entries[a][b] = a ∘ b, indexed by
    /// canonical element order. Refused above [`TABLE_ORDER_CAP`].
    pub fn cayley_table(&self) -> Result<Vec<Vec<FieldElem>>, NfError> {
        let order = self.order();
        if order > TABLE_ORDER_CAP {
            return Err(NfError::CapExceeded {
                required: order as u128,
                cap: TABLE_ORDER_CAP as u128,
            });
        }
        Ok(self
            .elements()
            .map(|a| self.elements().map(|b| self.mul(a, b)).collect())
            .collect())
    }

    // ------------------------------------------------------------------
    // build-time verification
    // ------------------------------------------------------------------

    fn verify_axioms(&self) -> Result<(), NfError> {
        let order = self.order();
        let one = FieldElem::ONE;

        for a in self.elements() {
            if self.mul(one, a) != a || self.mul(a, one) != a {
                return Err(NfError::Internal(format!(
                    "1 is not a multiplicative identity at index {}",
                    a.code()
                )));
            }
            if !a.is_zero() {
                let b = self.inv(a)?;
                if self.mul(a, b) != one || self.mul(b, a) != one {
                    return Err(NfError::Internal(format!(
                        "inverse failed at index {}",
                        a.code()
                    )));
                }
            }
            if self.is_field() && self.mul(a, self.elem(order - 1)) != self.field.mul(a, self.elem(order - 1)) {
                return Err(NfError::Internal("grade-1 product deviates from the field".into()));
            }
        }

        let check = |a: FieldElem, b: FieldElem, c: FieldElem| -> Result<(), NfError> {
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return Err(NfError::Internal(format!(
                    "left distributivity fails at ({}, {}, {})",
                    a.code(),
                    b.code(),
                    c.code()
                )));
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(NfError::Internal(format!(
                    "associativity fails at ({}, {}, {})",
                    a.code(),
                    b.code(),
                    c.code()
                )));
            }
            if self.is_field() && self.mul(a, b) != self.field.mul(a, b) {
                return Err(NfError::Internal(format!(
                    "grade-1 product deviates from the field at ({}, {})",
                    a.code(),
                    b.code()
                )));
            }
            Ok(())
        };

        if order <= EXHAUSTIVE_SWEEP_CAP {
            for a in self.elements() {
                for b in self.elements() {
                    for c in self.elements() {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64 ^ (order as u64) << 32 ^ self.pair.m as u64;
            let mut next = move || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 33) % order as u64) as u32
            };
            for _ in 0..SAMPLED_SWEEP_TRIPLES {
                check(self.elem(next()), self.elem(next()), self.elem(next()))?;
            }
        }
        Ok(())
    }
}

/// q = p^l for prime p, or None.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = prime_factors(q)[0];
    let mut l = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        l += 1;
    }
    (rest == 1).then_some((p, l))
}
