//! Finite fields GF(p^l) in polynomial representation.
//!
//! Elements are residue classes of Z_p[x] modulo a monic irreducible
//! polynomial of degree l. Nothing about the construction is configurable:
//! the build picks the canonical modulus and generator (see [`FieldCtx::build`]),
//! so equal parameters always yield identical elements, tables and discrete
//! logs. Multiplication runs on exp/log tables; an independent
//! polynomial-reduction path stays available as a cross-check.

use crate::error::NfError;

/// Default ceiling on the field order p^l.
pub const DEFAULT_FIELD_CAP: u32 = 1 << 20;

const LOG_ZERO: u32 = u32::MAX;

/// A field element, identified by its canonical index: the coefficient
/// vector (c_0, ..., c_{l-1}) read as a base-p integer with c_0 as the least
/// significant digit. Indices order the elements 0, 1, ..., p-1, x, 1+x, ...
/// and every "canonical order" in this crate means exactly this ordering.
///
/// The index is only meaningful relative to the [`FieldCtx`] it came from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Canonical index of the element.
    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for one finite field GF(p^l).
///
/// Owns the modulus and the exp/log tables; all element operations go through
/// it. Elements of different contexts must not be mixed, and index validity
/// is asserted on entry.
pub struct FieldCtx {
    p: u32,
    l: u32,
    order: u32,
    /// Monic modulus, coefficients ascending by power, length l+1.
    modulus: Vec<u32>,
    /// exp[i] is the index of g^i, for i in 0..order-1.
    exp: Vec<u32>,
    /// log[idx] inverts exp; log[0] is a sentinel.
    log: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("l", &self.l)
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .finish_non_exhaustive()
    }
}

impl FieldCtx {
    /// Builds GF(p^l) with the default order cap.
    pub fn build(p: u32, l: u32) -> Result<FieldCtx, NfError> {
        FieldCtx::build_with_cap(p, l, DEFAULT_FIELD_CAP)
    }

    /// Builds GF(p^l), rejecting orders above `cap`.
    ///
    /// The modulus is the monic irreducible polynomial of degree l whose
    /// coefficient tuple (c_{l-1}, ..., c_0) is lexicographically smallest.
    /// The generator is the full-order element with the smallest canonical
    /// index. Both choices are checked exhaustively, not probabilistically:
    /// irreducibility by trial division over all monic divisors of degree
    /// at most l/2, full order by powering to every maximal proper divisor
    /// of p^l - 1.
    pub fn build_with_cap(p: u32, l: u32, cap: u32) -> Result<FieldCtx, NfError> {
        if !is_prime(p) {
            return Err(NfError::NonPrime(p as u64));
        }
        if l == 0 {
            return Err(NfError::BadRange("extension degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(l).ok_or(NfError::CapExceeded {
            required: u128::MAX,
            cap: cap as u128,
        })?;
        if order > cap as u128 {
            return Err(NfError::CapExceeded { required: order, cap: cap as u128 });
        }
        let order = order as u32;

        let modulus = canonical_modulus(p, l);
        let mut ctx = FieldCtx { p, l, order, modulus, exp: Vec::new(), log: Vec::new() };
        let generator = ctx.find_generator();
        ctx.fill_tables(generator);
        Ok(ctx)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn l(&self) -> u32 {
        self.l
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Modulus coefficients, ascending by power, length l+1, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The canonical generator of the multiplicative group.
    #[inline]
    pub fn generator(&self) -> FieldElem {
        FieldElem(self.exp[if self.order == 2 { 0 } else { 1 }])
    }

    /// Element with the given canonical index.
    #[inline]
    pub fn elem(&self, code: u32) -> FieldElem {
        assert!(code < self.order, "element index {code} out of range for order {}", self.order);
        FieldElem(code)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    /// Coefficient vector (c_0, ..., c_{l-1}) of an element.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        decode(self.p, self.l, a.0)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.l {
            let mut d = x % self.p + y % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.check(a);
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.l {
            let d = x % self.p;
            if d != 0 {
                out += (self.p - d) * place;
            }
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// Product via the exp/log tables.
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n;
        FieldElem(self.exp[i as usize])
    }

    /// Product via polynomial multiplication and reduction, bypassing the
    /// tables. Kept as an independent route so the two can be checked
    /// against each other.
    pub fn mul_poly(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let pa = decode(self.p, self.l, a.0);
        let pb = decode(self.p, self.l, b.0);
        let prod = poly_mul(self.p, &pa, &pb);
        let rem = poly_rem(self.p, &prod, &self.modulus);
        FieldElem(encode(self.p, &rem))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, NfError> {
        self.check(a);
        if a.is_zero() {
            return Err(NfError::ZeroInverse);
        }
        let n = self.order - 1;
        let i = (n - self.log[a.0 as usize]) % n;
        Ok(FieldElem(self.exp[i as usize]))
    }

    /// Discrete logarithm base the canonical generator.
    pub fn dlog(&self, a: FieldElem) -> Result<u32, NfError> {
        self.check(a);
        if a.is_zero() {
            return Err(NfError::ZeroArgument);
        }
        Ok(self.log[a.0 as usize])
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        self.check(a);
        if a.is_zero() {
            return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let n = (self.order - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElem(self.exp[i as usize])
    }

    // ------------------------------------------------------------------
    // element text format
    // ------------------------------------------------------------------

    /// Canonical text form: terms by ascending power, zero terms omitted,
    /// unit coefficients dropped before x. Examples: "0", "2", "x", "1+2x",
    /// "2+x^2".
    pub fn render(&self, a: FieldElem) -> String {
        self.check(a);
        if a.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        let mut code = a.0;
        for i in 0..self.l {
            let c = code % self.p;
            code /= self.p;
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            });
        }
        parts.join("+")
    }

    /// Parses the text form. Terms may appear in any order, coefficients are
    /// reduced mod p, and repeated powers accumulate; powers at or above l
    /// are rejected rather than reduced.
    pub fn parse(&self, text: &str) -> Result<FieldElem, NfError> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(NfError::Syntax("empty element".into()));
        }
        let p = self.p as u64;
        let mut coeffs = vec![0u64; self.l as usize];
        let mut i = 0;
        let mut first = true;
        while i < chars.len() {
            let mut negate = false;
            if chars[i] == '+' || chars[i] == '-' {
                negate = chars[i] == '-';
                i += 1;
                if i == chars.len() {
                    return Err(NfError::Syntax("dangling sign".into()));
                }
            } else if !first {
                return Err(NfError::Syntax(format!("expected '+' or '-' before '{}'", chars[i])));
            }
            first = false;

            let mut coef = 0u64;
            let mut saw_digits = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                saw_digits = true;
                coef = (coef * 10 + chars[i].to_digit(10).unwrap() as u64) % p;
                i += 1;
            }

            let mut power = 0u32;
            let mut saw_x = false;
            if i < chars.len() && chars[i] == 'x' {
                saw_x = true;
                power = 1;
                i += 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let mut exp = 0u64;
                    let mut saw_exp = false;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        saw_exp = true;
                        exp = (exp * 10 + chars[i].to_digit(10).unwrap() as u64).min(u32::MAX as u64);
                        i += 1;
                    }
                    if !saw_exp {
                        return Err(NfError::Syntax("missing exponent after '^'".into()));
                    }
                    power = exp as u32;
                }
            }

            if !saw_digits && !saw_x {
                return Err(NfError::Syntax(format!("unexpected character '{}'", chars[i])));
            }
            if power >= self.l {
                return Err(NfError::DegreeTooHigh { power, degree: self.l });
            }
            let mut c = if saw_digits { coef } else { 1 };
            if negate {
                c = (p - c) % p;
            }
            coeffs[power as usize] = (coeffs[power as usize] + c) % p;
        }

        let coeffs: Vec<u32> = coeffs.into_iter().map(|c| c as u32).collect();
        Ok(FieldElem(encode(self.p, &coeffs)))
    }

    // ------------------------------------------------------------------
    // construction internals
    // ------------------------------------------------------------------

    #[inline]
    fn check(&self, a: FieldElem) {
        debug_assert!(
            a.0 < self.order,
            "element index {} out of range for order {}",
            a.0,
            self.order
        );
    }

    /// Smallest element index of full multiplicative order.
    fn find_generator(&self) -> u32 {
        let n = self.order - 1;
        if n == 1 {
            return 1;
        }
        let primes = prime_factors(n);
        'candidate: for code in 2..self.order {
            let base = decode(self.p, self.l, code);
            for &f in &primes {
                let e = (n / f) as u64;
                let pw = poly_pow_mod(self.p, &base, e, &self.modulus);
                if encode(self.p, &pw) == 1 {
                    continue 'candidate;
                }
            }
            return code;
        }
        unreachable!("a finite field always has a generator");
    }

    fn fill_tables(&mut self, generator: u32) {
        let n = (self.order - 1) as usize;
        let g = decode(self.p, self.l, generator);
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![LOG_ZERO; self.order as usize];
        let mut cur = vec![0u32; self.l as usize];
        cur[0] = 1;
        for i in 0..n {
            let code = encode(self.p, &cur);
            assert_eq!(log[code as usize], LOG_ZERO, "generator is not full order");
            exp.push(code);
            log[code as usize] = i as u32;
            let prod = poly_mul(self.p, &cur, &g);
            cur = poly_rem(self.p, &prod, &self.modulus);
            cur.resize(self.l as usize, 0);
        }
        assert_eq!(encode(self.p, &cur), 1, "generator order does not divide the group order");
        self.exp = exp;
        self.log = log;
    }
}

// ----------------------------------------------------------------------
// integer and polynomial helpers
// ----------------------------------------------------------------------

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors, ascending.
pub(crate) fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Coefficient vector of length l, c_0 first.
fn decode(p: u32, l: u32, mut code: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(l as usize);
    for _ in 0..l {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Base-p integer of a coefficient vector (inverse of `decode`).
fn encode(p: u32, coeffs: &[u32]) -> u32 {
    let mut out = 0u32;
    for &c in coeffs.iter().rev() {
        out = out * p + c;
    }
    out
}

fn poly_deg(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] += ca as u64 * cb as u64;
        }
    }
    out.into_iter().map(|c| (c % p as u64) as u32).collect()
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let md = poly_deg(m).expect("modulus must be non-zero");
    debug_assert_eq!(m[md], 1, "modulus must be monic");
    let mut r: Vec<u32> = a.to_vec();
    while let Some(rd) = poly_deg(&r) {
        if rd < md {
            break;
        }
        let coef = r[rd];
        let shift = rd - md;
        for i in 0..=md {
            let sub = (coef as u64 * m[i] as u64) % p as u64;
            let cur = r[i + shift] as u64;
            r[i + shift] = ((cur + p as u64 - sub) % p as u64) as u32;
        }
    }
    r.truncate(md);
    r
}

fn poly_pow_mod(p: u32, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut acc = poly_rem(p, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(p, &poly_mul(p, &result, &acc), m);
        }
        acc = poly_rem(p, &poly_mul(p, &acc, &acc), m);
        e >>= 1;
    }
    result
}

/// Full irreducibility test by trial division: every monic polynomial of
/// degree 1..=deg/2 is tried as a divisor. A root check alone would miss
/// square factors like (x^2+1)^2 over Z_3.
fn poly_is_irreducible(p: u32, m: &[u32]) -> bool {
    let d = match poly_deg(m) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for t in 0..count {
            let mut divisor = Vec::with_capacity(k + 1);
            let mut tt = t;
            for _ in 0..k {
                divisor.push((tt % p as u64) as u32);
                tt /= p as u64;
            }
            divisor.push(1);
            if poly_deg(&poly_rem(p, m, &divisor)).is_none() {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible of degree l over Z_p with the lexicographically
/// smallest coefficient tuple (c_{l-1}, ..., c_0). Enumerating the low
/// coefficients as a base-p integer visits tuples in exactly that order.
fn canonical_modulus(p: u32, l: u32) -> Vec<u32> {
    let count = (p as u64).pow(l);
    for t in 0..count {
        let mut coeffs = Vec::with_capacity(l as usize + 1);
        let mut tt = t;
        for _ in 0..l {
            coeffs.push((tt % p as u64) as u32);
            tt /= p as u64;
        }
        coeffs.push(1);
        if poly_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over Z_p");
}
