//! Brute-force ground truth for the elimination engines.
//!
//! Everything here computes sets by explicit closure over a finite
//! universe R^n: staged linear-combination sets, the generated R-subgroup,
//! the spanned subspace, membership predicates with violation witnesses,
//! and a classical row-space reference for the grade-1 (plain field) case.
//! The engines are fast and clever; this module is slow and literal, which
//! is exactly what makes it worth testing against.

use std::collections::BTreeSet;

use crate::dickson::NearfieldCtx;
use crate::error::NfError;
use crate::field::FieldElem;
use crate::nvs::NfVector;

/// Default element budget for gen-style closures (bitmap over R^n).
pub const DEFAULT_GEN_CAP: u64 = 100_000;
/// Default element budget for span-style closures, which quantify over the
/// whole of R^n each round and precompute universe-sized tables.
pub const DEFAULT_SPAN_CAP: u64 = 1_000;

/// Work budgets. Caps bound |R|^n, the universe a closure runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub gen_cap: u64,
    pub span_cap: u64,
}

impl Default for OracleCaps {
    fn default() -> OracleCaps {
        OracleCaps { gen_cap: DEFAULT_GEN_CAP, span_cap: DEFAULT_SPAN_CAP }
    }
}

/// How a VectorSet was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageLabel {
    /// The i-th linear-combination stage.
    Lc(usize),
    /// A fixpoint closure, with the number of rounds it took to stabilize.
    Closure { rounds: usize },
    /// Direct enumeration of coefficient tuples over a row list.
    Enumerated,
}

/// A deduplicated set of vectors in R^n, tagged with its construction
/// stage. Predicate results are recorded on the set after checks run.
#[derive(Clone)]
pub struct VectorSet {
    n: usize,
    stage: StageLabel,
    elements: BTreeSet<NfVector>,
    pub rsubgroup_flag: Option<bool>,
    pub subspace_flag: Option<bool>,
}

impl VectorSet {
    pub fn new(n: usize, stage: StageLabel, elements: BTreeSet<NfVector>) -> VectorSet {
        for v in &elements {
            assert_eq!(v.len(), n, "vector width must match the set dimension");
        }
        VectorSet { n, stage, elements, rsubgroup_flag: None, subspace_flag: None }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stage(&self) -> &StageLabel {
        &self.stage
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, v: &NfVector) -> bool {
        self.elements.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NfVector> {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<NfVector> {
        &self.elements
    }

    /// One vector literal per line, in sorted order; suitable for diffing
    /// oracle output against engine output.
    pub fn render_sorted(&self, nf: &NearfieldCtx) -> String {
        self.elements
            .iter()
            .map(|v| crate::nvs::render_vector(nf, v))
            .collect::<Vec<String>>()
            .join("\n")
    }

    /// Entries as raw code rows, for comparison with the classical
    /// reference (over a prime field the code IS the residue).
    pub fn to_code_rows(&self) -> BTreeSet<Vec<u32>> {
        self.elements
            .iter()
            .map(|v| v.entries().iter().map(|e| e.code()).collect())
            .collect()
    }
}

impl std::fmt::Debug for VectorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VectorSet")
            .field("n", &self.n)
            .field("stage", &self.stage)
            .field("len", &self.elements.len())
            .field("rsubgroup_flag", &self.rsubgroup_flag)
            .field("subspace_flag", &self.subspace_flag)
            .finish()
    }
}

/// Verdict of the subspace predicate. When it fails on an additively
/// closed set, the witness is a triple with (m+s)∘r − m∘r outside the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceVerdict {
    pub holds: bool,
    pub witness: Option<SubspaceWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceWitness {
    pub m: NfVector,
    pub s: NfVector,
    pub r: FieldElem,
}

// ----------------------------------------------------------------------
// universe plumbing
// ----------------------------------------------------------------------

fn universe_size(nf: &NearfieldCtx, n: usize, cap: u64) -> Result<u64, NfError> {
    if n == 0 {
        return Err(NfError::BadRange("dimension must be at least 1".into()));
    }
    let order = nf.order() as u128;
    let required = order.checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(NfError::CapExceeded { required, cap: cap as u128 });
    }
    Ok(required as u64)
}

fn require_width(n: usize, rows: &[NfVector]) -> Result<(), NfError> {
    for row in rows {
        if row.len() != n {
            return Err(NfError::DimMismatch { expected: n, got: row.len() });
        }
    }
    Ok(())
}

#[inline]
fn pack(order: u64, entries: &[FieldElem]) -> u64 {
    let mut key = 0u64;
    for e in entries.iter().rev() {
        key = key * order + e.code() as u64;
    }
    key
}

fn unpack(nf: &NearfieldCtx, order: u64, n: usize, mut key: u64) -> NfVector {
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        entries.push(nf.elem((key % order) as u32));
        key /= order;
    }
    NfVector::new(entries)
}

fn try_insert(
    member: &mut [bool],
    list: &mut Vec<NfVector>,
    order: u64,
    entries: &[FieldElem],
) -> Option<usize> {
    let key = pack(order, entries) as usize;
    if member[key] {
        return None;
    }
    member[key] = true;
    list.push(NfVector::new(entries.to_vec()));
    Some(list.len() - 1)
}

/// Closes `list` under pairwise addition (and right scaling when asked),
/// breadth-first from the given frontier. Returns the number of rounds
/// until nothing new appeared.
fn close_under(
    nf: &NearfieldCtx,
    n: usize,
    order: u64,
    member: &mut [bool],
    list: &mut Vec<NfVector>,
    frontier: Vec<usize>,
    with_scalars: bool,
) -> usize {
    let scalars: Vec<FieldElem> = nf.elements().collect();
    let mut buf = vec![FieldElem::ZERO; n];
    let mut frontier = frontier;
    let mut rounds = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            if with_scalars {
                for &r in &scalars {
                    for t in 0..n {
                        buf[t] = nf.mul(list[i][t], r);
                    }
                    if let Some(ix) = try_insert(member, list, order, &buf) {
                        next.push(ix);
                    }
                }
            }
            let known = list.len();
            for j in 0..known {
                for t in 0..n {
                    buf[t] = nf.add(list[i][t], list[j][t]);
                }
                if let Some(ix) = try_insert(member, list, order, &buf) {
                    next.push(ix);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        rounds += 1;
        frontier = next;
    }
    rounds
}

// ----------------------------------------------------------------------
// gen and LC stages
// ----------------------------------------------------------------------

/// Fixpoint closure of the inputs under vector addition and the right
/// scalar action: the smallest R-subgroup of R^n containing them.
pub fn gen_bruteforce(
    nf: &NearfieldCtx,
    n: usize,
    vectors: &[NfVector],
    caps: &OracleCaps,
) -> Result<VectorSet, NfError> {
    require_width(n, vectors)?;
    let size = universe_size(nf, n, caps.gen_cap)?;
    let order = nf.order() as u64;
    let mut member = vec![false; size as usize];
    let mut list: Vec<NfVector> = Vec::new();
    try_insert(&mut member, &mut list, order, NfVector::zero(n).entries());
    for v in vectors {
        try_insert(&mut member, &mut list, order, v.entries());
    }
    let frontier: Vec<usize> = (0..list.len()).collect();
    let rounds = close_under(nf, n, order, &mut member, &mut list, frontier, true);
    Ok(VectorSet::new(n, StageLabel::Closure { rounds }, list.into_iter().collect()))
}

/// The i-th linear-combination stage: stage 0 is the input set itself,
/// and each later stage is the additive closure of all right multiples of
/// the previous one. The union over all stages is gen.
pub fn lc_stage(
    nf: &NearfieldCtx,
    n: usize,
    vectors: &[NfVector],
    i: usize,
    caps: &OracleCaps,
) -> Result<VectorSet, NfError> {
    require_width(n, vectors)?;
    let size = universe_size(nf, n, caps.gen_cap)?;
    let order = nf.order() as u64;
    let scalars: Vec<FieldElem> = nf.elements().collect();

    let mut current: Vec<NfVector> = {
        let mut member = vec![false; size as usize];
        let mut list = Vec::new();
        for v in vectors {
            try_insert(&mut member, &mut list, order, v.entries());
        }
        list
    };

    let mut buf = vec![FieldElem::ZERO; n];
    for _ in 0..i {
        let mut member = vec![false; size as usize];
        let mut list: Vec<NfVector> = Vec::new();
        for w in &current {
            for &r in &scalars {
                for t in 0..n {
                    buf[t] = nf.mul(w[t], r);
                }
                try_insert(&mut member, &mut list, order, &buf);
            }
        }
        let frontier: Vec<usize> = (0..list.len()).collect();
        close_under(nf, n, order, &mut member, &mut list, frontier, false);
        current = list;
    }

    Ok(VectorSet::new(n, StageLabel::Lc(i), current.into_iter().collect()))
}

// ----------------------------------------------------------------------
// key tables: packed-key operation helpers for the span-style sweeps
// ----------------------------------------------------------------------

struct KeyTables {
    n: usize,
    order: usize,
    size: usize,
    all: Vec<NfVector>,
    elem_add: Vec<u32>,
    neg: Vec<u32>,
    scale: Vec<u32>,
}

impl KeyTables {
    fn build(nf: &NearfieldCtx, n: usize, cap: u64) -> Result<KeyTables, NfError> {
        let size64 = universe_size(nf, n, cap)?;
        if size64 > u32::MAX as u64 {
            return Err(NfError::CapExceeded { required: size64 as u128, cap: u32::MAX as u128 });
        }
        let order64 = nf.order() as u64;
        let size = size64 as usize;
        let order = nf.order() as usize;
        let all: Vec<NfVector> = (0..size64).map(|k| unpack(nf, order64, n, k)).collect();
        let scalars: Vec<FieldElem> = nf.elements().collect();

        let mut buf = vec![FieldElem::ZERO; n];
        let mut elem_add = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let sum = nf.add(nf.elem(a as u32), nf.elem(b as u32));
                elem_add[a * order + b] = sum.code();
            }
        }

        let mut neg = vec![0u32; size];
        for a in 0..size {
            for t in 0..n {
                buf[t] = nf.neg(all[a][t]);
            }
            neg[a] = pack(order64, &buf) as u32;
        }

        let mut scale = vec![0u32; size * order];
        for a in 0..size {
            for (r, &lam) in scalars.iter().enumerate() {
                for t in 0..n {
                    buf[t] = nf.mul(all[a][t], lam);
                }
                scale[a * order + r] = pack(order64, &buf) as u32;
            }
        }

        Ok(KeyTables { n, order, size, all, elem_add, neg, scale })
    }

    /// Adds two packed keys digit by digit; keys are little-endian
    /// base-|R| strings of entry codes, so no size-squared table is needed.
    #[inline]
    fn add_k(&self, mut a: usize, mut b: usize) -> usize {
        let order = self.order;
        let mut key = 0;
        let mut base = 1;
        for _ in 0..self.n {
            let digit = self.elem_add[(a % order) * order + (b % order)] as usize;
            key += digit * base;
            a /= order;
            b /= order;
            base *= order;
        }
        key
    }

    #[inline]
    fn scale_k(&self, a: usize, r: usize) -> usize {
        self.scale[a * self.order + r] as usize
    }

    /// (m + s) ∘ r − m ∘ r on packed keys.
    #[inline]
    fn shift_diff(&self, m: usize, s: usize, r: usize) -> usize {
        let left = self.scale_k(self.add_k(m, s), r);
        let right = self.neg[self.scale_k(m, r)] as usize;
        self.add_k(left, right)
    }

    fn pack_vec(&self, v: &NfVector) -> usize {
        pack(self.size_base(), v.entries()) as usize
    }

    #[inline]
    fn size_base(&self) -> u64 {
        // all keys are base-|R| digit strings
        (self.scale.len() / self.size) as u64
    }
}

fn subgroup_close_keys(
    tables: &KeyTables,
    member: &mut [bool],
    list: &mut Vec<u32>,
    processed: &mut usize,
) {
    while *processed < list.len() {
        let w = list[*processed] as usize;
        for r in 1..tables.order {
            let y = tables.scale_k(w, r);
            if !member[y] {
                member[y] = true;
                list.push(y as u32);
            }
        }
        let mut j = 0;
        while j < list.len() {
            let y = tables.add_k(w, list[j] as usize);
            if !member[y] {
                member[y] = true;
                list.push(y as u32);
            }
            j += 1;
        }
        *processed += 1;
    }
}

/// Fixpoint closure realizing the subspace definition: start from the
/// generated R-subgroup, then keep adjoining (m+s)∘r − m∘r for every
/// m in R^n, s in the set, r in R, re-closing as an R-subgroup, until
/// stable. This quantifies over the whole universe, hence the tight cap.
pub fn span_bruteforce(
    nf: &NearfieldCtx,
    n: usize,
    vectors: &[NfVector],
    caps: &OracleCaps,
) -> Result<VectorSet, NfError> {
    require_width(n, vectors)?;
    let tables = KeyTables::build(nf, n, caps.span_cap)?;
    let mut member = vec![false; tables.size];
    let mut list: Vec<u32> = Vec::new();
    let push = |member: &mut Vec<bool>, list: &mut Vec<u32>, key: usize| {
        if !member[key] {
            member[key] = true;
            list.push(key as u32);
        }
    };
    push(&mut member, &mut list, 0);
    for v in vectors {
        push(&mut member, &mut list, tables.pack_vec(v));
    }
    let mut processed = 0usize;
    subgroup_close_keys(&tables, &mut member, &mut list, &mut processed);

    let mut rounds = 0usize;
    loop {
        let before = list.len();
        let snapshot = list.clone();
        for m in 0..tables.size {
            for &s in &snapshot {
                for r in 1..tables.order {
                    let y = tables.shift_diff(m, s as usize, r);
                    if !member[y] {
                        member[y] = true;
                        list.push(y as u32);
                    }
                }
            }
        }
        subgroup_close_keys(&tables, &mut member, &mut list, &mut processed);
        if list.len() == before {
            break;
        }
        rounds += 1;
    }

    let elements: BTreeSet<NfVector> =
        list.into_iter().map(|k| tables.all[k as usize].clone()).collect();
    Ok(VectorSet::new(n, StageLabel::Closure { rounds }, elements))
}

// ----------------------------------------------------------------------
// predicates
// ----------------------------------------------------------------------

/// Exhaustive R-subgroup check: contains zero, closed under addition and
/// the right scalar action. Records the outcome on the set.
pub fn is_rsubgroup_set(
    nf: &NearfieldCtx,
    set: &mut VectorSet,
    caps: &OracleCaps,
) -> Result<bool, NfError> {
    let n = set.n();
    let size = universe_size(nf, n, caps.gen_cap)?;
    let order = nf.order() as u64;
    let mut member = vec![false; size as usize];
    let list: Vec<NfVector> = set.iter().cloned().collect();
    for v in &list {
        member[pack(order, v.entries()) as usize] = true;
    }

    let mut holds = member[0];
    let scalars: Vec<FieldElem> = nf.elements().collect();
    let mut buf = vec![FieldElem::ZERO; n];
    'outer: for a in &list {
        for &r in &scalars {
            for t in 0..n {
                buf[t] = nf.mul(a[t], r);
            }
            if !member[pack(order, &buf) as usize] {
                holds = false;
                break 'outer;
            }
        }
        for b in &list {
            for t in 0..n {
                buf[t] = nf.add(a[t], b[t]);
            }
            if !member[pack(order, &buf) as usize] {
                holds = false;
                break 'outer;
            }
        }
    }
    set.rsubgroup_flag = Some(holds);
    Ok(holds)
}

/// Reusable subspace checker: builds universe tables once, answers many
/// membership-closure queries against them.
pub struct SubspaceTester {
    tables: KeyTables,
    scalars: Vec<FieldElem>,
}

impl SubspaceTester {
    pub fn new(nf: &NearfieldCtx, n: usize, caps: &OracleCaps) -> Result<SubspaceTester, NfError> {
        let tables = KeyTables::build(nf, n, caps.span_cap)?;
        Ok(SubspaceTester { tables, scalars: nf.elements().collect() })
    }

    /// True iff the set is an additive subgroup with (m+s)∘r − m∘r inside
    /// it for every m in R^n, s in the set, r in R. On a shift failure the
    /// verdict carries the first violating triple in scan order.
    pub fn check(&self, set: &mut VectorSet) -> Result<SubspaceVerdict, NfError> {
        let t = &self.tables;
        if set.n() != t.n {
            return Err(NfError::DimMismatch { expected: t.n, got: set.n() });
        }
        let mut member = vec![false; t.size];
        let keys: Vec<usize> = set.iter().map(|v| t.pack_vec(v)).collect();
        for &k in &keys {
            member[k] = true;
        }

        if !member[0] {
            set.subspace_flag = Some(false);
            return Ok(SubspaceVerdict { holds: false, witness: None });
        }
        for &a in &keys {
            for &b in &keys {
                if !member[t.add_k(a, b)] {
                    set.subspace_flag = Some(false);
                    return Ok(SubspaceVerdict { holds: false, witness: None });
                }
            }
        }

        for m in 0..t.size {
            for &s in &keys {
                for r in 1..t.order {
                    if !member[t.shift_diff(m, s, r)] {
                        set.subspace_flag = Some(false);
                        return Ok(SubspaceVerdict {
                            holds: false,
                            witness: Some(SubspaceWitness {
                                m: t.all[m].clone(),
                                s: t.all[s].clone(),
                                r: self.scalars[r],
                            }),
                        });
                    }
                }
            }
        }
        set.subspace_flag = Some(true);
        Ok(SubspaceVerdict { holds: true, witness: None })
    }
}

/// One-shot subspace check; builds the tables, runs, discards them.
pub fn is_subspace_set(
    nf: &NearfieldCtx,
    set: &mut VectorSet,
    caps: &OracleCaps,
) -> Result<SubspaceVerdict, NfError> {
    SubspaceTester::new(nf, set.n(), caps)?.check(set)
}

// ----------------------------------------------------------------------
// enumeration and the classical reference
// ----------------------------------------------------------------------

/// All sums Σ rows[i]∘r_i over coefficient tuples. The result must have
/// exactly |R|^k elements (the sum is direct); a collision is reported as
/// an internal error because it falsifies the caller's basis.
pub fn enumerate_basis(
    nf: &NearfieldCtx,
    n: usize,
    rows: &[NfVector],
    caps: &OracleCaps,
) -> Result<VectorSet, NfError> {
    require_width(n, rows)?;
    let order = nf.order() as usize;
    let k = rows.len();
    let combos = (order as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if combos > caps.gen_cap as u128 {
        return Err(NfError::CapExceeded { required: combos, cap: caps.gen_cap as u128 });
    }
    let scalars: Vec<FieldElem> = nf.elements().collect();
    let mut out: BTreeSet<NfVector> = BTreeSet::new();
    if k == 0 {
        out.insert(NfVector::zero(n));
    } else {
        let mut digits = vec![0usize; k];
        let mut buf = vec![FieldElem::ZERO; n];
        'tuples: loop {
            for t in 0..n {
                buf[t] = FieldElem::ZERO;
            }
            for (i, row) in rows.iter().enumerate() {
                let r = scalars[digits[i]];
                for t in 0..n {
                    buf[t] = nf.add(buf[t], nf.mul(row[t], r));
                }
            }
            out.insert(NfVector::new(buf.clone()));
            let mut d = 0;
            loop {
                if d == k {
                    break 'tuples;
                }
                digits[d] += 1;
                if digits[d] < order {
                    break;
                }
                digits[d] = 0;
                d += 1;
            }
        }
    }
    if (out.len() as u128) != combos {
        return Err(NfError::Internal(format!(
            "enumeration found {} elements, expected {} for a direct sum of {} rows",
            out.len(),
            combos,
            k
        )));
    }
    Ok(VectorSet::new(n, StageLabel::Enumerated, out))
}

fn pow_mod(mut base: u64, mut exp: u32, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Textbook reduced row echelon form over Z_p, on raw residue rows. This
/// deliberately shares no code with the nearfield machinery; it is the
/// independent reference for the grade-1 case. Rows must be rectangular
/// and p must be prime.
pub fn classical_rref(p: u32, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let p64 = p as u64;
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| row.iter().map(|&e| e as u64 % p64).collect())
        .collect();
    let width = m.first().map_or(0, |r| r.len());
    for row in &m {
        assert_eq!(row.len(), width, "ragged matrix");
    }
    let mut next = 0usize;
    for col in 0..width {
        if next == m.len() {
            break;
        }
        let Some(pivot) = (next..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(next, pivot);
        let inv = pow_mod(m[next][col], p - 2, p64);
        for t in 0..width {
            m[next][t] = m[next][t] * inv % p64;
        }
        for r in 0..m.len() {
            if r == next || m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col];
            for t in 0..width {
                m[r][t] = (m[r][t] + (p64 - factor) * m[next][t]) % p64;
            }
        }
        next += 1;
    }
    m.into_iter().map(|row| row.into_iter().map(|e| e as u32).collect()).collect()
}

/// The full row space over Z_p as an explicit set: every linear
/// combination of the input rows, p^k of them before deduplication.
pub fn classical_row_space(
    p: u32,
    n: usize,
    rows: &[Vec<u32>],
    cap: u64,
) -> Result<BTreeSet<Vec<u32>>, NfError> {
    let p64 = p as u64;
    for row in rows {
        if row.len() != n {
            return Err(NfError::DimMismatch { expected: n, got: row.len() });
        }
    }
    let k = rows.len();
    let combos = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if combos > cap as u128 {
        return Err(NfError::CapExceeded { required: combos, cap: cap as u128 });
    }
    let mut out = BTreeSet::new();
    let mut digits = vec![0u32; k];
    loop {
        let mut sum = vec![0u64; n];
        for (i, row) in rows.iter().enumerate() {
            let c = digits[i] as u64;
            for t in 0..n {
                sum[t] = (sum[t] + c * row[t] as u64) % p64;
            }
        }
        out.insert(sum.into_iter().map(|e| e as u32).collect::<Vec<u32>>());
        let mut d = 0;
        loop {
            if d == k {
                return Ok(out);
            }
            digits[d] += 1;
            if digits[d] < p {
                break;
            }
            digits[d] = 0;
            d += 1;
        }
    }
}
