//! Code representations and the generic analyses run on them.
//!
//! Three carriers share the [`Code`] trait:
//!
//! - [`ExplicitCode`]: a sorted, duplicate-free word list;
//! - [`LinearCode`]: the kernel of a full-rank parity-check matrix;
//! - [`MembershipCode`]: a membership predicate plus a uniform sampler, for
//!   codes far too large to enumerate.
//!
//! Cardinalities are tracked as exponents of `q` wherever possible; the
//! larger constructions have sizes like `3^76`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{checked_pow, hamming_distance, Field, Word};
use crate::linalg::{self, Echelon, IncrementalBasis};

/// Operations that enumerate a code refuse above `2^24` words unless forced.
pub const ENUMERATION_GUARD_LOG2: f64 = 24.0;
/// Even a forced enumeration stops here.
pub const FORCED_ENUMERATION_CAP_LOG2: f64 = 34.0;
/// Default limit on the number of pairs [`min_distance`] will compare.
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 26;
/// Default number of sampled codewords for rank and even-likeness estimates.
pub const DEFAULT_RANK_SAMPLES: usize = 4096;

/// Number of words in a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Count(u64),
    PowerOfQ { q: u8, exp: u64 },
}

impl Cardinality {
    pub fn log2(&self) -> f64 {
        match *self {
            Cardinality::Count(n) => (n as f64).log2(),
            Cardinality::PowerOfQ { q, exp } => exp as f64 * (q as f64).log2(),
        }
    }

    pub fn exact(&self) -> Option<u128> {
        match *self {
            Cardinality::Count(n) => Some(n as u128),
            Cardinality::PowerOfQ { q, exp } => checked_pow(q, exp),
        }
    }

    /// `log_q` of the size when the size is an exact power of `q`.
    pub fn logq(&self, q: u8) -> Option<u64> {
        match *self {
            Cardinality::PowerOfQ { q: base, exp } if base == q => Some(exp),
            Cardinality::PowerOfQ { .. } => None,
            Cardinality::Count(n) => {
                let mut k = 0;
                let mut acc: u64 = 1;
                while acc < n {
                    acc = acc.checked_mul(q as u64)?;
                    k += 1;
                }
                (acc == n).then_some(k)
            }
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Cardinality::Count(n) => write!(f, "{n}"),
            Cardinality::PowerOfQ { q, exp } => match checked_pow(q, exp) {
                Some(n) if n <= u64::MAX as u128 => write!(f, "{n}"),
                _ => write!(f, "{q}^{exp}"),
            },
        }
    }
}

/// Common surface of every code carrier.
pub trait Code: Send + Sync + fmt::Debug {
    fn field(&self) -> &Field;
    fn len(&self) -> usize;
    fn cardinality(&self) -> Cardinality;
    /// Membership on raw symbols; the caller guarantees length and range.
    fn contains_symbols(&self, symbols: &[u8]) -> bool;
    /// Draws a uniformly random codeword.
    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8>;
    /// Visits every codeword once, in no particular order.
    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8]));

    fn is_empty(&self) -> bool {
        false
    }

    fn contains(&self, w: &Word) -> Result<bool> {
        if w.q() != self.field().q() {
            return Err(Error::FieldMismatch {
                expected: self.field().q(),
                actual: w.q(),
            });
        }
        if w.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: w.len(),
            });
        }
        Ok(self.contains_symbols(w.symbols()))
    }

    /// Seeded uniform codeword.
    fn sample(&self, seed: u64) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Word::from_trusted(self.field().q(), self.sample_with(&mut rng))
    }
}

/// Refuses enumeration of codes above the guard (or the hard cap when forced).
pub fn check_enumerable(what: &str, log2_size: f64, force: bool) -> Result<()> {
    let budget = if force {
        FORCED_ENUMERATION_CAP_LOG2
    } else {
        ENUMERATION_GUARD_LOG2
    };
    if log2_size > budget + 1e-9 {
        return Err(Error::budget(what, log2_size, budget));
    }
    Ok(())
}

/// Materializes any code into an [`ExplicitCode`], subject to the guard.
pub fn enumerate(code: &dyn Code, force: bool) -> Result<ExplicitCode> {
    check_enumerable("enumerating code", code.cardinality().log2(), force)?;
    let mut words = Vec::new();
    code.for_each_codeword(&mut |w| words.push(w.to_vec()));
    ExplicitCode::from_words(code.field().clone(), code.len(), words)
}

/// A code given by its sorted word list.
#[derive(Clone, Debug)]
pub struct ExplicitCode {
    field: Field,
    len: usize,
    words: Vec<Vec<u8>>,
}

impl ExplicitCode {
    pub fn from_words(field: Field, len: usize, mut words: Vec<Vec<u8>>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidParameter("a code needs at least one word".into()));
        }
        for w in &words {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: w.len(),
                });
            }
            for &s in w {
                field.check_symbol(s as u32)?;
            }
        }
        words.sort_unstable();
        words.dedup();
        Ok(ExplicitCode { field, len, words })
    }

    pub fn from_word_list(field: Field, words: Vec<Word>) -> Result<Self> {
        let len = words.first().map(Word::len).unwrap_or(0);
        if let Some(w) = words.iter().find(|w| w.q() != field.q()) {
            return Err(Error::FieldMismatch {
                expected: field.q(),
                actual: w.q(),
            });
        }
        Self::from_words(field, len, words.into_iter().map(Word::into_symbols).collect())
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// The words in lexicographic order.
    pub fn words(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.words.iter().map(Vec::as_slice)
    }

    pub fn word(&self, i: usize) -> Word {
        Word::from_trusted(self.field.q(), self.words[i].clone())
    }

    pub fn rank(&self) -> usize {
        let mut basis = IncrementalBasis::new(self.len);
        for w in &self.words {
            basis.insert(&self.field, w);
            if basis.is_full() {
                break;
            }
        }
        basis.rank()
    }

    pub fn is_even_like(&self) -> bool {
        self.words.iter().all(|w| self.field.parity(w) == 0)
    }
}

impl PartialEq for ExplicitCode {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q() && self.len == other.len && self.words == other.words
    }
}

impl Code for ExplicitCode {
    fn field(&self) -> &Field {
        &self.field
    }

    fn len(&self) -> usize {
        self.len
    }

    fn cardinality(&self) -> Cardinality {
        Cardinality::Count(self.words.len() as u64)
    }

    fn contains_symbols(&self, symbols: &[u8]) -> bool {
        self.words
            .binary_search_by(|w| w.as_slice().cmp(symbols))
            .is_ok()
    }

    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        self.words[rng.gen_range(0..self.words.len())].clone()
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        for w in &self.words {
            f(w);
        }
    }
}

/// Largest syndrome handled on the stack by the hot predicates.
pub(crate) const MAX_STACK_SYNDROME: usize = 64;

/// `{x : H xᵀ = 0}` for a full-rank parity-check matrix `H`.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    len: usize,
    parity_check: Vec<Vec<u8>>,
    columns: Vec<Vec<u8>>,
    generator: Vec<Vec<u8>>,
    echelon: Echelon,
}

impl LinearCode {
    /// Builds the code from the rows of `H`; the rows must be independent.
    pub fn from_parity_check(field: Field, len: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        for row in &rows {
            if row.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    actual: row.len(),
                });
            }
            for &s in row {
                field.check_symbol(s as u32)?;
            }
        }
        let echelon = linalg::row_reduce(&field, &rows, len);
        if echelon.rank() != rows.len() {
            return Err(Error::InvalidParameter(format!(
                "parity-check matrix has {} rows but rank {}",
                rows.len(),
                echelon.rank()
            )));
        }
        let generator = linalg::kernel_basis(&field, &echelon, len);
        let columns = (0..len)
            .map(|c| rows.iter().map(|r| r[c]).collect())
            .collect();
        Ok(LinearCode {
            field,
            len,
            parity_check: rows,
            columns,
            generator,
            echelon,
        })
    }

    /// The full space `F_q^len` (no checks).
    pub fn full_space(field: Field, len: usize) -> Self {
        Self::from_parity_check(field, len, Vec::new()).expect("empty matrix has full rank")
    }

    /// The zero-sum code `{x : p(x) = 0}`, an MDS code `[len, len-1, 2]`.
    pub fn zero_sum(field: Field, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter("zero-sum code needs length ≥ 1".into()));
        }
        Self::from_parity_check(field, len, vec![vec![1; len]])
    }

    pub fn redundancy(&self) -> usize {
        self.parity_check.len()
    }

    pub fn dimension(&self) -> usize {
        self.len - self.parity_check.len()
    }

    pub fn parity_check(&self) -> &[Vec<u8>] {
        &self.parity_check
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    /// Column `t` of `H`.
    pub fn column(&self, t: usize) -> &[u8] {
        &self.columns[t]
    }

    /// Writes `H xᵀ` into `out`.
    #[inline]
    pub fn syndrome_into(&self, x: &[u8], out: &mut [u8]) {
        out.fill(0);
        for (col, &xi) in self.columns.iter().zip(x) {
            self.field.axpy(out, xi, col);
        }
    }

    pub fn syndrome(&self, x: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.redundancy()];
        self.syndrome_into(x, &mut out);
        out
    }

    /// Some `x` with `H xᵀ = syndrome`.
    pub fn coset_representative(&self, syndrome: &[u8]) -> Vec<u8> {
        assert_eq!(syndrome.len(), self.redundancy());
        let mut x = vec![0u8; self.len];
        for (i, &p) in self.echelon.pivots.iter().enumerate() {
            let y = self.echelon.transform[i]
                .iter()
                .zip(syndrome)
                .fold(0, |acc, (&t, &s)| self.field.add(acc, self.field.mul(t, s)));
            x[p] = y;
        }
        x
    }

    /// Adds a uniform codeword to `x` in place.
    pub fn add_random_codeword(&self, x: &mut [u8], rng: &mut dyn RngCore) {
        let q = self.field.q();
        for g in &self.generator {
            let c: u8 = rng.gen_range(0..q);
            self.field.axpy(x, c, g);
        }
    }

    /// Visits `offset + c` for every codeword `c`.
    pub fn for_each_translate(&self, offset: &[u8], f: &mut dyn FnMut(&[u8])) {
        let q = self.field.q();
        let k = self.generator.len();
        let mut digits = vec![0u8; k];
        let mut cur = offset.to_vec();
        loop {
            f(&cur);
            // odometer: bump the lowest digit that is not q-1
            let mut i = 0;
            loop {
                if i == k {
                    return;
                }
                let old = digits[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                let delta = self.field.sub(new, old);
                self.field.axpy(&mut cur, delta, &self.generator[i]);
                digits[i] = new;
                if new != 0 {
                    break;
                }
                i += 1;
            }
        }
    }

    /// Even-like iff every generator row sums to zero.
    pub fn is_even_like(&self) -> bool {
        self.generator.iter().all(|g| self.field.parity(g) == 0)
    }

    /// Exact minimum distance. Uses the support of `H` when there is a single
    /// check row, otherwise enumerates codewords under the guard.
    pub fn min_distance(&self) -> Result<usize> {
        if self.dimension() == 0 {
            return Err(Error::InvalidParameter(
                "minimum distance of a one-word code is undefined".into(),
            ));
        }
        match self.redundancy() {
            0 => Ok(1),
            1 => {
                let support = self.parity_check[0].iter().filter(|&&h| h != 0).count();
                Ok(if support >= 2 { 2 } else { 1 })
            }
            _ => {
                check_enumerable(
                    "minimum weight of linear code",
                    self.cardinality().log2(),
                    false,
                )?;
                let mut best = usize::MAX;
                let zero = vec![0u8; self.len];
                self.for_each_translate(&zero, &mut |w| {
                    let wt = w.iter().filter(|&&s| s != 0).count();
                    if wt > 0 && wt < best {
                        best = wt;
                    }
                });
                Ok(best)
            }
        }
    }
}

impl Code for LinearCode {
    fn field(&self) -> &Field {
        &self.field
    }

    fn len(&self) -> usize {
        self.len
    }

    fn cardinality(&self) -> Cardinality {
        Cardinality::PowerOfQ {
            q: self.field.q(),
            exp: self.dimension() as u64,
        }
    }

    fn contains_symbols(&self, symbols: &[u8]) -> bool {
        self.parity_check.iter().all(|row| {
            row.iter()
                .zip(symbols)
                .fold(0, |acc, (&h, &x)| self.field.add(acc, self.field.mul(h, x)))
                == 0
        })
    }

    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        let mut x = vec![0u8; self.len];
        self.add_random_codeword(&mut x, rng);
        x
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        self.for_each_translate(&vec![0u8; self.len], f);
    }
}

/// Predicate-and-sampler backend of a [`MembershipCode`].
pub trait MembershipOracle: Send + Sync + fmt::Debug {
    fn contains(&self, symbols: &[u8]) -> bool;
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u8>;
    /// Generates every codeword straight from the construction's definition.
    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8]));
}

/// A constructed code known through a deterministic membership predicate.
#[derive(Clone)]
pub struct MembershipCode {
    field: Field,
    len: usize,
    logq_size: u64,
    claimed_distance: u32,
    even_like: bool,
    description: String,
    oracle: Arc<dyn MembershipOracle>,
}

impl fmt::Debug for MembershipCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MembershipCode")
            .field("field", &self.field)
            .field("len", &self.len)
            .field("logq_size", &self.logq_size)
            .field("claimed_distance", &self.claimed_distance)
            .field("description", &self.description)
            .finish()
    }
}

impl MembershipCode {
    pub fn new(
        field: Field,
        len: usize,
        logq_size: u64,
        claimed_distance: u32,
        even_like: bool,
        description: impl Into<String>,
        oracle: Arc<dyn MembershipOracle>,
    ) -> Self {
        MembershipCode {
            field,
            len,
            logq_size,
            claimed_distance,
            even_like,
            description: description.into(),
            oracle,
        }
    }

    pub fn logq_size(&self) -> u64 {
        self.logq_size
    }

    pub fn claimed_distance(&self) -> u32 {
        self.claimed_distance
    }

    /// Whether the construction guarantees every word sums to zero.
    pub fn claims_even_like(&self) -> bool {
        self.even_like
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn oracle(&self) -> &Arc<dyn MembershipOracle> {
        &self.oracle
    }

    pub fn params(&self) -> CodeParams {
        CodeParams {
            q: self.field.q(),
            length: self.len as u64,
            logq_size: self.logq_size,
            distance: self.claimed_distance as u64,
        }
    }
}

impl Code for MembershipCode {
    fn field(&self) -> &Field {
        &self.field
    }

    fn len(&self) -> usize {
        self.len
    }

    fn cardinality(&self) -> Cardinality {
        Cardinality::PowerOfQ {
            q: self.field.q(),
            exp: self.logq_size,
        }
    }

    fn contains_symbols(&self, symbols: &[u8]) -> bool {
        self.oracle.contains(symbols)
    }

    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        self.oracle.sample(rng)
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        self.oracle.for_each_codeword(f)
    }
}

/// Output of a builder: enumerated when small, membership-backed otherwise.
#[derive(Clone, Debug)]
pub enum BuiltCode {
    Explicit(ExplicitCode),
    Membership(MembershipCode),
}

impl BuiltCode {
    pub fn as_code(&self) -> &dyn Code {
        match self {
            BuiltCode::Explicit(c) => c,
            BuiltCode::Membership(c) => c,
        }
    }

    /// Keeps a membership code as is, or enumerates it when under the guard.
    pub fn from_membership(code: MembershipCode) -> Result<Self> {
        if code.cardinality().log2() <= ENUMERATION_GUARD_LOG2 {
            Ok(BuiltCode::Explicit(enumerate(&code, false)?))
        } else {
            Ok(BuiltCode::Membership(code))
        }
    }
}

impl Code for BuiltCode {
    fn field(&self) -> &Field {
        self.as_code().field()
    }
    fn len(&self) -> usize {
        self.as_code().len()
    }
    fn cardinality(&self) -> Cardinality {
        self.as_code().cardinality()
    }
    fn contains_symbols(&self, symbols: &[u8]) -> bool {
        self.as_code().contains_symbols(symbols)
    }
    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        self.as_code().sample_with(rng)
    }
    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        self.as_code().for_each_codeword(f)
    }
}

/// `(N, M, d)_q` with `M = q^logq_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub q: u8,
    pub length: u64,
    pub logq_size: u64,
    pub distance: u64,
}

impl CodeParams {
    /// `N - d + 1 - logq_size`; nonnegative iff the Singleton bound holds.
    pub fn singleton_slack(&self) -> i64 {
        self.length as i64 - self.distance as i64 + 1 - self.logq_size as i64
    }

    pub fn satisfies_singleton(&self) -> bool {
        self.singleton_slack() >= 0
    }

    pub fn is_mds(&self) -> bool {
        self.singleton_slack() == 0
    }
}

/// Brute-force minimum distance over all pairs.
pub fn min_distance(code: &ExplicitCode, pair_budget: u64) -> Result<usize> {
    let n = code.size() as u64;
    if n < 2 {
        return Err(Error::InvalidParameter(
            "minimum distance needs at least two words".into(),
        ));
    }
    let pairs = n * (n - 1) / 2;
    if pairs > pair_budget {
        return Err(Error::budget(
            "pairwise distance scan",
            (pairs as f64).log2(),
            (pair_budget as f64).log2(),
        ));
    }
    let words: Vec<&[u8]> = code.words().collect();
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = hamming_distance(a, b);
            if d < best {
                best = d;
                if best == 1 {
                    return Ok(1);
                }
            }
        }
    }
    Ok(best)
}

/// A rank value and whether it is exact or a sampled lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankEstimate {
    pub rank: usize,
    pub exact: bool,
}

/// Rank of the span of `samples` sampled codewords (a lower bound).
pub fn rank_sampled(code: &dyn Code, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = IncrementalBasis::new(code.len());
    for _ in 0..samples {
        basis.insert(code.field(), &code.sample_with(&mut rng));
        if basis.is_full() {
            break;
        }
    }
    basis.rank()
}

/// Exact rank when the code is enumerable, sampled lower bound otherwise.
pub fn rank_of(code: &dyn Code, samples: usize, seed: u64) -> RankEstimate {
    if code.cardinality().log2() <= ENUMERATION_GUARD_LOG2 {
        let mut basis = IncrementalBasis::new(code.len());
        code.for_each_codeword(&mut |w| {
            if !basis.is_full() {
                basis.insert(code.field(), w);
            }
        });
        RankEstimate {
            rank: basis.rank(),
            exact: true,
        }
    } else {
        RankEstimate {
            rank: rank_sampled(code, samples, seed),
            exact: false,
        }
    }
}

/// Whether every word sums to zero: exhaustive when enumerable, otherwise
/// over `samples` sampled codewords.
pub fn is_even_like(code: &dyn Code, samples: usize, seed: u64) -> bool {
    let field = code.field();
    if code.cardinality().log2() <= ENUMERATION_GUARD_LOG2 {
        let mut ok = true;
        code.for_each_codeword(&mut |w| ok &= field.parity(w) == 0);
        ok
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| field.parity(&code.sample_with(&mut rng)) == 0)
    }
}

/// True iff the code is a `[N, N-1, 2]` MDS code.
pub fn is_mds_dist2(code: &LinearCode) -> bool {
    code.len() >= 2
        && code.dimension() + 1 == code.len()
        && matches!(code.min_distance(), Ok(2))
}
