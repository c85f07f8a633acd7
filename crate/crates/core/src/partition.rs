//! Ingredients of the concatenation constructions: q-ary Hamming codes, the
//! partition of `F_q^n` into Hamming cosets, the even-like distance-3 code of
//! length `q^s`, and the partition of each sum-level coset of the zero-sum
//! code into translates of that distance-3 code.
//!
//! Every partition here is indexed by a syndrome read through the fixed
//! base-`q` [`IndexMap`].

use std::fmt;
use std::sync::Arc;

use rand::{seq::SliceRandom, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{Cardinality, Code, LinearCode, MAX_STACK_SYNDROME};
use crate::error::{Error, Result};
use crate::field::Field;

/// Bijection `F_q^s → {0, …, q^s − 1}` by little-endian base-`q` digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexMap {
    q: u8,
    s: usize,
    size: usize,
}

impl IndexMap {
    pub fn new(q: u8, s: usize) -> Self {
        let size = (q as usize).pow(s as u32);
        IndexMap { q, s, size }
    }

    pub fn digits(&self) -> usize {
        self.s
    }

    /// `q^s`
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn index(&self, v: &[u8]) -> usize {
        debug_assert_eq!(v.len(), self.s);
        v.iter()
            .rev()
            .fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    #[inline]
    pub fn vector_into(&self, mut j: usize, out: &mut [u8]) {
        debug_assert!(j < self.size);
        for d in out.iter_mut() {
            *d = (j % self.q as usize) as u8;
            j /= self.q as usize;
        }
    }

    pub fn vector(&self, j: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.s];
        self.vector_into(j, &mut v);
        v
    }

    /// `ind(ind⁻¹(a) + ind⁻¹(b))` with vector addition in `F_q^s`.
    pub fn add(&self, field: &Field, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let q = self.q as usize;
        let mut out = 0usize;
        let mut place = 1usize;
        for _ in 0..self.s {
            let d = field.add((a % q) as u8, (b % q) as u8) as usize;
            out += d * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }
}

/// A partition of a word set into equally sized, labelled parts.
///
/// This is the plug-in point for the constructions: any implementation
/// works, as long as parts are disjoint and cover the ambient set.
pub trait CodePartition: Send + Sync + fmt::Debug {
    fn field(&self) -> &Field;
    fn len(&self) -> usize;
    /// Number of parts.
    fn parts(&self) -> usize;
    /// `log_q` of the size of every part.
    fn part_logq_size(&self) -> u64;
    /// Whether `w` lies in the set being partitioned.
    fn in_ambient(&self, w: &[u8]) -> bool;
    /// Label of the part holding `w`; `w` must be in the ambient set.
    fn index_of(&self, w: &[u8]) -> usize;
    fn sample_part(&self, j: usize, rng: &mut dyn RngCore) -> Vec<u8>;
    fn for_each_in_part(&self, j: usize, f: &mut dyn FnMut(&[u8]));
}

/// What a [`SyndromePartition`] partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// All of `F_q^len`.
    FullSpace,
    /// The sum level `{x : p(x) = level}`.
    SumLevel { level: u8 },
}

/// Cosets of a linear code, labelled by (part of) their syndrome.
///
/// For a full-space partition the label is `ind(H xᵀ)`. For a sum-level
/// partition the first row of `H` must be all ones: it pins the level, and
/// the remaining rows give the label.
#[derive(Clone, Debug)]
pub struct SyndromePartition {
    base: LinearCode,
    ambient: Ambient,
    skip_rows: usize,
    index: IndexMap,
}

impl SyndromePartition {
    pub fn new(base: LinearCode, ambient: Ambient) -> Result<Self> {
        let skip_rows = match ambient {
            Ambient::FullSpace => 0,
            Ambient::SumLevel { level } => {
                base.field().check_symbol(level as u32)?;
                if base.redundancy() == 0 || base.parity_check()[0].iter().any(|&h| h != 1) {
                    return Err(Error::ShapeMismatch(
                        "sum-level partition needs an all-ones first check row".into(),
                    ));
                }
                1
            }
        };
        if base.redundancy() > MAX_STACK_SYNDROME {
            return Err(Error::InvalidParameter(format!(
                "syndrome length {} exceeds {MAX_STACK_SYNDROME}",
                base.redundancy()
            )));
        }
        let index = IndexMap::new(base.field().q(), base.redundancy() - skip_rows);
        Ok(SyndromePartition {
            base,
            ambient,
            skip_rows,
            index,
        })
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn index_map(&self) -> IndexMap {
        self.index
    }

    fn full_syndrome(&self, j: usize) -> Vec<u8> {
        let mut syn = vec![0u8; self.base.redundancy()];
        if let Ambient::SumLevel { level } = self.ambient {
            syn[0] = level;
        }
        self.index.vector_into(j, &mut syn[self.skip_rows..]);
        syn
    }

    /// A fixed word of part `j`.
    pub fn part_representative(&self, j: usize) -> Vec<u8> {
        self.base.coset_representative(&self.full_syndrome(j))
    }
}

impl CodePartition for SyndromePartition {
    fn field(&self) -> &Field {
        self.base.field()
    }

    fn len(&self) -> usize {
        crate::code::Code::len(&self.base)
    }

    fn parts(&self) -> usize {
        self.index.size()
    }

    fn part_logq_size(&self) -> u64 {
        self.base.dimension() as u64
    }

    fn in_ambient(&self, w: &[u8]) -> bool {
        match self.ambient {
            Ambient::FullSpace => true,
            Ambient::SumLevel { level } => self.field().parity(w) == level,
        }
    }

    #[inline]
    fn index_of(&self, w: &[u8]) -> usize {
        let mut buf = [0u8; MAX_STACK_SYNDROME];
        let syn = &mut buf[..self.base.redundancy()];
        self.base.syndrome_into(w, syn);
        self.index.index(&syn[self.skip_rows..])
    }

    fn sample_part(&self, j: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        let mut x = self.part_representative(j);
        self.base.add_random_codeword(&mut x, rng);
        x
    }

    fn for_each_in_part(&self, j: usize, f: &mut dyn FnMut(&[u8])) {
        self.base.for_each_translate(&self.part_representative(j), f);
    }
}

/// Another partition with its part labels permuted.
///
/// The label permutation changes nothing about the parts themselves, but a
/// construction fed different relabelings per coset is no longer linear.
#[derive(Clone, Debug)]
pub struct RelabeledPartition {
    inner: Arc<dyn CodePartition>,
    forward: Vec<usize>,
    backward: Vec<usize>,
}

impl RelabeledPartition {
    pub fn new(inner: Arc<dyn CodePartition>, forward: Vec<usize>) -> Result<Self> {
        let n = inner.parts();
        if forward.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "relabeling has {} entries for {n} parts",
                forward.len()
            )));
        }
        let mut backward = vec![usize::MAX; n];
        for (i, &j) in forward.iter().enumerate() {
            if j >= n || backward[j] != usize::MAX {
                return Err(Error::InvalidParameter("relabeling is not a permutation".into()));
            }
            backward[j] = i;
        }
        Ok(RelabeledPartition {
            inner,
            forward,
            backward,
        })
    }

    /// Uniform random relabeling derived from `seed`.
    pub fn seeded(inner: Arc<dyn CodePartition>, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..inner.parts()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::new(inner, perm).expect("shuffle yields a permutation")
    }
}

impl CodePartition for RelabeledPartition {
    fn field(&self) -> &Field {
        self.inner.field()
    }
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn parts(&self) -> usize {
        self.inner.parts()
    }
    fn part_logq_size(&self) -> u64 {
        self.inner.part_logq_size()
    }
    fn in_ambient(&self, w: &[u8]) -> bool {
        self.inner.in_ambient(w)
    }
    fn index_of(&self, w: &[u8]) -> usize {
        self.forward[self.inner.index_of(w)]
    }
    fn sample_part(&self, j: usize, rng: &mut dyn RngCore) -> Vec<u8> {
        self.inner.sample_part(self.backward[j], rng)
    }
    fn for_each_in_part(&self, j: usize, f: &mut dyn FnMut(&[u8])) {
        self.inner.for_each_in_part(self.backward[j], f)
    }
}

/// One part of a partition viewed as a code.
#[derive(Clone, Debug)]
pub struct PartCode {
    partition: Arc<dyn CodePartition>,
    part: usize,
}

impl PartCode {
    pub fn new(partition: Arc<dyn CodePartition>, part: usize) -> Result<Self> {
        if part >= partition.parts() {
            return Err(Error::InvalidParameter(format!(
                "part {part} out of range ({} parts)",
                partition.parts()
            )));
        }
        Ok(PartCode { partition, part })
    }

    /// Every part of `partition`, in label order.
    pub fn all(partition: Arc<dyn CodePartition>) -> Vec<PartCode> {
        (0..partition.parts())
            .map(|part| PartCode {
                partition: partition.clone(),
                part,
            })
            .collect()
    }

    pub fn part(&self) -> usize {
        self.part
    }
}

impl Code for PartCode {
    fn field(&self) -> &Field {
        self.partition.field()
    }

    fn len(&self) -> usize {
        self.partition.len()
    }

    fn cardinality(&self) -> Cardinality {
        Cardinality::PowerOfQ {
            q: self.field().q(),
            exp: self.partition.part_logq_size(),
        }
    }

    fn contains_symbols(&self, symbols: &[u8]) -> bool {
        symbols.len() == self.len()
            && self.partition.in_ambient(symbols)
            && self.partition.index_of(symbols) == self.part
    }

    fn sample_with(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        self.partition.sample_part(self.part, rng)
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        self.partition.for_each_in_part(self.part, f)
    }
}

/// `(q^s − 1)/(q − 1)`
pub fn hamming_length(q: u8, s: usize) -> usize {
    ((q as usize).pow(s as u32) - 1) / (q as usize - 1)
}

/// The q-ary Hamming code with redundancy `s`.
///
/// Columns of `H` are the normalized projective points of `F_q^s` (first
/// nonzero coordinate 1) in lexicographic order, top coordinate most
/// significant.
pub fn hamming_code(field: &Field, s: usize) -> Result<LinearCode> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hamming codes need s ≥ 2, got {s}"
        )));
    }
    let q = field.q() as usize;
    let total = q.pow(s as u32);
    let mut columns: Vec<Vec<u8>> = Vec::with_capacity(hamming_length(field.q(), s));
    for idx in 0..total {
        // most significant digit first so the loop runs in lexicographic order
        let mut v = vec![0u8; s];
        let mut rest = idx;
        for slot in v.iter_mut().rev() {
            *slot = (rest % q) as u8;
            rest /= q;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            columns.push(v);
        }
    }
    let n = columns.len();
    let rows = (0..s)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect();
    LinearCode::from_parity_check(field.clone(), n, rows)
}

/// The partition of `F_q^n` into the `q^s` cosets of the Hamming code,
/// labelled by `ind(H uᵀ)`.
pub fn space_partition(field: &Field, s: usize) -> Result<SyndromePartition> {
    SyndromePartition::new(hamming_code(field, s)?, Ambient::FullSpace)
}

/// The linear even-like `[q^s, q^s − s − 1, 3]_q` code. Column `t` of its
/// parity-check matrix is `(1, ind⁻¹(t))`; for `q = 2` this is the extended
/// Hamming code with distance 4.
pub fn evenlike_d3_code(field: &Field, s: usize) -> Result<LinearCode> {
    if s < 1 {
        return Err(Error::InvalidParameter("even-like code needs s ≥ 1".into()));
    }
    let map = IndexMap::new(field.q(), s);
    let n = map.size();
    let mut rows = vec![vec![1u8; n]];
    rows.extend((0..s).map(|_| vec![0u8; n]));
    for t in 0..n {
        let v = map.vector(t);
        for (r, &x) in v.iter().enumerate() {
            rows[r + 1][t] = x;
        }
    }
    LinearCode::from_parity_check(field.clone(), n, rows)
}

/// Partition of the sum level `{x ∈ F_q^{q^s} : p(x) = unlabel(k)}` into the
/// `q^s` translates of [`evenlike_d3_code`], labelled by the last `s`
/// syndrome rows.
pub fn coset_partition_d3(field: &Field, s: usize, k: u8) -> Result<SyndromePartition> {
    if k as usize >= field.order() {
        return Err(Error::InvalidParameter(format!(
            "coset label {k} out of range for GF({})",
            field.q()
        )));
    }
    SyndromePartition::new(
        evenlike_d3_code(field, s)?,
        Ambient::SumLevel {
            level: field.unlabel(k),
        },
    )
}

/// The `q` coset partitions, indexed by label `k = 0..q`.
pub fn all_coset_partitions(field: &Field, s: usize) -> Result<Vec<SyndromePartition>> {
    (0..field.q()).map(|k| coset_partition_d3(field, s, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{enumerate, min_distance, Code, DEFAULT_PAIR_BUDGET};
    use crate::field::{from_dense_index, hamming_distance};

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn all_words(q: u8, n: usize) -> Vec<Vec<u8>> {
        let total = (q as u64).pow(n as u32);
        (0..total)
            .map(|i| {
                let mut w = vec![0u8; n];
                from_dense_index(q, n, i, &mut w);
                w
            })
            .collect()
    }

    /// Parts are disjoint, cover the ambient exactly and have equal sizes.
    fn audit_partition(p: &dyn CodePartition) {
        let q = p.field().q();
        let mut sizes = vec![0u64; p.parts()];
        for w in all_words(q, p.len()) {
            if p.in_ambient(&w) {
                sizes[p.index_of(&w)] += 1;
            }
        }
        let expected = (q as u64).pow(p.part_logq_size() as u32);
        assert!(sizes.iter().all(|&s| s == expected), "{sizes:?}");
        for j in 0..p.parts() {
            let mut count = 0;
            p.for_each_in_part(j, &mut |w| {
                assert!(p.in_ambient(w));
                assert_eq!(p.index_of(w), j);
                count += 1;
            });
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn index_map_round_trip_and_add() {
        let field = f(3);
        let m = IndexMap::new(3, 2);
        assert_eq!(m.size(), 9);
        for j in 0..9 {
            assert_eq!(m.index(&m.vector(j)), j);
        }
        // (1,0) + (2,0) = (0,0); (1,0) + (0,1) = (1,1) = 4
        assert_eq!(m.add(&field, 1, 2), 0);
        assert_eq!(m.add(&field, 1, 3), 4);
    }

    #[test]
    fn binary_hamming_7() {
        let h = hamming_code(&f(2), 3).unwrap();
        assert_eq!(Code::len(&h), 7);
        assert_eq!(h.dimension(), 4);
        let e = enumerate(&h, false).unwrap();
        assert_eq!(e.size(), 16);
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 3);
        assert_eq!(e.rank(), 4);
    }

    #[test]
    fn ternary_hamming_4_columns() {
        let h = hamming_code(&f(3), 2).unwrap();
        let cols: Vec<Vec<u8>> = (0..4).map(|t| h.column(t).to_vec()).collect();
        assert_eq!(cols, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(h.dimension(), 2);
        let e = enumerate(&h, false).unwrap();
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 3);
    }

    #[test]
    fn binary_hamming_3_is_repetition() {
        let e = enumerate(&hamming_code(&f(2), 2).unwrap(), false).unwrap();
        assert_eq!(e.words().collect::<Vec<_>>(), vec![&[0, 0, 0][..], &[1, 1, 1][..]]);
    }

    #[test]
    fn hamming_columns_pairwise_independent() {
        for (q, s) in [(2u32, 3usize), (3, 2), (3, 3), (4, 2), (5, 2), (7, 2), (8, 2), (9, 2)] {
            let field = f(q);
            let h = hamming_code(&field, s).unwrap();
            let n = Code::len(&h);
            assert_eq!(n, hamming_length(field.q(), s));
            for a in 0..n {
                for b in a + 1..n {
                    for c in 1..field.q() {
                        let scaled: Vec<u8> = h.column(a).iter().map(|&x| field.mul(c, x)).collect();
                        assert_ne!(scaled, h.column(b), "q={q} s={s} cols {a},{b}");
                    }
                }
            }
        }
    }

    #[test]
    fn hamming_rejects_small_s() {
        assert!(hamming_code(&f(2), 1).is_err());
    }

    #[test]
    fn space_partition_small_cases() {
        let p = space_partition(&f(2), 2).unwrap();
        assert_eq!(p.parts(), 4);
        assert_eq!(p.part_logq_size(), 1);
        audit_partition(&p);
        assert_eq!(p.index_of(&[0, 0, 0]), 0);

        let p = space_partition(&f(3), 2).unwrap();
        assert_eq!(p.parts(), 9);
        assert_eq!(p.part_logq_size(), 2);
        audit_partition(&p);
        assert_eq!(p.index_of(&[0, 0, 0, 0]), 0);
    }

    #[test]
    fn space_partition_parts_are_perfect() {
        for (q, s) in [(2u32, 2usize), (2, 3), (3, 2), (4, 2)] {
            let field = f(q);
            let p = space_partition(&field, s).unwrap();
            let n = p.len();
            let words = all_words(field.q(), n);
            for j in 0..p.parts() {
                let mut part = Vec::new();
                p.for_each_in_part(j, &mut |w| part.push(w.to_vec()));
                for x in &words {
                    let near = part.iter().filter(|c| hamming_distance(c, x) <= 1).count();
                    assert_eq!(near, 1);
                }
            }
        }
    }

    #[test]
    fn evenlike_examples() {
        let c = evenlike_d3_code(&f(2), 2).unwrap();
        let e = enumerate(&c, false).unwrap();
        assert_eq!(e.words().collect::<Vec<_>>(), vec![&[0, 0, 0, 0][..], &[1, 1, 1, 1][..]]);
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 4);

        let c = evenlike_d3_code(&f(3), 1).unwrap();
        let e = enumerate(&c, false).unwrap();
        assert_eq!(e.size(), 3);
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 3);
        assert_eq!(e.words().collect::<Vec<_>>(), vec![&[0, 0, 0][..], &[1, 1, 1][..], &[2, 2, 2][..]]);

        let c = evenlike_d3_code(&f(3), 2).unwrap();
        assert_eq!(Code::len(&c), 9);
        assert_eq!(c.dimension(), 6);
        let e = enumerate(&c, false).unwrap();
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 3);
        assert!(e.is_even_like());
        assert!(c.is_even_like());
    }

    #[test]
    fn evenlike_binary_distance_four() {
        let c = evenlike_d3_code(&f(2), 3).unwrap();
        let e = enumerate(&c, false).unwrap();
        assert_eq!(e.size(), 16);
        assert_eq!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap(), 4);
    }

    #[test]
    fn coset_partition_examples() {
        let p = coset_partition_d3(&f(2), 2, 0).unwrap();
        assert_eq!(p.parts(), 4);
        assert_eq!(p.part_logq_size(), 1);
        audit_partition(&p);
        assert_eq!(p.index_of(&[0, 0, 0, 0]), 0);

        let field = f(3);
        let p = coset_partition_d3(&field, 1, 1).unwrap();
        assert_eq!(p.ambient(), Ambient::SumLevel { level: 2 });
        assert_eq!(p.parts(), 3);
        assert_eq!(p.part_logq_size(), 1);
        audit_partition(&p);
    }

    #[test]
    fn coset_parts_have_distance_three_and_level() {
        for (q, s) in [(2u32, 2usize), (2, 3), (3, 1), (3, 2), (4, 1)] {
            let field = f(q);
            for k in 0..field.q() {
                let p = coset_partition_d3(&field, s, k).unwrap();
                audit_partition(&p);
                let want = if q == 2 { 4 } else { 3 };
                for j in 0..p.parts() {
                    let mut part = Vec::new();
                    p.for_each_in_part(j, &mut |w| part.push(w.to_vec()));
                    assert!(part.iter().all(|w| field.parity(w) == field.unlabel(k)));
                    if part.len() > 1 {
                        let e = crate::code::ExplicitCode::from_words(field.clone(), p.len(), part)
                            .unwrap();
                        assert!(min_distance(&e, DEFAULT_PAIR_BUDGET).unwrap() >= want);
                    }
                }
            }
        }
    }

    #[test]
    fn relabeled_partition_is_still_a_partition() {
        let inner: Arc<dyn CodePartition> = Arc::new(coset_partition_d3(&f(3), 1, 2).unwrap());
        let p = RelabeledPartition::seeded(inner, 11);
        audit_partition(&p);
        assert!(RelabeledPartition::new(Arc::new(space_partition(&f(2), 2).unwrap()), vec![0, 0, 1, 2])
            .is_err());
    }

    #[test]
    fn part_codes_match_partition() {
        let field = f(3);
        let inner: Arc<dyn CodePartition> = Arc::new(coset_partition_d3(&field, 2, 0).unwrap());
        let parts = PartCode::all(inner.clone());
        assert_eq!(parts.len(), 9);
        let mut total = 0usize;
        for (j, pc) in parts.iter().enumerate() {
            let mut n = 0usize;
            pc.for_each_codeword(&mut |w| {
                assert!(pc.contains_symbols(w));
                assert_eq!(inner.index_of(w), j);
                n += 1;
            });
            assert_eq!(Some(n as u128), pc.cardinality().exact());
            total += n;
        }
        // all of the zero-sum code of length 9
        assert_eq!(total, 3usize.pow(8));
        // a word off the level lies in no part
        let mut off = vec![0u8; 9];
        off[0] = 1;
        assert!(parts.iter().all(|pc| !pc.contains_symbols(&off)));
    }
}
