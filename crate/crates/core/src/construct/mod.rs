//! Code builders.
//!
//! - [`thm7`]: 1-perfect codes of length `(q^{s1+s2} − 1)/(q − 1)` glued
//!   from Hamming cosets, distance-3 coset partitions and a quasigroup
//!   family;
//! - [`thm8`]: even-like distance-3 codes of length `q^{s1+s2}`, and the
//!   family of them that partitions the zero-sum code;
//! - [`baselines`]: the Vasil'ev, Lindström–Schönheim and Mollard
//!   constructions.

pub mod baselines;
pub mod thm7;
pub mod thm8;

use std::sync::Arc;

use crate::code::{Code, ENUMERATION_GUARD_LOG2};
use crate::error::{Error, Result};
use crate::partition::CodePartition;
use crate::verify::verify_perfect_exhaustive;

pub use baselines::{
    lindstrom_schonheim_build, mollard_build, mollard_p1, mollard_p2, vasilev_build, ScalarFn,
    VectorFn,
};
pub use thm7::{theorem7_build, Thm7Recipe};
pub use thm8::{default_r_partition, theorem8_build, theorem8_build_shifted, thm8_partition, Thm8Recipe};

/// Shared handle to a code used as a construction ingredient.
pub type SharedCode = Arc<dyn Code>;
pub type SharedPartition = Arc<dyn CodePartition>;

/// Runs the exhaustive perfectness audit on an ingredient when its ambient
/// space is under the enumeration guard. Larger ingredients are trusted.
pub(crate) fn audit_perfect_ingredient(code: &dyn Code, what: &str) -> Result<()> {
    let space_log2 = code.len() as f64 * (code.field().q() as f64).log2();
    if space_log2 > ENUMERATION_GUARD_LOG2 {
        return Ok(());
    }
    let report = verify_perfect_exhaustive(code)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Error::NotPerfectInput(format!(
            "{what} is not 1-perfect ({} bad balls)",
            report.failure_count
        )))
    }
}

/// `log_q` of a code size, required to be an exact power of `q`.
pub(crate) fn exact_logq(code: &dyn Code, what: &str) -> Result<u64> {
    code.cardinality()
        .logq(code.field().q())
        .ok_or_else(|| Error::ShapeMismatch(format!("size of {what} is not a power of q")))
}

/// Visits every tuple in `{0..order}^arity`, first coordinate fastest.
pub(crate) fn for_each_tuple(arity: usize, order: usize, f: &mut dyn FnMut(&[usize])) {
    let mut t = vec![0usize; arity];
    loop {
        f(&t);
        let mut i = 0;
        loop {
            if i == arity {
                return;
            }
            t[i] += 1;
            if t[i] < order {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Visits every concatenation `b_0 | b_1 | …` with `b_i ∈ blocks[i]`.
pub(crate) fn for_each_concat(blocks: &[&[Vec<u8>]], f: &mut dyn FnMut(&[u8])) {
    if blocks.iter().any(|b| b.is_empty()) {
        return;
    }
    let offsets: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b[0].len();
            Some(o)
        })
        .collect();
    let mut word: Vec<u8> = blocks.iter().flat_map(|b| b[0].iter().copied()).collect();
    let mut pick = vec![0usize; blocks.len()];
    loop {
        f(&word);
        let mut i = 0;
        loop {
            if i == blocks.len() {
                return;
            }
            pick[i] += 1;
            if pick[i] == blocks[i].len() {
                pick[i] = 0;
            }
            let b = &blocks[i][pick[i]];
            word[offsets[i]..offsets[i] + b.len()].copy_from_slice(b);
            if pick[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// All words of every part, `lists[j]` for part `j`.
pub(crate) fn part_lists(p: &dyn CodePartition) -> Vec<Vec<Vec<u8>>> {
    (0..p.parts())
        .map(|j| {
            let mut v = Vec::new();
            p.for_each_in_part(j, &mut |w| v.push(w.to_vec()));
            v
        })
        .collect()
}

/// Small stack buffer for per-block indices, spilling to the heap.
pub(crate) enum IndexBuf {
    Stack([usize; 128], usize),
    Heap(Vec<usize>),
}

impl IndexBuf {
    #[inline]
    pub(crate) fn new(len: usize) -> Self {
        if len <= 128 {
            IndexBuf::Stack([0; 128], len)
        } else {
            IndexBuf::Heap(vec![0; len])
        }
    }

    #[inline]
    pub(crate) fn as_mut(&mut self) -> &mut [usize] {
        match self {
            IndexBuf::Stack(a, n) => &mut a[..*n],
            IndexBuf::Heap(v) => v,
        }
    }
}
