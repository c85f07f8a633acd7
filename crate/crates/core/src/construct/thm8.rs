//! Even-like distance-3 codes of length `q^{s1+s2}`.
//!
//! A word is cut into `q^{s2}` blocks `c_0, …, c_{q^{s2}−1}` of length
//! `q^{s1}`. The block sums must form a word `r` of the even-like code `R`;
//! block `c_i` lies in part `j_i` of the distance-3 partition of its sum
//! level, and the word is accepted iff `j_0 = q_r(j_1, …) ⊕ shift`.
//!
//! [`thm8_partition`] runs the construction over every part `R_t` of a
//! partition of the zero-sum code of length `q^{s2}` and every shift in
//! `F_q^{s1}`, giving `q^{s1+s2}` disjoint codes that cover the zero-sum
//! code of length `q^{s1+s2}`.

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{exact_logq, for_each_concat, for_each_tuple, part_lists, IndexBuf, SharedCode, SharedPartition};
use crate::code::{is_even_like, Code, MembershipCode, MembershipOracle, ENUMERATION_GUARD_LOG2};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::partition::{all_coset_partitions, coset_partition_d3, evenlike_d3_code, IndexMap, PartCode};
use crate::quasigroup::{FamilySpec, QuasigroupFamily};

/// Samples used to check that a non-enumerable `R` is even-like.
const EVEN_LIKE_SAMPLES: usize = 4096;

#[derive(Clone, Debug)]
pub struct Thm8Recipe {
    pub field: Field,
    pub s1: usize,
    pub s2: usize,
    /// `cosets[k]` partitions the sum level `unlabel(k)` of `F_q^{q^{s1}}`.
    pub cosets: Vec<SharedPartition>,
    /// Even-like distance-3 code of length `q^{s2}`.
    pub r_code: SharedCode,
    pub family: FamilySpec,
}

impl Thm8Recipe {
    /// Linear defaults: `R` is the even-like `[q^{s2}, q^{s2} − s2 − 1, 3]`
    /// code and the blocks use its translates.
    pub fn standard(field: &Field, s1: usize, s2: usize, family: FamilySpec) -> Result<Self> {
        if s1 < 1 || s2 < 1 {
            return Err(Error::InvalidParameter(format!(
                "this construction needs s1, s2 ≥ 1 (got {s1}, {s2})"
            )));
        }
        Ok(Thm8Recipe {
            field: field.clone(),
            s1,
            s2,
            cosets: all_coset_partitions(field, s1)?
                .into_iter()
                .map(|p| Arc::new(p) as SharedPartition)
                .collect(),
            r_code: Arc::new(evenlike_d3_code(field, s2)?),
            family,
        })
    }

    /// Parameters below 2 are accepted but lie outside the range the
    /// construction is usually stated for.
    pub fn outside_stated_range(&self) -> bool {
        self.s1 < 2 || self.s2 < 2
    }

    /// `q^{s1}`
    pub fn block_len(&self) -> usize {
        (self.field.q() as usize).pow(self.s1 as u32)
    }

    /// `q^{s2}`
    pub fn blocks(&self) -> usize {
        (self.field.q() as usize).pow(self.s2 as u32)
    }

    /// `q^{s1+s2}`
    pub fn length(&self) -> usize {
        self.block_len() * self.blocks()
    }

    /// `q^{s1+s2} − (s1 + s2) − 1`
    pub fn logq_size(&self) -> u64 {
        (self.length() - self.s1 - self.s2 - 1) as u64
    }

    /// 4 over `F_2`, otherwise 3.
    pub fn claimed_distance(&self) -> u32 {
        if self.field.q() == 2 {
            4
        } else {
            3
        }
    }

    fn validate_blocks(&self) -> Result<()> {
        let q = self.field.q() as usize;
        let b = self.block_len();
        if self.cosets.len() != q {
            return Err(Error::ShapeMismatch(format!(
                "need {q} coset partitions, got {}",
                self.cosets.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (k, p) in self.cosets.iter().enumerate() {
            let ok = p.field() == &self.field
                && p.len() == b
                && p.parts() == b
                && p.part_logq_size() == (b - self.s1 - 1) as u64
                && self.field.parity(&p.sample_part(0, &mut rng)) == self.field.unlabel(k as u8);
            if !ok {
                return Err(Error::ShapeMismatch(format!(
                    "coset partition {k} has the wrong shape"
                )));
            }
        }
        Ok(())
    }

    fn validate_r(&self, r: &dyn Code) -> Result<()> {
        let n2 = self.blocks();
        if r.field() != &self.field || r.len() != n2 {
            return Err(Error::ShapeMismatch(format!("R must have length {n2}")));
        }
        let expected = (n2 - self.s2 - 1) as u64;
        if exact_logq(r, "R")? != expected {
            return Err(Error::ShapeMismatch(format!("R must have q^{expected} words")));
        }
        if !is_even_like(r, EVEN_LIKE_SAMPLES, 0) {
            return Err(Error::NonEvenLikeR(
                "a word of R has nonzero symbol sum".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug)]
struct Thm8Oracle {
    field: Field,
    block: usize,
    blocks: usize,
    index: IndexMap,
    shift: usize,
    by_level: Vec<SharedPartition>,
    r_code: SharedCode,
    family: QuasigroupFamily,
}

impl Thm8Oracle {
    #[inline]
    fn forced_j0(&self, r: &[u8], js: &[usize]) -> usize {
        let g = self.family.eval(r, js);
        if self.shift == 0 {
            g
        } else {
            self.index.add(&self.field, g, self.shift)
        }
    }
}

impl MembershipOracle for Thm8Oracle {
    fn contains(&self, x: &[u8]) -> bool {
        if x.len() != self.block * self.blocks {
            return false;
        }
        let mut rbuf;
        let mut rheap;
        let r: &mut [u8] = if self.blocks <= 256 {
            rbuf = [0u8; 256];
            &mut rbuf[..self.blocks]
        } else {
            rheap = vec![0u8; self.blocks];
            &mut rheap
        };
        for (ri, c) in r.iter_mut().zip(x.chunks_exact(self.block)) {
            *ri = self.field.parity(c);
        }
        if !self.r_code.contains_symbols(r) {
            return false;
        }
        let mut js = IndexBuf::new(self.blocks);
        let js = js.as_mut();
        for ((j, c), &ri) in js.iter_mut().zip(x.chunks_exact(self.block)).zip(r.iter()) {
            *j = self.by_level[ri as usize].index_of(c);
        }
        js[0] == self.forced_j0(r, &js[1..])
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        let r = self.r_code.sample_with(rng);
        let order = self.index.size();
        let js: Vec<usize> = (1..self.blocks).map(|_| rng.gen_range(0..order)).collect();
        let j0 = self.forced_j0(&r, &js);
        let mut x = self.by_level[r[0] as usize].sample_part(j0, rng);
        for (&ri, &j) in r[1..].iter().zip(&js) {
            x.extend(self.by_level[ri as usize].sample_part(j, rng));
        }
        x
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        let level_lists: Vec<Vec<Vec<Vec<u8>>>> =
            self.by_level.iter().map(|p| part_lists(p.as_ref())).collect();
        self.r_code.for_each_codeword(&mut |r| {
            for_each_tuple(self.blocks - 1, self.index.size(), &mut |js| {
                let j0 = self.forced_j0(r, js);
                let mut blocks: Vec<&[Vec<u8>]> = Vec::with_capacity(self.blocks);
                blocks.push(&level_lists[r[0] as usize][j0]);
                for (&ri, &j) in r[1..].iter().zip(js) {
                    blocks.push(&level_lists[ri as usize][j]);
                }
                for_each_concat(&blocks, f);
            });
        });
    }
}

fn build_with(recipe: &Thm8Recipe, r_code: SharedCode, shift: usize, label: String) -> Result<MembershipCode> {
    let field = &recipe.field;
    let index = IndexMap::new(field.q(), recipe.s1);
    if shift >= index.size() {
        return Err(Error::InvalidParameter(format!(
            "shift {shift} out of range (q^s1 = {})",
            index.size()
        )));
    }
    let family = QuasigroupFamily::new(
        field,
        recipe.s1,
        recipe.blocks() - 1,
        r_code.as_ref(),
        recipe.family,
    )?;
    let by_level = (0..field.q())
        .map(|e| recipe.cosets[field.label_of(e) as usize].clone())
        .collect();
    let oracle = Thm8Oracle {
        field: field.clone(),
        block: recipe.block_len(),
        blocks: recipe.blocks(),
        index,
        shift,
        by_level,
        r_code,
        family,
    };
    Ok(MembershipCode::new(
        field.clone(),
        recipe.length(),
        recipe.logq_size(),
        recipe.claimed_distance(),
        true,
        label,
        Arc::new(oracle),
    ))
}

fn describe(recipe: &Thm8Recipe) -> String {
    format!(
        "thm8 q={} s1={} s2={}",
        recipe.field.q(),
        recipe.s1,
        recipe.s2
    )
}

/// Builds the even-like `(q^{s1+s2}, q^{q^{s1+s2} − s1 − s2 − 1}, 3)_q` code.
pub fn theorem8_build(recipe: &Thm8Recipe) -> Result<MembershipCode> {
    theorem8_build_shifted(recipe, 0)
}

/// As [`theorem8_build`] with the forced `j_0` translated by `shift`
/// (added as vectors of `F_q^{s1}`).
pub fn theorem8_build_shifted(recipe: &Thm8Recipe, shift: usize) -> Result<MembershipCode> {
    recipe.validate_blocks()?;
    recipe.validate_r(recipe.r_code.as_ref())?;
    let label = if shift == 0 {
        describe(recipe)
    } else {
        format!("{} shift={shift}", describe(recipe))
    };
    build_with(recipe, recipe.r_code.clone(), shift, label)
}

/// The translates of the even-like distance-3 code inside the zero-sum code
/// of length `q^{s2}`, as `q^{s2}` codes.
pub fn default_r_partition(field: &Field, s2: usize) -> Result<Vec<SharedCode>> {
    let p: SharedPartition = Arc::new(coset_partition_d3(field, s2, 0)?);
    Ok(PartCode::all(p)
        .into_iter()
        .map(|c| Arc::new(c) as SharedCode)
        .collect())
}

/// Checks that `parts` are disjoint and cover the zero-sum code of length
/// `q^{s2}`: by counting sizes, and exhaustively when the zero-sum code is
/// enumerable.
fn audit_r_partition(recipe: &Thm8Recipe, parts: &[SharedCode]) -> Result<()> {
    let field = &recipe.field;
    let n2 = recipe.blocks();
    let mut total: u128 = 0;
    for p in parts {
        total += p
            .cardinality()
            .exact()
            .ok_or_else(|| Error::BadPartition("part size overflows".into()))?;
    }
    let expected = crate::field::checked_pow(field.q(), (n2 - 1) as u64)
        .ok_or_else(|| Error::BadPartition("zero-sum code size overflows".into()))?;
    if total != expected {
        return Err(Error::BadPartition(format!(
            "parts hold {total} words, the zero-sum code has {expected}"
        )));
    }
    let zero_sum_log2 = (n2 - 1) as f64 * (field.q() as f64).log2();
    if zero_sum_log2 <= ENUMERATION_GUARD_LOG2 {
        let zero_sum = crate::code::LinearCode::zero_sum(field.clone(), n2)?;
        let mut bad = None;
        zero_sum.for_each_codeword(&mut |w| {
            if bad.is_none() {
                let hits = parts.iter().filter(|p| p.contains_symbols(w)).count();
                if hits != 1 {
                    bad = Some((w.to_vec(), hits));
                }
            }
        });
        if let Some((w, hits)) = bad {
            return Err(Error::BadPartition(format!(
                "zero-sum word {} lies in {hits} parts",
                crate::field::symbols_to_string(&w)
            )));
        }
    }
    Ok(())
}

/// One code per part `R_t` and shift `c ∈ {0, …, q^{s1} − 1}`, ordered by
/// part then shift. With `r_parts = None` the parts come from
/// [`default_r_partition`]. `recipe.r_code` is ignored.
pub fn thm8_partition(recipe: &Thm8Recipe, r_parts: Option<Vec<SharedCode>>) -> Result<Vec<MembershipCode>> {
    recipe.validate_blocks()?;
    let parts = match r_parts {
        Some(p) => p,
        None => default_r_partition(&recipe.field, recipe.s2)?,
    };
    for p in &parts {
        recipe.validate_r(p.as_ref()).map_err(|e| match e {
            Error::BadPartition(_) => e,
            other => Error::BadPartition(other.to_string()),
        })?;
    }
    audit_r_partition(recipe, &parts)?;
    let shifts = recipe.block_len();
    let mut out = Vec::with_capacity(parts.len() * shifts);
    for (t, r) in parts.iter().enumerate() {
        for c in 0..shifts {
            let label = format!("{} part={t} shift={c}", describe(recipe));
            out.push(build_with(recipe, r.clone(), c, label)?);
        }
    }
    Ok(out)
}
