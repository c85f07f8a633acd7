//! 1-perfect codes by generalized concatenation.
//!
//! A word is `x = (u | v_1 | … | v_m)` with `|u| = n = (q^{s1} − 1)/(q − 1)`
//! and `|v_i| = (q − 1)n + 1 = q^{s1}`. The block sums `r_i = p(v_i)` must
//! form a word of the perfect code `R` of length `m`; each `v_i` then lies in
//! part `j_i` of the distance-3 partition of its sum level, `u` lies in part
//! `j_0` of the Hamming-coset partition of `F_q^n`, and the word is accepted
//! iff `j_0 = q_r(j_1, …, j_m)`.

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    audit_perfect_ingredient, exact_logq, for_each_concat, for_each_tuple, part_lists, IndexBuf,
    SharedCode, SharedPartition,
};
use crate::code::{MembershipCode, MembershipOracle};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::partition::{all_coset_partitions, hamming_code, hamming_length, space_partition};
use crate::quasigroup::{FamilySpec, QuasigroupFamily};

/// Ingredients of the construction. [`Thm7Recipe::standard`] gives the
/// linear defaults; any field can be swapped for another partition or code
/// of the same shape.
#[derive(Clone, Debug)]
pub struct Thm7Recipe {
    pub field: Field,
    pub s1: usize,
    pub s2: usize,
    /// Partition of `F_q^n` into `q^{s1}` 1-perfect codes.
    pub u_partition: SharedPartition,
    /// `cosets[k]` partitions the sum level `unlabel(k)` of `F_q^{q^{s1}}`
    /// into `q^{s1}` distance-3 codes.
    pub cosets: Vec<SharedPartition>,
    /// 1-perfect code of length `m`.
    pub r_code: SharedCode,
    pub family: FamilySpec,
}

impl Thm7Recipe {
    /// Hamming cosets for `u`, the Hamming code of redundancy `s2` for `R`,
    /// and the linear distance-3 coset partitions.
    pub fn standard(field: &Field, s1: usize, s2: usize, family: FamilySpec) -> Result<Self> {
        if s1 < 2 || s2 < 2 {
            return Err(Error::InvalidParameter(format!(
                "this construction needs s1, s2 ≥ 2 (got {s1}, {s2})"
            )));
        }
        Ok(Thm7Recipe {
            field: field.clone(),
            s1,
            s2,
            u_partition: Arc::new(space_partition(field, s1)?),
            cosets: all_coset_partitions(field, s1)?
                .into_iter()
                .map(|p| Arc::new(p) as SharedPartition)
                .collect(),
            r_code: Arc::new(hamming_code(field, s2)?),
            family,
        })
    }

    pub fn n(&self) -> usize {
        hamming_length(self.field.q(), self.s1)
    }

    pub fn m(&self) -> usize {
        hamming_length(self.field.q(), self.s2)
    }

    /// `(q − 1)n + 1 = q^{s1}`
    pub fn block_len(&self) -> usize {
        (self.field.q() as usize - 1) * self.n() + 1
    }

    /// `(q − 1)nm + n + m`
    pub fn length(&self) -> usize {
        (self.field.q() as usize - 1) * self.n() * self.m() + self.n() + self.m()
    }

    /// `(q − 1)nm + n + m − (s1 + s2)`
    pub fn logq_size(&self) -> u64 {
        (self.length() - self.s1 - self.s2) as u64
    }

    fn validate(&self) -> Result<()> {
        let q = self.field.q() as usize;
        let (n, m, b) = (self.n(), self.m(), self.block_len());
        let parts = q.pow(self.s1 as u32);
        let shape = |what: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::ShapeMismatch(format!("{what} has the wrong shape")))
            }
        };
        let u = &self.u_partition;
        shape(
            "u partition",
            u.field() == &self.field
                && u.len() == n
                && u.parts() == parts
                && u.part_logq_size() == (n - self.s1) as u64,
        )?;
        shape("coset partition list", self.cosets.len() == q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for (k, p) in self.cosets.iter().enumerate() {
            shape(
                &format!("coset partition {k}"),
                p.field() == &self.field
                    && p.len() == b
                    && p.parts() == parts
                    && p.part_logq_size() == (b - self.s1 - 1) as u64,
            )?;
            let level = self.field.unlabel(k as u8);
            shape(
                &format!("coset partition {k} (sum level)"),
                self.field.parity(&p.sample_part(0, &mut rng)) == level,
            )?;
        }
        let r = &self.r_code;
        shape("R", r.field() == &self.field && r.len() == m)?;
        if exact_logq(r.as_ref(), "R")? != (m - self.s2) as u64 {
            return Err(Error::ShapeMismatch(format!(
                "R must have q^{} words",
                m - self.s2
            )));
        }
        audit_perfect_ingredient(r.as_ref(), "R")
    }
}

#[derive(Debug)]
struct Thm7Oracle {
    field: Field,
    n: usize,
    m: usize,
    block: usize,
    order: usize,
    u_partition: SharedPartition,
    /// Coset partition for each sum level, indexed by the level itself.
    by_level: Vec<SharedPartition>,
    r_code: SharedCode,
    family: QuasigroupFamily,
}

impl MembershipOracle for Thm7Oracle {
    fn contains(&self, x: &[u8]) -> bool {
        if x.len() != self.n + self.m * self.block {
            return false;
        }
        let (u, vs) = x.split_at(self.n);
        let mut r = [0u8; 128];
        let r = if self.m <= 128 {
            &mut r[..self.m]
        } else {
            return self.contains_slow(u, vs);
        };
        for (ri, v) in r.iter_mut().zip(vs.chunks_exact(self.block)) {
            *ri = self.field.parity(v);
        }
        if !self.r_code.contains_symbols(r) {
            return false;
        }
        let mut js = IndexBuf::new(self.m);
        let js = js.as_mut();
        for ((j, v), &ri) in js.iter_mut().zip(vs.chunks_exact(self.block)).zip(r.iter()) {
            *j = self.by_level[ri as usize].index_of(v);
        }
        self.u_partition.index_of(u) == self.family.eval(r, js)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        let r = self.r_code.sample_with(rng);
        let js: Vec<usize> = (0..self.m).map(|_| rng.gen_range(0..self.order)).collect();
        let j0 = self.family.eval(&r, &js);
        let mut x = self.u_partition.sample_part(j0, rng);
        for (&ri, &j) in r.iter().zip(&js) {
            x.extend(self.by_level[ri as usize].sample_part(j, rng));
        }
        x
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        let u_lists = part_lists(self.u_partition.as_ref());
        let level_lists: Vec<Vec<Vec<Vec<u8>>>> =
            self.by_level.iter().map(|p| part_lists(p.as_ref())).collect();
        self.r_code.for_each_codeword(&mut |r| {
            for_each_tuple(self.m, self.order, &mut |js| {
                let j0 = self.family.eval(r, js);
                let mut blocks: Vec<&[Vec<u8>]> = Vec::with_capacity(self.m + 1);
                blocks.push(&u_lists[j0]);
                for (&ri, &j) in r.iter().zip(js) {
                    blocks.push(&level_lists[ri as usize][j]);
                }
                for_each_concat(&blocks, f);
            });
        });
    }
}

impl Thm7Oracle {
    fn contains_slow(&self, u: &[u8], vs: &[u8]) -> bool {
        let r: Vec<u8> = vs.chunks_exact(self.block).map(|v| self.field.parity(v)).collect();
        if !self.r_code.contains_symbols(&r) {
            return false;
        }
        let js: Vec<usize> = vs
            .chunks_exact(self.block)
            .zip(&r)
            .map(|(v, &ri)| self.by_level[ri as usize].index_of(v))
            .collect();
        self.u_partition.index_of(u) == self.family.eval(&r, &js)
    }
}

/// Builds the 1-perfect code of length `(q − 1)nm + n + m` with
/// `q^{(q−1)nm + n + m − s1 − s2}` words.
pub fn theorem7_build(recipe: &Thm7Recipe) -> Result<MembershipCode> {
    recipe.validate()?;
    let field = &recipe.field;
    let order = (field.q() as usize).pow(recipe.s1 as u32);
    let family = QuasigroupFamily::new(
        field,
        recipe.s1,
        recipe.m(),
        recipe.r_code.as_ref(),
        recipe.family,
    )?;
    let by_level = (0..field.q())
        .map(|e| recipe.cosets[field.label_of(e) as usize].clone())
        .collect();
    let oracle = Thm7Oracle {
        field: field.clone(),
        n: recipe.n(),
        m: recipe.m(),
        block: recipe.block_len(),
        order,
        u_partition: recipe.u_partition.clone(),
        by_level,
        r_code: recipe.r_code.clone(),
        family,
    };
    Ok(MembershipCode::new(
        field.clone(),
        recipe.length(),
        recipe.logq_size(),
        3,
        false,
        format!("thm7 q={} s1={} s2={}", field.q(), recipe.s1, recipe.s2),
        Arc::new(oracle),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{enumerate, Code};

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn parameters() {
        let r = Thm7Recipe::standard(&f(2), 2, 2, FamilySpec::default()).unwrap();
        assert_eq!((r.n(), r.m(), r.block_len()), (3, 3, 4));
        assert_eq!((r.length(), r.logq_size()), (15, 11));
        let r = Thm7Recipe::standard(&f(3), 2, 2, FamilySpec::default()).unwrap();
        assert_eq!((r.length(), r.logq_size()), (40, 36));
        // (q^{s1+s2} − 1)/(q − 1)
        assert_eq!(r.length(), (3usize.pow(4) - 1) / 2);
        assert!(Thm7Recipe::standard(&f(2), 1, 2, FamilySpec::default()).is_err());
    }

    #[test]
    fn zero_word_is_a_member() {
        let code = theorem7_build(&Thm7Recipe::standard(&f(3), 2, 2, FamilySpec::default()).unwrap())
            .unwrap();
        assert!(code.contains_symbols(&[0u8; 40]));
        let mut one = vec![0u8; 40];
        one[7] = 1;
        assert!(!code.contains_symbols(&one));
    }

    #[test]
    fn binary_instance_has_2048_words() {
        let code = theorem7_build(&Thm7Recipe::standard(&f(2), 2, 2, FamilySpec::default()).unwrap())
            .unwrap();
        let e = enumerate(&code, false).unwrap();
        assert_eq!(e.size(), 2048);
        assert!(e.words().all(|w| code.contains_symbols(w)));
    }

    #[test]
    fn shape_errors() {
        let mut r = Thm7Recipe::standard(&f(2), 2, 2, FamilySpec::default()).unwrap();
        r.cosets.pop();
        assert!(matches!(theorem7_build(&r), Err(Error::ShapeMismatch(_))));

        let mut r = Thm7Recipe::standard(&f(2), 2, 2, FamilySpec::default()).unwrap();
        r.cosets.swap(0, 1);
        assert!(matches!(theorem7_build(&r), Err(Error::ShapeMismatch(_))));

        // right size, but not perfect
        let mut r = Thm7Recipe::standard(&f(2), 2, 2, FamilySpec::default()).unwrap();
        r.r_code = Arc::new(
            crate::code::ExplicitCode::from_words(f(2), 3, vec![vec![0, 0, 0], vec![0, 1, 1]])
                .unwrap(),
        );
        assert!(matches!(theorem7_build(&r), Err(Error::NotPerfectInput(_))));
    }
}
