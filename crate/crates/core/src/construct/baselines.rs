//! Classical 1-perfect constructions used as baselines:
//!
//! - Vasil'ev: `{(u | u+v | p(u)+λ(v)) : u ∈ F_2^n, v ∈ C}`;
//! - Lindström–Schönheim: `(u_1 | … | u_{q−1} | v+Σu_i | Σ α_i p(u_i) + λ(v))`;
//! - Mollard: `(x | c+P1(x) | c'+P2(x)+f(c))`.
//!
//! `α_i` is `α^i`, so the nonzero field elements appear in power order.

use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{audit_perfect_ingredient, exact_logq, SharedCode};
use crate::code::{
    check_enumerable, enumerate, Code, ExplicitCode, MembershipCode, MembershipOracle,
};
use crate::error::{Error, Result};
use crate::field::Field;

/// A map from the words of a code to `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarFn {
    Zero,
    /// Sorted `(word, value)` pairs; words not listed map to 0.
    Table(Vec<(Vec<u8>, u8)>),
}

impl ScalarFn {
    /// Uniform values on every word of `code`, with the zero word sent to 0.
    pub fn random(code: &dyn Code, seed: u64) -> Result<Self> {
        check_enumerable("random function table", code.cardinality().log2(), false)?;
        let q = code.field().q();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = Vec::new();
        code.for_each_codeword(&mut |w| {
            let v = rng.gen_range(0..q);
            table.push((w.to_vec(), if w.iter().all(|&s| s == 0) { 0 } else { v }));
        });
        table.sort_unstable();
        Ok(ScalarFn::Table(table))
    }

    pub fn eval(&self, w: &[u8]) -> u8 {
        match self {
            ScalarFn::Zero => 0,
            ScalarFn::Table(t) => t
                .binary_search_by(|(k, _)| k.as_slice().cmp(w))
                .map_or(0, |i| t[i].1),
        }
    }
}

/// A map from the words of a code to `F_q^len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VectorFn {
    Zero { len: usize },
    /// Sorted `(word, value)` pairs; words not listed map to 0.
    Table {
        len: usize,
        entries: Vec<(Vec<u8>, Vec<u8>)>,
    },
}

impl VectorFn {
    /// Uniform values on every word of `code`, with the zero word sent to 0.
    pub fn random(code: &dyn Code, len: usize, seed: u64) -> Result<Self> {
        check_enumerable("random function table", code.cardinality().log2(), false)?;
        let q = code.field().q();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = Vec::new();
        code.for_each_codeword(&mut |w| {
            let mut v: Vec<u8> = (0..len).map(|_| rng.gen_range(0..q)).collect();
            if w.iter().all(|&s| s == 0) {
                v.fill(0);
            }
            entries.push((w.to_vec(), v));
        });
        entries.sort_unstable();
        Ok(VectorFn::Table { len, entries })
    }

    pub fn len(&self) -> usize {
        match self {
            VectorFn::Zero { len } | VectorFn::Table { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds `f(w)` into `out`.
    pub fn add_into(&self, field: &Field, w: &[u8], out: &mut [u8]) {
        if let VectorFn::Table { entries, .. } = self {
            if let Ok(i) = entries.binary_search_by(|(k, _)| k.as_slice().cmp(w)) {
                field.axpy(out, 1, &entries[i].1);
            }
        }
    }
}

/// All of `F_q^n`, first coordinate fastest.
fn for_each_vector(q: u8, n: usize, f: &mut dyn FnMut(&[u8])) {
    let mut x = vec![0u8; n];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn random_vector(rng: &mut dyn RngCore, q: u8, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..q)).collect()
}

#[derive(Debug)]
struct LsOracle {
    field: Field,
    n: usize,
    c: SharedCode,
    lambda: ScalarFn,
    alphas: Vec<u8>,
}

impl LsOracle {
    fn len(&self) -> usize {
        self.field.q() as usize * self.n + 1
    }

    /// Completes `(u_1 | … | u_{q−1})` and `v` to a codeword.
    fn assemble(&self, us: &[u8], v: &[u8]) -> Vec<u8> {
        let mut x = Vec::with_capacity(self.len());
        x.extend_from_slice(us);
        let mut w = v.to_vec();
        let mut z = self.lambda.eval(v);
        for (u, &a) in us.chunks_exact(self.n).zip(&self.alphas) {
            self.field.axpy(&mut w, 1, u);
            z = self.field.add(z, self.field.mul(a, self.field.parity(u)));
        }
        x.extend(w);
        x.push(z);
        x
    }
}

impl MembershipOracle for LsOracle {
    fn contains(&self, x: &[u8]) -> bool {
        if x.len() != self.len() {
            return false;
        }
        let split = (self.field.q() as usize - 1) * self.n;
        let (us, rest) = x.split_at(split);
        let (w, z) = rest.split_at(self.n);
        let mut v = w.to_vec();
        let mut expected = 0u8;
        for (u, &a) in us.chunks_exact(self.n).zip(&self.alphas) {
            for (vi, &ui) in v.iter_mut().zip(u) {
                *vi = self.field.sub(*vi, ui);
            }
            expected = self.field.add(expected, self.field.mul(a, self.field.parity(u)));
        }
        if !self.c.contains_symbols(&v) {
            return false;
        }
        z[0] == self.field.add(expected, self.lambda.eval(&v))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        let split = (self.field.q() as usize - 1) * self.n;
        let us = random_vector(rng, self.field.q(), split);
        let v = self.c.sample_with(rng);
        self.assemble(&us, &v)
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        let split = (self.field.q() as usize - 1) * self.n;
        for_each_vector(self.field.q(), split, &mut |us| {
            self.c.for_each_codeword(&mut |v| f(&self.assemble(us, v)));
        });
    }
}

/// The q-ary 1-perfect code of length `qn + 1` built from a 1-perfect code
/// `C` of length `n`.
pub fn lindstrom_schonheim_build(c: SharedCode, lambda: ScalarFn) -> Result<MembershipCode> {
    audit_perfect_ingredient(c.as_ref(), "C")?;
    let field = c.field().clone();
    let n = c.len();
    let q = field.q() as usize;
    let logq = (q - 1) as u64 * n as u64 + exact_logq(c.as_ref(), "C")?;
    let alphas = field.nonzero_by_power();
    let description = format!("lindstrom-schonheim q={q} n={n}");
    Ok(MembershipCode::new(
        field.clone(),
        q * n + 1,
        logq,
        3,
        false,
        description,
        Arc::new(LsOracle {
            field,
            n,
            c,
            lambda,
            alphas,
        }),
    ))
}

/// The binary 1-perfect code of length `2n + 1` built from a binary
/// 1-perfect code `C` of length `n`, enumerated.
pub fn vasilev_build(c: SharedCode, lambda: ScalarFn) -> Result<ExplicitCode> {
    if c.field().q() != 2 {
        return Err(Error::InvalidParameter(format!(
            "this construction is binary, got q = {}",
            c.field().q()
        )));
    }
    // over F_2 the q-ary form above is exactly (u | u+v | p(u)+λ(v))
    let code = lindstrom_schonheim_build(c, lambda)?;
    enumerate(&code, false)
}

/// `y_j = Σ_i Σ_k x_{ijk}` for `x` of length `(q−1)nm`, indexed so that
/// `(i, j, k)` sits at `((i−1)n + (j−1))m + (k−1)`.
pub fn mollard_p1(field: &Field, x: &[u8], n: usize, m: usize) -> Result<Vec<u8>> {
    let expected = (field.q() as usize - 1) * n * m;
    if x.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: x.len(),
        });
    }
    let mut y = vec![0u8; n];
    for (pos, &v) in x.iter().enumerate() {
        let j = (pos / m) % n;
        y[j] = field.add(y[j], v);
    }
    Ok(y)
}

/// `y_k = Σ_i α_i Σ_j x_{ijk}` with `α_i = α^i`.
pub fn mollard_p2(field: &Field, x: &[u8], n: usize, m: usize) -> Result<Vec<u8>> {
    let expected = (field.q() as usize - 1) * n * m;
    if x.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: x.len(),
        });
    }
    let alphas = field.nonzero_by_power();
    let mut y = vec![0u8; m];
    for (pos, &v) in x.iter().enumerate() {
        let k = pos % m;
        let i = pos / (n * m);
        y[k] = field.add(y[k], field.mul(alphas[i], v));
    }
    Ok(y)
}

#[derive(Debug)]
struct MollardOracle {
    field: Field,
    n: usize,
    m: usize,
    c: SharedCode,
    c2: SharedCode,
    f: VectorFn,
}

impl MollardOracle {
    fn x_len(&self) -> usize {
        (self.field.q() as usize - 1) * self.n * self.m
    }

    fn assemble(&self, x: &[u8], c: &[u8], c2: &[u8]) -> Vec<u8> {
        let p1 = mollard_p1(&self.field, x, self.n, self.m).expect("length checked");
        let p2 = mollard_p2(&self.field, x, self.n, self.m).expect("length checked");
        let mut out = x.to_vec();
        out.extend(self.field.add_vec(c, &p1));
        let mut z = self.field.add_vec(c2, &p2);
        self.f.add_into(&self.field, c, &mut z);
        out.extend(z);
        out
    }
}

impl MembershipOracle for MollardOracle {
    fn contains(&self, w: &[u8]) -> bool {
        let xl = self.x_len();
        if w.len() != xl + self.n + self.m {
            return false;
        }
        let (x, rest) = w.split_at(xl);
        let (y, z) = rest.split_at(self.n);
        let p1 = mollard_p1(&self.field, x, self.n, self.m).expect("length checked");
        let c = self.field.sub_vec(y, &p1);
        if !self.c.contains_symbols(&c) {
            return false;
        }
        let p2 = mollard_p2(&self.field, x, self.n, self.m).expect("length checked");
        let mut shift = p2;
        self.f.add_into(&self.field, &c, &mut shift);
        self.c2.contains_symbols(&self.field.sub_vec(z, &shift))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<u8> {
        let x = random_vector(rng, self.field.q(), self.x_len());
        let c = self.c.sample_with(rng);
        let c2 = self.c2.sample_with(rng);
        self.assemble(&x, &c, &c2)
    }

    fn for_each_codeword(&self, f: &mut dyn FnMut(&[u8])) {
        for_each_vector(self.field.q(), self.x_len(), &mut |x| {
            self.c.for_each_codeword(&mut |c| {
                self.c2.for_each_codeword(&mut |c2| f(&self.assemble(x, c, c2)));
            });
        });
    }
}

/// The 1-perfect code of length `(q−1)nm + n + m` from 1-perfect codes `C`
/// (length `n`) and `C'` (length `m`) and a map `f: C → F_q^m`.
pub fn mollard_build(c: SharedCode, c2: SharedCode, f: VectorFn) -> Result<MembershipCode> {
    if c.field() != c2.field() {
        return Err(Error::FieldMismatch {
            expected: c.field().q(),
            actual: c2.field().q(),
        });
    }
    if f.len() != c2.len() {
        return Err(Error::ShapeMismatch(format!(
            "f must map into F_q^{}, got length {}",
            c2.len(),
            f.len()
        )));
    }
    audit_perfect_ingredient(c.as_ref(), "C")?;
    audit_perfect_ingredient(c2.as_ref(), "C'")?;
    let field = c.field().clone();
    let q = field.q() as usize;
    let (n, m) = (c.len(), c2.len());
    let xl = (q - 1) * n * m;
    let logq = xl as u64 + exact_logq(c.as_ref(), "C")? + exact_logq(c2.as_ref(), "C'")?;
    let description = format!("mollard q={q} n={n} m={m}");
    Ok(MembershipCode::new(
        field.clone(),
        xl + n + m,
        logq,
        3,
        false,
        description,
        Arc::new(MollardOracle {
            field,
            n,
            m,
            c,
            c2,
            f,
        }),
    ))
}
