//! m-ary quasigroups on `{0, …, Q−1}` and families of them keyed by the
//! words of a code.
//!
//! The shipped kinds are translations of `F_q^s` read through the
//! [`IndexMap`] (so `Q = q^s`), isotopes of those under seeded random
//! permutations, and explicit tables (mainly for auditing).

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::Code;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::partition::IndexMap;

/// Exhaustive Latin audits run when `Q^m` is at most this.
pub const DEFAULT_LATIN_BUDGET: u64 = 1 << 20;
/// Random line fixings per argument position in a sampled audit.
pub const DEFAULT_LATIN_TRIALS: usize = 256;

const MAX_DIGITS: usize = 32;

#[derive(Clone, PartialEq, Eq)]
pub enum QuasigroupKind {
    /// `ind(Σ ind⁻¹(j_i) + offset)` over `F_q^s`.
    Modular {
        field: Field,
        index: IndexMap,
        offset: Vec<u8>,
    },
    /// `(Σ j_i + offset) mod Q`, used for orders that are not field powers.
    Cyclic { offset: usize },
    /// `π_0(base(π_1(j_1), …, π_m(j_m)))`.
    Isotope {
        base: Box<Quasigroup>,
        outer: Vec<u32>,
        inner: Vec<Vec<u32>>,
    },
    /// Values listed with the first argument varying fastest.
    Table { values: Vec<u32> },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Quasigroup {
    arity: usize,
    order: usize,
    kind: QuasigroupKind,
}

impl fmt::Debug for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            QuasigroupKind::Modular { .. } => "modular",
            QuasigroupKind::Cyclic { .. } => "cyclic",
            QuasigroupKind::Isotope { .. } => "isotope",
            QuasigroupKind::Table { .. } => "table",
        };
        write!(f, "Quasigroup({kind}, arity={}, order={})", self.arity, self.order)
    }
}

fn seeded_permutation(rng: &mut ChaCha8Rng, order: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (0..order as u32).collect();
    p.shuffle(rng);
    p
}

/// Finds a supported prime `p` and `s` with `p^s = order`.
fn prime_power_decomposition(order: usize) -> Option<(u32, usize)> {
    for p in [2usize, 3, 5, 7] {
        let mut x = order;
        let mut s = 0;
        while x > 1 && x % p == 0 {
            x /= p;
            s += 1;
        }
        if x == 1 && s > 0 {
            return Some((p as u32, s));
        }
    }
    None
}

impl Quasigroup {
    /// Translation quasigroup over `F_q^s`.
    pub fn modular(arity: usize, field: &Field, s: usize, offset: &[u8]) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("quasigroup arity must be ≥ 1".into()));
        }
        if offset.len() != s || s > MAX_DIGITS {
            return Err(Error::ShapeMismatch(format!(
                "offset has {} digits, expected {s}",
                offset.len()
            )));
        }
        for &d in offset {
            field.check_symbol(d as u32)?;
        }
        let index = IndexMap::new(field.q(), s);
        Ok(Quasigroup {
            arity,
            order: index.size(),
            kind: QuasigroupKind::Modular {
                field: field.clone(),
                index,
                offset: offset.to_vec(),
            },
        })
    }

    pub fn cyclic(arity: usize, order: usize, offset: usize) -> Result<Self> {
        if arity == 0 || order == 0 {
            return Err(Error::InvalidParameter("arity and order must be ≥ 1".into()));
        }
        Ok(Quasigroup {
            arity,
            order,
            kind: QuasigroupKind::Cyclic {
                offset: offset % order,
            },
        })
    }

    /// Isotope of `base` under `m + 1` permutations drawn from `seed`.
    pub fn isotope_of(base: Quasigroup, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outer = seeded_permutation(&mut rng, base.order);
        let inner = (0..base.arity)
            .map(|_| seeded_permutation(&mut rng, base.order))
            .collect();
        Quasigroup {
            arity: base.arity,
            order: base.order,
            kind: QuasigroupKind::Isotope {
                base: Box::new(base),
                outer,
                inner,
            },
        }
    }

    /// Isotope with explicit permutations; identities reproduce `base`.
    pub fn isotope_with(base: Quasigroup, outer: Vec<u32>, inner: Vec<Vec<u32>>) -> Result<Self> {
        let is_perm = |p: &[u32]| {
            let mut seen = vec![false; base.order];
            p.len() == base.order
                && p.iter().all(|&x| {
                    (x as usize) < base.order && !std::mem::replace(&mut seen[x as usize], true)
                })
        };
        if inner.len() != base.arity || !is_perm(&outer) || !inner.iter().all(|p| is_perm(p)) {
            return Err(Error::InvalidParameter("isotope needs arity + 1 permutations".into()));
        }
        Ok(Quasigroup {
            arity: base.arity,
            order: base.order,
            kind: QuasigroupKind::Isotope {
                base: Box::new(base),
                outer,
                inner,
            },
        })
    }

    /// Random isotope of order `order`: over `F_p^s` when `order = p^s` for a
    /// prime `p ≤ 7`, otherwise over the cyclic group.
    pub fn isotope(arity: usize, order: usize, seed: u64) -> Result<Self> {
        let base = match prime_power_decomposition(order) {
            Some((p, s)) => Self::modular(arity, &Field::new(p)?, s, &vec![0; s])?,
            None => Self::cyclic(arity, order, 0)?,
        };
        Ok(Self::isotope_of(base, seed))
    }

    /// Explicit table; the Latin property is not checked here.
    pub fn from_table(arity: usize, order: usize, values: Vec<u32>) -> Result<Self> {
        let expected = order
            .checked_pow(arity as u32)
            .ok_or_else(|| Error::InvalidParameter("table too large".into()))?;
        if values.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, expected {expected}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v as usize >= order) {
            return Err(Error::InvalidParameter("table entry out of range".into()));
        }
        Ok(Quasigroup {
            arity,
            order,
            kind: QuasigroupKind::Table { values },
        })
    }

    /// Materializes the operation table.
    pub fn to_table(&self) -> Result<Vec<u32>> {
        let total = (self.order as u64)
            .checked_pow(self.arity as u32)
            .filter(|&t| t <= DEFAULT_LATIN_BUDGET * 16)
            .ok_or_else(|| Error::budget("quasigroup table", f64::INFINITY, 24.0))?;
        let mut args = vec![0usize; self.arity];
        let mut out = Vec::with_capacity(total as usize);
        for _ in 0..total {
            out.push(self.eval(&args) as u32);
            for a in args.iter_mut() {
                *a += 1;
                if *a < self.order {
                    break;
                }
                *a = 0;
            }
        }
        Ok(out)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &QuasigroupKind {
        &self.kind
    }

    #[inline]
    pub fn eval(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        match &self.kind {
            QuasigroupKind::Modular {
                field,
                index,
                offset,
            } => {
                let s = index.digits();
                let q = field.q() as usize;
                let mut acc = [0u8; MAX_DIGITS];
                acc[..s].copy_from_slice(offset);
                for &j in args {
                    let mut rest = j;
                    for d in acc[..s].iter_mut() {
                        *d = field.add(*d, (rest % q) as u8);
                        rest /= q;
                    }
                }
                index.index(&acc[..s])
            }
            QuasigroupKind::Cyclic { offset } => {
                args.iter().fold(*offset, |acc, &j| (acc + j) % self.order)
            }
            QuasigroupKind::Isotope { base, outer, inner } => {
                let mut buf = [0usize; 128];
                let mapped: Vec<usize>;
                let inner_args: &[usize] = if args.len() <= buf.len() {
                    for (slot, (&j, p)) in buf.iter_mut().zip(args.iter().zip(inner)) {
                        *slot = p[j] as usize;
                    }
                    &buf[..args.len()]
                } else {
                    mapped = args.iter().zip(inner).map(|(&j, p)| p[j] as usize).collect();
                    &mapped
                };
                outer[base.eval(inner_args)] as usize
            }
            QuasigroupKind::Table { values } => {
                let idx = args
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &j| acc * self.order + j);
                values[idx] as usize
            }
        }
    }

    /// Latin audit: exhaustive when `Q^m ≤ budget`, otherwise
    /// [`DEFAULT_LATIN_TRIALS`] random lines per argument position.
    pub fn check(&self, budget: u64, seed: u64) -> LatinReport {
        let exhaustive = (self.order as u64)
            .checked_pow(self.arity as u32)
            .is_some_and(|t| t <= budget);
        let mut report = LatinReport {
            exhaustive,
            lines_checked: 0,
            witness: None,
        };
        let mut seen = vec![usize::MAX; self.order];
        let mut args = vec![0usize; self.arity];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for pos in 0..self.arity {
            let lines: u64 = if exhaustive {
                (self.order as u64).pow(self.arity as u32 - 1)
            } else {
                DEFAULT_LATIN_TRIALS as u64
            };
            for line in 0..lines {
                if exhaustive {
                    let mut rest = line;
                    for (i, a) in args.iter_mut().enumerate() {
                        if i != pos {
                            *a = (rest % self.order as u64) as usize;
                            rest /= self.order as u64;
                        }
                    }
                } else {
                    for (i, a) in args.iter_mut().enumerate() {
                        if i != pos {
                            *a = rng.gen_range(0..self.order);
                        }
                    }
                }
                seen.fill(usize::MAX);
                for x in 0..self.order {
                    args[pos] = x;
                    let v = self.eval(&args);
                    if v >= self.order {
                        report.witness = Some(LatinWitness {
                            position: pos,
                            args: args.clone(),
                            first: x,
                            second: x,
                            value: v,
                        });
                        return report;
                    }
                    if seen[v] != usize::MAX {
                        report.witness = Some(LatinWitness {
                            position: pos,
                            args: args.clone(),
                            first: seen[v],
                            second: x,
                            value: v,
                        });
                        return report;
                    }
                    seen[v] = x;
                }
                report.lines_checked += 1;
            }
        }
        report
    }

    pub fn is_latin(&self, budget: u64) -> bool {
        self.check(budget, 0).passed()
    }
}

/// Outcome of a Latin-property audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinReport {
    pub exhaustive: bool,
    pub lines_checked: u64,
    pub witness: Option<LatinWitness>,
}

impl LatinReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// A line on which the unary map is not a bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinWitness {
    pub position: usize,
    pub args: Vec<usize>,
    pub first: usize,
    pub second: usize,
    pub value: usize,
}

impl fmt::Display for LatinWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.first == self.second {
            write!(
                f,
                "position {}: value {} out of range at args {:?}",
                self.position, self.value, self.args
            )
        } else {
            write!(
                f,
                "position {}: arguments {} and {} both give {} (other args {:?})",
                self.position, self.first, self.second, self.value, self.args
            )
        }
    }
}

/// Which quasigroup each family member is.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuasigroupChoice {
    #[default]
    Modular,
    Isotope,
}

/// Whether the quasigroup depends on the key word.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    #[default]
    Constant,
    Keyed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: QuasigroupChoice,
    pub family: FamilyKind,
    pub seed: u64,
}

/// 64-bit FNV-1a over the seed (little-endian) followed by the key symbols.
pub fn fnv1a(seed: u64, symbols: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    seed.to_le_bytes()
        .iter()
        .chain(symbols)
        .fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// Keyed families precompute every member when the key code has at most
/// this many words.
const FAMILY_CACHE_LIMIT_LOG2: f64 = 16.0;

/// A quasigroup `q_r` for every word `r` of a key code.
#[derive(Clone, Debug)]
pub struct QuasigroupFamily {
    spec: FamilySpec,
    field: Field,
    digits: usize,
    arity: usize,
    constant: Option<Quasigroup>,
    cache: Option<HashMap<Vec<u8>, Quasigroup>>,
}

impl QuasigroupFamily {
    /// Family of `arity`-ary quasigroups of order `q^digits` over the words
    /// of `keys`.
    pub fn new(
        field: &Field,
        digits: usize,
        arity: usize,
        keys: &dyn Code,
        spec: FamilySpec,
    ) -> Result<Self> {
        let mut fam = QuasigroupFamily {
            spec,
            field: field.clone(),
            digits,
            arity,
            constant: None,
            cache: None,
        };
        match spec.family {
            FamilyKind::Constant => {
                let zero = Quasigroup::modular(arity, field, digits, &vec![0; digits])?;
                fam.constant = Some(match spec.kind {
                    QuasigroupChoice::Modular => zero,
                    QuasigroupChoice::Isotope => Quasigroup::isotope_of(zero, spec.seed),
                });
            }
            FamilyKind::Keyed => {
                if keys.cardinality().log2() <= FAMILY_CACHE_LIMIT_LOG2 {
                    let mut cache = HashMap::new();
                    let mut err = None;
                    keys.for_each_codeword(&mut |r| match fam.member(r) {
                        Ok(g) => {
                            cache.insert(r.to_vec(), g);
                        }
                        Err(e) => err = Some(e),
                    });
                    if let Some(e) = err {
                        return Err(e);
                    }
                    fam.cache = Some(cache);
                }
            }
        }
        Ok(fam)
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> usize {
        IndexMap::new(self.field.q(), self.digits).size()
    }

    fn member(&self, r: &[u8]) -> Result<Quasigroup> {
        let h = fnv1a(self.spec.seed, r);
        match self.spec.kind {
            QuasigroupChoice::Modular => {
                let map = IndexMap::new(self.field.q(), self.digits);
                let offset = map.vector((h % map.size() as u64) as usize);
                Quasigroup::modular(self.arity, &self.field, self.digits, &offset)
            }
            QuasigroupChoice::Isotope => {
                let zero = Quasigroup::modular(self.arity, &self.field, self.digits, &vec![0; self.digits])?;
                Ok(Quasigroup::isotope_of(zero, h))
            }
        }
    }

    /// The quasigroup assigned to key word `r`.
    pub fn get(&self, r: &[u8]) -> Cow<'_, Quasigroup> {
        if let Some(g) = &self.constant {
            return Cow::Borrowed(g);
        }
        if let Some(g) = self.cache.as_ref().and_then(|c| c.get(r)) {
            return Cow::Borrowed(g);
        }
        Cow::Owned(self.member(r).expect("family parameters validated at construction"))
    }

    #[inline]
    pub fn eval(&self, r: &[u8], args: &[usize]) -> usize {
        self.get(r).eval(args)
    }
}
