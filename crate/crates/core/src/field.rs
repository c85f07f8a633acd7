//! Table-driven arithmetic over the small fields GF(q), q ∈ {2, 3, 4, 5, 7, 8, 9}.
//!
//! Elements are encoded as integers `0..q`. For extension fields GF(p^k) the
//! encoding packs polynomial coefficients base `p`, lowest degree first, so
//! `x` in GF(9) is `3` and `x + 1` in GF(4) is `3`.
//!
//! The reduction polynomials are fixed so that every table, export and
//! manifest is reproducible:
//!
//! | q | modulus      | α          |
//! |---|--------------|------------|
//! | 4 | x² + x + 1   | x (= 2)    |
//! | 8 | x³ + x + 1   | x (= 2)    |
//! | 9 | x² + 2x + 2  | x (= 3)    |
//!
//! Prime fields use the least primitive root as α.

use std::fmt;

use crate::error::{Error, Result};

/// Field orders this crate knows how to build.
pub const SUPPORTED_ORDERS: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];

const MAX_Q: usize = 9;

/// Arithmetic context for GF(q).
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    q: u8,
    p: u8,
    deg: u8,
    modulus: Vec<u8>,
    alpha: u8,
    add: [[u8; MAX_Q]; MAX_Q],
    mul: [[u8; MAX_Q]; MAX_Q],
    neg: [u8; MAX_Q],
    inv: [u8; MAX_Q],
    // exp[k] = α^k for k in 0..q-1; log is the label map (log[1] = q-1).
    exp: [u8; MAX_Q],
    log: [u8; MAX_Q],
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Coefficients of the fixed reduction polynomial, lowest degree first,
/// monic. Empty for prime fields.
fn fixed_modulus(q: u8) -> Option<(u8, u8, Vec<u8>)> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1, Vec::new())),
        4 => Some((2, 2, vec![1, 1, 1])),
        8 => Some((2, 3, vec![1, 1, 0, 1])),
        9 => Some((3, 2, vec![2, 2, 1])),
        _ => None,
    }
}

fn digits(mut e: u8, p: u8, deg: u8) -> Vec<u8> {
    (0..deg)
        .map(|_| {
            let d = e % p;
            e /= p;
            d
        })
        .collect()
}

fn pack(coeffs: &[u8], p: u8) -> u8 {
    coeffs.iter().rev().fold(0u8, |acc, &c| acc * p + c)
}

fn poly_mul_mod(a: &[u8], b: &[u8], modulus: &[u8], p: u8) -> Vec<u8> {
    let deg = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * deg];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += ai as u32 * bj as u32;
        }
    }
    let p32 = p as u32;
    // x^deg = -(m_0 + m_1 x + ... + m_{deg-1} x^{deg-1})
    for top in (deg..prod.len()).rev() {
        let c = prod[top] % p32;
        prod[top] = 0;
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus[..deg].iter().enumerate() {
            let sub = (c * mk as u32) % p32;
            prod[top - deg + k] += p32 - sub;
        }
    }
    prod[..deg].iter().map(|&c| (c % p32) as u8).collect()
}

impl Field {
    /// Builds GF(q) with the fixed modulus and primitive element.
    pub fn new(q: u32) -> Result<Self> {
        let q8 = u8::try_from(q).map_err(|_| Error::UnsupportedOrder(q))?;
        let (p, deg, modulus) = fixed_modulus(q8).ok_or(Error::UnsupportedOrder(q))?;
        let n = q8 as usize;

        let mut add = [[0u8; MAX_Q]; MAX_Q];
        let mut mul = [[0u8; MAX_Q]; MAX_Q];
        for a in 0..q8 {
            for b in 0..q8 {
                let (s, m) = if deg == 1 {
                    ((a + b) % p, ((a as u32 * b as u32) % p as u32) as u8)
                } else {
                    let da = digits(a, p, deg);
                    let db = digits(b, p, deg);
                    let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    let prod = poly_mul_mod(&da, &db, &modulus, p);
                    (pack(&sum, p), pack(&prod, p))
                };
                add[a as usize][b as usize] = s;
                mul[a as usize][b as usize] = m;
            }
        }

        let mut neg = [0u8; MAX_Q];
        let mut inv = [0u8; MAX_Q];
        for a in 0..n {
            neg[a] = (0..q8).find(|&b| add[a][b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (0..q8).find(|&b| mul[a][b as usize] == 1).unwrap();
            }
        }

        let order_of = |g: u8| -> usize {
            let mut x = g;
            let mut k = 1;
            while x != 1 {
                x = mul[x as usize][g as usize];
                k += 1;
            }
            k
        };
        let alpha = if deg == 1 {
            (1..q8).find(|&g| order_of(g) == n - 1).unwrap()
        } else {
            p
        };
        debug_assert_eq!(order_of(alpha), n - 1);

        let mut exp = [0u8; MAX_Q];
        let mut log = [0u8; MAX_Q];
        exp[0] = 1;
        for k in 1..n {
            exp[k] = mul[exp[k - 1] as usize][alpha as usize];
        }
        for k in 1..n {
            log[exp[k] as usize] = k as u8;
        }
        // α^{q-1} = 1, so 1 carries label q-1.
        log[1] = (n - 1) as u8;

        Ok(Field {
            q: q8,
            p,
            deg,
            modulus,
            alpha,
            add,
            mul,
            neg,
            inv,
            exp,
            log,
        })
    }

    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.deg
    }

    /// Reduction polynomial coefficients, lowest degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The fixed primitive element.
    pub fn alpha(&self) -> u8 {
        self.alpha
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][self.neg[b as usize] as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// α^k for any k ≥ 0.
    pub fn alpha_pow(&self, k: usize) -> u8 {
        self.exp[k % (self.order() - 1)]
    }

    /// Coset label of a field element: 0 ↦ 0, α^k ↦ k for k in 1..=q-1.
    #[inline]
    pub fn label_of(&self, e: u8) -> u8 {
        self.log[e as usize]
    }

    /// Inverse of [`Field::label_of`].
    #[inline]
    pub fn unlabel(&self, k: u8) -> u8 {
        if k == 0 {
            0
        } else {
            self.exp[k as usize % (self.order() - 1)]
        }
    }

    /// The nonzero elements listed as α^1, α^2, …, α^{q-1}.
    pub fn nonzero_by_power(&self) -> Vec<u8> {
        (1..self.order()).map(|k| self.alpha_pow(k)).collect()
    }

    /// Parity function: the field sum of all symbols.
    #[inline]
    pub fn parity(&self, symbols: &[u8]) -> u8 {
        symbols.iter().fold(0, |acc, &x| self.add(acc, x))
    }

    pub fn check_symbol(&self, s: u32) -> Result<u8> {
        if s < self.q as u32 {
            Ok(s as u8)
        } else {
            Err(Error::SymbolOutOfRange { symbol: s, q: self.q })
        }
    }

    /// `dst[i] += c * src[i]`
    #[inline]
    pub fn axpy(&self, dst: &mut [u8], c: u8, src: &[u8]) {
        if c == 0 {
            return;
        }
        let row = &self.mul[c as usize];
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add[*d as usize][row[s as usize] as usize];
        }
    }

    /// Elementwise sum of two equal-length vectors.
    pub fn add_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    /// Elementwise difference `a - b`.
    pub fn sub_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }
}

/// A fixed-length vector over GF(q).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u8,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(field: &Field, symbols: Vec<u8>) -> Result<Self> {
        for &s in &symbols {
            field.check_symbol(s as u32)?;
        }
        Ok(Word { q: field.q(), symbols })
    }

    pub fn zero(field: &Field, len: usize) -> Self {
        Word {
            q: field.q(),
            symbols: vec![0; len],
        }
    }

    /// Internal constructor for symbols already known to be in range.
    pub(crate) fn from_trusted(q: u8, symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s < q));
        Word { q, symbols }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    pub fn distance(&self, other: &Word) -> usize {
        hamming_distance(&self.symbols, &other.symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.symbols)
    }
}

pub fn write_symbols(f: &mut impl fmt::Write, symbols: &[u8]) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if i > 0 {
            f.write_char(' ')?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

pub fn symbols_to_string(symbols: &[u8]) -> String {
    let mut s = String::with_capacity(symbols.len() * 2);
    write_symbols(&mut s, symbols).unwrap();
    s
}

#[inline]
pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// `q^k` as u128, or `None` on overflow.
pub fn checked_pow(q: u8, k: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// Dense index of a word in `0..q^n`, little-endian base `q`.
#[inline]
pub fn dense_index(q: u8, symbols: &[u8]) -> u64 {
    symbols
        .iter()
        .rev()
        .fold(0u64, |acc, &s| acc * q as u64 + s as u64)
}

/// Inverse of [`dense_index`].
pub fn from_dense_index(q: u8, len: usize, mut idx: u64, out: &mut [u8]) {
    debug_assert_eq!(out.len(), len);
    for slot in out.iter_mut() {
        *slot = (idx % q as u64) as u8;
        idx /= q as u64;
    }
}
