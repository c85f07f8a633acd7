//! Reproducible build descriptions and plain-text word lists.
//!
//! A [`Manifest`] names a construction, its parameters and seeds, and the
//! parameters the build is expected to produce; [`build`] rebuilds the code
//! and refuses manifests whose recorded parameters disagree with it.
//!
//! A [`WordFile`] is a header `# q=<q> n=<N> size=<count>` followed by one
//! codeword per line, symbols in base 10 separated by single spaces, lines
//! in lexicographic order and terminated by LF.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::code::{enumerate, Code, CodeParams, LinearCode};
use crate::construct::{
    default_r_partition, lindstrom_schonheim_build, mollard_build, theorem7_build, theorem8_build,
    thm8_partition, vasilev_build, ScalarFn, SharedCode, Thm7Recipe, Thm8Recipe, VectorFn,
};
use crate::error::{Error, Result};
use crate::field::{symbols_to_string, Field};
use crate::partition::{evenlike_d3_code, hamming_code, hamming_length};
use crate::quasigroup::FamilySpec;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    Thm7,
    Thm8,
    Thm8Partition,
    Vasilev,
    LindstromSchonheim,
    Mollard,
    Hamming,
    EvenlikeD3,
    FullSpace,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 9] = [
        ConstructionKind::Thm7,
        ConstructionKind::Thm8,
        ConstructionKind::Thm8Partition,
        ConstructionKind::Vasilev,
        ConstructionKind::LindstromSchonheim,
        ConstructionKind::Mollard,
        ConstructionKind::Hamming,
        ConstructionKind::EvenlikeD3,
        ConstructionKind::FullSpace,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConstructionKind::Thm7 => "thm7",
            ConstructionKind::Thm8 => "thm8",
            ConstructionKind::Thm8Partition => "thm8-partition",
            ConstructionKind::Vasilev => "vasilev",
            ConstructionKind::LindstromSchonheim => "lindstrom-schonheim",
            ConstructionKind::Mollard => "mollard",
            ConstructionKind::Hamming => "hamming",
            ConstructionKind::EvenlikeD3 => "evenlike-d3",
            ConstructionKind::FullSpace => "full-space",
        }
    }

    /// Whether the construction's output is claimed 1-perfect.
    pub fn is_perfect(&self) -> bool {
        matches!(
            self,
            ConstructionKind::Thm7
                | ConstructionKind::Vasilev
                | ConstructionKind::LindstromSchonheim
                | ConstructionKind::Mollard
                | ConstructionKind::Hamming
        )
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown construction {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaKind {
    #[default]
    Zero,
    Random,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSpec {
    pub kind: LambdaKind,
    pub seed: u64,
}

/// Parameters the build is expected to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub length: usize,
    /// `log_q` of the size of the code (of each member, for a partition).
    pub logq_size: u64,
    pub claimed_distance: u32,
    pub even_like: bool,
    /// Number of codes, for partition manifests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<usize>,
}

impl Derived {
    pub fn params(&self, q: u8) -> CodeParams {
        CodeParams {
            q,
            length: self.length as u64,
            logq_size: self.logq_size,
            distance: self.claimed_distance as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: String,
    pub construction: ConstructionKind,
    pub q: u32,
    pub s1: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<usize>,
    /// Defining polynomial of the field, low degree first.
    pub modulus: Vec<u8>,
    pub quasigroup: FamilySpec,
    pub lambda: LambdaSpec,
    pub derived: Derived,
}

impl Manifest {
    /// Builds the code described by the arguments and records its parameters.
    pub fn create(
        construction: ConstructionKind,
        q: u32,
        s1: usize,
        s2: Option<usize>,
        quasigroup: FamilySpec,
        lambda: LambdaSpec,
    ) -> Result<(Manifest, Constructed)> {
        let field = Field::new(q)?;
        let mut m = Manifest {
            format_version: FORMAT_VERSION.to_string(),
            construction,
            q,
            s1,
            s2,
            modulus: field.modulus().to_vec(),
            quasigroup,
            lambda,
            derived: Derived {
                length: 0,
                logq_size: 0,
                claimed_distance: 0,
                even_like: false,
                parts: None,
            },
        };
        let built = build_unchecked(&m)?;
        m.derived = built.derived;
        Ok((m, built))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn s2(&self) -> Result<usize> {
        self.s2.ok_or_else(|| {
            Error::Manifest(format!("construction {} needs s2", self.construction))
        })
    }
}

/// A rebuilt code and its parameters.
#[derive(Clone, Debug)]
pub struct Constructed {
    /// The code itself; for a partition manifest, the union of the members.
    pub code: SharedCode,
    pub derived: Derived,
    /// Members of a partition manifest, empty otherwise.
    pub members: Vec<SharedCode>,
}

impl Constructed {
    fn single(code: SharedCode, logq_size: u64, claimed_distance: u32, even_like: bool) -> Self {
        let derived = Derived {
            length: code.len(),
            logq_size,
            claimed_distance,
            even_like,
            parts: None,
        };
        Constructed {
            code,
            derived,
            members: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        self.code.field()
    }

    pub fn params(&self) -> CodeParams {
        self.derived.params(self.field().q())
    }

    pub fn is_partition(&self) -> bool {
        !self.members.is_empty()
    }
}

/// Rebuilds the code and checks the recorded parameters against it.
pub fn build(m: &Manifest) -> Result<Constructed> {
    let built = build_unchecked(m)?;
    if built.derived != m.derived {
        return Err(Error::Manifest(format!(
            "recorded parameters {:?} disagree with the rebuilt code {:?}",
            m.derived, built.derived
        )));
    }
    Ok(built)
}

fn build_unchecked(m: &Manifest) -> Result<Constructed> {
    if m.format_version != FORMAT_VERSION {
        return Err(Error::Manifest(format!(
            "unsupported format_version {:?}",
            m.format_version
        )));
    }
    let field = Field::new(m.q)?;
    if m.modulus != field.modulus() {
        return Err(Error::Manifest(format!(
            "modulus {:?} does not match the field table {:?} for GF({})",
            m.modulus,
            field.modulus(),
            m.q
        )));
    }
    let q = field.q() as usize;
    let lambda_scalar = |c: &dyn Code| -> Result<ScalarFn> {
        match m.lambda.kind {
            LambdaKind::Zero => Ok(ScalarFn::Zero),
            LambdaKind::Random => ScalarFn::random(c, m.lambda.seed),
        }
    };
    Ok(match m.construction {
        ConstructionKind::Thm7 => {
            let recipe = Thm7Recipe::standard(&field, m.s1, m.s2()?, m.quasigroup)?;
            let code = theorem7_build(&recipe)?;
            let logq = code.logq_size();
            Constructed::single(Arc::new(code), logq, 3, false)
        }
        ConstructionKind::Thm8 => {
            let recipe = Thm8Recipe::standard(&field, m.s1, m.s2()?, m.quasigroup)?;
            let code = theorem8_build(&recipe)?;
            let logq = code.logq_size();
            let d = code.claimed_distance();
            Constructed::single(Arc::new(code), logq, d, true)
        }
        ConstructionKind::Thm8Partition => {
            let recipe = Thm8Recipe::standard(&field, m.s1, m.s2()?, m.quasigroup)?;
            let parts = default_r_partition(&field, recipe.s2)?;
            let members: Vec<SharedCode> = thm8_partition(&recipe, Some(parts))?
                .into_iter()
                .map(|c| Arc::new(c) as SharedCode)
                .collect();
            let union = LinearCode::zero_sum(field.clone(), recipe.length())?;
            Constructed {
                code: Arc::new(union),
                derived: Derived {
                    length: recipe.length(),
                    logq_size: recipe.logq_size(),
                    claimed_distance: recipe.claimed_distance(),
                    even_like: true,
                    parts: Some(members.len()),
                },
                members,
            }
        }
        ConstructionKind::Vasilev => {
            let c = Arc::new(hamming_code(&field, m.s1)?);
            let lambda = lambda_scalar(c.as_ref())?;
            let code = vasilev_build(c, lambda)?;
            // 2^n · |C| words with |C| = 2^{n − s1}
            let n = hamming_length(2, m.s1);
            Constructed::single(Arc::new(code), (2 * n - m.s1) as u64, 3, false)
        }
        ConstructionKind::LindstromSchonheim => {
            let c = Arc::new(hamming_code(&field, m.s1)?);
            let lambda = lambda_scalar(c.as_ref())?;
            let code = lindstrom_schonheim_build(c, lambda)?;
            let logq = code.logq_size();
            Constructed::single(Arc::new(code), logq, 3, false)
        }
        ConstructionKind::Mollard => {
            let c = Arc::new(hamming_code(&field, m.s1)?);
            let c2 = Arc::new(hamming_code(&field, m.s2()?)?);
            let f = match m.lambda.kind {
                LambdaKind::Zero => VectorFn::Zero { len: c2.len() },
                LambdaKind::Random => VectorFn::random(c.as_ref(), c2.len(), m.lambda.seed)?,
            };
            let code = mollard_build(c, c2, f)?;
            let logq = code.logq_size();
            Constructed::single(Arc::new(code), logq, 3, false)
        }
        ConstructionKind::Hamming => {
            let code = hamming_code(&field, m.s1)?;
            let logq = code.dimension() as u64;
            Constructed::single(Arc::new(code), logq, 3, false)
        }
        ConstructionKind::EvenlikeD3 => {
            let code = evenlike_d3_code(&field, m.s1)?;
            let logq = code.dimension() as u64;
            Constructed::single(Arc::new(code), logq, if q == 2 { 4 } else { 3 }, true)
        }
        ConstructionKind::FullSpace => {
            if m.s1 == 0 {
                return Err(Error::InvalidParameter("full space needs length s1 ≥ 1".into()));
            }
            let code = LinearCode::full_space(field.clone(), m.s1);
            Constructed::single(Arc::new(code), m.s1 as u64, 1, false)
        }
    })
}

/// A code as a sorted list of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordFile {
    pub q: u8,
    pub n: usize,
    pub words: Vec<Vec<u8>>,
}

impl WordFile {
    /// Enumerates `code` (guarded unless `force`).
    pub fn from_code(code: &dyn Code, force: bool) -> Result<Self> {
        let e = enumerate(code, force)?;
        Ok(WordFile {
            q: code.field().q(),
            n: code.len(),
            words: e.words().map(|w| w.to_vec()).collect(),
        })
    }

    pub fn emit(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (2 * self.n + 1) + 32);
        out.push_str(&format!(
            "# q={} n={} size={}\n",
            self.q,
            self.n,
            self.words.len()
        ));
        for w in &self.words {
            out.push_str(&symbols_to_string(w));
            out.push('\n');
        }
        out
    }

    /// Parses a word file. The size may be given as `size=<count>` or
    /// `logq_size=<k>`; it must match the number of lines.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::WordFile(msg);
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or("");
        let fields = header
            .strip_prefix("# ")
            .ok_or_else(|| bad(format!("missing header, got {header:?}")))?;
        let (mut q, mut n, mut size) = (None, None, None);
        for tok in fields.split(' ') {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| bad(format!("bad header token {tok:?}")))?;
            let num: u128 = v
                .parse()
                .map_err(|_| bad(format!("bad number in header token {tok:?}")))?;
            match k {
                "q" => q = Some(num),
                "n" => n = Some(num),
                "size" => size = Some(num),
                "logq_size" => size = Some(u128::MAX - num),
                _ => return Err(bad(format!("unknown header key {k:?}"))),
            }
        }
        let q = q.ok_or_else(|| bad("header lacks q".into()))?;
        let n = n.ok_or_else(|| bad("header lacks n".into()))? as usize;
        let size = size.ok_or_else(|| bad("header lacks size".into()))?;
        let field = Field::new(q as u32)?;
        let size = if size > u128::MAX / 2 {
            crate::field::checked_pow(field.q(), (u128::MAX - size) as u64)
                .ok_or_else(|| bad("logq_size too large".into()))?
        } else {
            size
        };

        let body: Vec<&str> = lines.collect();
        let (last, body) = body.split_last().ok_or_else(|| bad("missing final LF".into()))?;
        if !last.is_empty() {
            return Err(bad("last line is not LF-terminated".into()));
        }
        let mut words = Vec::with_capacity(body.len());
        for (i, line) in body.iter().enumerate() {
            let w: Vec<u8> = if n == 0 && line.is_empty() {
                Vec::new()
            } else {
                line.split(' ')
                    .map(|t| {
                        let v: u32 = t
                            .parse()
                            .map_err(|_| bad(format!("line {}: bad symbol {t:?}", i + 2)))?;
                        field.check_symbol(v)
                    })
                    .collect::<Result<_>>()?
            };
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: w.len(),
                });
            }
            words.push(w);
        }
        if words.len() as u128 != size {
            return Err(bad(format!(
                "header says {size} words, found {}",
                words.len()
            )));
        }
        if !words.windows(2).all(|p| p[0] < p[1]) {
            return Err(bad("words are not in strictly increasing lexicographic order".into()));
        }
        Ok(WordFile {
            q: field.q(),
            n,
            words,
        })
    }
}
