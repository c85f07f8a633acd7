//! Perfectness, distance and partition audits.
//!
//! Exhaustive audits walk all of `F_q^N` (guarded at `2^24` words). Sampled
//! audits draw trial `i` from `ChaCha8Rng::seed_from_u64(seed ^ i)` and
//! collect results in trial order, so a report depends only on the code,
//! the seed and the trial count, never on the thread schedule.
//!
//! Balls are walked original word first, then positions ascending, then
//! substitute symbols ascending.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{check_enumerable, Code, CodeParams};
use crate::error::{Error, Result};
use crate::field::{checked_pow, from_dense_index, write_symbols};

pub const DEFAULT_PERFECT_TRIALS: u64 = 10_000;
pub const DEFAULT_DISTANCE_TRIALS: u64 = 1_000;
/// Witness words kept in a report; the full count is always recorded.
pub const MAX_WITNESSES: usize = 16;
/// Sampled codewords whose distance-`t` shell is searched for a close pair.
const PAIR_SEARCH_CODEWORDS: u64 = 8;
const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

/// A word that breaks a check; `word` is empty for failures that are not
/// tied to a single word (such as a size mismatch).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub word: Vec<u8>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: Mode,
    pub trials: u64,
    pub failure_count: u64,
    pub failures: Vec<Witness>,
    pub checks: BTreeMap<String, bool>,
    pub notes: BTreeMap<String, String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn new(mode: Mode) -> Self {
        VerifyReport {
            mode,
            trials: 0,
            failure_count: 0,
            failures: Vec::new(),
            checks: BTreeMap::new(),
            notes: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checks.values().all(|&ok| ok)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.get(name).copied()
    }

    pub fn set_check(&mut self, name: &str, ok: bool) {
        let slot = self.checks.entry(name.to_string()).or_insert(true);
        *slot &= ok;
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.insert(key.to_string(), value.into());
    }

    pub fn fail(&mut self, check: &str, word: &[u8], detail: impl Into<String>) {
        self.set_check(check, false);
        self.failure_count += 1;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(Witness {
                word: word.to_vec(),
                detail: detail.into(),
            });
        }
    }

    /// Folds another report into this one (mode becomes sampled if either is).
    pub fn merge(&mut self, other: VerifyReport) {
        if other.mode == Mode::Sampled {
            self.mode = Mode::Sampled;
        }
        self.trials += other.trials;
        self.failure_count += other.failure_count;
        let room = MAX_WITNESSES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        for (k, v) in other.checks {
            self.set_check(&k, v);
        }
        self.notes.extend(other.notes);
        self.elapsed += other.elapsed;
    }

    /// `key: value` lines: mode, trials, checks, notes, failures, witnesses.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode.as_str());
        let _ = writeln!(out, "trials: {}", self.trials);
        for (k, v) in &self.checks {
            let _ = writeln!(out, "{k}: {v}");
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "failures: {}", self.failure_count);
        for w in &self.failures {
            let mut word = String::new();
            let _ = write_symbols(&mut word, &w.word);
            let _ = writeln!(out, "witness: [{word}] {}", w.detail);
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

/// Visits every word at Hamming distance exactly `d` from `x`, positions
/// ascending and substitute symbols ascending. `x` is restored on return.
pub fn for_each_at_distance(
    x: &mut [u8],
    q: u8,
    d: usize,
    f: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn go(
        x: &mut [u8],
        q: u8,
        start: usize,
        left: usize,
        f: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if left == 0 {
            return f(x);
        }
        for pos in start..=x.len() - left {
            let orig = x[pos];
            for sym in 0..q {
                if sym == orig {
                    continue;
                }
                x[pos] = sym;
                let flow = go(x, q, pos + 1, left - 1, f);
                if flow.is_break() {
                    x[pos] = orig;
                    return flow;
                }
            }
            x[pos] = orig;
        }
        ControlFlow::Continue(())
    }
    if d > x.len() {
        return ControlFlow::Continue(());
    }
    go(x, q, 0, d, f)
}

/// Members of `code` in the radius-1 ball around `x`.
pub fn ball1_count(code: &dyn Code, x: &mut [u8]) -> u32 {
    let mut count = code.contains_symbols(x) as u32;
    let _ = for_each_at_distance(x, code.field().q(), 1, &mut |w| {
        count += code.contains_symbols(w) as u32;
        ControlFlow::Continue(())
    });
    count
}

fn space_log2(code: &dyn Code) -> f64 {
    code.len() as f64 * (code.field().q() as f64).log2()
}

/// Membership bitmap of `code` over `F_q^N` in dense-index order.
fn membership_bitmap(code: &dyn Code) -> Vec<bool> {
    let q = code.field().q();
    let n = code.len();
    let total = (q as u64).pow(n as u32);
    let chunks: Vec<Vec<bool>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut x = vec![0u8; n];
            (lo..hi)
                .map(|idx| {
                    from_dense_index(q, n, idx, &mut x);
                    code.contains_symbols(&x)
                })
                .collect()
        })
        .collect();
    chunks.concat()
}

/// Walks all of `F_q^N` and counts codewords in every radius-1 ball.
pub fn verify_perfect_exhaustive(code: &dyn Code) -> Result<VerifyReport> {
    let start = Instant::now();
    check_enumerable("exhaustive perfectness audit", space_log2(code), false)?;
    let q = code.field().q() as u64;
    let n = code.len();
    let total = q.pow(n as u32);
    let members = membership_bitmap(code);

    // count[x] = |C ∩ B_1(x)|, built by spreading each codeword over its ball
    let mut count = vec![0u8; total as usize];
    let mut place = vec![1u64; n];
    for i in 1..n {
        place[i] = place[i - 1] * q;
    }
    let mut size: u128 = 0;
    for (idx, _) in members.iter().enumerate().filter(|(_, &m)| m) {
        size += 1;
        let idx = idx as u64;
        count[idx as usize] = count[idx as usize].saturating_add(1);
        for &p in &place {
            let digit = (idx / p) % q;
            let base = idx - digit * p;
            for sym in 0..q {
                if sym != digit {
                    let j = (base + sym * p) as usize;
                    count[j] = count[j].saturating_add(1);
                }
            }
        }
    }

    let mut report = VerifyReport::new(Mode::Exhaustive);
    report.trials = total;
    report.set_check("perfect", true);
    let mut x = vec![0u8; n];
    for (idx, &c) in count.iter().enumerate() {
        if c != 1 {
            from_dense_index(q as u8, n, idx as u64, &mut x);
            report.fail("perfect", &x, format!("ball contains {c} codewords"));
        }
    }
    let ball = (n as u128) * (q as u128 - 1) + 1;
    let identity = size * ball == total as u128;
    report.set_check("sphere_packing", identity);
    report.note("codewords", size.to_string());
    report.note(
        "sphere_packing_identity",
        format!("{size}*{ball} {} {q}^{n}", if identity { "=" } else { "!=" }),
    );
    if !identity {
        report.fail(
            "sphere_packing",
            &[],
            format!("{size}*{ball} != {total}"),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Runs `trials` independent trials, trial `i` seeded with `seed ^ i`,
/// returning results in trial order.
pub fn run_trials<T, F>(trials: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i);
            f(i, &mut rng)
        })
        .collect()
}

fn uniform_word(rng: &mut ChaCha8Rng, q: u8, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..q)).collect()
}

/// Radius-1 ball counts around `trials` uniform random words.
pub fn verify_perfect_sampled(code: &dyn Code, trials: u64, seed: u64) -> VerifyReport {
    let start = Instant::now();
    let q = code.field().q();
    let n = code.len();
    let results = run_trials(trials, seed, |_, rng| {
        let mut x = uniform_word(rng, q, n);
        let c = ball1_count(code, &mut x);
        (x, c)
    });
    let mut report = VerifyReport::new(Mode::Sampled);
    report.trials = trials;
    report.set_check("perfect", true);
    for (x, c) in results {
        if c != 1 {
            report.fail("perfect", &x, format!("ball contains {c} codewords"));
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Sampled evidence for `d ≥ t` plus a witnessed pair at distance `t`.
///
/// For each of `trials` sampled codewords every word within distance
/// `t − 1` is tested; a member there is a counterexample. Passing means no
/// counterexample was found, not a proof. The distance-`t` shell of the
/// first few sampled codewords is then searched for another member.
pub fn certify_distance_sampled(code: &dyn Code, t: usize, trials: u64, seed: u64) -> VerifyReport {
    let start = Instant::now();
    let q = code.field().q();
    let results = run_trials(trials, seed, |_, rng| {
        let mut c0 = code.sample_with(rng);
        let mut close = None;
        for d in 1..t {
            let _ = for_each_at_distance(&mut c0, q, d, &mut |w| {
                if code.contains_symbols(w) {
                    close = Some((w.to_vec(), d));
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            if close.is_some() {
                break;
            }
        }
        (c0, close)
    });

    let mut report = VerifyReport::new(Mode::Sampled);
    report.trials = trials;
    let name = format!("distance_ge_{t}");
    report.set_check(&name, true);
    for (c0, close) in &results {
        if let Some((w, d)) = close {
            let mut s = String::new();
            let _ = write_symbols(&mut s, c0);
            report.fail(&name, w, format!("codeword at distance {d} from [{s}]"));
        }
    }

    let mut pair = None;
    for (c0, _) in results.iter().take(PAIR_SEARCH_CODEWORDS as usize) {
        let mut x = c0.clone();
        let _ = for_each_at_distance(&mut x, q, t, &mut |w| {
            if code.contains_symbols(w) {
                pair = Some((c0.clone(), w.to_vec()));
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if pair.is_some() {
            break;
        }
    }
    let pair_name = format!("pair_at_distance_{t}");
    match pair {
        Some((a, b)) => {
            report.set_check(&pair_name, true);
            let (mut sa, mut sb) = (String::new(), String::new());
            let _ = write_symbols(&mut sa, &a);
            let _ = write_symbols(&mut sb, &b);
            report.note(&pair_name, format!("[{sa}] [{sb}]"));
        }
        None if results.is_empty() => {}
        None => report.fail(&pair_name, &[], format!("no pair at distance {t} found")),
    }
    report.note(
        "distance_certificate",
        if report.check(&name) == Some(true) {
            "no counterexample found (sampled, not a proof)"
        } else {
            "counterexample found"
        },
    );
    report.elapsed = start.elapsed();
    report
}

/// Checks that every sampled (or, when enumerable, every) codeword sums to 0.
pub fn verify_even_like(code: &dyn Code, trials: u64, seed: u64) -> VerifyReport {
    let start = Instant::now();
    let field = code.field();
    let mut report;
    if code.cardinality().log2() <= crate::code::ENUMERATION_GUARD_LOG2 {
        report = VerifyReport::new(Mode::Exhaustive);
        report.set_check("even_like", true);
        code.for_each_codeword(&mut |w| {
            report.trials += 1;
            if field.parity(w) != 0 {
                report.fail("even_like", w, "nonzero symbol sum");
            }
        });
    } else {
        report = VerifyReport::new(Mode::Sampled);
        report.trials = trials;
        report.set_check("even_like", true);
        let words = run_trials(trials, seed, |_, rng| code.sample_with(rng));
        for w in words {
            if field.parity(&w) != 0 {
                report.fail("even_like", &w, "nonzero symbol sum");
            }
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Samples codewords and checks each is accepted by the code's own predicate.
pub fn verify_sampler(code: &dyn Code, trials: u64, seed: u64) -> VerifyReport {
    let start = Instant::now();
    let mut report = VerifyReport::new(Mode::Sampled);
    report.trials = trials;
    report.set_check("sampler_sound", true);
    let words = run_trials(trials, seed, |_, rng| {
        let w = code.sample_with(rng);
        let ok = w.len() == code.len() && code.contains_symbols(&w);
        (w, ok)
    });
    for (w, ok) in words {
        if !ok {
            report.fail("sampler_sound", &w, "sampled word rejected by predicate");
        }
    }
    report.elapsed = start.elapsed();
    report
}

/// Exact enumerated size against `q^logq_size`.
pub fn verify_size(code: &dyn Code, logq_size: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    check_enumerable("size count", code.cardinality().log2(), false)?;
    let mut count: u128 = 0;
    code.for_each_codeword(&mut |_| count += 1);
    let expected = checked_pow(code.field().q(), logq_size)
        .ok_or_else(|| Error::InvalidParameter("size exponent too large".into()))?;
    let mut report = VerifyReport::new(Mode::Exhaustive);
    report.trials = count as u64;
    report.set_check("size", true);
    report.note("codewords", count.to_string());
    if count != expected {
        report.fail("size", &[], format!("counted {count}, expected {expected}"));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `logq_size ≤ N − d + 1`.
pub fn verify_singleton(params: CodeParams) -> VerifyReport {
    let mut report = VerifyReport::new(Mode::Exhaustive);
    report.note("singleton_slack", params.singleton_slack().to_string());
    report.set_check("singleton", true);
    if !params.satisfies_singleton() {
        report.fail(
            "singleton",
            &[],
            format!("slack {} is negative", params.singleton_slack()),
        );
    }
    report
}

fn partition_hits(parts: &[&dyn Code], x: &[u8]) -> (usize, usize) {
    let mut hits = 0;
    let mut first = usize::MAX;
    for (i, p) in parts.iter().enumerate() {
        if p.contains_symbols(x) {
            hits += 1;
            first = first.min(i);
        }
    }
    (hits, first)
}

fn check_partition_shapes(parts: &[&dyn Code], ambient: &dyn Code) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::BadPartition("no parts".into()));
    }
    for p in parts {
        if p.len() != ambient.len() || p.field() != ambient.field() {
            return Err(Error::ShapeMismatch(
                "partition parts and ambient differ in length or field".into(),
            ));
        }
    }
    Ok(())
}

/// Every word of `F_q^N` must lie in exactly one part if it is in `ambient`
/// and in no part otherwise.
pub fn verify_partition(parts: &[&dyn Code], ambient: &dyn Code) -> Result<VerifyReport> {
    let start = Instant::now();
    check_partition_shapes(parts, ambient)?;
    check_enumerable("exhaustive partition audit", space_log2(ambient), false)?;
    let q = ambient.field().q();
    let n = ambient.len();
    let total = (q as u64).pow(n as u32);
    let bad: Vec<(Vec<u8>, String)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let mut x = vec![0u8; n];
            let mut out = Vec::new();
            for idx in lo..hi {
                from_dense_index(q, n, idx, &mut x);
                let inside = ambient.contains_symbols(&x);
                let (hits, _) = partition_hits(parts, &x);
                if hits != inside as usize {
                    let detail = if inside {
                        format!("ambient word lies in {hits} parts")
                    } else {
                        format!("word outside the ambient lies in {hits} parts")
                    };
                    out.push((x.clone(), detail));
                }
            }
            out
        })
        .collect();
    let mut report = VerifyReport::new(Mode::Exhaustive);
    report.trials = total;
    report.set_check("partition", true);
    for (x, detail) in bad {
        report.fail("partition", &x, detail);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Sampled partition audit: sampled ambient words must hit exactly one
/// part; sampled words of each part must hit no other part.
pub fn verify_partition_sampled(
    parts: &[&dyn Code],
    ambient: &dyn Code,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    let start = Instant::now();
    check_partition_shapes(parts, ambient)?;
    let results = run_trials(trials, seed, |i, rng| {
        let x = if i % 2 == 0 {
            ambient.sample_with(rng)
        } else {
            parts[rng.gen_range(0..parts.len())].sample_with(rng)
        };
        let inside = ambient.contains_symbols(&x);
        let (hits, _) = partition_hits(parts, &x);
        (x, inside, hits)
    });
    let mut report = VerifyReport::new(Mode::Sampled);
    report.trials = trials;
    report.set_check("partition", true);
    for (x, inside, hits) in results {
        if !inside {
            report.fail("partition", &x, "part word outside the ambient");
        } else if hits != 1 {
            report.fail("partition", &x, format!("ambient word lies in {hits} parts"));
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{ExplicitCode, LinearCode};
    use crate::field::Field;
    use crate::partition::{hamming_code, space_partition, CodePartition, PartCode};
    use std::sync::Arc;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn distance_shells_have_binomial_sizes() {
        let mut x = vec![0u8, 1, 2, 0, 1];
        let before = x.clone();
        for d in 0..=5usize {
            let mut n = 0u64;
            let _ = for_each_at_distance(&mut x, 3, d, &mut |w| {
                assert_eq!(crate::field::hamming_distance(w, &before), d);
                n += 1;
                ControlFlow::Continue(())
            });
            let binom = (0..d as u64).fold(1u64, |acc, i| acc * (5 - i) / (i + 1));
            assert_eq!(n, binom * 2u64.pow(d as u32));
        }
        assert_eq!(x, before);
    }

    #[test]
    fn ball_order_is_positions_then_symbols() {
        let mut x = vec![1u8, 0];
        let mut seen = Vec::new();
        let _ = for_each_at_distance(&mut x, 3, 1, &mut |w| {
            seen.push(w.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen, vec![vec![0, 0], vec![2, 0], vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn hamming_codes_are_perfect() {
        let h7 = hamming_code(&f(2), 3).unwrap();
        let r = verify_perfect_exhaustive(&h7).unwrap();
        assert!(r.passed(), "{}", r.render());
        assert_eq!(r.notes["sphere_packing_identity"], "16*8 = 2^7");
        let h4 = hamming_code(&f(3), 2).unwrap();
        let r = verify_perfect_exhaustive(&h4).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes["sphere_packing_identity"], "9*9 = 3^4");
    }

    #[test]
    fn even_weight_code_is_not_perfect() {
        let c = LinearCode::zero_sum(f(2), 4).unwrap();
        let r = verify_perfect_exhaustive(&c).unwrap();
        assert!(!r.passed());
        assert_eq!(r.check("sphere_packing"), Some(false));
        assert!(r.failure_count > 0);
        assert!(r.render().contains("perfect: false"));
    }

    #[test]
    fn full_space_fails_sampled_checks() {
        let full = LinearCode::full_space(f(3), 5);
        let r = verify_perfect_sampled(&full, 20, 1);
        assert_eq!(r.failure_count, 20);
        assert!(r.failures[0].detail.contains("11 codewords"));
        let d = certify_distance_sampled(&full, 3, 5, 1);
        assert_eq!(d.check("distance_ge_3"), Some(false));
    }

    #[test]
    fn sampled_agrees_with_exhaustive_on_hamming() {
        let h = hamming_code(&f(3), 3).unwrap();
        assert!(verify_perfect_exhaustive(&h).unwrap().passed());
        assert!(verify_perfect_sampled(&h, 500, 3).passed());
        let d = certify_distance_sampled(&h, 3, 50, 3);
        assert!(d.passed(), "{}", d.render());
        assert!(d.notes.contains_key("pair_at_distance_3"));
    }

    #[test]
    fn partition_audits() {
        let field = f(3);
        let part: Arc<dyn CodePartition> = Arc::new(space_partition(&field, 2).unwrap());
        let parts = PartCode::all(part);
        let refs: Vec<&dyn Code> = parts.iter().map(|p| p as &dyn Code).collect();
        let full = LinearCode::full_space(field.clone(), 4);
        let r = verify_partition(&refs, &full).unwrap();
        assert!(r.passed());
        assert_eq!(r.trials, 81);
        assert!(verify_partition_sampled(&refs, &full, 100, 0).unwrap().passed());

        let a = ExplicitCode::from_words(field.clone(), 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let b = ExplicitCode::from_words(field.clone(), 2, vec![vec![1, 1], vec![2, 2]]).unwrap();
        let amb = ExplicitCode::from_words(field, 2, vec![vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let r = verify_partition(&[&a, &b], &amb).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failures[0].word, vec![1, 1]);
    }

    #[test]
    fn reports_are_deterministic_and_skip_elapsed() {
        let h = hamming_code(&f(2), 4).unwrap();
        let a = verify_perfect_sampled(&h, 200, 9);
        let b = verify_perfect_sampled(&h, 200, 9);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(!serde_json::to_string(&a).unwrap().contains("elapsed"));
        assert_eq!(a.render(), b.render());
    }
}
