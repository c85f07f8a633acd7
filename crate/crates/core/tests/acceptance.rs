//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines are
//! always visible in `cargo test` output.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qperfect::code::{enumerate, is_mds_dist2, min_distance, Code, LinearCode, DEFAULT_PAIR_BUDGET};
use qperfect::construct::{
    lindstrom_schonheim_build, mollard_build, theorem7_build, theorem8_build, thm8_partition,
    vasilev_build, ScalarFn, SharedCode, Thm7Recipe, Thm8Recipe, VectorFn,
};
use qperfect::field::{Field, SUPPORTED_ORDERS};
use qperfect::manifest::{build, ConstructionKind, LambdaSpec, Manifest};
use qperfect::partition::{evenlike_d3_code, hamming_code, IndexMap};
use qperfect::quasigroup::{
    FamilyKind, FamilySpec, Quasigroup, QuasigroupChoice, QuasigroupFamily, DEFAULT_LATIN_BUDGET,
};
use qperfect::verify::{
    certify_distance_sampled, verify_even_like, verify_partition, verify_perfect_exhaustive,
    verify_perfect_sampled,
};

type Outcome = Result<String, String>;

fn field(q: u32) -> Field {
    Field::new(q).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Hamming codes q ∈ {2,3,4} with s = 2 and q ∈ {2,3} with s = 3.
fn c1_hamming() -> Outcome {
    let cases = [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)];
    let mut parts = Vec::new();
    for (q, s) in cases {
        let h = hamming_code(&field(q), s).map_err(err)?;
        let r = verify_perfect_exhaustive(&h).map_err(err)?;
        ensure(r.passed(), format!("q={q} s={s}: {}", r.render()))?;
        let n = h.len() as u128;
        let size = (q as u128).pow(h.dimension() as u32);
        ensure(
            size * (n * (q as u128 - 1) + 1) == (q as u128).pow(n as u32),
            format!("q={q} s={s}: sphere-packing identity"),
        )?;
        parts.push(format!("q={q},s={s}:{}", r.notes["sphere_packing_identity"]));
    }
    Ok(parts.join("; "))
}

fn c2_thm7_binary() -> Outcome {
    let recipe = Thm7Recipe::standard(&field(2), 2, 2, FamilySpec::default()).map_err(err)?;
    let code = theorem7_build(&recipe).map_err(err)?;
    ensure(code.len() == 15, format!("length {}", code.len()))?;
    let e = enumerate(&code, false).map_err(err)?;
    ensure(e.size() == 2048, format!("size {}", e.size()))?;
    let r = verify_perfect_exhaustive(&code).map_err(err)?;
    ensure(r.passed(), r.render())?;
    let d = min_distance(&e, DEFAULT_PAIR_BUDGET).map_err(err)?;
    ensure(d == 3, format!("min distance {d}"))?;
    Ok(format!("N=15, |D|={}, perfect over 2^15, d={d}", e.size()))
}

fn c3_thm7_ternary() -> Outcome {
    let recipe = Thm7Recipe::standard(&field(3), 2, 2, FamilySpec::default()).map_err(err)?;
    let code = theorem7_build(&recipe).map_err(err)?;
    ensure(code.len() == 40 && code.logq_size() == 36, "parameters")?;
    let p = verify_perfect_sampled(&code, 10_000, 0);
    ensure(p.passed(), p.render())?;
    let d = certify_distance_sampled(&code, 3, 1_000, 0);
    ensure(d.passed(), d.render())?;
    ensure(d.check("pair_at_distance_3") == Some(true), "no distance-3 pair")?;
    Ok(format!(
        "10^4 balls: {} failures; 10^3 codewords: no pair closer than 3; pair at distance 3 found",
        p.failure_count
    ))
}

fn c4_thm8_binary() -> Outcome {
    let recipe = Thm8Recipe::standard(&field(2), 2, 2, FamilySpec::default()).map_err(err)?;
    let code = theorem8_build(&recipe).map_err(err)?;
    ensure(code.len() == 16, "length")?;
    let e = enumerate(&code, false).map_err(err)?;
    ensure(e.size() == 2048, format!("size {}", e.size()))?;
    let d = min_distance(&e, DEFAULT_PAIR_BUDGET).map_err(err)?;
    ensure(d == 4, format!("min distance {d}"))?;
    let odd = e.words().filter(|w| w.iter().filter(|&&s| s == 1).count() % 2 == 1).count();
    ensure(odd == 0, format!("{odd} odd-weight words"))?;
    Ok(format!("N=16, |D|=2048, d={d}, all even weight"))
}

fn c5_thm8_ternary() -> Outcome {
    let recipe = Thm8Recipe::standard(&field(3), 2, 2, FamilySpec::default()).map_err(err)?;
    let code = theorem8_build(&recipe).map_err(err)?;
    ensure(code.len() == 81, "length")?;
    ensure(code.logq_size() == 81 - 4 - 1 && code.logq_size() == 76, "logq_size")?;
    let ev = verify_even_like(&code, 10_000, 0);
    ensure(ev.passed() && ev.trials == 10_000, ev.render())?;
    let d = certify_distance_sampled(&code, 3, 1_000, 0);
    ensure(d.passed(), d.render())?;
    Ok("N=81, logq_size=76, 10^4/10^4 even-like, distance-3 certificate clean".into())
}

fn c6_thm8_partition() -> Outcome {
    let f2 = field(2);
    let recipe = Thm8Recipe::standard(&f2, 2, 2, FamilySpec::default()).map_err(err)?;
    let codes = thm8_partition(&recipe, None).map_err(err)?;
    ensure(codes.len() == 16, format!("{} codes", codes.len()))?;
    for c in &codes {
        let e = enumerate(c, false).map_err(err)?;
        ensure(e.size() == 2048, format!("{}: {} words", c.description(), e.size()))?;
    }
    let ambient = LinearCode::zero_sum(f2, 16).map_err(err)?;
    let parts: Vec<&dyn Code> = codes.iter().map(|c| c as &dyn Code).collect();
    let r = verify_partition(&parts, &ambient).map_err(err)?;
    ensure(r.passed() && r.trials == 1 << 16, r.render())?;
    Ok("16 x 2048 words, disjoint, union = even-weight code (2^16 words audited)".into())
}

fn c7_baselines() -> Outcome {
    let h7: SharedCode = Arc::new(hamming_code(&field(2), 3).map_err(err)?);
    let lambda = ScalarFn::random(h7.as_ref(), 7).map_err(err)?;
    ensure(lambda.eval(&[0; 7]) == 0, "λ(0) != 0")?;
    let v = vasilev_build(h7.clone(), lambda).map_err(err)?;
    let rv = verify_perfect_exhaustive(&v).map_err(err)?;
    ensure(v.len() == 15 && rv.passed(), format!("vasilev: {}", rv.render()))?;

    let h4: SharedCode = Arc::new(hamming_code(&field(3), 2).map_err(err)?);
    let ls = lindstrom_schonheim_build(h4, ScalarFn::Zero).map_err(err)?;
    let rl = verify_perfect_exhaustive(&ls).map_err(err)?;
    ensure(ls.len() == 13 && rl.passed(), format!("lindstrom-schonheim: {}", rl.render()))?;

    let h3: SharedCode = Arc::new(hamming_code(&field(2), 2).map_err(err)?);
    let mo = mollard_build(h3.clone(), h3, VectorFn::Zero { len: 3 }).map_err(err)?;
    let rm = verify_perfect_exhaustive(&mo).map_err(err)?;
    ensure(mo.len() == 15 && rm.passed(), format!("mollard: {}", rm.render()))?;
    Ok("Vasil'ev N=15 (random λ), Lindström–Schönheim N=13, Mollard N=15 all perfect".into())
}

fn c8_quasigroups() -> Outcome {
    let mut audited = 0usize;
    let mut audit = |g: &Quasigroup, what: String| -> Result<(), String> {
        let total = (g.order() as u64).checked_pow(g.arity() as u32);
        if total.is_some_and(|t| t <= DEFAULT_LATIN_BUDGET) {
            let r = g.check(DEFAULT_LATIN_BUDGET, 0);
            ensure(r.exhaustive && r.passed(), format!("{what}: {:?}", r.witness))?;
            audited += 1;
        }
        Ok(())
    };
    for &q in &SUPPORTED_ORDERS {
        let f = field(q as u32);
        for s in 1..=3 {
            for arity in 1..=4 {
                let map = IndexMap::new(f.q(), s);
                if (map.size() as u64).pow(arity as u32) > DEFAULT_LATIN_BUDGET {
                    continue;
                }
                let offset = map.vector(map.size() - 1);
                let g = Quasigroup::modular(arity, &f, s, &offset).map_err(err)?;
                audit(&g, format!("modular q={q} s={s} m={arity}"))?;
                let iso = Quasigroup::isotope(arity, map.size(), 7).map_err(err)?;
                audit(&iso, format!("isotope order={} m={arity}", map.size()))?;
                let table = Quasigroup::from_table(arity, g.order(), g.to_table().map_err(err)?)
                    .map_err(err)?;
                audit(&table, format!("table q={q} s={s} m={arity}"))?;
            }
        }
    }
    for order in [6, 10, 12] {
        let g = Quasigroup::cyclic(3, order, 1).map_err(err)?;
        audit(&g, format!("cyclic order={order}"))?;
        let iso = Quasigroup::isotope(3, order, 3).map_err(err)?;
        audit(&iso, format!("isotope order={order}"))?;
    }
    let f3 = field(3);
    let keys = hamming_code(&f3, 2).map_err(err)?;
    for kind in [QuasigroupChoice::Modular, QuasigroupChoice::Isotope] {
        let spec = FamilySpec {
            kind,
            family: FamilyKind::Keyed,
            seed: 5,
        };
        let fam = QuasigroupFamily::new(&f3, 2, 4, &keys, spec).map_err(err)?;
        let mut words = Vec::new();
        keys.for_each_codeword(&mut |w| words.push(w.to_vec()));
        for r in &words {
            audit(&fam.get(r), format!("keyed {kind:?} member"))?;
        }
    }

    let base = Quasigroup::modular(2, &f3, 1, &[0]).map_err(err)?;
    let mut table = base.to_table().map_err(err)?;
    table[1] = table[0];
    let bad = Quasigroup::from_table(2, 3, table).map_err(err)?;
    let r = bad.check(DEFAULT_LATIN_BUDGET, 0);
    let witness = r.witness.ok_or("corrupted table passed the audit")?;
    Ok(format!("{audited} quasigroups Latin; corrupted table: {witness}"))
}

fn c9_singleton() -> Outcome {
    let cases: Vec<(ConstructionKind, u32, usize, Option<usize>)> = vec![
        (ConstructionKind::Thm7, 2, 2, Some(2)),
        (ConstructionKind::Thm7, 3, 2, Some(2)),
        (ConstructionKind::Thm7, 4, 2, Some(2)),
        (ConstructionKind::Thm8, 2, 2, Some(2)),
        (ConstructionKind::Thm8, 3, 2, Some(2)),
        (ConstructionKind::Thm8, 5, 1, Some(1)),
        (ConstructionKind::Thm8Partition, 2, 2, Some(2)),
        (ConstructionKind::Vasilev, 2, 3, None),
        (ConstructionKind::LindstromSchonheim, 3, 2, None),
        (ConstructionKind::Mollard, 2, 2, Some(2)),
        (ConstructionKind::Mollard, 3, 2, Some(2)),
        (ConstructionKind::Hamming, 7, 2, None),
        (ConstructionKind::EvenlikeD3, 9, 2, None),
    ];
    for (kind, q, s1, s2) in &cases {
        let (m, built) = Manifest::create(*kind, *q, *s1, *s2, FamilySpec::default(), LambdaSpec::default())
            .map_err(err)?;
        let p = built.params();
        ensure(
            p.satisfies_singleton(),
            format!("{kind} q={q}: slack {}", p.singleton_slack()),
        )?;
        ensure(m.derived.logq_size + m.derived.claimed_distance as u64 <= m.derived.length as u64 + 1, "slack")?;
    }
    for &q in &SUPPORTED_ORDERS {
        let f = field(q as u32);
        for n in 2..=6 {
            let z = LinearCode::zero_sum(f.clone(), n).map_err(err)?;
            ensure(is_mds_dist2(&z), format!("zero-sum q={q} n={n} not MDS"))?;
        }
        for s in 1..=2 {
            let c = evenlike_d3_code(&f, s).map_err(err)?;
            let expected = (q as usize).pow(s as u32) - s - 1;
            ensure(
                c.dimension() == expected,
                format!("evenlike q={q} s={s}: dim {}", c.dimension()),
            )?;
        }
    }
    Ok(format!(
        "{} constructions within the Singleton bound; zero-sum codes MDS; distance-3 dimensions exact",
        cases.len()
    ))
}

fn c10_determinism() -> Outcome {
    let (m, _) = Manifest::create(
        ConstructionKind::Thm7,
        3,
        2,
        Some(2),
        FamilySpec {
            kind: QuasigroupChoice::Isotope,
            family: FamilyKind::Keyed,
            seed: 11,
        },
        LambdaSpec::default(),
    )
    .map_err(err)?;
    let json = m.to_json();
    let run = |threads: usize| -> Result<String, String> {
        let built = build(&Manifest::from_json(&json).map_err(err)?).map_err(err)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(err)?;
        Ok(pool.install(|| {
            let mut r = verify_perfect_sampled(built.code.as_ref(), 2_000, 99);
            r.merge(certify_distance_sampled(built.code.as_ref(), 3, 100, 99));
            format!("{}{}", serde_json::to_string(&r).unwrap(), r.render())
        }))
    };
    let a = run(1)?;
    let b = run(4)?;
    let c = run(1)?;
    ensure(a == b && a == c, "reports differ between runs")?;
    Ok(format!("3 runs (1, 4, 1 threads) byte-identical, {} bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Duration, fn() -> Outcome)> = vec![
        ("1 Hamming perfectness", Duration::from_secs(10), c1_hamming),
        ("2 concatenated perfect code q=2", Duration::from_secs(30), c2_thm7_binary),
        ("3 concatenated perfect code q=3 (sampled)", Duration::from_secs(60), c3_thm7_ternary),
        ("4 even-like code q=2", Duration::from_secs(30), c4_thm8_binary),
        ("5 even-like code q=3 (sampled)", Duration::from_secs(60), c5_thm8_ternary),
        ("6 partition of the even-weight code", Duration::from_secs(60), c6_thm8_partition),
        ("7 baseline constructions", Duration::from_secs(60), c7_baselines),
        ("8 quasigroup audits", Duration::from_secs(60), c8_quasigroups),
        ("9 Singleton audit", Duration::from_secs(60), c9_singleton),
        ("10 determinism", Duration::from_secs(60), c10_determinism),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!(
                "{msg} (took {:.1}s, budget {}s)",
                elapsed.as_secs_f64(),
                budget.as_secs()
            )),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  criterion {name} [{:.2}s]: {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name} [{:.2}s]: {msg}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
