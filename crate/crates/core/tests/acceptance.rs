//! Acceptance criteria, one line each. Every comparison is exact.
//!
//! Runs without the libtest harness so the report is always printed:
//! `cargo test -p psi-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use psi_core::arith::{factorial, parse_rational};
use psi_core::genus::{thm11_step_at, thm12_step};
use psi_core::key::enumerate_keys;
use psi_core::npoint::NPointEngine;
use psi_core::rules::genus0_eval;
use psi_core::verify::{IdentityId, Verifier};
use psi_core::{canonicalize, evaluate, CacheStore, CorrelatorKey, Evaluator, Rational, Strategy};

type Outcome = Result<String, String>;

fn key(g: u32, d: &[u32]) -> CorrelatorKey {
    canonicalize(g, d).unwrap()
}

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn stable_keys(g_max: u32, n_max: usize) -> Vec<CorrelatorKey> {
    (0..=g_max).flat_map(|g| (1..=n_max).flat_map(move |n| enumerate_keys(g, n))).collect()
}

fn anchors() -> Outcome {
    let anchors = [
        (key(0, &[0, 0, 0]), "1"),
        (key(1, &[1]), "1/24"),
        (key(2, &[4]), "1/1152"),
        (key(2, &[1, 4]), "1/384"),
        (key(2, &[2, 3]), "29/5760"),
    ];
    for strategy in Strategy::ALL {
        let cache = CacheStore::new();
        for (k, want) in &anchors {
            let got = evaluate(strategy, k, &cache).map_err(|e| e.to_string())?;
            if got != q(want) {
                return Err(format!("{strategy}: {k} = {got}, expected {want}"));
            }
        }
    }
    Ok(format!("{} anchors x {} strategies", anchors.len(), Strategy::ALL.len()))
}

fn one_point_law() -> Outcome {
    for strategy in [Strategy::Dvv, Strategy::Genus] {
        let cache = CacheStore::new();
        for g in 1..=6u32 {
            let k = key(g, &[3 * g - 2]);
            let v = evaluate(strategy, &k, &cache).map_err(|e| e.to_string())?;
            let scaled = v * Rational::from_integer(BigInt::from(24).pow(g) * factorial(g as u64));
            if !scaled.is_one() {
                return Err(format!("{strategy}: {k} * 24^g g! = {scaled}"));
            }
        }
    }
    Ok("g = 1..6 under dvv and genus".into())
}

fn cross_strategy() -> Outcome {
    let keys = stable_keys(3, 4);
    let caches: Vec<CacheStore> = Strategy::ALL.iter().map(|_| CacheStore::new()).collect();
    let evaluators: Vec<Evaluator> =
        Strategy::ALL.iter().zip(&caches).map(|(s, c)| Evaluator::new(*s, c)).collect();
    for k in &keys {
        let values: Vec<Rational> =
            evaluators.iter().map(|e| e.eval(k)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        if values.iter().any(|v| v != &values[0]) {
            let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            return Err(format!("{k}: {}", shown.join(" / ")));
        }
    }
    Ok(format!("{} keys, g <= 3, n <= 4", keys.len()))
}

/// Reduces a genus-0 correlator to `<t0^3>_0 = 1` by the string equation
/// alone. In genus 0 the index sum is `n - 3`, so a zero index always exists.
fn string_oracle(d: &[u32]) -> Rational {
    if d.len() == 3 {
        return if d.iter().all(|&x| x == 0) { Rational::one() } else { Rational::zero() };
    }
    let zero = d.iter().position(|&x| x == 0).expect("genus-0 key has a zero index");
    let rest: Vec<u32> = d.iter().enumerate().filter(|&(i, _)| i != zero).map(|(_, &x)| x).collect();
    let mut total = Rational::zero();
    for i in 0..rest.len() {
        if rest[i] > 0 {
            let mut lowered = rest.clone();
            lowered[i] -= 1;
            total += string_oracle(&lowered);
        }
    }
    total
}

fn genus_zero() -> Outcome {
    let cache = CacheStore::new();
    let mut count = 0;
    for n in 3..=7 {
        for k in enumerate_keys(0, n) {
            let closed = genus0_eval(&k).map_err(|e| e.to_string())?;
            let oracle = string_oracle(k.indices());
            let dvv = evaluate(Strategy::Dvv, &k, &cache).map_err(|e| e.to_string())?;
            if closed != oracle || closed != dvv {
                return Err(format!("{k}: closed {closed}, string {oracle}, dvv {dvv}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} keys, n <= 7"))
}

fn identity_suites() -> Outcome {
    let verifier = Verifier::new();
    let mut total = 0;
    for id in IdentityId::ALL {
        let (g_max, n_max) = if id.is_correlator_level() { (3, 3) } else { (3, 2) };
        let report = verifier.run(id, g_max, n_max).map_err(|e| e.to_string())?;
        if let Some(f) = report.failures.first() {
            return Err(format!("{id}: {} failures, first {} lhs {} rhs {}", report.failures.len(), f.instance, f.lhs, f.rhs));
        }
        total += report.instances_checked;
    }
    Ok(format!("six suites, {total} instances, zero failures"))
}

fn two_point() -> Outcome {
    let engine = NPointEngine::new();
    let cache = CacheStore::new();
    let mut count = 0;
    for g in 1..=5 {
        for k in enumerate_keys(g, 2) {
            let extracted = engine.coefficient(&k).map_err(|e| e.to_string())?;
            let dvv = evaluate(Strategy::Dvv, &k, &cache).map_err(|e| e.to_string())?;
            if extracted != dvv {
                return Err(format!("{k}: extracted {extracted}, dvv {dvv}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} two-point keys, g <= 5"))
}

fn genus_descent() -> Outcome {
    let mut terms = 0;
    for k in stable_keys(3, 4) {
        if k.genus() == 0 || k.contains(0) {
            continue;
        }
        let g = k.genus();
        let emitted: Vec<_> = (0..k.n()).map(|pos| thm11_step_at(&k, pos)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for combo in emitted {
            for term in combo.keys() {
                terms += 1;
                if term.genus() >= g {
                    return Err(format!("{k}: emitted {term}"));
                }
            }
        }
    }
    for g in 1..=3 {
        for n in 1..=4 {
            for body in enumerate_keys(g, n + 1).iter().filter_map(|k| k.indices().strip_suffix(&[0])) {
                if body.contains(&0) {
                    continue;
                }
                for term in thm12_step(g, body).map_err(|e| e.to_string())?.keys() {
                    terms += 1;
                    if term.genus() >= g {
                        return Err(format!("body {body:?} at genus {g}: emitted {term}"));
                    }
                }
            }
        }
    }
    Ok(format!("{terms} emitted terms, all of lower genus"))
}

fn table_and_cache() -> Outcome {
    let cache = CacheStore::new();
    let evaluator = Evaluator::new(Strategy::Genus, &cache);
    let mut rows = 0;
    for n in 1..=5 {
        for k in enumerate_keys(4, n) {
            evaluator.eval(&k).map_err(|e| e.to_string())?;
            rows += 1;
        }
    }
    let mut first = Vec::new();
    cache.write_to(&mut first).map_err(|e| e.to_string())?;
    let reloaded = CacheStore::read_from(first.as_slice()).map_err(|e| e.to_string())?;
    let mut second = Vec::new();
    reloaded.write_to(&mut second).map_err(|e| e.to_string())?;
    if first != second {
        return Err("re-exported cache differs".into());
    }
    Ok(format!("{rows} keys at g = 4, {} cached entries, round trip byte-identical", cache.len()))
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Duration, Check); 8] = [
        ("anchor values via every strategy", Duration::from_secs(1), anchors),
        ("one-point law", Duration::from_secs(10), one_point_law),
        ("cross-strategy agreement", Duration::from_secs(120), cross_strategy),
        ("genus-0 closed form", Duration::from_secs(10), genus_zero),
        ("identity suites", Duration::from_secs(120), identity_suites),
        ("two-point extraction", Duration::from_secs(30), two_point),
        ("strict genus descent", Duration::MAX, genus_descent),
        ("g = 4 table and cache round trip", Duration::from_secs(60), table_and_cache),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:.0?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
