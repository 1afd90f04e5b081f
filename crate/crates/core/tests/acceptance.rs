//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! measured runtime against its limit, and fails if any criterion fails.

use eqdescent::action::ProjectiveAction;
use eqdescent::cli::report_json;
use eqdescent::eqsheaf::{
    check_bundle_descent, check_star, sandwich_check, CheckConfig, EquivariantComplex, SandwichError,
    SandwichVerdict, TwistedSummand,
};
use eqdescent::fm::{apply_word, inverse_word};
use eqdescent::group::char_scale;
use eqdescent::random::{
    random_action, random_complex, random_exact_trivial_triple, random_nonexact_triple, random_summand,
    random_word,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sign_action.json");

fn eqdescent(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqdescent")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let code = out.status.code().unwrap();
    (code, report_json(&stdout).unwrap_or(Value::Null))
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = out.ok && in_time;
    println!(
        "criterion {n} [{}] {name}: {} ({:.2} s, limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn supports_with_order(report: &Value, order: u64) -> Vec<Vec<u64>> {
    report["result"]["strata"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["stabilizer_order"].as_u64() == Some(order))
        .map(|s| s["support"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect())
        .collect()
}

fn stabilizer_table() -> Outcome {
    let (code, r) = eqdescent(&["strata", FIXTURE]);
    let mut z2 = supports_with_order(&r, 2);
    z2.sort();
    let trivial = supports_with_order(&r, 1);
    let expected: Vec<Vec<u64>> = vec![vec![0], vec![0, 1], vec![1], vec![2]];
    let total = r["result"]["strata"].as_array().map_or(0, Vec::len);
    let ok = code == 0 && z2 == expected && trivial.len() == 3 && total == 7;
    Outcome { ok, detail: format!("Z/2 on {z2:?}, trivial on {} of {total} strata", trivial.len()) }
}

fn parity() -> Outcome {
    let mut bad = Vec::new();
    for d in -4..=4 {
        let (code, r) = eqdescent(&["check-descent", FIXTURE, "--complex", &format!("O({d})")]);
        let witnesses = r["result"]["report"]["witnesses"].as_array().cloned().unwrap_or_default();
        let allowed = [vec![2], vec![0], vec![1], vec![0, 1]];
        let placed = witnesses.iter().all(|w| {
            let s: Vec<u64> = w["support"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
            allowed.contains(&s)
        });
        let expected = if d % 2 == 0 { 0 } else { 1 };
        if code != expected || (d % 2 != 0 && (witnesses.is_empty() || !placed)) {
            bad.push(d);
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("pass iff d even for d in -4..=4; mismatches {bad:?}") }
}

fn omega_examples() -> Outcome {
    let (c1, r1) = eqdescent(&["omega", FIXTURE, "--word", "twist1"]);
    let cond_i = &r1["result"]["report"]["condition_i"];
    let witness_ok = cond_i["witnesses"]
        .as_array()
        .is_some_and(|w| w.iter().any(|w| w["point"] == serde_json::json!(["0", "0", "1"]) && w["character"] == serde_json::json!([1])));
    let (c2, _) = eqdescent(&["omega", FIXTURE, "--word", "twist2"]);
    let (c3, _) = eqdescent(&["omega", FIXTURE, "--word", "shift1"]);
    let (c4, _) = eqdescent(&["omega", FIXTURE, "--word", "shift3"]);
    let ok = c1 == 1 && witness_ok && c2 == 0 && c3 == 0 && c4 == 0;
    Outcome {
        ok,
        detail: format!(
            "Twist O(1) exit {c1} (witness at (0:0:1): {witness_ok}), Twist O(2) exit {c2}, Shift 1 exit {c3}, Shift 3 exit {c4}"
        ),
    }
}

fn order_power() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2025);
    let mut failures = 0;
    let mut base_failures = 0;
    for _ in 0..50 {
        let act = random_action(&mut rng);
        let s = random_summand(&act, &mut rng);
        let n = act.group().order() as i64;
        let power = TwistedSummand::new(n * s.degree, char_scale(act.group(), &s.twist, n));
        if !check_bundle_descent(&s, &act).unwrap().passed() {
            base_failures += 1;
        }
        if !check_bundle_descent(&power, &act).unwrap().passed() {
            failures += 1;
        }
    }
    Outcome {
        ok: failures == 0,
        detail: format!("50 cases, {failures} failures ({base_failures} of the base summands do not descend)"),
    }
}

fn oracle() -> Outcome {
    let (code, r) = eqdescent(&["selftest-oracle", "--trials", "100", "--seed", "7"]);
    let res = &r["result"];
    let mismatches = res["mismatches"].as_array().map_or(usize::MAX, Vec::len);
    Outcome {
        ok: code == 0 && mismatches == 0,
        detail: format!("100 trials, {} points compared, {mismatches} mismatches", res["points_compared"]),
    }
}

fn sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut exact_pass = 0;
    for _ in 0..100 {
        let t = random_exact_trivial_triple(&mut rng);
        if sandwich_check(&t.v1, &t.v2, &t.v3, &t.a, &t.b) == Ok(SandwichVerdict::Pass) {
            exact_pass += 1;
        }
    }
    let mut flagged = 0;
    for _ in 0..20 {
        let t = random_nonexact_triple(&mut rng);
        if matches!(sandwich_check(&t.v1, &t.v2, &t.v3, &t.a, &t.b), Err(SandwichError::NotExact { .. })) {
            flagged += 1;
        }
    }
    Outcome {
        ok: exact_pass == 100 && flagged == 20,
        detail: format!("{exact_pass}/100 exact triples pass, {flagged}/20 non-exact triples reported as hypothesis failures"),
    }
}

fn report_bytes(c: &EquivariantComplex) -> String {
    serde_json::to_string(&check_star(c, &[], &CheckConfig::default()).unwrap()).unwrap()
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut restored = 0;
    let mut identical = 0;
    for _ in 0..50 {
        let act: ProjectiveAction = random_action(&mut rng);
        let c = random_complex(&act, &mut rng);
        let (w, _) = random_word(&act, 5, &mut rng);
        let back = apply_word(&inverse_word(&w), &apply_word(&w, &c).unwrap()).unwrap();
        if back.normalized() == c.normalized() {
            restored += 1;
        }
        if report_bytes(&back) == report_bytes(&c) {
            identical += 1;
        }
    }
    Outcome {
        ok: restored == 50 && identical == 50,
        detail: format!("{restored}/50 complexes restored, {identical}/50 reports byte-identical"),
    }
}

#[test]
fn acceptance() {
    let results = [
        criterion(1, "stabilizer table", Duration::from_secs(1), stabilizer_table),
        criterion(2, "P(1,1,2) parity", Duration::from_secs(1), parity),
        criterion(3, "omega examples", Duration::from_secs(2), omega_examples),
        criterion(4, "order-power descent", Duration::from_secs(30), order_power),
        criterion(5, "oracle equivalence", Duration::from_secs(300), oracle),
        criterion(6, "sandwich property", Duration::from_secs(30), sandwich),
        criterion(7, "word round trip", Duration::from_secs(60), round_trip),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
