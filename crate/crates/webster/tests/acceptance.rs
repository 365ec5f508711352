//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach the output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};
use webster::suites::{basis, run_suite, Env};
use webster::verify;

const SEED: u64 = 20240601;

type Criterion = (&'static str, fn() -> Outcome, u64);

struct Outcome {
    pass: bool,
    note: String,
}

fn env(n: usize, p: u64, window: u32, corpus: usize) -> Env {
    Env::new(n, p, window, SEED, corpus)
}

fn suites(cases: &[(usize, u64)], window: u32, corpus: usize, name: &str) -> Outcome {
    let mut failed = Vec::new();
    for &(n, p) in cases {
        let r = run_suite(&env(n, p, window, corpus), name);
        if !r.passed() {
            failed.push(format!("n={n} p={p}: {}", r.summary));
        }
    }
    Outcome { pass: failed.is_empty(), note: if failed.is_empty() { format!("{} configurations", cases.len()) } else { failed.join("; ") } }
}

fn c1() -> Outcome {
    suites(&[(2, 3), (2, 5), (3, 3), (3, 5)], 8, 0, "relations")
}

fn c2() -> Outcome {
    suites(&[(2, 3), (2, 5), (3, 3)], 8, 1000, "differential")
}

fn c3() -> Outcome {
    let mut bad = Vec::new();
    for n in [2, 3] {
        let r = basis(&env(n, 3, 10, 0), 10, 8);
        if !r.passed() {
            bad.push(format!("n={n}"));
        }
    }
    Outcome { pass: bad.is_empty(), note: if bad.is_empty() { "algebra d<=10, bimodules d<=8".into() } else { bad.join(", ") } }
}

fn c4() -> Outcome {
    suites(&[(2, 3), (3, 3)], 8, 0, "homs")
}

fn c5() -> Outcome {
    suites(&[(2, 3), (3, 3)], 8, 0, "bb")
}

fn c6() -> Outcome {
    suites(&[(3, 3)], 8, 0, "ses")
}

fn c7() -> Outcome {
    let mut reps = Vec::new();
    for n in [2, 3] {
        let e = env(n, 3, 8, 0);
        for i in 1..n {
            for pf in [false, true] {
                reps.push(verify::verify_inverse(&e.ctx, i, pf, 8));
            }
        }
    }
    let e4 = env(4, 3, 8, 0);
    reps.push(verify::verify_far_comm(&e4.ctx, 1, 3, 8));
    let e3 = env(3, 3, 6, 0);
    reps.push(verify::verify_braid_relation(&e3.ctx, 1, 6));
    let failed: Vec<String> = reps.iter().filter(|r| !r.pass).map(|r| format!("{}: {:?}", r.relation, r.failure)).collect();
    Outcome { pass: failed.is_empty(), note: if failed.is_empty() { format!("{} relations", reps.len()) } else { failed.join("; ") } }
}

fn c8() -> Outcome {
    let e = env(2, 3, 6, 0);
    let mut failed = Vec::new();
    for pf in [false, true] {
        let name = if pf { "T1' T1 ~ Id" } else { "T1 T1' ~ Id" };
        match verify::inverse_equivalence(&e.ctx, 1, pf) {
            Ok((_, eq)) => {
                let r = verify::p_extend_certificate(&e.ctx, name, &eq, 3, 6);
                if !r.pass {
                    failed.push(format!("{name}: {:?}", r.failure));
                }
            }
            Err(m) => failed.push(m),
        }
    }
    Outcome { pass: failed.is_empty(), note: if failed.is_empty() { "both orders, p=3".into() } else { failed.join("; ") } }
}

fn c9() -> Outcome {
    let e = env(2, 3, 6, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    match verify::verify_p_extend(&e.ctx, 3, 25, &mut rng) {
        Ok(r) => Outcome { pass: r.pass, note: format!("{} of {} null-homotopic maps preserved", r.preserved, r.null_homotopic_maps) },
        Err(m) => Outcome { pass: false, note: m },
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("relation suite", c1, 60),
        ("p-differential suite", c2, 120),
        ("basis suite", c3, 300),
        ("homomorphism suite", c4, 120),
        ("BB = B + B", c5, 180),
        ("short exact sequence", c6, 180),
        ("braid certification", c7, 600),
        ("p-extended certificates", c8, 600),
        ("p-extension functor", c9, 120),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut all = true;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let pass = o.pass && el <= Duration::from_secs(*limit);
        all &= pass;
        println!(
            "criterion {}: {} {name} ({:.2}s, limit {limit}s): {}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            el.as_secs_f64(),
            o.note
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
