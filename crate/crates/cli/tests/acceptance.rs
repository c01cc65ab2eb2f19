//! Acceptance criteria. Prints one line per criterion; run with
//! `cargo test -p wstar-cli --test acceptance -- --nocapture` to see them.

use std::process::Command;
use std::time::Instant;

use wstar_cli::suites::{self, CheckFn};
use wstar_cli::Config;
use wstar_core::rat::pow2_neg;

struct Criterion {
    id: &'static str,
    limit_secs: u64,
    /// Size parameters the run must report, so a shrunken run cannot pass.
    expect: &'static [(&'static str, i64)],
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: "kernel_ell_1", limit_secs: 5, expect: &[("samples", 100)] },
    Criterion { id: "discrete_e_i_s", limit_secs: 1, expect: &[] },
    Criterion { id: "unit_sphere", limit_secs: 5, expect: &[("samples", 50)] },
    Criterion { id: "no_loss_grid", limit_secs: 60, expect: &[("sets", 100), ("grid_points", 4913)] },
    Criterion { id: "metric_inequalities", limit_secs: 2, expect: &[("pairs", 1000)] },
    Criterion { id: "split_chain_laws", limit_secs: 10, expect: &[("chains", 100)] },
    Criterion { id: "t0_triviality", limit_secs: 30, expect: &[("posets", 24), ("unique_t0", 24)] },
    Criterion { id: "adjunction_oracle", limit_secs: 30, expect: &[("lattices", 5), ("cases", 288)] },
    Criterion { id: "box_robust_oracle", limit_secs: 30, expect: &[("per_metric", 50)] },
];

const VERIFY_ALL_LIMIT_SECS: u64 = 180;

fn lookup(id: &str) -> CheckFn {
    suites::CRITERIA.iter().find(|(name, _)| *name == id).map(|(_, f)| *f).expect("criterion check exists")
}

#[test]
fn acceptance() {
    let cfg = Config::default();
    assert_eq!(cfg.tol, pow2_neg(40));
    assert_eq!(cfg.delta_min, pow2_neg(10));
    assert_eq!(cfg.n_max, 8);
    println!("tolerances: tol = 2^-40, delta_min = 2^-10, n_max = 8, seed = {}", cfg.seed);

    let mut failed = Vec::new();
    for (k, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let result = lookup(c.id)(&cfg);
        let secs = start.elapsed().as_secs_f64();
        let (pass, note) = match result {
            Ok(check) => {
                let sizes_ok = c.expect.iter().all(|(key, v)| check.detail[*key] == *v);
                let note = match (&check.counterexample, sizes_ok) {
                    (Some(ce), _) => ce.clone(),
                    (None, false) => format!("unexpected sizes in {}", check.detail),
                    (None, true) => check.detail.to_string(),
                };
                (check.pass && sizes_ok && secs < c.limit_secs as f64, note)
            }
            Err(e) => (false, e.to_string()),
        };
        println!(
            "criterion {} ({}): {} [{secs:.2}s < {}s] {note}",
            k + 1,
            c.id,
            if pass { "pass" } else { "FAIL" },
            c.limit_secs
        );
        if !pass {
            failed.push(k + 1);
        }
    }

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_wstar")).args(["verify", "all"]).output().expect("binary runs");
    let secs = start.elapsed().as_secs_f64();
    let text = String::from_utf8_lossy(&out.stdout);
    let pass = out.status.code() == Some(0) && secs < VERIFY_ALL_LIMIT_SECS as f64;
    println!(
        "criterion 10 (verify_all): {} [{secs:.2}s < {VERIFY_ALL_LIMIT_SECS}s] exit {:?}, {}",
        if pass { "pass" } else { "FAIL" },
        out.status.code(),
        text.lines().last().unwrap_or("")
    );
    if !pass {
        failed.push(10);
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
