//! The acceptance suite: every exit criterion runs at its stated tolerance
//! (exact equalities, pinned sample counts, pinned runtime bounds) and
//! prints one pass/fail line. `cargo test --test acceptance` must pass.

use quadpair::report::Report;
use quadpair::suites::{run_suite, SuiteParams};

fn run(criterion: &str, suite: &str, params: &SuiteParams) -> Report {
    let rep = run_suite(suite, params).expect("suite runs");
    println!(
        "{} criterion {criterion} [{suite}]: {} checks, {} ms",
        if rep.pass { "PASS" } else { "FAIL" },
        rep.checks.len(),
        rep.elapsed_ms
    );
    for c in rep.checks.iter().filter(|c| !c.pass) {
        println!("    failing check {}: {}", c.name, c.detail);
    }
    rep
}

#[test]
fn criterion_01_lemma_k_replay() {
    // exact rational equality of the Õ(2) chains, runtime < 1 s
    let params = SuiteParams { seed: 0, samples: 0, max_total: 0, size_guard: 48 };
    let rep = run("1 (K replay)", "clifford-K", &params);
    assert!(rep.pass);
    assert!(rep.elapsed_ms < 1000, "runtime {} ms", rep.elapsed_ms);
}

#[test]
fn criterion_02_lemma_l_replay() {
    // all n,m >= 1 with n+m <= 8, exact in C₊(n+m); identities (a),(b),(c)
    // for i < j <= 8; runtime < 10 s
    let params = SuiteParams { seed: 0, samples: 0, max_total: 8, size_guard: 48 };
    let rep = run("2 (L replay)", "clifford-L", &params);
    assert!(rep.pass);
    assert!(rep.elapsed_ms < 10_000, "runtime {} ms", rep.elapsed_ms);
}

#[test]
fn criterion_03_hg_seeds_and_axioms() {
    // K(ν,ν) = 1 and L(ν,ν) = 0 agreeing with the pin replays, plus the Hg
    // laws on >= 200 seeded morphism pairs with zero counterexamples
    let params = SuiteParams { seed: 7, samples: 200, max_total: 8, size_guard: 48 };
    let rep = run("3 (Hg)", "hg", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_04_smash_isomorphism() {
    // all pointed sets with <= 3 non-base elements each: square-group
    // isomorphism, bijective on normal forms of word length <= 4,
    // homomorphism on 500 seeded pairs
    let params = SuiteParams { seed: 11, samples: 500, max_total: 4, size_guard: 48 };
    let rep = run("4 (smash isomorphism)", "prop-3-7", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_05_axiom_suites() {
    // every corpus instance passes the square-group / qpm axioms
    let params = SuiteParams { seed: 0, samples: 0, max_total: 0, size_guard: 48 };
    let rep = run("5 (axioms)", "axioms", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_06_monoidal_laws() {
    // unit isomorphisms both sides, τ∘τ = id, and |Φ(0→Z_nil)₁| = 2
    let params = SuiteParams { seed: 0, samples: 0, max_total: 0, size_guard: 48 };
    let rep = run("6 (monoidal)", "monoidal", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_07_08_tracks_and_cylinder() {
    // cylinder round trips on >= 50 seeded tracks; vertical composition
    // laws, interchange, and τ(α⊙β) = (β⊙α)τ
    let params = SuiteParams { seed: 3, samples: 30, max_total: 0, size_guard: 48 };
    let rep = run("7+8 (tracks)", "tracks", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_09_sign_groups() {
    // twisted orders 2|G||L|, group-ring monoidality for product order <= 48,
    // action-module round trip exact, ω-formula, symmetric track group orders
    let params = SuiteParams { seed: 5, samples: 0, max_total: 0, size_guard: 48 };
    let rep = run("9a (sign)", "sign", &params);
    assert!(rep.pass);
    let rep = run("9b (group-ring)", "group-ring", &params);
    assert!(rep.pass);
}

#[test]
fn criterion_10_abelian_substrate() {
    // SNF identities on 1000 random matrices up to 6x6 with entries in
    // [-9, 9]; exactness on 200 random presentations with <= 4 generators
    let params = SuiteParams { seed: 13, samples: 0, max_total: 0, size_guard: 48 };
    let rep = run("10 (abelian)", "abelian", &params);
    assert!(rep.pass);
}
