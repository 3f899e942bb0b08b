use quadpair::suites::{run_suite, SuiteParams};

#[test]
fn smoke_fast_suites() {
    let params = SuiteParams { seed: 7, samples: 30, max_total: 5, size_guard: 8 };
    for name in ["abelian", "axioms", "monoidal", "clifford-K", "clifford-L", "hg"] {
        let t = std::time::Instant::now();
        let rep = run_suite(name, &params).unwrap();
        println!("{name}: pass={} in {:?} ({} checks)", rep.pass, t.elapsed(), rep.checks.len());
        for c in rep.checks.iter().filter(|c| !c.pass) {
            println!("   FAIL {}: {}", c.name, c.detail);
        }
        assert!(rep.pass, "{name} failed");
    }
}

#[test]
fn smoke_tracks_sign() {
    let params = SuiteParams { seed: 7, samples: 10, max_total: 4, size_guard: 8 };
    for name in ["tracks", "sign", "group-ring"] {
        let t = std::time::Instant::now();
        let rep = run_suite(name, &params).unwrap();
        println!("{name}: pass={} in {:?} ({} checks)", rep.pass, t.elapsed(), rep.checks.len());
        for c in rep.checks.iter().filter(|c| !c.pass) {
            println!("   FAIL {}: {}", c.name, c.detail);
        }
        assert!(rep.pass, "{name} failed");
    }
}

#[test]
fn smoke_prop37_small() {
    // the full (3,3) enumeration runs in the acceptance suite; smoke-test the setup
    let params = SuiteParams { seed: 7, samples: 60, max_total: 4, size_guard: 8 };
    let t = std::time::Instant::now();
    let rep = run_suite("prop-3-7", &params).unwrap();
    println!("prop-3-7: pass={} in {:?}", rep.pass, t.elapsed());
    for c in rep.checks.iter().filter(|c| !c.pass) {
        println!("   FAIL {}: {}", c.name, c.detail);
    }
    assert!(rep.pass);
}
