//! Runs every fuzz-target body over the checked-in corpus seeds, so the
//! corpus is exercised by `cargo test` without the fuzzing toolchain.

use std::path::Path;

fn corpus(dir: &str) -> Vec<Vec<u8>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(dir);
    let mut out = Vec::new();
    for entry in std::fs::read_dir(&root).unwrap_or_else(|_| panic!("corpus dir {root:?}")) {
        let entry = entry.unwrap();
        out.push(std::fs::read(entry.path()).unwrap());
    }
    assert!(!out.is_empty(), "corpus {dir} must have seeds");
    out
}

#[test]
fn parse_object_corpus() {
    for data in corpus("parse_object") {
        let Ok(src) = std::str::from_utf8(&data) else { continue };
        if let Ok(obj) = quadpair::object_format::ObjectFile::parse(src) {
            let secs = quadpair::object_format::parse_sections(src).unwrap();
            let printed = obj.print(&secs);
            let reparsed = quadpair::object_format::ObjectFile::parse(&printed).unwrap();
            let secs2 = quadpair::object_format::parse_sections(&printed).unwrap();
            assert_eq!(printed, reparsed.print(&secs2));
        }
    }
}

#[test]
fn parse_word_corpus() {
    let basis = quadpair::nil2::PointedSet::new(vec!["a", "b", "c"]);
    for data in corpus("parse_word") {
        let Ok(src) = std::str::from_utf8(&data) else { continue };
        if let Ok(word) = quadpair::object_format::parse_word(src) {
            if let Ok(x) = word.eval(&basis) {
                assert!(x.mul(&x.inv()).is_zero());
            }
        }
    }
}

#[test]
fn parse_clifford_expr_corpus() {
    for data in corpus("parse_clifford_expr") {
        let Ok(src) = std::str::from_utf8(&data) else { continue };
        if let Ok(el) = quadpair::clifford::parse_clifford_expr(src, None) {
            assert!(el.add(&el.neg()).is_zero());
        }
    }
}

#[test]
fn parse_sections_corpus() {
    for data in corpus("parse_matrix") {
        let Ok(src) = std::str::from_utf8(&data) else { continue };
        let _ = quadpair::object_format::parse_sections(src);
    }
}
