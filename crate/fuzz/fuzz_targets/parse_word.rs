#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(word) = quadpair::object_format::parse_word(src) {
        // evaluating over a fixed basis must not panic on unknown names
        let basis = quadpair::nil2::PointedSet::new(vec!["a", "b", "c"]);
        if let Ok(x) = word.eval(&basis) {
            // group laws stay consistent on whatever parses
            assert!(x.mul(&x.inv()).is_zero());
        }
    }
});
