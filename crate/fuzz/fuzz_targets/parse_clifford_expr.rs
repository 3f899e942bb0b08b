#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if src.len() > 256 {
        return;
    }
    if let Ok(el) = quadpair::clifford::parse_clifford_expr(src, None) {
        // exact arithmetic sanity on whatever parses
        let sum = el.add(&el.neg());
        assert!(sum.is_zero());
    }
});
