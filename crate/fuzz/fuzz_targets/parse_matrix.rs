#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // exercise the section scanner on raw bytes: must never panic
    let Ok(src) = std::str::from_utf8(data) else { return };
    let _ = quadpair::object_format::parse_sections(src);
});
