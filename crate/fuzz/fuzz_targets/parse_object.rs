#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    // parsing must be total: errors carry positions, panics are bugs
    if let Ok(obj) = quadpair::object_format::ObjectFile::parse(src) {
        // canonical print must be a fixed point of parse ∘ print
        let secs = quadpair::object_format::parse_sections(src).expect("sections reparse");
        let printed = obj.print(&secs);
        let reparsed = quadpair::object_format::ObjectFile::parse(&printed)
            .expect("canonical output reparses");
        let secs2 = quadpair::object_format::parse_sections(&printed).unwrap();
        assert_eq!(printed, reparsed.print(&secs2), "canonical print is stable");
    }
});
