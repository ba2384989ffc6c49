#![no_main]

use libfuzzer_sys::fuzz_target;

// Parsing must never panic, and anything accepted must survive a
// serialize/parse round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = slater_core::io::parse_tournament(text) {
        let canonical = slater_core::io::serialize_tournament(&t);
        let again = slater_core::io::parse_tournament(&canonical).expect("canonical reparses");
        assert_eq!(t, again);
    }
});
