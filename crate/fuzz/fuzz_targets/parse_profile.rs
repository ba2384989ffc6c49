#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = slater_core::io::parse_profile(text) {
        let canonical = slater_core::io::serialize_profile(&p);
        let again = slater_core::io::parse_profile(&canonical).expect("canonical reparses");
        assert_eq!(p, again);
    }
});
