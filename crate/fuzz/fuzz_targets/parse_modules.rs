#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mp) = slater_core::io::parse_modules(text) {
        let canonical = slater_core::io::serialize_modules(&mp);
        let again = slater_core::io::parse_modules(&canonical).expect("canonical reparses");
        assert_eq!(mp, again);
    }
});
