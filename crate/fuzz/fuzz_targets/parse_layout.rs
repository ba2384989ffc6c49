#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(layout) = slater_core::io::parse_layout(text) {
        let canonical = slater_core::io::serialize_layout(&layout);
        let again = slater_core::io::parse_layout(&canonical).expect("canonical reparses");
        assert_eq!(layout, again);
    }
});
