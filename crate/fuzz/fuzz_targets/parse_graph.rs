#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = slater_core::io::parse_graph(text) {
        let canonical = slater_core::io::serialize_graph(&g);
        let again = slater_core::io::parse_graph(&canonical).expect("canonical reparses");
        assert_eq!(g, again);
    }
});
