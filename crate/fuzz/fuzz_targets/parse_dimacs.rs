#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = slater_core::io::parse_dimacs(text) {
        let canonical =
            slater_core::io::serialize_dimacs(&file.cnf, file.dvar, file.sides.as_deref());
        let again = slater_core::io::parse_dimacs(&canonical).expect("canonical reparses");
        assert_eq!(file, again);
    }
});
