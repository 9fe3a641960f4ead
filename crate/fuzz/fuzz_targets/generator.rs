#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(g) = text.parse::<uvh_core::generate::GeneratorSpec>() {
            assert_eq!(g.to_string().parse::<uvh_core::generate::GeneratorSpec>().ok(), Some(g));
        }
    }
});
