#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = text.parse::<uvh_core::homology::Ring>() {
            assert_eq!(r.to_string().parse::<uvh_core::homology::Ring>().ok(), Some(r));
        }
    }
});
