#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        for s in [io::parse_ladder_spec(text), io::parse_scales(text)].into_iter().flatten() {
            assert!(s.windows(2).all(|w| w[1] < w[0]));
            assert!(s.iter().all(|&x| x > 0.0));
        }
    }
});
