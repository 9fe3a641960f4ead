#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = io::parse_relation(text, None) {
            let u = &r.entourage;
            for (x, y) in u.pairs() {
                assert!(u.contains(y, x));
            }
        }
    }
});
