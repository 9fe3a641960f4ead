#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = io::parse_distance_matrix(text) {
            for i in 0..c.len() {
                assert_eq!(c.distance(i, i), 0.0);
            }
        }
    }
});
