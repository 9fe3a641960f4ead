#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(c) = io::parse_points_csv(text) {
            assert!(c.len() > 0);
            assert!(c.diameter().is_finite());
        }
    }
});
