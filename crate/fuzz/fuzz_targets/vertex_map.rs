#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(m) = io::parse_vertex_map(text, 8, 8) {
            assert!(m.len() == 8 && m.iter().all(|&y| y < 8));
        }
    }
});
