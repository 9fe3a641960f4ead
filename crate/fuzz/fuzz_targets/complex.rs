#![no_main]

use libfuzzer_sys::fuzz_target;
use uvh_core::io;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cx) = io::parse_complex(text, None, 3) {
            let again = io::parse_complex(&io::export_complex(&cx), Some(cx.vertex_count()), 3).expect("exported complex parses");
            assert_eq!(again, cx);
        }
    }
});
