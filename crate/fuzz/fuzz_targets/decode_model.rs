#![no_main]

use inqlab::io::{decode_frame, decode_model, encode_model};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = decode_frame(text);
    if let Ok(m) = decode_model(text) {
        let again = decode_model(&encode_model(&m)).expect("encoded models decode");
        assert_eq!(again, m);
    }
});
