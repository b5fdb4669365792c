#![no_main]

use inqlab::io::{decode_algebra, encode_algebra};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = decode_algebra(text) {
        let again = decode_algebra(&encode_algebra(&a)).expect("encoded algebras decode");
        assert_eq!(again, a);
    }
});
