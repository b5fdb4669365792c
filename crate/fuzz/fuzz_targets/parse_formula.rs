#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(phi) = inqlab::parse(text) {
        let printed = phi.to_string();
        assert_eq!(inqlab::parse(&printed).as_ref(), Ok(&phi), "{printed}");
    }
});
