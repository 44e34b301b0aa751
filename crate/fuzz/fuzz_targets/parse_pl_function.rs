#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = formats::parse_pl_function(text) {
        assert_eq!(formats::parse_pl_function(&formats::write_pl_function(&f)).unwrap(), f);
    }
});
