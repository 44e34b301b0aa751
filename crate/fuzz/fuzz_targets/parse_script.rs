#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = formats::parse_script(text) {
        assert_eq!(formats::parse_script(&formats::write_script(&x)).unwrap(), x);
    }
    if let Ok(c) = formats::parse_chain(text) {
        assert_eq!(formats::parse_chain(&formats::write_chain(&c)).unwrap(), c);
    }
});
