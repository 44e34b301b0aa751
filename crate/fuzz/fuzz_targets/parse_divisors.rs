#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ds) = formats::parse_divisors(text) {
        assert_eq!(formats::parse_divisors(&formats::write_divisors(&ds)).unwrap(), ds);
    }
    let _ = formats::parse_divisor(text);
});
