#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = formats::parse_point_divisor(text) {
        assert_eq!(formats::parse_point_divisor(&formats::write_point_divisor(&d)).unwrap(), d);
    }
});
