#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(b) = formats::parse_bramble(text) {
        assert_eq!(formats::parse_bramble(&formats::write_bramble(&b)).unwrap(), b);
    }
});
