#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = formats::parse_witness_file(text) {
        assert_eq!(formats::parse_witness_file(&formats::write_witness_file(&w)).unwrap(), w);
    }
});
