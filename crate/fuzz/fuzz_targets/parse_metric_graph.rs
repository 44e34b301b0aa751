#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = formats::parse_metric_graph(text) {
        assert_eq!(formats::parse_metric_graph(&formats::write_metric_graph(&g)).unwrap(), g);
    }
});
