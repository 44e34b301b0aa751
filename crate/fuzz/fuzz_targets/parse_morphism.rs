#![no_main]

use divgon::formats;
use libfuzzer_sys::fuzz_target;

// Input: source graph, `---`, target graph, `---`, morphism JSON.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let parts: Vec<&str> = text.splitn(3, "\n---\n").collect();
    let [s, t, m] = parts.as_slice() else { return };
    let (Ok(source), Ok(target)) = (formats::parse_graph(s), formats::parse_graph(t)) else { return };
    if let Ok(psi) = formats::parse_morphism(&source, &target, m) {
        let again = formats::parse_morphism(&source, &target, &formats::write_morphism(&psi)).unwrap();
        assert_eq!(again, psi);
    }
});
