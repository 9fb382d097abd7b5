#![no_main]

use libfuzzer_sys::fuzz_target;
use superw::rational::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(text) {
        let again = parse_rational(&format_rational(&q)).expect("printed rationals parse");
        assert_eq!(q, again);
    }
});
