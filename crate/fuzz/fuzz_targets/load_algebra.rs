#![no_main]

use libfuzzer_sys::fuzz_target;
use superw::wslice::{load_algebra, parse_algebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_algebra(text) {
        let _ = g.validate();
        let _ = g.jacobi_violations();
    }
    if let Ok(g) = load_algebra(text) {
        let again = load_algebra(&g.to_json()).expect("serialized documents reload");
        assert_eq!(g, again);
    }
});
