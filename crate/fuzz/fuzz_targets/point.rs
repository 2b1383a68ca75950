#![no_main]

use goursat::vfdsl::{parse_point, print_point};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_point(text) {
        assert_eq!(parse_point(&print_point(&p)).expect("printed point reparses"), p);
    }
});
