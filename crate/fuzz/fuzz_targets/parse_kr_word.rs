#![no_main]

use goursat::vfdsl::{parse_kr_word, print_kr_word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_kr_word(text) {
        assert_eq!(parse_kr_word(&print_kr_word(&w)).expect("printed word reparses"), w);
    }
});
