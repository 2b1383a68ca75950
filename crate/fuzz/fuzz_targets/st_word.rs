#![no_main]

use goursat::vfdsl::{parse_st_word, print_st_word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = parse_st_word(text) {
        assert_eq!(parse_st_word(&print_st_word(&w)).expect("printed word reparses"), w);
        let _ = w.is_jacquard();
    }
});
