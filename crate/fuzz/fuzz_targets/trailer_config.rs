#![no_main]

use goursat::trailer::{delta_trailer, TrailerConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = text.parse::<TrailerConfig>() {
        if c.trailers() <= 12 {
            let _ = delta_trailer(&c);
        }
    }
});
