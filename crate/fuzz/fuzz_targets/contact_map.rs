#![no_main]

use goursat::contact::ContactMap3;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = ContactMap3::parse(text) {
        let again = ContactMap3::parse(&m.to_text()).expect("printed map reparses");
        assert_eq!(again.phi, m.phi);
    }
});
