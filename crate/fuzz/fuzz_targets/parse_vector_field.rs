#![no_main]

use goursat::vfdsl::{parse_document, print_document, DocKind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_document(DocKind::VectorField, text) {
        let printed = print_document(&doc);
        let again = parse_document(DocKind::VectorField, &printed).expect("printed field reparses");
        assert_eq!(doc, again);
    }
});
