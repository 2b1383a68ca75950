#![no_main]

use goursat::vfdsl::{parse_document, print_document, DocKind, DslDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_document(DocKind::TrigExpr, text) {
        let printed = print_document(&doc);
        let again = parse_document(DocKind::TrigExpr, &printed).expect("printed expression reparses");
        if let (DslDocument::TrigExpr { dim, expr }, DslDocument::TrigExpr { expr: back, .. }) = (&doc, &again) {
            let x: Vec<f64> = (0..*dim).map(|k| 0.1 + 0.07 * k as f64).collect();
            let (a, b) = (expr.eval(&x), back.eval(&x));
            assert!(a.is_nan() || b.is_nan() || (a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }
});
