#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use nmds_core::parse::parse_point;
use nmds_core::Field;

fn field() -> &'static Field {
    static FIELD: OnceLock<Field> = OnceLock::new();
    FIELD.get_or_init(|| Field::of_order(27).unwrap())
}

fuzz_target!(|data: &[u8]| {
    let Some((&dim, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let dim = 1 + dim as usize % 6;
    if let Ok(p) = parse_point(field(), text, dim) {
        assert_eq!(p.dim(), dim);
        assert!(p.coords().iter().any(|c| !c.is_zero()));
    }
});
