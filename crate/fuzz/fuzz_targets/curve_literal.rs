#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;
use nmds_core::parse::parse_curve;
use nmds_core::Field;

fn fields() -> &'static [Arc<Field>] {
    static FIELDS: OnceLock<Vec<Arc<Field>>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        [7, 9, 25]
            .map(|q| Arc::new(Field::of_order(q).unwrap()))
            .to_vec()
    })
}

fuzz_target!(|data: &[u8]| {
    let Some((&selector, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let fields = fields();
    let field = &fields[selector as usize % fields.len()];
    if let Ok(curve) = parse_curve(field, text) {
        assert!(curve.points().len() == curve.n());
    }
});
