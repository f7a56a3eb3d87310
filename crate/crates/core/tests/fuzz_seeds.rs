//! Replays the checked-in fuzz corpus through the parsers with the same
//! assertions as the fuzz targets.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nmds_core::parse::{format_matrix, parse_curve, parse_matrix, parse_point};
use nmds_core::Field;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut paths: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds in {}", dir.display());
    paths.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn matrix_file_seeds() {
    let mut parsed = 0;
    for data in seeds("matrix_file") {
        let Ok(file) = parse_matrix(std::str::from_utf8(&data).unwrap()) else {
            continue;
        };
        parsed += 1;
        if let Ok(code) = file.to_code() {
            let again = parse_matrix(&format_matrix(&code)).unwrap();
            assert_eq!((again.q, again.k, again.n), (file.q, file.k, file.n));
        }
    }
    assert!(parsed > 0);
}

#[test]
fn curve_literal_seeds() {
    let fields: Vec<Arc<Field>> = [7, 9, 25]
        .map(|q| Arc::new(Field::of_order(q).unwrap()))
        .to_vec();
    let mut parsed = 0;
    for data in seeds("curve_literal") {
        let (&selector, rest) = data.split_first().unwrap();
        let field = &fields[selector as usize % fields.len()];
        if let Ok(curve) = parse_curve(field, std::str::from_utf8(rest).unwrap()) {
            assert_eq!(curve.points().len(), curve.n());
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn point_literal_seeds() {
    let field = Field::of_order(27).unwrap();
    let mut parsed = 0;
    for data in seeds("point_literal") {
        let (&dim, rest) = data.split_first().unwrap();
        let dim = 1 + dim as usize % 6;
        if let Ok(p) = parse_point(&field, std::str::from_utf8(rest).unwrap(), dim) {
            assert_eq!(p.dim(), dim);
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}
