//! Text formats: generator matrix files, curve literals and point literals.
//!
//! Matrix file: a header line `q k n`, then `k` lines of `n` element encodings
//! separated by whitespace. Blank lines are ignored.
//!
//! Curve literal: `a1,a2,a3,a4,a5`. Point literal: `inf`, affine `x,y`, or
//! homogeneous `c1:c2:…:cm`. Element tokens are canonical encodings; a leading
//! `-` takes the additive inverse.

use std::sync::Arc;

use crate::code::LinearCode;
use crate::curve::EllipticCurve;
use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::gf::{Elem, Field};

/// A parsed matrix file; encodings are not yet checked against the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<u64>>,
}

fn parse_int<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| {
        Error::Parse(format!(
            "{what}: expected a non-negative integer, got {token:?}"
        ))
    })
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [q, k, n] = fields[..] else {
        return Err(Error::Parse(format!(
            "header must be \"q k n\", got {header:?}"
        )));
    };
    let (q, k, n): (u64, usize, usize) =
        (parse_int(q, "q")?, parse_int(k, "k")?, parse_int(n, "n")?);
    if k == 0 || n == 0 {
        return Err(Error::Parse("k and n must be positive".into()));
    }
    let mut rows = Vec::new();
    for line in lines {
        if rows.len() == k {
            return Err(Error::Parse(format!("more than k = {k} rows")));
        }
        let row: Vec<u64> = line
            .split_whitespace()
            .map(|t| parse_int(t, "entry"))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected n = {n}",
                rows.len() + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::Parse(format!(
            "found {} rows, expected k = {k}",
            rows.len()
        )));
    }
    Ok(MatrixFile { q, k, n, rows })
}

impl MatrixFile {
    /// The field of order `q` and the code spanned by the rows.
    pub fn to_code(&self) -> Result<LinearCode> {
        let field = Arc::new(Field::of_order(self.q)?);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| field.elem(v))
                    .collect::<Result<Vec<Elem>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LinearCode::new(field, rows)
    }
}

/// The matrix file holding a code's generator matrix.
pub fn format_matrix(code: &LinearCode) -> String {
    let mut out = format!("{} {} {}\n", code.field().q(), code.k(), code.n());
    for row in code.generator() {
        let tokens: Vec<String> = row.iter().map(|v| v.encoding().to_string()).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_elem(field: &Field, token: &str) -> Result<Elem> {
    let token = token.trim();
    let (negate, digits) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!(
            "expected an element encoding, got {token:?}"
        )));
    }
    let v: u64 = parse_int(digits, "element")?;
    let e = field.elem(v)?;
    Ok(if negate { field.neg(e) } else { e })
}

/// The five coefficients of a curve literal.
pub fn parse_coeffs(field: &Field, s: &str) -> Result<[Elem; 5]> {
    let tokens: Vec<&str> = s.split(',').collect();
    if tokens.len() != 5 {
        return Err(Error::Parse(format!(
            "curve literal needs 5 comma-separated coefficients, got {}",
            tokens.len()
        )));
    }
    let mut out = [Elem::ZERO; 5];
    for (slot, t) in out.iter_mut().zip(tokens) {
        *slot = parse_elem(field, t)?;
    }
    Ok(out)
}

pub fn parse_curve(field: &Arc<Field>, s: &str) -> Result<EllipticCurve> {
    EllipticCurve::new(field.clone(), parse_coeffs(field, s)?)
}

/// A point literal in `P^{dim-1}`: `inf` (only for `dim = 3`), affine `x,y`
/// (only for `dim = 3`) or homogeneous `c1:…:c_dim`.
pub fn parse_point(field: &Field, s: &str, dim: usize) -> Result<ProjPoint> {
    let s = s.trim();
    let coords: Vec<Elem> = if s.eq_ignore_ascii_case("inf") {
        vec![Elem::ZERO, Elem::ZERO, Elem::ONE]
    } else if s.contains(':') {
        s.split(':')
            .map(|t| parse_elem(field, t))
            .collect::<Result<_>>()?
    } else {
        let xy: Vec<Elem> = s
            .split(',')
            .map(|t| parse_elem(field, t))
            .collect::<Result<_>>()?;
        if xy.len() != 2 {
            return Err(Error::Parse(format!(
                "affine point needs two coordinates x,y, got {s:?}"
            )));
        }
        vec![Elem::ONE, xy[0], xy[1]]
    };
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coords.len(),
        });
    }
    ProjPoint::new(field, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64, r: u32) -> Arc<Field> {
        Arc::new(Field::new(p, r).unwrap())
    }

    #[test]
    fn matrix_file_round_trip() {
        let text = "5 2 4\n1 0 1 2\n0 1 3 4\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!((m.q, m.k, m.n), (5, 2, 4));
        let code = m.to_code().unwrap();
        assert_eq!(format_matrix(&code), text);
    }

    #[test]
    fn matrix_file_errors() {
        assert!(matches!(parse_matrix(""), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix("5 2"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_matrix("5 2 3\n1 2 3\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_matrix("5 1 3\n1 2\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_matrix("5 1 3\n1 2 x\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_matrix("5 1 2\n1 7\n").unwrap().to_code(),
            Err(Error::FieldMismatch { encoding: 7, q: 5 })
        ));
        assert!(matches!(
            parse_matrix("6 1 2\n1 1\n").unwrap().to_code(),
            Err(Error::NotPrimePower(6))
        ));
    }

    #[test]
    fn curve_literal() {
        let field = f(5, 1);
        let c = parse_curve(&field, "0,0,0,0,1").unwrap();
        assert_eq!(c.n(), 6);
        let neg = parse_coeffs(&field, "0, 0, 0, -1, -0").unwrap();
        assert_eq!(neg[3], field.from_i64(-1));
        assert!(matches!(
            parse_coeffs(&field, "0,0,0,1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_coeffs(&field, "0,0,0,1,9"),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(matches!(
            parse_coeffs(&field, "0,0,0,1,+1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_curve(&field, "0,0,0,0,0"),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn point_literal() {
        let field = f(3, 2);
        let one = Elem::ONE;
        assert_eq!(
            parse_point(&field, "inf", 3).unwrap().coords(),
            &[Elem::ZERO, Elem::ZERO, one]
        );
        assert_eq!(
            parse_point(&field, "4,8", 3).unwrap().coords(),
            &[one, field.elem(4).unwrap(), field.elem(8).unwrap()]
        );
        let p = parse_point(&field, "0:2:4:0", 4).unwrap();
        assert_eq!(p.coords()[1], one);
        assert!(matches!(
            parse_point(&field, "0:0:0", 3),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            parse_point(&field, "1:2", 3),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(parse_point(&field, "1", 3), Err(Error::Parse(_))));
    }

    proptest! {
        #[test]
        fn elem_tokens_round_trip(v in 0u32..121, neg in any::<bool>()) {
            let field = f(11, 2);
            let e = field.elem(v as u64).unwrap();
            let token = if neg { format!("-{v}") } else { v.to_string() };
            let want = if neg { field.neg(e) } else { e };
            prop_assert_eq!(parse_elem(&field, &token).unwrap(), want);
        }

        #[test]
        fn parsers_never_panic(s in ".{0,40}") {
            let field = f(7, 1);
            let _ = parse_matrix(&s).map(|m| m.to_code());
            let _ = parse_curve(&field, &s);
            let _ = parse_point(&field, &s, 3);
        }
    }
}
