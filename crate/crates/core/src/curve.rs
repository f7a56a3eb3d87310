//! Plane elliptic curves `f(X,Y) = Y^2 + a1 XY + a2 Y - X^3 - a3 X^2 - a4 X - a5`.
//!
//! Coefficients follow that sign convention. In conventional long Weierstrass
//! labels `y^2 + A1 xy + A3 y = x^3 + A2 x^2 + A4 x + A6` this is
//! `(A1, A2, A3, A4, A6) = (a1, a3, a2, a4, a5)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

pub const DEFAULT_SCAN_LIMIT: u64 = 169;

/// An `F_q`-rational point. Affine points `(x, y)` are the projective points
/// `(1, x, y)`; the point at infinity is `(0, 0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Affine { x: Elem, y: Elem },
    Infinity,
}

impl CurvePoint {
    pub fn affine(x: Elem, y: Elem) -> Self {
        CurvePoint::Affine { x, y }
    }

    /// Homogeneous coordinates in `P^2`.
    pub fn coords(&self) -> [Elem; 3] {
        match *self {
            CurvePoint::Affine { x, y } => [Elem::ONE, x, y],
            CurvePoint::Infinity => [Elem::ZERO, Elem::ZERO, Elem::ONE],
        }
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CurvePoint::Affine { x, y } => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(x)?;
                seq.serialize_element(y)?;
                seq.end()
            }
            CurvePoint::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EllipticCurve {
    field: Arc<Field>,
    coeffs: [Elem; 5],
    points: Vec<CurvePoint>,
    j: Elem,
}

impl PartialEq for EllipticCurve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

/// Hypothesis data read off a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveSummary {
    pub coefficients: [Elem; 5],
    pub n: usize,
    pub j: Elem,
    pub j_is_zero: bool,
    pub n_is_even: bool,
    pub r_is_even: bool,
    pub p_mod3: u32,
}

/// JSON form `{"q", "coeffs", "n", "j", "points"}`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub q: u32,
    pub coeffs: [Elem; 5],
    pub n: usize,
    pub j: Elem,
    pub points: Vec<CurvePoint>,
}

struct Invariants {
    b2: Elem,
    b4: Elem,
    delta: Elem,
}

fn invariants(f: &Field, c: &[Elem; 5]) -> Invariants {
    let [a1, a3c, a2c, a4, a6] = [c[0], c[1], c[2], c[3], c[4]];
    let k = |v| f.from_i64(v);
    let m = |a, b| f.mul(a, b);
    let b2 = f.add(m(a1, a1), m(k(4), a2c));
    let b4 = f.add(m(k(2), a4), m(a1, a3c));
    let b6 = f.add(m(a3c, a3c), m(k(4), a6));
    // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
    let b8 = [
        m(m(a1, a1), a6),
        m(k(4), m(a2c, a6)),
        f.neg(m(a1, m(a3c, a4))),
        m(a2c, m(a3c, a3c)),
        f.neg(m(a4, a4)),
    ]
    .into_iter()
    .fold(Elem::ZERO, |acc, t| f.add(acc, t));
    // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    let delta = [
        f.neg(m(m(b2, b2), b8)),
        f.neg(m(k(8), m(b4, m(b4, b4)))),
        f.neg(m(k(27), m(b6, b6))),
        m(k(9), m(b2, m(b4, b6))),
    ]
    .into_iter()
    .fold(Elem::ZERO, |acc, t| f.add(acc, t));
    Invariants { b2, b4, delta }
}

fn cubic_rhs(f: &Field, c: &[Elem; 5], x: Elem) -> Elem {
    // x^3 + a3 x^2 + a4 x + a5 by Horner
    let mut v = f.add(x, c[2]);
    v = f.add(f.mul(v, x), c[3]);
    f.add(f.mul(v, x), c[4])
}

impl EllipticCurve {
    pub fn new(field: Arc<Field>, coeffs: [Elem; 5]) -> Result<Self> {
        if !field.is_odd() {
            return Err(Error::EvenCharacteristic);
        }
        for c in coeffs {
            field.elem(c.encoding() as u64)?;
        }
        let inv = invariants(&field, &coeffs);
        if inv.delta.is_zero() {
            return Err(Error::Singular);
        }
        let c4 = field.sub(field.square(inv.b2), field.mul(field.from_i64(24), inv.b4));
        let j = field.mul(field.pow(c4, 3), field.recip(inv.delta).expect("nonzero"));
        let points = enumerate_points(&field, &coeffs);
        let curve = EllipticCurve {
            field,
            coeffs,
            points,
            j,
        };
        let q = curve.field.q() as i64;
        let t = curve.n() as i64 - q - 1;
        assert!(
            t * t <= 4 * q,
            "Hasse bound violated for {:?}",
            curve.coeffs
        );
        Ok(curve)
    }

    /// `y^2 = x^3 + a x^2 + b x + c`.
    pub fn short(field: Arc<Field>, a: Elem, b: Elem, c: Elem) -> Result<Self> {
        EllipticCurve::new(field, [Elem::ZERO, Elem::ZERO, a, b, c])
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> [Elem; 5] {
        self.coeffs
    }

    /// Rational points, affine ones sorted by `(x, y)` encoding, `P∞` last.
    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn j_invariant(&self) -> Elem {
        self.j
    }

    pub fn discriminant(&self) -> Elem {
        invariants(&self.field, &self.coeffs).delta
    }

    /// `f(x, y)`.
    pub fn eval(&self, x: Elem, y: Elem) -> Elem {
        let f = &*self.field;
        let c = &self.coeffs;
        let lin = f.add(f.mul(c[0], x), c[1]);
        let lhs = f.mul(f.add(y, lin), y);
        f.sub(lhs, cubic_rhs(f, c, x))
    }

    pub fn contains_affine(&self, x: Elem, y: Elem) -> bool {
        self.eval(x, y).is_zero()
    }

    /// Membership of a homogeneous point `(X1, X2, X3)` in the projective closure.
    pub fn contains(&self, p: &[Elem; 3]) -> bool {
        let f = &*self.field;
        if p[0].is_zero() {
            // Only (0, 0, 1) survives at infinity.
            return p[1].is_zero() && !p[2].is_zero();
        }
        let inv = f.recip(p[0]).expect("nonzero");
        self.contains_affine(f.mul(p[1], inv), f.mul(p[2], inv))
    }

    /// The canonical form `Y^2 = X^3 + aX^2 + bX + c` obtained by
    /// `Y -> Y - (a1 X + a2)/2`; x-coordinates are unchanged.
    pub fn short_form(&self) -> (Elem, Elem, Elem) {
        let f = &*self.field;
        let [a1, a2, a3, a4, a5] = self.coeffs;
        let half = f.recip(f.from_i64(2)).expect("odd characteristic");
        let quarter = f.square(half);
        (
            f.add(a3, f.mul(f.square(a1), quarter)),
            f.add(a4, f.mul(f.mul(a1, a2), half)),
            f.add(a5, f.mul(f.square(a2), quarter)),
        )
    }

    pub fn to_short_form(&self) -> EllipticCurve {
        let (a, b, c) = self.short_form();
        EllipticCurve::short(self.field.clone(), a, b, c).expect("isomorphic curve is nonsingular")
    }

    pub fn is_short(&self) -> bool {
        self.coeffs[0].is_zero() && self.coeffs[1].is_zero()
    }

    pub fn summary(&self) -> CurveSummary {
        CurveSummary {
            coefficients: self.coeffs,
            n: self.n(),
            j: self.j,
            j_is_zero: self.j.is_zero(),
            n_is_even: self.n().is_multiple_of(2),
            r_is_even: self.field.r().is_multiple_of(2),
            p_mod3: self.field.p() % 3,
        }
    }

    pub fn report(&self) -> CurveReport {
        CurveReport {
            q: self.field.q(),
            coeffs: self.coeffs,
            n: self.n(),
            j: self.j,
            points: self.points.clone(),
        }
    }
}

fn enumerate_points(f: &Field, c: &[Elem; 5]) -> Vec<CurvePoint> {
    let half = f.recip(f.from_i64(2)).expect("odd characteristic");
    let four = f.from_i64(4);
    let mut pts = Vec::with_capacity(f.q() as usize + 2);
    for x in f.elements() {
        // y^2 + B y - C = 0
        let b = f.add(f.mul(c[0], x), c[1]);
        let cc = cubic_rhs(f, c, x);
        let disc = f.add(f.square(b), f.mul(four, cc));
        if let Some(s) = f.sqrt(disc) {
            let nb = f.neg(b);
            let y1 = f.mul(f.add(nb, s), half);
            let y2 = f.mul(f.sub(nb, s), half);
            pts.push(CurvePoint::affine(x, y1.min(y2)));
            if y1 != y2 {
                pts.push(CurvePoint::affine(x, y1.max(y2)));
            }
        }
    }
    pts.push(CurvePoint::Infinity);
    pts
}

/// Waterhouse's maximum number of rational points on an elliptic curve over `F_q`.
pub fn nq1(q: u64) -> Result<u64> {
    let (p, r) = crate::gf::prime_power(q)?;
    let m = (4 * q).isqrt();
    Ok(if m.is_multiple_of(p) && r % 2 == 1 && r >= 3 {
        q + m
    } else {
        q + m + 1
    })
}

/// Every nonsingular `y^2 = x^3 + a x^2 + b x + c` over `field` accepted by
/// `filter`, ordered by the encodings of `(a, b, c)`.
pub fn curve_scan<F>(field: &Arc<Field>, limit: u64, filter: F) -> Result<Vec<EllipticCurve>>
where
    F: Fn(&CurveSummary) -> bool + Sync,
{
    if !field.is_odd() {
        return Err(Error::EvenCharacteristic);
    }
    let q = field.q() as u64;
    if q > limit {
        return Err(Error::ScanLimitExceeded { q, limit });
    }
    let curves = (0..q * q * q)
        .into_par_iter()
        .filter_map(|idx| {
            let e = |v: u64| field.elem(v).expect("in range");
            let (a, b, c) = (e(idx / (q * q)), e(idx / q % q), e(idx % q));
            let curve = EllipticCurve::short(field.clone(), a, b, c).ok()?;
            filter(&curve.summary()).then_some(curve)
        })
        .collect();
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn field(p: u64, r: u32) -> Arc<Field> {
        Arc::new(Field::new(p, r).unwrap())
    }

    /// Independent count: for every x, count y with y^2 + (a1 x + a2) y = x^3 + ...
    fn brute_count(f: &Field, c: [Elem; 5]) -> usize {
        let mut n = 1;
        for x in f.elements() {
            for y in f.elements() {
                let lhs = f.add(f.mul(y, y), f.add(f.mul(c[0], f.mul(x, y)), f.mul(c[1], y)));
                let x2 = f.mul(x, x);
                let rhs = [f.mul(x2, x), f.mul(c[2], x2), f.mul(c[3], x), c[4]]
                    .into_iter()
                    .fold(Elem::ZERO, |a, t| f.add(a, t));
                if lhs == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn f5_examples() {
        let f = field(5, 1);
        let e = |v| f.from_i64(v);
        let c1 = EllipticCurve::short(f.clone(), e(0), e(1), e(0)).unwrap();
        assert_eq!(c1.n(), 4);
        assert_eq!(brute_count(&f, c1.coeffs()), 4);
        let c2 = EllipticCurve::short(f.clone(), e(0), e(0), e(-1)).unwrap();
        assert_eq!(c2.n(), 6);
        assert_eq!(brute_count(&f, c2.coeffs()), 6);
        assert_eq!(
            EllipticCurve::short(f.clone(), e(0), e(0), e(0)).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn even_characteristic_rejected() {
        let f = field(2, 3);
        let err = EllipticCurve::short(f, Elem::ZERO, Elem::ONE, Elem::ONE).unwrap_err();
        assert_eq!(err, Error::EvenCharacteristic);
    }

    #[test]
    fn point_order_is_canonical() {
        let f = field(7, 1);
        let e = |v| f.from_i64(v);
        let c = EllipticCurve::short(f.clone(), e(0), e(1), e(1)).unwrap();
        let pts = c.points();
        assert_eq!(*pts.last().unwrap(), CurvePoint::Infinity);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let again = EllipticCurve::short(f.clone(), e(0), e(1), e(1)).unwrap();
        assert_eq!(pts, again.points());
        for p in &pts[..pts.len() - 1] {
            assert!(c.contains(&p.coords()));
        }
        assert!(c.contains(&CurvePoint::Infinity.coords()));
    }

    #[test]
    fn j_invariant_examples() {
        let f7 = field(7, 1);
        let c = EllipticCurve::short(f7.clone(), Elem::ZERO, Elem::ZERO, Elem::ONE).unwrap();
        assert_eq!(c.j_invariant(), Elem::ZERO);
        // y^2 = x^3 + x over F_5: b2 = 0, b4 = 2, b6 = 0, b8 = -1, delta = -8*8 = -64,
        // c4 = -48, j = c4^3 / delta = 1728 = 3 (mod 5).
        let f5 = field(5, 1);
        let c = EllipticCurve::short(f5.clone(), Elem::ZERO, Elem::ONE, Elem::ZERO).unwrap();
        assert_eq!(c.discriminant(), f5.from_i64(-64));
        assert_eq!(c.j_invariant(), f5.from_i64(3));
    }

    #[test]
    fn short_form_of_y2_plus_y() {
        // y^2 + y = x^3 over F_5 has a2 = 1.
        let f = field(5, 1);
        let c = EllipticCurve::new(
            f.clone(),
            [Elem::ZERO, Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO],
        )
        .unwrap();
        assert_eq!(brute_count(&f, c.coeffs()), c.n());
        let (a, b, cc) = c.short_form();
        let s = EllipticCurve::short(f.clone(), a, b, cc).unwrap();
        assert_eq!(brute_count(&f, s.coeffs()), c.n());
        assert_eq!(s.j_invariant(), c.j_invariant());
    }

    #[test]
    fn short_form_preserves_count_and_j_random() {
        let f = field(13, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 20 {
            let coeffs = [(); 5]
                .map(|_| Elem::ZERO)
                .map(|_| f.from_i64(rng.gen_range(0..13)));
            let Ok(c) = EllipticCurve::new(f.clone(), coeffs) else {
                continue;
            };
            let s = c.to_short_form();
            assert_eq!(s.n(), c.n());
            assert_eq!(brute_count(&f, s.coeffs()), c.n());
            assert_eq!(s.j_invariant(), c.j_invariant());
            checked += 1;
        }
    }

    #[test]
    fn short_form_invariance_exhaustive_small() {
        for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = field(p, r);
            let q = f.q() as u64;
            // a1, a2 range over all values; a3..a5 over a fixed slice keeps this quick.
            for idx in 0..q.pow(5).min(20_000) {
                let coeffs = [0, 1, 2, 3, 4].map(|i| f.elem(idx / q.pow(i) % q).unwrap());
                let Ok(c) = EllipticCurve::new(f.clone(), coeffs) else {
                    continue;
                };
                let s = c.to_short_form();
                assert_eq!((s.n(), s.j_invariant()), (c.n(), c.j_invariant()));
            }
        }
    }

    #[test]
    fn nonsingular_curves_have_no_singular_rational_point() {
        let f = field(7, 1);
        for c in curve_scan(&f, 169, |_| true).unwrap() {
            let [_, _, a, b, _] = c.coeffs();
            for p in c.points() {
                if let CurvePoint::Affine { x, y } = *p {
                    // f_Y = 2y, f_X = -(3x^2 + 2ax + b)
                    let fy = f.mul(f.from_i64(2), y);
                    let fx = f.add(
                        f.add(
                            f.mul(f.from_i64(3), f.square(x)),
                            f.mul(f.from_i64(2), f.mul(a, x)),
                        ),
                        b,
                    );
                    assert!(!(fy.is_zero() && fx.is_zero()));
                }
            }
        }
    }

    #[test]
    fn nq1_examples() {
        assert_eq!(nq1(13).unwrap(), 21);
        assert_eq!(nq1(128).unwrap(), 150);
        assert_eq!(nq1(9).unwrap(), 16);
        assert_eq!(nq1(5).unwrap(), 10);
        assert_eq!(nq1(12), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn scan_examples() {
        let f = field(5, 1);
        let all = curve_scan(&f, DEFAULT_SCAN_LIMIT, |_| true).unwrap();
        assert_eq!(
            all.iter().map(|c| c.n()).max().unwrap() as u64,
            nq1(5).unwrap()
        );
        let j0 = curve_scan(&f, DEFAULT_SCAN_LIMIT, |s| s.j_is_zero).unwrap();
        assert!(!j0.is_empty());
        assert!(j0.iter().all(|c| c.j_invariant().is_zero()));
        let q = 5i64;
        for c in &all {
            let t = c.n() as i64 - q - 1;
            assert!(t * t <= 4 * q);
        }
        let big = field(11, 2);
        assert!(matches!(
            curve_scan(&big, 100, |_| true),
            Err(Error::ScanLimitExceeded { .. })
        ));
    }

    #[test]
    fn curve_json_shape() {
        let f = field(5, 1);
        let c = EllipticCurve::short(f.clone(), Elem::ZERO, Elem::ZERO, f.from_i64(-1)).unwrap();
        let v = serde_json::to_value(c.report()).unwrap();
        assert_eq!(v["q"], 5);
        assert_eq!(v["n"], 6);
        assert_eq!(v["coeffs"], serde_json::json!([0, 0, 0, 0, 4]));
        assert_eq!(v["points"].as_array().unwrap().last().unwrap(), "inf");
    }
}
