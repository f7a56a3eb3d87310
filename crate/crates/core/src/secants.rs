//! Intersections of lines of `P^2(F_q)` with the curve: tangents, trisecants,
//! per-point line profiles, and the trisecant minimum over external points.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{CurvePoint, EllipticCurve};
use crate::error::{Error, Result};
use crate::geometry::{for_each_point_on, Hyperplane, ProjPoint, ProjSpace};
use crate::gf::{Elem, Field};

/// Largest field order for which cubic roots are found by evaluating at every element.
pub const EXHAUSTIVE_ROOT_LIMIT: u32 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineKind {
    /// Three distinct rational points.
    Trisecant,
    /// Some rational point of multiplicity at least 2.
    Tangent,
    /// Exactly two distinct rational points, both simple. A line meeting the
    /// cubic in two simple rational points meets it in a third rational point,
    /// so this never occurs; it is kept so the classification is total.
    Chord,
    /// At most one rational point, simple.
    Sparse,
}

/// The rational intersection points of a line with the curve, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineMeet {
    pub points: Vec<(CurvePoint, u8)>,
    pub kind: LineKind,
}

impl LineMeet {
    fn from_points(mut points: Vec<(CurvePoint, u8)>) -> Self {
        points.sort();
        let kind = if points.iter().any(|&(_, m)| m >= 2) {
            LineKind::Tangent
        } else {
            match points.len() {
                3 => LineKind::Trisecant,
                2 => LineKind::Chord,
                _ => LineKind::Sparse,
            }
        };
        LineMeet { points, kind }
    }

    /// Intersection multiplicity carried by non-rational points.
    pub fn irrational_degree(&self) -> u8 {
        3 - self.points.iter().map(|p| p.1).sum::<u8>()
    }

    pub fn is_vertical_or_infinite(&self) -> bool {
        self.points.iter().any(|p| p.0 == CurvePoint::Infinity)
    }
}

// Dense polynomials over F_q, lowest degree first, no trailing zeros.

fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn poly_sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let get = |v: &[Elem], i: usize| v.get(i).copied().unwrap_or(Elem::ZERO);
    trim((0..n).map(|i| f.sub(get(a, i), get(b, i))).collect())
}

fn poly_mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by a nonzero `b`.
fn poly_divrem(f: &Field, a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = f.recip(b[db]).expect("nonzero divisor");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quo = vec![Elem::ZERO; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        quo[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        r = trim(r);
    }
    (trim(quo), r)
}

fn monic(f: &Field, a: Vec<Elem>) -> Vec<Elem> {
    match a.last() {
        Some(&lead) if lead != Elem::ONE => {
            let inv = f.recip(lead).expect("nonzero");
            a.into_iter().map(|c| f.mul(c, inv)).collect()
        }
        _ => a,
    }
}

fn poly_gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_divrem(f, &a, &b).1;
        a = b;
        b = r;
    }
    monic(f, a)
}

fn poly_powmod(f: &Field, base: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut result = vec![Elem::ONE];
    let mut b = poly_divrem(f, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_divrem(f, &poly_mul(f, &result, &b), m).1;
        }
        b = poly_divrem(f, &poly_mul(f, &b, &b), m).1;
        e >>= 1;
    }
    result
}

/// Splits a monic product of distinct linear factors into its roots.
fn split_linear(f: &Field, g: &[Elem], out: &mut Vec<Elem>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(f.neg(g[0])),
        _ => {
            let half = (f.q() as u64 - 1) / 2;
            for a in f.elements() {
                let s = poly_powmod(f, &[a, Elem::ONE], half, g);
                let d = poly_gcd(f, g, &poly_sub(f, &s, &[Elem::ONE]));
                if d.len() > 1 && d.len() < g.len() {
                    let (other, _) = poly_divrem(f, g, &d);
                    split_linear(f, &d, out);
                    split_linear(f, &monic(f, other), out);
                    return;
                }
            }
            unreachable!("distinct roots are separated by some shift");
        }
    }
}

/// Distinct roots of `x^3 + c2 x^2 + c1 x + c0` via `gcd(x^q - x, g)` and
/// Cantor–Zassenhaus splitting.
pub fn cubic_roots_algebraic(f: &Field, c2: Elem, c1: Elem, c0: Elem) -> Vec<Elem> {
    let g = [c0, c1, c2, Elem::ONE];
    let xq = poly_powmod(f, &[Elem::ZERO, Elem::ONE], f.q() as u64, &g);
    let h = poly_sub(f, &xq, &[Elem::ZERO, Elem::ONE]);
    let lin = poly_gcd(f, &g, &h);
    let mut roots = Vec::new();
    split_linear(f, &lin, &mut roots);
    roots.sort();
    roots
}

/// Distinct roots of `x^3 + c2 x^2 + c1 x + c0` by evaluation at every element.
pub fn cubic_roots_exhaustive(f: &Field, c2: Elem, c1: Elem, c0: Elem) -> Vec<Elem> {
    let mut roots = Vec::new();
    for x in f.elements() {
        let v = f.add(f.mul(f.add(f.mul(f.add(x, c2), x), c1), x), c0);
        if v.is_zero() {
            roots.push(x);
            if roots.len() == 3 {
                break;
            }
        }
    }
    roots
}

/// Rational roots of a monic cubic with multiplicities.
pub fn cubic_roots(f: &Field, c2: Elem, c1: Elem, c0: Elem) -> Vec<(Elem, u8)> {
    let roots = if f.q() <= EXHAUSTIVE_ROOT_LIMIT {
        cubic_roots_exhaustive(f, c2, c1, c0)
    } else {
        cubic_roots_algebraic(f, c2, c1, c0)
    };
    match roots[..] {
        [a, b] => {
            // The roots sum to -c2, so the third root repeats a or b.
            let third = f.sub(f.neg(c2), f.add(a, b));
            if third == a {
                vec![(a, 2), (b, 1)]
            } else {
                vec![(a, 1), (b, 2)]
            }
        }
        [r] => {
            // g'(r) = 3r^2 + 2 c2 r + c1
            let three = f.from_i64(3);
            let two = f.from_i64(2);
            let d = f.add(
                f.add(f.mul(three, f.square(r)), f.mul(two, f.mul(c2, r))),
                c1,
            );
            vec![(r, if d.is_zero() { 3 } else { 1 })]
        }
        _ => roots.into_iter().map(|r| (r, 1)).collect(),
    }
}

fn poly_add(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let get = |v: &[Elem], i: usize| v.get(i).copied().unwrap_or(Elem::ZERO);
    trim((0..n).map(|i| f.add(get(a, i), get(b, i))).collect())
}

fn poly_scale(f: &Field, c: Elem, a: &[Elem]) -> Vec<Elem> {
    trim(a.iter().map(|&x| f.mul(c, x)).collect())
}

fn derivative(f: &Field, a: &[Elem]) -> Vec<Elem> {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_i64(i as i64), c))
            .collect(),
    )
}

/// Number of distinct roots over the algebraic closure of a nonzero polynomial.
pub fn distinct_root_count(f: &Field, a: &[Elem]) -> usize {
    let a = monic(f, trim(a.to_vec()));
    if a.len() <= 1 {
        return 0;
    }
    let d = derivative(f, &a);
    if d.is_empty() {
        return distinct_root_count(f, &pth_root(f, &a));
    }
    let g = poly_gcd(f, &a, &d);
    // Roots whose multiplicity is prime to p survive in a / gcd(a, a').
    let w = poly_divrem(f, &a, &g).0;
    let mut rest = g;
    loop {
        let c = poly_gcd(f, &rest, &w);
        if c.len() <= 1 {
            break;
        }
        rest = poly_divrem(f, &rest, &c).0;
    }
    (w.len() - 1) + distinct_root_count(f, &pth_root(f, &rest))
}

/// `b` with `b^p = a`, for `a` a polynomial in `X^p`.
fn pth_root(f: &Field, a: &[Elem]) -> Vec<Elem> {
    let p = f.p() as usize;
    let e = f.q() as u64 / p as u64;
    trim(a.iter().step_by(p).map(|&c| f.pow(c, e)).collect())
}

/// Discriminant of the monic cubic `x^3 + c2 x^2 + c1 x + c0` whose
/// coefficients are polynomials in one parameter.
fn cubic_discriminant(f: &Field, c2: &[Elem], c1: &[Elem], c0: &[Elem]) -> Vec<Elem> {
    let k = |v| f.from_i64(v);
    let m = |a: &[Elem], b: &[Elem]| poly_mul(f, a, b);
    let c2c1 = m(c2, c1);
    let c2sq = m(c2, c2);
    let terms = [
        m(&c2c1, &c2c1),
        poly_scale(f, k(-4), &m(&m(c1, c1), c1)),
        poly_scale(f, k(-4), &m(&m(&c2sq, c2), c0)),
        poly_scale(f, k(-27), &m(c0, c0)),
        poly_scale(f, k(18), &m(&c2c1, c0)),
    ];
    terms.iter().fold(Vec::new(), |acc, t| poly_add(f, &acc, t))
}

/// Tangent lines through an external point, counted over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeometricTangents {
    /// `None` when every line of the pencil is tangent.
    pub total: Option<u32>,
    /// Tangents not through `P∞`, i.e. non-vertical for an affine point.
    pub non_vertical: Option<u32>,
}

/// Counts the tangents through `p` defined over the algebraic closure. Lines of
/// the pencil not through `P∞` are `y = m x + t` with `t` or `m` a free
/// parameter; such a line is tangent iff the discriminant of the cubic cut out
/// on it vanishes, so the tangents are the distinct roots of that discriminant.
pub fn geometric_tangents(curve: &EllipticCurve, p: &[Elem]) -> GeometricTangents {
    let f = &**curve.field();
    let [a1, a2, a3, a4, a5] = curve.coeffs();
    let (m, t, through_inf): (Vec<Elem>, Vec<Elem>, bool) = if p[0].is_zero() {
        // P = (0, 1, m0): lines y = m0 x + t, plus the line at infinity.
        (vec![p[2]], vec![Elem::ZERO, Elem::ONE], true)
    } else {
        // P = (1, x0, y0): lines y = m (x - x0) + y0, plus the vertical x = x0.
        let inv = f.recip(p[0]).expect("nonzero");
        let (x0, y0) = (f.mul(p[1], inv), f.mul(p[2], inv));
        (
            vec![Elem::ZERO, Elem::ONE],
            trim(vec![y0, f.neg(x0)]),
            false,
        )
    };
    let mm = |a: &[Elem], b: &[Elem]| poly_mul(f, a, b);
    let c = |v: Elem| trim(vec![v]);
    // Coefficients as in `line_meet`.
    let c2 = poly_sub(f, &poly_sub(f, &c(a3), &mm(&m, &m)), &poly_scale(f, a1, &m));
    let c1 = [
        poly_scale(f, f.from_i64(2), &mm(&m, &t)),
        poly_scale(f, a1, &t),
        poly_scale(f, a2, &m),
    ]
    .iter()
    .fold(c(a4), |acc, v| poly_sub(f, &acc, v));
    let c0 = poly_sub(f, &poly_sub(f, &c(a5), &mm(&t, &t)), &poly_scale(f, a2, &t));
    let disc = cubic_discriminant(f, &c2, &c1, &c0);
    if disc.is_empty() {
        return GeometricTangents {
            total: None,
            non_vertical: None,
        };
    }
    let non_vertical = distinct_root_count(f, &disc) as u32;
    let extra = if through_inf {
        1
    } else {
        let line = [f.neg(p[1]), p[0], Elem::ZERO];
        (line_meet(curve, &line).kind == LineKind::Tangent) as u32
    };
    GeometricTangents {
        total: Some(non_vertical + extra),
        non_vertical: Some(non_vertical),
    }
}

/// Intersection of the line `l1 X1 + l2 X2 + l3 X3 = 0` with the curve, where
/// affine points are `(1, x, y)` and `P∞ = (0, 0, 1)`.
pub fn line_meet(curve: &EllipticCurve, line: &[Elem]) -> LineMeet {
    let f = &**curve.field();
    let [a1, a2, a3, a4, a5] = curve.coeffs();
    let (l1, l2, l3) = (line[0], line[1], line[2]);
    if !l3.is_zero() {
        // y = m x + t
        let inv = f.recip(l3).expect("nonzero");
        let m = f.neg(f.mul(l2, inv));
        let t = f.neg(f.mul(l1, inv));
        let c2 = f.sub(f.sub(a3, f.square(m)), f.mul(a1, m));
        let c1 = [
            f.mul(f.from_i64(2), f.mul(m, t)),
            f.mul(a1, t),
            f.mul(a2, m),
        ]
        .into_iter()
        .fold(a4, |acc, v| f.sub(acc, v));
        let c0 = f.sub(f.sub(a5, f.square(t)), f.mul(a2, t));
        let points = cubic_roots(f, c2, c1, c0)
            .into_iter()
            .map(|(x, mult)| (CurvePoint::affine(x, f.add(f.mul(m, x), t)), mult))
            .collect();
        return LineMeet::from_points(points);
    }
    if l2.is_zero() {
        return LineMeet::from_points(vec![(CurvePoint::Infinity, 3)]);
    }
    // x = x0: y^2 + (a1 x0 + a2) y - (x0^3 + a3 x0^2 + a4 x0 + a5) = 0
    let x0 = f.neg(f.mul(l1, f.recip(l2).expect("nonzero")));
    let b = f.add(f.mul(a1, x0), a2);
    let c = f.add(f.mul(f.add(f.mul(f.add(x0, a3), x0), a4), x0), a5);
    let disc = f.add(f.square(b), f.mul(f.from_i64(4), c));
    let half = f.recip(f.from_i64(2)).expect("odd characteristic");
    let mut points = vec![(CurvePoint::Infinity, 1)];
    if let Some(s) = f.sqrt(disc) {
        let nb = f.neg(b);
        if s.is_zero() {
            points.push((CurvePoint::affine(x0, f.mul(nb, half)), 2));
        } else {
            points.push((CurvePoint::affine(x0, f.mul(f.add(nb, s), half)), 1));
            points.push((CurvePoint::affine(x0, f.mul(f.sub(nb, s), half)), 1));
        }
    }
    LineMeet::from_points(points)
}

/// The `q + 1` lines through a point of `P^2`, lazily, in increasing order of
/// their normalized dual coordinates.
pub struct PencilLines<'a> {
    f: &'a Field,
    p: [Elem; 3],
    stage: u8,
    idx: u32,
}

impl<'a> PencilLines<'a> {
    pub fn new(f: &'a Field, p: &[Elem]) -> Self {
        assert!(
            p.iter().any(|c| !c.is_zero()),
            "pencil center is the zero vector"
        );
        PencilLines {
            f,
            p: [p[0], p[1], p[2]],
            stage: 0,
            idx: 0,
        }
    }
}

impl Iterator for PencilLines<'_> {
    type Item = [Elem; 3];

    fn next(&mut self) -> Option<[Elem; 3]> {
        let f = self.f;
        let q = f.q();
        let [p1, p2, p3] = self.p;
        let (zero, one) = (Elem::ZERO, Elem::ONE);
        loop {
            match self.stage {
                // (0, 0, 1)
                0 => {
                    self.stage = 1;
                    if p3.is_zero() {
                        return Some([zero, zero, one]);
                    }
                }
                // (0, 1, l3) with p2 + l3 p3 = 0
                1 => {
                    if !p3.is_zero() {
                        self.stage = 2;
                        let l3 = f.neg(f.mul(p2, f.recip(p3).unwrap()));
                        return Some([zero, one, l3]);
                    }
                    if p2.is_zero() && self.idx < q {
                        self.idx += 1;
                        return Some([zero, one, Elem::raw(self.idx - 1)]);
                    }
                    self.stage = 2;
                    self.idx = 0;
                }
                // (1, l2, l3) with p1 + l2 p2 + l3 p3 = 0
                2 => {
                    if self.idx >= q {
                        self.stage = 3;
                        continue;
                    }
                    let v = Elem::raw(self.idx);
                    self.idx += 1;
                    if !p3.is_zero() {
                        let l3 = f.neg(f.mul(f.add(p1, f.mul(v, p2)), f.recip(p3).unwrap()));
                        return Some([one, v, l3]);
                    }
                    if !p2.is_zero() {
                        let l2 = f.neg(f.mul(p1, f.recip(p2).unwrap()));
                        return Some([one, l2, v]);
                    }
                    self.stage = 3;
                }
                _ => return None,
            }
        }
    }
}

/// The `q + 1` lines through `p`, sorted by dual coordinates.
pub fn lines_through(f: &Field, p: &[Elem]) -> Vec<Hyperplane> {
    PencilLines::new(f, p)
        .map(|l| Hyperplane::new(f, l.to_vec()).expect("nonzero"))
        .collect()
}

/// Line intersections served from a [`LineTable`] when the plane is small
/// enough, computed on demand otherwise.
pub struct Lines {
    curve: EllipticCurve,
    table: Option<LineTable>,
}

/// Largest number of lines tabulated by [`Lines`].
pub const LINE_TABLE_MAX: u64 = 1 << 22;

impl Lines {
    pub fn new(curve: &EllipticCurve) -> Self {
        let lines = ProjSpace::new(curve.field().q(), 3).count();
        Lines {
            curve: curve.clone(),
            table: (lines <= LINE_TABLE_MAX).then(|| LineTable::new(curve)),
        }
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    pub fn table(&self) -> Option<&LineTable> {
        self.table.as_ref()
    }

    /// Intersection with a line given by normalized dual coordinates.
    pub fn meet(&self, line: &[Elem]) -> std::borrow::Cow<'_, LineMeet> {
        match &self.table {
            Some(t) => std::borrow::Cow::Borrowed(t.meet(line)),
            None => std::borrow::Cow::Owned(line_meet(&self.curve, line)),
        }
    }
}

/// Classification counts over the lines through an external point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LineProfile {
    pub point: ProjPoint,
    pub tangents: u32,
    pub trisecants: u32,
    pub chords: u32,
    pub sparse: u32,
    /// Whether some `F_q`-rational tangent through the point is not vertical;
    /// `None` for points at infinity.
    pub has_rational_non_vertical_tangent: Option<bool>,
    pub sums_to_q_plus1: bool,
}

impl LineProfile {
    fn new(point: ProjPoint, q: u32, counts: [u32; 4], nv_tangent: bool) -> Self {
        let [tangents, trisecants, chords, sparse] = counts;
        let affine = point.coords()[0] == Elem::ONE;
        LineProfile {
            point,
            tangents,
            trisecants,
            chords,
            sparse,
            has_rational_non_vertical_tangent: affine.then_some(nv_tangent),
            sums_to_q_plus1: counts.iter().sum::<u32>() == q + 1,
        }
    }
}

fn kind_slot(kind: LineKind) -> usize {
    match kind {
        LineKind::Tangent => 0,
        LineKind::Trisecant => 1,
        LineKind::Chord => 2,
        LineKind::Sparse => 3,
    }
}

/// A line through an affine point is vertical iff its `X3` coefficient is zero.
fn is_vertical(line: &[Elem]) -> bool {
    line[2].is_zero()
}

/// Profile of the lines through `p`, computed line by line.
pub fn line_profile(curve: &EllipticCurve, p: &ProjPoint) -> Result<LineProfile> {
    let f = &**curve.field();
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: p.dim(),
        });
    }
    let c = p.coords();
    if curve.contains(&[c[0], c[1], c[2]]) {
        return Err(Error::PointOnCurve);
    }
    let mut counts = [0u32; 4];
    let mut nv_tangent = false;
    for line in lines_through(f, c) {
        let meet = line_meet(curve, line.coords());
        counts[kind_slot(meet.kind)] += 1;
        if meet.kind == LineKind::Tangent && !is_vertical(line.coords()) {
            nv_tangent = true;
        }
    }
    Ok(LineProfile::new(p.clone(), f.q(), counts, nv_tangent))
}

/// Every line of `P^2(F_q)` with its intersection, indexed by the rank of its
/// dual coordinates.
pub struct LineTable {
    space: ProjSpace,
    meets: Vec<LineMeet>,
}

impl LineTable {
    pub fn new(curve: &EllipticCurve) -> Self {
        let space = ProjSpace::new(curve.field().q(), 3);
        let meets = (0..space.count())
            .into_par_iter()
            .map(|r| line_meet(curve, space.point(r).coords()))
            .collect();
        LineTable { space, meets }
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn meet(&self, line: &[Elem]) -> &LineMeet {
        &self.meets[self.space.rank(line) as usize]
    }

    pub fn meet_by_rank(&self, rank: u64) -> &LineMeet {
        &self.meets[rank as usize]
    }

    /// Lines through `p` in dual-coordinate order, with their intersections.
    pub fn through<'a>(&'a self, f: &Field, p: &[Elem]) -> Vec<(Hyperplane, &'a LineMeet)> {
        lines_through(f, p)
            .into_iter()
            .map(|l| {
                let m = self.meet(l.coords());
                (l, m)
            })
            .collect()
    }
}

/// Points of `P^2(F_q)` off the curve in scan order: affine points by `(x, y)`,
/// then the points `(0, 1, m)` by `m`.
pub fn external_points(curve: &EllipticCurve) -> Vec<ProjPoint> {
    let f = curve.field();
    let mut out = Vec::new();
    for x in f.elements() {
        for y in f.elements() {
            if !curve.contains_affine(x, y) {
                out.push(ProjPoint::from_normalized(vec![Elem::ONE, x, y]));
            }
        }
    }
    for m in f.elements() {
        out.push(ProjPoint::from_normalized(vec![Elem::ZERO, Elem::ONE, m]));
    }
    out
}

/// Line profiles of every external point, in [`external_points`] order,
/// accumulated line by line from a [`LineTable`].
pub fn external_profiles(curve: &EllipticCurve, table: &LineTable) -> Vec<LineProfile> {
    let f = &**curve.field();
    let q = f.q();
    let plane = ProjSpace::new(q, 3);
    let npoints = plane.count() as usize;
    let mut counts = vec![[0u32; 4]; npoints];
    let mut nv = vec![false; npoints];
    for r in 0..plane.count() {
        let line = plane.point(r);
        let meet = table.meet_by_rank(r);
        let slot = kind_slot(meet.kind);
        let nv_tangent = meet.kind == LineKind::Tangent && !is_vertical(line.coords());
        for_each_point_on(f, line.coords(), |_, pr| {
            counts[pr as usize][slot] += 1;
            nv[pr as usize] |= nv_tangent;
        });
    }
    external_points(curve)
        .into_iter()
        .map(|p| {
            let r = plane.rank(p.coords()) as usize;
            LineProfile::new(p, q, counts[r], nv[r])
        })
        .collect()
}

/// JSON scan report: minimum trisecant count, first point attaining it, and
/// the histogram of trisecant counts over external points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrisecantScan {
    pub min: u32,
    pub argmin: ProjPoint,
    pub histogram: BTreeMap<u32, u64>,
    pub external_points: usize,
}

pub fn min_trisecants(curve: &EllipticCurve) -> TrisecantScan {
    let table = LineTable::new(curve);
    min_trisecants_with(curve, &table)
}

pub fn min_trisecants_with(curve: &EllipticCurve, table: &LineTable) -> TrisecantScan {
    let profiles = external_profiles(curve, table);
    let mut histogram = BTreeMap::new();
    for p in &profiles {
        *histogram.entry(p.trisecants).or_insert(0) += 1;
    }
    let best = profiles
        .iter()
        .min_by_key(|p| p.trisecants)
        .expect("external points exist");
    TrisecantScan {
        min: best.trisecants,
        argmin: best.point.clone(),
        histogram,
        external_points: profiles.len(),
    }
}

/// Hypotheses under which extendability results for `j = 0` curves apply:
/// `p > 3`, `q > 9887`, `j = 0`, `n` even, and `r` even or `p ≡ 1 (mod 3)`.
pub fn mioo_hypotheses(curve: &EllipticCurve) -> bool {
    let f = curve.field();
    f.p() > 3
        && f.q() > 9887
        && curve.j_invariant().is_zero()
        && curve.n().is_multiple_of(2)
        && (f.r().is_multiple_of(2) || f.p() % 3 == 1)
}
