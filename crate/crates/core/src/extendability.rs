//! Frame normalization, witness hyperplanes and the extendability checks for
//! elliptic arcs with `3 ≤ k ≤ 6`.
//!
//! For `k ≤ 6` the coordinates `(1, x, y, x², xy, y²)` of `φ_k` are the
//! monomials of degree at most two, so a hyperplane of `P^{k-1}` is a conic
//! (a line for `k ≤ 4`) and every witness below is the product of one of the
//! frame lines `X = 0`, `Y = 0`, `X = Y` with a trisecant line.

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::curve::{CurvePoint, EllipticCurve};
use crate::error::{Error, Result};
use crate::geometry::{
    addable_points, complete_arc, normalize, scan_estimate, scan_pencils, EllipticArc, Hyperplane,
    PointSet, ProjPoint,
};
use crate::gf::{Elem, Field};
use crate::secants::{mioo_hypotheses, LineKind, LineMeet, Lines, PencilLines};

/// Default number of sampled points for witness checks with `k ≤ 5`.
pub const DEFAULT_SAMPLE: u64 = 10_000;
/// Default number of sampled points for `k = 6`.
pub const DEFAULT_SAMPLE_K6: u64 = 100_000;
/// Tag attached to reports of forced runs outside the theorem's hypotheses.
pub const OUT_OF_HYPOTHESIS: &str = "OUT_OF_HYPOTHESIS";

const SAMPLE_CHUNK: u64 = 1024;

fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn normalized(f: &Field, mut l: [Elem; 3]) -> [Elem; 3] {
    normalize(f, &mut l).expect("nonzero line");
    l
}

fn line_x() -> [Elem; 3] {
    [Elem::ZERO, Elem::ONE, Elem::ZERO]
}

fn line_y() -> [Elem; 3] {
    [Elem::ZERO, Elem::ZERO, Elem::ONE]
}

fn line_diagonal(f: &Field) -> [Elem; 3] {
    [Elem::ZERO, Elem::ONE, f.neg(Elem::ONE)]
}

/// Which of the three frame conditions a curve satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameConditions {
    /// `X = 0` meets the curve in two affine rational points, neither `(0, 0)`.
    pub x_zero_line: bool,
    /// `Y = 0` meets the curve in three affine rational points.
    pub y_zero_line: bool,
    /// `X = Y` meets the curve in three affine rational points.
    pub diagonal_line: bool,
}

impl FrameConditions {
    pub fn holds(&self) -> bool {
        self.x_zero_line && self.y_zero_line && self.diagonal_line
    }

    fn describe_failures(&self) -> String {
        let mut failed = Vec::new();
        if !self.x_zero_line {
            failed.push("X = 0 does not meet the curve in two affine points off (0, 0)");
        }
        if !self.y_zero_line {
            failed.push("Y = 0 is not an affine trisecant");
        }
        if !self.diagonal_line {
            failed.push("X = Y is not an affine trisecant");
        }
        failed.join("; ")
    }
}

fn affine_trisecant(meet: &LineMeet) -> bool {
    meet.kind == LineKind::Trisecant && meet.points.iter().all(|(p, _)| *p != CurvePoint::Infinity)
}

/// Checks the frame conditions on the curve behind `lines`.
pub fn frame_conditions(lines: &Lines) -> FrameConditions {
    let f = lines.curve().field();
    let x = lines.meet(&line_x());
    let origin = CurvePoint::affine(Elem::ZERO, Elem::ZERO);
    FrameConditions {
        x_zero_line: x.kind == LineKind::Trisecant && x.points.iter().all(|(p, _)| *p != origin),
        y_zero_line: affine_trisecant(&lines.meet(&line_y())),
        diagonal_line: affine_trisecant(&lines.meet(&normalized(f, line_diagonal(f)))),
    }
}

/// The substitution `x = u² x' + r`, `y = u³ y' + s u² x' + t` carrying the
/// framed curve back to the original one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub u: Elem,
    pub r: Elem,
    pub s: Elem,
    pub t: Elem,
    #[serde(flatten)]
    pub conditions: FrameConditions,
}

impl Frame {
    pub fn is_identity(&self) -> bool {
        self.u == Elem::ONE && self.r.is_zero() && self.s.is_zero() && self.t.is_zero()
    }

    /// The curve in the new coordinates `(x', y')`.
    pub fn apply(&self, curve: &EllipticCurve) -> Result<EllipticCurve> {
        substitute(curve, self.u, self.r, self.s, self.t)
    }

    /// Maps a point of the framed curve to the original curve.
    pub fn map_back(&self, f: &Field, p: &CurvePoint) -> CurvePoint {
        match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let u2 = f.square(self.u);
                let u2x = f.mul(u2, x);
                CurvePoint::affine(
                    f.add(u2x, self.r),
                    f.add(
                        f.add(f.mul(f.mul(u2, self.u), y), f.mul(self.s, u2x)),
                        self.t,
                    ),
                )
            }
        }
    }
}

/// Applies `x = u² x' + r`, `y = u³ y' + s u² x' + t` to the curve equation.
pub fn substitute(
    curve: &EllipticCurve,
    u: Elem,
    r: Elem,
    s: Elem,
    t: Elem,
) -> Result<EllipticCurve> {
    let f = curve.field();
    let c = curve.coeffs();
    // Long Weierstrass names: y² + A1 xy + A3 y = x³ + A2 x² + A4 x + A6.
    let (a1, a3, a2, a4, a6) = (c[0], c[1], c[2], c[3], c[4]);
    let ui = f.inv(u)?;
    let e = |v| f.from_i64(v);
    let (add, sub, mul) = (|a, b| f.add(a, b), |a, b| f.sub(a, b), |a, b| f.mul(a, b));
    let scale = |v: Elem, power: u64| mul(v, f.pow(ui, power));
    let n1 = scale(add(a1, mul(e(2), s)), 1);
    let n2 = scale(add(sub(sub(a2, mul(s, a1)), f.square(s)), mul(e(3), r)), 2);
    let n3 = scale(add(add(a3, mul(r, a1)), mul(e(2), t)), 3);
    let n4 = {
        let v = sub(a4, mul(s, a3));
        let v = add(v, mul(e(2), mul(r, a2)));
        let v = sub(v, mul(add(t, mul(r, s)), a1));
        let v = add(v, mul(e(3), f.square(r)));
        scale(sub(v, mul(e(2), mul(s, t))), 4)
    };
    let n6 = {
        let v = add(a6, mul(r, a4));
        let v = add(v, mul(f.square(r), a2));
        let v = add(v, f.pow(r, 3));
        let v = sub(v, mul(t, a3));
        let v = sub(v, f.square(t));
        scale(sub(v, mul(mul(r, t), a1)), 6)
    };
    EllipticCurve::new(f.clone(), [n1, n3, n2, n4, n6])
}

/// Searches `(r, t, s, u)` in encoding order for a frame: `x = r` must meet
/// the curve in two affine points, `(r, t)` must lie off the curve, and the
/// lines through `(r, t)` of slopes `s` and `s + u` must be trisecants. The
/// identity is returned whenever the curve already satisfies the conditions.
pub fn find_frame(curve: &EllipticCurve) -> Result<(EllipticCurve, Frame)> {
    let f = curve.field();
    let lines = Lines::new(curve);
    for r in f.elements() {
        let vertical = normalized(f, [f.neg(r), Elem::ONE, Elem::ZERO]);
        if lines.meet(&vertical).kind != LineKind::Trisecant {
            continue;
        }
        for t in f.elements() {
            if curve.contains_affine(r, t) {
                continue;
            }
            let mut memo: HashMap<Elem, bool> = HashMap::new();
            let mut slope_ok = |s: Elem| {
                *memo.entry(s).or_insert_with(|| {
                    let line = normalized(f, [f.sub(f.mul(s, r), t), f.neg(s), Elem::ONE]);
                    lines.meet(&line).kind == LineKind::Trisecant
                })
            };
            for s in f.elements() {
                if !slope_ok(s) {
                    continue;
                }
                let Some(u) = f.elements().skip(1).find(|&u| slope_ok(f.add(s, u))) else {
                    continue;
                };
                let framed = substitute(curve, u, r, s, t)?;
                let conditions = frame_conditions(&Lines::new(&framed));
                if !conditions.holds() {
                    return Err(Error::FrameViolation(conditions.describe_failures()));
                }
                return Ok((
                    framed,
                    Frame {
                        u,
                        r,
                        s,
                        t,
                        conditions,
                    },
                ));
            }
        }
    }
    Err(Error::NoFrameFound)
}

/// [`find_frame`] behind the `q ≥ 121`, `j ≠ 0` gate, which `force` lifts.
pub fn choose_frame(curve: &EllipticCurve, force: bool) -> Result<(EllipticCurve, Frame)> {
    let q = curve.field().q();
    let j = curve.j_invariant();
    if !force && (q < 121 || j.is_zero()) {
        return Err(Error::HypothesisNotMet(format!(
            "frames are guaranteed for q >= 121 and j != 0 (q = {q}, j = {j})"
        )));
    }
    find_frame(curve)
}

/// A self-verified hyperplane through `candidate` meeting the arc in exactly
/// `k` points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    pub candidate: ProjPoint,
    pub case_tag: String,
    pub hyperplane: Hyperplane,
    pub secant_points: Vec<ProjPoint>,
}

/// One case of the witness construction: the hyperplane is `base · l` for a
/// line `l`, either fixed or searched among the lines through the planar point
/// forced by `Q`.
struct Recipe {
    tag: &'static str,
    base: Option<[Elem; 3]>,
    fixed: Option<[Elem; 3]>,
    /// The points of `l` on the curve must lie off this line.
    avoid: Option<[Elem; 3]>,
    /// `l` must differ from this line.
    exclude: Option<[Elem; 3]>,
    /// `l` must meet the curve in three affine points.
    affine: bool,
}

impl Recipe {
    fn pencil(tag: &'static str, base: Option<[Elem; 3]>) -> Self {
        Recipe {
            tag,
            base,
            fixed: None,
            avoid: base,
            exclude: None,
            affine: false,
        }
    }
}

/// Coefficients of `L · l` on the monomials `(1, x, y, x², xy, y²)`.
fn conic_product(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 6] {
    let m = |i: usize, j: usize| f.mul(a[i], b[j]);
    [
        m(0, 0),
        f.add(m(1, 0), m(0, 1)),
        f.add(m(2, 0), m(0, 2)),
        m(1, 1),
        f.add(m(2, 1), m(1, 2)),
        m(2, 2),
    ]
}

/// Precomputed data for repeated witness searches on one arc.
pub struct WitnessEngine {
    arc: EllipticArc,
    lines: Lines,
    members: HashSet<Vec<Elem>>,
    conditions: FrameConditions,
}

impl WitnessEngine {
    pub fn new(arc: &EllipticArc) -> Self {
        let lines = Lines::new(arc.curve());
        let conditions = frame_conditions(&lines);
        WitnessEngine {
            arc: arc.clone(),
            lines,
            members: arc.set().iter().map(<[Elem]>::to_vec).collect(),
            conditions,
        }
    }

    pub fn arc(&self) -> &EllipticArc {
        &self.arc
    }

    pub fn conditions(&self) -> FrameConditions {
        self.conditions
    }

    pub fn on_arc(&self, coords: &[Elem]) -> bool {
        self.members.contains(coords)
    }

    /// Runs the case dispatch on `q`. `NoWitnessFound` means every applicable
    /// case failed; for `k = 4, 5` this includes the points the case analysis
    /// leaves as addable candidates.
    pub fn witness(&self, q: &ProjPoint) -> Result<WitnessReport> {
        let k = self.arc.k();
        if !(3..=6).contains(&k) {
            return Err(Error::KOutOfRange { k, max: 6 });
        }
        if q.dim() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: q.dim(),
            });
        }
        if self.on_arc(q.coords()) {
            return Err(Error::PointOnArc);
        }
        if k >= 5 && !self.conditions.holds() {
            return Err(Error::FrameViolation(self.conditions.describe_failures()));
        }
        for recipe in self.recipes(q.coords()) {
            if let Some(report) = self.run_recipe(&recipe, q)? {
                return Ok(report);
            }
        }
        Err(Error::NoWitnessFound)
    }

    fn recipes(&self, q: &[Elem]) -> Vec<Recipe> {
        let f = &**self.arc.field();
        let z = |i: usize| q[i].is_zero();
        match q.len() {
            3 => vec![Recipe::pencil("k3-trisecant", None)],
            4 => {
                if z(0) && z(1) {
                    return Vec::new();
                }
                vec![Recipe {
                    affine: true,
                    ..Recipe::pencil("k4-plane", None)
                }]
            }
            5 => {
                let x = Some(line_x());
                if z(4) {
                    return vec![Recipe {
                        fixed: Some(line_y()),
                        ..Recipe::pencil("k5-case1", x)
                    }];
                }
                let tag = match (z(1), z(3)) {
                    (true, true) => {
                        return vec![Recipe {
                            avoid: None,
                            exclude: x,
                            ..Recipe::pencil("k5-case2", x)
                        }];
                    }
                    (true, false) => "k5-case3",
                    (false, false) => "k5-case4",
                    (false, true) => {
                        let lambda = f.mul(q[4], f.recip(q[1]).expect("nonzero"));
                        if self.arc.curve().contains_affine(Elem::ZERO, lambda) {
                            return Vec::new();
                        }
                        "k5-case5"
                    }
                };
                vec![Recipe::pencil(tag, x)]
            }
            6 => {
                if z(4) {
                    return vec![Recipe {
                        fixed: Some(line_y()),
                        ..Recipe::pencil("k6-case1", Some(line_x()))
                    }];
                }
                if z(3) && z(5) {
                    let tag = if q[1] != q[2] { "k6-case2" } else { "k6-case3" };
                    return vec![Recipe::pencil(tag, Some(line_diagonal(f)))];
                }
                let mut out = Vec::new();
                if !z(5) {
                    let tag = if z(2) { "k6-case4" } else { "k6-case5" };
                    out.push(Recipe::pencil(tag, Some(line_y())));
                }
                if !z(3) {
                    let tag = if z(1) { "k6-case6" } else { "k6-case7" };
                    out.push(Recipe::pencil(tag, Some(line_x())));
                }
                assert!(!out.is_empty(), "k = 6 case dispatch left {q:?} unmatched");
                out
            }
            _ => unreachable!("k checked by caller"),
        }
    }

    /// The hyperplane `base · l` as a vector of length `k`, or `None` when it
    /// needs the `y²` monomial and `k = 5`.
    fn lift(&self, base: Option<&[Elem; 3]>, l: &[Elem; 3]) -> Option<Vec<Elem>> {
        let f = &**self.arc.field();
        let k = self.arc.k();
        match base {
            None if k == 3 => Some(l.to_vec()),
            None => Some(vec![l[0], l[1], l[2], Elem::ZERO]),
            Some(b) => {
                let h = conic_product(f, b, l);
                if k == 5 && !h[5].is_zero() {
                    return None;
                }
                Some(h[..k].to_vec())
            }
        }
    }

    /// The planar point every admissible `l` must pass through: `base · l`
    /// contains `Q` exactly when `l` contains it.
    fn center(&self, base: Option<&[Elem; 3]>, q: &[Elem]) -> [Elem; 3] {
        let f = &**self.arc.field();
        let Some(b) = base else {
            return [q[0], q[1], q[2]];
        };
        let mut padded = [Elem::ZERO; 6];
        padded[..q.len()].copy_from_slice(q);
        let p = padded;
        let c = |i: usize, j: usize, m: usize| dot(f, &[p[i], p[j], p[m]], b);
        [c(0, 1, 2), c(1, 3, 4), c(2, 4, 5)]
    }

    fn qualifies(&self, recipe: &Recipe, l: &[Elem; 3], meet: &LineMeet) -> bool {
        let f = &**self.arc.field();
        if meet.kind != LineKind::Trisecant || recipe.exclude.as_ref() == Some(l) {
            return false;
        }
        meet.points.iter().all(|(p, _)| {
            if recipe.affine && *p == CurvePoint::Infinity {
                return false;
            }
            recipe
                .avoid
                .is_none_or(|a| !dot(f, &a, &p.coords()).is_zero())
        })
    }

    fn run_recipe(&self, recipe: &Recipe, q: &ProjPoint) -> Result<Option<WitnessReport>> {
        if let Some(l) = recipe.fixed {
            let h = self
                .lift(recipe.base.as_ref(), &l)
                .expect("fixed witness is representable");
            return self.verify(recipe.tag, q, h).map(Some);
        }
        let f = &**self.arc.field();
        let center = self.center(recipe.base.as_ref(), q.coords());
        if center.iter().all(|c| c.is_zero()) {
            return Ok(None);
        }
        for l in PencilLines::new(f, &center) {
            let meet: Cow<'_, LineMeet> = self.lines.meet(&l);
            if !self.qualifies(recipe, &l, &meet) {
                continue;
            }
            let Some(h) = self.lift(recipe.base.as_ref(), &l) else {
                continue;
            };
            return self.verify(recipe.tag, q, h).map(Some);
        }
        Ok(None)
    }

    fn verify(&self, tag: &str, q: &ProjPoint, h: Vec<Elem>) -> Result<WitnessReport> {
        let f = &**self.arc.field();
        let k = self.arc.k();
        let hyperplane = Hyperplane::new(f, h)?;
        if !hyperplane.contains(f, q.coords()) {
            return Err(Error::WitnessInvalid(format!(
                "{tag}: hyperplane misses the point"
            )));
        }
        let secant_points: Vec<ProjPoint> = self
            .arc
            .set()
            .iter()
            .filter(|p| hyperplane.contains(f, p))
            .map(|p| ProjPoint::new(f, p.to_vec()))
            .collect::<Result<_>>()?;
        let distinct: HashSet<&ProjPoint> = secant_points.iter().collect();
        if secant_points.len() != k || distinct.len() != k {
            return Err(Error::WitnessInvalid(format!(
                "{tag}: hyperplane holds {} arc points, expected {k}",
                secant_points.len()
            )));
        }
        Ok(WitnessReport {
            candidate: q.clone(),
            case_tag: tag.to_string(),
            hyperplane,
            secant_points,
        })
    }
}

/// Witness hyperplane for a single point; see [`WitnessEngine::witness`].
pub fn witness_hyperplane(q: &ProjPoint, arc: &EllipticArc) -> Result<WitnessReport> {
    WitnessEngine::new(arc).witness(q)
}

/// The values `λ ≠ 0` with `(0, λ)` on the curve.
pub fn candidate_ratios(curve: &EllipticCurve) -> Vec<Elem> {
    let mut out: Vec<Elem> = curve
        .points()
        .iter()
        .filter_map(|p| match *p {
            CurvePoint::Affine { x, y } if x.is_zero() && !y.is_zero() => Some(y),
            _ => None,
        })
        .collect();
    out.sort();
    out
}

/// Whether `Q` has `Q4 = 0`, `Q2 Q5 ≠ 0` and `(0, Q5/Q2)` on the curve.
pub fn is_k5_candidate(curve: &EllipticCurve, q: &[Elem]) -> bool {
    let f = curve.field();
    q.len() == 5
        && q[3].is_zero()
        && !q[1].is_zero()
        && !q[4].is_zero()
        && curve.contains_affine(Elem::ZERO, f.mul(q[4], f.recip(q[1]).expect("nonzero")))
}

fn require_k5(arc_k: usize) -> Result<()> {
    if arc_k != 5 {
        return Err(Error::InvalidArgument(format!(
            "expected a k = 5 arc, got k = {arc_k}"
        )));
    }
    Ok(())
}

/// All points `(Q1, 1, Q3, 0, λ)` with `λ` from [`candidate_ratios`], sorted.
/// These are the only points of `P^4` the case analysis leaves addable.
pub fn k5_candidates(arc: &EllipticArc) -> Result<Vec<ProjPoint>> {
    require_k5(arc.k())?;
    let f = &**arc.field();
    let mut out = Vec::new();
    for lambda in candidate_ratios(arc.curve()) {
        for a in f.elements() {
            for b in f.elements() {
                out.push(ProjPoint::new(
                    f,
                    vec![a, Elem::ONE, b, Elem::ZERO, lambda],
                )?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Addable points of a 5-dimensional set among the candidates
/// `(a, 1, b, 0, λ)`, `λ ∈ ratios`, sorted. Every full hyperplane marks the
/// candidates it contains; the survivors not already in the set are addable.
pub fn addable_candidates(
    set: &PointSet,
    ratios: &[Elem],
    budget: &Budget,
) -> Result<Vec<ProjPoint>> {
    require_k5(set.k())?;
    let f = &**set.field();
    let q = f.q() as usize;
    let per = q * q;
    let words = (ratios.len() * per).div_ceil(64);
    budget.charge("candidate hyperplane scan", scan_estimate(set))?;

    let mark = |bits: &mut Vec<u64>, h: &[Elem]| {
        let mut set_bit = |i: usize| bits[i / 64] |= 1 << (i % 64);
        for (li, &lambda) in ratios.iter().enumerate() {
            let rhs = f.neg(f.add(h[1], f.mul(h[4], lambda)));
            let off = li * per;
            if !h[2].is_zero() {
                let inv = f.recip(h[2]).expect("nonzero");
                for a in 0..q {
                    let b = f.mul(f.sub(rhs, f.mul(h[0], Elem::raw(a as u32))), inv);
                    set_bit(off + a * q + b.encoding() as usize);
                }
            } else if !h[0].is_zero() {
                let a = f.mul(rhs, f.recip(h[0]).expect("nonzero")).encoding() as usize;
                for b in 0..q {
                    set_bit(off + a * q + b);
                }
            } else if rhs.is_zero() {
                for i in off..off + per {
                    set_bit(i);
                }
            }
        }
    };

    let (bits, worst) = scan_pencils(
        set,
        || (vec![0u64; words], 0u32),
        |(bits, worst), pencil| {
            *worst = (*worst).max(pencil.max_count());
            if pencil.single {
                if pencil.base == 5 {
                    mark(bits, &pencil.hyperplane(Elem::ZERO));
                }
                return;
            }
            if pencil.base == 5 {
                let mut hit = vec![false; q];
                for &(t, _) in pencil.touched {
                    hit[t.encoding() as usize] = true;
                }
                for t in (0..q).filter(|&t| !hit[t]) {
                    mark(bits, &pencil.hyperplane(Elem::raw(t as u32)));
                }
            }
            for &(t, extra) in pencil.touched {
                if pencil.base + extra == 5 {
                    mark(bits, &pencil.hyperplane(t));
                }
            }
        },
        |(mut a, wa), (b, wb)| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
            (a, wa.max(wb))
        },
    );
    if worst > 5 {
        return Err(Error::ArcPropertyViolated {
            k: 5,
            count: worst as usize,
        });
    }
    let mut out = Vec::new();
    for (li, &lambda) in ratios.iter().enumerate() {
        for a in 0..q {
            for b in 0..q {
                let i = li * per + a * q + b;
                if bits[i / 64] >> (i % 64) & 1 == 1 {
                    continue;
                }
                let coords = vec![
                    Elem::raw(a as u32),
                    Elem::ONE,
                    Elem::raw(b as u32),
                    Elem::ZERO,
                    lambda,
                ];
                let p = ProjPoint::new(f, coords)?;
                if !set.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CONSISTENT")]
    Consistent,
    #[serde(rename = "VIOLATION")]
    Violation,
    #[serde(rename = "BUDGET_PARTIAL")]
    BudgetPartial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Main,
    J0,
}

/// How the addable region was examined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyPath {
    /// Exhaustive addable scan of `P^{k-1}`.
    FullScan,
    /// Framed curve: candidate scan and sampled witness recipes.
    FrameRecipes,
    /// Sampled witness recipes only.
    SampledWitnesses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictReport {
    pub theorem: Theorem,
    pub k: usize,
    pub q: u32,
    pub curve: [Elem; 5],
    pub verdict: Verdict,
    pub addable: Vec<ProjPoint>,
    pub completion_added: Vec<ProjPoint>,
    pub sampled: u64,
    pub seed: u64,
    pub witness_failures: Vec<ProjPoint>,
    pub tags: Vec<String>,
    pub path: VerifyPath,
    pub frame: Option<Frame>,
    pub framed_curve: Option<[Elem; 5]>,
    pub candidates: Option<u64>,
    pub complete: Option<bool>,
    pub case_counts: BTreeMap<String, u64>,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Sample size for witness checks; defaults to [`DEFAULT_SAMPLE`], or
    /// [`DEFAULT_SAMPLE_K6`] for `k = 6`.
    pub sample: Option<u64>,
    /// Run outside the hypotheses; the report is tagged [`OUT_OF_HYPOTHESIS`].
    pub force: bool,
    /// For `k = 5`, also run the exhaustive addable scan of `P^4`.
    pub full_scan: bool,
}

/// Largest number of failure messages kept in a report.
const MAX_DETAILS: usize = 20;

struct Outcome {
    violations: Vec<String>,
    partial: bool,
}

impl VerdictReport {
    fn new(
        theorem: Theorem,
        curve: &EllipticCurve,
        k: usize,
        seed: u64,
        tags: Vec<String>,
    ) -> Self {
        VerdictReport {
            theorem,
            k,
            q: curve.field().q(),
            curve: curve.coeffs(),
            verdict: Verdict::Consistent,
            addable: Vec::new(),
            completion_added: Vec::new(),
            sampled: 0,
            seed,
            witness_failures: Vec::new(),
            tags,
            path: VerifyPath::FullScan,
            frame: None,
            framed_curve: None,
            candidates: None,
            complete: None,
            case_counts: BTreeMap::new(),
            details: Vec::new(),
        }
    }

    fn finish(&mut self, outcome: Outcome) {
        self.verdict = if !outcome.violations.is_empty() {
            Verdict::Violation
        } else if outcome.partial {
            Verdict::BudgetPartial
        } else {
            Verdict::Consistent
        };
        self.details.extend(outcome.violations);
    }
}

/// Witness failures and case counts of one sample chunk.
type SampleChunk = (Vec<(ProjPoint, String)>, BTreeMap<String, u64>);

/// Uniform sample of `count` points of `P^{k-1}` off the arc for which `skip`
/// is false, each checked for a witness. Chunk `c` draws from the ChaCha8
/// stream `c` of `seed`, so results do not depend on the thread count.
fn sample_witnesses<S>(
    engine: &WitnessEngine,
    count: u64,
    seed: u64,
    skip: S,
    report: &mut VerdictReport,
) -> Vec<String>
where
    S: Fn(&[Elem]) -> bool + Sync,
{
    let f = &**engine.arc().field();
    let k = engine.arc().k();
    let q = f.q();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let results: Vec<SampleChunk> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut failures = Vec::new();
            let mut tags = BTreeMap::new();
            let mut coords = vec![Elem::ZERO; k];
            for _ in 0..len {
                loop {
                    coords
                        .iter_mut()
                        .for_each(|v| *v = Elem::raw(rng.gen_range(0..q)));
                    if normalize(f, &mut coords).is_ok()
                        && !engine.on_arc(&coords)
                        && !skip(&coords)
                    {
                        break;
                    }
                }
                let p = ProjPoint::from_normalized(coords.clone());
                match engine.witness(&p) {
                    Ok(w) => *tags.entry(w.case_tag).or_insert(0) += 1,
                    Err(e) => failures.push((p, e.to_string())),
                }
            }
            (failures, tags)
        })
        .collect();
    let mut failures = Vec::new();
    for (fails, tags) in results {
        failures.extend(fails);
        for (tag, n) in tags {
            *report.case_counts.entry(tag).or_insert(0) += n;
        }
    }
    failures.sort();
    report.sampled += count;
    report
        .witness_failures
        .extend(failures.iter().map(|(p, _)| p.clone()));
    report.witness_failures.sort();
    failures
        .iter()
        .take(MAX_DETAILS)
        .map(|(p, e)| format!("no witness for {:?}: {e}", p.coords()))
        .collect()
}

fn is_budget(e: &Error) -> bool {
    matches!(e, Error::BudgetExceeded { .. })
}

fn check_k(k: usize) -> Result<()> {
    if !(3..=6).contains(&k) {
        return Err(Error::KOutOfRange { k, max: 6 });
    }
    Ok(())
}

/// Checks the conclusions for `j ≠ 0`, `q ≥ 121`: the `k = 3` and `k = 6` arcs
/// are complete, the `k = 4` arc is completed by at most one point (on the line
/// `X1 = X2 = 0`), the `k = 5` arc by at most two candidate points.
pub fn verify_main_theorem(
    curve: &EllipticCurve,
    k: usize,
    budget: &Budget,
    opts: &VerifyOptions,
) -> Result<VerdictReport> {
    check_k(k)?;
    let q = curve.field().q();
    let j = curve.j_invariant();
    let mut tags = Vec::new();
    if q < 121 || j.is_zero() {
        if !opts.force {
            return Err(Error::HypothesisNotMet(format!(
                "requires q >= 121 and j != 0 (q = {q}, j = {j})"
            )));
        }
        tags.push(OUT_OF_HYPOTHESIS.to_string());
    }
    run_checks(Theorem::Main, curve, k, budget, opts, tags)
}

/// The same checks for `j = 0` curves, gated by [`mioo_hypotheses`].
pub fn verify_j0_theorem(
    curve: &EllipticCurve,
    k: usize,
    budget: &Budget,
    opts: &VerifyOptions,
) -> Result<VerdictReport> {
    check_k(k)?;
    let mut tags = Vec::new();
    if !mioo_hypotheses(curve) {
        if !opts.force {
            return Err(Error::HypothesisNotMet(
                "requires p > 3, q > 9887, j = 0, n even, and r even or p = 1 mod 3".to_string(),
            ));
        }
        tags.push(OUT_OF_HYPOTHESIS.to_string());
    }
    run_checks(Theorem::J0, curve, k, budget, opts, tags)
}

fn run_checks(
    theorem: Theorem,
    curve: &EllipticCurve,
    k: usize,
    budget: &Budget,
    opts: &VerifyOptions,
    tags: Vec<String>,
) -> Result<VerdictReport> {
    let mut report = VerdictReport::new(theorem, curve, k, opts.seed, tags);
    let outcome = match k {
        3 | 4 => check_small_k(curve, k, budget, opts, &mut report)?,
        _ => match find_frame(curve) {
            Ok((framed, frame)) => {
                report.path = VerifyPath::FrameRecipes;
                report.frame = Some(frame);
                report.framed_curve = Some(framed.coeffs());
                let arc = EllipticArc::new(&framed, k)?;
                if k == 5 {
                    check_k5(&arc, budget, opts, &mut report)?
                } else {
                    check_k6(&arc, opts, &mut report)
                }
            }
            Err(Error::NoFrameFound) => {
                report
                    .details
                    .push("no frame found; falling back to the full addable scan".to_string());
                check_by_full_scan(curve, k, budget, &mut report)?
            }
            Err(e) => return Err(e),
        },
    };
    report.finish(outcome);
    Ok(report)
}

/// Points the completion may add: `h - 1` for the `h` of the extendability table.
fn completion_allowance(k: usize) -> usize {
    match k {
        4 => 1,
        5 => 2,
        _ => 0,
    }
}

fn check_small_k(
    curve: &EllipticCurve,
    k: usize,
    budget: &Budget,
    opts: &VerifyOptions,
    report: &mut VerdictReport,
) -> Result<Outcome> {
    let arc = EllipticArc::new(curve, k)?;
    let mut violations = Vec::new();
    match addable_points(arc.set(), budget) {
        Ok(addable) => {
            for p in &addable {
                if k == 3 || !(p.coords()[0].is_zero() && p.coords()[1].is_zero()) {
                    violations.push(format!("addable point {:?}", p.coords()));
                }
            }
            let mut complete = addable.is_empty();
            if let (4, Some(first)) = (k, addable.first()) {
                let mut extended = arc.set().clone();
                extended.push(first)?;
                complete = addable_points(&extended, budget)?.is_empty();
                report.completion_added.push(first.clone());
            }
            if !complete {
                violations.push(format!(
                    "not complete after adding {} point(s)",
                    report.completion_added.len()
                ));
            }
            report.addable = addable;
            report.complete = Some(complete);
            violations.truncate(MAX_DETAILS);
            Ok(Outcome {
                violations,
                partial: false,
            })
        }
        Err(e) if is_budget(&e) => {
            report.path = VerifyPath::SampledWitnesses;
            report.details.push(e.to_string());
            let engine = WitnessEngine::new(&arc);
            let count = opts.sample.unwrap_or(DEFAULT_SAMPLE);
            let skip = |c: &[Elem]| k == 4 && c[0].is_zero() && c[1].is_zero();
            let violations = sample_witnesses(&engine, count, opts.seed, skip, report);
            Ok(Outcome {
                violations,
                partial: true,
            })
        }
        Err(e) => Err(e),
    }
}

fn check_k5(
    arc: &EllipticArc,
    budget: &Budget,
    opts: &VerifyOptions,
    report: &mut VerdictReport,
) -> Result<Outcome> {
    let framed = arc.curve();
    let f = &**arc.field();
    let ratios = candidate_ratios(framed);
    report.candidates = Some(ratios.len() as u64 * (f.q() as u64).pow(2));
    let mut violations = Vec::new();
    let mut partial = false;
    match addable_candidates(arc.set(), &ratios, budget) {
        Ok(addable) => {
            for p in &addable {
                if !is_k5_candidate(framed, p.coords()) {
                    violations.push(format!("addable point {:?} is not a candidate", p.coords()));
                }
            }
            // Non-candidates are blocked by full hyperplanes of the arc itself,
            // which stay full as addable points are added, so the completion
            // only needs to rescan the candidates.
            let mut current = arc.set().clone();
            let mut next = addable.clone();
            while let Some(first) = next.first().cloned() {
                if report.completion_added.len() == completion_allowance(5) {
                    break;
                }
                current.push(&first)?;
                report.completion_added.push(first);
                next = addable_candidates(&current, &ratios, budget)?;
            }
            let complete = next.is_empty();
            if !complete {
                violations.push(format!(
                    "not complete after adding {} point(s)",
                    report.completion_added.len()
                ));
            }
            report.addable = addable;
            report.complete = Some(complete);
        }
        Err(e) if is_budget(&e) => {
            partial = true;
            report.details.push(e.to_string());
        }
        Err(e) => return Err(e),
    }
    let engine = WitnessEngine::new(arc);
    let count = opts.sample.unwrap_or(DEFAULT_SAMPLE);
    violations.extend(sample_witnesses(
        &engine,
        count,
        opts.seed,
        |c| is_k5_candidate(framed, c),
        report,
    ));
    if opts.full_scan {
        match addable_points(arc.set(), budget) {
            Ok(all) => {
                if report.complete.is_some() && all != report.addable {
                    violations.push(format!(
                        "full scan found {} addable points, candidate scan {}",
                        all.len(),
                        report.addable.len()
                    ));
                }
            }
            Err(e) if is_budget(&e) => {
                partial = true;
                report.details.push(format!("full P^4 scan skipped: {e}"));
            }
            Err(e) => return Err(e),
        }
    }
    violations.truncate(MAX_DETAILS);
    Ok(Outcome {
        violations,
        partial,
    })
}

fn check_k6(arc: &EllipticArc, opts: &VerifyOptions, report: &mut VerdictReport) -> Outcome {
    let engine = WitnessEngine::new(arc);
    let count = opts.sample.unwrap_or(DEFAULT_SAMPLE_K6);
    let violations = sample_witnesses(&engine, count, opts.seed, |_| false, report);
    report
        .details
        .push("full P^5 scan not attempted; sampled witnesses only".to_string());
    Outcome {
        violations,
        partial: true,
    }
}

fn check_by_full_scan(
    curve: &EllipticCurve,
    k: usize,
    budget: &Budget,
    report: &mut VerdictReport,
) -> Result<Outcome> {
    let arc = EllipticArc::new(curve, k)?;
    match complete_arc(arc.set(), completion_allowance(k), budget) {
        Ok(c) => {
            let mut violations = Vec::new();
            if !c.complete {
                violations.push(format!(
                    "not complete after adding {} point(s)",
                    c.added.len()
                ));
            }
            report.addable = addable_points(arc.set(), budget)?;
            report.completion_added = c.added;
            report.complete = Some(c.complete);
            Ok(Outcome {
                violations,
                partial: false,
            })
        }
        Err(e) if is_budget(&e) => {
            report.details.push(e.to_string());
            Ok(Outcome {
                violations: Vec::new(),
                partial: true,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{phi_k, ProjSpace};
    use std::sync::Arc;

    fn field(p: u64, r: u32) -> Arc<Field> {
        Arc::new(Field::new(p, r).unwrap())
    }

    fn curve(f: &Arc<Field>, c: [i64; 5]) -> EllipticCurve {
        EllipticCurve::new(f.clone(), c.map(|v| f.from_i64(v))).unwrap()
    }

    fn curves_q13() -> Vec<EllipticCurve> {
        let f = field(13, 1);
        crate::curve::curve_scan(&f, crate::curve::DEFAULT_SCAN_LIMIT, |c| !c.j_is_zero)
            .unwrap()
            .into_iter()
            .step_by(37)
            .collect()
    }

    /// An original curve over `F_13` and its framed form.
    fn framed_pair_q13() -> (EllipticCurve, EllipticCurve) {
        curves_q13()
            .into_iter()
            .find_map(|e| find_frame(&e).ok().map(|(framed, _)| (e, framed)))
            .unwrap()
    }

    /// Number of arc points on the hyperplane, by direct incidence tests.
    fn naive_count(f: &Field, h: &[Elem], arc: &EllipticArc) -> usize {
        arc.set().iter().filter(|p| dot(f, h, p).is_zero()).count()
    }

    #[test]
    fn substitution_maps_points_and_keeps_invariants() {
        let f = field(13, 1);
        let e = curve(&f, [0, 0, 2, 5, 7]);
        for (u, r, s, t) in [(1, 0, 0, 0), (2, 3, 4, 5), (12, 7, 1, 9), (5, 0, 11, 2)] {
            let [u, r, s, t] = [u, r, s, t].map(|v| f.from_i64(v));
            let frame = Frame {
                u,
                r,
                s,
                t,
                conditions: FrameConditions::default(),
            };
            let framed = frame.apply(&e).unwrap();
            assert_eq!(framed.n(), e.n());
            assert_eq!(framed.j_invariant(), e.j_invariant());
            let mut mapped: Vec<CurvePoint> = framed
                .points()
                .iter()
                .map(|p| frame.map_back(&f, p))
                .collect();
            mapped.sort();
            let mut original = e.points().to_vec();
            original.sort();
            assert_eq!(mapped, original);
        }
    }

    #[test]
    fn framed_curve_gets_identity_frame() {
        let mut found = 0;
        for e in curves_q13() {
            let Ok((framed, frame)) = find_frame(&e) else {
                continue;
            };
            found += 1;
            assert!(frame.conditions.holds());
            let (again, second) = find_frame(&framed).unwrap();
            assert!(second.is_identity());
            assert_eq!(again.coeffs(), framed.coeffs());
        }
        assert!(found > 0);
    }

    #[test]
    fn choose_frame_gates_small_fields() {
        let (e, framed) = framed_pair_q13();
        assert!(matches!(
            choose_frame(&e, false),
            Err(Error::HypothesisNotMet(_))
        ));
        assert_eq!(choose_frame(&e, true).unwrap().0.coeffs(), framed.coeffs());
    }

    #[test]
    fn frame_exists_at_q121_and_rechecks() {
        let f = field(11, 2);
        let e = curve(&f, [0, 0, 0, 1, 3]);
        assert!(!e.j_invariant().is_zero());
        let (framed, frame) = choose_frame(&e, false).unwrap();
        assert!(frame.conditions.holds());
        let lines = |l: [Elem; 3]| crate::secants::line_meet(&framed, &normalized(&f, l));
        let x = lines(line_x());
        let affine: Vec<_> = x
            .points
            .iter()
            .filter(|(p, _)| *p != CurvePoint::Infinity)
            .collect();
        assert_eq!(affine.len(), 2);
        assert!(!framed.contains_affine(Elem::ZERO, Elem::ZERO));
        for l in [line_y(), line_diagonal(&f)] {
            let m = lines(l);
            assert_eq!(m.kind, LineKind::Trisecant);
            assert!(m.points.iter().all(|(p, _)| *p != CurvePoint::Infinity));
        }
    }

    fn framed_q13() -> EllipticCurve {
        framed_pair_q13().1
    }

    #[test]
    fn witnesses_verify_and_never_hit_addable_points() {
        let framed = framed_q13();
        let f = framed.field().clone();
        for k in 4..=6 {
            let arc = EllipticArc::new(&framed, k).unwrap();
            let engine = WitnessEngine::new(&arc);
            let addable: HashSet<ProjPoint> = addable_points(arc.set(), &Budget::unlimited())
                .unwrap()
                .into_iter()
                .collect();
            let space = ProjSpace::new(f.q(), k);
            let step = if k == 6 { 97 } else { 7 };
            let mut witnessed = 0;
            for r in (0..space.count()).step_by(step) {
                let p = space.point(r);
                match engine.witness(&p) {
                    Ok(w) => {
                        witnessed += 1;
                        assert!(w.hyperplane.contains(&f, p.coords()));
                        assert_eq!(naive_count(&f, w.hyperplane.coords(), &arc), k);
                        assert!(!addable.contains(&p));
                    }
                    Err(Error::PointOnArc) => assert!(engine.on_arc(p.coords())),
                    Err(Error::NoWitnessFound) => {}
                    Err(e) => panic!("k = {k}, {:?}: {e}", p.coords()),
                }
            }
            assert!(witnessed > 0);
            if k == 4 {
                for p in &addable {
                    assert!(matches!(engine.witness(p), Err(Error::NoWitnessFound)));
                }
            }
        }
    }

    #[test]
    fn k6_case1_uses_the_axes() {
        let framed = framed_q13();
        let f = framed.field().clone();
        let arc = EllipticArc::new(&framed, 6).unwrap();
        let q = ProjPoint::new(&f, [1, 2, 3, 4, 0, 5].map(|v| f.from_i64(v)).to_vec()).unwrap();
        let w = witness_hyperplane(&q, &arc).unwrap();
        assert_eq!(w.case_tag, "k6-case1");
        let mut want: Vec<ProjPoint> = framed
            .points()
            .iter()
            .filter(|p| match **p {
                CurvePoint::Affine { x, y } => f.mul(x, y).is_zero(),
                CurvePoint::Infinity => true,
            })
            .map(|p| phi_k(&f, p, 6))
            .collect();
        want.sort();
        let mut got = w.secant_points.clone();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn k5_case1_hits_five_points() {
        let framed = framed_q13();
        let f = framed.field().clone();
        let arc = EllipticArc::new(&framed, 5).unwrap();
        let q = ProjPoint::new(&f, [0, 1, 2, 3, 0].map(|v| f.from_i64(v)).to_vec()).unwrap();
        let w = witness_hyperplane(&q, &arc).unwrap();
        assert_eq!(w.case_tag, "k5-case1");
        assert_eq!(
            w.hyperplane.coords(),
            &[0, 0, 0, 0, 1].map(|v| f.from_i64(v))
        );
        assert_eq!(w.secant_points.len(), 5);
    }

    #[test]
    fn candidate_scan_matches_full_scan() {
        let framed = framed_q13();
        let arc = EllipticArc::new(&framed, 5).unwrap();
        let ratios = candidate_ratios(&framed);
        assert_eq!(ratios.len(), 2);
        let candidates = k5_candidates(&arc).unwrap();
        assert_eq!(candidates.len(), 2 * 13 * 13);
        let candidate_set: HashSet<&ProjPoint> = candidates.iter().collect();
        let full = addable_points(arc.set(), &Budget::unlimited()).unwrap();
        let want: Vec<ProjPoint> = full
            .into_iter()
            .filter(|p| candidate_set.contains(p))
            .collect();
        let got = addable_candidates(arc.set(), &ratios, &Budget::unlimited()).unwrap();
        assert_eq!(got, want);
        for p in &candidates {
            assert!(is_k5_candidate(&framed, p.coords()));
            let lambda = framed
                .field()
                .mul(p.coords()[4], framed.field().recip(p.coords()[1]).unwrap());
            assert!(ratios.contains(&lambda));
        }
    }

    #[test]
    fn hypothesis_gates() {
        let e = curves_q13().remove(0);
        let opts = VerifyOptions::default();
        let budget = Budget::default();
        assert!(matches!(
            verify_main_theorem(&e, 3, &budget, &opts),
            Err(Error::HypothesisNotMet(_))
        ));
        assert!(matches!(
            verify_j0_theorem(&e, 3, &budget, &opts),
            Err(Error::HypothesisNotMet(_))
        ));
        assert!(matches!(
            verify_main_theorem(&e, 7, &budget, &opts),
            Err(Error::KOutOfRange { .. })
        ));
        let forced = VerifyOptions {
            force: true,
            sample: Some(300),
            ..Default::default()
        };
        let r = verify_main_theorem(&e, 3, &budget, &forced).unwrap();
        assert_eq!(r.tags, vec![OUT_OF_HYPOTHESIS.to_string()]);
        assert_eq!(r.path, VerifyPath::FullScan);
    }

    #[test]
    fn sampled_reports_are_reproducible() {
        let (e, _) = framed_pair_q13();
        let opts = VerifyOptions {
            force: true,
            sample: Some(2500),
            seed: 7,
            ..Default::default()
        };
        let a = verify_main_theorem(&e, 6, &Budget::default(), &opts).unwrap();
        let b = verify_main_theorem(&e, 6, &Budget::default(), &opts).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.sampled, 2500);
        assert_eq!(a.path, VerifyPath::FrameRecipes);
        let c = verify_main_theorem(
            &e,
            6,
            &Budget::default(),
            &VerifyOptions {
                seed: 8,
                ..opts.clone()
            },
        )
        .unwrap();
        assert_eq!(c.seed, 8);
    }
}
