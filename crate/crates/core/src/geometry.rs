//! Projective spaces over `F_q`, the embedding `φ_k` of an elliptic curve by
//! the ψ-monomials, and hyperplane incidence scans over point sets.
//!
//! Hyperplane scans group the hyperplanes `(a_1, …, a_{k-1}, t)` into pencils
//! sharing the prefix `a' = (a_1, …, a_{k-1})`. For a point `P` with
//! `s = a'·(P_1, …, P_{k-1})` and `l = P_k`, `P` lies on `(a', t)` for every `t`
//! when `s = l = 0`, for no `t` when `l = 0 ≠ s`, and for exactly `t = -s/l`
//! otherwise. One pass over the points therefore yields the incidence counts
//! of all `q` hyperplanes of a pencil.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::curve::{CurvePoint, EllipticCurve};
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Points of `P^{dim-1}(F_q)` as normalized tuples, indexed by a rank that is
/// monotone in the lexicographic order of the tuples.
#[derive(Clone, Debug)]
pub struct ProjSpace {
    q: u64,
    dim: usize,
    /// `offsets[i]`: number of tuples whose first nonzero coordinate is after `i`.
    offsets: Vec<u64>,
    /// `weights[j] = q^(dim-1-j)`.
    weights: Vec<u64>,
    count: u64,
}

impl ProjSpace {
    pub fn new(q: u32, dim: usize) -> Self {
        assert!(dim >= 1, "projective space needs at least one coordinate");
        let q = q as u64;
        let weights: Vec<u64> = (0..dim)
            .map(|j| q.saturating_pow((dim - 1 - j) as u32))
            .collect();
        let mut offsets = vec![0u64; dim];
        for i in (0..dim - 1).rev() {
            offsets[i] = offsets[i + 1].saturating_add(weights[i + 1]);
        }
        let count = offsets[0].saturating_add(weights[0]);
        ProjSpace {
            q,
            dim,
            offsets,
            weights,
            count,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(q^dim - 1)/(q - 1)`, saturating at `u64::MAX`.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Rank of a normalized tuple.
    pub fn rank(&self, coords: &[Elem]) -> u64 {
        let pivot = coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero tuple");
        debug_assert_eq!(coords[pivot], Elem::ONE);
        let mut r = self.offsets[pivot];
        for (c, w) in coords.iter().zip(&self.weights).skip(pivot + 1) {
            r += c.encoding() as u64 * w;
        }
        r
    }

    pub fn unrank(&self, rank: u64, out: &mut [Elem]) {
        debug_assert!(rank < self.count);
        let pivot = (0..self.dim)
            .rev()
            .find(|&i| rank < self.offsets[i] + self.weights[i])
            .expect("rank in range");
        let mut rest = rank - self.offsets[pivot];
        out[..pivot].fill(Elem::ZERO);
        out[pivot] = Elem::ONE;
        for j in (pivot + 1..self.dim).rev() {
            out[j] = Elem::raw((rest % self.q) as u32);
            rest /= self.q;
        }
    }

    pub fn point(&self, rank: u64) -> ProjPoint {
        let mut c = vec![Elem::ZERO; self.dim];
        self.unrank(rank, &mut c);
        ProjPoint { coords: c }
    }

    /// All points in rank order.
    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.count).map(|r| self.point(r))
    }
}

/// Scales `coords` so that the first nonzero entry is 1.
pub fn normalize(field: &Field, coords: &mut [Elem]) -> Result<()> {
    let first = coords
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroVector)?;
    if coords[first] != Elem::ONE {
        let inv = field.recip(coords[first]).expect("nonzero");
        for c in &mut coords[first..] {
            *c = field.mul(*c, inv);
        }
    }
    Ok(())
}

fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// A point of `P^{k-1}(F_q)` in normalized homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Result<Self> {
        for c in &coords {
            field.elem(c.encoding() as u64)?;
        }
        normalize(field, &mut coords)?;
        Ok(ProjPoint { coords })
    }

    pub(crate) fn from_normalized(coords: Vec<Elem>) -> Self {
        debug_assert!(coords.iter().find(|c| !c.is_zero()) == Some(&Elem::ONE));
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A hyperplane `a_1 X_1 + … + a_k X_k = 0`, stored by its normalized dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Hyperplane {
    coords: Vec<Elem>,
}

impl Hyperplane {
    pub fn new(field: &Field, coords: Vec<Elem>) -> Result<Self> {
        let p = ProjPoint::new(field, coords)?;
        Ok(Hyperplane { coords: p.coords })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Incidence with a (not necessarily normalized) coordinate tuple.
    pub fn contains(&self, field: &Field, point: &[Elem]) -> bool {
        dot(field, &self.coords, point).is_zero()
    }

    /// Every point of the hyperplane, in no particular order.
    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        for_each_point_on(field, &self.coords, |c, _| {
            out.push(ProjPoint::from_normalized(c.to_vec()))
        });
        out
    }
}

/// `ψ_i(x, y)`: `y^s` for `i = 3s`, `x y^s` for `i = 3s + 2`, `x^2 y^s` for `i = 3s + 4`.
pub fn psi(field: &Field, i: usize, x: Elem, y: Elem) -> Result<Elem> {
    if i < 2 {
        return Err(Error::BadIndex(i));
    }
    let (s, head) = match i % 3 {
        0 => (i / 3, Elem::ONE),
        2 => ((i - 2) / 3, x),
        _ => ((i - 4) / 3, field.square(x)),
    };
    Ok(field.mul(head, field.pow(y, s as u64)))
}

/// `φ_k(P) = (1, ψ_2, …, ψ_k)` for affine `P`, `(0, …, 0, 1)` for `P∞`.
pub fn phi_k(field: &Field, p: &CurvePoint, k: usize) -> ProjPoint {
    let mut coords = vec![Elem::ZERO; k];
    match *p {
        CurvePoint::Affine { x, y } => {
            coords[0] = Elem::ONE;
            for (i, c) in coords.iter_mut().enumerate().skip(1) {
                *c = psi(field, i + 1, x, y).expect("index at least 2");
            }
        }
        CurvePoint::Infinity => coords[k - 1] = Elem::ONE,
    }
    ProjPoint { coords }
}

/// An ordered list of normalized points of `P^{k-1}(F_q)`, stored row-major.
#[derive(Clone, Debug)]
pub struct PointSet {
    field: Arc<Field>,
    k: usize,
    coords: Vec<Elem>,
}

impl PointSet {
    pub fn new(field: Arc<Field>, k: usize) -> Self {
        PointSet {
            field,
            k,
            coords: Vec::new(),
        }
    }

    pub fn from_points(field: Arc<Field>, k: usize, points: &[ProjPoint]) -> Result<Self> {
        let mut set = PointSet::new(field, k);
        for p in points {
            set.push(p)?;
        }
        Ok(set)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn push(&mut self, p: &ProjPoint) -> Result<()> {
        if p.dim() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: p.dim(),
            });
        }
        self.coords.extend_from_slice(p.coords());
        Ok(())
    }

    /// Appends a coordinate tuple as given, without normalizing it.
    pub fn push_raw(&mut self, coords: &[Elem]) {
        assert_eq!(coords.len(), self.k, "coordinate count");
        self.coords.extend_from_slice(coords);
    }

    pub fn point(&self, i: usize) -> &[Elem] {
        &self.coords[i * self.k..(i + 1) * self.k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> {
        self.coords.chunks_exact(self.k)
    }

    pub fn to_points(&self) -> Vec<ProjPoint> {
        self.iter()
            .map(|c| ProjPoint::from_normalized(c.to_vec()))
            .collect()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.iter().any(|c| c == p.coords())
    }
}

/// `φ_k(E(F_q))` in curve point order, the point at infinity last.
#[derive(Clone, Debug)]
pub struct EllipticArc {
    curve: EllipticCurve,
    set: PointSet,
}

impl EllipticArc {
    /// The arc property itself is checked by the hyperplane scans, which fail
    /// with [`Error::ArcPropertyViolated`] on a hyperplane with more than `k` points.
    pub fn new(curve: &EllipticCurve, k: usize) -> Result<Self> {
        let n = curve.n();
        if k < 3 || k + 1 > n {
            return Err(Error::KOutOfRange {
                k,
                max: n.saturating_sub(1),
            });
        }
        let field = curve.field().clone();
        let mut set = PointSet::new(field.clone(), k);
        for p in curve.points() {
            set.push(&phi_k(&field, p, k))?;
        }
        Ok(EllipticArc {
            curve: curve.clone(),
            set,
        })
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn k(&self) -> usize {
        self.set.k
    }

    pub fn n(&self) -> usize {
        self.set.n()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.set.field
    }
}

/// JSON form `{"k", "n", "secantProfile", "addable", "complete"}`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArcReport {
    pub k: usize,
    pub n: usize,
    pub secant_profile: BTreeMap<String, u64>,
    pub addable: Vec<ProjPoint>,
    pub complete: bool,
}

impl ArcReport {
    pub fn new(set: &PointSet, profile: &[u64], addable: Vec<ProjPoint>) -> Self {
        ArcReport {
            k: set.k,
            n: set.n(),
            secant_profile: profile
                .iter()
                .enumerate()
                .map(|(s, &c)| (s.to_string(), c))
                .collect(),
            complete: addable.is_empty(),
            addable,
        }
    }
}

/// Incidence counts for the `q` hyperplanes `(prefix, t)`, or for the single
/// hyperplane `X_k = 0` when `prefix` is zero.
pub struct Pencil<'a> {
    pub prefix: &'a [Elem],
    /// Points on every hyperplane of the pencil.
    pub base: u32,
    /// `(t, extra)`: the hyperplane `(prefix, t)` holds `base + extra` points;
    /// values of `t` not listed hold exactly `base`.
    pub touched: &'a [(Elem, u32)],
    pub single: bool,
}

impl Pencil<'_> {
    pub fn hyperplane(&self, t: Elem) -> Vec<Elem> {
        if self.single {
            let mut c = vec![Elem::ZERO; self.prefix.len() + 1];
            c[self.prefix.len()] = Elem::ONE;
            c
        } else {
            let mut c = self.prefix.to_vec();
            c.push(t);
            c
        }
    }

    /// Adds the pencil's hyperplanes to a histogram indexed by incidence count.
    pub fn accumulate(&self, q: u32, hist: &mut [u64]) {
        if self.single {
            hist[self.base as usize] += 1;
            return;
        }
        hist[self.base as usize] += q as u64 - self.touched.len() as u64;
        for &(_, extra) in self.touched {
            hist[(self.base + extra) as usize] += 1;
        }
    }

    pub fn max_count(&self) -> u32 {
        self.base + self.touched.iter().map(|&(_, e)| e).max().unwrap_or(0)
    }
}

struct Scratch {
    prefix: Vec<Elem>,
    counts: Vec<u32>,
    touched_idx: Vec<u32>,
    touched: Vec<(Elem, u32)>,
}

/// Number of hyperplanes of `P^{k-1}(F_q)`.
pub fn hyperplane_count(q: u32, k: usize) -> u64 {
    ProjSpace::new(q, k).count()
}

/// Visits every pencil of hyperplanes once, in parallel, folding per-worker
/// accumulators with `reduce`. Points need not be normalized.
pub fn scan_pencils<T, I, V, R>(set: &PointSet, init: I, visit: V, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &Pencil<'_>) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let field = &*set.field;
    let k = set.k;
    let q = field.q();
    let n = set.n();
    let prefix_space = ProjSpace::new(q, k - 1);
    let total = prefix_space.count() + 1;
    let last: Vec<Elem> = set.iter().map(|p| p[k - 1]).collect();
    let neg_inv_last: Vec<Elem> = last
        .iter()
        .map(|&l| field.recip(l).map_or(Elem::ZERO, |i| field.neg(i)))
        .collect();
    let base_single = last.iter().filter(|l| l.is_zero()).count() as u32;

    const CHUNK: u64 = 32;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .fold(
            || {
                (
                    init(),
                    Scratch {
                        prefix: vec![Elem::ZERO; k - 1],
                        counts: vec![0; q as usize],
                        touched_idx: Vec::with_capacity(n),
                        touched: Vec::with_capacity(n),
                    },
                )
            },
            |(mut acc, mut sc), chunk| {
                let end = ((chunk + 1) * CHUNK).min(total);
                for r in chunk * CHUNK..end {
                    if r == total - 1 {
                        sc.prefix.fill(Elem::ZERO);
                        let pencil = Pencil {
                            prefix: &sc.prefix,
                            base: base_single,
                            touched: &[],
                            single: true,
                        };
                        visit(&mut acc, &pencil);
                        continue;
                    }
                    prefix_space.unrank(r, &mut sc.prefix);
                    let pivot = sc.prefix.iter().position(|c| !c.is_zero()).unwrap();
                    let mut base = 0u32;
                    for (j, p) in set.iter().enumerate() {
                        let mut s = Elem::ZERO;
                        for (&a, &b) in sc.prefix[pivot..].iter().zip(&p[pivot..k - 1]) {
                            s = field.add(s, field.mul(a, b));
                        }
                        if last[j].is_zero() {
                            base += s.is_zero() as u32;
                        } else {
                            let t = field.mul(s, neg_inv_last[j]).encoding();
                            if sc.counts[t as usize] == 0 {
                                sc.touched_idx.push(t);
                            }
                            sc.counts[t as usize] += 1;
                        }
                    }
                    sc.touched.clear();
                    for &t in &sc.touched_idx {
                        sc.touched.push((Elem::raw(t), sc.counts[t as usize]));
                        sc.counts[t as usize] = 0;
                    }
                    sc.touched_idx.clear();
                    let pencil = Pencil {
                        prefix: &sc.prefix,
                        base,
                        touched: &sc.touched,
                        single: false,
                    };
                    visit(&mut acc, &pencil);
                }
                (acc, sc)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(&init, &reduce)
}

/// Element operations of one [`scan_pencils`] pass: every prefix meets every
/// point in at most `k - 1` products.
pub fn scan_estimate(set: &PointSet) -> u64 {
    let prefixes = ProjSpace::new(set.field.q(), set.k - 1).count() + 1;
    prefixes
        .saturating_mul(set.n() as u64)
        .saturating_mul(set.k as u64 - 1)
        .saturating_add(hyperplane_count(set.field.q(), set.k))
}

/// Histogram `h[s]` = number of hyperplanes holding exactly `s` points of the
/// set, for `s` in `0..=n`. No arc property is assumed.
pub fn secant_histogram(set: &PointSet, budget: &Budget) -> Result<Vec<u64>> {
    budget.charge("hyperplane scan", scan_estimate(set))?;
    let q = set.field.q();
    let n = set.n();
    Ok(scan_pencils(
        set,
        || vec![0u64; n + 1],
        |hist, pencil| pencil.accumulate(q, hist),
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    ))
}

/// The secant profile `s -> #hyperplanes meeting the set in s points`, `s ≤ k`.
pub fn secant_profile(set: &PointSet, budget: &Budget) -> Result<Vec<u64>> {
    let mut hist = secant_histogram(set, budget)?;
    if let Some(worst) = hist.iter().rposition(|&c| c > 0).filter(|&s| s > set.k) {
        return Err(Error::ArcPropertyViolated {
            k: set.k,
            count: worst,
        });
    }
    hist.resize(set.k + 1, 0);
    Ok(hist)
}

/// Largest number of set points on one hyperplane.
pub fn max_secant(set: &PointSet, budget: &Budget) -> Result<usize> {
    let hist = secant_histogram(set, budget)?;
    Ok(hist.iter().rposition(|&c| c > 0).unwrap_or(0))
}

pub fn secant_count(h: &Hyperplane, set: &PointSet) -> Result<usize> {
    if h.dim() != set.k {
        return Err(Error::DimensionMismatch {
            expected: set.k,
            got: h.dim(),
        });
    }
    Ok(set.iter().filter(|p| h.contains(&set.field, p)).count())
}

/// Hyperplanes meeting the set in exactly `k` points, sorted by dual coordinates.
pub fn full_hyperplanes(set: &PointSet, budget: &Budget) -> Result<Vec<Hyperplane>> {
    budget.charge("hyperplane scan", scan_estimate(set))?;
    let k = set.k as u32;
    let q = set.field.q();
    let (mut full, worst) = scan_pencils(
        set,
        || (Vec::new(), 0u32),
        |(full, worst), pencil| {
            *worst = (*worst).max(pencil.max_count());
            if pencil.base == k {
                if pencil.single {
                    full.push(pencil.hyperplane(Elem::ZERO));
                } else {
                    let hit: Vec<Elem> = pencil.touched.iter().map(|t| t.0).collect();
                    for t in (0..q).map(Elem::raw).filter(|t| !hit.contains(t)) {
                        full.push(pencil.hyperplane(t));
                    }
                }
            }
            for &(t, extra) in pencil.touched {
                if pencil.base + extra == k {
                    full.push(pencil.hyperplane(t));
                }
            }
        },
        |(mut a, wa), (b, wb)| {
            a.extend(b);
            (a, wa.max(wb))
        },
    );
    if worst > k {
        return Err(Error::ArcPropertyViolated {
            k: set.k,
            count: worst as usize,
        });
    }
    full.sort_unstable();
    Ok(full
        .into_iter()
        .map(|coords| Hyperplane { coords })
        .collect())
}

/// Calls `visit(coords, rank)` for every point of the hyperplane `h`; `coords`
/// are normalized and `rank` is the point's rank in `P^{k-1}`.
pub fn for_each_point_on(field: &Field, h: &[Elem], mut visit: impl FnMut(&[Elem], u64)) {
    let k = h.len();
    let q = field.q();
    let space = ProjSpace::new(q, k);
    // Solve for the last nonzero dual coordinate: x_s = Σ_{j≠s} c_j x_j.
    let s = h
        .iter()
        .rposition(|v| !v.is_zero())
        .expect("nonzero hyperplane");
    let neg_inv = field.neg(field.recip(h[s]).expect("nonzero"));
    let c: Vec<Elem> = h.iter().map(|&v| field.mul(v, neg_inv)).collect();
    let free: Vec<usize> = (0..k).filter(|&j| j != s).collect();
    let m = free.len();
    let inner = free[m - 1];
    let mut x = vec![Elem::ZERO; k];
    for pivot in (0..m).rev() {
        // A free pivot after s forces x_s = 0, so x is normalized either way.
        let xp = free[pivot];
        let tail = m - 1 - pivot;
        x.fill(Elem::ZERO);
        x[xp] = Elem::ONE;
        if tail == 0 {
            x[s] = c[xp];
            visit(&x, space.rank(&x));
            continue;
        }
        let outer = (q as u64).pow(tail as u32 - 1);
        let weight = |j: usize| if j > xp { space.weights[j] } else { 0 };
        for o in 0..outer {
            let mut rest = o;
            for &j in free[pivot + 1..m - 1].iter().rev() {
                x[j] = Elem::raw((rest % q as u64) as u32);
                rest /= q as u64;
            }
            let mut partial = c[xp];
            let mut rank = space.offsets[xp];
            for &j in &free[pivot + 1..m - 1] {
                partial = field.add(partial, field.mul(c[j], x[j]));
                rank += x[j].encoding() as u64 * weight(j);
            }
            for v in 0..q {
                let v = Elem::raw(v);
                x[inner] = v;
                x[s] = field.add(partial, field.mul(c[inner], v));
                let r =
                    rank + v.encoding() as u64 * weight(inner) + x[s].encoding() as u64 * weight(s);
                visit(&x, r);
            }
        }
    }
}

/// Bitset over the points of `P^{k-1}(F_q)` marking the set and every point
/// of a full hyperplane.
fn blocked_points(set: &PointSet, full: &[Hyperplane]) -> Vec<u64> {
    let space = ProjSpace::new(set.field.q(), set.k);
    let words = space.count().div_ceil(64) as usize;
    let field = &*set.field;
    let mut blocked = full
        .par_iter()
        .fold(
            || vec![0u64; words],
            |mut bits, h| {
                for_each_point_on(field, h.coords(), |_, r| {
                    bits[(r / 64) as usize] |= 1 << (r % 64)
                });
                bits
            },
        )
        .reduce(
            || vec![0u64; words],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    for p in set.iter() {
        let r = space.rank(p);
        blocked[(r / 64) as usize] |= 1 << (r % 64);
    }
    blocked
}

/// Points `Q ∉ set` such that every hyperplane through `Q` meets the set in at
/// most `k - 1` points, in increasing coordinate order.
pub fn addable_points(set: &PointSet, budget: &Budget) -> Result<Vec<ProjPoint>> {
    let full = full_hyperplanes(set, budget)?;
    let per_hyperplane = ProjSpace::new(set.field.q(), set.k - 1).count();
    budget.charge(
        "full hyperplane marking",
        (full.len() as u64).saturating_mul(per_hyperplane),
    )?;
    let space = ProjSpace::new(set.field.q(), set.k);
    let blocked = blocked_points(set, &full);
    let mut out = Vec::new();
    for (w, &bits) in blocked.iter().enumerate() {
        let mut free = !bits;
        while free != 0 {
            let r = w as u64 * 64 + free.trailing_zeros() as u64;
            if r >= space.count() {
                break;
            }
            out.push(space.point(r));
            free &= free - 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub added: Vec<ProjPoint>,
    pub complete: bool,
}

/// Greedily adds the smallest addable point until none remain or `max_add`
/// points have been added.
pub fn complete_arc(set: &PointSet, max_add: usize, budget: &Budget) -> Result<Completion> {
    let mut current = set.clone();
    let mut added = Vec::new();
    loop {
        let addable = addable_points(&current, budget)?;
        let Some(first) = addable.into_iter().next() else {
            return Ok(Completion {
                added,
                complete: true,
            });
        };
        if added.len() == max_add {
            return Ok(Completion {
                added,
                complete: false,
            });
        }
        current.push(&first)?;
        added.push(first);
    }
}

/// Largest number of points, at most `limit`, that can be added to the set
/// one after another keeping every hyperplane at `k` points or fewer, over all
/// choices. Searches increasing sequences of addable points depth first.
pub fn largest_extension(set: &PointSet, limit: usize, budget: &Budget) -> Result<usize> {
    fn dfs(
        set: &PointSet,
        after: Option<&ProjPoint>,
        depth: usize,
        limit: usize,
        budget: &Budget,
    ) -> Result<usize> {
        if depth == limit {
            return Ok(depth);
        }
        let mut best = depth;
        for p in addable_points(set, budget)? {
            if after.is_some_and(|a| p <= *a) {
                continue;
            }
            let mut next = set.clone();
            next.push(&p)?;
            best = best.max(dfs(&next, Some(&p), depth + 1, limit, budget)?);
            if best == limit {
                break;
            }
        }
        Ok(best)
    }
    dfs(set, None, 0, limit, budget)
}
