//! Linear codes over `F_q` given by generator matrices: minimum distance by two
//! independent routes, dual distance, Singleton defects, classification, and
//! extension by extra columns.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::curve::EllipticCurve;
use crate::error::{Error, Result};
use crate::geometry::{self, EllipticArc, PointSet, ProjPoint, ProjSpace};
use crate::gf::{Elem, Field};
use crate::linalg::rref;

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<Field>,
    generator: Vec<Vec<Elem>>,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    n: usize,
}

impl PartialEq for LinearCode {
    /// Equality of the spanned subspaces.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.basis == other.basis
    }
}

impl LinearCode {
    pub fn new(field: Arc<Field>, generator: Vec<Vec<Elem>>) -> Result<Self> {
        let n = generator.first().map_or(0, Vec::len);
        for row in &generator {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for v in row {
                field.elem(v.encoding() as u64)?;
            }
        }
        let mut basis = generator.clone();
        let pivots = rref(&field, &mut basis);
        if pivots.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(LinearCode {
            field,
            generator,
            basis,
            pivots,
            n,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension, the rank of the generator matrix.
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn generator(&self) -> &[Vec<Elem>] {
        &self.generator
    }

    /// Reduced row echelon basis.
    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    /// Columns of the echelon basis as points of `F_q^k` (not normalized).
    pub fn basis_columns(&self) -> PointSet {
        let k = self.k();
        let mut set = PointSet::new(self.field.clone(), k);
        for j in 0..self.n {
            let col: Vec<Elem> = self.basis.iter().map(|r| r[j]).collect();
            set.push_raw(&col);
        }
        set
    }

    /// Parity-check matrix `H` with `G H^T = 0`, one row per non-pivot column.
    pub fn parity_check(&self) -> Vec<Vec<Elem>> {
        let f = &*self.field;
        (0..self.n)
            .filter(|j| !self.pivots.contains(j))
            .map(|j| {
                let mut h = vec![Elem::ZERO; self.n];
                h[j] = Elem::ONE;
                for (i, &p) in self.pivots.iter().enumerate() {
                    h[p] = f.neg(self.basis[i][j]);
                }
                h
            })
            .collect()
    }

    pub fn dual(&self) -> Result<LinearCode> {
        LinearCode::new(self.field.clone(), self.parity_check())
    }

    /// Appends `column` (one entry per generator row) as coordinate `n + 1`.
    pub fn extend(&self, column: &[Elem]) -> Result<LinearCode> {
        if column.len() != self.generator.len() {
            return Err(Error::DimensionMismatch {
                expected: self.generator.len(),
                got: column.len(),
            });
        }
        let rows = self
            .generator
            .iter()
            .zip(column)
            .map(|(r, &c)| {
                let mut r = r.clone();
                r.push(c);
                r
            })
            .collect();
        LinearCode::new(self.field.clone(), rows)
    }

    /// Restriction to the first `len` coordinates.
    pub fn project(&self, len: usize) -> Result<LinearCode> {
        let rows = self
            .generator
            .iter()
            .map(|r| r[..len.min(self.n)].to_vec())
            .collect();
        LinearCode::new(self.field.clone(), rows)
    }
}

/// The code spanned by the rows of `G_k(E)`, whose columns are `φ_k(P_i)`.
pub fn generator_matrix(curve: &EllipticCurve, k: usize) -> Result<LinearCode> {
    let arc = EllipticArc::new(curve, k)?;
    code_of_points(arc.set())
}

/// The code whose generator columns are the points of `set`.
pub fn code_of_points(set: &PointSet) -> Result<LinearCode> {
    let rows = (0..set.k())
        .map(|i| set.iter().map(|p| p[i]).collect())
        .collect();
    LinearCode::new(set.field().clone(), rows)
}

fn message_count(q: u32, k: usize) -> u64 {
    ProjSpace::new(q, k).count()
}

/// Visits every nonzero codeword up to scalars as `(message rank, weight)`.
/// Messages are normalized tuples over the echelon basis; the last basis row
/// is added incrementally so each codeword costs `O(n)`.
fn for_each_codeword_weight<T, I, V, R>(code: &LinearCode, init: I, visit: V, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    V: Fn(&mut T, &[Elem], usize) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    let f = &*code.field;
    let k = code.k();
    let n = code.n;
    let q = f.q();
    let last = &code.basis[k - 1];
    let weight = |c: &[Elem]| c.iter().filter(|v| !v.is_zero()).count();
    if k == 1 {
        let mut acc = init();
        visit(&mut acc, &[Elem::ONE], weight(last));
        return acc;
    }
    let prefixes = ProjSpace::new(q, k - 1);
    let total = prefixes.count() + 1;
    (0..total)
        .into_par_iter()
        .fold(
            || (init(), vec![Elem::ZERO; k], vec![Elem::ZERO; n]),
            |(mut acc, mut msg, mut base), r| {
                if r == total - 1 {
                    msg.fill(Elem::ZERO);
                    msg[k - 1] = Elem::ONE;
                    visit(&mut acc, &msg, weight(last));
                    return (acc, msg, base);
                }
                prefixes.unrank(r, &mut msg[..k - 1]);
                base.fill(Elem::ZERO);
                for (i, row) in code.basis[..k - 1].iter().enumerate() {
                    let a = msg[i];
                    if a.is_zero() {
                        continue;
                    }
                    for (b, &g) in base.iter_mut().zip(row) {
                        *b = f.add(*b, f.mul(a, g));
                    }
                }
                for t in f.elements() {
                    msg[k - 1] = t;
                    let w = base
                        .iter()
                        .zip(last)
                        .filter(|&(&b, &g)| !f.add(b, f.mul(t, g)).is_zero())
                        .count();
                    visit(&mut acc, &msg, w);
                }
                (acc, msg, base)
            },
        )
        .map(|(acc, _, _)| acc)
        .reduce(&init, &reduce)
}

/// Minimum weight of a nonzero codeword, by enumerating the codewords.
pub fn min_distance(code: &LinearCode, budget: &Budget) -> Result<usize> {
    let estimate = message_count(code.field.q(), code.k()).saturating_mul(code.n as u64);
    budget.charge("codeword enumeration", estimate)?;
    Ok(for_each_codeword_weight(
        code,
        || usize::MAX,
        |best, _, w| *best = (*best).min(w),
        usize::min,
    ))
}

/// Minimum distance as `n` minus the largest number of generator columns on a
/// common hyperplane of `P^{k-1}`.
pub fn min_distance_by_secants(code: &LinearCode, budget: &Budget) -> Result<usize> {
    if code.k() == 1 {
        return Ok(code.basis[0].iter().filter(|v| !v.is_zero()).count());
    }
    let max = geometry::max_secant(&code.basis_columns(), budget)?;
    Ok(code.n - max)
}

fn binomial_sum(n: usize, k: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for m in 1..=k.min(n) {
        c = c.saturating_mul((n + 1 - m) as u64) / m as u64;
        total = total.saturating_add(c);
    }
    total
}

/// Reduces `v` against an echelon list of `(pivot, row)` with unit pivots.
fn reduce_against(f: &Field, echelon: &[(usize, Vec<Elem>)], v: &mut [Elem]) {
    for (p, row) in echelon {
        let c = v[*p];
        if !c.is_zero() {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }
}

fn dependent_search(
    f: &Field,
    cols: &[Vec<Elem>],
    start: usize,
    echelon: &mut Vec<(usize, Vec<Elem>)>,
    best: &AtomicUsize,
) {
    let depth = echelon.len();
    for j in start..cols.len() {
        if depth + 1 >= best.load(Ordering::Relaxed) {
            return;
        }
        let mut v = cols[j].clone();
        reduce_against(f, echelon, &mut v);
        match v.iter().position(|x| !x.is_zero()) {
            None => {
                best.fetch_min(depth + 1, Ordering::Relaxed);
                return;
            }
            Some(p) => {
                let inv = f.recip(v[p]).expect("nonzero");
                v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                echelon.push((p, v));
                dependent_search(f, cols, j + 1, echelon, best);
                echelon.pop();
            }
        }
    }
}

/// Minimum distance of the dual code: the size of the smallest linearly
/// dependent set of generator columns. A code with trivial dual (`n = k`)
/// has no dependent set; `n + 1` is returned for it.
pub fn dual_min_distance(code: &LinearCode, budget: &Budget) -> Result<usize> {
    let k = code.k();
    let n = code.n;
    let estimate = binomial_sum(n, k).saturating_mul((k * k) as u64);
    budget.charge("dependent column search", estimate)?;
    let cols: Vec<Vec<Elem>> = code.basis_columns().iter().map(<[Elem]>::to_vec).collect();
    // Any k + 1 columns of a rank-k matrix are dependent.
    let best = AtomicUsize::new(if n > k { k + 1 } else { n + 1 });
    let f = &*code.field;
    (0..n).into_par_iter().for_each(|first| {
        let mut echelon = Vec::with_capacity(k);
        dependent_search(f, &cols, first, &mut echelon, &best);
    });
    Ok(best.into_inner())
}

/// Dual distance by enumerating the dual code built from the parity-check matrix.
pub fn dual_min_distance_by_enumeration(code: &LinearCode, budget: &Budget) -> Result<usize> {
    if code.k() == code.n {
        return Ok(code.n + 1);
    }
    min_distance(&code.dual()?, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    #[serde(rename = "MDS")]
    Mds,
    #[serde(rename = "NMDS")]
    Nmds,
    #[serde(rename = "AMDS-not-NMDS")]
    AmdsNotNmds,
    #[serde(rename = "OTHER")]
    Other,
}

impl Label {
    pub fn from_defects(s: usize, s_dual: usize) -> Label {
        match (s, s_dual) {
            (0, _) => Label::Mds,
            (1, 1) => Label::Nmds,
            (1, d) if d >= 2 => Label::AmdsNotNmds,
            _ => Label::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Mds => "MDS",
            Label::Nmds => "NMDS",
            Label::AmdsNotNmds => "AMDS-not-NMDS",
            Label::Other => "OTHER",
        }
    }
}

/// JSON form `{"n", "k", "d", "dDual", "s", "sDual", "label"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d_dual: usize,
    pub s: usize,
    pub s_dual: usize,
    pub label: Label,
}

impl Classification {
    pub fn from_parameters(n: usize, k: usize, d: usize, d_dual: usize) -> Self {
        let s = n + 1 - k - d;
        // The dual has length n and dimension n - k.
        let s_dual = (k + 1).saturating_sub(d_dual);
        Classification {
            n,
            k,
            d,
            d_dual,
            s,
            s_dual,
            label: Label::from_defects(s, s_dual),
        }
    }
}

/// Computes `d` by codeword enumeration when the budget allows and by the
/// hyperplane scan otherwise, then `d⊥` and the label.
pub fn classify(code: &LinearCode, budget: &Budget) -> Result<Classification> {
    let estimate = message_count(code.field.q(), code.k()).saturating_mul(code.n as u64);
    let d = if budget.fits(estimate) {
        min_distance(code, budget)?
    } else {
        min_distance_by_secants(code, budget)?
    };
    let d_dual = dual_min_distance(code, budget)?;
    Ok(Classification::from_parameters(code.n, code.k(), d, d_dual))
}

/// Whether an `[n + h, k, d + h]` code projecting onto `code` exists, decided
/// by brute force over the added columns.
pub fn h_extendability_oracle(code: &LinearCode, h: usize, budget: &Budget) -> Result<bool> {
    if h == 0 {
        return Ok(true);
    }
    let f = &*code.field;
    let k = code.k();
    let space = ProjSpace::new(f.q(), k);
    let messages = space.count();
    budget.charge(
        "codeword enumeration",
        messages.saturating_mul(code.n as u64),
    )?;
    // Messages light enough to need help from the added coordinates.
    let mut weights: Vec<(Vec<Elem>, usize)> = for_each_codeword_weight(
        code,
        Vec::new,
        |out, msg, w| out.push((msg.to_vec(), w)),
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    let d = weights.iter().map(|m| m.1).min().expect("nonzero code");
    weights.retain(|m| m.1 < d + h);
    weights.sort();
    budget.charge(
        "single column test",
        messages.saturating_mul(weights.len() as u64),
    )?;
    let dot = |x: &[Elem], c: &[Elem]| {
        x.iter()
            .zip(c)
            .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    };
    // A column of a valid h-extension gives a (d + 1) extension on its own,
    // since dropping each other added column lowers d by at most one.
    let single: Vec<Vec<bool>> = (0..messages)
        .into_par_iter()
        .filter_map(|r| {
            let c = space.point(r);
            let hits: Vec<bool> = weights
                .iter()
                .map(|(x, _)| !dot(x, c.coords()).is_zero())
                .collect();
            let ok = weights
                .iter()
                .zip(&hits)
                .all(|((_, w), &hit)| w + hit as usize > d);
            ok.then_some(hits)
        })
        .collect();
    if single.is_empty() {
        return Ok(false);
    }
    let combos = (single.len() as u64).saturating_pow(h as u32);
    budget.charge(
        "column multiset search",
        combos.saturating_mul(weights.len() as u64),
    )?;
    let need: Vec<usize> = weights.iter().map(|(_, w)| d + h - w).collect();
    let mut hits = vec![0usize; weights.len()];
    Ok(multiset_search(&single, &need, h, 0, &mut hits))
}

fn multiset_search(
    single: &[Vec<bool>],
    need: &[usize],
    left: usize,
    start: usize,
    hits: &mut [usize],
) -> bool {
    if left == 0 {
        return hits.iter().zip(need).all(|(h, n)| h >= n);
    }
    // Every message still short must be hit by each remaining column.
    if hits.iter().zip(need).any(|(h, n)| h + left < *n) {
        return false;
    }
    for c in start..single.len() {
        for (h, &b) in hits.iter_mut().zip(&single[c]) {
            *h += b as usize;
        }
        let found = multiset_search(single, need, left - 1, c, hits);
        for (h, &b) in hits.iter_mut().zip(&single[c]) {
            *h -= b as usize;
        }
        if found {
            return true;
        }
    }
    false
}

/// Columns `c` of `P^{k-1}` with `d(code + c) = d(code) + 1`.
pub fn extending_columns(code: &LinearCode, budget: &Budget) -> Result<Vec<ProjPoint>> {
    let f = &*code.field;
    let space = ProjSpace::new(f.q(), code.k());
    let d = min_distance(code, budget)?;
    let minimal: Vec<Vec<Elem>> = for_each_codeword_weight(
        code,
        Vec::new,
        |out, msg, w| {
            if w == d {
                out.push(msg.to_vec())
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    budget.charge(
        "single column test",
        space.count().saturating_mul(minimal.len() as u64),
    )?;
    Ok(space
        .points()
        .filter(|c| {
            minimal.iter().all(|x| {
                !x.iter()
                    .zip(c.coords())
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
                    .is_zero()
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::curve_scan;
    use crate::geometry::addable_points;

    fn field(p: u64, r: u32) -> Arc<Field> {
        Arc::new(Field::new(p, r).unwrap())
    }

    fn y2_x3_plus_1_f5() -> EllipticCurve {
        EllipticCurve::short(field(5, 1), Elem::ZERO, Elem::ZERO, Elem::ONE).unwrap()
    }

    /// Every message vector, not just projective representatives.
    fn brute_min_distance(code: &LinearCode) -> usize {
        let f = code.field();
        let q = f.q() as u64;
        let k = code.k();
        let mut best = usize::MAX;
        for idx in 1..q.pow(k as u32) {
            let x: Vec<Elem> = (0..k)
                .map(|i| f.elem(idx / q.pow(i as u32) % q).unwrap())
                .collect();
            let mut w = 0;
            for j in 0..code.n() {
                let v = (0..k).fold(Elem::ZERO, |acc, i| {
                    f.add(acc, f.mul(x[i], code.basis()[i][j]))
                });
                w += !v.is_zero() as usize;
            }
            best = best.min(w);
        }
        best
    }

    #[test]
    fn y2_x3_plus_1_code_f5() {
        let code = generator_matrix(&y2_x3_plus_1_f5(), 3).unwrap();
        assert_eq!((code.n(), code.k()), (6, 3));
        let last: Vec<Elem> = code.generator().iter().map(|r| r[5]).collect();
        assert_eq!(last, vec![Elem::ZERO, Elem::ZERO, Elem::ONE]);
        let b = Budget::default();
        let d = min_distance(&code, &b).unwrap();
        assert_eq!(d, brute_min_distance(&code));
        assert!(d == 3 || d == 4);
        assert_eq!(min_distance_by_secants(&code, &b).unwrap(), d);
        let dd = dual_min_distance(&code, &b).unwrap();
        assert_eq!(dd, dual_min_distance_by_enumeration(&code, &b).unwrap());
        let c = classify(&code, &b).unwrap();
        assert!(matches!(c.label, Label::Mds | Label::Nmds));
    }

    #[test]
    fn identity_and_zero_column() {
        let f = field(7, 1);
        let id: Vec<Vec<Elem>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Elem::ONE } else { Elem::ZERO })
                    .collect()
            })
            .collect();
        let code = LinearCode::new(f.clone(), id).unwrap();
        let b = Budget::default();
        assert_eq!(min_distance(&code, &b).unwrap(), 1);
        assert_eq!(min_distance_by_secants(&code, &b).unwrap(), 1);
        assert_eq!(dual_min_distance(&code, &b).unwrap(), 4);
        let with_zero = code.extend(&[Elem::ZERO; 3]).unwrap();
        assert_eq!(dual_min_distance(&with_zero, &b).unwrap(), 1);
        assert_eq!(
            LinearCode::new(f.clone(), vec![vec![Elem::ZERO; 4]]).unwrap_err(),
            Error::ZeroDimension
        );
    }

    #[test]
    fn parity_check_is_orthogonal() {
        let f = field(7, 1);
        for c in curve_scan(&f, 169, |_| true).unwrap().iter().step_by(17) {
            for k in 3..c.n().min(6) {
                let code = generator_matrix(c, k).unwrap();
                let h = code.parity_check();
                assert_eq!(h.len(), code.n() - k);
                for g in code.generator() {
                    for hr in &h {
                        let s = g
                            .iter()
                            .zip(hr)
                            .fold(Elem::ZERO, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                        assert!(s.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn distances_agree_across_routes_small_fields() {
        let b = Budget::default();
        for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            let f = field(p, r);
            for c in curve_scan(&f, 169, |_| true).unwrap().iter().step_by(5) {
                for k in 3..c.n().min(7) {
                    let code = generator_matrix(c, k).unwrap();
                    let d = min_distance(&code, &b).unwrap();
                    assert_eq!(d, min_distance_by_secants(&code, &b).unwrap());
                    if f.q() <= 5 {
                        assert_eq!(d, brute_min_distance(&code));
                    }
                    let dd = dual_min_distance(&code, &b).unwrap();
                    if code.n() - k <= 6 {
                        assert_eq!(dd, dual_min_distance_by_enumeration(&code, &b).unwrap());
                    }
                    assert!(d + k >= code.n() && d + k <= code.n() + 1);
                    assert!(dd >= k);
                }
            }
        }
    }

    #[test]
    fn extend_then_project_is_identity() {
        let code = generator_matrix(&y2_x3_plus_1_f5(), 3).unwrap();
        let ext = code.extend(&[Elem::ONE, Elem::ONE, Elem::ZERO]).unwrap();
        assert_eq!(ext.n(), 7);
        assert_eq!(ext.project(6).unwrap(), code);
    }

    #[test]
    fn extension_by_addable_or_blocked_point() {
        let b = Budget::default();
        let f = field(5, 1);
        let mut saw_addable = false;
        let mut saw_blocked = false;
        for c in curve_scan(&f, 169, |s| s.n >= 4).unwrap() {
            let arc = EllipticArc::new(&c, 3).unwrap();
            let code = code_of_points(arc.set()).unwrap();
            let d = min_distance(&code, &b).unwrap();
            let addable = addable_points(arc.set(), &b).unwrap();
            for q in addable.iter().take(2) {
                let ext = code.extend(q.coords()).unwrap();
                assert_eq!(min_distance(&ext, &b).unwrap(), d + 1);
                saw_addable = true;
            }
            // A point on a full line keeps d.
            if let Some(h) = geometry::full_hyperplanes(arc.set(), &b).unwrap().first() {
                if let Some(p) = h.points(&f).into_iter().find(|p| !arc.set().contains(p)) {
                    let ext = code.extend(p.coords()).unwrap();
                    assert_eq!(min_distance(&ext, &b).unwrap(), d);
                    saw_blocked = true;
                }
            }
        }
        assert!(saw_addable && saw_blocked);
    }

    #[test]
    fn oracle_h0_and_extending_columns() {
        let b = Budget::default();
        let code = generator_matrix(&y2_x3_plus_1_f5(), 3).unwrap();
        assert!(h_extendability_oracle(&code, 0, &b).unwrap());
        let cols = extending_columns(&code, &b).unwrap();
        assert_eq!(
            h_extendability_oracle(&code, 1, &b).unwrap(),
            !cols.is_empty()
        );
        let mds = LinearCode::new(field(5, 1), vec![vec![Elem::ONE; 2]]).unwrap();
        // [2,1,2] repetition code extends to [3,1,3], [4,1,4], ...
        assert!(h_extendability_oracle(&mds, 3, &b).unwrap());
    }

    #[test]
    fn labels() {
        assert_eq!(Label::from_defects(0, 0), Label::Mds);
        assert_eq!(Label::from_defects(1, 1), Label::Nmds);
        assert_eq!(Label::from_defects(1, 2), Label::AmdsNotNmds);
        assert_eq!(Label::from_defects(2, 1), Label::Other);
        assert_eq!(Label::from_defects(1, 0), Label::Other);
        let c = Classification::from_parameters(21, 3, 18, 3);
        assert_eq!((c.s, c.s_dual, c.label), (1, 1, Label::Nmds));
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["dDual"], 3);
        assert_eq!(v["label"], "NMDS");
    }
}
