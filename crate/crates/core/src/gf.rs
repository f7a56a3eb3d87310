//! Exact arithmetic in `F_q`, `q = p^r`.
//!
//! Elements are stored as their canonical integer encoding `e = sum c_i p^i`,
//! where `(c_0, ..., c_{r-1})` are the coefficients in the polynomial basis
//! `F_p[X] / (m(X))`. The modulus `m` is the lexicographically smallest monic
//! irreducible polynomial of degree `r`, comparing coefficients from degree 0
//! upward, so encodings are reproducible.
//!
//! Small fields carry precomputed log/exp tables (and, when tiny, full addition
//! and multiplication tables); larger ones fall back to modular polynomial
//! arithmetic.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;
pub const DEFAULT_TABLE_THRESHOLD: u64 = 4096;

const MUL_TABLE_MAX: u64 = 256;
const ADD_TABLE_MAX: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    /// Largest admissible order `p^r`.
    pub max_order: u64,
    /// Log/exp tables are built when `q` is at most this.
    pub table_threshold: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            max_order: DEFAULT_MAX_ORDER,
            table_threshold: DEFAULT_TABLE_THRESHOLD,
        }
    }
}

/// A field element, identified by its canonical encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Caller guarantees `v` is below the field order.
    #[inline]
    pub(crate) const fn raw(v: u32) -> Elem {
        Elem(v)
    }

    #[inline]
    pub fn encoding(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    mul: Option<Vec<u32>>,
    add: Option<Vec<u32>>,
}

pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    tables: Option<Tables>,
    non_residue: Option<Elem>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// JSON descriptor `{"p": .., "r": .., "modulus": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^r` with `p` prime.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut r = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, r))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, coefficients low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let idx = dr - db + i;
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for tail in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = tail;
            for _ in 0..d {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `r` over `F_p`, coefficient tuples
/// `(c_0, ..., c_{r-1})` compared lexicographically with `c_0` first.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(r);
    for idx in 0..count {
        // c_0 is the most significant digit of idx.
        let mut coeffs = vec![0u32; r as usize + 1];
        let mut t = idx;
        for i in (0..r as usize).rev() {
            coeffs[i] = (t % p as u64) as u32;
            t /= p as u64;
        }
        coeffs[r as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    pub fn new(p: u64, r: u32) -> Result<Field> {
        Field::with_config(p, r, FieldConfig::default())
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, r) = prime_power(q)?;
        Field::new(p, r)
    }

    pub fn with_config(p: u64, r: u32, config: FieldConfig) -> Result<Field> {
        if r == 0 {
            return Err(Error::InvalidArgument(
                "extension degree must be at least 1".into(),
            ));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= config.max_order && q <= u32::MAX as u64)
            .ok_or(Error::Overflow {
                p,
                r,
                max: config.max_order,
            })?;
        let p32 = p as u32;
        let modulus = smallest_irreducible(p32, r);
        let pow_p = (0..r).map(|i| p32.pow(i)).collect();
        let mut field = Field {
            p: p32,
            r,
            q: q as u32,
            modulus,
            pow_p,
            tables: None,
            non_residue: None,
        };
        if q <= config.table_threshold {
            field.tables = Some(field.build_tables());
        }
        if p != 2 {
            field.non_residue = field
                .elements()
                .skip(1)
                .find(|&a| field.pow(a, (q - 1) / 2) != Elem::ONE);
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as u64;
        let order = q - 1;
        let factors = distinct_prime_factors(order);
        let g = self
            .elements()
            .skip(1)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_slow(g, order / l) != Elem::ONE)
            })
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = Elem::ONE;
        for i in 0..order as usize {
            exp[i] = acc.0;
            exp[i + order as usize] = acc.0;
            log[acc.0 as usize] = i as u32;
            acc = self.mul_slow(acc, g);
        }
        let mut tables = Tables {
            exp,
            log,
            mul: None,
            add: None,
        };
        if q <= MUL_TABLE_MAX {
            let mut mul = vec![0u32; (q * q) as usize];
            for a in 1..q as usize {
                for b in 1..q as usize {
                    let l = tables.log[a] + tables.log[b];
                    mul[a * q as usize + b] = tables.exp[l as usize];
                }
            }
            tables.mul = Some(mul);
        }
        if self.r > 1 && q <= ADD_TABLE_MAX {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..self.q {
                for b in 0..self.q {
                    add[(a * self.q + b) as usize] = self.add_digits(Elem(a), Elem(b)).0;
                }
            }
            tables.add = Some(add);
        }
        tables
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Validates an encoding.
    pub fn elem(&self, encoding: u64) -> Result<Elem> {
        if encoding < self.q as u64 {
            Ok(Elem(encoding as u32))
        } else {
            Err(Error::FieldMismatch {
                encoding,
                q: self.q as u64,
            })
        }
    }

    /// Element of the prime subfield congruent to `v` mod `p`.
    pub fn from_i64(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone + use<> {
        (0..self.q).map(Elem)
    }

    /// Polynomial-basis coefficients, degree 0 first.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut e = a.0;
        (0..self.r)
            .map(|_| {
                let d = e % self.p;
                e /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.r as usize {
            return Err(Error::DimensionMismatch {
                expected: self.r as usize,
                got: digits.len(),
            });
        }
        let mut e = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            if d >= self.p {
                return Err(Error::FieldMismatch {
                    encoding: d as u64,
                    q: self.p as u64,
                });
            }
            e += d as u64 * self.pow_p[i] as u64;
        }
        Ok(Elem(e as u32))
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for i in 0..self.r as usize {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * self.pow_p[i];
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    fn neg_digits(&self, a: Elem) -> Elem {
        let mut x = a.0;
        let mut out = 0u32;
        for i in 0..self.r as usize {
            let d = (self.p - x % self.p) % self.p;
            out += d * self.pow_p[i];
            x /= self.p;
        }
        Elem(out)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.r == 1 {
            return Elem((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        let p = self.p as u64;
        let r = self.r as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (r..2 * r - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            // X^r = -(m_0 + ... + m_{r-1} X^{r-1})
            for i in 0..r {
                let m = self.modulus[i] as u64;
                prod[deg - r + i] = (prod[deg - r + i] + (p - c) * m) % p;
            }
        }
        let mut e = 0u32;
        for (&c, &w) in prod.iter().zip(&self.pow_p).take(r) {
            e += c as u32 * w;
        }
        Elem(e)
    }

    fn pow_slow(&self, mut b: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.r == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        match self.tables.as_ref().and_then(|t| t.add.as_ref()) {
            Some(add) => Elem(add[(a.0 * self.q + b.0) as usize]),
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a.0 == 0 {
            return a;
        }
        if self.r == 1 {
            return Elem(self.p - a.0);
        }
        if self.p == 2 {
            return a;
        }
        match &self.tables {
            // -1 = g^((q-1)/2) in odd characteristic
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + (self.q - 1) / 2) as usize]),
            None => self.neg_digits(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.r == 1 {
            return Elem(if a.0 >= b.0 {
                a.0 - b.0
            } else {
                a.0 + self.p - b.0
            });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if let Some(mul) = &t.mul {
                    return Elem(mul[(a.0 * self.q + b.0) as usize]);
                }
                if a.0 == 0 || b.0 == 0 {
                    return Elem::ZERO;
                }
                Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Multiplicative inverse, `None` for zero.
    #[inline]
    pub fn recip(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                Elem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            None => self.pow_slow(a, self.q as u64 - 2),
        })
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        self.recip(a).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, b: Elem, e: u64) -> Elem {
        match &self.tables {
            Some(t) => {
                if b.0 == 0 {
                    return if e == 0 { Elem::ONE } else { Elem::ZERO };
                }
                let l = t.log[b.0 as usize] as u64 * (e % (self.q as u64 - 1));
                Elem(t.exp[(l % (self.q as u64 - 1)) as usize])
            }
            None => self.pow_slow(b, e),
        }
    }

    pub fn is_square(&self, a: Elem) -> bool {
        if a.0 == 0 || self.p == 2 {
            return true;
        }
        match &self.tables {
            Some(t) => t.log[a.0 as usize] % 2 == 0,
            None => self.pow(a, (self.q as u64 - 1) / 2) == Elem::ONE,
        }
    }

    /// A square root of `a`, choosing the root with the smaller encoding.
    pub fn sqrt(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return Some(a);
        }
        if self.p == 2 {
            return Some(self.pow(a, self.q as u64 / 2));
        }
        let root = match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize];
                if l % 2 == 1 {
                    return None;
                }
                Elem(t.exp[(l / 2) as usize])
            }
            None => self.tonelli_shanks(a)?,
        };
        let other = self.neg(root);
        Some(root.min(other))
    }

    fn tonelli_shanks(&self, a: Elem) -> Option<Elem> {
        let q1 = self.q as u64 - 1;
        let s = q1.trailing_zeros();
        let m = q1 >> s;
        let z = self.non_residue.expect("odd field has a non-residue");
        let mut c = self.pow(z, m);
        let mut x = self.pow(a, m.div_ceil(2));
        let mut t = self.pow(a, m);
        let mut big_m = s;
        while t != Elem::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != Elem::ONE {
                t2 = self.square(t2);
                i += 1;
                if i == big_m {
                    return None;
                }
            }
            let mut b = c;
            for _ in 0..big_m - i - 1 {
                b = self.square(b);
            }
            x = self.mul(x, b);
            c = self.square(b);
            t = self.mul(t, c);
            big_m = i;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_examples() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.modulus(), &[0, 1]);
        let f121 = Field::new(11, 2).unwrap();
        assert_eq!(f121.q(), 121);
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Field::new(3, 13), Err(Error::Overflow { .. })));
    }

    #[test]
    fn modulus_is_smallest_irreducible() {
        // x^2 + 1 is irreducible over F_3 and F_11 since -1 is a non-square there.
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(11, 2).unwrap().modulus(), &[1, 0, 1]);
        // over F_5, x^2 + 1 splits (-1 = 2^2) but x^2 + x + 1 has discriminant -3 = 2, a non-square.
        assert_eq!(Field::new(5, 2).unwrap().modulus(), &[1, 1, 1]);
        // over F_2: c_0 = 0 and x^3 + 1 are reducible; (c_0, c_1, c_2) = (1, 0, 1) comes next.
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
    }

    #[test]
    fn f5_examples() {
        let f = Field::new(5, 1).unwrap();
        let e = |v| f.elem(v).unwrap();
        assert_eq!(f.mul(e(2), e(3)), e(1));
        assert_eq!(f.inv(e(4)).unwrap(), e(4));
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
        assert!(f.is_square(e(4)));
        assert_eq!(f.sqrt(e(4)), Some(e(2)));
        assert!(!f.is_square(e(2)));
        assert_eq!(f.sqrt(e(2)), None);
        assert_eq!(f.sqrt(Elem::ZERO), Some(Elem::ZERO));
        assert!(matches!(f.elem(5), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn generator_of_f9_is_non_square() {
        let f = Field::new(3, 2).unwrap();
        for g in f.elements().skip(1) {
            let order = (1..=8u64).find(|&e| f.pow(g, e) == Elem::ONE).unwrap();
            if order == 8 {
                assert!(!f.is_square(g));
            }
        }
    }

    fn all_small_fields() -> Vec<Field> {
        [
            (3, 1),
            (5, 1),
            (7, 1),
            (3, 2),
            (11, 1),
            (13, 1),
            (2, 4),
            (5, 2),
            (3, 3),
        ]
        .iter()
        .map(|&(p, r)| Field::new(p, r).unwrap())
        .collect()
    }

    #[test]
    fn axioms_exhaustive_small() {
        for f in all_small_fields() {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.mul(a, Elem::ONE), a);
                assert_eq!(f.pow(a, f.q() as u64), a, "Frobenius");
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.pow(a, f.q() as u64 - 1), Elem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn square_counts() {
        for f in all_small_fields().into_iter().filter(|f| f.is_odd()) {
            let squares = f.elements().skip(1).filter(|&a| f.is_square(a)).count();
            assert_eq!(squares as u32, (f.q() - 1) / 2);
            for a in f.elements() {
                match f.sqrt(a) {
                    Some(s) => {
                        assert_eq!(f.square(s), a);
                        assert!(s <= f.neg(s));
                    }
                    None => assert!(!f.is_square(a)),
                }
            }
        }
    }

    #[test]
    fn untabled_field_agrees_with_tables() {
        let cfg = FieldConfig {
            table_threshold: 0,
            ..FieldConfig::default()
        };
        let plain = Field::with_config(11, 2, cfg).unwrap();
        let tabled = Field::new(11, 2).unwrap();
        assert!(!plain.has_tables() && tabled.has_tables());
        for a in tabled.elements() {
            assert_eq!(plain.sqrt(a), tabled.sqrt(a));
            assert_eq!(plain.neg(a), tabled.neg(a));
            assert_eq!(plain.recip(a), tabled.recip(a));
            for b in tabled.elements().step_by(7) {
                assert_eq!(plain.mul(a, b), tabled.mul(a, b));
                assert_eq!(plain.add(a, b), tabled.add(a, b));
            }
        }
    }

    #[test]
    fn large_extension_field_sqrt() {
        let f = Field::new(7, 6).unwrap();
        assert_eq!(f.q(), 117_649);
        assert!(!f.has_tables());
        for e in [1u64, 2, 3, 50, 1000, 117_648] {
            let a = f.elem(e).unwrap();
            let sq = f.square(a);
            let s = f.sqrt(sq).unwrap();
            assert!(s == a || s == f.neg(a));
            assert_eq!(f.pow(a, f.q() as u64), a);
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(121).unwrap(), (11, 2));
        assert_eq!(prime_power(128).unwrap(), (2, 7));
        assert_eq!(prime_power(13).unwrap(), (13, 1));
        assert_eq!(prime_power(12), Err(Error::NotPrimePower(12)));
        assert_eq!(prime_power(1), Err(Error::NotPrimePower(1)));
    }

    #[test]
    fn f121_axioms_randomized() {
        use rand::{Rng, SeedableRng};
        let f = Field::new(11, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(121);
        for _ in 0..100_000 {
            let [a, b, c] = [(); 3].map(|_| Elem(rng.gen_range(0..121)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(a, b), f.mul_slow(a, b));
        }
    }

    proptest! {
        #[test]
        fn encoding_round_trip(p_idx in 0usize..5, r in 1u32..4, e in any::<u32>()) {
            let p = [3u64, 5, 7, 11, 13][p_idx];
            let f = Field::new(p, r).unwrap();
            let a = f.elem((e % f.q()) as u64).unwrap();
            prop_assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }

        #[test]
        fn f121_axioms_sampled(a in 0u32..121, b in 0u32..121, c in 0u32..121) {
            let f = Field::new(11, 2).unwrap();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        }
    }
}
