//! Finite fields GF(p^e) with full operation tables, plus untabled extension
//! fields GF(q^m) over a tabled base used by the Gabidulin construction.
//!
//! Elements are integers: the element `c_0 + c_1 x + ... + c_{e-1} x^{e-1}`
//! has representation `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::limits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {order} exceeds the configured ceiling {ceiling}")]
    AboveCeiling { order: u64, ceiling: u64 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields (orders {0} and {1})")]
    FieldMismatch(u64, u64),
    #[error("representation {rep} is out of range for a field of order {order}")]
    OutOfRange { rep: u64, order: u64 },
    #[error("coordinate vector has length {got}, expected {expected}")]
    CoordinateLength { got: usize, expected: usize },
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus coefficients, low degree first, length e+1.
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A tabled finite field. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || (self.t.q == other.t.q && self.t.modulus == other.t.modulus)
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.t.q.hash(state);
        self.t.modulus.hash(state);
    }
}

/// An element tagged with the order of its field, for the checked API.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub rep: u32,
    pub order: u32,
}

/// Builds GF(p^e) using the lexicographically smallest monic irreducible
/// modulus of degree e.
pub fn make_field(p: u32, e: u32) -> Result<Field, GfError> {
    Field::new(p, e)
}

impl Field {
    pub fn new(p: u32, e: u32) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        let ceiling = limits::field_ceiling();
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if order > ceiling {
            return Err(GfError::AboveCeiling { order, ceiling });
        }
        let prime = Self::prime(p);
        if e == 1 {
            return Ok(prime);
        }
        let ext = ExtField::new(&prime, e as usize)?;
        Ok(Self::from_ext(&ext))
    }

    /// Builds the field of order q, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrime(q))?;
        Self::new(p, e)
    }

    fn prime(p: u32) -> Field {
        let q = p as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u8;
                mul[a * q + b] = ((a * b) % q) as u8;
            }
        }
        Self::finish(p, 1, vec![0, 1], add, mul)
    }

    fn from_ext(ext: &ExtField) -> Field {
        let q = ext.order() as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q as u64 {
            for b in 0..q as u64 {
                add[a as usize * q + b as usize] = ext.add(a, b) as u8;
                mul[a as usize * q + b as usize] = ext.mul(a, b) as u8;
            }
        }
        Self::finish(ext.base.p(), ext.degree() as u32, ext.modulus.clone(), add, mul)
    }

    fn finish(p: u32, e: u32, modulus: Vec<u32>, add: Vec<u8>, mul: Vec<u8>) -> Field {
        let q = p.pow(e) as usize;
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }
        Field { t: Arc::new(Tables { p, e, q: q as u32, modulus, add, mul, neg, inv }) }
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }
    pub fn e(&self) -> u32 {
        self.t.e
    }
    pub fn q(&self) -> u32 {
        self.t.q
    }
    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    #[inline]
    pub fn add_raw(&self, a: u8, b: u8) -> u8 {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }
    #[inline]
    pub fn mul_raw(&self, a: u8, b: u8) -> u8 {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }
    #[inline]
    pub fn neg_raw(&self, a: u8) -> u8 {
        self.t.neg[a as usize]
    }
    #[inline]
    pub fn sub_raw(&self, a: u8, b: u8) -> u8 {
        self.add_raw(a, self.neg_raw(b))
    }
    /// Inverse; zero maps to zero, callers check beforehand.
    #[inline]
    pub fn inv_raw(&self, a: u8) -> u8 {
        self.t.inv[a as usize]
    }

    pub fn element(&self, rep: u32) -> Result<FieldElement, GfError> {
        if rep >= self.t.q {
            return Err(GfError::OutOfRange { rep: rep as u64, order: self.t.q as u64 });
        }
        Ok(FieldElement { rep, order: self.t.q })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { rep: 0, order: self.t.q }
    }
    pub fn one(&self) -> FieldElement {
        FieldElement { rep: 1, order: self.t.q }
    }

    fn check(&self, a: FieldElement, b: FieldElement) -> Result<(), GfError> {
        for x in [a, b] {
            if x.order != self.t.q {
                return Err(GfError::FieldMismatch(self.t.q as u64, x.order as u64));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a, b)?;
        Ok(FieldElement { rep: self.add_raw(a.rep as u8, b.rep as u8) as u32, order: a.order })
    }
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a, b)?;
        Ok(FieldElement { rep: self.sub_raw(a.rep as u8, b.rep as u8) as u32, order: a.order })
    }
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a, b)?;
        Ok(FieldElement { rep: self.mul_raw(a.rep as u8, b.rep as u8) as u32, order: a.order })
    }
    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a, a)?;
        Ok(FieldElement { rep: self.neg_raw(a.rep as u8) as u32, order: a.order })
    }
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a, a)?;
        if a.rep == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(FieldElement { rep: self.inv_raw(a.rep as u8) as u32, order: a.order })
    }
}

/// Returns (p, e) with q = p^e, or None if q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// GF(q^m) over a tabled base field GF(q). Elements are u64 indices
/// `sum c_i q^i`; nothing is tabled, so orders up to 2^63 are usable.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: Field,
    m: usize,
    /// Monic, low degree first, length m+1.
    modulus: Vec<u32>,
    order: u64,
}

impl ExtField {
    pub fn new(base: &Field, m: usize) -> Result<ExtField, GfError> {
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = base.q() as u64;
        let order = q.checked_pow(m as u32).filter(|&o| o < (1u64 << 63));
        let ceiling = limits::ext_field_ceiling();
        let order = match order {
            Some(o) if o <= ceiling => o,
            _ => {
                return Err(GfError::AboveCeiling {
                    order: order.unwrap_or(u64::MAX),
                    ceiling,
                })
            }
        };
        let modulus = smallest_irreducible(base, m);
        Ok(ExtField { base: base.clone(), m, modulus, order })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The coordinate vector of `a` over the base field, constant term first.
    pub fn ext_coords(&self, a: u64) -> Vec<u8> {
        let q = self.base.q() as u64;
        let mut out = vec![0u8; self.m];
        let mut r = a;
        for c in out.iter_mut() {
            *c = (r % q) as u8;
            r /= q;
        }
        out
    }

    pub fn from_coords(&self, coords: &[u8]) -> Result<u64, GfError> {
        if coords.len() != self.m {
            return Err(GfError::CoordinateLength { got: coords.len(), expected: self.m });
        }
        let q = self.base.q() as u64;
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            if c as u64 >= q {
                return Err(GfError::OutOfRange { rep: c as u64, order: q });
            }
            v = v * q + c as u64;
        }
        Ok(v)
    }

    fn pack(&self, c: &[u8]) -> u64 {
        let q = self.base.q() as u64;
        c.iter().rev().fold(0u64, |v, &x| v * q + x as u64)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.ext_coords(a), self.ext_coords(b));
        let s: Vec<u8> = x.iter().zip(&y).map(|(&u, &v)| self.base.add_raw(u, v)).collect();
        self.pack(&s)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.ext_coords(a), self.ext_coords(b));
        let s: Vec<u8> = x.iter().zip(&y).map(|(&u, &v)| self.base.sub_raw(u, v)).collect();
        self.pack(&s)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &self.base;
        let (x, y) = (self.ext_coords(a), self.ext_coords(b));
        let mut prod = vec![0u8; 2 * self.m];
        for (i, &u) in x.iter().enumerate() {
            if u == 0 {
                continue;
            }
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = f.add_raw(prod[i + j], f.mul_raw(u, v));
            }
        }
        // Reduce by the monic modulus from the top down.
        for deg in (self.m..2 * self.m).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &mc) in self.modulus[..self.m].iter().enumerate() {
                let t = f.mul_raw(c, mc as u8);
                let idx = deg - self.m + i;
                prod[idx] = f.sub_raw(prod[idx], t);
            }
            prod[deg] = 0;
        }
        self.pack(&prod[..self.m])
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.pow(a, self.order as u128 - 2))
    }

    /// The element x^j of the polynomial basis, for j < degree.
    pub fn basis_element(&self, j: usize) -> u64 {
        assert!(j < self.m, "basis index out of range");
        (self.base.q() as u64).pow(j as u32)
    }

    /// a^(q^i), the i-th Frobenius power over the base.
    pub fn frobenius(&self, a: u64, i: usize) -> u64 {
        let mut r = a;
        for _ in 0..i {
            r = self.pow(r, self.base.q() as u128);
        }
        r
    }
}

/// Polynomial remainder of `a` modulo monic `b` over the field (low first).
fn poly_rem(f: &Field, a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub_raw(r[shift + i], f.mul_raw(lead, bc));
            }
        }
        r.pop();
    }
    r
}

fn monic_from_index(q: u64, deg: usize, mut idx: u64) -> Vec<u8> {
    let mut c = vec![0u8; deg + 1];
    for x in c.iter_mut().take(deg) {
        *x = (idx % q) as u8;
        idx /= q;
    }
    c[deg] = 1;
    c
}

/// Monic irreducible polynomials of degree m are scanned in order of the
/// integer formed by their lower coefficients; the first one without a monic
/// factor of degree at most m/2 wins.
fn smallest_irreducible(f: &Field, m: usize) -> Vec<u32> {
    let q = f.q() as u64;
    if m == 1 {
        return vec![0, 1];
    }
    let mut idx = 0u64;
    loop {
        let cand = monic_from_index(q, m, idx);
        if cand[0] != 0 && is_irreducible(f, &cand) {
            return cand.into_iter().map(|c| c as u32).collect();
        }
        idx += 1;
    }
}

fn is_irreducible(f: &Field, poly: &[u8]) -> bool {
    let m = poly.len() - 1;
    let q = f.q() as u64;
    for deg in 1..=m / 2 {
        let count = q.pow(deg as u32);
        for idx in 0..count {
            let div = monic_from_index(q, deg, idx);
            if poly_rem(f, poly, &div).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Packed GF(2) helpers used by the rank and elimination fast paths.
pub(crate) mod gf2 {
    /// Rank of a set of rows over GF(2), consuming the row buffer.
    pub fn rank(rows: &mut [u64]) -> usize {
        let mut r = 0;
        for i in 0..rows.len() {
            // Pick the row with the highest leading bit among the rest.
            let mut best = i;
            for j in i..rows.len() {
                if rows[j] > rows[best] {
                    best = j;
                }
            }
            rows.swap(i, best);
            let pivot = rows[i];
            if pivot == 0 {
                break;
            }
            let top = 63 - pivot.leading_zeros();
            for row in rows.iter_mut().skip(i + 1) {
                if (*row >> top) & 1 == 1 {
                    *row ^= pivot;
                }
            }
            r += 1;
        }
        r
    }

}
