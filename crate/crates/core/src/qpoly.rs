//! Polynomials in one indeterminate q with integer-like coefficients, used to
//! carry code sizes and bounds symbolically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial {input:?}: {reason}")]
pub struct ParsePolyError {
    pub input: String,
    pub reason: String,
}

/// A polynomial in q. Coefficients are stored sparsely by exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    terms: BTreeMap<u32, T>,
}

impl<T> Default for Poly<T> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<T: Clone + Zero + One> Poly<T> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn monomial(c: T, exp: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { terms }
    }

    /// q^exp.
    pub fn q_pow(exp: u32) -> Self {
        Self::monomial(T::one(), exp)
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, T)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: u32, c: T) {
        let cur = self.terms.remove(&exp).unwrap_or_else(T::zero);
        let s = cur + c;
        if !s.is_zero() {
            self.terms.insert(exp, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: u32) -> T {
        self.terms.get(&exp).cloned().unwrap_or_else(T::zero)
    }

    /// (exponent, coefficient) pairs, ascending by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &T)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Horner evaluation.
    pub fn eval(&self, q: &T) -> T {
        let Some(deg) = self.degree() else { return T::zero() };
        let mut acc = T::zero();
        for e in (0..=deg).rev() {
            acc = acc * q.clone() + self.coeff(e);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self
    where
        T: Add<Output = T>,
    {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<T: Clone + Zero + One> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<T: Clone + Zero + One + Neg<Output = T>> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<T: Clone + Zero + One> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        let mut out = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Clone + Zero + One + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Clone + Zero + One + Neg<Output = T>> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Clone + Zero + One + Signed> Poly<T> {
    /// Sufficient test for p(q) >= 0 at every q >= `from`: all coefficients of
    /// p(x + from) are nonnegative.
    pub fn nonneg_from(&self, from: &T) -> bool {
        let shifted = self.taylor_shift(from);
        shifted.terms.values().all(|c| !c.is_negative())
    }

    /// p(x + a).
    pub fn taylor_shift(&self, a: &T) -> Self {
        let lin = Poly::from_coeffs([(1, T::one()), (0, a.clone())]);
        let mut out = Poly::zero();
        let mut power = Poly::one();
        let deg = self.degree().unwrap_or(0);
        for e in 0..=deg {
            let c = self.coeff(e);
            if !c.is_zero() {
                out = &out + &(&power * &Poly::constant(c));
            }
            power = &power * &lin;
        }
        out
    }
}

/// Canonical text: descending degree, `c` then `q^e`, e.g. `q^9+2q^3+1`.
impl<T: Clone + Zero + One + Signed + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let unit = mag.is_one();
            match (*e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl<T> FromStr for Poly<T>
where
    T: Clone + Zero + One + Neg<Output = T> + FromStr,
{
    type Err = ParsePolyError;

    /// Accepts `q^9+2q^3+1`, `2*q^3`, `- q`, whitespace anywhere.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| ParsePolyError { input: s.to_string(), reason: reason.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut out = Poly::zero();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut negative = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                negative = bytes[i] == b'-';
                i += 1;
            } else if i > 0 {
                return Err(err("missing operator between terms"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &compact[start..i];
            let mut coeff = if digits.is_empty() {
                None
            } else {
                Some(digits.parse::<T>().map_err(|_| err("bad coefficient"))?)
            };
            let mut exp = 0u32;
            if i < bytes.len() && bytes[i] == b'*' {
                if coeff.is_none() {
                    return Err(err("'*' without a coefficient"));
                }
                i += 1;
                if i >= bytes.len() || bytes[i] != b'q' {
                    return Err(err("'*' must be followed by q"));
                }
            }
            if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if es == i {
                        return Err(err("missing exponent"));
                    }
                    exp = compact[es..i].parse().map_err(|_| err("bad exponent"))?;
                }
                coeff.get_or_insert_with(T::one);
            }
            let Some(mut c) = coeff.take() else {
                return Err(err("expected a term"));
            };
            if negative {
                c = -c;
            }
            out.add_term(exp, c);
            if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                return Err(err("unexpected character"));
            }
        }
        Ok(out)
    }
}

impl Poly<BigInt> {
    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }
}

/// A quotient of two polynomials, kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRatio<T> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Clone + Zero + One + Neg<Output = T>> PolyRatio<T> {
    /// Equality as rational functions, by cross multiplication.
    pub fn same_function(&self, other: &PolyRatio<T>) -> bool
    where
        T: PartialEq,
    {
        &self.num * &other.den == &other.num * &self.den
    }
}
