use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::subspace::{gauss_big, gaussian_binomial_poly};
use crate::PolyQ;

use super::RankError;

fn check(m: u32, n: u32, d: u32) -> Result<(), RankError> {
    if d == 0 || d > m.min(n) {
        return Err(RankError::OutOfRange(format!("rank distance {d} for {m}x{n} matrices")));
    }
    Ok(())
}

/// q^(max(m,n) * (min(m,n) - d + 1)).
pub fn mrd_size(q: u64, m: u32, n: u32, d: u32) -> Result<BigInt, RankError> {
    check(m, n, d)?;
    Ok(BigInt::from(q).pow(m.max(n) * (m.min(n) - d + 1)))
}

pub fn mrd_size_poly(m: u32, n: u32, d: u32) -> Result<PolyQ, RankError> {
    check(m, n, d)?;
    Ok(PolyQ::q_pow(m.max(n) * (m.min(n) - d + 1)))
}

/// Number of rank-r codewords of an additive (m x n, d) MRD code; zero
/// outside d <= r <= min(m, n).
pub fn mrd_rank_distribution(q: u64, m: u32, n: u32, d: u32, r: u32) -> Result<BigInt, RankError> {
    check(m, n, d)?;
    let (lo, hi) = (m.min(n), m.max(n));
    if r < d || r > lo {
        return Ok(BigInt::zero());
    }
    let qb = BigInt::from(q);
    let mut sum = BigInt::zero();
    for s in 0..=r - d {
        let term = qb.pow(s * s.saturating_sub(1) / 2)
            * gauss_big(r, s, q)
            * (qb.pow(hi * (r - d - s + 1)) - BigInt::one());
        if s % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(gauss_big(lo, r, q) * sum)
}

pub fn mrd_rank_distribution_poly(m: u32, n: u32, d: u32, r: u32) -> Result<PolyQ, RankError> {
    check(m, n, d)?;
    let (lo, hi) = (m.min(n), m.max(n));
    if r < d || r > lo {
        return Ok(PolyQ::zero());
    }
    let mut sum = PolyQ::zero();
    for s in 0..=r - d {
        let inner = &PolyQ::q_pow(hi * (r - d - s + 1)) - &PolyQ::one();
        let term = &(&PolyQ::q_pow(s * s.saturating_sub(1) / 2) * &gaussian_binomial_poly(r, s)) * &inner;
        sum = if s % 2 == 0 { &sum + &term } else { &sum - &term };
    }
    Ok(&gaussian_binomial_poly(lo, r) * &sum)
}
