use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::PolyQ;

/// The number of k-subspaces of an n-space over a field with q elements,
/// for any ring-like scalar. Uses the q-Pascal recurrence, so no division.
pub fn gaussian_binomial<T>(n: u32, k: u32, q: &T) -> T
where
    T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
{
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k) as usize;
    // row[j] = [m, j] for the current m; q_pow[j] = q^j.
    let mut q_pow = vec![T::one()];
    for j in 1..=k {
        q_pow.push(q_pow[j - 1].clone() * q.clone());
    }
    let mut row = vec![T::zero(); k + 1];
    row[0] = T::one();
    for _ in 0..n {
        for j in (1..=k).rev() {
            // [m+1, j] = [m, j-1] + q^j [m, j]
            row[j] = row[j - 1].clone() + q_pow[j].clone() * row[j].clone();
        }
    }
    row[k].clone()
}

pub fn gauss_big(n: u32, k: u32, q: u64) -> BigInt {
    gaussian_binomial(n, k, &BigInt::from(q))
}

pub fn gaussian_binomial_poly(n: u32, k: u32) -> PolyQ {
    if k > n {
        return PolyQ::zero();
    }
    let k = k.min(n - k) as usize;
    let mut row = vec![PolyQ::zero(); k + 1];
    row[0] = PolyQ::one();
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = &row[j - 1] + &(&PolyQ::q_pow(j as u32) * &row[j]);
        }
    }
    row[k].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(gauss_big(5, 2, 2), BigInt::from(155));
        assert_eq!(gauss_big(7, 0, 5), BigInt::from(1));
        assert_eq!(gauss_big(3, 4, 2), BigInt::from(0));
        assert_eq!(gaussian_binomial(4, 2, &3u64), 130);
        assert_eq!(gaussian_binomial_poly(5, 2).to_string(), "q^6+q^5+2q^4+2q^3+2q^2+q+1");
    }

    #[test]
    fn product_formula_agrees() {
        // Independent route: prod (q^(n-i)-1)/(q^(i+1)-1) with exact division.
        for q in [2u64, 3, 4, 5] {
            for n in 0..9u32 {
                for k in 0..=n {
                    let mut num = BigInt::one();
                    let mut den = BigInt::one();
                    for i in 0..k {
                        num *= BigInt::from(q).pow(n - i) - 1;
                        den *= BigInt::from(q).pow(i + 1) - 1;
                    }
                    assert_eq!(gauss_big(n, k, q), num / den);
                }
            }
        }
    }
}
