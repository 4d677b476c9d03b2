//! Upper bounds: anticode, Johnson, per-pivot counting ILP and the bounds
//! for codes with prescribed block intersections.

mod ilp;
mod simplex;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::construct::{registry_lookup, BoundKind, BoundValue, QSpec, RegistryError};
use crate::qpoly::PolyRatio;
use crate::subspace::{gauss_big, gaussian_binomial_poly, PivotVector};

pub use ilp::{ilp_pivot_bound, IlpInstance, IlpOptions, IlpOutcome};
pub use simplex::{LpOutcome, LpProblem, LpScalar, LpStatus, Row, Sense};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

fn check_ndk(n: usize, d: usize, k: usize) -> Result<(), BoundsError> {
    if d % 2 == 1 || d < 2 || d / 2 > k || k > n {
        return Err(BoundsError::Parameters(format!("need even d >= 2 and d/2 <= k <= n, got n={n} d={d} k={k}")));
    }
    Ok(())
}

/// Result of the anticode bound: a number, or an unreduced ratio in q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnticodeValue {
    Int(BigInt),
    Ratio(PolyRatio<BigInt>),
}

/// floor([n, t]_q / [k, t]_q) with t = k - d/2 + 1.
pub fn anticode_bound(n: usize, d: usize, k: usize, q: QSpec) -> Result<AnticodeValue, BoundsError> {
    check_ndk(n, d, k)?;
    let t = (k - d / 2 + 1) as u32;
    Ok(match q {
        QSpec::Numeric(v) => AnticodeValue::Int(gauss_big(n as u32, t, v) / gauss_big(k as u32, t, v)),
        QSpec::Symbolic => AnticodeValue::Ratio(PolyRatio {
            num: gaussian_binomial_poly(n as u32, t),
            den: gaussian_binomial_poly(k as u32, t),
        }),
    })
}

pub fn anticode_int(n: usize, d: usize, k: usize, q: u64) -> Result<BigInt, BoundsError> {
    match anticode_bound(n, d, k, QSpec::Numeric(q))? {
        AnticodeValue::Int(v) => Ok(v),
        AnticodeValue::Ratio(_) => unreachable!("numeric q"),
    }
}

/// Number of (weight t) subspaces with pivot v' inside a fixed subspace
/// with pivot v: zero unless supp v' is inside supp v, otherwise q^dots of
/// v' restricted to supp v.
pub fn pivot_subspace_count(v: &PivotVector, w: &PivotVector, q: u64) -> BigInt {
    if v.n() != w.n() || (0..v.n()).any(|i| w.get(i) && !v.get(i)) {
        return BigInt::zero();
    }
    let support = v.positions();
    let inside: Vec<usize> = support.iter().enumerate().filter(|(_, &p)| w.get(p)).map(|(i, _)| i).collect();
    let restricted = PivotVector::from_positions(support.len(), &inside).expect("valid restriction");
    BigInt::from(q).pow(restricted.dots() as u32)
}

/// Iterated Johnson bound floor((q^n - 1) A(n-1, d; k-1) / (q^k - 1)),
/// ending in the anticode bound at k = d/2. Below the top level, stored
/// exact values and smaller stored upper bounds replace computed ones.
pub fn johnson_bound(n: usize, d: usize, k: usize, q: u64) -> Result<BigInt, BoundsError> {
    check_ndk(n, d, k)?;
    let mut memo = HashMap::new();
    Ok(johnson_step(n, d, k, q, &mut memo))
}

fn johnson_step(n: usize, d: usize, k: usize, q: u64, memo: &mut HashMap<(usize, usize), BigInt>) -> BigInt {
    if k <= d / 2 {
        gauss_big(n as u32, 1, q) / gauss_big(k as u32, 1, q)
    } else {
        let inner = johnson_rec(n - 1, d, k - 1, q, memo);
        (BigInt::from(q).pow(n as u32) - 1) * inner / (BigInt::from(q).pow(k as u32) - 1)
    }
}

fn johnson_rec(n: usize, d: usize, k: usize, q: u64, memo: &mut HashMap<(usize, usize), BigInt>) -> BigInt {
    if let Some(v) = memo.get(&(n, k)) {
        return v.clone();
    }
    let computed = johnson_step(n, d, k, q, memo);
    let stored = registry_lookup(n, d, k, QSpec::Numeric(q))
        .ok()
        .filter(|b| b.kind != BoundKind::Lower)
        .map(|b| b.at(q));
    let v = match stored {
        Some(s) if s < computed => s,
        _ => computed,
    };
    memo.insert((n, k), v.clone());
    v
}

/// Johnson bound as a BoundValue.
pub fn johnson(n: usize, d: usize, k: usize, q: u64) -> Result<BoundValue, BoundsError> {
    Ok(BoundValue::int(BoundKind::Upper, johnson_bound(n, d, k, q)?, "iterated Johnson bound"))
}

/// The Johnson recursion without flooring, as a polynomial ratio.
pub fn johnson_unrounded(n: usize, d: usize, k: usize) -> Result<PolyRatio<BigInt>, BoundsError> {
    check_ndk(n, d, k)?;
    let (mut num, mut den) = (gaussian_binomial_poly((n - k + d / 2) as u32, 1), gaussian_binomial_poly((d / 2) as u32, 1));
    for j in 1..=(k - d / 2) {
        let (nn, kk) = ((n - k + d / 2 + j) as u32, (d / 2 + j) as u32);
        num = num * (crate::PolyQ::q_pow(nn) - crate::PolyQ::one());
        den = den * (crate::PolyQ::q_pow(kk) - crate::PolyQ::one());
    }
    Ok(PolyRatio { num, den })
}

fn block_check(blocks: &[usize], dims: &[usize]) -> Result<(), BoundsError> {
    if blocks.len() != dims.len() || blocks.is_empty() {
        return Err(BoundsError::Parameters("one entry per block is needed".into()));
    }
    Ok(())
}

/// floor(prod [n_i, c_i] / prod [a_i, c_i]) for one c with c_i <= a_i and
/// sum c = k - d/2 + 1.
pub fn eq_upper_abar(blocks: &[usize], a: &[usize], c: &[usize], d: usize, q: u64) -> Result<BoundValue, BoundsError> {
    block_check(blocks, a)?;
    block_check(blocks, c)?;
    let k: usize = a.iter().sum();
    if d % 2 == 1 || d / 2 > k || c.iter().sum::<usize>() != k - d / 2 + 1 {
        return Err(BoundsError::Parameters(format!("c must sum to k - d/2 + 1 = {}", (k + 1).saturating_sub(d / 2))));
    }
    if c.iter().zip(a).any(|(ci, ai)| ci > ai) || a.iter().zip(blocks).any(|(ai, ni)| ai > ni) {
        return Err(BoundsError::Parameters("need c_i <= a_i <= n_i".into()));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..blocks.len() {
        num *= gauss_big(blocks[i] as u32, c[i] as u32, q);
        den *= gauss_big(a[i] as u32, c[i] as u32, q);
    }
    Ok(BoundValue::int(BoundKind::Upper, num / den, "counting subspaces with prescribed block intersections"))
}

fn compositions(total: usize, caps: &[usize], out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() == caps.len() {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for x in 0..=caps[cur.len()].min(total) {
        cur.push(x);
        compositions(total - x, caps, out, cur);
        cur.pop();
    }
}

/// Minimum of [`eq_upper_abar`] over all feasible c; returns the bound and c.
pub fn eq_upper_abar_best(blocks: &[usize], a: &[usize], d: usize, q: u64) -> Result<(BoundValue, Vec<usize>), BoundsError> {
    let k: usize = a.iter().sum();
    if d / 2 > k {
        return Err(BoundsError::Parameters("d/2 exceeds k".into()));
    }
    let mut cs = Vec::new();
    compositions(k - d / 2 + 1, a, &mut cs, &mut Vec::new());
    let mut best: Option<(BoundValue, Vec<usize>)> = None;
    for c in cs {
        let b = eq_upper_abar(blocks, a, &c, d, q)?;
        if best.as_ref().is_none_or(|(x, _)| b.at(q) < x.at(q)) {
            best = Some((b, c));
        }
    }
    best.ok_or_else(|| BoundsError::Parameters("no feasible c".into()))
}

/// Sum of the best per-a bounds over all a with sum k and d/2 <= a_i <= n_i.
pub fn eq_upper_sum(blocks: &[usize], d: usize, k: usize, q: u64) -> Result<(BigInt, Vec<(Vec<usize>, BigInt)>), BoundsError> {
    let caps: Vec<usize> = blocks.to_vec();
    let mut all = Vec::new();
    compositions(k, &caps, &mut all, &mut Vec::new());
    let mut total = BigInt::zero();
    let mut parts = Vec::new();
    for a in all.into_iter().filter(|a| a.iter().all(|&x| x >= d / 2)) {
        let (b, _) = eq_upper_abar_best(blocks, &a, d, q)?;
        total += b.at(q);
        parts.push((a, b.at(q)));
    }
    Ok((total, parts))
}

fn gl_order(s: u32, q: u64) -> BigInt {
    let qs = BigInt::from(q).pow(s);
    (0..s).fold(BigInt::one(), |acc, i| acc * (&qs - BigInt::from(q).pow(i)))
}

/// Number of t-subspaces T of X_1 + X_2 (dim X_i = n_i, X_i spanned by block
/// i) with dim(T meet X_1) = c_1 and dim(T meet X_2) = c_2. T is the graph
/// of an isomorphism between P_1/A and P_2/B, where A, B are the meets and
/// P_i the projections, which gives
/// [n1, c1+s][c1+s, c1][n2, c2+s][c2+s, c2] |GL_s| with s = t - c1 - c2.
pub fn count_split_subspaces(n1: usize, n2: usize, t: usize, c1: usize, c2: usize, q: u64) -> BigInt {
    if c1 + c2 > t || t > n1 + n2 {
        return BigInt::zero();
    }
    let s = (t - c1 - c2) as u32;
    let (n1, n2, c1, c2) = (n1 as u32, n2 as u32, c1 as u32, c2 as u32);
    gauss_big(n1, c1 + s, q) * gauss_big(c1 + s, c1, q) * gauss_big(n2, c2 + s, q) * gauss_big(c2 + s, c2, q) * gl_order(s, q)
}

/// floor(#{T : dim T = k-d/2+1, dim(T meet E_1) + dim(T meet E_2) >= d/2+1}
/// / [k, k-d/2+1]) for two blocks.
pub fn eq_upper_def3(n1: usize, n2: usize, d: usize, k: usize, q: u64) -> Result<BoundValue, BoundsError> {
    check_ndk(n1 + n2, d, k)?;
    let t = k - d / 2 + 1;
    let mut num = BigInt::zero();
    for c1 in 0..=t {
        for c2 in 0..=t - c1 {
            if c1 + c2 > d / 2 {
                num += count_split_subspaces(n1, n2, t, c1, c2, q);
            }
        }
    }
    let den = gauss_big(k as u32, t as u32, q);
    Ok(BoundValue::int(BoundKind::Upper, num.div_floor(&den), "counting subspaces meeting both blocks"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::subspace::enumerate_subspaces;

    #[test]
    fn anticode_values() {
        assert_eq!(anticode_int(6, 4, 3, 2).unwrap(), BigInt::from(93));
        // k = d/2: point count ratio.
        assert_eq!(anticode_int(7, 6, 3, 2).unwrap(), BigInt::from(127 / 7));
        let AnticodeValue::Ratio(r) = anticode_bound(6, 4, 3, QSpec::Symbolic).unwrap() else { panic!() };
        assert_eq!(r.num.eval_u64(2) / r.den.eval_u64(2), BigInt::from(93));
        assert!(anticode_bound(6, 5, 3, QSpec::Numeric(2)).is_err());
    }

    #[test]
    fn pivot_counts() {
        let v: PivotVector = "1101100".parse().unwrap();
        let cases = [("1100000", 4), ("1001000", 3), ("1000100", 2), ("0101000", 2), ("0100100", 1), ("0001100", 0)];
        for (w, e) in cases {
            assert_eq!(pivot_subspace_count(&v, &w.parse().unwrap(), 3), BigInt::from(3).pow(e), "{w}");
        }
        assert_eq!(pivot_subspace_count(&v, &"0010100".parse().unwrap(), 2), BigInt::zero());
    }

    #[test]
    fn pivot_counts_sum_to_gaussian() {
        for k in 1..=5usize {
            let v = PivotVector::from_positions(k + 2, &(0..k).map(|i| i + i / 2).filter(|&p| p < k + 2).collect::<Vec<_>>());
            let Ok(v) = v else { continue };
            let k = v.weight();
            for t in 0..=k {
                let total: BigInt = crate::subspace::pivots_descending(v.n(), t).iter().map(|w| pivot_subspace_count(&v, w, 2)).sum();
                assert_eq!(total, gauss_big(k as u32, t as u32, 2), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn johnson_values() {
        assert_eq!(johnson_bound(6, 4, 3, 2).unwrap(), BigInt::from(81));
        assert_eq!(johnson_bound(4, 4, 2, 2).unwrap(), BigInt::from(5));
        let r = johnson_unrounded(7, 4, 3).unwrap();
        let AnticodeValue::Ratio(a) = anticode_bound(7, 4, 3, QSpec::Symbolic).unwrap() else { panic!() };
        assert!(r.same_function(&a));
    }

    #[test]
    fn block_intersection_bounds() {
        assert_eq!(eq_upper_abar(&[6, 6], &[2, 4], &[1, 4], 4, 2).unwrap().at(2), BigInt::from(13671));
        assert_eq!(eq_upper_abar(&[6, 6], &[3, 3], &[2, 3], 4, 2).unwrap().at(2), BigInt::from(129735));
        let (total, parts) = eq_upper_sum(&[6, 6], 4, 6, 2).unwrap();
        assert_eq!(total, BigInt::from(157077));
        assert_eq!(parts.len(), 3);
        // One block is the anticode bound.
        assert_eq!(eq_upper_abar(&[6], &[3], &[2], 4, 2).unwrap().at(2), anticode_int(6, 4, 3, 2).unwrap());
        assert!(eq_upper_abar(&[6, 6], &[3, 3], &[3, 3], 4, 2).is_err());
        let def3 = eq_upper_def3(6, 6, 4, 6, 2).unwrap().at(2);
        assert!(def3 >= BigInt::from(2154496));
    }

    fn brute_split(n1: usize, n2: usize, t: usize, q: u32) -> HashMap<(usize, usize), u64> {
        let f = Field::of_order(q).unwrap();
        let mut out = HashMap::new();
        for s in enumerate_subspaces(&f, n1 + n2, t, None).unwrap() {
            let key = (s.dim_meet_coordinates(0..n1), s.dim_meet_coordinates(n1..n1 + n2));
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn split_counts_match_enumeration() {
        assert_eq!(count_split_subspaces(2, 2, 2, 1, 1, 2), BigInt::from(9));
        for q in [2u32, 3] {
            for n1 in 1..=4usize {
                for n2 in 1..=4usize {
                    for t in 0..=n1 + n2 {
                        if gauss_big((n1 + n2) as u32, t as u32, q as u64) > BigInt::from(100_000) {
                            continue;
                        }
                        let brute = brute_split(n1, n2, t, q);
                        let mut sum = BigInt::zero();
                        for c1 in 0..=t {
                            for c2 in 0..=t - c1 {
                                let c = count_split_subspaces(n1, n2, t, c1, c2, q as u64);
                                assert_eq!(c, BigInt::from(*brute.get(&(c1, c2)).unwrap_or(&0)), "{n1} {n2} {t} {c1} {c2} q={q}");
                                sum += c;
                            }
                        }
                        assert_eq!(sum, gauss_big((n1 + n2) as u32, t as u32, q as u64));
                    }
                }
            }
        }
    }
}
