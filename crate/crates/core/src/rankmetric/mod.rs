//! Rank-metric codes: MRD sizes and rank distributions, Gabidulin codes,
//! Ferrers diagram rank-metric (FDRM) codes and coset partitions.

mod coset;
mod fdrm;
mod gabidulin;
mod linear;
mod mrd;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::gf::{Field, GfError};
use crate::limits;
use crate::subspace::{rank_of, FerrersDiagram, MatrixFq};

pub use coset::{coset_partition, CosetFamily, CosetCheck};
pub use fdrm::{fdrm_best_effort, fdrm_construct, fdrm_greedy_search, fdrm_upper_bound, FdrmOutcome};
pub use gabidulin::gabidulin_code;
pub use linear::SpanSolver;
pub use mrd::{mrd_rank_distribution, mrd_rank_distribution_poly, mrd_size, mrd_size_poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("basis matrices are linearly dependent")]
    Dependent,
    #[error("basis matrix has an entry off the support diagram")]
    OffSupport,
    #[error("code has a nonzero codeword of rank {found}, below the claimed {claimed}")]
    DistanceViolated { claimed: u32, found: u32 },
    #[error("constructive gap: achieved dimension {achieved}, bound {bound}")]
    ConstructiveGap { achieved: usize, bound: usize },
    #[error("subcode is not contained in the parent code")]
    NotSubcode,
    #[error("enumeration of q^{dim} codewords exceeds the ceiling {ceiling}")]
    TooLarge { dim: usize, ceiling: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// rank(A - B).
pub fn rank_distance(a: &MatrixFq, b: &MatrixFq) -> Result<u32, RankError> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(RankError::Shape(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    Ok(a.sub(b).rank() as u32)
}

/// How the minimum rank distance of a code was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankCertificate {
    /// Every nonzero codeword was enumerated.
    Exhaustive,
    /// Evaluation code of q-polynomials (Gabidulin); distance holds by construction.
    Gabidulin,
    /// Kernel of a product map into an extension field: no rank-one codewords.
    ProductMap,
}

/// A linear code of `rows x cols` matrices given by a basis.
#[derive(Clone, Debug)]
pub struct LinearMatrixCode {
    field: Field,
    rows: usize,
    cols: usize,
    basis: Vec<Vec<u8>>,
    min_rank: u32,
    support: Option<FerrersDiagram>,
    certificate: RankCertificate,
}

impl LinearMatrixCode {
    /// Builds a code from basis matrices and establishes its minimum rank
    /// distance by enumerating all codewords.
    pub fn from_basis(
        field: &Field,
        rows: usize,
        cols: usize,
        basis: Vec<Vec<u8>>,
        support: Option<FerrersDiagram>,
    ) -> Result<Self, RankError> {
        let mut code = Self::unchecked(field, rows, cols, basis, support, 0, RankCertificate::Exhaustive)?;
        code.min_rank = code.min_rank_exhaustive()?;
        Ok(code)
    }

    /// Structural checks only; the distance is taken from the caller.
    pub(crate) fn unchecked(
        field: &Field,
        rows: usize,
        cols: usize,
        basis: Vec<Vec<u8>>,
        support: Option<FerrersDiagram>,
        min_rank: u32,
        certificate: RankCertificate,
    ) -> Result<Self, RankError> {
        let len = rows * cols;
        if basis.iter().any(|b| b.len() != len) {
            return Err(RankError::Shape(rows, cols, 0, 0));
        }
        if rank_of(field, basis.len(), len, &basis.concat()) != basis.len() {
            return Err(RankError::Dependent);
        }
        if let Some(d) = &support {
            if d.k() != rows || d.frame_cols() != cols {
                return Err(RankError::Shape(rows, cols, d.k(), d.frame_cols()));
            }
            for b in &basis {
                for r in 0..rows {
                    for c in 0..cols {
                        if b[r * cols + c] != 0 && !d.contains(r, c) {
                            return Err(RankError::OffSupport);
                        }
                    }
                }
            }
        }
        Ok(LinearMatrixCode { field: field.clone(), rows, cols, basis, min_rank, support, certificate })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }
    pub fn basis_matrices(&self) -> Vec<MatrixFq> {
        self.basis.iter().map(|b| MatrixFq::from_raw(&self.field, self.rows, self.cols, b.clone())).collect()
    }
    /// Minimum rank over nonzero codewords; u32::MAX for the zero code.
    pub fn min_rank_distance(&self) -> u32 {
        self.min_rank
    }
    pub fn support(&self) -> Option<&FerrersDiagram> {
        self.support.as_ref()
    }
    pub fn certificate(&self) -> RankCertificate {
        self.certificate
    }
    pub fn size(&self) -> BigInt {
        BigInt::from(self.field.q()).pow(self.dim() as u32)
    }

    fn enumerable(&self) -> Result<(), RankError> {
        let ceiling = limits::enumeration_ceiling();
        let size = (self.field.q() as f64).powi(self.dim() as i32);
        if size > ceiling as f64 {
            return Err(RankError::TooLarge { dim: self.dim(), ceiling });
        }
        Ok(())
    }

    /// Visits every codeword, flattened row-major, starting with zero. The
    /// order is lexicographic in the coefficient vector.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&[u8])) {
        let fld = &self.field;
        let q = fld.q() as u8;
        let len = self.rows * self.cols;
        let mut cur = vec![0u8; len];
        let mut coeff = vec![0u8; self.dim()];
        f(&cur);
        loop {
            let mut i = self.dim();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                let old = coeff[i];
                let new = if old + 1 == q { 0 } else { old + 1 };
                coeff[i] = new;
                let delta = fld.sub_raw(new, old);
                let b = &self.basis[i];
                if q == 2 {
                    for (c, &x) in cur.iter_mut().zip(b) {
                        *c ^= x;
                    }
                } else {
                    for (c, &x) in cur.iter_mut().zip(b) {
                        *c = fld.add_raw(*c, fld.mul_raw(delta, x));
                    }
                }
                if new != 0 {
                    break;
                }
            }
            f(&cur);
        }
    }

    /// The codeword with the given coefficient vector.
    pub fn combine(&self, coeff: &[u8]) -> Vec<u8> {
        let f = &self.field;
        let mut out = vec![0u8; self.rows * self.cols];
        for (c, b) in coeff.iter().zip(&self.basis) {
            if *c != 0 {
                for (o, &x) in out.iter_mut().zip(b) {
                    *o = f.add_raw(*o, f.mul_raw(*c, x));
                }
            }
        }
        out
    }

    pub fn rank_of(&self, m: &[u8]) -> u32 {
        rank_of(&self.field, self.rows, self.cols, m) as u32
    }

    pub fn min_rank_exhaustive(&self) -> Result<u32, RankError> {
        self.enumerable()?;
        let mut best = u32::MAX;
        let mut first = true;
        self.for_each_codeword(|m| {
            if first {
                first = false;
                return;
            }
            best = best.min(rank_of(&self.field, self.rows, self.cols, m) as u32);
        });
        Ok(best)
    }

    /// Counts of codewords by rank, index = rank.
    pub fn rank_histogram(&self) -> Result<Vec<u64>, RankError> {
        self.enumerable()?;
        let mut hist = vec![0u64; self.rows.min(self.cols) + 1];
        self.for_each_codeword(|m| hist[rank_of(&self.field, self.rows, self.cols, m)] += 1);
        Ok(hist)
    }

    /// Rank histograms of all cosets x + C in the ambient matrix space, as
    /// histogram -> number of cosets with it.
    pub fn coset_rank_distributions(&self) -> Result<std::collections::BTreeMap<Vec<u64>, u64>, RankError> {
        let len = self.rows * self.cols;
        let q = self.field.q() as u64;
        let total = (q as f64).powi(len as i32);
        if total > limits::enumeration_ceiling() as f64 {
            return Err(RankError::TooLarge { dim: len, ceiling: limits::enumeration_ceiling() });
        }
        let index = |m: &[u8]| m.iter().rev().fold(0usize, |acc, &d| acc * q as usize + d as usize);
        let mut seen = vec![false; total as usize];
        let mut out = std::collections::BTreeMap::new();
        let mut x = vec![0u8; len];
        let mut shifted = vec![0u8; len];
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut v = start;
            for d in x.iter_mut() {
                *d = (v % q as usize) as u8;
                v /= q as usize;
            }
            let mut hist = vec![0u64; self.rows.min(self.cols) + 1];
            self.for_each_codeword(|m| {
                for ((s, &a), &b) in shifted.iter_mut().zip(m).zip(&x) {
                    *s = self.field.add_raw(a, b);
                }
                seen[index(&shifted)] = true;
                hist[rank_of(&self.field, self.rows, self.cols, &shifted)] += 1;
            });
            *out.entry(hist).or_insert(0) += 1;
        }
        Ok(out)
    }

    pub fn solver(&self) -> SpanSolver {
        SpanSolver::new(&self.field, self.rows * self.cols, &self.basis)
    }

    pub fn contains_code(&self, other: &LinearMatrixCode) -> bool {
        let s = self.solver();
        other.basis.iter().all(|b| s.contains(b))
    }

    pub fn transpose(&self) -> LinearMatrixCode {
        let basis = self
            .basis
            .iter()
            .map(|b| MatrixFq::from_raw(&self.field, self.rows, self.cols, b.clone()).transpose().data().to_vec())
            .collect();
        LinearMatrixCode {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            basis,
            min_rank: self.min_rank,
            support: None,
            certificate: self.certificate,
        }
    }

    /// All matrices supported on a Ferrers diagram.
    pub fn full_on(field: &Field, diagram: &FerrersDiagram) -> LinearMatrixCode {
        let (rows, cols) = (diagram.k(), diagram.frame_cols());
        let basis = diagram
            .cells()
            .into_iter()
            .map(|(r, c)| {
                let mut b = vec![0u8; rows * cols];
                b[r * cols + c] = 1;
                b
            })
            .collect::<Vec<_>>();
        let min_rank = if basis.is_empty() { u32::MAX } else { 1 };
        LinearMatrixCode {
            field: field.clone(),
            rows,
            cols,
            basis,
            min_rank,
            support: Some(diagram.clone()),
            certificate: RankCertificate::Exhaustive,
        }
    }
}

/// #{M in C : rank M <= t}. Enumerates when the code is small enough and
/// otherwise uses the additive-MRD distribution for Gabidulin codes.
pub fn restricted_rank_count(code: &LinearMatrixCode, t: u32) -> Result<BigInt, RankError> {
    if code.enumerable().is_ok() {
        let hist = code.rank_histogram()?;
        return Ok(hist.iter().take(t as usize + 1).map(|&c| BigInt::from(c)).sum());
    }
    if code.certificate() != RankCertificate::Gabidulin {
        return Err(RankError::TooLarge { dim: code.dim(), ceiling: limits::enumeration_ceiling() });
    }
    let (m, n) = (code.rows() as u32, code.cols() as u32);
    let d = code.min_rank_distance();
    let q = code.field().q() as u64;
    let mut total = BigInt::one();
    for r in d..=t.min(m.min(n)) {
        total += mrd_rank_distribution(q, m, n, d, r)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_distance_basics() {
        let f = Field::of_order(2).unwrap();
        let i2 = MatrixFq::identity(&f, 2);
        let z = MatrixFq::zeros(&f, 2, 2);
        assert_eq!(rank_distance(&i2, &i2).unwrap(), 0);
        assert_eq!(rank_distance(&i2, &z).unwrap(), 2);
        assert!(rank_distance(&i2, &MatrixFq::zeros(&f, 2, 3)).is_err());
    }

    #[test]
    fn restricted_count_trivial_ends() {
        let f = Field::of_order(2).unwrap();
        let g = gabidulin_code(&f, 3, 3, 2).unwrap();
        assert_eq!(restricted_rank_count(&g, 0).unwrap(), BigInt::one());
        assert_eq!(restricted_rank_count(&g, 3).unwrap(), g.size());
    }

    #[test]
    fn dependent_basis_rejected() {
        let f = Field::of_order(3).unwrap();
        let b = vec![vec![1, 0, 0, 1], vec![2, 0, 0, 2]];
        assert_eq!(LinearMatrixCode::from_basis(&f, 2, 2, b, None).unwrap_err(), RankError::Dependent);
    }
}
