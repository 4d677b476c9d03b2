use num_bigint::BigInt;

use crate::gf::Field;
use crate::subspace::{rank_of, FerrersDiagram};

use super::{fdrm_construct, LinearMatrixCode, RankError, SpanSolver};

/// The cosets of a linear subcode M inside a linear parent M'.
#[derive(Clone, Debug)]
pub struct CosetFamily {
    parent: LinearMatrixCode,
    sub: LinearMatrixCode,
    /// Parent vectors completing the subcode basis; representatives are
    /// their combinations in lexicographic order of coefficients.
    complement: Vec<Vec<u8>>,
}

/// Outcome of the exhaustive check of the coset properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCheck {
    pub cosets: usize,
    pub coset_size: usize,
    /// Minimum rank distance inside a coset.
    pub within: u32,
    /// Minimum rank distance between distinct cosets.
    pub between: u32,
    /// Every parent codeword lies in exactly one coset.
    pub partition: bool,
}

impl CosetFamily {
    pub fn new(parent: LinearMatrixCode, sub: LinearMatrixCode) -> Result<Self, RankError> {
        if parent.rows() != sub.rows() || parent.cols() != sub.cols() {
            return Err(RankError::Shape(parent.rows(), parent.cols(), sub.rows(), sub.cols()));
        }
        if !parent.contains_code(&sub) {
            return Err(RankError::NotSubcode);
        }
        let field = parent.field().clone();
        let len = parent.rows() * parent.cols();
        let mut current = sub.basis().to_vec();
        let mut complement = Vec::new();
        for b in parent.basis() {
            if !SpanSolver::new(&field, len, &current).contains(b) {
                current.push(b.clone());
                complement.push(b.clone());
            }
        }
        Ok(CosetFamily { parent, sub, complement })
    }

    pub fn parent(&self) -> &LinearMatrixCode {
        &self.parent
    }
    pub fn subcode(&self) -> &LinearMatrixCode {
        &self.sub
    }
    /// Number of cosets, q^(dim M' - dim M).
    pub fn count(&self) -> BigInt {
        BigInt::from(self.parent.field().q()).pow(self.complement.len() as u32)
    }
    pub fn count_usize(&self) -> Option<usize> {
        (self.parent.field().q() as usize).checked_pow(self.complement.len() as u32)
    }

    /// Representative of coset j (0 is the subcode itself).
    pub fn representative(&self, mut j: usize) -> Vec<u8> {
        let f = self.parent.field();
        let q = f.q() as usize;
        let len = self.parent.rows() * self.parent.cols();
        let mut out = vec![0u8; len];
        for b in self.complement.iter().rev() {
            let c = (j % q) as u8;
            j /= q;
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(b) {
                    *o = f.add_raw(*o, f.mul_raw(c, x));
                }
            }
        }
        out
    }

    /// Visits every element of coset j.
    pub fn for_each_in_coset(&self, j: usize, mut visit: impl FnMut(&[u8])) {
        let f = self.parent.field().clone();
        let rep = self.representative(j);
        let mut buf = vec![0u8; rep.len()];
        self.sub.for_each_codeword(|m| {
            for ((o, &a), &b) in buf.iter_mut().zip(m).zip(&rep) {
                *o = f.add_raw(a, b);
            }
            visit(&buf);
        });
    }

    /// Index of the coset containing a parent codeword.
    pub fn coset_of(&self, x: &[u8]) -> Option<usize> {
        let f = self.parent.field();
        let len = x.len();
        let mut all = self.sub.basis().to_vec();
        all.extend(self.complement.iter().cloned());
        let coeff = SpanSolver::new(f, len, &all).coordinates(x)?;
        let q = f.q() as usize;
        Some(coeff[self.sub.dim()..].iter().fold(0usize, |acc, &c| acc * q + c as usize))
    }

    /// Exhaustive check over all parent codewords and pairs.
    pub fn check(&self) -> Result<CosetCheck, RankError> {
        let f = self.parent.field().clone();
        let (r, c) = (self.parent.rows(), self.parent.cols());
        let mut elems: Vec<(usize, Vec<u8>)> = Vec::new();
        self.parent.for_each_codeword(|m| elems.push((0, m.to_vec())));
        let count = self.count_usize().unwrap_or(usize::MAX);
        let mut sizes = vec![0usize; count.min(elems.len())];
        let mut partition = true;
        for e in elems.iter_mut() {
            match self.coset_of(&e.1) {
                Some(j) if j < sizes.len() => {
                    e.0 = j;
                    sizes[j] += 1;
                }
                _ => partition = false,
            }
        }
        let coset_size = self.sub.size().try_into().unwrap_or(usize::MAX);
        partition &= sizes.iter().all(|&s| s == coset_size);
        let (mut within, mut between) = (u32::MAX, u32::MAX);
        let mut diff = vec![0u8; r * c];
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                for ((o, &a), &b) in diff.iter_mut().zip(&elems[i].1).zip(&elems[j].1) {
                    *o = f.sub_raw(a, b);
                }
                let rk = rank_of(&f, r, c, &diff) as u32;
                if elems[i].0 == elems[j].0 {
                    within = within.min(rk);
                } else {
                    between = between.min(rk);
                }
            }
        }
        Ok(CosetCheck { cosets: sizes.len(), coset_size, within, between, partition })
    }
}

/// Cosets of an FDRM code with rank distance `delta` inside one with
/// `delta_parent < delta`, both supported on the diagram.
pub fn coset_partition(
    field: &Field,
    diagram: &FerrersDiagram,
    delta: usize,
    delta_parent: usize,
) -> Result<CosetFamily, RankError> {
    if delta_parent >= delta {
        return Err(RankError::OutOfRange(format!("parent distance {delta_parent} must be below {delta}")));
    }
    let parent = if delta_parent <= 1 {
        LinearMatrixCode::full_on(field, diagram)
    } else {
        fdrm_construct(field, diagram, delta_parent)?
    };
    let sub = fdrm_construct(field, diagram, delta)?;
    CosetFamily::new(parent, sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::PivotVector;

    fn diag(s: &str) -> FerrersDiagram {
        s.parse::<PivotVector>().unwrap().ferrers()
    }

    #[test]
    fn table_one_rows() {
        let f = Field::of_order(2).unwrap();
        let fam = coset_partition(&f, &diag("10100"), 2, 1).unwrap();
        let chk = fam.check().unwrap();
        assert_eq!((chk.cosets, chk.coset_size), (8, 4));
        assert!(chk.partition && chk.within >= 2 && chk.between >= 1);
        let last = coset_partition(&f, &diag("00011"), 2, 1).unwrap();
        assert_eq!(last.count(), BigInt::from(1));
    }

    #[test]
    fn rectangle_three_by_three() {
        for q in [2u32, 3] {
            let f = Field::of_order(q).unwrap();
            let q3 = BigInt::from(q).pow(3);
            let d = diag("111000");
            let fam = coset_partition(&f, &d, 3, 2).unwrap();
            assert_eq!(fam.count(), q3);
            assert_eq!(fam.subcode().size(), q3);
            let all = coset_partition(&f, &d, 3, 1).unwrap();
            assert_eq!(all.count(), BigInt::from(q).pow(6));
            if q == 2 {
                let chk = fam.check().unwrap();
                assert!(chk.partition && chk.within >= 3 && chk.between >= 2);
            }
        }
    }

    #[test]
    fn non_subcode_rejected() {
        let f = Field::of_order(2).unwrap();
        let a = LinearMatrixCode::from_basis(&f, 1, 2, vec![vec![1, 0]], None).unwrap();
        let b = LinearMatrixCode::from_basis(&f, 1, 2, vec![vec![0, 1]], None).unwrap();
        assert_eq!(CosetFamily::new(a, b).unwrap_err(), RankError::NotSubcode);
    }
}
