//! Subspaces of F_q^n in canonical reduced row echelon form, pivot vectors,
//! Ferrers diagrams and tableaux, distances, duals and enumeration.

mod ferrers;
mod gauss;
mod matrix;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf::Field;
use crate::limits;

pub use ferrers::{FerrersDiagram, FerrersTableau};
pub use gauss::{gaussian_binomial, gaussian_binomial_poly, gauss_big};
pub use matrix::MatrixFq;
pub(crate) use matrix::{pack_gf2_rows, rank_of, rref_data};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubspaceError {
    #[error("generator matrix has {rows} rows but rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("entry {entry} is not an element of GF({q})")]
    BadEntry { entry: u32, q: u32 },
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("fields differ")]
    FieldMismatch,
    #[error("invalid pivot vector: {0}")]
    BadPivot(String),
    #[error("Ferrers diagram does not fit a {k}x{frame} frame")]
    NotEmbeddable { k: usize, frame: usize },
    #[error("tableau has {got} entries, diagram has {expected} dots")]
    TableauShape { expected: usize, got: usize },
    #[error("enumeration of {count} subspaces exceeds the ceiling {ceiling}")]
    CeilingExceeded { count: String, ceiling: u64 },
}

/// Characteristic vector of pivot columns. Position i (0-based, left to
/// right) is bit n-1-i, so `bits` is the integer sum v_i 2^(n-i) of the
/// 1-based convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotVector {
    n: usize,
    bits: u64,
}

impl PivotVector {
    pub fn from_positions(n: usize, positions: &[usize]) -> Result<Self, SubspaceError> {
        if n > 64 {
            return Err(SubspaceError::BadPivot(format!("length {n} exceeds 64")));
        }
        let mut bits = 0u64;
        for &p in positions {
            if p >= n {
                return Err(SubspaceError::BadPivot(format!("position {p} outside length {n}")));
            }
            bits |= 1u64 << (n - 1 - p);
        }
        Ok(PivotVector { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }
    pub fn get(&self, i: usize) -> bool {
        (self.bits >> (self.n - 1 - i)) & 1 == 1
    }
    pub fn positions(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.get(i)).collect()
    }
    pub fn hamming(&self, other: &Self) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
    pub fn ferrers(&self) -> FerrersDiagram {
        FerrersDiagram::from_pivot(self)
    }
    /// Number of dots of the Ferrers diagram.
    pub fn dots(&self) -> usize {
        self.ferrers().dots()
    }
    /// The bits at positions `range`, as a shorter vector.
    pub fn slice(&self, range: std::ops::Range<usize>) -> PivotVector {
        let pos: Vec<usize> = range.clone().filter(|&i| self.get(i)).map(|i| i - range.start).collect();
        PivotVector::from_positions(range.len(), &pos).expect("slice fits")
    }
    /// Concatenation.
    pub fn concat(&self, other: &PivotVector) -> Result<PivotVector, SubspaceError> {
        let mut pos = self.positions();
        pos.extend(other.positions().into_iter().map(|p| p + self.n));
        PivotVector::from_positions(self.n + other.n, &pos)
    }
}

/// The integer sum v_i 2^(n-i).
pub fn pivot_int_encode(v: &PivotVector) -> u64 {
    v.bits
}

pub fn pivot_int_decode(x: u64, n: usize) -> Result<PivotVector, SubspaceError> {
    if n > 64 || (n < 64 && x >> n != 0) {
        return Err(SubspaceError::BadPivot(format!("{x} does not fit in {n} bits")));
    }
    Ok(PivotVector { n, bits: x })
}

impl fmt::Display for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for PivotVector {
    type Err = SubspaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pos = Vec::new();
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '1' => pos.push(i),
                '0' => {}
                _ => return Err(SubspaceError::BadPivot(s.to_string())),
            }
        }
        PivotVector::from_positions(s.chars().count(), &pos)
    }
}

/// A k-dimensional subspace of F_q^n held as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatrixFq,
    pivot: PivotVector,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, k={}, {})", self.n(), self.k(), self.basis.digits())
    }
}

/// Canonical form of a full-rank generator matrix.
pub fn rref(m: &MatrixFq) -> Result<(Subspace, PivotVector), SubspaceError> {
    let s = Subspace::from_generators(m)?;
    let v = s.pivot;
    Ok((s, v))
}

impl Subspace {
    /// Requires full row rank; otherwise reports the actual dimension.
    pub fn from_generators(m: &MatrixFq) -> Result<Self, SubspaceError> {
        let (e, pivots) = m.rref();
        if pivots.len() != m.rows() {
            return Err(SubspaceError::RankDeficient { rows: m.rows(), rank: pivots.len() });
        }
        Ok(Self::from_rref_parts(e, &pivots))
    }

    /// The row space of any matrix.
    pub fn span(m: &MatrixFq) -> Self {
        let (e, pivots) = m.rref();
        Self::from_rref_parts(e, &pivots)
    }

    fn from_rref_parts(e: MatrixFq, pivots: &[usize]) -> Self {
        let pivot = PivotVector::from_positions(e.cols(), pivots).expect("n <= 64");
        Subspace { basis: e, pivot }
    }

    /// Trusts that `digits` is already an RREF basis (checked in debug builds).
    pub(crate) fn from_rref_digits(field: &Field, k: usize, n: usize, digits: Vec<u8>) -> Self {
        let m = MatrixFq::from_raw(field, k, n, digits);
        let mut pos = Vec::with_capacity(k);
        for r in 0..k {
            pos.push(m.row(r).iter().position(|&x| x != 0).expect("nonzero row"));
        }
        debug_assert_eq!(m.rref().0, m);
        Self::from_rref_parts(m, &pos)
    }

    /// Checked variant for external input: the digits must already be RREF.
    pub fn from_canonical_digits(field: &Field, k: usize, n: usize, digits: Vec<u8>) -> Result<Self, SubspaceError> {
        let m = MatrixFq::new(field, k, n, digits)?;
        let s = Self::from_generators(&m)?;
        if s.basis != m {
            return Err(SubspaceError::BadPivot("codeword is not in reduced row echelon form".into()));
        }
        Ok(s)
    }

    pub fn field(&self) -> &Field {
        self.basis.field()
    }
    pub fn n(&self) -> usize {
        self.basis.cols()
    }
    pub fn k(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }
    pub fn pivot(&self) -> PivotVector {
        self.pivot
    }
    pub fn digits(&self) -> &[u8] {
        self.basis.data()
    }

    fn compatible(&self, other: &Subspace) -> Result<(), SubspaceError> {
        if self.n() != other.n() {
            return Err(SubspaceError::AmbientMismatch(self.n(), other.n()));
        }
        if self.field() != other.field() {
            return Err(SubspaceError::FieldMismatch);
        }
        Ok(())
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize, SubspaceError> {
        self.compatible(other)?;
        let stacked = self.basis.stack(&other.basis);
        Ok(self.k() + other.k() - stacked.rank())
    }

    /// dim U + dim W - 2 dim(U ∩ W).
    pub fn distance(&self, other: &Subspace) -> Result<u32, SubspaceError> {
        self.compatible(other)?;
        let r = self.basis.stack(&other.basis).rank();
        Ok((2 * r - self.k() - other.k()) as u32)
    }

    /// Complement under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        let f = self.field();
        let n = self.n();
        let piv = self.pivot.positions();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivot.get(*c)).collect();
        let mut data = vec![0u8; free.len() * n];
        for (r, &fc) in free.iter().enumerate() {
            data[r * n + fc] = 1;
            for (i, &pc) in piv.iter().enumerate() {
                data[r * n + pc] = f.neg_raw(self.basis.get(i, fc));
            }
        }
        Subspace::span(&MatrixFq::from_raw(f, free.len(), n, data))
    }

    /// Entries of the basis at the dots of the Ferrers diagram.
    pub fn tableau(&self) -> FerrersTableau {
        let diag = self.pivot.ferrers();
        let free: Vec<usize> = (0..self.n()).filter(|c| !self.pivot.get(*c)).collect();
        let mut entries = Vec::with_capacity(diag.dots());
        for (i, len) in diag.row_lengths().iter().enumerate() {
            for &c in &free[free.len() - len..] {
                entries.push(self.basis.get(i, c));
            }
        }
        FerrersTableau::new(diag, entries).expect("shape matches")
    }

    /// The basis restricted to the non-pivot columns, a k x (n-k) matrix.
    /// Positions outside the Ferrers diagram are zero.
    pub fn frame_matrix(&self) -> MatrixFq {
        let free: Vec<usize> = (0..self.n()).filter(|c| !self.pivot.get(*c)).collect();
        let k = self.k();
        let mut data = Vec::with_capacity(k * free.len());
        for r in 0..k {
            for &c in &free {
                data.push(self.basis.get(r, c));
            }
        }
        MatrixFq::from_raw(self.field(), k, free.len(), data)
    }

    /// Lifts a k x (n-k) matrix supported on the Ferrers diagram of `pivot`.
    pub fn from_frame(field: &Field, pivot: &PivotVector, frame: &MatrixFq) -> Result<Subspace, SubspaceError> {
        let n = pivot.n();
        let piv = pivot.positions();
        let k = piv.len();
        let free: Vec<usize> = (0..n).filter(|c| !pivot.get(*c)).collect();
        if frame.rows() != k || frame.cols() != free.len() {
            return Err(SubspaceError::Shape { expected: k * free.len(), got: frame.rows() * frame.cols() });
        }
        let mut data = vec![0u8; k * n];
        for (i, &p) in piv.iter().enumerate() {
            data[i * n + p] = 1;
            for (f, &c) in free.iter().enumerate() {
                let x = frame.get(i, f);
                if x != 0 {
                    if c < p {
                        return Err(SubspaceError::TableauShape { expected: 0, got: 1 });
                    }
                    data[i * n + c] = x;
                }
            }
        }
        Ok(Self::from_rref_parts(MatrixFq::from_raw(field, k, n, data), &piv))
    }

    pub fn from_tableau(field: &Field, t: &FerrersTableau) -> Result<Subspace, SubspaceError> {
        let frame = t.to_frame(field);
        Self::from_frame(field, &t.diagram().to_pivot()?, &frame)
    }

    /// dim(U ∩ span of coordinates in `block`) = k - rank of the other columns.
    pub fn dim_meet_coordinates(&self, block: std::ops::Range<usize>) -> usize {
        let n = self.n();
        let k = self.k();
        let mut data = Vec::with_capacity(k * (n - block.len()));
        for r in 0..k {
            for c in (0..n).filter(|c| !block.contains(c)) {
                data.push(self.basis.get(r, c));
            }
        }
        k - rank_of(self.field(), k, n - block.len(), &data)
    }

    /// dim(U ∩ E) where E is the set of vectors vanishing on `block`.
    pub fn dim_meet_vanishing(&self, block: std::ops::Range<usize>) -> usize {
        let k = self.k();
        let cols = self.basis.columns(block);
        k - cols.rank()
    }

    /// U ∩ span(coordinates in `block`), expressed inside F_q^{|block|}.
    pub fn meet_coordinates(&self, block: std::ops::Range<usize>) -> Subspace {
        let n = self.n();
        let k = self.k();
        // Order columns outside the block first; rows of the echelon form with
        // no pivot there are exactly the vectors supported on the block.
        let outside: Vec<usize> = (0..n).filter(|c| !block.contains(c)).collect();
        let order: Vec<usize> = outside.iter().copied().chain(block.clone()).collect();
        let mut data = Vec::with_capacity(k * n);
        for r in 0..k {
            for &c in &order {
                data.push(self.basis.get(r, c));
            }
        }
        let (e, pivots) = MatrixFq::from_raw(self.field(), k, n, data).rref();
        let w = block.len();
        let mut rows = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            if p >= outside.len() {
                rows.extend_from_slice(&e.row(r)[outside.len()..]);
            }
        }
        let m = MatrixFq::from_raw(self.field(), rows.len() / w.max(1), w, rows);
        Subspace::span(&m)
    }

    /// Direct sum of subspaces living on consecutive coordinate blocks.
    pub fn direct_sum(parts: &[&Subspace]) -> Subspace {
        let field = parts[0].field().clone();
        let n: usize = parts.iter().map(|p| p.n()).sum();
        let k: usize = parts.iter().map(|p| p.k()).sum();
        let mut data = vec![0u8; k * n];
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for r in 0..p.k() {
                data[(r0 + r) * n + c0..(r0 + r) * n + c0 + p.n()].copy_from_slice(p.basis.row(r));
            }
            r0 += p.k();
            c0 += p.n();
        }
        Subspace::span(&MatrixFq::from_raw(&field, k, n, data))
    }
}

pub fn subspace_distance(u: &Subspace, w: &Subspace) -> Result<u32, SubspaceError> {
    u.distance(w)
}

/// Weight-k vectors of length n in descending integer order.
pub fn pivots_descending(n: usize, k: usize) -> Vec<PivotVector> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(PivotVector::from_positions(n, &idx).expect("valid"));
        // Next combination in lexicographic order of positions.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Calls `visit` on each subspace with the given pivot, tableau entries in
/// lexicographic order.
pub fn for_each_with_pivot(field: &Field, pivot: &PivotVector, mut visit: impl FnMut(Subspace)) {
    let diag = pivot.ferrers();
    let dots = diag.dots();
    let q = field.q() as u8;
    let mut entries = vec![0u8; dots];
    loop {
        let t = FerrersTableau::new(diag.clone(), entries.clone()).expect("shape");
        visit(Subspace::from_tableau(field, &t).expect("valid tableau"));
        let mut i = dots;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            entries[i] += 1;
            if entries[i] < q {
                break;
            }
            entries[i] = 0;
        }
    }
}

/// All k-subspaces of F_q^n in canonical order: pivot integer descending,
/// then tableau entries lexicographically. `filter` restricts pivots.
pub fn enumerate_subspaces(
    field: &Field,
    n: usize,
    k: usize,
    filter: Option<&dyn Fn(&PivotVector) -> bool>,
) -> Result<Vec<Subspace>, SubspaceError> {
    let count = gauss_big(n as u32, k as u32, field.q() as u64);
    let ceiling = limits::enumeration_ceiling();
    if count > num_bigint::BigInt::from(ceiling) {
        return Err(SubspaceError::CeilingExceeded { count: count.to_string(), ceiling });
    }
    let mut out = Vec::new();
    for v in pivots_descending(n, k) {
        if filter.is_none_or(|f| f(&v)) {
            for_each_with_pivot(field, &v, |s| out.push(s));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn worked_example_rref() {
        let f = gf(2);
        let m = MatrixFq::from_digit_rows(
            &f,
            &["100010000", "001000111", "000100010", "000001101"].map(|s| s),
        )
        .unwrap();
        let gen = MatrixFq::from_digit_rows(
            &f,
            &["101110101", "100111111", "000100010", "000001101"],
        )
        .unwrap();
        let (u, v) = rref(&gen).unwrap();
        assert_eq!(u.basis(), &m);
        assert_eq!(v.to_string(), "101101000");
        assert_eq!(v.ferrers().row_lengths(), &[5, 4, 4, 3]);
        assert_eq!(u.tableau().entries(), &[0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn rank_deficiency_reported() {
        let f = gf(3);
        let m = MatrixFq::from_digit_rows(&f, &["120", "210"]).unwrap();
        assert_eq!(Subspace::from_generators(&m), Err(SubspaceError::RankDeficient { rows: 2, rank: 1 }));
    }

    #[test]
    fn trivial_distances() {
        let f = gf(2);
        let u = Subspace::from_generators(&MatrixFq::from_digit_rows(&f, &["1000", "0100"]).unwrap()).unwrap();
        let w = Subspace::from_generators(&MatrixFq::from_digit_rows(&f, &["0010", "0001"]).unwrap()).unwrap();
        assert_eq!(u.distance(&u).unwrap(), 0);
        assert_eq!(u.distance(&w).unwrap(), 4);
        let z = Subspace::from_generators(&MatrixFq::from_digit_rows(&f, &["10000"]).unwrap()).unwrap();
        assert_eq!(u.distance(&z), Err(SubspaceError::AmbientMismatch(4, 5)));
    }

    #[test]
    fn complement_small() {
        let f = gf(2);
        let u = Subspace::from_generators(&MatrixFq::from_digit_rows(&f, &["10"]).unwrap()).unwrap();
        assert_eq!(u.orthogonal_complement().basis().digits(), "01");
        let f3 = gf(3);
        let w = Subspace::from_generators(&MatrixFq::from_digit_rows(&f3, &["1021", "0112"]).unwrap()).unwrap();
        let c = w.orthogonal_complement();
        assert_eq!(c.k(), 2);
        assert_eq!(c.orthogonal_complement(), w);
    }

    #[test]
    fn pivot_integers() {
        let v = pivot_int_decode(24672, 15).unwrap();
        assert_eq!(v.to_string(), "110000001100000");
        assert_eq!(pivot_int_decode(0, 7).unwrap().to_string(), "0000000");
        for x in 0..(1u64 << 12) {
            assert_eq!(pivot_int_encode(&pivot_int_decode(x, 12).unwrap()), x);
        }
        assert!(pivot_int_decode(1 << 12, 12).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let f = gf(2);
        let all = enumerate_subspaces(&f, 5, 2, None).unwrap();
        assert_eq!(all.len(), 155);
        let mut counts: Vec<(String, usize)> = Vec::new();
        for s in &all {
            let p = s.pivot().to_string();
            match counts.last_mut() {
                Some((last, c)) if *last == p => *c += 1,
                _ => counts.push((p, 1)),
            }
        }
        let got: Vec<usize> = counts.iter().map(|c| c.1).collect();
        assert_eq!(got, vec![64, 32, 16, 8, 16, 8, 4, 4, 2, 1]);
        for (p, c) in &counts {
            assert_eq!(*c, 1 << p.parse::<PivotVector>().unwrap().dots());
        }
        let uniq: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(uniq.len(), 155);
        assert_eq!(enumerate_subspaces(&gf(3), 4, 4, None).unwrap().len(), 1);
        assert_eq!(enumerate_subspaces(&gf(3), 4, 2, None).unwrap().len(), 130);
    }

    #[test]
    fn identity_is_canonical() {
        let f = make_field(3, 1).unwrap();
        let (u, v) = rref(&MatrixFq::identity(&f, 3)).unwrap();
        assert_eq!(u.basis(), &MatrixFq::identity(&f, 3));
        assert_eq!(v.to_string(), "111");
    }

    #[test]
    fn coordinate_meets() {
        let f = gf(2);
        let u = Subspace::from_generators(&MatrixFq::from_digit_rows(&f, &["1000", "0110"]).unwrap()).unwrap();
        assert_eq!(u.dim_meet_coordinates(0..2), 1);
        assert_eq!(u.dim_meet_vanishing(2..4), 1);
        assert_eq!(u.meet_coordinates(0..2).basis().digits(), "10");
        assert_eq!(u.dim_meet_coordinates(2..4), 0);
    }

    proptest::proptest! {
        #![proptest_config(proptest::test_runner::Config::with_cases(2000))]
        #[test]
        fn any_basis_gives_the_same_subspace(
            q in proptest::sample::select(vec![2u32, 3, 4]),
            data in proptest::collection::vec(0u8..4, 18),
            ops in proptest::collection::vec((0usize..3, 0usize..3, 1u8..4), 0..12),
        ) {
            let f = gf(q);
            let data: Vec<u8> = data.iter().map(|&x| x % q as u8).collect();
            let m = MatrixFq::new(&f, 3, 6, data).unwrap();
            let u = Subspace::span(&m);
            // Invertible row operations: row i += c * row j, or scale row i by c.
            let mut g = m.clone();
            for (i, j, c) in ops {
                let c = c % q as u8;
                let c = if c == 0 { 1 } else { c };
                for col in 0..6 {
                    let v = if i == j { f.mul_raw(c, g.get(i, col)) } else { f.add_raw(g.get(i, col), f.mul_raw(c, g.get(j, col))) };
                    g.set(i, col, v);
                }
            }
            proptest::prop_assert_eq!(Subspace::span(&g), u);
        }
    }
}
