use crate::gf::Field;
use crate::subspace::MatrixFq;

/// Echelon data for a list of vectors, answering membership and coordinate
/// queries with respect to the original list.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    field: Field,
    len: usize,
    /// Echelon rows (RREF over the vector part).
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    /// transform[i] expresses rows[i] in terms of the original vectors.
    transform: Vec<Vec<u8>>,
    count: usize,
}

impl SpanSolver {
    pub fn new(field: &Field, len: usize, vectors: &[Vec<u8>]) -> Self {
        let count = vectors.len();
        let width = len + count;
        let mut data = Vec::with_capacity(count * width);
        for (i, v) in vectors.iter().enumerate() {
            data.extend_from_slice(v);
            data.extend((0..count).map(|j| u8::from(i == j)));
        }
        let m = MatrixFq::from_raw(field, count, width, data);
        let (e, pivots) = m.rref();
        let mut rows = Vec::new();
        let mut piv = Vec::new();
        let mut transform = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            if p >= len {
                break;
            }
            rows.push(e.row(r)[..len].to_vec());
            transform.push(e.row(r)[len..].to_vec());
            piv.push(p);
        }
        SpanSolver { field: field.clone(), len, rows, pivots: piv, transform, count }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients c with sum c_i v_i = x, or None if x is outside the span.
    /// When the vectors are dependent, one particular solution is returned.
    pub fn coordinates(&self, x: &[u8]) -> Option<Vec<u8>> {
        let f = &self.field;
        let mut rest = x.to_vec();
        let mut coeff = vec![0u8; self.count];
        for (i, &p) in self.pivots.iter().enumerate() {
            let e = rest[p];
            if e == 0 {
                continue;
            }
            for j in 0..self.len {
                rest[j] = f.sub_raw(rest[j], f.mul_raw(e, self.rows[i][j]));
            }
            for j in 0..self.count {
                coeff[j] = f.add_raw(coeff[j], f.mul_raw(e, self.transform[i][j]));
            }
        }
        rest.iter().all(|&r| r == 0).then_some(coeff)
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        debug_assert_eq!(x.len(), self.len);
        self.coordinates(x).is_some()
    }
}
