use std::fmt;

use crate::gf::{gf2, Field};

use super::SubspaceError;

/// A dense matrix over a tabled field. Entries are element representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFq {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatrixFq {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self, SubspaceError> {
        if data.len() != rows * cols {
            return Err(SubspaceError::Shape { expected: rows * cols, got: data.len() });
        }
        if let Some(&bad) = data.iter().find(|&&x| x as u32 >= field.q()) {
            return Err(SubspaceError::BadEntry { entry: bad as u32, q: field.q() });
        }
        Ok(MatrixFq { field: field.clone(), rows, cols, data })
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MatrixFq { field: field.clone(), rows, cols, data }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self::from_raw(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: &Field, k: usize) -> Self {
        let mut m = Self::zeros(field, k, k);
        for i in 0..k {
            m.data[i * k + i] = 1;
        }
        m
    }

    /// Parses rows of digit strings, e.g. `["1010", "0111"]`.
    pub fn from_digit_rows(field: &Field, rows: &[&str]) -> Result<Self, SubspaceError> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(SubspaceError::Shape { expected: cols, got: r.len() });
            }
            for ch in r.chars() {
                let d = ch.to_digit(36).ok_or(SubspaceError::BadEntry { entry: u32::MAX, q: field.q() })?;
                data.push(d as u8);
            }
        }
        Self::new(field, rows.len(), cols, data)
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
    pub fn data(&self) -> &[u8] {
        &self.data
    }
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add_raw(a, b)).collect();
        Self::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub_raw(a, b)).collect();
        Self::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: u8) -> Self {
        let data = self.data.iter().map(|&a| self.field.mul_raw(a, s)).collect();
        Self::from_raw(&self.field, self.rows, self.cols, data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Self) -> Self {
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self::from_raw(&self.field, self.rows + other.rows, self.cols, data)
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let w = range.len();
        let mut data = Vec::with_capacity(self.rows * w);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[range.clone()]);
        }
        Self::from_raw(&self.field, self.rows, w, data)
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.rows, self.cols, &self.data)
    }

    /// Reduced row echelon form with zero rows dropped, and the pivot columns.
    pub fn rref(&self) -> (MatrixFq, Vec<usize>) {
        let (data, pivots) = rref_data(&self.field, self.rows, self.cols, &self.data);
        (Self::from_raw(&self.field, pivots.len(), self.cols, data), pivots)
    }

    /// A basis of {x : self * x = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u8>> {
        let (e, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u8; self.cols];
                v[fc] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg_raw(e.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Digit string, row-major, no separators.
    pub fn digits(&self) -> String {
        self.data.iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap()).collect()
    }
}

/// Packs up to 64 columns of a GF(2) matrix; column c becomes bit (63 - c) so
/// that integer order matches lexicographic order of the rows.
pub(crate) fn pack_gf2_rows(rows: usize, cols: usize, data: &[u8], out: &mut Vec<u64>) {
    out.clear();
    for r in 0..rows {
        let mut w = 0u64;
        for (c, &x) in data[r * cols..(r + 1) * cols].iter().enumerate() {
            if x != 0 {
                w |= 1u64 << (63 - c);
            }
        }
        out.push(w);
    }
}

pub(crate) fn rank_of(field: &Field, rows: usize, cols: usize, data: &[u8]) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    if field.q() == 2 && cols <= 64 {
        let mut packed = Vec::with_capacity(rows);
        pack_gf2_rows(rows, cols, data, &mut packed);
        return gf2::rank(&mut packed);
    }
    rref_data(field, rows, cols, data).1.len()
}

pub(crate) fn rref_data(field: &Field, rows: usize, cols: usize, data: &[u8]) -> (Vec<u8>, Vec<usize>) {
    if field.q() == 2 && cols <= 64 {
        return rref_gf2(rows, cols, data);
    }
    let mut m = data.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| m[i * cols + c] != 0) else { continue };
        if sel != r {
            for j in 0..cols {
                m.swap(sel * cols + j, r * cols + j);
            }
        }
        let inv = field.inv_raw(m[r * cols + c]);
        for j in 0..cols {
            m[r * cols + j] = field.mul_raw(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in 0..cols {
                let t = field.mul_raw(f, m[r * cols + j]);
                m[i * cols + j] = field.sub_raw(m[i * cols + j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r * cols);
    (m, pivots)
}

fn rref_gf2(rows: usize, cols: usize, data: &[u8]) -> (Vec<u8>, Vec<usize>) {
    let mut packed = Vec::with_capacity(rows);
    pack_gf2_rows(rows, cols, data, &mut packed);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let bit = 1u64 << (63 - c);
        let Some(sel) = (r..rows).find(|&i| packed[i] & bit != 0) else { continue };
        packed.swap(sel, r);
        let p = packed[r];
        for (i, w) in packed.iter_mut().enumerate() {
            if i != r && *w & bit != 0 {
                *w ^= p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = vec![0u8; r * cols];
    for (i, &w) in packed.iter().take(r).enumerate() {
        for c in 0..cols {
            out[i * cols + c] = ((w >> (63 - c)) & 1) as u8;
        }
    }
    (out, pivots)
}
