use crate::gf::Field;

use super::{MatrixFq, PivotVector, SubspaceError};

/// Right-aligned dot pattern in a k x (n-k) frame. Row i holds one dot per
/// non-pivot column to the right of the i-th pivot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FerrersDiagram {
    n: usize,
    rows: Vec<usize>,
}

impl FerrersDiagram {
    pub fn from_pivot(v: &PivotVector) -> Self {
        let n = v.n();
        let mut rows = Vec::with_capacity(v.weight());
        let mut zeros_right = 0;
        for i in (0..n).rev() {
            if v.get(i) {
                rows.push(zeros_right);
            } else {
                zeros_right += 1;
            }
        }
        rows.reverse();
        FerrersDiagram { n, rows }
    }

    /// Validates shape: k rows, non-increasing, each at most n-k long.
    pub fn new(n: usize, rows: Vec<usize>) -> Result<Self, SubspaceError> {
        let k = rows.len();
        let frame = n.checked_sub(k).ok_or(SubspaceError::NotEmbeddable { k, frame: 0 })?;
        let ordered = rows.windows(2).all(|w| w[0] >= w[1]);
        if !ordered || rows.iter().any(|&r| r > frame) {
            return Err(SubspaceError::NotEmbeddable { k, frame });
        }
        Ok(FerrersDiagram { n, rows })
    }

    /// Pivot position of row i is n - k + i - r_i.
    pub fn to_pivot(&self) -> Result<PivotVector, SubspaceError> {
        let k = self.k();
        let pos: Vec<usize> = self.rows.iter().enumerate().map(|(i, &r)| self.n - k + i - r).collect();
        PivotVector::from_positions(self.n, &pos)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.rows.len()
    }
    /// Width of the frame, n - k.
    pub fn frame_cols(&self) -> usize {
        self.n - self.rows.len()
    }
    pub fn row_lengths(&self) -> &[usize] {
        &self.rows
    }
    pub fn dots(&self) -> usize {
        self.rows.iter().sum()
    }
    pub fn contains(&self, row: usize, col: usize) -> bool {
        col + self.rows[row] >= self.frame_cols() && col < self.frame_cols()
    }
    /// Dot coordinates (row, frame column), row-major.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let w = self.frame_cols();
        let mut out = Vec::with_capacity(self.dots());
        for (i, &r) in self.rows.iter().enumerate() {
            for c in w - r..w {
                out.push((i, c));
            }
        }
        out
    }
    pub fn nonempty_rows(&self) -> usize {
        self.rows.iter().filter(|&&r| r > 0).count()
    }
    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }
    /// All nonempty rows have the same length.
    pub fn is_rectangular(&self) -> bool {
        let first = self.first_row();
        self.rows.iter().all(|&r| r == 0 || r == first)
    }
}

/// A Ferrers diagram with a field element on each dot (row-major).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FerrersTableau {
    diagram: FerrersDiagram,
    entries: Vec<u8>,
}

impl FerrersTableau {
    pub fn new(diagram: FerrersDiagram, entries: Vec<u8>) -> Result<Self, SubspaceError> {
        if entries.len() != diagram.dots() {
            return Err(SubspaceError::TableauShape { expected: diagram.dots(), got: entries.len() });
        }
        Ok(FerrersTableau { diagram, entries })
    }
    pub fn diagram(&self) -> &FerrersDiagram {
        &self.diagram
    }
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }
    /// The k x (n-k) frame matrix with zeros off the diagram.
    pub fn to_frame(&self, field: &Field) -> MatrixFq {
        let (k, w) = (self.diagram.k(), self.diagram.frame_cols());
        let mut m = MatrixFq::zeros(field, k, w);
        for (&(r, c), &x) in self.diagram.cells().iter().zip(&self.entries) {
            m.set(r, c, x);
        }
        m
    }
}
