use std::ops::Range;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ConstructError;
use crate::gf::Field;
use crate::limits;
use crate::rankmetric::{fdrm_best_effort, gabidulin_code, LinearMatrixCode, RankError};
use crate::subspace::{FerrersDiagram, PivotVector, Subspace};

/// Codewords as fixed-width bit strings: each RREF digit takes
/// ceil(log2 q) bits and each codeword a whole number of u64 words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedStore {
    digits: usize,
    bits: u32,
    stride: usize,
    len: usize,
    data: Vec<u64>,
}

impl PackedStore {
    pub fn new(q: u32, digits: usize) -> Self {
        let bits = 32 - (q - 1).leading_zeros();
        let stride = (digits * bits as usize).div_ceil(64).max(1);
        PackedStore { digits, bits: bits.max(1), stride, len: 0, data: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn digits_per_word(&self) -> usize {
        self.digits
    }

    fn encode(&self, digits: &[u8], out: &mut [u64]) {
        out.fill(0);
        let b = self.bits as usize;
        for (i, &d) in digits.iter().enumerate() {
            let pos = i * b;
            out[pos / 64] |= (d as u64) << (pos % 64);
            if pos % 64 + b > 64 {
                out[pos / 64 + 1] |= (d as u64) >> (64 - pos % 64);
            }
        }
    }

    pub fn push(&mut self, digits: &[u8]) {
        debug_assert_eq!(digits.len(), self.digits);
        let start = self.data.len();
        self.data.resize(start + self.stride, 0);
        let mut buf = vec![0u64; self.stride];
        self.encode(digits, &mut buf);
        self.data[start..].copy_from_slice(&buf);
        self.len += 1;
    }

    pub fn set(&mut self, i: usize, digits: &[u8]) {
        let mut buf = vec![0u64; self.stride];
        self.encode(digits, &mut buf);
        self.data[i * self.stride..(i + 1) * self.stride].copy_from_slice(&buf);
    }

    pub fn raw(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn get_into(&self, i: usize, out: &mut [u8]) {
        let w = self.raw(i);
        let b = self.bits as usize;
        let mask = (1u64 << b) - 1;
        for (j, o) in out.iter_mut().enumerate() {
            let pos = j * b;
            let mut v = w[pos / 64] >> (pos % 64);
            if pos % 64 + b > 64 {
                v |= w[pos / 64 + 1] << (64 - pos % 64);
            }
            *o = (v & mask) as u8;
        }
    }

    pub fn get(&self, i: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.digits];
        self.get_into(i, &mut out);
        out
    }
}

/// A linear rank-metric code named by how to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CodeSpec {
    /// Gabidulin code of m x n matrices with rank distance d.
    Gabidulin { m: usize, n: usize, d: usize },
    /// FDRM code on the diagram of `pivot` with rank distance `delta`.
    Fdrm { pivot: String, delta: usize, seed: u64 },
    /// Explicit basis, digit strings row-major.
    Basis { rows: usize, cols: usize, basis: Vec<String> },
}

impl CodeSpec {
    pub fn build(&self, field: &Field) -> Result<LinearMatrixCode, RankError> {
        match self {
            CodeSpec::Gabidulin { m, n, d } => gabidulin_code(field, *m, *n, *d),
            CodeSpec::Fdrm { pivot, delta, seed } => {
                let v: PivotVector = pivot.parse().map_err(|_| RankError::OutOfRange(format!("pivot {pivot}")))?;
                Ok(fdrm_best_effort(field, &v.ferrers(), *delta, *seed)?.code)
            }
            CodeSpec::Basis { rows, cols, basis } => {
                let vecs = basis
                    .iter()
                    .map(|s| s.chars().map(|c| c.to_digit(36).map(|d| d as u8)).collect::<Option<Vec<u8>>>())
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| RankError::OutOfRange("bad basis digit".into()))?;
                LinearMatrixCode::from_basis(field, *rows, *cols, vecs, None)
            }
        }
    }

    pub fn basis_of(code: &LinearMatrixCode) -> CodeSpec {
        let to_s = |b: &Vec<u8>| b.iter().map(|&d| std::char::from_digit(d as u32, 36).unwrap()).collect();
        CodeSpec::Basis { rows: code.rows(), cols: code.cols(), basis: code.basis().iter().map(to_s).collect() }
    }
}

/// How the codewords of one component were produced; the verifier derives
/// its certificates from this.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ComponentKind {
    /// Lifted rank-metric code: every codeword has this pivot and its frame
    /// matrix lies in `code`.
    Lifted { pivot: String, code: CodeSpec },
    /// Generator matrices [M_1 | .. | E(U) | .. | M_l] with E(U) in block
    /// `lead`; blocks before the lead have rank at most `rank_cap`.
    BlockLifted { blocks: Vec<usize>, lead: usize, rank_cap: usize, codes: Vec<Option<CodeSpec>> },
    /// Direct sums U_1 + .. + U_l with dim U_i = dims[i], U_i inside block i;
    /// `parts` counts the codewords of each index j in order.
    Product { blocks: Vec<usize>, dims: Vec<usize>, parts: Vec<usize> },
    /// Contributes size only; no codewords are emitted.
    Placeholder { size: String },
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub kind: ComponentKind,
}

impl Component {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }
    pub fn is_placeholder(&self) -> bool {
        matches!(self.kind, ComponentKind::Placeholder { .. })
    }
}

/// Sidecar metadata written next to a code file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub version: u32,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: u32,
    pub components: Vec<Component>,
}

/// A constant dimension code with labelled components.
#[derive(Clone, Debug)]
pub struct CodeArtifact {
    field: Field,
    n: usize,
    k: usize,
    d: u32,
    store: PackedStore,
    components: Vec<Component>,
    open: Option<(String, ComponentKind, usize)>,
}

impl CodeArtifact {
    pub fn new(field: &Field, n: usize, k: usize, d: u32) -> Self {
        CodeArtifact {
            field: field.clone(),
            n,
            k,
            d,
            store: PackedStore::new(field.q(), n * k),
            components: Vec::new(),
            open: None,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// Declared distance; trusted only after verification.
    pub fn declared_distance(&self) -> u32 {
        self.d
    }
    pub fn components(&self) -> &[Component] {
        &self.components
    }
    pub(crate) fn components_mut(&mut self) -> &mut Vec<Component> {
        &mut self.components
    }
    pub fn store(&self) -> &PackedStore {
        &self.store
    }

    /// Number of emitted codewords.
    pub fn len(&self) -> usize {
        self.store.len()
    }
    pub fn is_empty(&self) -> bool {
        self.store.is_empty() && self.placeholder_size() == BigInt::from(0)
    }

    pub fn placeholder_size(&self) -> BigInt {
        self.components
            .iter()
            .filter_map(|c| match &c.kind {
                ComponentKind::Placeholder { size } => Some(size.parse::<BigInt>().expect("placeholder size")),
                _ => None,
            })
            .sum()
    }

    /// Emitted codewords plus size-only contributions.
    pub fn size(&self) -> BigInt {
        BigInt::from(self.len()) + self.placeholder_size()
    }

    pub fn is_constructive(&self) -> bool {
        !self.components.iter().any(Component::is_placeholder)
    }

    pub fn begin(&mut self, label: impl Into<String>, kind: ComponentKind) {
        assert!(self.open.is_none(), "component already open");
        self.open = Some((label.into(), kind, self.len()));
    }

    pub fn end(&mut self) {
        let (label, kind, start) = self.open.take().expect("no open component");
        self.components.push(Component { label, start, end: self.len(), kind });
    }

    pub fn placeholder(&mut self, label: impl Into<String>, size: &BigInt) {
        let at = self.len();
        self.components.push(Component {
            label: label.into(),
            start: at,
            end: at,
            kind: ComponentKind::Placeholder { size: size.to_string() },
        });
    }

    /// Appends RREF digits of one codeword.
    pub fn push_digits(&mut self, digits: &[u8]) -> Result<(), ConstructError> {
        if self.len() as u64 >= limits::emission_ceiling() {
            return Err(ConstructError::TooLarge(format!("more than {} codewords", limits::emission_ceiling())));
        }
        self.store.push(digits);
        Ok(())
    }

    pub fn push(&mut self, s: &Subspace) -> Result<(), ConstructError> {
        if s.n() != self.n || s.k() != self.k || s.field() != &self.field {
            return Err(ConstructError::Parameters("codeword does not match the artifact".into()));
        }
        self.push_digits(s.digits())
    }

    pub fn digits(&self, i: usize) -> Vec<u8> {
        self.store.get(i)
    }

    pub fn codeword(&self, i: usize) -> Subspace {
        Subspace::from_rref_digits(&self.field, self.k, self.n, self.store.get(i))
    }

    /// Replaces one codeword in place (mutation tests, repairs).
    pub fn replace(&mut self, i: usize, s: &Subspace) {
        self.store.set(i, s.digits());
    }

    pub fn meta(&self) -> ArtifactMeta {
        ArtifactMeta { version: 1, q: self.field.q(), n: self.n, k: self.k, d: self.d, components: self.components.clone() }
    }

    /// Rebuilds an artifact from codewords and (optionally) sidecar data.
    /// Without metadata the whole code becomes one explicit component.
    pub fn from_parts(
        field: &Field,
        n: usize,
        k: usize,
        d: u32,
        codewords: PackedStore,
        meta: Option<ArtifactMeta>,
    ) -> Result<Self, ConstructError> {
        let len = codewords.len();
        let components = match meta {
            Some(m) => {
                if m.q != field.q() || m.n != n || m.k != k {
                    return Err(ConstructError::Parameters("metadata does not match the code".into()));
                }
                let mut covered = 0;
                for c in &m.components {
                    if c.start != covered || c.end < c.start || c.end > len {
                        return Err(ConstructError::Parameters(format!("component {} has a bad range", c.label)));
                    }
                    covered = c.end;
                }
                if covered != len {
                    return Err(ConstructError::Parameters("components do not cover the code".into()));
                }
                m.components
            }
            None => vec![Component { label: "all".into(), start: 0, end: len, kind: ComponentKind::Explicit }],
        };
        Ok(CodeArtifact { field: field.clone(), n, k, d, store: codewords, components, open: None })
    }
}

/// RREF digits of the subspace with the given pivot whose frame matrix is
/// `frame` (k x (n-k), entries off the diagram must be zero).
pub fn lift_frame(pivot: &PivotVector, frame: &[u8], out: &mut [u8]) {
    let (n, k) = (pivot.n(), pivot.weight());
    let w = n - k;
    out.fill(0);
    let pos = pivot.positions();
    let mut free = Vec::with_capacity(w);
    let mut r = 0;
    for c in 0..n {
        if r < k && pos[r] == c {
            r += 1;
        } else {
            free.push(c);
        }
    }
    for (row, &p) in pos.iter().enumerate() {
        out[row * n + p] = 1;
        for (f, &c) in free.iter().enumerate() {
            out[row * n + c] = frame[row * w + f];
        }
    }
}

/// Appends the lifted code of `code` on `pivot` as one component.
pub fn emit_lifted(
    art: &mut CodeArtifact,
    label: &str,
    pivot: &PivotVector,
    code: &LinearMatrixCode,
    spec: CodeSpec,
) -> Result<(), ConstructError> {
    let diag: FerrersDiagram = pivot.ferrers();
    if code.rows() != diag.k() || code.cols() != diag.frame_cols() {
        return Err(ConstructError::Parameters(format!("code shape does not fit pivot {pivot}")));
    }
    let ceiling = limits::emission_ceiling();
    if code.size() + BigInt::from(art.len()) > BigInt::from(ceiling) {
        return Err(ConstructError::TooLarge(format!("lifted code on {pivot} has {} codewords", code.size())));
    }
    art.begin(label, ComponentKind::Lifted { pivot: pivot.to_string(), code: spec });
    let mut buf = vec![0u8; art.n * art.k];
    let mut err = None;
    code.for_each_codeword(|m| {
        if err.is_none() {
            lift_frame(pivot, m, &mut buf);
            if let Err(e) = art.push_digits(&buf) {
                err = Some(e);
            }
        }
    });
    art.end();
    err.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::MatrixFq;

    #[test]
    fn packed_store_round_trip() {
        for q in [2u32, 3, 4, 5, 7, 9] {
            let mut s = PackedStore::new(q, 70);
            let words: Vec<Vec<u8>> = (0..20).map(|i| (0..70).map(|j| ((i * 7 + j * 3) % q as usize) as u8).collect()).collect();
            for w in &words {
                s.push(w);
            }
            for (i, w) in words.iter().enumerate() {
                assert_eq!(&s.get(i), w);
            }
        }
    }

    #[test]
    fn lifting_matches_the_frame_constructor() {
        let f = Field::of_order(3).unwrap();
        let v: PivotVector = "1010100".parse().unwrap();
        let d = v.ferrers();
        let code = LinearMatrixCode::full_on(&f, &d);
        let mut buf = vec![0u8; 21];
        let mut count = 0;
        code.for_each_codeword(|m| {
            if count < 50 {
                lift_frame(&v, m, &mut buf);
                let frame = MatrixFq::new(&f, 3, 4, m.to_vec()).unwrap();
                assert_eq!(Subspace::from_frame(&f, &v, &frame).unwrap().digits(), &buf[..]);
            }
            count += 1;
        });
    }
}
