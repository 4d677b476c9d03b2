use num_bigint::BigInt;
use num_traits::Zero;

use super::{registry_poly, CodeArtifact, CodeSpec, ComponentKind, ConstructError};
use crate::gf::Field;
use crate::rankmetric::{
    mrd_rank_distribution_poly, mrd_size_poly, restricted_rank_count, CosetFamily, LinearMatrixCode,
};
use crate::subspace::{rref_data, MatrixFq, Subspace};
use crate::PolyQ;

/// The single codeword F_q^k of a k-dimensional ambient space.
pub fn whole_space(field: &Field, k: usize) -> Subspace {
    Subspace::span(&MatrixFq::identity(field, k))
}

fn offsets(blocks: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &b in blocks {
        acc += b;
        out.push(acc);
    }
    out
}

/// Number of codewords emitted by [`emit_construction1`]: for each lead block
/// i, the rank-capped counts of earlier blocks times #C_i times the sizes of
/// later codes.
pub fn construction1_size(d: usize, k: usize, cdc_sizes: &[BigInt], codes: &[LinearMatrixCode]) -> Result<BigInt, ConstructError> {
    let cap = (k - d / 2) as u32;
    let mut restricted = Vec::with_capacity(codes.len());
    for c in codes {
        restricted.push(restricted_rank_count(c, cap)?);
    }
    let mut total = BigInt::zero();
    for i in 0..codes.len() {
        let mut term = cdc_sizes[i].clone();
        for (j, c) in codes.iter().enumerate() {
            if j < i {
                term *= &restricted[j];
            } else if j > i {
                term *= c.size();
            }
        }
        total += term;
    }
    Ok(total)
}

/// The same count as a polynomial for additive MRD block codes, with the
/// component codes taken from the registry.
pub fn construction1_poly(blocks: &[usize], k: usize, d: usize) -> Result<PolyQ, ConstructError> {
    if blocks.iter().any(|&b| b < k) || d < 2 || d % 2 == 1 {
        return Err(ConstructError::Parameters("blocks must have length at least k and d must be even".into()));
    }
    let (k32, dr) = (k as u32, (d / 2) as u32);
    let mut total = PolyQ::zero();
    for i in 0..blocks.len() {
        let mut term = registry_poly(blocks[i], d, k)?;
        for (j, &nj) in blocks.iter().enumerate() {
            if j < i {
                let mut capped = PolyQ::one();
                for r in dr..=k32 - dr {
                    capped = capped + mrd_rank_distribution_poly(k32, nj as u32, dr, r)?;
                }
                term = term * capped;
            } else if j > i {
                term = term * mrd_size_poly(k32, nj as u32, dr)?;
            }
        }
        total = total + term;
    }
    Ok(total)
}

struct Emit1<'a> {
    field: &'a Field,
    n: usize,
    k: usize,
    off: Vec<usize>,
    lead: usize,
    restricted: &'a [Vec<Vec<u8>>],
    codes: &'a [(LinearMatrixCode, CodeSpec)],
    rref_needed: bool,
}

impl Emit1<'_> {
    fn write_block(&self, gen: &mut [u8], j: usize, m: &[u8]) {
        let w = self.off[j + 1] - self.off[j];
        for r in 0..self.k {
            gen[r * self.n + self.off[j]..r * self.n + self.off[j + 1]].copy_from_slice(&m[r * w..(r + 1) * w]);
        }
    }

    fn rec(&self, j: usize, gen: &mut Vec<u8>, art: &mut CodeArtifact) -> Result<(), ConstructError> {
        if j == self.off.len() - 1 {
            if self.rref_needed {
                let (e, pivots) = rref_data(self.field, self.k, self.n, gen);
                debug_assert_eq!(pivots.len(), self.k);
                return art.push_digits(&e);
            }
            return art.push_digits(gen);
        }
        if j == self.lead {
            return self.rec(j + 1, gen, art);
        }
        if j < self.lead {
            for m in &self.restricted[j] {
                self.write_block(gen, j, m);
                self.rec(j + 1, gen, art)?;
            }
            return Ok(());
        }
        let mut err = None;
        self.codes[j].0.for_each_codeword(|m| {
            if err.is_none() {
                self.write_block(gen, j, m);
                if let Err(e) = self.rec(j + 1, gen, art) {
                    err = Some(e);
                }
            }
        });
        err.map_or(Ok(()), Err)
    }
}

/// Emits the components C^1..C^l: generator matrices [M_1|..|E(U)|..|M_l]
/// with U in `cdcs[i]`, M_j in `codes[j]`, and rank M_j <= k - d/2 for j < i.
/// Returns the number of emitted codewords.
pub fn emit_construction1(
    art: &mut CodeArtifact,
    blocks: &[usize],
    d: usize,
    cdcs: &[Vec<Subspace>],
    codes: &[(LinearMatrixCode, CodeSpec)],
) -> Result<usize, ConstructError> {
    let (n, k) = (art.n(), art.k());
    let l = blocks.len();
    if blocks.iter().sum::<usize>() != n || cdcs.len() != l || codes.len() != l || l < 2 {
        return Err(ConstructError::Parameters("block structure does not match the artifact".into()));
    }
    for j in 0..l {
        let c = &codes[j].0;
        if c.rows() != k || c.cols() != blocks[j] {
            return Err(ConstructError::Parameters(format!("code for block {j} must be {k}x{}", blocks[j])));
        }
        if cdcs[j].iter().any(|u| u.k() != k || u.n() != blocks[j]) {
            return Err(ConstructError::Parameters(format!("component code {j} has the wrong shape")));
        }
    }
    let cap = (k - d / 2) as u32;
    let restricted: Vec<Vec<Vec<u8>>> = codes
        .iter()
        .take(l - 1)
        .map(|(c, _)| {
            let mut keep = Vec::new();
            c.for_each_codeword(|m| {
                if c.rank_of(m) <= cap {
                    keep.push(m.to_vec());
                }
            });
            keep
        })
        .collect();
    let off = offsets(blocks);
    let field = art.field().clone();
    let before = art.len();
    for lead in 0..l {
        let spec_list = codes.iter().enumerate().map(|(j, (_, s))| (j != lead).then(|| s.clone())).collect();
        art.begin(
            format!("C{}", lead + 1),
            ComponentKind::BlockLifted { blocks: blocks.to_vec(), lead, rank_cap: cap as usize, codes: spec_list },
        );
        let em = Emit1 { field: &field, n, k, off: off.clone(), lead, restricted: &restricted, codes, rref_needed: lead > 0 };
        let mut gen = vec![0u8; k * n];
        let mut result = Ok(());
        for u in &cdcs[lead] {
            gen.fill(0);
            em.write_block(&mut gen, lead, u.digits());
            result = em.rec(0, &mut gen, art);
            if result.is_err() {
                break;
            }
        }
        art.end();
        result?;
    }
    Ok(art.len() - before)
}

/// Checks the block dimension vectors: sum a = k, sum b = k - d/2 and
/// b_i < a_i <= n_i.
pub fn check_ab(blocks: &[usize], a: &[usize], b: &[usize], k: usize, d: usize) -> Result<(), ConstructError> {
    let bad = |m: &str| Err(ConstructError::Parameters(m.to_string()));
    if a.len() != blocks.len() || b.len() != blocks.len() {
        return bad("a and b need one entry per block");
    }
    if a.iter().sum::<usize>() != k {
        return bad("block dimensions must sum to k");
    }
    if b.iter().sum::<usize>() + d / 2 != k {
        return bad("b must sum to k - d/2");
    }
    if a.iter().zip(b).zip(blocks).any(|((&ai, &bi), &ni)| bi >= ai || ai > ni) {
        return bad("need b_i < a_i <= n_i");
    }
    Ok(())
}

/// Emits the direct sums U_1 + .. + U_l, U_i in families[j][i], for every
/// index j as one product component.
pub fn emit_product(
    art: &mut CodeArtifact,
    label: &str,
    blocks: &[usize],
    dims: &[usize],
    families: &[Vec<Vec<Subspace>>],
) -> Result<usize, ConstructError> {
    let (n, k) = (art.n(), art.k());
    if blocks.iter().sum::<usize>() != n || dims.iter().sum::<usize>() != k || dims.len() != blocks.len() {
        return Err(ConstructError::Parameters("product shape does not match the artifact".into()));
    }
    for fam in families {
        if fam.len() != blocks.len() {
            return Err(ConstructError::Parameters("one family per block is needed".into()));
        }
        for (i, f) in fam.iter().enumerate() {
            if f.iter().any(|u| u.n() != blocks[i] || u.k() != dims[i]) {
                return Err(ConstructError::Parameters(format!("family for block {i} has the wrong shape")));
            }
        }
    }
    let off = offsets(blocks);
    let row_off = offsets(dims);
    let mut parts = Vec::with_capacity(families.len());
    art.begin(label, ComponentKind::Product { blocks: blocks.to_vec(), dims: dims.to_vec(), parts: Vec::new() });
    let mut buf = vec![0u8; k * n];
    let mut result = Ok(());
    'outer: for fam in families {
        let count: usize = fam.iter().map(Vec::len).product();
        parts.push(count);
        let mut idx = vec![0usize; fam.len()];
        for _ in 0..count {
            buf.fill(0);
            for (i, &x) in idx.iter().enumerate() {
                let u = &fam[i][x];
                for r in 0..dims[i] {
                    let dst = (row_off[i] + r) * n + off[i];
                    buf[dst..dst + blocks[i]].copy_from_slice(u.basis().row(r));
                }
            }
            if let Err(e) = art.push_digits(&buf) {
                result = Err(e);
                break 'outer;
            }
            for i in (0..idx.len()).rev() {
                idx[i] += 1;
                if idx[i] < fam[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
    art.end();
    result?;
    if let Some(c) = art.components_mut().last_mut() {
        if let ComponentKind::Product { parts: p, .. } = &mut c.kind {
            *p = parts.clone();
        }
    }
    Ok(parts.iter().sum())
}

/// Monomial lower bound min_i alpha_i * prod_i m(q, a_i, n_i - a_i, d/2) with
/// alpha_i = m(q, a_i, n_i - a_i, a_i - b_i) / m(q, a_i, n_i - a_i, d/2).
pub fn construction2_poly(blocks: &[usize], a: &[usize], b: &[usize], d: usize) -> Result<PolyQ, ConstructError> {
    check_ab(blocks, a, b, a.iter().sum(), d)?;
    let (exp, alpha) = exponents(blocks, a, b, d)?;
    Ok(PolyQ::q_pow(exp + alpha))
}

fn mrd_exp(m: usize, n: usize, dr: usize) -> Result<u32, ConstructError> {
    if m.min(n) == 0 {
        return Ok(0);
    }
    if dr == 0 || dr > m.min(n) {
        return Err(ConstructError::Parameters(format!("rank distance {dr} for {m}x{n}")));
    }
    Ok((m.max(n) * (m.min(n) - dr + 1)) as u32)
}

fn exponents(blocks: &[usize], a: &[usize], b: &[usize], d: usize) -> Result<(u32, u32), ConstructError> {
    let mut exp = 0;
    let mut alpha = u32::MAX;
    for i in 0..blocks.len() {
        let w = blocks[i] - a[i];
        let base = mrd_exp(a[i], w, d / 2)?;
        exp += base;
        alpha = alpha.min(mrd_exp(a[i], w, a[i] - b[i])? - base);
    }
    Ok((exp, alpha))
}

/// Families for the coset baseline: index j takes the j-th coset of the
/// (a_i x (n_i - a_i), d/2) Gabidulin code inside the one with distance
/// a_i - b_i, lifted with pivots in the first a_i positions.
pub fn construction2_coset_families(
    field: &Field,
    blocks: &[usize],
    a: &[usize],
    b: &[usize],
    d: usize,
) -> Result<Vec<Vec<Vec<Subspace>>>, ConstructError> {
    check_ab(blocks, a, b, a.iter().sum(), d)?;
    let (_, alpha) = exponents(blocks, a, b, d)?;
    let r = (field.q() as u64).checked_pow(alpha).filter(|&r| r <= 1 << 20).ok_or_else(|| {
        ConstructError::TooLarge(format!("q^{alpha} families"))
    })? as usize;
    let mut per_block = Vec::with_capacity(blocks.len());
    for i in 0..blocks.len() {
        let w = blocks[i] - a[i];
        let pivot = crate::subspace::PivotVector::from_positions(blocks[i], &(0..a[i]).collect::<Vec<_>>())?;
        let lift = |m: &[u8]| {
            let mut out = vec![0u8; a[i] * blocks[i]];
            super::lift_frame(&pivot, m, &mut out);
            Subspace::from_canonical_digits(field, a[i], blocks[i], out).expect("lifted frame is canonical")
        };
        if w == 0 {
            per_block.push(vec![vec![lift(&[])]; r]);
            continue;
        }
        let parent = crate::rankmetric::gabidulin_code(field, a[i], w, a[i] - b[i])?;
        let sub = crate::rankmetric::gabidulin_code(field, a[i], w, d / 2)?;
        let fam = CosetFamily::new(parent, sub)?;
        let mut cosets = Vec::with_capacity(r);
        for j in 0..r {
            let mut words = Vec::new();
            fam.for_each_in_coset(j, |m| words.push(lift(m)));
            cosets.push(words);
        }
        per_block.push(cosets);
    }
    Ok((0..r).map(|j| per_block.iter().map(|c| c[j].clone()).collect()).collect())
}
