use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::{ExtField, Field};
use crate::subspace::{rank_of, FerrersDiagram, MatrixFq};

use super::{gabidulin_code, LinearMatrixCode, RankCertificate, RankError};

/// Exponent of the upper bound on a linear FDRM code on `diagram` with
/// subspace distance d (rank distance d/2): the minimum over i < d/2 of the
/// number of dots outside the first i rows and the last d/2-1-i columns.
pub fn fdrm_upper_bound(diagram: &FerrersDiagram, d: usize) -> Result<usize, RankError> {
    let h = d / 2;
    if !d.is_multiple_of(2) || h == 0 || h > diagram.k() {
        return Err(RankError::OutOfRange(format!("distance {d} for {} rows", diagram.k())));
    }
    let rows = diagram.row_lengths();
    Ok((0..h)
        .map(|i| rows[i..].iter().map(|&r| r.saturating_sub(h - 1 - i)).sum::<usize>())
        .min()
        .expect("h >= 1"))
}

/// Result of a construction that may fall short of the upper bound.
#[derive(Clone, Debug)]
pub struct FdrmOutcome {
    pub code: LinearMatrixCode,
    pub bound: usize,
}

impl FdrmOutcome {
    pub fn has_gap(&self) -> bool {
        self.code.dim() < self.bound
    }
}

/// A linear FDRM code on `diagram` with rank distance `delta` meeting the
/// upper bound. Rectangles use Gabidulin codes, delta = 2 uses the product
/// map construction; anything else that falls short is a constructive gap.
pub fn fdrm_construct(field: &Field, diagram: &FerrersDiagram, delta: usize) -> Result<LinearMatrixCode, RankError> {
    let out = fdrm_best_effort(field, diagram, delta, 0)?;
    if out.has_gap() {
        return Err(RankError::ConstructiveGap { achieved: out.code.dim(), bound: out.bound });
    }
    Ok(out.code)
}

pub fn fdrm_best_effort(
    field: &Field,
    diagram: &FerrersDiagram,
    delta: usize,
    seed: u64,
) -> Result<FdrmOutcome, RankError> {
    if delta == 0 {
        return Err(RankError::OutOfRange("rank distance 0".into()));
    }
    let (k, w) = (diagram.k(), diagram.frame_cols());
    let bound = if delta > k { 0 } else { fdrm_upper_bound(diagram, 2 * delta)? };
    let zero = || LinearMatrixCode::unchecked(field, k, w, vec![], Some(diagram.clone()), u32::MAX, RankCertificate::Exhaustive);
    if bound == 0 {
        return Ok(FdrmOutcome { code: zero()?, bound });
    }
    if delta == 1 {
        return Ok(FdrmOutcome { code: LinearMatrixCode::full_on(field, diagram), bound });
    }
    let (r, l) = (diagram.nonempty_rows(), diagram.first_row());
    if diagram.is_rectangular() {
        let g = gabidulin_code(field, r, l, delta)?;
        let basis = g.basis().iter().map(|b| embed(b, r, l, k, w)).collect();
        let code = LinearMatrixCode::unchecked(field, k, w, basis, Some(diagram.clone()), delta as u32, RankCertificate::Gabidulin)?;
        return Ok(FdrmOutcome { code, bound });
    }
    if delta == 2 {
        return Ok(FdrmOutcome { code: product_map_code(field, diagram)?, bound });
    }
    // Codewords of the bounding-rectangle MRD code that vanish off the diagram.
    let g = gabidulin_code(field, r, l, delta)?;
    let embedded: Vec<Vec<u8>> = g.basis().iter().map(|b| embed(b, r, l, k, w)).collect();
    let off: Vec<usize> = (0..k * w).filter(|&p| !diagram.contains(p / w, p % w)).collect();
    let dim = embedded.len();
    let mut cons = Vec::with_capacity(off.len() * dim);
    for &p in &off {
        cons.extend(embedded.iter().map(|b| b[p]));
    }
    let kernel = MatrixFq::new(field, off.len(), dim, cons).expect("valid").nullspace();
    let basis: Vec<Vec<u8>> = kernel
        .iter()
        .map(|c| {
            let mut v = vec![0u8; k * w];
            for (ci, b) in c.iter().zip(&embedded) {
                for (o, &x) in v.iter_mut().zip(b) {
                    *o = field.add_raw(*o, field.mul_raw(*ci, x));
                }
            }
            v
        })
        .collect();
    let mut code = LinearMatrixCode::unchecked(field, k, w, basis, Some(diagram.clone()), delta as u32, RankCertificate::Gabidulin)?;
    if code.dim() < bound {
        if let Some(better) = fdrm_greedy_search(field, diagram, delta, bound, seed, 20) {
            if better.dim() > code.dim() {
                code = better;
            }
        }
    }
    Ok(FdrmOutcome { code, bound })
}

fn embed(b: &[u8], r: usize, l: usize, k: usize, w: usize) -> Vec<u8> {
    let mut v = vec![0u8; k * w];
    for i in 0..r {
        for j in 0..l {
            v[i * w + (w - l + j)] = b[i * l + j];
        }
    }
    v
}

/// Kernel of M -> sum M_ic x^i x^(c - w + L) into GF(q^max(R, L)), where R
/// is the number of nonempty rows and L the first row length. A rank-one
/// matrix maps to a product of two nonzero field elements, so the kernel has
/// rank distance at least 2, and its dimension #dots - max(R, L) matches the
/// upper bound.
fn product_map_code(field: &Field, diagram: &FerrersDiagram) -> Result<LinearMatrixCode, RankError> {
    let (k, w) = (diagram.k(), diagram.frame_cols());
    let (r, l) = (diagram.nonempty_rows(), diagram.first_row());
    let big = r.max(l);
    let ext = ExtField::new(field, big)?;
    let cells = diagram.cells();
    let mut data = vec![0u8; big * cells.len()];
    for (j, &(i, c)) in cells.iter().enumerate() {
        let v = ext.mul(ext.basis_element(i), ext.basis_element(c + l - w));
        for (row, x) in ext.ext_coords(v).into_iter().enumerate() {
            data[row * cells.len() + j] = x;
        }
    }
    let map = MatrixFq::new(field, big, cells.len(), data).expect("valid");
    let basis = map
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut m = vec![0u8; k * w];
            for (&(i, c), x) in cells.iter().zip(v) {
                m[i * w + c] = x;
            }
            m
        })
        .collect();
    LinearMatrixCode::unchecked(field, k, w, basis, Some(diagram.clone()), 2, RankCertificate::ProductMap)
}

/// Seeded randomized greedy search for a linear FDRM code: a random
/// diagram-supported matrix joins the basis when every new span element has
/// rank at least `delta`. Restarts until `target` is reached. Only for small
/// diagrams, since the span is enumerated.
pub fn fdrm_greedy_search(
    field: &Field,
    diagram: &FerrersDiagram,
    delta: usize,
    target: usize,
    seed: u64,
    restarts: usize,
) -> Option<LinearMatrixCode> {
    let (k, w) = (diagram.k(), diagram.frame_cols());
    let q = field.q() as usize;
    if (q as f64).powi(target as i32) > 1e6 {
        return None;
    }
    let cells = diagram.cells();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<Vec<u8>>> = None;
    for _ in 0..restarts.max(1) {
        let mut basis: Vec<Vec<u8>> = Vec::new();
        let mut span: Vec<Vec<u8>> = vec![vec![0u8; k * w]];
        let mut misses = 0;
        while basis.len() < target && misses < 400 {
            let mut c = vec![0u8; k * w];
            for &(i, j) in &cells {
                c[i * w + j] = rng.gen_range(0..q) as u8;
            }
            let ok = span.iter().all(|s| {
                (1..q as u8).all(|lam| {
                    let v: Vec<u8> = s.iter().zip(&c).map(|(&a, &b)| field.add_raw(a, field.mul_raw(lam, b))).collect();
                    rank_of(field, k, w, &v) >= delta
                })
            });
            if !ok {
                misses += 1;
                continue;
            }
            let mut grown = Vec::with_capacity(span.len() * q);
            for lam in 0..q as u8 {
                for s in &span {
                    grown.push(s.iter().zip(&c).map(|(&a, &b)| field.add_raw(a, field.mul_raw(lam, b))).collect());
                }
            }
            span = grown;
            basis.push(c);
            misses = 0;
        }
        if best.as_ref().is_none_or(|b| basis.len() > b.len()) {
            best = Some(basis);
        }
        if best.as_ref().map_or(0, |b| b.len()) >= target {
            break;
        }
    }
    let basis = best?;
    LinearMatrixCode::from_basis(field, k, w, basis, Some(diagram.clone())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{pivots_descending, PivotVector};

    fn diag(s: &str) -> FerrersDiagram {
        s.parse::<PivotVector>().unwrap().ferrers()
    }

    #[test]
    fn worked_bound() {
        assert_eq!(fdrm_upper_bound(&diag("101101000"), 6).unwrap(), 7);
    }

    #[test]
    fn rectangle_bound_matches_mrd_exponent() {
        for (n, k) in [(6, 3), (8, 4), (7, 3), (9, 4)] {
            let v = PivotVector::from_positions(n, &(0..k).collect::<Vec<_>>()).unwrap();
            assert_eq!(fdrm_upper_bound(&v.ferrers(), 4).unwrap(), (n - k) * (k - 1));
        }
    }

    #[test]
    fn distance_two_bound_is_dot_count() {
        for v in pivots_descending(7, 3) {
            assert_eq!(fdrm_upper_bound(&v.ferrers(), 2).unwrap(), v.dots());
        }
    }

    #[test]
    fn table_sizes_for_g1_5_2() {
        let f = Field::of_order(2).unwrap();
        let expect = [("11000", 3), ("10100", 2), ("10010", 1), ("10001", 0), ("01100", 2), ("00011", 0)];
        for (p, dim) in expect {
            assert_eq!(fdrm_construct(&f, &diag(p), 2).unwrap().dim(), dim, "{p}");
        }
        let one_dot = diag("0101");
        assert_eq!(one_dot.dots(), 1);
        assert_eq!(fdrm_construct(&f, &one_dot, 2).unwrap().dim(), 0);
    }

    #[test]
    fn product_map_meets_bound_and_distance() {
        for q in [2u32, 3] {
            let f = Field::of_order(q).unwrap();
            for (n, k) in [(6, 3), (7, 3), (6, 2), (7, 4)] {
                for v in pivots_descending(n, k) {
                    let d = v.ferrers();
                    let code = fdrm_construct(&f, &d, 2).unwrap();
                    assert_eq!(code.dim(), fdrm_upper_bound(&d, 4).unwrap());
                    if (q as f64).powi(code.dim() as i32) <= 1e5 && code.dim() > 0 {
                        assert!(code.min_rank_exhaustive().unwrap() >= 2, "{v} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_reaches_small_bounds() {
        let f = Field::of_order(2).unwrap();
        for p in ["101100", "110100", "101010"] {
            let d = diag(p);
            let target = fdrm_upper_bound(&d, 4).unwrap();
            let code = fdrm_greedy_search(&f, &d, 2, target, 7, 50).unwrap();
            assert_eq!(code.dim(), target, "{p}");
            assert!(code.min_rank_distance() >= 2);
        }
    }

    #[test]
    fn larger_distance_reports_gap_honestly() {
        let f = Field::of_order(2).unwrap();
        let d = diag("101101000");
        let out = fdrm_best_effort(&f, &d, 3, 1).unwrap();
        assert_eq!(out.bound, 7);
        assert!(out.code.dim() <= out.bound);
        if out.code.dim() > 0 {
            assert!(out.code.min_rank_exhaustive().unwrap() >= 3);
        }
        match fdrm_construct(&f, &d, 3) {
            Ok(c) => assert_eq!(c.dim(), 7),
            Err(e) => assert!(matches!(e, RankError::ConstructiveGap { bound: 7, .. })),
        }
    }
}
