use crate::gf::{ExtField, Field};

use super::{LinearMatrixCode, RankCertificate, RankError};

/// Linear (m x n, d) MRD code: evaluations of q-polynomials of q-degree
/// below min(m,n)-d+1 at the polynomial basis 1, x, ..., x^(min-1) of
/// GF(q^max), written out in coordinates; transposed when m < n.
///
/// The basis is ordered by q-degree first, so the code for distance d is a
/// prefix (hence a subcode) of the code for any smaller distance.
pub fn gabidulin_code(field: &Field, m: usize, n: usize, d: usize) -> Result<LinearMatrixCode, RankError> {
    if m == 0 || n == 0 || d == 0 || d > m.min(n) {
        return Err(RankError::OutOfRange(format!("({m}x{n}, {d}) MRD code")));
    }
    let (big, small) = (m.max(n), m.min(n));
    let ext = ExtField::new(field, big)?;
    let kdeg = small - d + 1;
    let points: Vec<u64> = (0..small).map(|j| ext.basis_element(j)).collect();
    let mut basis = Vec::with_capacity(big * kdeg);
    for i in 0..kdeg {
        let frob: Vec<u64> = points.iter().map(|&g| ext.frobenius(g, i)).collect();
        for t in 0..big {
            let beta = ext.basis_element(t);
            // big x small matrix, column j holds the coordinates of beta * g_j^(q^i).
            let mut mat = vec![0u8; big * small];
            for (j, &g) in frob.iter().enumerate() {
                for (r, c) in ext.ext_coords(ext.mul(beta, g)).into_iter().enumerate() {
                    mat[r * small + j] = c;
                }
            }
            if m < n {
                let mut tr = vec![0u8; big * small];
                for r in 0..big {
                    for j in 0..small {
                        tr[j * big + r] = mat[r * small + j];
                    }
                }
                mat = tr;
            }
            basis.push(mat);
        }
    }
    LinearMatrixCode::unchecked(field, m, n, basis, None, d as u32, RankCertificate::Gabidulin)
}
