use num_bigint::BigInt;

use super::{emit_lifted, registry_lookup, BoundKind, BoundValue, CodeArtifact, CodeSpec, ConstructError, QSpec};
use crate::gf::Field;
use crate::rankmetric::{fdrm_best_effort, mrd_size, mrd_size_poly};
use crate::skeleton::{ef_weight_poly, PivotPattern, Relation, SkeletonCode, SkeletonVertex, VertexSet};
use crate::PolyQ;

/// The two exact block patterns with a registry-backed size: all k ones in
/// the first block, or all in the second. Returns (n1, n2, ones in block 1).
fn two_block(p: &PivotPattern) -> Result<(usize, usize, bool), ConstructError> {
    let b = p.blocks();
    let unsupported = || ConstructError::Parameters("only exact two-block patterns (n1 = k | n2 = 0) or (n1 = 0 | n2 = k) have a size".into());
    if b.len() != 2 || b.iter().any(|x| x.rel != Relation::Exactly) {
        return Err(unsupported());
    }
    match (b[0].weight, b[1].weight) {
        (w, 0) if w == p.k() => Ok((b[0].len, b[1].len, true)),
        (0, w) if w == p.k() => Ok((b[0].len, b[1].len, false)),
        _ => Err(unsupported()),
    }
}

/// Lower bound for the codes whose pivots follow `p`: a lifted MRD code
/// times A_q(n1,d;k) when the ones sit in the first block, A_q(n2,d;k) when
/// they sit in the second.
pub fn pattern_size(p: &PivotPattern, d: usize, q: QSpec) -> Result<BoundValue, ConstructError> {
    let (n1, n2, first) = two_block(p)?;
    let k = p.k();
    if !first {
        return Ok(registry_lookup(n2, d, k, q)?);
    }
    let inner = registry_lookup(n1, d, k, q)?;
    let dr = (d / 2) as u32;
    let lifts = n2 > 0 && (k as u32).min(n2 as u32) >= dr;
    let mut out = match q {
        QSpec::Numeric(v) => {
            let f = if lifts { mrd_size(v, k as u32, n2 as u32, dr)? } else { BigInt::from(1) };
            BoundValue::int(BoundKind::Lower, f * inner.at(v), inner.provenance.clone())
        }
        QSpec::Symbolic => {
            let p = pattern_size_poly(p, d)?;
            BoundValue::poly(BoundKind::Lower, p, inner.provenance.clone())
        }
    };
    if n2 > 0 {
        out.provenance = format!("lifted: {}", out.provenance);
    }
    Ok(out)
}

pub fn pattern_size_poly(p: &PivotPattern, d: usize) -> Result<PolyQ, ConstructError> {
    let (n1, n2, first) = two_block(p)?;
    let k = p.k();
    if !first {
        return Ok(super::registry_poly(n2, d, k)?);
    }
    let inner = super::registry_poly(n1, d, k)?;
    let dr = (d / 2) as u32;
    if n2 > 0 && (k as u32).min(n2 as u32) >= dr {
        Ok(mrd_size_poly(k as u32, n2 as u32, dr)? * inner)
    } else {
        Ok(inner)
    }
}

/// Symbolic size of the multilevel code: q^nu per vector vertex, the
/// pattern size per pattern vertex, the stored weight for explicit sets.
pub fn multilevel_poly(s: &SkeletonCode) -> Result<PolyQ, ConstructError> {
    let d = s.d as usize;
    let mut total = PolyQ::zero();
    for v in &s.vertices {
        total = total
            + match &v.set {
                VertexSet::Vector(p) => ef_weight_poly(p, d),
                VertexSet::Pattern(p) => pattern_size_poly(p, d)?,
                VertexSet::Set(_) => v
                    .weight
                    .as_ref()
                    .and_then(|w| w.as_poly().cloned())
                    .ok_or_else(|| ConstructError::Parameters("set vertex without a polynomial weight".into()))?,
            };
    }
    Ok(total)
}

fn placeholder_size(v: &SkeletonVertex, d: usize, q: u64) -> Result<BigInt, ConstructError> {
    if let Some(w) = &v.weight {
        if w.kind != BoundKind::Upper {
            return Ok(w.at(q));
        }
    }
    match &v.set {
        VertexSet::Pattern(p) => Ok(pattern_size(p, d, QSpec::Numeric(q))?.at(q)),
        _ => Err(ConstructError::Parameters("set vertex needs a lower-bound weight".into())),
    }
}

/// Union of one code per skeleton vertex. Vector vertices are lifted FDRM
/// codes; pattern and set vertices contribute their size only and make the
/// artifact non-constructive.
pub fn multilevel_construct(s: &SkeletonCode, field: &Field, seed: u64) -> Result<(CodeArtifact, BoundValue), ConstructError> {
    let d = s.d as usize;
    let mut art = CodeArtifact::new(field, s.n, s.k, s.d);
    if d < 2 || d % 2 == 1 {
        return Err(ConstructError::Parameters(format!("distance {d} must be even and positive")));
    }
    let q = field.q() as u64;
    for v in &s.vertices {
        match &v.set {
            VertexSet::Vector(p) => {
                let out = fdrm_best_effort(field, &p.ferrers(), d / 2, seed)?;
                let spec = CodeSpec::Fdrm { pivot: p.to_string(), delta: d / 2, seed };
                emit_lifted(&mut art, &p.to_string(), p, &out.code, spec)?;
            }
            _ => {
                let size = placeholder_size(v, d, q)?;
                let label = v.to_json().to_string();
                art.placeholder(label, &size);
            }
        }
    }
    let provenance = if art.is_constructive() { "multilevel construction" } else { "multilevel construction with stored sub-codes" };
    let mut b = BoundValue::int(BoundKind::Lower, art.size(), provenance);
    if art.is_constructive() {
        b = b.constructive(None);
    }
    Ok((art, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::PivotVector;

    fn skeleton(n: usize, k: usize, d: u32, vs: &[&str]) -> SkeletonCode {
        let vertices = vs.iter().map(|s| SkeletonVertex::vector(s.parse::<PivotVector>().unwrap())).collect();
        SkeletonCode { n, k, d, vertices }
    }

    #[test]
    fn six_three_four_has_71_words() {
        let f = Field::of_order(2).unwrap();
        let s = skeleton(6, 3, 4, &["111000", "100110", "010101", "001011"]);
        let (art, b) = multilevel_construct(&s, &f, 0).unwrap();
        assert_eq!(art.len(), 71);
        assert!(b.constructive);
        assert_eq!(multilevel_poly(&s).unwrap().eval_u64(2), BigInt::from(71));
        let words: Vec<_> = (0..art.len()).map(|i| art.codeword(i)).collect();
        let mut pairs = 0;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                assert!(words[i].distance(&words[j]).unwrap() >= 4);
                pairs += 1;
            }
        }
        assert_eq!(pairs, 2485);
    }

    #[test]
    fn singleton_is_a_lifted_mrd_code() {
        let f = Field::of_order(3).unwrap();
        let s = skeleton(6, 2, 4, &["110000"]);
        let (art, _) = multilevel_construct(&s, &f, 0).unwrap();
        // q^{(n-k)(k-d/2+1)} = 3^4.
        assert_eq!(art.len(), 81);
        let empty = SkeletonCode { n: 6, k: 2, d: 4, vertices: vec![] };
        assert_eq!(multilevel_construct(&empty, &f, 0).unwrap().0.len(), 0);
    }

    #[test]
    fn pattern_vertices_are_size_only() {
        let f = Field::of_order(2).unwrap();
        let tail = PivotPattern::exact(&[(4, 0), (7, 4)]).unwrap();
        let head = PivotPattern::exact(&[(8, 4), (7, 0)]).unwrap();
        assert_eq!(pattern_size(&tail, 4, QSpec::Numeric(2)).unwrap().at(2), BigInt::from(333));
        assert_eq!(pattern_size(&head, 4, QSpec::Numeric(2)).unwrap().at(2), BigInt::from(4801u64 << 21));
        let sym = pattern_size(&head, 4, QSpec::Symbolic).unwrap();
        assert_eq!(sym.as_poly().unwrap().degree(), Some(33));
        let s = SkeletonCode { n: 11, k: 4, d: 4, vertices: vec![SkeletonVertex::pattern(tail)] };
        let (art, b) = multilevel_construct(&s, &f, 0).unwrap();
        assert!(!art.is_constructive() && !b.constructive);
        assert_eq!(art.size(), BigInt::from(333));
        assert!(pattern_size(&PivotPattern::exact(&[(4, 2), (7, 2)]).unwrap(), 4, QSpec::Numeric(2)).is_err());
    }
}
