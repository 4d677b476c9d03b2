use num_bigint::BigInt;

use super::{registry_lookup, BoundKind, BoundValue, ConstructError, QSpec};
use crate::rankmetric::{mrd_size, mrd_size_poly};
use crate::PolyQ;

/// Value in the requested mode: a number at q or a polynomial in q.
#[derive(Clone, Debug)]
enum Val {
    Int(BigInt),
    Poly(PolyQ),
}

impl Val {
    fn of(b: &BoundValue, q: QSpec) -> Val {
        match q {
            QSpec::Numeric(v) => Val::Int(b.at(v)),
            QSpec::Symbolic => Val::Poly(b.as_poly().cloned().unwrap_or_else(|| PolyQ::constant(b.at(0)))),
        }
    }

    fn mul(self, o: Val) -> Val {
        match (self, o) {
            (Val::Int(a), Val::Int(b)) => Val::Int(a * b),
            (Val::Poly(a), Val::Poly(b)) => Val::Poly(a * b),
            _ => unreachable!("mixed modes"),
        }
    }

    fn add(self, o: Val) -> Val {
        match (self, o) {
            (Val::Int(a), Val::Int(b)) => Val::Int(a + b),
            (Val::Poly(a), Val::Poly(b)) => Val::Poly(a + b),
            _ => unreachable!("mixed modes"),
        }
    }

    fn into_bound(self, provenance: &str) -> BoundValue {
        match self {
            Val::Int(v) => BoundValue::int(BoundKind::Lower, v, provenance),
            Val::Poly(p) => BoundValue::poly(BoundKind::Lower, p, provenance),
        }
    }
}

/// Size of a (k x delta, d/2) MRD code, or 1 when only the zero matrix fits.
fn lifted_factor(k: usize, delta: usize, dr: usize, q: QSpec) -> Result<Val, ConstructError> {
    if delta == 0 || k.min(delta) < dr {
        return Ok(match q {
            QSpec::Numeric(_) => Val::Int(BigInt::from(1)),
            QSpec::Symbolic => Val::Poly(PolyQ::one()),
        });
    }
    let (m, n, d) = (k as u32, delta as u32, dr as u32);
    Ok(match q {
        QSpec::Numeric(v) => Val::Int(mrd_size(v, m, n, d)?),
        QSpec::Symbolic => Val::Poly(mrd_size_poly(m, n, d)?),
    })
}

/// Two-summand linkage bound. The first summand is the lifted estimate
/// m(k x delta, d/2) * A_q(n - delta, d; k). The second is A_q(delta, d; k),
/// or with `improved` A_q(delta + k - d/2, d; k).
pub fn linkage_bound(
    n: usize,
    d: usize,
    k: usize,
    delta: usize,
    q: QSpec,
    improved: bool,
) -> Result<BoundValue, ConstructError> {
    if d < 2 || d % 2 == 1 || k == 0 || k > n {
        return Err(ConstructError::Parameters(format!("linkage needs even d >= 2 and 0 < k <= n, got d={d} k={k} n={n}")));
    }
    let dr = d / 2;
    let second_len = if improved { delta + k - dr } else { delta };
    if delta > n || second_len > n {
        return Err(ConstructError::Parameters(format!("delta={delta} out of range for n={n}")));
    }
    if delta == 0 && !improved {
        return Ok(registry_lookup(n, d, k, q)?);
    }
    let first = lifted_factor(k, delta, dr, q)?.mul(Val::of(&registry_lookup(n - delta, d, k, q)?, q));
    let second = Val::of(&registry_lookup(second_len, d, k, q)?, q);
    let provenance = if improved { "improved linkage" } else { "linkage" };
    Ok(first.add(second).into_bound(provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::registry_int;

    #[test]
    fn first_summand_is_the_lifted_estimate() {
        // n=10, delta=3, k=3, d=4: q^{3*2} A(7,4;3) + A(3,4;3).
        let b = linkage_bound(10, 4, 3, 3, QSpec::Numeric(2), false).unwrap();
        assert_eq!(b.at(2), BigInt::from(64 * 333 + 1));
        let s = linkage_bound(10, 4, 3, 3, QSpec::Symbolic, false).unwrap();
        // The symbolic value uses the parametric A_q(7,4;3) = q^8+q^5+q^4+q^2-q.
        assert_eq!(s.at(2), BigInt::from(64 * 306 + 1));
        assert_eq!(s.at(3), BigInt::from(729 * 6891 + 1));
    }

    #[test]
    fn delta_zero_is_the_registry_value() {
        let b = linkage_bound(7, 4, 3, 0, QSpec::Numeric(2), false).unwrap();
        assert_eq!(b.at(2), registry_int(7, 4, 3, 2).unwrap());
    }

    #[test]
    fn improved_second_summand() {
        // n=13, k=3, d=4, delta=6: plain adds A(6,4;3)=77, improved adds A(7,4;3)=333.
        let plain = linkage_bound(13, 4, 3, 6, QSpec::Numeric(2), false).unwrap();
        let better = linkage_bound(13, 4, 3, 6, QSpec::Numeric(2), true).unwrap();
        assert_eq!(plain.at(2), BigInt::from(2i64.pow(12) * 333 + 77));
        assert_eq!(better.at(2) - plain.at(2), BigInt::from(333 - 77));
        assert!(linkage_bound(13, 4, 3, 12, QSpec::Numeric(2), true).is_err());
    }
}
