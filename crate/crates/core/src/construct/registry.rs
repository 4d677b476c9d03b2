use num_bigint::BigInt;
use thiserror::Error;

use super::{BoundKind, BoundValue, QSpec};
use crate::subspace::{gauss_big, gaussian_binomial_poly};
use crate::PolyQ;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("no entry for A_q({n},{d};{k}) at {q}")]
    NoEntry { n: usize, d: usize, k: usize, q: String },
    #[error("invalid parameters: {0}")]
    Invalid(String),
}

fn describe(q: QSpec) -> String {
    match q {
        QSpec::Numeric(v) => format!("q={v}"),
        QSpec::Symbolic => "symbolic q".into(),
    }
}

fn poly(s: &str) -> PolyQ {
    s.parse().expect("registry polynomial")
}

struct Entry {
    n: usize,
    d: usize,
    k: usize,
    /// None: valid for every q as a polynomial.
    q: Option<u64>,
    kind: BoundKind,
    value: &'static str,
    provenance: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry { n: 7, d: 4, k: 3, q: Some(2), kind: BoundKind::Lower, value: "333", provenance: "known code from computer search" },
    Entry { n: 7, d: 4, k: 3, q: Some(3), kind: BoundKind::Lower, value: "6978", provenance: "known code from computer search" },
    Entry { n: 7, d: 4, k: 3, q: None, kind: BoundKind::Lower, value: "q^8+q^5+q^4+q^2-q", provenance: "parametric construction" },
    Entry { n: 8, d: 4, k: 4, q: Some(2), kind: BoundKind::Lower, value: "4801", provenance: "known code from computer search" },
    Entry {
        n: 8,
        d: 4,
        k: 4,
        q: None,
        kind: BoundKind::Lower,
        value: "q^12+q^8+q^7+3q^6+2q^5+3q^4+q^3+q^2+1",
        provenance: "parametric construction",
    },
    Entry { n: 6, d: 4, k: 3, q: Some(2), kind: BoundKind::Exact, value: "77", provenance: "classification" },
    Entry { n: 6, d: 4, k: 3, q: None, kind: BoundKind::Lower, value: "q^6+2q^2+2q+1", provenance: "parametric construction" },
    Entry { n: 8, d: 4, k: 3, q: Some(2), kind: BoundKind::Lower, value: "1326", provenance: "integer programming with prescribed symmetry" },
    Entry { n: 9, d: 4, k: 3, q: Some(2), kind: BoundKind::Lower, value: "5986", provenance: "integer programming with prescribed symmetry" },
    Entry { n: 10, d: 4, k: 3, q: Some(2), kind: BoundKind::Lower, value: "23870", provenance: "integer programming with prescribed symmetry" },
    Entry { n: 11, d: 4, k: 3, q: Some(2), kind: BoundKind::Lower, value: "97526", provenance: "integer programming with prescribed symmetry" },
    Entry {
        n: 9,
        d: 4,
        k: 3,
        q: None,
        kind: BoundKind::Lower,
        value: "q^12+2q^8+2q^7+q^6+2q^5+2q^4-2q^2-2q+1",
        provenance: "parametric construction",
    },
    Entry { n: 5, d: 4, k: 2, q: None, kind: BoundKind::Exact, value: "q^3+1", provenance: "maximum partial line spread" },
];

/// Best stored bound for A_q(n,d;k). Duality k <-> n-k is applied first;
/// trivial parameters, spreads and full Grassmannians are computed.
pub fn registry_lookup(n: usize, d: usize, k: usize, q: QSpec) -> Result<BoundValue, RegistryError> {
    if d % 2 == 1 {
        return Err(RegistryError::Invalid(format!("odd distance {d}")));
    }
    if k > n {
        return Ok(exact_int(0u32, q, "no subspaces of this dimension"));
    }
    let k = k.min(n - k);
    if k == 0 || d > 2 * k {
        return Ok(exact_int(1u32, q, "any single subspace"));
    }
    if d <= 2 {
        return Ok(match q {
            QSpec::Numeric(v) => BoundValue::int(BoundKind::Exact, gauss_big(n as u32, k as u32, v), "whole Grassmannian"),
            QSpec::Symbolic => BoundValue::poly(BoundKind::Exact, gaussian_binomial_poly(n as u32, k as u32), "whole Grassmannian"),
        });
    }
    if d == 2 * k && n.is_multiple_of(k) {
        // (q^n - 1)/(q^k - 1) = sum of q^{jk}.
        let p = (0..n / k).fold(PolyQ::zero(), |acc, j| acc + PolyQ::q_pow((j * k) as u32));
        return Ok(value_of(BoundKind::Exact, &p, q, "spread"));
    }
    let mut best: Option<BoundValue> = None;
    for e in ENTRIES.iter().filter(|e| e.n == n && e.d == d && e.k == k) {
        let candidate = match (e.q, q) {
            (Some(eq), QSpec::Numeric(v)) if eq == v => {
                BoundValue::int(e.kind, e.value.parse::<BigInt>().expect("registry integer"), e.provenance)
            }
            (None, _) => value_of(e.kind, &poly(e.value), q, e.provenance),
            _ => continue,
        };
        best = Some(match best {
            None => candidate,
            Some(b) => better(b, candidate, q),
        });
    }
    best.ok_or(RegistryError::NoEntry { n, d, k, q: describe(q) })
}

/// Stored lower bound for the two-block quantity with blocks (6,6), d=4, k=6.
pub fn registry_e_lookup(blocks: &[usize], d: usize, k: usize, q: QSpec) -> Result<BoundValue, RegistryError> {
    match (blocks, d, k, q) {
        ([6, 6], 4, 6, QSpec::Numeric(2)) => {
            Ok(BoundValue::int(BoundKind::Lower, 2154496u32, "known construction with prescribed block intersections"))
        }
        _ => Err(RegistryError::NoEntry { n: blocks.iter().sum(), d, k, q: describe(q) }),
    }
}

fn exact_int(v: u32, q: QSpec, provenance: &str) -> BoundValue {
    match q {
        QSpec::Numeric(_) => BoundValue::int(BoundKind::Exact, v, provenance),
        QSpec::Symbolic => BoundValue::poly(BoundKind::Exact, PolyQ::constant(BigInt::from(v)), provenance),
    }
}

fn value_of(kind: BoundKind, p: &PolyQ, q: QSpec, provenance: &str) -> BoundValue {
    match q {
        QSpec::Numeric(v) => BoundValue::int(kind, p.eval_u64(v), provenance),
        QSpec::Symbolic => BoundValue::poly(kind, p.clone(), provenance),
    }
}

/// Exact beats everything; otherwise the larger lower bound. Symbolic values
/// are compared by their leading behaviour (evaluation at a large q).
fn better(a: BoundValue, b: BoundValue, q: QSpec) -> BoundValue {
    if a.kind == BoundKind::Exact {
        return a;
    }
    if b.kind == BoundKind::Exact {
        return b;
    }
    let at = match q {
        QSpec::Numeric(v) => v,
        QSpec::Symbolic => 1 << 20,
    };
    if b.at(at) > a.at(at) {
        b
    } else {
        a
    }
}

/// Registry value as an integer at q, for pipelines that need a number.
pub fn registry_int(n: usize, d: usize, k: usize, q: u64) -> Result<BigInt, RegistryError> {
    registry_lookup(n, d, k, QSpec::Numeric(q)).map(|b| b.at(q))
}

/// Registry value as a polynomial (symbolic entries only).
pub fn registry_poly(n: usize, d: usize, k: usize) -> Result<PolyQ, RegistryError> {
    let b = registry_lookup(n, d, k, QSpec::Symbolic)?;
    Ok(b.as_poly().cloned().unwrap_or_else(|| PolyQ::constant(b.at(0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn stored_values() {
        assert_eq!(registry_int(7, 4, 3, 2).unwrap(), BigInt::from(333));
        assert_eq!(registry_int(7, 4, 4, 2).unwrap(), BigInt::from(333));
        assert_eq!(registry_int(7, 4, 4, 3).unwrap(), BigInt::from(6978));
        let b = registry_lookup(6, 4, 3, QSpec::Numeric(2)).unwrap();
        assert_eq!((b.kind, b.at(2)), (BoundKind::Exact, BigInt::from(77)));
        assert_eq!(registry_int(8, 4, 4, 2).unwrap(), BigInt::from(4801));
        assert_eq!(registry_poly(7, 4, 4).unwrap().to_string(), "q^8+q^5+q^4+q^2-q");
        assert!(registry_lookup(13, 4, 5, QSpec::Numeric(2)).is_err());
    }

    #[test]
    fn parametric_entries_match_their_factored_forms() {
        let a: PolyQ = "q^2+1".parse().unwrap();
        let b: PolyQ = "q^2+q+1".parse().unwrap();
        let p = PolyQ::q_pow(12) + PolyQ::q_pow(2) * a.clone() * a * b + PolyQ::one();
        assert_eq!(registry_poly(8, 4, 4).unwrap(), p);
        assert_eq!(p.eval_u64(2), BigInt::from(4797));
    }

    #[test]
    fn computed_entries() {
        assert_eq!(registry_int(6, 6, 3, 2).unwrap(), BigInt::from(9));
        assert_eq!(registry_int(8, 8, 4, 3).unwrap(), BigInt::from(82));
        assert_eq!(registry_int(5, 2, 2, 2).unwrap(), BigInt::from(155));
        assert_eq!(registry_int(5, 8, 2, 2).unwrap(), BigInt::one());
        assert_eq!(registry_int(3, 4, 4, 2).unwrap(), BigInt::zero());
        assert!(registry_lookup(6, 3, 3, QSpec::Symbolic).is_err());
        assert_eq!(registry_e_lookup(&[6, 6], 4, 6, QSpec::Numeric(2)).unwrap().at(2), BigInt::from(2154496));
    }
}
