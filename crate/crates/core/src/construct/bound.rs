use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::PolyQ;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
            BoundKind::Exact => "exact",
        })
    }
}

/// Field size selector for evaluators: a concrete q or a polynomial in q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QSpec {
    Numeric(u64),
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundNumber {
    Int(BigInt),
    Poly(PolyQ),
}

impl fmt::Display for BoundNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundNumber::Int(v) => write!(f, "{v}"),
            BoundNumber::Poly(p) => write!(f, "{p}"),
        }
    }
}

/// A pipeline able to emit the codewords behind a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    Named(String),
    LiftedFdrm(crate::subspace::PivotVector),
}

/// A bound on a code size with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: BoundNumber,
    pub provenance: String,
    pub constructive: bool,
    pub recipe: Option<Recipe>,
}

impl BoundValue {
    pub fn int(kind: BoundKind, v: impl Into<BigInt>, provenance: impl Into<String>) -> Self {
        BoundValue { kind, value: BoundNumber::Int(v.into()), provenance: provenance.into(), constructive: false, recipe: None }
    }

    pub fn poly(kind: BoundKind, p: PolyQ, provenance: impl Into<String>) -> Self {
        BoundValue { kind, value: BoundNumber::Poly(p), provenance: provenance.into(), constructive: false, recipe: None }
    }

    pub fn constructive(mut self, recipe: Option<Recipe>) -> Self {
        self.constructive = true;
        self.recipe = recipe;
        self
    }

    /// Numeric value at q. Integer values are returned as stored.
    pub fn at(&self, q: u64) -> BigInt {
        match &self.value {
            BoundNumber::Int(v) => v.clone(),
            BoundNumber::Poly(p) => p.eval_u64(q),
        }
    }

    pub fn as_poly(&self) -> Option<&PolyQ> {
        match &self.value {
            BoundNumber::Poly(p) => Some(p),
            BoundNumber::Int(_) => None,
        }
    }

    /// Specializes a polynomial value to q.
    pub fn evaluated(&self, q: u64) -> BoundValue {
        BoundValue { value: BoundNumber::Int(self.at(q)), ..self.clone() }
    }

    pub fn report(&self, name: &str, q: QSpec) -> BoundReport {
        BoundReport {
            name: name.to_string(),
            q: match q {
                QSpec::Numeric(v) => serde_json::json!(v),
                QSpec::Symbolic => serde_json::json!("symbolic"),
            },
            kind: self.kind,
            value: self.value.to_string(),
            provenance: self.provenance.clone(),
            constructive: self.constructive,
        }
    }
}

/// JSON shape of a reported bound.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub q: serde_json::Value,
    pub kind: BoundKind,
    pub value: String,
    pub provenance: String,
    pub constructive: bool,
}
