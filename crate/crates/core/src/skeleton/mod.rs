//! Pivot patterns, generalized skeleton codes, set-to-set Hamming distances
//! and the weighted clique search for good skeletons.

mod clique;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::construct::{BoundKind, BoundValue, Recipe};
use crate::gf::Field;
use crate::limits;
use crate::rankmetric::{fdrm_best_effort, fdrm_upper_bound};
use crate::subspace::{pivot_int_decode, pivots_descending, PivotVector};
use crate::PolyQ;

pub use clique::{clique_search, CliqueResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("pattern describes no vectors of weight {0}")]
    Infeasible(usize),
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("expansion of {0} vectors exceeds the ceiling")]
    TooLarge(u64),
    #[error("bad skeleton description: {0}")]
    Parse(String),
    #[error("weight does not fit in 128 bits")]
    WeightOverflow,
    #[error("{0} vertices exceed the clique search ceiling")]
    TooManyVertices(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Exactly,
    AtMost,
    AtLeast,
}

impl Relation {
    fn admits(self, a: usize, k: usize) -> bool {
        match self {
            Relation::Exactly => a == k,
            Relation::AtMost => a <= k,
            Relation::AtLeast => a >= k,
        }
    }
    fn symbol(self) -> &'static str {
        match self {
            Relation::Exactly => "=",
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        }
    }
}

/// A block of `len` consecutive coordinates whose weight relates to `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatternBlock {
    pub len: usize,
    pub rel: Relation,
    pub weight: usize,
}

/// The set of weight-k vectors whose block weights satisfy every relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PivotPattern {
    blocks: Vec<PatternBlock>,
    k: usize,
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

impl PivotPattern {
    pub fn new(blocks: Vec<PatternBlock>, k: usize) -> Result<Self, SkeletonError> {
        let p = PivotPattern { blocks, k };
        if p.weight_tuples().is_empty() {
            return Err(SkeletonError::Infeasible(k));
        }
        Ok(p)
    }

    /// Pattern of exact block weights, e.g. (4 = 0),(7 = 4).
    pub fn exact(blocks: &[(usize, usize)]) -> Result<Self, SkeletonError> {
        let k = blocks.iter().map(|b| b.1).sum();
        Self::new(blocks.iter().map(|&(len, weight)| PatternBlock { len, rel: Relation::Exactly, weight }).collect(), k)
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.len).sum()
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn blocks(&self) -> &[PatternBlock] {
        &self.blocks
    }

    /// All admissible per-block weight tuples summing to k.
    pub fn weight_tuples(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.blocks.len());
        self.tuples_rec(0, 0, &mut cur, &mut out);
        out
    }

    fn tuples_rec(&self, i: usize, sum: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == self.blocks.len() {
            if sum == self.k {
                out.push(cur.clone());
            }
            return;
        }
        let b = self.blocks[i];
        for a in 0..=b.len.min(self.k - sum) {
            if b.rel.admits(a, b.weight) {
                cur.push(a);
                self.tuples_rec(i + 1, sum + a, cur, out);
                cur.pop();
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.weight_tuples()
            .iter()
            .map(|t| t.iter().zip(&self.blocks).map(|(&a, b)| binom(b.len, a)).product::<u64>())
            .sum()
    }

    pub fn contains(&self, v: &PivotVector) -> bool {
        if v.n() != self.n() || v.weight() != self.k {
            return false;
        }
        let mut start = 0;
        for b in &self.blocks {
            let w = v.slice(start..start + b.len).weight();
            if !b.rel.admits(w, b.weight) {
                return false;
            }
            start += b.len;
        }
        true
    }

    /// Block weights of v under this pattern's partition.
    fn block_weights(&self, v: &PivotVector) -> Vec<usize> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|b| {
                let w = v.slice(start..start + b.len).weight();
                start += b.len;
                w
            })
            .collect()
    }
}

impl fmt::Display for PivotPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("({} {} {})", b.len, b.rel.symbol(), b.weight)).collect();
        f.write_str(&parts.join(""))
    }
}

/// Exactly the vectors described by the pattern, in descending integer order.
pub fn pattern_expand(p: &PivotPattern) -> Result<Vec<PivotVector>, SkeletonError> {
    let count = p.count();
    if count > limits::enumeration_ceiling() {
        return Err(SkeletonError::TooLarge(count));
    }
    let mut out: Vec<PivotVector> = pivots_descending(p.n(), p.k()).into_iter().filter(|v| p.contains(v)).collect();
    if out.is_empty() {
        return Err(SkeletonError::Infeasible(p.k()));
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexSet {
    Vector(PivotVector),
    Set(Vec<PivotVector>),
    Pattern(PivotPattern),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonVertex {
    pub set: VertexSet,
    pub weight: Option<BoundValue>,
}

impl SkeletonVertex {
    pub fn vector(v: PivotVector) -> Self {
        SkeletonVertex { set: VertexSet::Vector(v), weight: None }
    }
    pub fn pattern(p: PivotPattern) -> Self {
        SkeletonVertex { set: VertexSet::Pattern(p), weight: None }
    }
    pub fn with_weight(mut self, w: BoundValue) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn n(&self) -> usize {
        match &self.set {
            VertexSet::Vector(v) => v.n(),
            VertexSet::Set(s) => s.first().map_or(0, |v| v.n()),
            VertexSet::Pattern(p) => p.n(),
        }
    }

    pub fn members(&self) -> Result<Vec<PivotVector>, SkeletonError> {
        match &self.set {
            VertexSet::Vector(v) => Ok(vec![*v]),
            VertexSet::Set(s) => Ok(s.clone()),
            VertexSet::Pattern(p) => pattern_expand(p),
        }
    }

    /// Largest member integer, used for deterministic ordering.
    pub fn sort_key(&self) -> u64 {
        match &self.set {
            VertexSet::Vector(v) => crate::subspace::pivot_int_encode(v),
            VertexSet::Set(s) => s.iter().map(crate::subspace::pivot_int_encode).max().unwrap_or(0),
            VertexSet::Pattern(p) => pattern_expand(p)
                .ok()
                .and_then(|m| m.first().map(crate::subspace::pivot_int_encode))
                .unwrap_or(0),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.set {
            VertexSet::Vector(v) => json!({ "vec": v.to_string() }),
            VertexSet::Set(s) => json!({ "set": s.iter().map(|v| v.to_string()).collect::<Vec<_>>() }),
            VertexSet::Pattern(p) => json!({
                "blocks": p.blocks.iter().map(|b| json!([b.len, b.rel.symbol(), b.weight])).collect::<Vec<_>>()
            }),
        }
    }
}

/// Minimum Hamming distance between the member sets of two vertices.
pub fn hamming_distance_sets(a: &SkeletonVertex, b: &SkeletonVertex) -> Result<u32, SkeletonError> {
    if a.n() != b.n() {
        return Err(SkeletonError::Length(a.n(), b.n()));
    }
    match (&a.set, &b.set) {
        (VertexSet::Pattern(p), VertexSet::Pattern(r)) if same_partition(p, r) => {
            let (ta, tb) = (p.weight_tuples(), r.weight_tuples());
            Ok(ta.iter().flat_map(|x| tb.iter().map(move |y| l1(x, y))).min().expect("feasible"))
        }
        (VertexSet::Pattern(p), VertexSet::Vector(v)) | (VertexSet::Vector(v), VertexSet::Pattern(p)) => {
            let w = p.block_weights(v);
            Ok(p.weight_tuples().iter().map(|t| l1(t, &w)).min().expect("feasible"))
        }
        _ => {
            let (ma, mb) = (a.members()?, b.members()?);
            Ok(ma.iter().flat_map(|x| mb.iter().map(move |y| x.hamming(y))).min().unwrap_or(u32::MAX))
        }
    }
}

fn same_partition(p: &PivotPattern, r: &PivotPattern) -> bool {
    p.blocks.len() == r.blocks.len() && p.blocks.iter().zip(&r.blocks).all(|(x, y)| x.len == y.len)
}

fn l1(a: &[usize], b: &[usize]) -> u32 {
    a.iter().zip(b).map(|(&x, &y)| x.abs_diff(y) as u32).sum()
}

/// Vertices with a declared minimum Hamming distance between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonCode {
    pub n: usize,
    pub k: usize,
    pub d: u32,
    pub vertices: Vec<SkeletonVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonReport {
    /// None encodes infinity (fewer than two vertices).
    pub min_distance: Option<u32>,
    pub violation: Option<(usize, usize, u32)>,
    pub valid: bool,
}

/// Checks pairwise distance >= d (which implies disjointness for d > 0) and
/// that every member has the right length and weight.
pub fn validate_skeleton(s: &SkeletonCode) -> Result<SkeletonReport, SkeletonError> {
    for v in &s.vertices {
        for m in v.members()? {
            if m.n() != s.n || m.weight() != s.k {
                return Ok(SkeletonReport { min_distance: None, violation: None, valid: false });
            }
        }
    }
    let mut min: Option<u32> = None;
    let mut violation = None;
    for i in 0..s.vertices.len() {
        for j in i + 1..s.vertices.len() {
            let dist = hamming_distance_sets(&s.vertices[i], &s.vertices[j])?;
            if min.is_none_or(|m| dist < m) {
                min = Some(dist);
            }
            if (dist < s.d || dist == 0) && violation.is_none() {
                violation = Some((i, j, dist));
            }
        }
    }
    Ok(SkeletonReport { min_distance: min, violation, valid: violation.is_none() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Upper,
    Constructive,
}

/// Size of the lifted FDRM code for pivot v: q^nu (upper) or the size the
/// construction actually reaches (constructive).
pub fn ef_weight(v: &PivotVector, field: &Field, d: usize, mode: WeightMode) -> BoundValue {
    let diag = v.ferrers();
    let q = field.q() as u64;
    let nu = if d / 2 > diag.k() { 0 } else { fdrm_upper_bound(&diag, d).unwrap_or(0) };
    match mode {
        WeightMode::Upper => BoundValue::int(BoundKind::Upper, BigInt::from(q).pow(nu as u32), format!("FDRM upper bound for {v}")),
        WeightMode::Constructive => {
            let dim = fdrm_best_effort(field, &diag, d / 2, 0).map(|o| o.code.dim()).unwrap_or(0);
            BoundValue::int(BoundKind::Lower, BigInt::from(q).pow(dim as u32), format!("lifted FDRM code for {v}"))
                .constructive(Some(Recipe::LiftedFdrm(*v)))
        }
    }
}

/// q^nu as a polynomial.
pub fn ef_weight_poly(v: &PivotVector, d: usize) -> PolyQ {
    let diag = v.ferrers();
    let nu = if d / 2 > diag.k() { 0 } else { fdrm_upper_bound(&diag, d).unwrap_or(0) };
    PolyQ::q_pow(nu as u32)
}

/// Parses the JSON skeleton format: a list of `{"vec": "0110"}`,
/// `{"int": x, "n": n}`, `{"set": [...]}` or `{"blocks": [[n_i, "=", k_i], ...]}`.
pub fn parse_skeleton_json(text: &str, k: usize, d: u32) -> Result<SkeletonCode, SkeletonError> {
    let err = |m: &str| SkeletonError::Parse(m.to_string());
    let v: Value = serde_json::from_str(text).map_err(|e| SkeletonError::Parse(e.to_string()))?;
    let items = v.as_array().ok_or_else(|| err("expected a JSON list"))?;
    let mut vertices = Vec::new();
    for it in items {
        let vert = if let Some(s) = it.get("vec").and_then(Value::as_str) {
            SkeletonVertex::vector(s.parse().map_err(|_| err("bad vector"))?)
        } else if let Some(x) = it.get("int").and_then(Value::as_u64) {
            let n = it.get("n").and_then(Value::as_u64).ok_or_else(|| err("integer vertex needs n"))?;
            SkeletonVertex::vector(pivot_int_decode(x, n as usize).map_err(|_| err("integer too large"))?)
        } else if let Some(list) = it.get("set").and_then(Value::as_array) {
            let mut set = Vec::new();
            for s in list {
                set.push(s.as_str().ok_or_else(|| err("bad set"))?.parse().map_err(|_| err("bad vector"))?);
            }
            SkeletonVertex { set: VertexSet::Set(set), weight: None }
        } else if let Some(bl) = it.get("blocks").and_then(Value::as_array) {
            let mut blocks = Vec::new();
            for b in bl {
                let t = b.as_array().filter(|t| t.len() == 3).ok_or_else(|| err("block must be [n, rel, k]"))?;
                let len = t[0].as_u64().ok_or_else(|| err("bad block length"))? as usize;
                let rel = match t[1].as_str() {
                    Some("=") => Relation::Exactly,
                    Some("<=") => Relation::AtMost,
                    Some(">=") => Relation::AtLeast,
                    _ => return Err(err("relation must be =, <= or >=")),
                };
                let weight = t[2].as_u64().ok_or_else(|| err("bad block weight"))? as usize;
                blocks.push(PatternBlock { len, rel, weight });
            }
            SkeletonVertex::pattern(PivotPattern::new(blocks, k)?)
        } else {
            return Err(err("unknown vertex form"));
        };
        vertices.push(vert);
    }
    let n = vertices.first().map_or(0, |v| v.n());
    if let Some(bad) = vertices.iter().find(|v| v.n() != n) {
        return Err(SkeletonError::Length(n, bad.n()));
    }
    Ok(SkeletonCode { n, k, d, vertices })
}

pub fn skeleton_to_json(s: &SkeletonCode) -> String {
    let list: Vec<Value> = s.vertices.iter().map(SkeletonVertex::to_json).collect();
    serde_json::to_string_pretty(&list).expect("serializable")
}

/// Distinct members across all vertices, for disjointness checks.
pub fn all_members(s: &SkeletonCode) -> Result<HashSet<PivotVector>, SkeletonError> {
    let mut out = HashSet::new();
    for v in &s.vertices {
        out.extend(v.members()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec(s: &str) -> SkeletonVertex {
        SkeletonVertex::vector(s.parse().unwrap())
    }

    #[test]
    fn expansions() {
        let p = PivotPattern::exact(&[(5, 2), (5, 0)]).unwrap();
        let e = pattern_expand(&p).unwrap();
        assert_eq!(e.len(), 10);
        assert!(e.iter().all(|v| v.slice(5..10).weight() == 0));
        assert_eq!(pattern_expand(&PivotPattern::exact(&[(4, 0), (7, 4)]).unwrap()).unwrap().len(), 35);
        assert!(PivotPattern::exact(&[(2, 3)]).is_err());
    }

    #[test]
    fn bounded_pattern_matches_filter() {
        // Vectors with at most k - d/2 ones among the first n - D positions.
        let (n, delta, d, k) = (9usize, 4usize, 4usize, 3usize);
        let p = PivotPattern::new(
            vec![
                PatternBlock { len: n - delta, rel: Relation::AtMost, weight: k - d / 2 },
                PatternBlock { len: delta, rel: Relation::AtLeast, weight: d / 2 },
            ],
            k,
        )
        .unwrap();
        let want: Vec<PivotVector> =
            pivots_descending(n, k).into_iter().filter(|v| v.slice(0..n - delta).weight() <= k - d / 2).collect();
        assert_eq!(pattern_expand(&p).unwrap(), want);
    }

    #[test]
    fn distances_between_patterns() {
        let (n, delta, k, d) = (10usize, 4usize, 3usize, 4usize);
        let a = SkeletonVertex::pattern(PivotPattern::exact(&[(n - delta, k), (delta, 0)]).unwrap());
        let b = SkeletonVertex::pattern(PivotPattern::exact(&[(n - delta, 0), (delta, k)]).unwrap());
        assert_eq!(hamming_distance_sets(&a, &b).unwrap(), 2 * k as u32);
        let c = SkeletonVertex::pattern(
            PivotPattern::exact(&[(n - delta - k + d / 2, 0), (delta + k - d / 2, k)]).unwrap(),
        );
        assert!(hamming_distance_sets(&a, &c).unwrap() >= d as u32);
        assert_eq!(hamming_distance_sets(&vec("1100"), &vec("1100")).unwrap(), 0);
        assert!(hamming_distance_sets(&vec("110"), &vec("1100")).is_err());
    }

    #[test]
    fn single_vertex_is_infinite() {
        let s = SkeletonCode { n: 4, k: 2, d: 4, vertices: vec![vec("1100")] };
        let r = validate_skeleton(&s).unwrap();
        assert_eq!(r.min_distance, None);
        assert!(r.valid);
    }

    #[test]
    fn weights() {
        let f = Field::of_order(2).unwrap();
        let v: PivotVector = "101101000".parse().unwrap();
        assert_eq!(ef_weight(&v, &f, 6, WeightMode::Upper).at(2), BigInt::from(128));
        let rect: PivotVector = "1110000".parse().unwrap();
        for mode in [WeightMode::Upper, WeightMode::Constructive] {
            assert_eq!(ef_weight(&rect, &f, 4, mode).at(2), BigInt::from(1u64 << 8));
        }
        let one_dot: PivotVector = "1101".parse().unwrap();
        assert_eq!(ef_weight(&one_dot, &f, 4, WeightMode::Upper).at(2), BigInt::from(1));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"[{"vec":"11110000000"},{"int":99,"n":11},{"blocks":[[4,"=",0],[7,"=",4]]}]"#;
        let s = parse_skeleton_json(text, 4, 4).unwrap();
        assert_eq!(s.vertices.len(), 3);
        assert_eq!(s.n, 11);
        let again = parse_skeleton_json(&skeleton_to_json(&s), 4, 4).unwrap();
        assert_eq!(again, s);
    }
}
