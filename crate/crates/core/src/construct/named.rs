use num_bigint::BigInt;
use num_traits::Zero;

use super::partition::Greedy;
use super::{
    coset_packing, coset_packing_construct, construction1_poly, emit_construction1, emit_product, eq663_packing,
    greedy_partition_of, multilevel_construct, multilevel_poly, parallelism, pattern_size, refine_to_multiset,
    table2_scheme, whole_space, BoundKind, BoundValue, CodeArtifact, CodeSpec, ConstructError, Partition, QSpec, Recipe,
};
use crate::gf::Field;
use crate::rankmetric::gabidulin_code;
use crate::skeleton::{ef_weight_poly, PivotPattern, SkeletonCode, SkeletonVertex, VertexSet};
use crate::subspace::{enumerate_subspaces, pivot_int_decode, PivotVector, Subspace};
use crate::PolyQ;

/// Pipelines known to [`assemble_named`].
pub const NAMED: &[&str] = &["A(10,4;5)", "A(11,4;4)", "A(12,6;6)", "A(15,4;4)", "A(8,4;4)", "A(6,4;3)"];

/// Part sizes of the reported greedy partition of G_2(5,2).
const REPORTED_PARTS: [usize; 20] = [9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 8, 7, 6, 5, 2, 1];

#[derive(Clone, Debug)]
pub struct NamedOptions {
    pub seed: u64,
    /// Greedy restarts for partition-based pipelines.
    pub restarts: usize,
    /// Use the best partition found instead of the reported one.
    pub improve: bool,
    /// Materialize codewords where the pipeline is constructive.
    pub emit: bool,
}

impl Default for NamedOptions {
    fn default() -> Self {
        NamedOptions { seed: 0, restarts: 64, improve: false, emit: false }
    }
}

#[derive(Clone, Debug)]
pub struct NamedOutcome {
    pub name: String,
    pub bound: BoundValue,
    pub artifact: Option<CodeArtifact>,
    pub partition: Option<Partition>,
    pub notes: Vec<String>,
}

/// Canonical name for inputs like "A(10,4;5)", "10,4,5" or "10-4-5".
pub fn canonical_name(name: &str) -> Result<&'static str, ConstructError> {
    let nums: Vec<&str> = name.split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty()).collect();
    let key = nums.join(",");
    NAMED
        .iter()
        .find(|n| n.split(|c: char| !c.is_ascii_digit()).filter(|s| !s.is_empty()).collect::<Vec<_>>().join(",") == key)
        .copied()
        .ok_or_else(|| ConstructError::UnknownName(name.to_string()))
}

fn vectors(n: usize, list: &[&str]) -> Vec<SkeletonVertex> {
    list.iter()
        .map(|s| {
            let v: PivotVector = s.parse().expect("pivot");
            assert_eq!(v.n(), n);
            SkeletonVertex::vector(v)
        })
        .collect()
}

/// Skeleton for A_q(11,4;4): 19 pivot vectors and the pattern (4=0 | 7=4).
pub fn skeleton_11_4_4() -> SkeletonCode {
    let mut vertices = vec![SkeletonVertex::pattern(PivotPattern::exact(&[(4, 0), (7, 4)]).expect("pattern"))];
    vertices.extend(vectors(
        11,
        &[
            "00110000110", "00110011000", "00111100000", "01010000011", "01010101000", "01011010000", "01100000101",
            "01100110000", "01101001000", "10010000101", "10010110000", "10011001000", "10100000011", "10100101000",
            "10101010000", "11000000110", "11000011000", "11001100000", "11110000000",
        ],
    ));
    SkeletonCode { n: 11, k: 4, d: 4, vertices }
}

/// A 19-vector list in circulation for this code. It is not a distance-4
/// skeleton and is kept to check that validation rejects it.
pub fn skeleton_11_4_4_defective() -> SkeletonCode {
    let mut vertices = vec![SkeletonVertex::pattern(PivotPattern::exact(&[(4, 0), (7, 4)]).expect("pattern"))];
    vertices.extend(vectors(
        11,
        &[
            "00010000111", "00010100011", "00011000011", "00011000110", "00100001011", "00100001101", "00100001110",
            "00100100101", "00100100110", "00100101001", "00101000101", "00110000110", "00110101000", "01100010001",
            "10000101100", "10001001001", "10011100000", "10100000011", "10100110000",
        ],
    ));
    SkeletonCode { n: 11, k: 4, d: 4, vertices }
}

/// Skeleton for A_q(15,4;4): two block patterns and 84 pivot integers.
pub fn skeleton_15_4_4() -> SkeletonCode {
    const INTS: [u64; 84] = [
        24672, 6240, 12368, 18512, 20528, 20552, 1632, 10288, 10312, 12328, 24600, 18472, 480, 848, 3140, 6168, 1232,
        1328, 1352, 4676, 5156, 5186, 688, 712, 808, 1560, 2596, 2626, 3106, 8516, 9236, 9281, 24582, 1192, 4642, 16580,
        16676, 16706, 16916, 16961, 17420, 17426, 17441, 408, 2324, 2369, 3089, 6150, 8356, 8386, 8482, 8716, 8722,
        8737, 9226, 12293, 4244, 4289, 4364, 4370, 4385, 4625, 5129, 16546, 16906, 18437, 20483, 1542, 2188, 2194, 2209,
        2314, 2569, 8465, 10243, 4234, 16529, 16649, 390, 773, 8329, 1157, 1283, 643,
    ];
    let mut vertices = vec![
        SkeletonVertex::pattern(PivotPattern::exact(&[(8, 4), (7, 0)]).expect("pattern")),
        SkeletonVertex::pattern(PivotPattern::exact(&[(8, 0), (7, 4)]).expect("pattern")),
    ];
    vertices.extend(INTS.iter().map(|&x| SkeletonVertex::vector(pivot_int_decode(x, 15).expect("pivot integer"))));
    SkeletonCode { n: 15, k: 4, d: 4, vertices }
}

/// The (6,4;3) skeleton found by the clique search.
pub fn skeleton_6_4_3() -> SkeletonCode {
    SkeletonCode { n: 6, k: 3, d: 4, vertices: vectors(6, &["111000", "100110", "010101", "001011"]) }
}

/// Numeric multilevel size: q^nu per vector plus registry-backed patterns.
pub fn skeleton_total(s: &SkeletonCode, q: u64) -> Result<BigInt, ConstructError> {
    let d = s.d as usize;
    let mut total = BigInt::zero();
    for v in &s.vertices {
        total += match &v.set {
            VertexSet::Vector(p) => ef_weight_poly(p, d).eval_u64(q),
            VertexSet::Pattern(p) => pattern_size(p, d, QSpec::Numeric(q))?.at(q),
            VertexSet::Set(_) => return Err(ConstructError::Parameters("set vertices have no stored size".into())),
        };
    }
    Ok(total)
}

fn bound_of(q: QSpec, poly: &PolyQ, numeric: Option<BigInt>, provenance: &str) -> BoundValue {
    match q {
        QSpec::Symbolic => BoundValue::poly(BoundKind::Lower, poly.clone(), provenance),
        QSpec::Numeric(v) => BoundValue::int(BoundKind::Lower, numeric.unwrap_or_else(|| poly.eval_u64(v)), provenance),
    }
}

fn field_of(q: QSpec, emit: bool) -> Result<Option<Field>, ConstructError> {
    match q {
        QSpec::Numeric(v) if emit => Ok(Some(Field::of_order(u32::try_from(v).map_err(|_| ConstructError::TooLarge(format!("q={v}")))?)?)),
        _ => Ok(None),
    }
}

/// Emits the two-block code built from lifted MRD codes: blocks (m, m),
/// k = m, both component codes the single whole space, both block codes
/// Gabidulin with rank distance d/2.
fn emit_mrd_pair(field: &Field, m: usize, d: usize) -> Result<CodeArtifact, ConstructError> {
    let mut art = CodeArtifact::new(field, 2 * m, m, d as u32);
    let g = gabidulin_code(field, m, m, d / 2)?;
    let spec = CodeSpec::Gabidulin { m, n: m, d: d / 2 };
    let cdcs = vec![vec![whole_space(field, m)], vec![whole_space(field, m)]];
    emit_construction1(&mut art, &[m, m], d, &cdcs, &[(g.clone(), spec.clone()), (g, spec)])?;
    Ok(art)
}

/// Appends the codewords of `extra` as further components of `art`.
fn append(art: &mut CodeArtifact, extra: CodeArtifact) -> Result<(), ConstructError> {
    for c in extra.components() {
        art.begin(c.label.clone(), c.kind.clone());
        for i in c.range() {
            art.push_digits(&extra.digits(i))?;
        }
        art.end();
    }
    Ok(())
}

/// The partition used for the extra codewords of A(10,4;5) at q=2: the first
/// restart refinable to the reported part sizes, or the best one found with
/// `improve`.
pub fn partition_5_2(opts: &NamedOptions) -> Result<(Partition, Partition, Vec<String>), ConstructError> {
    let field = Field::of_order(2)?;
    let g = Greedy::new(enumerate_subspaces(&field, 5, 2, None)?, 4)?;
    let mut best: Option<Partition> = None;
    let mut refined: Option<Partition> = None;
    let limit = opts.restarts.max(1).max(10_000);
    for r in 0..limit {
        let p = g.run(opts.seed, r);
        if refined.is_none() {
            refined = refine_to_multiset(&p, &REPORTED_PARTS);
        }
        if best.as_ref().is_none_or(|b| p.sum_squares() > b.sum_squares()) {
            best = Some(p);
        }
        if refined.is_some() && r + 1 >= opts.restarts {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let mut notes = vec![format!("best partition: {best} (restart {})", best.restart)];
    let chosen = if opts.improve {
        best.clone()
    } else {
        let r = refined.ok_or_else(|| ConstructError::Search("no restart refines to the reported part sizes".into()))?;
        notes.push(format!("reported partition: {r} (split from restart {})", r.restart));
        r
    };
    Ok((chosen, best, notes))
}

fn a_10_4_5(q: QSpec, opts: &NamedOptions) -> Result<NamedOutcome, ConstructError> {
    let c_poly = construction1_poly(&[5, 5], 5, 4)?;
    let table2 = coset_packing(&table2_scheme(), QSpec::Symbolic)?.as_poly().cloned().expect("symbolic");
    let mut notes = Vec::new();
    let name = "A(10,4;5)".to_string();
    let provenance = "two-block lifted MRD codes plus packed extra codewords";
    match q {
        QSpec::Symbolic => {
            let b = BoundValue::poly(BoundKind::Lower, c_poly + table2, provenance).constructive(Some(Recipe::Named(name.clone())));
            Ok(NamedOutcome { name, bound: b, artifact: None, partition: None, notes })
        }
        QSpec::Numeric(2) => {
            let (part, _best, n) = partition_5_2(opts)?;
            notes.extend(n);
            let extra = part.sum_squares();
            let b = BoundValue::int(BoundKind::Lower, c_poly.eval_u64(2) + extra, provenance)
                .constructive(Some(Recipe::Named(name.clone())));
            let artifact = if opts.emit {
                let field = Field::of_order(2)?;
                let mut art = emit_mrd_pair(&field, 5, 4)?;
                let families: Vec<Vec<Vec<Subspace>>> = part
                    .parts
                    .iter()
                    .map(|p| vec![p.clone(), p.iter().map(Subspace::orthogonal_complement).collect()])
                    .collect();
                emit_product(&mut art, "D", &[5, 5], &[2, 3], &families)?;
                Some(art)
            } else {
                None
            };
            Ok(NamedOutcome { name, bound: b, artifact, partition: Some(part), notes })
        }
        QSpec::Numeric(v) => {
            let b = BoundValue::int(BoundKind::Lower, (c_poly + table2).eval_u64(v), provenance)
                .constructive(Some(Recipe::Named(name.clone())));
            let artifact = match field_of(q, opts.emit)? {
                Some(field) => {
                    let mut art = emit_mrd_pair(&field, 5, 4)?;
                    let (d, _) = coset_packing_construct(&field, &table2_scheme(), true)?;
                    append(&mut art, d)?;
                    Some(art)
                }
                None => None,
            };
            Ok(NamedOutcome { name, bound: b, artifact, partition: None, notes })
        }
    }
}

fn a_12_6_6(q: QSpec, opts: &NamedOptions) -> Result<NamedOutcome, ConstructError> {
    let name = "A(12,6;6)".to_string();
    let c_poly = construction1_poly(&[6, 6], 6, 6)?;
    let (eq, _) = eq663_packing(None)?;
    let poly = c_poly + eq.as_poly().cloned().expect("symbolic");
    let b = bound_of(q, &poly, None, "two-block lifted MRD codes plus packed extra codewords")
        .constructive(Some(Recipe::Named(name.clone())));
    let artifact = match field_of(q, opts.emit)? {
        Some(field) => {
            let mut art = emit_mrd_pair(&field, 6, 6)?;
            let (_, d) = eq663_packing(Some(&field))?;
            append(&mut art, d.expect("constructed"))?;
            Some(art)
        }
        None => None,
    };
    Ok(NamedOutcome { name, bound: b, artifact, partition: None, notes: Vec::new() })
}

fn a_8_4_4(q: QSpec, opts: &NamedOptions) -> Result<NamedOutcome, ConstructError> {
    let name = "A(8,4;4)".to_string();
    let c_poly = construction1_poly(&[4, 4], 4, 4)?;
    let spreads: PolyQ = "q^2+q+1".parse::<PolyQ>().expect("poly") * "q^2+1".parse::<PolyQ>().expect("poly").pow(2);
    let poly = c_poly + spreads;
    let provenance = "two-block lifted MRD codes plus a parallelism in both blocks";
    let mut b = bound_of(q, &poly, None, provenance);
    let artifact = match field_of(q, opts.emit)? {
        Some(field) => {
            let mut art = emit_mrd_pair(&field, 4, 4)?;
            let families: Vec<Vec<Vec<Subspace>>> =
                parallelism(&field, 4, 2)?.into_iter().map(|s| vec![s.clone(), s]).collect();
            emit_product(&mut art, "D", &[4, 4], &[2, 2], &families)?;
            Some(art)
        }
        None => None,
    };
    if q == QSpec::Numeric(2) || q == QSpec::Symbolic {
        b = b.constructive(Some(Recipe::Named(name.clone())));
    }
    Ok(NamedOutcome { name, bound: b, artifact, partition: None, notes: Vec::new() })
}

/// Multilevel pipeline on an arbitrary skeleton.
pub fn multilevel_named(name: &str, s: SkeletonCode, q: QSpec, opts: &NamedOptions) -> Result<NamedOutcome, ConstructError> {
    let poly = multilevel_poly(&s)?;
    let provenance = "multilevel construction on a generalized skeleton";
    let numeric = match q {
        QSpec::Numeric(v) => Some(skeleton_total(&s, v)?),
        QSpec::Symbolic => None,
    };
    let mut b = bound_of(q, &poly, numeric, provenance);
    let constructive = s.vertices.iter().all(|v| matches!(v.set, VertexSet::Vector(_)));
    if constructive {
        b = b.constructive(Some(Recipe::Named(name.to_string())));
    }
    let mut notes = Vec::new();
    let artifact = match field_of(q, opts.emit)? {
        Some(field) => {
            let (art, built) = multilevel_construct(&s, &field, opts.seed)?;
            if built.at(0) != b.at(0) {
                notes.push(format!("constructed size {} falls short of {}", built.at(0), b.at(0)));
            }
            if !art.is_constructive() {
                notes.push("stored sub-codes contribute size only".into());
            }
            Some(art)
        }
        None => None,
    };
    Ok(NamedOutcome { name: name.to_string(), bound: b, artifact, partition: None, notes })
}

/// Runs a named pipeline at q (or symbolically).
pub fn assemble_named(name: &str, q: QSpec, opts: &NamedOptions) -> Result<NamedOutcome, ConstructError> {
    if let QSpec::Numeric(v) = q {
        if v < 2 {
            return Err(ConstructError::Parameters(format!("q={v}")));
        }
    }
    match canonical_name(name)? {
        "A(10,4;5)" => a_10_4_5(q, opts),
        "A(12,6;6)" => a_12_6_6(q, opts),
        "A(8,4;4)" => a_8_4_4(q, opts),
        "A(11,4;4)" => multilevel_named("A(11,4;4)", skeleton_11_4_4(), q, opts),
        "A(15,4;4)" => multilevel_named("A(15,4;4)", skeleton_15_4_4(), q, opts),
        "A(6,4;3)" => multilevel_named("A(6,4;3)", skeleton_6_4_3(), q, opts),
        other => Err(ConstructError::UnknownName(other.to_string())),
    }
}

/// Outcome of partitioning the 71-word (6,4;3)_2 code into distance-6 parts.
#[derive(Clone, Debug)]
pub struct EqTarget {
    pub partition: Partition,
    /// Known bracket for the best sum of squares.
    pub lower: u64,
    pub upper: u64,
}

pub fn eq_target(seed: u64, restarts: usize) -> Result<EqTarget, ConstructError> {
    let field = Field::of_order(2)?;
    let (art, _) = multilevel_construct(&skeleton_6_4_3(), &field, seed)?;
    let words = (0..art.len()).map(|i| art.codeword(i)).collect();
    let partition = greedy_partition_of(words, 6, seed, restarts)?;
    Ok(EqTarget { partition, lower: 9 * 9 + 7 * 8 * 8, upper: 8 * 9 * 9 + 5 * 5 })
}
