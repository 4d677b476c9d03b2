use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{emit_product, lift_frame, BoundKind, BoundValue, CodeArtifact, ConstructError, QSpec};
use crate::gf::Field;
use crate::rankmetric::{coset_partition, fdrm_upper_bound, CosetFamily};
use crate::subspace::{pivots_descending, PivotVector, Subspace};
use crate::PolyQ;

/// Per-diagram data for packing with rank distances 2 inside 1: the size of
/// the best distance-2 code and the number of its cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub pivot: PivotVector,
    pub size: PolyQ,
    pub cosets: PolyQ,
}

/// Recomputed from the diagrams: size q^nu and q^(dots - nu) cosets.
pub fn table1(n: usize, a: usize) -> Result<Vec<Table1Row>, ConstructError> {
    let mut out = Vec::new();
    for v in pivots_descending(n, a) {
        let diag = v.ferrers();
        let nu = if diag.k() >= 2 { fdrm_upper_bound(&diag, 4)? } else { 0 };
        out.push(Table1Row { pivot: v, size: PolyQ::q_pow(nu as u32), cosets: PolyQ::q_pow((diag.dots() - nu) as u32) });
    }
    Ok(out)
}

/// One row: every used coset index pairs one coset of each member pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingRow {
    pub skeleton: Vec<PivotVector>,
    pub size: PolyQ,
    pub used: PolyQ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingScheme {
    pub n: usize,
    pub a: usize,
    pub d: u32,
    pub rows: Vec<PackingRow>,
}

fn row(members: &[&str], size: &str, used: &str) -> PackingRow {
    PackingRow {
        skeleton: members.iter().map(|s| s.parse().expect("pivot")).collect(),
        size: size.parse().expect("size"),
        used: used.parse().expect("used"),
    }
}

/// The mixed-diagram scheme for 2-subspaces of F_q^5.
pub fn table2_scheme() -> PackingScheme {
    PackingScheme {
        n: 5,
        a: 2,
        d: 4,
        rows: vec![
            row(&["11000", "00110"], "q^3+1", "q^2"),
            row(&["11000", "00101"], "q^3+1", "q"),
            row(&["11000", "00011"], "q^3+1", "1"),
            row(&["11000"], "q^3", "q^3-q^2-q-1"),
            row(&["10100", "01010"], "q^2+q", "q^2"),
            row(&["10100", "01001"], "q^2+1", "q^2"),
            row(&["10100"], "q^2", "q^3-2q^2"),
            row(&["01100", "10010"], "q^2+q", "q^2"),
            row(&["10010"], "q", "q^3-q^2"),
            row(&["10001"], "1", "q^3"),
        ],
    }
}

/// One row per diagram, using all of its cosets.
pub fn all_ferrers_scheme(n: usize, a: usize) -> Result<PackingScheme, ConstructError> {
    let rows = table1(n, a)?
        .into_iter()
        .map(|r| PackingRow { skeleton: vec![r.pivot], size: r.size, used: r.cosets })
        .collect();
    Ok(PackingScheme { n, a, d: 4, rows })
}

fn check_scheme(s: &PackingScheme) -> Result<BTreeMap<PivotVector, Table1Row>, ConstructError> {
    if s.d != 4 {
        return Err(ConstructError::Parameters("coset packing needs subspace distance 4".into()));
    }
    let data: BTreeMap<PivotVector, Table1Row> = table1(s.n, s.a)?.into_iter().map(|r| (r.pivot, r)).collect();
    let mut used: BTreeMap<PivotVector, PolyQ> = BTreeMap::new();
    for r in &s.rows {
        let mut size = PolyQ::zero();
        for (i, v) in r.skeleton.iter().enumerate() {
            let t = data.get(v).ok_or_else(|| ConstructError::Parameters(format!("pivot {v} is not in G(n, a)")))?;
            size = size + t.size.clone();
            if r.skeleton[i + 1..].iter().any(|w| w.hamming(v) < s.d) {
                return Err(ConstructError::Parameters(format!("row members too close to {v}")));
            }
            let e = used.entry(*v).or_insert_with(PolyQ::zero);
            *e = &*e + &r.used;
        }
        if size != r.size {
            return Err(ConstructError::Parameters(format!("row size {} should be {size}", r.size)));
        }
        if !r.used.nonneg_from(&BigInt::from(2)) {
            return Err(ConstructError::Parameters(format!("negative coset count {}", r.used)));
        }
    }
    for (v, u) in &used {
        if !(&data[v].cosets - u).nonneg_from(&BigInt::from(2)) {
            return Err(ConstructError::OverusedCosets(v.to_string()));
        }
    }
    Ok(data)
}

/// Lower bound sum over rows of (used cosets) * size^2.
pub fn coset_packing(s: &PackingScheme, q: QSpec) -> Result<BoundValue, ConstructError> {
    check_scheme(s)?;
    let total = s.rows.iter().fold(PolyQ::zero(), |acc, r| acc + r.used.clone() * r.size.clone() * r.size.clone());
    Ok(match q {
        QSpec::Symbolic => BoundValue::poly(BoundKind::Lower, total, "coset packing"),
        QSpec::Numeric(v) => BoundValue::int(BoundKind::Lower, total.eval_u64(v), "coset packing"),
    })
}

fn lift_all(field: &Field, v: &PivotVector, fam: &CosetFamily, j: usize) -> Vec<Subspace> {
    let (n, a) = (v.n(), v.weight());
    let mut out = Vec::new();
    let mut buf = vec![0u8; n * a];
    fam.for_each_in_coset(j, |m| {
        lift_frame(v, m, &mut buf);
        out.push(Subspace::from_canonical_digits(field, a, n, buf.clone()).expect("lifted frame is canonical"));
    });
    out
}

fn to_usize(b: &BigInt) -> Result<usize, ConstructError> {
    usize::try_from(b).map_err(|_| ConstructError::TooLarge(format!("{b} cosets")))
}

/// Builds the code of the scheme in F_q^(2n): for each used coset index j,
/// D_1^j is the union of one fresh coset per member pivot and D_2^j is
/// D_1^j itself, or its orthogonal complement when `perp` is set.
pub fn coset_packing_construct(field: &Field, s: &PackingScheme, perp: bool) -> Result<(CodeArtifact, BoundValue), ConstructError> {
    check_scheme(s)?;
    let q = field.q() as u64;
    let mut families: BTreeMap<PivotVector, CosetFamily> = BTreeMap::new();
    let mut next: BTreeMap<PivotVector, usize> = BTreeMap::new();
    let mut parts = Vec::new();
    for r in &s.rows {
        for v in &r.skeleton {
            if !families.contains_key(v) {
                families.insert(*v, coset_partition(field, &v.ferrers(), 2, 1)?);
            }
        }
        for _ in 0..to_usize(&r.used.eval_u64(q))? {
            let mut d1 = Vec::new();
            for v in &r.skeleton {
                let j = next.entry(*v).or_insert(0);
                d1.extend(lift_all(field, v, &families[v], *j));
                *j += 1;
            }
            let d2 = if perp { d1.iter().map(Subspace::orthogonal_complement).collect() } else { d1.clone() };
            parts.push(vec![d1, d2]);
        }
    }
    let second = if perp { s.n - s.a } else { s.a };
    let mut art = CodeArtifact::new(field, 2 * s.n, s.a + second, s.d);
    emit_product(&mut art, "D", &[s.n, s.n], &[s.a, second], &parts)?;
    let b = BoundValue::int(BoundKind::Lower, art.len(), "coset packing").constructive(None);
    Ok((art, b))
}

/// Cosets of the 3x3 Gabidulin code of rank distance 3 inside the one of
/// distance 2, lifted on 111000, with 000111 added to the first coset; each
/// B^j is used in both blocks. Returns the bound and, for a concrete field,
/// the code in F_q^12.
pub fn eq663_packing(field: Option<&Field>) -> Result<(BoundValue, Option<CodeArtifact>), ConstructError> {
    let poly: PolyQ = "q^9+2q^3+1".parse().expect("poly");
    let Some(field) = field else {
        return Ok((BoundValue::poly(BoundKind::Lower, poly, "coset packing with a spread-like first part"), None));
    };
    let top: PivotVector = "111000".parse().expect("pivot");
    let bottom: PivotVector = "000111".parse().expect("pivot");
    let fam = coset_partition(field, &top.ferrers(), 3, 2)?;
    let r = to_usize(&fam.count())?;
    let mut parts = Vec::with_capacity(r);
    for j in 0..r {
        let mut b = lift_all(field, &top, &fam, j);
        if j == 0 {
            let mut digits = vec![0u8; 18];
            lift_frame(&bottom, &[0u8; 9], &mut digits);
            b.push(Subspace::from_canonical_digits(field, 3, 6, digits)?);
        }
        parts.push(vec![b.clone(), b]);
    }
    let mut art = CodeArtifact::new(field, 12, 6, 6);
    emit_product(&mut art, "D", &[6, 6], &[3, 3], &parts)?;
    let b = BoundValue::int(BoundKind::Lower, poly.eval_u64(field.q() as u64), "coset packing with a spread-like first part")
        .constructive(None);
    debug_assert_eq!(b.at(0), BigInt::from(art.len()));
    Ok((b, Some(art)))
}
