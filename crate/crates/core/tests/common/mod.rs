//! Seeded property suites over the structural facts the constructions and
//! the hierarchical verifier rely on. Every property runs 10^4 cases and
//! reports the first counterexample as an error.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use subcodes::construct::{assemble_named, CodeArtifact, ComponentKind, NamedOptions, QSpec};
use subcodes::gf::Field;
use subcodes::rankmetric::{coset_partition, fdrm_construct, rank_distance, CosetFamily, LinearMatrixCode};
use subcodes::subspace::{FerrersTableau, MatrixFq, PivotVector, Subspace};
use subcodes::verify::{verify_membership, Membership};

const CASES: u32 = 10_000;

fn runner(tag: u8) -> TestRunner {
    let mut seed = [0u8; 32];
    seed[0] = tag;
    let config = Config { cases: CASES, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &seed))
}

const GRID: [(usize, usize, u32); 3] = [(6, 3, 2), (7, 3, 2), (6, 3, 3)];

fn field(q: u32) -> Field {
    Field::of_order(q).unwrap()
}

/// A k-subspace of F_q^n spanned by a random full-rank matrix.
fn subspace(n: usize, k: usize, q: u32) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(0..q as u8, k * n)
        .prop_map(move |data| Subspace::span(&MatrixFq::new(&field(q), k, n, data).unwrap()))
        .prop_filter("full rank", move |u| u.k() == k)
}

fn grid_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
    proptest::sample::select(GRID.to_vec()).prop_flat_map(|(n, k, q)| (subspace(n, k, q), subspace(n, k, q)))
}

fn pivot(n: usize, k: usize) -> impl Strategy<Value = PivotVector> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), k).prop_map(move |p| PivotVector::from_positions(n, &p).unwrap())
}

pub fn distance_dominates_pivot_hamming() -> Result<(), String> {
    runner(1)
        .run(&grid_pair(), |(u, w)| {
            prop_assert!(u.distance(&w).unwrap() >= u.pivot().hamming(&w.pivot()));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn equal_pivots_give_twice_rank_distance() -> Result<(), String> {
    let strat = proptest::sample::select(GRID.to_vec()).prop_flat_map(|(n, k, q)| {
        pivot(n, k).prop_flat_map(move |p| {
            let dots = p.dots();
            let tab = move || proptest::collection::vec(0..q as u8, dots);
            (Just(p), Just(q), tab(), tab())
        })
    });
    runner(2)
        .run(&strat, |(p, q, a, b)| {
            let f = field(q);
            let lift = |e: Vec<u8>| Subspace::from_tableau(&f, &FerrersTableau::new(p.ferrers(), e).unwrap()).unwrap();
            let (u, w) = (lift(a), lift(b));
            prop_assert_eq!(u.pivot(), p);
            prop_assert_eq!(u.distance(&w).unwrap(), 2 * rank_distance(u.basis(), w.basis()).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn orthogonal_complement_is_an_isometry() -> Result<(), String> {
    runner(3)
        .run(&grid_pair(), |(u, w)| {
            let (du, dw) = (u.orthogonal_complement(), w.orthogonal_complement());
            prop_assert_eq!(du.k(), u.n() - u.k());
            prop_assert_eq!(du.distance(&dw).unwrap(), u.distance(&w).unwrap());
            prop_assert_eq!(du.orthogonal_complement(), u);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Constructions memoized across cases; None when the construction fails.
type Cache<K, V> = OnceLock<Mutex<HashMap<K, Option<V>>>>;

/// FDRM codes for the pivots of F_2^7 and F_3^6 with k = 3, keyed by
/// (q, pivot, delta). None when no construction meets the bound.
fn fdrm_cache(q: u32, p: &PivotVector, delta: usize) -> Option<LinearMatrixCode> {
    static CACHE: Cache<(u32, String, usize), LinearMatrixCode> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry((q, p.to_string(), delta)).or_insert_with(|| fdrm_construct(&field(q), &p.ferrers(), delta).ok()).clone()
}

fn coeffs(q: u32) -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0..q as u8, 12)
}

pub fn lifted_fdrm_codes_have_twice_the_rank_distance() -> Result<(), String> {
    let strat = prop_oneof![Just((7usize, 2u32)), Just((6, 3))]
        .prop_flat_map(|(n, q)| (pivot(n, 3), Just(q), 1usize..=3, coeffs(q), coeffs(q)));
    let mut nonempty = 0u32;
    runner(4)
        .run(&strat, |(p, q, delta, x, y)| {
            let Some(code) = fdrm_cache(q, &p, delta) else { return Ok(()) };
            let f = field(q);
            let (a, b) = (code.combine(&x[..code.dim()]), code.combine(&y[..code.dim()]));
            let (k, w) = (code.rows(), code.cols());
            let lift = |m: Vec<u8>| Subspace::from_frame(&f, &p, &MatrixFq::new(&f, k, w, m).unwrap()).unwrap();
            let rank = code.rank_of(&a.iter().zip(&b).map(|(&s, &t)| f.sub_raw(s, t)).collect::<Vec<_>>());
            let (u, v) = (lift(a), lift(b));
            prop_assert_eq!(u.distance(&v).unwrap(), 2 * rank);
            if u != v {
                prop_assert!(rank as usize >= delta);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    for q in [2, 3] {
        let n = if q == 2 { 7 } else { 6 };
        nonempty += subcodes::subspace::pivots_descending(n, 3).iter().filter(|p| fdrm_cache(q, p, 2).is_some_and(|c| c.dim() > 0)).count() as u32;
    }
    if nonempty <= 20 {
        return Err(format!("only {nonempty} nontrivial FDRM codes exercised"));
    }
    Ok(())
}

fn coset_cache(q: u32, p: &PivotVector, delta: usize, parent: usize) -> Option<CosetFamily> {
    static CACHE: Cache<(u32, String, usize, usize), CosetFamily> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry((q, p.to_string(), delta, parent))
        .or_insert_with(|| coset_partition(&field(q), &p.ferrers(), delta, parent).ok())
        .clone()
}

pub fn coset_families_partition_with_both_distances() -> Result<(), String> {
    let strat = prop_oneof![Just((6usize, 2u32)), Just((7, 2)), Just((6, 3))].prop_flat_map(|(n, q)| {
        (pivot(n, 3), Just(q), (1usize..=2).prop_flat_map(|pd| (Just(pd), pd + 1..=3)), coeffs(q), coeffs(q), any::<usize>())
    });
    runner(5)
        .run(&strat, |(p, q, (parent, delta), x, y, pick)| {
            let Some(fam) = coset_cache(q, &p, delta, parent) else { return Ok(()) };
            let f = field(q);
            let code = fam.parent();
            let (a, b) = (code.combine(&x[..code.dim()]), code.combine(&y[..code.dim()]));
            let (ia, ib) = (fam.coset_of(&a), fam.coset_of(&b));
            let count = fam.count_usize().unwrap();
            // Every parent word lies in exactly one coset.
            prop_assert!(ia.is_some_and(|j| j < count) && ib.is_some_and(|j| j < count));
            let j = pick % count;
            prop_assert_eq!(fam.coset_of(&fam.representative(j)), Some(j));
            if a != b {
                let diff: Vec<u8> = a.iter().zip(&b).map(|(&s, &t)| f.sub_raw(s, t)).collect();
                let rank = code.rank_of(&diff) as usize;
                prop_assert!(rank >= parent);
                if ia == ib {
                    prop_assert!(rank >= delta, "same coset at rank {}", rank);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn artifacts() -> &'static [CodeArtifact] {
    static ARTS: OnceLock<Vec<CodeArtifact>> = OnceLock::new();
    let _ = ARTS.get_or_init(|| {
        let opts = NamedOptions { emit: true, ..NamedOptions::default() };
        ["A(10,4;5)", "A(8,4;4)"]
            .iter()
            .map(|name| assemble_named(name, QSpec::Numeric(2), &opts).unwrap().artifact.expect("constructive"))
            .collect::<Vec<_>>()
    });
    ARTS.get().unwrap()
}

/// Checks one codeword against the membership its component promises.
/// Returns the number of memberships checked.
fn check_word(art: &CodeArtifact, i: usize) -> Result<usize, TestCaseError> {
    let comp = art.components().iter().find(|c| c.range().contains(&i)).expect("every word has a component");
    let d = art.declared_distance() as usize;
    let checks = match &comp.kind {
        ComponentKind::BlockLifted { blocks, lead, .. } => vec![(blocks.clone(), Membership::Disjoint { block: *lead })],
        ComponentKind::Product { blocks, dims, .. } => {
            vec![(blocks.clone(), Membership::DefEa { a: dims.clone() }), (blocks.clone(), Membership::DefE { d })]
        }
        _ => vec![],
    };
    for (blocks, m) in &checks {
        let rep = verify_membership(art, blocks, m, Some(i..i + 1)).unwrap();
        prop_assert!(rep.passed(), "{} word {} fails {:?}", comp.label, i, m);
    }
    Ok(checks.len())
}

pub fn block_components_meet_their_structure() -> Result<(), String> {
    let arts = artifacts();
    let counts = std::cell::RefCell::new([0usize; 3]);
    runner(6)
        .run(&(0..arts.len(), any::<prop::sample::Index>()), |(a, idx)| {
            let art = &arts[a];
            let n = check_word(art, idx.index(art.len()))?;
            counts.borrow_mut()[n] += 1;
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let seen = counts.into_inner();
    // Both disjointness (one check) and def_E_a/def_E (two checks) are hit.
    if seen[1] <= 1000 || seen[2] <= 100 {
        return Err(format!("coverage {seen:?}"));
    }
    Ok(())
}

pub fn special_substructure_and_membership_hold_on_every_codeword() -> Result<(), String> {
    let sizes: Vec<usize> = artifacts().iter().map(CodeArtifact::len).collect();
    if sizes != [1_179_625, 4797] {
        return Err(format!("unexpected artifact sizes {sizes:?}"));
    }
    for art in artifacts() {
        for c in art.components() {
            let (blocks, ms) = match &c.kind {
                ComponentKind::BlockLifted { blocks, lead, .. } => (blocks, vec![Membership::Disjoint { block: *lead }]),
                ComponentKind::Product { blocks, dims, .. } => (
                    blocks,
                    vec![Membership::DefEa { a: dims.clone() }, Membership::DefE { d: art.declared_distance() as usize }],
                ),
                _ => continue,
            };
            for m in ms {
                let rep = verify_membership(art, blocks, &m, Some(c.range())).map_err(|e| e.to_string())?;
                if !rep.passed() || rep.checked != c.range().len() {
                    return Err(format!("{} {:?}: {rep:?}", c.label, m));
                }
            }
        }
    }
    Ok(())
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("pivot Hamming distance bounds subspace distance", distance_dominates_pivot_hamming),
    ("equal pivots: subspace distance is twice rank distance", equal_pivots_give_twice_rank_distance),
    ("orthogonal complement is an isometry", orthogonal_complement_is_an_isometry),
    ("lifted FDRM codes have distance 2*delta", lifted_fdrm_codes_have_twice_the_rank_distance),
    ("coset families: partition, inner and outer distances", coset_families_partition_with_both_distances),
    ("sampled block structure of constructed codes", block_components_meet_their_structure),
    ("disjointness and block membership on every codeword", special_substructure_and_membership_hold_on_every_codeword),
];
