//! Minimum distance verification of code artifacts: exhaustive pairwise,
//! hierarchical (structural certificates per component and per component
//! pair) and sampled, plus per-codeword block intersection checks.

mod hierarchical;

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::CodeArtifact;
use crate::gf::gf2;
use crate::limits;
use crate::subspace::{pack_gf2_rows, rank_of};

pub use hierarchical::verify_hierarchical;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{count} codewords exceed the pair ceiling {ceiling}; use hierarchical mode")]
    TooManyCodewords { count: usize, ceiling: u64 },
    #[error("invalid context: {0}")]
    Context(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Certified,
    Violation,
    Refused,
    /// Sampled pairs all met the target; not a certificate.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub distance: u32,
}

/// Which argument covered which class of pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub scope: String,
    pub argument: String,
    pub detail: String,
    /// Distance this argument guarantees for its pairs.
    pub lower_bound: Option<u32>,
    pub raw_pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub mode: String,
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub codewords: usize,
    pub target: u32,
    pub verdict: Verdict,
    /// Exact minimum (exhaustive), sampled minimum, or certified lower bound
    /// (hierarchical). None for fewer than two codewords.
    pub min_distance: Option<u32>,
    pub violation: Option<Violation>,
    pub certificates: Vec<Certificate>,
    pub reason: Option<String>,
    pub pairs_checked: u64,
}

impl VerifyReport {
    fn start(art: &CodeArtifact, mode: &str, target: u32) -> Self {
        VerifyReport {
            schema: 1,
            mode: mode.into(),
            q: art.field().q(),
            n: art.n(),
            k: art.k(),
            codewords: art.len(),
            target,
            verdict: Verdict::Certified,
            min_distance: None,
            violation: None,
            certificates: Vec::new(),
            reason: None,
            pairs_checked: 0,
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, Verdict::Certified | Verdict::Sampled)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub threads: usize,
    /// Raw distance evaluations hierarchical mode may spend on fallbacks.
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { threads: 1, budget: limits::fallback_budget() }
    }
}

/// Random access distances between codewords of an artifact.
pub(crate) struct Words<'a> {
    art: &'a CodeArtifact,
    /// k packed rows per codeword when q = 2 and n <= 64.
    packed: Option<Vec<u64>>,
}

impl<'a> Words<'a> {
    pub(crate) fn new(art: &'a CodeArtifact) -> Self {
        let packed = (art.field().q() == 2 && art.n() <= 64).then(|| {
            let (k, n) = (art.k(), art.n());
            let mut all = Vec::with_capacity(art.len() * k);
            let mut digits = vec![0u8; k * n];
            let mut rows = Vec::with_capacity(k);
            for i in 0..art.len() {
                art.store().get_into(i, &mut digits);
                pack_gf2_rows(k, n, &digits, &mut rows);
                all.extend_from_slice(&rows);
            }
            all
        });
        Words { art, packed }
    }

    pub(crate) fn distance(&self, i: usize, j: usize) -> u32 {
        let k = self.art.k();
        match &self.packed {
            Some(p) => {
                let mut buf = [0u64; 128];
                if 2 * k <= 128 {
                    buf[..k].copy_from_slice(&p[i * k..(i + 1) * k]);
                    buf[k..2 * k].copy_from_slice(&p[j * k..(j + 1) * k]);
                    (2 * gf2::rank(&mut buf[..2 * k]) - 2 * k) as u32
                } else {
                    let mut v = [&p[i * k..(i + 1) * k], &p[j * k..(j + 1) * k]].concat();
                    (2 * gf2::rank(&mut v) - 2 * k) as u32
                }
            }
            None => {
                let mut data = self.art.digits(i);
                data.extend(self.art.digits(j));
                (2 * rank_of(self.art.field(), 2 * k, self.art.n(), &data) - 2 * k) as u32
            }
        }
    }
}

/// Minimum distance and the first pair (in index order) below `target`
/// among pairs (i, j), i in `a`, j in `b`, i < j when the ranges overlap.
pub(crate) fn scan_pairs(words: &Words, a: Range<usize>, b: Range<usize>, target: u32, threads: usize) -> (Option<u32>, Option<Violation>, u64) {
    let threads = threads.max(1);
    let work = |tid: usize| {
        let mut min: Option<u32> = None;
        let mut bad: Option<Violation> = None;
        let mut count = 0u64;
        for i in a.clone().skip(tid).step_by(threads) {
            for j in b.clone().filter(|&j| j != i && (!b.contains(&i) || !a.contains(&j) || j > i)) {
                let d = words.distance(i, j);
                count += 1;
                min = Some(min.map_or(d, |m| m.min(d)));
                let (x, y) = (i.min(j), i.max(j));
                if d < target && bad.as_ref().is_none_or(|v| (x, y) < (v.first, v.second)) {
                    bad = Some(Violation { first: x, second: y, distance: d });
                }
            }
        }
        (min, bad, count)
    };
    let results: Vec<_> = if threads == 1 {
        vec![work(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads).map(|t| s.spawn(move || work(t))).collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        })
    };
    let mut min = None;
    let mut bad: Option<Violation> = None;
    let mut count = 0;
    for (m, b, c) in results {
        if let Some(m) = m {
            min = Some(min.map_or(m, |x: u32| x.min(m)));
        }
        if let Some(b) = b {
            if bad.as_ref().is_none_or(|v| (b.first, b.second) < (v.first, v.second)) {
                bad = Some(b);
            }
        }
        count += c;
    }
    (min, bad, count)
}

/// Exact minimum distance over all pairs.
pub fn verify_exhaustive(art: &CodeArtifact, target: u32, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let ceiling = limits::pair_ceiling();
    if art.len() as u64 > ceiling {
        return Err(VerifyError::TooManyCodewords { count: art.len(), ceiling });
    }
    let mut rep = VerifyReport::start(art, "exhaustive", target);
    if !art.is_constructive() {
        rep.verdict = Verdict::Refused;
        rep.reason = Some("size-only component".into());
        return Ok(rep);
    }
    let words = Words::new(art);
    let (min, bad, count) = scan_pairs(&words, 0..art.len(), 0..art.len(), target, opts.threads);
    rep.min_distance = min;
    rep.pairs_checked = count;
    rep.certificates.push(Certificate { scope: "all".into(), argument: "pairwise".into(), detail: String::new(), lower_bound: min, raw_pairs: count });
    if bad.is_some() {
        rep.verdict = Verdict::Violation;
        rep.violation = bad;
    }
    Ok(rep)
}

/// Minimum over `pairs` seeded random pairs of distinct indices. A smoke
/// test only: the report is never a certificate.
pub fn verify_sampled(art: &CodeArtifact, target: u32, pairs: u64, seed: u64) -> VerifyReport {
    let mut rep = VerifyReport::start(art, "sampled", target);
    rep.verdict = Verdict::Sampled;
    if !art.is_constructive() {
        rep.verdict = Verdict::Refused;
        rep.reason = Some("size-only component".into());
        return rep;
    }
    let n = art.len();
    if n < 2 || pairs == 0 {
        return rep;
    }
    let words = Words::new(art);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let d = words.distance(i, j);
        rep.min_distance = Some(rep.min_distance.map_or(d, |m| m.min(d)));
        if d < target && rep.violation.is_none() {
            rep.violation = Some(Violation { first: i.min(j), second: i.max(j), distance: d });
            rep.verdict = Verdict::Violation;
        }
    }
    rep.pairs_checked = pairs;
    rep
}

/// Per-codeword block intersection conditions for a block structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Membership {
    /// dim(U ∩ F_i) = a_i, F_i spanned by the coordinates of block i.
    DefEa { a: Vec<usize> },
    /// dim(U ∩ E_i) >= d/2 for all i, E_i the vectors vanishing on block i.
    DefE { d: usize },
    /// U ∩ E_i = {0} for the given block i.
    Disjoint { block: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub membership: Membership,
    pub blocks: Vec<usize>,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<usize>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub(crate) fn block_ranges(blocks: &[usize]) -> Vec<Range<usize>> {
    let mut at = 0;
    blocks
        .iter()
        .map(|&b| {
            at += b;
            at - b..at
        })
        .collect()
}

/// Checks every codeword in `range` against `m`.
pub fn verify_membership(
    art: &CodeArtifact,
    blocks: &[usize],
    m: &Membership,
    range: Option<Range<usize>>,
) -> Result<MembershipReport, VerifyError> {
    let (n, k) = (art.n(), art.k());
    if blocks.len() < 2 || blocks.iter().sum::<usize>() != n {
        return Err(VerifyError::Context(format!("blocks {blocks:?} do not split length {n}")));
    }
    match m {
        Membership::DefEa { a } => {
            if a.len() != blocks.len() || a.iter().sum::<usize>() != k || a.iter().zip(blocks).any(|(x, b)| x > b) {
                return Err(VerifyError::Context(format!("a = {a:?} does not fit k = {k} and blocks {blocks:?}")));
            }
        }
        Membership::DefE { d } => {
            let min_dim = blocks.iter().map(|b| n - b).min().unwrap_or(0);
            if d % 2 == 1 || d / 2 > k || d / 2 > min_dim {
                return Err(VerifyError::Context(format!("d/2 = {} cannot meet every E_i", d / 2)));
            }
        }
        Membership::Disjoint { block } => {
            if *block >= blocks.len() || blocks[*block] < k {
                return Err(VerifyError::Context(format!("block {block} cannot be complementary to a {k}-space")));
            }
        }
    }
    let ranges = block_ranges(blocks);
    let range = range.unwrap_or(0..art.len());
    let mut failures = 0;
    let mut first = None;
    for i in range.clone() {
        let u = art.codeword(i);
        let ok = match m {
            Membership::DefEa { a } => ranges.iter().zip(a).all(|(r, &x)| u.dim_meet_coordinates(r.clone()) == x),
            Membership::DefE { d } => ranges.iter().all(|r| u.dim_meet_vanishing(r.clone()) >= d / 2),
            Membership::Disjoint { block } => u.dim_meet_vanishing(ranges[*block].clone()) == 0,
        };
        if !ok {
            failures += 1;
            first.get_or_insert(i);
        }
    }
    Ok(MembershipReport { membership: m.clone(), blocks: blocks.to_vec(), checked: range.len(), failures, first_failure: first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{multilevel_construct, skeleton_6_4_3};
    use crate::gf::Field;
    use crate::subspace::enumerate_subspaces;

    fn code_71() -> CodeArtifact {
        let f = Field::of_order(2).unwrap();
        multilevel_construct(&skeleton_6_4_3(), &f, 0).unwrap().0
    }

    #[test]
    fn exhaustive_finds_the_minimum() {
        let art = code_71();
        let r = verify_exhaustive(&art, 4, &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert_eq!(r.min_distance, Some(4));
        assert_eq!(r.pairs_checked, 71 * 70 / 2);
        let threaded = verify_exhaustive(&art, 4, &VerifyOptions { threads: 3, ..Default::default() }).unwrap();
        assert_eq!(threaded, r);
    }

    #[test]
    fn duplicates_and_singletons() {
        let f = Field::of_order(2).unwrap();
        let mut art = code_71();
        let w = art.codeword(3);
        art.replace(10, &w);
        let r = verify_exhaustive(&art, 4, &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Violation);
        assert_eq!(r.violation, Some(Violation { first: 3, second: 10, distance: 0 }));
        let mut one = CodeArtifact::new(&f, 6, 3, 4);
        one.push(&enumerate_subspaces(&f, 6, 3, None).unwrap()[0]).unwrap();
        let r = verify_exhaustive(&one, 4, &VerifyOptions::default()).unwrap();
        assert_eq!((r.verdict, r.min_distance), (Verdict::Certified, None));
    }

    #[test]
    fn sampled_never_beats_exhaustive() {
        let art = code_71();
        let s = verify_sampled(&art, 4, 5000, 9);
        assert_eq!(s.verdict, Verdict::Sampled);
        assert!(s.min_distance.unwrap() >= 4);
        let empty = verify_sampled(&art, 4, 0, 9);
        assert_eq!((empty.pairs_checked, empty.min_distance), (0, None));
    }

    #[test]
    fn membership_checks() {
        let f = Field::of_order(2).unwrap();
        let mut art = CodeArtifact::new(&f, 4, 2, 2);
        for s in enumerate_subspaces(&f, 4, 2, None).unwrap() {
            art.push(&s).unwrap();
        }
        let ea = verify_membership(&art, &[2, 2], &Membership::DefEa { a: vec![1, 1] }, None).unwrap();
        // 2-spaces of F_2^4 meeting both coordinate planes in a line: 3 * 3.
        assert_eq!(ea.checked - ea.failures, 9);
        let dis = verify_membership(&art, &[2, 2], &Membership::Disjoint { block: 0 }, None).unwrap();
        // Complements of a fixed plane: q^4 = 16.
        assert_eq!(dis.checked - dis.failures, 16);
        assert!(verify_membership(&art, &[2, 2], &Membership::DefE { d: 6 }, None).is_err());
        assert!(verify_membership(&art, &[3, 2], &Membership::DefE { d: 2 }, None).is_err());
    }
}
