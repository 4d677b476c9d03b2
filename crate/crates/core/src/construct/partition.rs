use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ConstructError;
use crate::gf::Field;
use crate::subspace::{enumerate_subspaces, Subspace};

/// Most subspaces the pairwise compatibility table is built for.
const LIST_CEILING: usize = 16_384;

/// Random first-fit tries per part in the part-level greedy.
const TRIES_PER_PART: usize = 30;

/// A partition of a list of subspaces into codes of distance >= d.
#[derive(Clone, Debug)]
pub struct Partition {
    pub d: u32,
    pub parts: Vec<Vec<Subspace>>,
    /// Restart that produced it (0 is plain first-fit).
    pub restart: usize,
}

impl Partition {
    /// Part sizes, largest first.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.parts.iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
    pub fn total(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }
    pub fn sum_squares(&self) -> u64 {
        self.parts.iter().map(|p| (p.len() * p.len()) as u64).sum()
    }
    /// Size -> number of parts of that size.
    pub fn multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for p in &self.parts {
            *m.entry(p.len()).or_insert(0) += 1;
        }
        m
    }

    /// Every part has pairwise distance >= d (exhaustive).
    pub fn check_distances(&self) -> bool {
        self.parts.iter().all(|p| {
            p.iter().enumerate().all(|(i, u)| p[i + 1..].iter().all(|w| u.distance(w).is_ok_and(|x| x >= self.d)))
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.multiset().iter().rev().map(|(s, c)| if *c == 1 { s.to_string() } else { format!("{c}x{s}") }).collect();
        write!(f, "{{{}}} total {} squares {}", parts.join(", "), self.total(), self.sum_squares())
    }
}

/// Pairwise compatibility of a fixed list, reused across restarts.
pub(crate) struct Greedy {
    list: Vec<Subspace>,
    adj: Vec<Vec<u64>>,
    d: u32,
}

fn has(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl Greedy {
    pub(crate) fn new(list: Vec<Subspace>, d: u32) -> Result<Self, ConstructError> {
        if list.len() > LIST_CEILING {
            return Err(ConstructError::TooLarge(format!("{} subspaces to partition", list.len())));
        }
        let words = list.len().div_ceil(64).max(1);
        let mut adj = vec![vec![0u64; words]; list.len()];
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].distance(&list[j])? >= d {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Greedy { list, adj, d })
    }

    fn first_fit(&self, order: &[usize], remaining: &[u64]) -> Vec<usize> {
        let mut cand = remaining.to_vec();
        let mut part = Vec::new();
        for &i in order {
            if has(&cand, i) {
                part.push(i);
                for (c, a) in cand.iter_mut().zip(&self.adj[i]) {
                    *c &= a;
                }
            }
        }
        part
    }

    /// Restart 0: repeated first-fit in list order. Restart r > 0: each part
    /// is the largest of several first-fits over shuffled orders.
    pub(crate) fn run(&self, seed: u64, restart: usize) -> Partition {
        let n = self.list.len();
        let mut remaining = vec![0u64; n.div_ceil(64).max(1)];
        for i in 0..n {
            remaining[i / 64] |= 1 << (i % 64);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut parts = Vec::new();
        loop {
            let mut left: Vec<usize> = (0..n).filter(|&i| has(&remaining, i)).collect();
            if left.is_empty() {
                break;
            }
            let part = if restart == 0 {
                self.first_fit(&left, &remaining)
            } else {
                let mut best = Vec::new();
                for _ in 0..TRIES_PER_PART {
                    left.shuffle(&mut rng);
                    let p = self.first_fit(&left, &remaining);
                    if p.len() > best.len() {
                        best = p;
                    }
                }
                best
            };
            for &i in &part {
                remaining[i / 64] &= !(1 << (i % 64));
            }
            parts.push(part);
        }
        Partition { d: self.d, parts: parts.into_iter().map(|p| p.into_iter().map(|i| self.list[i].clone()).collect()).collect(), restart }
    }
}

/// Partitions `list` into codes of distance >= d. Returns the run with the
/// largest sum of squared part sizes among `restarts` runs (at least one).
pub fn greedy_partition_of(list: Vec<Subspace>, d: u32, seed: u64, restarts: usize) -> Result<Partition, ConstructError> {
    if d % 2 == 1 {
        return Err(ConstructError::Parameters(format!("odd distance {d}")));
    }
    let g = Greedy::new(list, d)?;
    let mut best = g.run(seed, 0);
    for r in 1..restarts {
        let p = g.run(seed, r);
        if p.sum_squares() > best.sum_squares() {
            best = p;
        }
    }
    Ok(best)
}

/// Greedy partition of all a-subspaces of F_q^n.
pub fn greedy_partition(field: &Field, n: usize, a: usize, d: u32, seed: u64, restarts: usize) -> Result<Partition, ConstructError> {
    greedy_partition_of(enumerate_subspaces(field, n, a, None)?, d, seed, restarts)
}

/// Splits parts of `p` so the sizes become exactly `target` (a multiset with
/// the same total). Splitting keeps every part's distance. None when no
/// assignment of target sizes to parts exists.
pub fn refine_to_multiset(p: &Partition, target: &[usize]) -> Option<Partition> {
    if target.iter().sum::<usize>() != p.total() || target.contains(&0) {
        return None;
    }
    let mut sizes = target.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut cap: Vec<usize> = p.parts.iter().map(Vec::len).collect();
    let mut slot = vec![usize::MAX; sizes.len()];
    fn assign(i: usize, sizes: &[usize], cap: &mut [usize], slot: &mut [usize]) -> bool {
        if i == sizes.len() {
            return cap.iter().all(|&c| c == 0);
        }
        let mut tried = Vec::new();
        for j in 0..cap.len() {
            if cap[j] >= sizes[i] && !tried.contains(&cap[j]) {
                tried.push(cap[j]);
                cap[j] -= sizes[i];
                slot[i] = j;
                if assign(i + 1, sizes, cap, slot) {
                    return true;
                }
                cap[j] += sizes[i];
            }
        }
        false
    }
    if !assign(0, &sizes, &mut cap, &mut slot) {
        return None;
    }
    let mut used = vec![0usize; p.parts.len()];
    let mut parts = Vec::with_capacity(sizes.len());
    for (i, &s) in sizes.iter().enumerate() {
        let j = slot[i];
        parts.push(p.parts[j][used[j]..used[j] + s].to_vec());
        used[j] += s;
    }
    Some(Partition { d: p.d, parts, restart: p.restart })
}

/// A partition of the k-subspaces of F_q^n into spreads, by backtracking
/// over all spreads. Practical for PG(3,2).
pub fn parallelism(field: &Field, n: usize, k: usize) -> Result<Vec<Vec<Subspace>>, ConstructError> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(ConstructError::Parameters(format!("no spreads of {k}-spaces in dimension {n}")));
    }
    let points = enumerate_subspaces(field, n, 1, None)?;
    let lines = enumerate_subspaces(field, n, k, None)?;
    if points.len() > 64 || lines.len() > 128 {
        return Err(ConstructError::TooLarge(format!("{} points and {} subspaces", points.len(), lines.len())));
    }
    let mut masks = Vec::with_capacity(lines.len());
    for l in &lines {
        let mut m = 0u64;
        for (i, p) in points.iter().enumerate() {
            if p.intersection_dim(l)? == 1 {
                m |= 1 << i;
            }
        }
        masks.push(m);
    }
    let full = if points.len() == 64 { u64::MAX } else { (1u64 << points.len()) - 1 };
    let mut spreads: Vec<u128> = Vec::new();
    fn spreads_rec(covered: u64, chosen: u128, full: u64, masks: &[u64], out: &mut Vec<u128>) {
        if covered == full {
            out.push(chosen);
            return;
        }
        let p = (!covered & full).trailing_zeros();
        for (i, &m) in masks.iter().enumerate() {
            if m >> p & 1 == 1 && m & covered == 0 {
                spreads_rec(covered | m, chosen | 1 << i, full, masks, out);
            }
        }
    }
    spreads_rec(0, 0, full, &masks, &mut spreads);
    let all: u128 = if lines.len() == 128 { u128::MAX } else { (1u128 << lines.len()) - 1 };
    fn cover(used: u128, all: u128, spreads: &[u128], pick: &mut Vec<usize>) -> bool {
        if used == all {
            return true;
        }
        let l = (!used & all).trailing_zeros();
        for (i, &s) in spreads.iter().enumerate() {
            if s >> l & 1 == 1 && s & used == 0 {
                pick.push(i);
                if cover(used | s, all, spreads, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    let mut pick = Vec::new();
    if !cover(0, all, &spreads, &mut pick) {
        return Err(ConstructError::Search("no parallelism exists".into()));
    }
    Ok(pick
        .iter()
        .map(|&i| (0..lines.len()).filter(|&l| spreads[i] >> l & 1 == 1).map(|l| lines[l].clone()).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::of_order(2).unwrap()
    }

    #[test]
    fn partitions_cover_every_line_once() {
        let p = greedy_partition(&gf2(), 5, 2, 4, 7, 3).unwrap();
        assert_eq!(p.total(), 155);
        assert!(p.sizes()[0] <= 9);
        assert!(p.sum_squares() <= 17 * 81 + 4);
        assert!(p.check_distances());
        let mut all: Vec<_> = p.parts.concat();
        all.sort_by(|a, b| a.digits().cmp(b.digits()));
        all.dedup();
        assert_eq!(all.len(), 155);
    }

    #[test]
    fn refinement_reaches_a_coarser_target() {
        let p = greedy_partition(&gf2(), 5, 2, 4, 1, 2).unwrap();
        let ones = vec![1; 155];
        let r = refine_to_multiset(&p, &ones).unwrap();
        assert_eq!(r.parts.len(), 155);
        let same = refine_to_multiset(&p, &p.sizes()).unwrap();
        assert_eq!(same.sum_squares(), p.sum_squares());
        let mut too_big = p.sizes();
        too_big[0] += 1;
        *too_big.last_mut().unwrap() -= 1;
        if too_big.last() == Some(&0) {
            too_big.pop();
        }
        assert!(refine_to_multiset(&p, &too_big).is_none());
    }

    #[test]
    fn pg32_has_a_packing() {
        let spreads = parallelism(&gf2(), 4, 2).unwrap();
        assert_eq!(spreads.len(), 7);
        assert!(spreads.iter().all(|s| s.len() == 5));
        for s in &spreads {
            for i in 0..5 {
                for j in i + 1..5 {
                    assert_eq!(s[i].distance(&s[j]).unwrap(), 4);
                }
            }
        }
    }
}
