use super::{hamming_distance_sets, SkeletonCode, SkeletonError, SkeletonVertex};
use crate::limits;

#[derive(Clone, Debug)]
pub struct CliqueResult {
    pub skeleton: SkeletonCode,
    pub weight: u128,
    /// True when branch and bound closed within the node budget.
    pub optimal: bool,
    pub nodes: u64,
}

struct Graph {
    words: usize,
    adj: Vec<Vec<u64>>,
    weight: Vec<u128>,
}

struct Search<'a> {
    g: &'a Graph,
    best: u128,
    best_set: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter().position(|&w| w != 0).map(|i| i * 64 + set[i].trailing_zeros() as usize)
}

impl Search<'_> {
    fn expand(&mut self, cw: u128, mut p: Vec<u64>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        // Greedy weighted colouring: each class is an independent set, so a
        // clique takes at most one vertex per class.
        let mut order = Vec::new();
        let mut bound = Vec::new();
        let mut uncoloured = p.clone();
        let mut total = 0u128;
        while uncoloured.iter().any(|&w| w != 0) {
            let mut avail = uncoloured.clone();
            let mut class_max = 0u128;
            let start = order.len();
            loop {
                let Some(v) = first_bit(&avail) else { break };
                avail[v / 64] &= !(1 << (v % 64));
                uncoloured[v / 64] &= !(1 << (v % 64));
                for (a, n) in avail.iter_mut().zip(&self.g.adj[v]) {
                    *a &= !n;
                }
                class_max = class_max.max(self.g.weight[v]);
                order.push(v);
            }
            total += class_max;
            bound.extend(std::iter::repeat_n(total, order.len() - start));
        }
        for j in (0..order.len()).rev() {
            if cw + bound[j] <= self.best || self.exhausted {
                return;
            }
            let v = order[j];
            let w = cw + self.g.weight[v];
            self.current.push(v);
            let next: Vec<u64> = p.iter().zip(&self.g.adj[v]).map(|(a, b)| a & b).collect();
            if next.iter().all(|&x| x == 0) {
                if w > self.best {
                    self.best = w;
                    self.best_set = self.current.clone();
                }
            } else {
                self.expand(w, next);
            }
            self.current.pop();
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Maximum weight set of vertices with pairwise set distance >= d. Vertex
/// weights come from each vertex's annotation evaluated at q (vertices
/// without one weigh 1). Vertices are sorted by weight and then by pivot
/// integer, both descending, which makes the result deterministic.
pub fn clique_search(
    vertices: &[SkeletonVertex],
    n: usize,
    k: usize,
    d: u32,
    q: u64,
    budget: u64,
) -> Result<CliqueResult, SkeletonError> {
    if vertices.len() as u64 > limits::clique_vertex_ceiling() {
        return Err(SkeletonError::TooManyVertices(vertices.len()));
    }
    let mut keyed = Vec::with_capacity(vertices.len());
    for v in vertices {
        let w = match &v.weight {
            Some(b) => u128::try_from(b.at(q)).map_err(|_| SkeletonError::WeightOverflow)?,
            None => 1,
        };
        keyed.push((w, v.sort_key(), v.clone()));
    }
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    let count = keyed.len();
    let words = count.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; count];
    for i in 0..count {
        for j in i + 1..count {
            let dist = hamming_distance_sets(&keyed[i].2, &keyed[j].2)?;
            if dist >= d && dist > 0 {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let g = Graph { words, adj, weight: keyed.iter().map(|x| x.0).collect() };
    let mut all = vec![0u64; g.words];
    for i in 0..count {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut s = Search { g: &g, best: 0, best_set: Vec::new(), current: Vec::new(), nodes: 0, budget, exhausted: false };
    if count > 0 {
        s.expand(0, all);
    }
    let mut chosen = s.best_set.clone();
    chosen.sort_unstable();
    let skeleton = SkeletonCode { n, k, d, vertices: chosen.iter().map(|&i| keyed[i].2.clone()).collect() };
    Ok(CliqueResult { skeleton, weight: s.best, optimal: !s.exhausted, nodes: s.nodes })
}
