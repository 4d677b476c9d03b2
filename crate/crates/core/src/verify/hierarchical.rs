use std::collections::{HashMap, HashSet};
use std::ops::Range;

use super::{block_ranges, scan_pairs, Certificate, Verdict, VerifyOptions, VerifyReport, Violation, Words};
use crate::construct::{CodeArtifact, CodeSpec, ComponentKind};
use crate::gf::Field;
use crate::rankmetric::{LinearMatrixCode, RankCertificate};
use crate::subspace::{rank_of, rref_data, PivotVector};

/// Most distinct pivots kept per component for the Hamming argument.
const PIVOT_SET_CEILING: usize = 1 << 16;

/// Codes up to this size have their minimum rank re-derived by enumeration
/// even when they carry an algebraic certificate.
const RECHECK_CEILING: u64 = 1 << 20;

struct Ctx<'a> {
    art: &'a CodeArtifact,
    words: Words<'a>,
    target: u32,
    threads: usize,
    budget: u64,
    rep: VerifyReport,
    stragglers: Vec<usize>,
}

enum Stop {
    Violation(Violation),
    Refused(String),
}

impl<'a> Ctx<'a> {
    fn certify(&mut self, scope: &str, argument: &str, detail: String, bound: Option<u32>, raw: u64) {
        self.rep.certificates.push(Certificate {
            scope: scope.into(),
            argument: argument.into(),
            detail,
            lower_bound: bound.filter(|&b| b != u32::MAX),
            raw_pairs: raw,
        });
    }

    /// Raw pair scan between two index ranges, charged to the budget.
    fn raw(&mut self, scope: &str, a: Range<usize>, b: Range<usize>, why: &str) -> Result<(), Stop> {
        let cost = if a == b { (a.len() as u64) * (a.len().saturating_sub(1) as u64) / 2 } else { a.len() as u64 * b.len() as u64 };
        if cost > self.budget - self.rep.pairs_checked {
            return Err(Stop::Refused(format!("{scope}: {why}, and {cost} raw pairs exceed the remaining budget")));
        }
        let (min, bad, count) = scan_pairs(&self.words, a, b, self.target, self.threads);
        self.rep.pairs_checked += count;
        if let Some(v) = bad {
            return Err(Stop::Violation(v));
        }
        self.certify(scope, "pairwise", why.into(), min, count);
        Ok(())
    }

    fn field(&self) -> &Field {
        self.art.field()
    }
}

fn pivot_bits(digits: &[u8], k: usize, n: usize) -> Option<u64> {
    if n > 64 {
        return None;
    }
    let mut bits = 0u64;
    for r in 0..k {
        let c = digits[r * n..(r + 1) * n].iter().position(|&x| x != 0)?;
        bits |= 1 << (n - 1 - c);
    }
    Some(bits)
}

/// dim(U ∩ E), E the vectors vanishing on `block`.
fn meet_vanishing(field: &Field, digits: &[u8], k: usize, n: usize, block: &Range<usize>, buf: &mut Vec<u8>) -> usize {
    buf.clear();
    for r in 0..k {
        buf.extend_from_slice(&digits[r * n + block.start..r * n + block.end]);
    }
    k - rank_of(field, k, block.len(), buf)
}

/// Minimum rank distance of a rebuilt code and how it is known.
fn code_distance(field: &Field, spec: &CodeSpec) -> Result<(LinearMatrixCode, u32, String), String> {
    let code = spec.build(field).map_err(|e| format!("cannot rebuild {spec:?}: {e}"))?;
    let small = (field.q() as f64).powi(code.dim() as i32) <= RECHECK_CEILING as f64;
    let (d, how) = match code.certificate() {
        RankCertificate::Exhaustive => (code.min_rank_distance(), "enumerated"),
        _ if small => (code.min_rank_exhaustive().map_err(|e| e.to_string())?, "enumerated"),
        RankCertificate::Gabidulin => (code.min_rank_distance(), "Gabidulin construction"),
        RankCertificate::ProductMap => (code.min_rank_distance(), "product map kernel"),
    };
    Ok((code, d, how.into()))
}

fn subspace_distance(field: &Field, a: &[u8], b: &[u8], k: usize, n: usize) -> u32 {
    let data = [a, b].concat();
    (2 * rank_of(field, 2 * k, n, &data) - 2 * k) as u32
}

/// Minimum pairwise distance within a set of RREF digit strings, None when
/// the set has fewer than two elements.
fn set_min(field: &Field, set: &[Vec<u8>], k: usize, n: usize) -> Option<u32> {
    let mut min = None;
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let d = subspace_distance(field, &set[i], &set[j], k, n);
            min = Some(min.map_or(d, |m: u32| m.min(d)));
        }
    }
    min
}

fn cross_min(field: &Field, a: &[Vec<u8>], b: &[Vec<u8>], k: usize, n: usize) -> u32 {
    let mut min = u32::MAX;
    for x in a {
        for y in b {
            min = min.min(subspace_distance(field, x, y, k, n));
        }
    }
    min
}

/// Certifies the minimum distance from the component structure. Pairs
/// within a component use the rank-metric or direct-sum structure recorded
/// by the construction; pairs across components use pivot Hamming distance
/// or the gap in dim(U ∩ E) for a block vanishing space E, since
/// d(U, W) >= 2 (dim(W ∩ E) - dim(U ∩ E)). Codewords that fail their
/// component's structure are checked against every other codeword.
pub fn verify_hierarchical(art: &CodeArtifact, target: u32, opts: &VerifyOptions) -> VerifyReport {
    let mut rep = VerifyReport::start(art, "hierarchical", target);
    if let Some(c) = art.components().iter().find(|c| c.is_placeholder()) {
        rep.verdict = Verdict::Refused;
        rep.reason = Some(format!("size-only component {}", c.label));
        return rep;
    }
    let mut ctx = Ctx { art, words: Words::new(art), target, threads: opts.threads, budget: opts.budget, rep, stragglers: Vec::new() };
    match run(&mut ctx) {
        Ok(()) => {
            let min = ctx.rep.certificates.iter().filter_map(|c| c.lower_bound).min();
            ctx.rep.min_distance = if art.len() < 2 { None } else { min.or(Some(target)) };
        }
        Err(Stop::Violation(v)) => {
            ctx.rep.verdict = Verdict::Violation;
            ctx.rep.min_distance = Some(v.distance);
            ctx.rep.violation = Some(v);
        }
        Err(Stop::Refused(why)) => {
            ctx.rep.verdict = Verdict::Refused;
            ctx.rep.reason = Some(why);
        }
    }
    ctx.rep
}

/// Per component data used by the cross-component arguments.
struct Info {
    label: String,
    range: Range<usize>,
    pivots: Option<HashSet<u64>>,
}

fn run(ctx: &mut Ctx) -> Result<(), Stop> {
    let art = ctx.art;
    let (n, k) = (art.n(), art.k());

    // Duplicates.
    let mut order: Vec<usize> = (0..art.len()).collect();
    order.sort_by(|&a, &b| art.store().raw(a).cmp(art.store().raw(b)).then(a.cmp(&b)));
    let dup = order.windows(2).filter(|w| art.store().raw(w[0]) == art.store().raw(w[1])).map(|w| (w[0], w[1])).min();
    if let Some((a, b)) = dup {
        return Err(Stop::Violation(Violation { first: a.min(b), second: a.max(b), distance: 0 }));
    }
    ctx.certify("all", "distinct codewords", format!("{} sorted codewords", art.len()), None, 0);

    let mut straggler = vec![false; art.len()];
    let mut infos = Vec::new();
    let mut ranges: Vec<Range<usize>> = Vec::new();
    for comp in art.components() {
        if let ComponentKind::BlockLifted { blocks, .. } | ComponentKind::Product { blocks, .. } = &comp.kind {
            for r in block_ranges(blocks) {
                if !ranges.contains(&r) {
                    ranges.push(r);
                }
            }
        }
    }

    for comp in art.components() {
        let range = comp.range();
        if range.is_empty() {
            continue;
        }
        let scope = comp.label.clone();
        match &comp.kind {
            ComponentKind::Placeholder { .. } => unreachable!("refused earlier"),
            ComponentKind::Explicit => ctx.raw(&scope, range.clone(), range.clone(), "no structure recorded")?,
            ComponentKind::Lifted { pivot, code } => {
                lifted(ctx, &scope, range.clone(), pivot, code, &mut straggler)?;
            }
            ComponentKind::BlockLifted { blocks, lead, codes, .. } => {
                block_lifted(ctx, &scope, range.clone(), blocks, *lead, codes, &mut straggler)?;
            }
            ComponentKind::Product { blocks, dims, parts } => {
                product(ctx, &scope, range.clone(), blocks, dims, parts, &mut straggler)?;
            }
        }
        let mut pivots = HashSet::new();
        let mut digits = vec![0u8; k * n];
        let mut ok = true;
        for i in range.clone().filter(|&i| !straggler[i]) {
            art.store().get_into(i, &mut digits);
            match pivot_bits(&digits, k, n) {
                Some(p) => {
                    pivots.insert(p);
                }
                None => ok = false,
            }
            if pivots.len() > PIVOT_SET_CEILING {
                ok = false;
                break;
            }
        }
        infos.push(Info { label: comp.label.clone(), range, pivots: ok.then_some(pivots) });
    }

    // Meets with block vanishing spaces, per component and block, computed on demand.
    let mut meets: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut meet_range = |ci: usize, ri: usize, infos: &[Info], straggler: &[bool]| -> (usize, usize) {
        *meets.entry((ci, ri)).or_insert_with(|| {
            let mut digits = vec![0u8; k * n];
            let mut buf = Vec::new();
            let (mut lo, mut hi) = (usize::MAX, 0);
            for i in infos[ci].range.clone().filter(|&i| !straggler[i]) {
                art.store().get_into(i, &mut digits);
                let m = meet_vanishing(art.field(), &digits, k, n, &ranges[ri], &mut buf);
                lo = lo.min(m);
                hi = hi.max(m);
            }
            (lo, hi)
        })
    };

    let half = (ctx.target as usize).div_ceil(2);
    for a in 0..infos.len() {
        for b in a + 1..infos.len() {
            let scope = format!("{} x {}", infos[a].label, infos[b].label);
            if let (Some(pa), Some(pb)) = (&infos[a].pivots, &infos[b].pivots) {
                if (pa.len() as u64) * (pb.len() as u64) <= 1 << 24 {
                    let min = pa.iter().flat_map(|x| pb.iter().map(move |y| (x ^ y).count_ones())).min();
                    if let Some(m) = min.filter(|&m| m >= ctx.target) {
                        let detail = format!("{} x {} pivot vectors", pa.len(), pb.len());
                        ctx.certify(&scope, "pivot Hamming distance", detail, Some(m), 0);
                        continue;
                    }
                }
            }
            let mut done = false;
            for ri in 0..ranges.len() {
                let (alo, ahi) = meet_range(a, ri, &infos, &straggler);
                let (blo, bhi) = meet_range(b, ri, &infos, &straggler);
                if alo == usize::MAX || blo == usize::MAX {
                    // One side is all stragglers; the straggler pass covers it.
                    ctx.certify(&scope, "straggler checks", String::new(), None, 0);
                    done = true;
                    break;
                }
                let gap = (blo.saturating_sub(ahi)).max(alo.saturating_sub(bhi));
                if gap >= half {
                    let r = &ranges[ri];
                    let detail = format!(
                        "columns {}..{}: dim(U ∩ E) in [{alo}, {ahi}] vs [{blo}, {bhi}]",
                        r.start, r.end
                    );
                    ctx.certify(&scope, "block vanishing space", detail, Some(2 * gap as u32), 0);
                    done = true;
                    break;
                }
            }
            if !done {
                let (ra, rb) = (infos[a].range.clone(), infos[b].range.clone());
                ctx.raw(&scope, ra, rb, "no structural argument separates the components")?;
            }
        }
    }

    let strag: Vec<usize> = (0..art.len()).filter(|&i| straggler[i]).collect();
    ctx.stragglers = strag.clone();
    if !strag.is_empty() {
        for &s in &strag {
            ctx.raw("stragglers", s..s + 1, 0..art.len(), "codeword outside its component's structure")?;
        }
    }
    Ok(())
}

fn lifted(ctx: &mut Ctx, scope: &str, range: Range<usize>, pivot: &str, spec: &CodeSpec, straggler: &mut [bool]) -> Result<(), Stop> {
    let art = ctx.art;
    let (n, k) = (art.n(), art.k());
    let v: PivotVector = pivot.parse().map_err(|_| Stop::Refused(format!("{scope}: bad pivot {pivot}")))?;
    let (code, d, how) = code_distance(ctx.field(), spec).map_err(|e| Stop::Refused(format!("{scope}: {e}")))?;
    let solver = code.solver();
    let pos = v.positions();
    let free: Vec<usize> = (0..n).filter(|c| !pos.contains(c)).collect();
    let mut digits = vec![0u8; k * n];
    let mut frame = vec![0u8; k * free.len()];
    let mut outside = 0;
    for i in range.clone() {
        art.store().get_into(i, &mut digits);
        let same = pos.iter().enumerate().all(|(r, &p)| digits[r * n..r * n + p].iter().all(|&x| x == 0) && digits[r * n + p] == 1);
        for r in 0..k {
            for (f, &c) in free.iter().enumerate() {
                frame[r * free.len() + f] = digits[r * n + c];
            }
        }
        if !same || !solver.contains(&frame) {
            straggler[i] = true;
            outside += 1;
        }
    }
    if d.saturating_mul(2) < ctx.target {
        return ctx.raw(scope, range.clone(), range, "rank distance of the lifted code is too small");
    }
    let detail = format!("pivot {pivot}, minimum rank {d} ({how}), {outside} codewords outside the code");
    ctx.certify(scope, "lifted rank-metric code", detail, Some(d.saturating_mul(2)), 0);
    Ok(())
}

/// Splits a codeword into its lead block (in RREF) and the other blocks,
/// after normalizing so the lead block is in reduced echelon form.
fn split_lead(field: &Field, digits: &[u8], k: usize, n: usize, lead: &Range<usize>) -> Option<(Vec<u8>, Vec<u8>)> {
    let order: Vec<usize> = lead.clone().chain((0..n).filter(|c| !lead.contains(c))).collect();
    let mut m = Vec::with_capacity(k * n);
    for r in 0..k {
        m.extend(order.iter().map(|&c| digits[r * n + c]));
    }
    let (red, piv) = rref_data(field, k, n, &m);
    if piv.len() < k || piv.iter().any(|&p| p >= lead.len()) {
        return None;
    }
    let w = lead.len();
    let mut head = Vec::with_capacity(k * w);
    let mut rest = Vec::with_capacity(k * (n - w));
    for r in 0..k {
        head.extend_from_slice(&red[r * n..r * n + w]);
        rest.extend_from_slice(&red[r * n + w..(r + 1) * n]);
    }
    Some((head, rest))
}

fn block_lifted(
    ctx: &mut Ctx,
    scope: &str,
    range: Range<usize>,
    blocks: &[usize],
    lead: usize,
    codes: &[Option<CodeSpec>],
    straggler: &mut [bool],
) -> Result<(), Stop> {
    let art = ctx.art;
    let (n, k) = (art.n(), art.k());
    let br = block_ranges(blocks);
    if lead >= blocks.len() || codes.len() != blocks.len() || blocks.iter().sum::<usize>() != n {
        return Err(Stop::Refused(format!("{scope}: inconsistent block metadata")));
    }
    let mut built = Vec::new();
    let mut min_rank = u32::MAX;
    let mut hows = Vec::new();
    for (j, c) in codes.iter().enumerate() {
        if j == lead {
            built.push(None);
            continue;
        }
        let Some(spec) = c else { return Err(Stop::Refused(format!("{scope}: no code recorded for block {j}"))) };
        let (code, d, how) = code_distance(ctx.field(), spec).map_err(|e| Stop::Refused(format!("{scope}: {e}")))?;
        if code.rows() != k || code.cols() != blocks[j] {
            return Err(Stop::Refused(format!("{scope}: code for block {j} has the wrong shape")));
        }
        min_rank = min_rank.min(d);
        hows.push(how);
        built.push(Some(code.solver()));
    }
    // Columns of each non-lead block inside the normalized remainder.
    let mut offsets = Vec::new();
    let mut at = 0;
    for (j, r) in br.iter().enumerate() {
        if j != lead {
            offsets.push((j, at, r.len()));
            at += r.len();
        }
    }
    let rest_w = n - blocks[lead];
    let mut heads: HashSet<Vec<u8>> = HashSet::new();
    let mut digits = vec![0u8; k * n];
    let mut outside = 0;
    let mut block = Vec::new();
    for i in range.clone() {
        art.store().get_into(i, &mut digits);
        let ok = match split_lead(ctx.field(), &digits, k, n, &br[lead]) {
            None => false,
            Some((head, rest)) => {
                let member = offsets.iter().all(|&(j, off, w)| {
                    block.clear();
                    for r in 0..k {
                        block.extend_from_slice(&rest[r * rest_w + off..r * rest_w + off + w]);
                    }
                    built[j].as_ref().expect("code for non-lead block").contains(&block)
                });
                if member {
                    heads.insert(head);
                }
                member
            }
        };
        if !ok {
            straggler[i] = true;
            outside += 1;
        }
    }
    let heads: Vec<Vec<u8>> = heads.into_iter().collect();
    let head_min = set_min(ctx.field(), &heads, k, blocks[lead]);
    if min_rank.saturating_mul(2) < ctx.target || head_min.is_some_and(|m| m < ctx.target) {
        return ctx.raw(scope, range.clone(), range, "block codes or lead projections are too close");
    }
    let bound = head_min.map_or(min_rank.saturating_mul(2), |m| m.min(min_rank.saturating_mul(2)));
    let detail = format!(
        "lead block {lead}: {} distinct lead projections (min distance {}), other blocks in codes of minimum rank {min_rank} ({}), {outside} codewords outside",
        heads.len(),
        head_min.map_or("none".to_string(), |m| m.to_string()),
        hows.join(", ")
    );
    ctx.certify(scope, "block lifting", detail, Some(bound), 0);
    Ok(())
}

fn product(
    ctx: &mut Ctx,
    scope: &str,
    range: Range<usize>,
    blocks: &[usize],
    dims: &[usize],
    parts: &[usize],
    straggler: &mut [bool],
) -> Result<(), Stop> {
    let art = ctx.art;
    let (n, k) = (art.n(), art.k());
    let field = ctx.field().clone();
    if blocks.len() != dims.len() || blocks.iter().sum::<usize>() != n || dims.iter().sum::<usize>() != k {
        return Err(Stop::Refused(format!("{scope}: inconsistent block metadata")));
    }
    let parts: Vec<usize> = if parts.iter().sum::<usize>() == range.len() { parts.to_vec() } else { vec![range.len()] };
    let br = block_ranges(blocks);
    // sets[p][i]: distinct block-i summands in part p.
    let mut sets: Vec<Vec<Vec<Vec<u8>>>> = Vec::new();
    let mut part_ranges = Vec::new();
    let mut digits = vec![0u8; k * n];
    let mut outside = 0;
    let mut start = range.start;
    let mut sub = Vec::new();
    for &len in &parts {
        let pr = start..start + len;
        start += len;
        let mut seen: Vec<HashSet<Vec<u8>>> = vec![HashSet::new(); blocks.len()];
        for i in pr.clone() {
            art.store().get_into(i, &mut digits);
            // U is the direct sum of its block meets exactly when the
            // projection onto block i has rank dims[i] for every i.
            let mut summands = Vec::with_capacity(blocks.len());
            for (b, r) in br.iter().enumerate() {
                sub.clear();
                for row in 0..k {
                    sub.extend_from_slice(&digits[row * n + r.start..row * n + r.end]);
                }
                let (red, piv) = rref_data(&field, k, r.len(), &sub);
                if piv.len() != dims[b] {
                    break;
                }
                summands.push(red[..dims[b] * r.len()].to_vec());
            }
            if summands.len() != blocks.len() {
                straggler[i] = true;
                outside += 1;
                continue;
            }
            for (b, s) in summands.into_iter().enumerate() {
                seen[b].insert(s);
            }
        }
        sets.push(seen.into_iter().map(|s| s.into_iter().collect()).collect());
        part_ranges.push(pr);
    }
    let mut within = u32::MAX;
    for p in &sets {
        for (b, s) in p.iter().enumerate() {
            if let Some(m) = set_min(&field, s, dims[b], blocks[b]) {
                within = within.min(m);
            }
        }
    }
    let mut raw_parts = Vec::new();
    let mut across = u32::MAX;
    for p in 0..sets.len() {
        for p2 in p + 1..sets.len() {
            let sum: u32 = (0..blocks.len()).map(|b| cross_min(&field, &sets[p][b], &sets[p2][b], dims[b], blocks[b])).sum();
            if sum < ctx.target {
                raw_parts.push((p, p2));
            } else {
                across = across.min(sum);
            }
        }
    }
    if within < ctx.target {
        return ctx.raw(scope, range.clone(), range, "summands within a part are too close");
    }
    for (p, p2) in raw_parts {
        let s = format!("{scope} parts {p} x {p2}");
        ctx.raw(&s, part_ranges[p].clone(), part_ranges[p2].clone(), "summand distances do not add up to the target")?;
    }
    let bound = within.min(across);
    let detail = format!("{} parts over blocks {blocks:?} with dims {dims:?}, {outside} codewords not a direct sum", parts.len());
    ctx.certify(scope, "direct sum", detail, (bound != u32::MAX).then_some(bound), 0);
    Ok(())
}
