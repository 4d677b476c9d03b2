//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;

use subcodes::bounds::{
    anticode_bound, count_split_subspaces, eq_upper_abar, eq_upper_sum, ilp_pivot_bound, johnson, AnticodeValue, IlpOptions,
};
use subcodes::construct::{
    all_ferrers_scheme, assemble_named, construction1_poly, coset_packing, coset_packing_construct, eq663_packing,
    greedy_partition, registry_int, registry_lookup, skeleton_11_4_4, skeleton_15_4_4, skeleton_total, table2_scheme,
    BoundKind, CodeArtifact, NamedOptions, QSpec,
};
use subcodes::gf::Field;
use subcodes::rankmetric::{fdrm_upper_bound, gabidulin_code, mrd_rank_distribution, mrd_size};
use subcodes::skeleton::validate_skeleton;
use subcodes::subspace::{enumerate_subspaces, gauss_big, gaussian_binomial_poly, PivotVector};
use subcodes::PolyQ;
use subcodes::verify::{verify_exhaustive, verify_hierarchical, verify_sampled, Verdict, VerifyOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u32) -> Field {
    Field::of_order(q).unwrap()
}

fn emit() -> NamedOptions {
    NamedOptions { emit: true, ..NamedOptions::default() }
}

fn c1_gaussian() -> Outcome {
    let v = gauss_big(5, 2, 2);
    ensure(v == BigInt::from(155), || format!("gauss(5,2)_2 = {v}"))?;
    let p = gaussian_binomial_poly(5, 2);
    ensure(p.to_string() == "q^6+q^5+2q^4+2q^3+2q^2+q+1", || format!("polynomial {p}"))?;
    for q in 2..=9u64 {
        ensure(p.eval_u64(q) == gauss_big(5, 2, q), || format!("polynomial disagrees at q={q}"))?;
    }
    Ok(format!("155, {p}"))
}

fn c2_fdrm_exponent() -> Outcome {
    let v: PivotVector = "101101000".parse().unwrap();
    let e = fdrm_upper_bound(&v.ferrers(), 6).map_err(|e| e.to_string())?;
    ensure(e == 7, || format!("exponent {e}"))?;
    Ok("A_2(9,6;4;101101000) <= 2^7".into())
}

fn c3_rank_distributions() -> Outcome {
    let mut tuples = 0;
    let mut words: u64 = 0;
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = field(q);
        for m in 1..=20usize {
            for n in 1..=20usize {
                for d in 1..=m.min(n) {
                    let size = mrd_size(q as u64, m as u32, n as u32, d as u32).unwrap();
                    if size > BigInt::from(1u64 << 20) {
                        continue;
                    }
                    let g = gabidulin_code(&f, m, n, d).map_err(|e| format!("q={q} {m}x{n} d={d}: {e}"))?;
                    ensure(g.size() == size, || format!("q={q} {m}x{n} d={d}: size {}", g.size()))?;
                    let hist = g.rank_histogram().map_err(|e| e.to_string())?;
                    for (r, &count) in hist.iter().enumerate() {
                        let formula = if r == 0 {
                            BigInt::from(1)
                        } else {
                            mrd_rank_distribution(q as u64, m as u32, n as u32, d as u32, r as u32).unwrap()
                        };
                        ensure(formula == BigInt::from(count), || {
                            format!("q={q} {m}x{n} d={d} rank {r}: formula {formula}, code {count}")
                        })?;
                    }
                    tuples += 1;
                    words += hist.iter().sum::<u64>();
                }
            }
        }
    }
    let a = mrd_rank_distribution(2, 3, 4, 3, 3).unwrap();
    ensure(a == BigInt::from(15), || format!("a(2,3,4,3,3) = {a}"))?;
    let hist = gabidulin_code(&field(2), 3, 4, 3).unwrap().rank_histogram().unwrap();
    ensure(hist == [1, 0, 0, 15], || format!("(3x4,3)_2 histogram {hist:?}"))?;
    Ok(format!("{tuples} parameter sets, {words} codewords enumerated; 0^1 3^15 for (3x4,3)_2"))
}

fn c4_a_10_4_5(art: &CodeArtifact) -> Outcome {
    let lifted: usize = art.components().iter().filter(|c| c.label.starts_with('C')).map(|c| c.range().len()).sum();
    ensure(lifted == 1_178_312, || format!("construction1 part has {lifted} codewords"))?;
    let poly = construction1_poly(&[5, 5], 5, 4).map_err(|e| e.to_string())?;
    ensure(poly.eval_u64(2) == BigInt::from(1_178_312), || format!("construction1 polynomial {poly} at 2"))?;
    ensure(art.len() == 1_179_625 && art.size() == BigInt::from(1_179_625), || format!("total {}", art.len()))?;
    let rep = verify_hierarchical(art, 4, &VerifyOptions::default());
    ensure(rep.verdict == Verdict::Certified && rep.min_distance == Some(4), || format!("hierarchical: {}", rep.to_json()))?;
    let lifted_raw: u64 = rep.certificates.iter().filter(|c| c.scope.starts_with('C')).map(|c| c.raw_pairs).sum();
    ensure(lifted_raw == 0, || format!("{lifted_raw} raw pairs among lifted-MRD words"))?;
    let s = verify_sampled(art, 4, 1_000_000, 0);
    ensure(s.passed() && s.pairs_checked == 1_000_000, || format!("sampled: {}", s.to_json()))?;
    Ok(format!(
        "1178312 + {} = 1179625, certified d=4 with {} raw pairs, 10^6 sampled pairs min {}",
        art.len() - lifted,
        rep.pairs_checked,
        s.min_distance.map_or("none".into(), |d| d.to_string())
    ))
}

fn c5_small_codes(a643: &CodeArtifact, a844: &CodeArtifact) -> Outcome {
    let p = |s: &str| s.parse::<PolyQ>().unwrap();
    // q^12 + q^2 (q^2+1)^2 (q^2+q+1) + 1
    let target = &p("q^12+1") + &(&(&p("q^2") * &p("q^2+1").pow(2)) * &p("q^2+q+1"));
    let want = target.eval_u64(2);
    ensure(want == BigInt::from(4797), || format!("size polynomial gives {want}"))?;
    let mut out = Vec::new();
    for (art, size) in [(a643, 71usize), (a844, 4797)] {
        ensure(art.len() == size, || format!("built {} codewords, expected {size}", art.len()))?;
        let rep = verify_exhaustive(art, 4, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        ensure(rep.passed() && rep.min_distance == Some(4), || format!("exhaustive: {}", rep.to_json()))?;
        out.push(format!("{size} words min distance 4 over {} pairs", rep.pairs_checked));
    }
    Ok(out.join("; "))
}

fn c6_greedy_partition() -> Outcome {
    let f = field(2);
    let spread = registry_int(5, 4, 2, 2).map_err(|e| e.to_string())?;
    let cap_part: usize = spread.try_into().unwrap();
    let lines = 155usize;
    let hard_cap = (lines / cap_part * cap_part * cap_part + (lines % cap_part).pow(2)) as u64;
    ensure(hard_cap == 1381, || format!("cap {hard_cap}"))?;
    let mut restarts = 16;
    loop {
        let p = greedy_partition(&f, 5, 2, 4, 0, restarts).map_err(|e| e.to_string())?;
        let all: Vec<_> = p.parts.iter().flatten().collect();
        let distinct: HashSet<_> = all.iter().map(|s| s.digits().to_vec()).collect();
        ensure(all.len() == lines && distinct.len() == lines, || format!("{} words, {} distinct", all.len(), distinct.len()))?;
        ensure(all.iter().all(|s| s.k() == 2 && s.n() == 5), || "a part holds a non-line".into())?;
        ensure(p.check_distances(), || "a part is not a partial spread".into())?;
        ensure(p.sizes().iter().all(|&s| s <= cap_part), || format!("sizes {:?}", p.sizes()))?;
        let sq = p.sum_squares();
        ensure(sq <= hard_cap, || format!("sum of squares {sq} above the cap"))?;
        if sq >= 1313 {
            return Ok(format!("{restarts} restarts: {p}, cap {hard_cap}"));
        }
        if restarts >= 10_000 {
            return Err(format!("best sum of squares {sq} after 10^4 restarts"));
        }
        restarts = (restarts * 4).min(10_000);
    }
}

fn c7_coset_packing() -> Outcome {
    let t2 = table2_scheme();
    let sym = coset_packing(&t2, QSpec::Symbolic).map_err(|e| e.to_string())?;
    let poly = sym.as_poly().map(ToString::to_string).unwrap_or_default();
    ensure(poly == "q^9+q^7+q^6+7q^5+5q^4+3q^3+2q^2+q+1", || format!("table 2 total {poly}"))?;
    ensure(sym.at(2) == BigInt::from(1043), || format!("table 2 at q=2: {}", sym.at(2)))?;
    let af = all_ferrers_scheme(5, 2).map_err(|e| e.to_string())?;
    let af2 = coset_packing(&af, QSpec::Numeric(2)).map_err(|e| e.to_string())?.at(2);
    ensure(af2 == BigInt::from(771), || format!("all diagrams at q=2: {af2}"))?;
    let (e663, _) = eq663_packing(None).map_err(|e| e.to_string())?;
    let e663s = e663.as_poly().map(ToString::to_string).unwrap_or_default();
    ensure(e663s == "q^9+2q^3+1", || format!("(6,6,3) packing {e663s}"))?;
    let mut counted = Vec::new();
    for q in [2u32, 3] {
        let f = field(q);
        let qq = q as u64;
        for (name, scheme) in [("table2", &t2), ("all-diagrams", &af)] {
            let (art, _) = coset_packing_construct(&f, scheme, false).map_err(|e| e.to_string())?;
            let want = coset_packing(scheme, QSpec::Symbolic).unwrap().at(qq);
            ensure(BigInt::from(art.len()) == want, || format!("{name} q={q}: built {} vs {want}", art.len()))?;
            if q == 2 {
                let rep = verify_exhaustive(&art, scheme.d, &VerifyOptions::default()).map_err(|e| e.to_string())?;
                ensure(rep.passed(), || format!("{name} code fails: {}", rep.to_json()))?;
            }
            counted.push(format!("{name}@{q}={}", art.len()));
        }
        let (_, art) = eq663_packing(Some(&f)).map_err(|e| e.to_string())?;
        let art = art.ok_or("no (6,6,3) code")?;
        let want = e663.at(qq);
        ensure(BigInt::from(art.len()) == want, || format!("(6,6,3) q={q}: built {} vs {want}", art.len()))?;
        counted.push(format!("eq663@{q}={}", art.len()));
    }
    Ok(format!("1043, 771, q^9+2q^3+1; counted {}", counted.join(" ")))
}

fn c8_skeletons() -> Outcome {
    let s11 = skeleton_11_4_4();
    let s15 = skeleton_15_4_4();
    ensure(s11.vertices.len() == 20 && s15.vertices.len() == 86, || "vertex counts".into())?;
    for s in [&s11, &s15] {
        let r = validate_skeleton(s).map_err(|e| e.to_string())?;
        ensure(r.valid && r.min_distance >= Some(4), || format!("(n={}) skeleton invalid: {r:?}", s.n))?;
    }
    let checks = [(&s11, 2u64, 2_383_085u64), (&s11, 3, 10_639_658_703), (&s15, 2, 10_073_483_885)];
    for (s, q, want) in checks {
        let got = skeleton_total(s, q).map_err(|e| e.to_string())?;
        ensure(got == BigInt::from(want), || format!("n={} q={q}: {got}", s.n))?;
    }
    for (name, q, want) in [("A(11,4;4)", 2u64, 2_383_085u64), ("A(11,4;4)", 3, 10_639_658_703), ("A(15,4;4)", 2, 10_073_483_885)] {
        let out = assemble_named(name, QSpec::Numeric(q), &NamedOptions::default()).map_err(|e| e.to_string())?;
        ensure(out.bound.at(q) == BigInt::from(want), || format!("{name} q={q} reports {}", out.bound.at(q)))?;
    }
    Ok("both skeletons valid at distance 4; 2383085, 10639658703, 10073483885".into())
}

fn c9_upper_bounds() -> Outcome {
    let anticode = match anticode_bound(6, 4, 3, QSpec::Numeric(2)).map_err(|e| e.to_string())? {
        AnticodeValue::Int(v) => v,
        AnticodeValue::Ratio(_) => return Err("numeric anticode came back symbolic".into()),
    };
    ensure(anticode == BigInt::from(93), || format!("anticode {anticode}"))?;
    let j = johnson(6, 4, 3, 2).map_err(|e| e.to_string())?.at(2);
    ensure(j == BigInt::from(81), || format!("johnson {j}"))?;
    let (ilp, out) = ilp_pivot_bound(None, 6, 4, 3, 2, &IlpOptions::default()).map_err(|e| e.to_string())?;
    let ilp = ilp.at(2);
    // Sandwiched between the known code and both the LP relaxation and the anticode bound.
    let lp = out.lp_value.floor().to_integer();
    ensure(BigInt::from(77) <= ilp && ilp <= anticode && ilp <= lp, || format!("ilp {ilp}, lp {lp}"))?;
    ensure(out.certified, || "LP optimum lacks a dual certificate".into())?;
    let e1 = eq_upper_abar(&[6, 6], &[2, 4], &[1, 4], 4, 2).map_err(|e| e.to_string())?.at(2);
    let e2 = eq_upper_abar(&[6, 6], &[3, 3], &[2, 3], 4, 2).map_err(|e| e.to_string())?.at(2);
    let (sum, _) = eq_upper_sum(&[6, 6], 4, 6, 2).map_err(|e| e.to_string())?;
    ensure((e1.clone(), e2.clone(), sum.clone()) == (13671.into(), 129735.into(), 157077.into()), || format!("{e1} {e2} {sum}"))?;

    // Registry lower bounds never exceed the computed upper bounds.
    for (n, d, k) in [(6, 4, 3), (7, 4, 3), (8, 4, 4), (8, 4, 3)] {
        let lower = registry_lookup(n, d, k, QSpec::Numeric(2)).map_err(|e| e.to_string())?;
        let lo = lower.at(2);
        let (ib, _) = ilp_pivot_bound(None, n, d, k, 2, &IlpOptions::default()).map_err(|e| e.to_string())?;
        let jb = johnson(n, d, k, 2).map_err(|e| e.to_string())?.at(2);
        let ab = match anticode_bound(n, d, k, QSpec::Numeric(2)).map_err(|e| e.to_string())? {
            AnticodeValue::Int(v) => v,
            AnticodeValue::Ratio(_) => unreachable!(),
        };
        let least = ib.at(2).min(jb).min(ab);
        ensure(lower.kind != BoundKind::Upper && lo <= least, || format!("({n},{d},{k}): registry {lo} vs upper {least}"))?;
    }

    let mut tuples = 0;
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = field(q);
        for total in 1..=16usize {
            for t in 0..=total {
                if gauss_big(total as u32, t as u32, q as u64) > BigInt::from(100_000) {
                    continue;
                }
                let all = enumerate_subspaces(&f, total, t, None).map_err(|e| e.to_string())?;
                for n1 in 1..total {
                    let n2 = total - n1;
                    let mut counts = std::collections::HashMap::new();
                    for s in &all {
                        *counts.entry((s.dim_meet_coordinates(0..n1), s.dim_meet_coordinates(n1..total))).or_insert(0u64) += 1;
                    }
                    for c1 in 0..=t {
                        for c2 in 0..=t - c1 {
                            let formula = count_split_subspaces(n1, n2, t, c1, c2, q as u64);
                            let brute = counts.get(&(c1, c2)).copied().unwrap_or(0);
                            ensure(formula == BigInt::from(brute), || {
                                format!("split count q={q} ({n1},{n2}) t={t} c=({c1},{c2}): {formula} vs {brute}")
                            })?;
                        }
                    }
                    tuples += 1;
                }
            }
        }
    }
    Ok(format!("93, 81, ilp {ilp} (lp {lp}), 13671, 129735, 157077; split counts agree on {tuples} tuples"))
}

fn c10_properties() -> Outcome {
    let mut done = Vec::new();
    for (name, run) in common::SUITES {
        run().map_err(|e| format!("{name}: {e}"))?;
        done.push(*name);
    }
    Ok(format!("{} suites, 10^4 cases each, no violations", done.len()))
}

fn main() {
    let start = Instant::now();
    let build = |name: &str| assemble_named(name, QSpec::Numeric(2), &emit()).ok().and_then(|o| o.artifact);
    let a1045 = build("A(10,4;5)");
    let a643 = build("A(6,4;3)");
    let a844 = build("A(8,4;4)");
    let missing = || Err::<String, _>("construction failed".to_string());
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(c1_gaussian)),
        (2, Box::new(c2_fdrm_exponent)),
        (3, Box::new(c3_rank_distributions)),
        (4, Box::new(|| a1045.as_ref().map_or_else(missing, c4_a_10_4_5))),
        (5, Box::new(|| match (&a643, &a844) {
            (Some(a), Some(b)) => c5_small_codes(a, b),
            _ => missing(),
        })),
        (6, Box::new(c6_greedy_partition)),
        (7, Box::new(c7_coset_packing)),
        (8, Box::new(c8_skeletons)),
        (9, Box::new(c9_upper_bounds)),
        (10, Box::new(c10_properties)),
    ];
    let mut failed = Vec::new();
    for (id, check) in &criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id}: PASS ({secs:.1}s) {detail}"),
            Err(why) => {
                println!("criterion {id}: FAIL ({secs:.1}s) {why}");
                failed.push(*id);
            }
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
