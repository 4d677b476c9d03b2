use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subcodes::bounds::{anticode_bound, ilp_pivot_bound, johnson, AnticodeValue, IlpOptions};
use subcodes::codefile::{read_code, write_code};
use subcodes::construct::{
    all_ferrers_scheme, assemble_named, coset_packing, greedy_partition, linkage_bound, multilevel_named, registry_lookup,
    table1, table2_scheme, BoundKind, NamedOptions, QSpec,
};
use subcodes::gf::Field;
use subcodes::rankmetric::{gabidulin_code, mrd_rank_distribution};
use subcodes::skeleton::{clique_search, ef_weight, parse_skeleton_json, skeleton_to_json, SkeletonVertex, WeightMode};
use subcodes::subspace::pivots_descending;
use subcodes::verify::{verify_exhaustive, verify_hierarchical, verify_sampled, VerifyOptions};

#[derive(Parser)]
#[command(name = "cdc", version, about = "Constant dimension subspace codes: bounds, constructions and verification")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for pair checks.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Anticode,
    Johnson,
    Ilp,
    Linkage,
    Registry,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Hierarchical,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Upper,
    Constructive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Table1,
    Table2,
    #[value(name = "all-ferrers")]
    AllFerrers,
    #[value(name = "mrd-distributions")]
    MrdDistributions,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds on A_q(n, d; k) as JSON.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "symbolic")]
        q: Option<u64>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        /// Length of the second summand for linkage (best over all when absent).
        #[arg(long)]
        delta: Option<usize>,
        /// Improved linkage second summand.
        #[arg(long)]
        improve: bool,
        /// Solve only the LP relaxation.
        #[arg(long)]
        relax: bool,
        /// Add per-pivot diagram rows to the ILP.
        #[arg(long)]
        cuts: bool,
        #[arg(long, default_value_t = 500)]
        node_budget: usize,
    },
    /// Runs a named construction, optionally writing the code file.
    Construct {
        /// A(10,4;5), A(11,4;4), A(12,6;6), A(15,4;4), A(8,4;4), A(6,4;3) or multilevel.
        #[arg(long)]
        name: String,
        #[arg(long, conflicts_with = "symbolic")]
        q: Option<u64>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skeleton JSON for `multilevel`.
        #[arg(long)]
        skeleton: Option<PathBuf>,
        /// Ambient dimension for `multilevel`, checked against the skeleton.
        #[arg(long)]
        n: Option<usize>,
        /// Codeword dimension for `multilevel`.
        #[arg(long)]
        k: Option<usize>,
        /// Subspace distance for `multilevel`.
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        /// Use the best partition found instead of the reported one.
        #[arg(long)]
        improve: bool,
    },
    /// Verifies the minimum distance of a code file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Target distance (defaults to the header value).
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_enum, default_value = "hierarchical")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        pairs: u64,
    },
    /// Maximum weight skeleton of single pivot vectors by clique search.
    Skeleton {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, value_enum, default_value = "upper")]
        weights: Weights,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Greedy partition of the a1-subspaces of F_q^n1 into codes of distance dprime.
    Pack {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        a1: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        dprime: u32,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Tables as CSV.
    Table {
        #[arg(long, value_enum)]
        name: Table,
    },
}

fn qspec(q: Option<u64>, symbolic: bool) -> QSpec {
    if symbolic {
        QSpec::Symbolic
    } else {
        QSpec::Numeric(q.unwrap_or(2))
    }
}

fn report(b: &subcodes::construct::BoundValue, method: &str, q: QSpec) -> Value {
    serde_json::to_value(b.report(method, q)).expect("bound report")
}

#[allow(clippy::too_many_arguments)]
fn bound_cmd(n: usize, d: usize, k: usize, q: QSpec, method: Method, delta: Option<usize>, improve: bool, ilp: IlpOptions) -> Result<Value> {
    let all = matches!(method, Method::All);
    let mut bounds = Vec::new();
    let mut skipped = Vec::new();
    let mut note = |m: &str, e: String| skipped.push(json!({"method": m, "reason": e}));
    if all || matches!(method, Method::Registry) {
        match registry_lookup(n, d, k, q) {
            Ok(b) => bounds.push(report(&b, "registry", q)),
            Err(e) if all => note("registry", e.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    if all || matches!(method, Method::Anticode) {
        match anticode_bound(n, d, k, q) {
            Ok(AnticodeValue::Int(v)) => bounds.push(json!({
                "name": "anticode", "kind": BoundKind::Upper, "value": v.to_string(),
                "provenance": "anticode bound", "constructive": false, "q": q_json(q),
            })),
            Ok(AnticodeValue::Ratio(r)) => bounds.push(json!({
                "name": "anticode", "kind": BoundKind::Upper, "value": format!("floor(({}) / ({}))", r.num, r.den),
                "provenance": "anticode bound", "constructive": false, "q": q_json(q),
            })),
            Err(e) if all => note("anticode", e.to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    let numeric = match q {
        QSpec::Numeric(v) => Some(v),
        QSpec::Symbolic => None,
    };
    if all || matches!(method, Method::Johnson) {
        match numeric.map(|v| johnson(n, d, k, v)) {
            Some(Ok(b)) => bounds.push(report(&b, "johnson", q)),
            Some(Err(e)) if !all => return Err(e.into()),
            Some(Err(e)) => note("johnson", e.to_string()),
            None if !all => bail!("the Johnson bound needs a numeric q"),
            None => note("johnson", "needs a numeric q".into()),
        }
    }
    if all || matches!(method, Method::Ilp) {
        match numeric.map(|v| ilp_pivot_bound(None, n, d, k, v, &ilp)) {
            Some(Ok((b, out))) => {
                let mut r = report(&b, "ilp", q);
                r["optimal"] = json!(out.optimal);
                r["certified"] = json!(out.certified);
                r["lp_value"] = json!(out.lp_value.to_string());
                r["nodes"] = json!(out.nodes);
                bounds.push(r);
            }
            Some(Err(e)) if !all => return Err(e.into()),
            Some(Err(e)) => note("ilp", e.to_string()),
            None if !all => bail!("the ILP needs a numeric q"),
            None => note("ilp", "needs a numeric q".into()),
        }
    }
    if all || matches!(method, Method::Linkage) {
        let deltas: Vec<usize> = match delta {
            Some(x) => vec![x],
            None => (1..n).collect(),
        };
        let mut best: Option<(usize, subcodes::construct::BoundValue)> = None;
        let mut last_err = None;
        for x in deltas {
            match linkage_bound(n, d, k, x, q, improve) {
                Ok(b) => {
                    let better = best.as_ref().is_none_or(|(_, c)| b.at(numeric.unwrap_or(2)) > c.at(numeric.unwrap_or(2)));
                    if better {
                        best = Some((x, b));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        match (best, last_err) {
            (Some((x, b)), _) => {
                let mut r = report(&b, "linkage", q);
                r["delta"] = json!(x);
                bounds.push(r);
            }
            (None, Some(e)) if !all => return Err(e.into()),
            (None, e) => note("linkage", e.map_or("no admissible delta".into(), |e| e.to_string())),
        }
    }
    Ok(json!({"n": n, "d": d, "k": k, "q": q_json(q), "bounds": bounds, "skipped": skipped}))
}

fn q_json(q: QSpec) -> Value {
    match q {
        QSpec::Numeric(v) => json!(v),
        QSpec::Symbolic => json!("symbolic"),
    }
}

#[allow(clippy::too_many_arguments)]
fn construct_cmd(
    name: &str,
    q: QSpec,
    out: Option<PathBuf>,
    skeleton: Option<PathBuf>,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<u32>,
    opts: NamedOptions,
) -> Result<Value> {
    let outcome = if name.eq_ignore_ascii_case("multilevel") {
        let path = skeleton.ok_or_else(|| anyhow!("multilevel needs --skeleton"))?;
        let (k, d) = (k.ok_or_else(|| anyhow!("multilevel needs --k"))?, d.ok_or_else(|| anyhow!("multilevel needs --d"))?);
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let s = parse_skeleton_json(&text, k, d)?;
        if let Some(n) = n.filter(|&n| n != s.n) {
            bail!("skeleton has length {}, not {n}", s.n);
        }
        multilevel_named("multilevel", s, q, &opts)?
    } else {
        if skeleton.is_some() {
            bail!("--skeleton only applies to multilevel");
        }
        assemble_named(name, q, &opts)?
    };
    let mut rep = json!({
        "name": outcome.name,
        "q": q_json(q),
        "bound": serde_json::to_value(outcome.bound.report(&outcome.name, q))?,
        "notes": outcome.notes,
    });
    if let Some(p) = &outcome.partition {
        rep["partition"] = json!(p.to_string());
    }
    if let Some(art) = &outcome.artifact {
        rep["size"] = json!(art.size().to_string());
        rep["emitted"] = json!(art.len());
        rep["constructive"] = json!(art.is_constructive());
        if let Some(path) = &out {
            write_code(path, art).with_context(|| format!("writing {}", path.display()))?;
            rep["out"] = json!(path.display().to_string());
        }
    } else if out.is_some() {
        bail!("{} has no constructive pipeline for these parameters", outcome.name);
    }
    Ok(rep)
}

fn verify_cmd(input: &Path, d: Option<u32>, mode: Mode, pairs: u64, seed: u64, threads: usize) -> Result<(Value, bool)> {
    let art = read_code(input).with_context(|| format!("reading {}", input.display()))?;
    let target = d.unwrap_or_else(|| art.declared_distance());
    let opts = VerifyOptions { threads, ..Default::default() };
    let rep = match mode {
        Mode::Exhaustive => verify_exhaustive(&art, target, &opts)?,
        Mode::Hierarchical => verify_hierarchical(&art, target, &opts),
        Mode::Sampled => verify_sampled(&art, target, pairs, seed),
    };
    Ok((serde_json::to_value(&rep)?, rep.passed()))
}

fn skeleton_cmd(n: usize, d: u32, k: usize, q: u32, weights: Weights, budget: u64) -> Result<Value> {
    let field = Field::of_order(q)?;
    let mode = match weights {
        Weights::Upper => WeightMode::Upper,
        Weights::Constructive => WeightMode::Constructive,
    };
    let vertices: Vec<SkeletonVertex> =
        pivots_descending(n, k).into_iter().map(|v| SkeletonVertex::vector(v).with_weight(ef_weight(&v, &field, d as usize, mode))).collect();
    let res = clique_search(&vertices, n, k, d, q as u64, budget)?;
    let skel: Value = serde_json::from_str(&skeleton_to_json(&res.skeleton))?;
    Ok(json!({
        "n": n, "d": d, "k": k, "q": q,
        "weights": match weights { Weights::Upper => "upper", Weights::Constructive => "constructive" },
        "value": res.weight.to_string(),
        "optimal": res.optimal,
        "nodes": res.nodes,
        "skeleton": skel,
    }))
}

fn pack_cmd(n1: usize, a1: usize, q: u32, dprime: u32, restarts: usize, seed: u64) -> Result<Value> {
    let field = Field::of_order(q)?;
    let p = greedy_partition(&field, n1, a1, dprime, seed, restarts.max(1))?;
    let multiset: serde_json::Map<String, Value> = p.multiset().iter().rev().map(|(s, c)| (s.to_string(), json!(c))).collect();
    Ok(json!({
        "n1": n1, "a1": a1, "q": q, "dprime": dprime,
        "total": p.total(),
        "parts": p.parts.len(),
        "sum_squares": p.sum_squares(),
        "sizes": p.sizes(),
        "multiset": multiset,
        "restart": p.restart,
        "valid": p.check_distances(),
    }))
}

fn table_cmd(t: Table) -> Result<String> {
    let mut out = String::new();
    match t {
        Table::Table1 => {
            out.push_str("pivot,size,cosets\n");
            for r in table1(5, 2)? {
                writeln!(out, "{},{},{}", r.pivot, r.size, r.cosets)?;
            }
        }
        Table::Table2 | Table::AllFerrers => {
            let s = if matches!(t, Table::Table2) { table2_scheme() } else { all_ferrers_scheme(5, 2)? };
            out.push_str("skeleton,size,cosets_used\n");
            for r in &s.rows {
                let sk: Vec<String> = r.skeleton.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{},{},{}", sk.join(" "), r.size, r.used)?;
            }
            let total = coset_packing(&s, QSpec::Symbolic)?;
            writeln!(out, "total,{},", total.value)?;
        }
        Table::MrdDistributions => {
            out.push_str("source,q,m,n,d,distribution,multiplicity\n");
            for q in [2u64, 3] {
                for m in 1..=4u32 {
                    for n in m..=4u32 {
                        for d in 1..=m {
                            let mut parts = vec!["0^1".to_string()];
                            for r in d..=m {
                                let c = mrd_rank_distribution(q, m, n, d, r)?;
                                if c > 0.into() {
                                    parts.push(format!("{r}^{c}"));
                                }
                            }
                            writeln!(out, "formula,{q},{m},{n},{d},{},1", parts.join(" "))?;
                        }
                    }
                }
            }
            let g = gabidulin_code(&Field::of_order(2)?, 3, 4, 3)?;
            for (hist, count) in g.coset_rank_distributions()? {
                let parts: Vec<String> = hist.iter().enumerate().filter(|(_, c)| **c > 0).map(|(r, c)| format!("{r}^{c}")).collect();
                writeln!(out, "cosets,2,3,4,3,{},{count}", parts.join(" "))?;
            }
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    let print = |v: &Value| println!("{}", serde_json::to_string_pretty(v).expect("json"));
    match cli.command {
        Command::Bound { n, d, k, q, symbolic, method, delta, improve, relax, cuts, node_budget } => {
            let ilp = IlpOptions { relax, cuts, node_budget };
            print(&bound_cmd(n, d, k, qspec(q, symbolic), method, delta, improve, ilp)?);
        }
        Command::Construct { name, q, symbolic, out, skeleton, n, k, d, restarts, improve } => {
            let opts = NamedOptions { seed: cli.seed, restarts, improve, emit: out.is_some() };
            print(&construct_cmd(&name, qspec(q, symbolic), out, skeleton, n, k, d, opts)?);
        }
        Command::Verify { input, d, mode, pairs } => {
            let (v, ok) = verify_cmd(&input, d, mode, pairs, cli.seed, cli.threads)?;
            print(&v);
            return Ok(ok);
        }
        Command::Skeleton { n, d, k, q, weights, budget } => print(&skeleton_cmd(n, d, k, q, weights, budget)?),
        Command::Pack { n1, a1, q, dprime, restarts } => print(&pack_cmd(n1, a1, q, dprime, restarts, cli.seed)?),
        Command::Table { name } => print!("{}", table_cmd(name)?),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn table1_has_ten_rows() {
        let t = table_cmd(Table::Table1).unwrap();
        assert_eq!(t.lines().count(), 11);
        assert!(t.contains("10100,q^2,q^3"));
    }
}
