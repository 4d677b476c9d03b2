use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::simplex::{LpProblem, LpScalar, LpStatus, Row, Sense};
use super::{pivot_subspace_count, BoundsError};
use crate::construct::{BoundKind, BoundValue};
use crate::rankmetric::fdrm_upper_bound;
use crate::subspace::{pivot_int_encode, pivots_descending, PivotVector};

/// Most pivot vectors of weight k the ILP is built for.
pub const PIVOT_CEILING: usize = 2000;

/// Counting ILP over per-pivot code sizes a_v: for every pivot v' of weight
/// t = k - d/2 + 1, sum_v m(q,v,v') a_v <= q^dots(v').
#[derive(Clone, Debug)]
pub struct IlpInstance {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub q: u64,
    pub pivots: Vec<PivotVector>,
    pub row_pivots: Vec<PivotVector>,
    pub coeffs: Vec<Vec<BigInt>>,
    pub rhs: Vec<BigInt>,
    /// Extra rows: sum over listed variables <= bound.
    pub extra: Vec<(Vec<usize>, BigInt)>,
}

#[derive(Clone, Debug)]
pub struct IlpOptions {
    pub relax: bool,
    pub cuts: bool,
    pub node_budget: usize,
}

impl Default for IlpOptions {
    fn default() -> Self {
        IlpOptions { relax: false, cuts: false, node_budget: 500 }
    }
}

#[derive(Clone, Debug)]
pub struct IlpOutcome {
    /// Integer upper bound: the ILP optimum, floor of the LP optimum when
    /// relaxed, or the best open bound when the budget ran out.
    pub value: BigInt,
    pub lp_value: BigRational,
    pub assignment: Vec<BigInt>,
    pub optimal: bool,
    pub certified: bool,
    pub nodes: usize,
}

impl IlpOutcome {
    pub fn bound(&self) -> BoundValue {
        let prov = if self.optimal { "pivot counting ILP" } else { "pivot counting ILP (search budget reached)" };
        BoundValue::int(BoundKind::Upper, self.value.clone(), prov)
    }
}

impl IlpInstance {
    pub fn new(pivots: Vec<PivotVector>, n: usize, d: usize, k: usize, q: u64) -> Result<Self, BoundsError> {
        super::check_ndk(n, d, k)?;
        if pivots.len() > PIVOT_CEILING {
            return Err(BoundsError::TooLarge(format!("{} pivot vectors", pivots.len())));
        }
        if pivots.is_empty() || pivots.iter().any(|v| v.n() != n || v.weight() != k) {
            return Err(BoundsError::Parameters(format!("pivot vectors must have length {n} and weight {k}")));
        }
        let t = k - d / 2 + 1;
        let mut row_pivots = Vec::new();
        let mut coeffs = Vec::new();
        let mut rhs = Vec::new();
        for w in pivots_descending(n, t) {
            let row: Vec<BigInt> = pivots.iter().map(|v| pivot_subspace_count(v, &w, q)).collect();
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            rhs.push(BigInt::from(q).pow(w.dots() as u32));
            coeffs.push(row);
            row_pivots.push(w);
        }
        Ok(IlpInstance { n, d, k, q, pivots, row_pivots, coeffs, rhs, extra: Vec::new() })
    }

    /// Instance over all pivot vectors of weight k.
    pub fn full(n: usize, d: usize, k: usize, q: u64) -> Result<Self, BoundsError> {
        super::check_ndk(n, d, k)?;
        let count = (0..k).fold(BigInt::one(), |a, i| a * (n - i) / (i + 1));
        if count > BigInt::from(PIVOT_CEILING) {
            return Err(BoundsError::TooLarge(format!("{count} pivot vectors")));
        }
        Self::new(pivots_descending(n, k), n, d, k, q)
    }

    pub fn add_row(&mut self, vars: Vec<usize>, bound: BigInt) {
        self.extra.push((vars, bound));
    }

    /// Singleton rows a_v <= q^e, e the dimension bound for linear rank
    /// metric codes on the Ferrers diagram of v.
    pub fn add_diagram_cuts(&mut self) -> Result<(), BoundsError> {
        for i in 0..self.pivots.len() {
            let e = fdrm_upper_bound(&self.pivots[i].ferrers(), self.d).map_err(|e| BoundsError::Parameters(e.to_string()))?;
            self.add_row(vec![i], BigInt::from(self.q).pow(e as u32));
        }
        Ok(())
    }

    fn lp<T: LpScalar>(&self, branch: &[(usize, Sense, BigInt)]) -> LpProblem<T> {
        let nv = self.pivots.len();
        let mut rows: Vec<Row<T>> = self
            .coeffs
            .iter()
            .zip(&self.rhs)
            .map(|(c, b)| Row { coeffs: c.iter().map(T::from_big).collect(), sense: Sense::Le, rhs: T::from_big(b) })
            .collect();
        let unit = |vars: &[usize]| {
            let mut c = vec![T::zero(); nv];
            for &v in vars {
                c[v] = T::one();
            }
            c
        };
        for (vars, b) in &self.extra {
            rows.push(Row { coeffs: unit(vars), sense: Sense::Le, rhs: T::from_big(b) });
        }
        for (v, s, b) in branch {
            rows.push(Row { coeffs: unit(&[*v]), sense: *s, rhs: T::from_big(b) });
        }
        LpProblem { objective: vec![T::one(); nv], rows }
    }

    /// Plain LP relaxation over an arbitrary scalar.
    pub fn relaxation<T: LpScalar>(&self) -> LpProblem<T> {
        self.lp(&[])
    }

    /// LP-format text of the integer program.
    pub fn to_lp_format(&self) -> String {
        let name = |i: usize| format!("a_{}", self.pivots[i]);
        let sum = |terms: Vec<(BigInt, usize)>| {
            terms
                .iter()
                .map(|(c, i)| if c.is_one() { name(*i) } else { format!("{c} {}", name(*i)) })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let mut s = String::from("Maximize\n obj: ");
        s += &sum((0..self.pivots.len()).map(|i| (BigInt::one(), i)).collect());
        s += "\nSubject To\n";
        for (r, (c, b)) in self.coeffs.iter().zip(&self.rhs).enumerate() {
            let terms = c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (x.clone(), i)).collect();
            let _ = writeln!(s, " r_{}: {} <= {b}", self.row_pivots[r], sum(terms));
        }
        for (e, (vars, b)) in self.extra.iter().enumerate() {
            let _ = writeln!(s, " x_{e}: {} <= {b}", sum(vars.iter().map(|&i| (BigInt::one(), i)).collect()));
        }
        s += "General\n";
        for i in 0..self.pivots.len() {
            let _ = writeln!(s, " {}", name(i));
        }
        s += "End\n";
        s
    }

    /// Exact solution by rational simplex and best-first branch and bound.
    pub fn solve(&self, opts: &IlpOptions) -> Result<IlpOutcome, BoundsError> {
        let root_lp: LpProblem<BigRational> = self.lp(&[]);
        let root = root_lp.solve();
        if root.status != LpStatus::Optimal {
            return Err(BoundsError::Parameters(format!("root relaxation is {:?}", root.status)));
        }
        let certified = root_lp.certify(&root);
        let floor_of = |x: &[BigRational]| x.iter().map(|v| v.to_big_floor()).collect::<Vec<_>>();
        let mut best = floor_of(&root.x);
        let mut best_val: BigInt = best.iter().sum();
        if opts.relax {
            return Ok(IlpOutcome {
                value: root.value.to_big_floor(),
                lp_value: root.value,
                assignment: best,
                optimal: true,
                certified,
                nodes: 1,
            });
        }
        let mut heap = BinaryHeap::new();
        heap.push(Node { bound: root.value.clone(), x: root.x.clone(), branch: Vec::new() });
        let mut nodes = 1;
        let mut all_certified = certified;
        let mut exhausted = true;
        while let Some(node) = heap.pop() {
            if node.bound.to_big_floor() <= best_val {
                break;
            }
            let frac = node.x.iter().enumerate().filter(|(_, v)| !v.is_integral()).max_by(|(i, a), (j, b)| {
                let da = half_distance(a);
                let db = half_distance(b);
                db.cmp(&da).then_with(|| pivot_int_encode(&self.pivots[*j]).cmp(&pivot_int_encode(&self.pivots[*i])))
            });
            let Some((j, v)) = frac else {
                let val: BigInt = floor_of(&node.x).iter().sum();
                if val > best_val {
                    best_val = val;
                    best = floor_of(&node.x);
                }
                continue;
            };
            if nodes >= opts.node_budget {
                heap.push(node);
                exhausted = false;
                break;
            }
            let f = v.to_big_floor();
            for (s, b) in [(Sense::Le, f.clone()), (Sense::Ge, f + 1)] {
                let mut branch = node.branch.clone();
                branch.push((j, s, b));
                let lp: LpProblem<BigRational> = self.lp(&branch);
                let out = lp.solve();
                nodes += 1;
                if out.status != LpStatus::Optimal {
                    continue;
                }
                all_certified &= lp.certify(&out);
                // Rounding down stays feasible: every coefficient is nonnegative.
                let down = floor_of(&out.x);
                let dv: BigInt = down.iter().sum();
                if dv > best_val {
                    best_val = dv;
                    best = down;
                }
                if out.value.to_big_floor() > best_val {
                    heap.push(Node { bound: out.value, x: out.x, branch });
                }
            }
        }
        let value = if exhausted {
            best_val.clone()
        } else {
            heap.iter().map(|n| n.bound.to_big_floor()).max().unwrap_or_else(|| best_val.clone()).max(best_val.clone())
        };
        Ok(IlpOutcome { value, lp_value: root.value, assignment: best, optimal: exhausted, certified: all_certified, nodes })
    }
}

fn half_distance(v: &BigRational) -> BigRational {
    let frac = v - v.floor();
    let h = BigRational::new(BigInt::one(), BigInt::from(2));
    if frac > h {
        frac - h
    } else {
        h - frac
    }
}

struct Node {
    bound: BigRational,
    x: Vec<BigRational>,
    branch: Vec<(usize, Sense, BigInt)>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.bound == o.bound
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        self.bound.cmp(&o.bound)
    }
}

/// Upper bound on codes whose codewords have pivots in `pivots` (all of
/// weight k when None).
pub fn ilp_pivot_bound(
    pivots: Option<Vec<PivotVector>>,
    n: usize,
    d: usize,
    k: usize,
    q: u64,
    opts: &IlpOptions,
) -> Result<(BoundValue, IlpOutcome), BoundsError> {
    let mut inst = match pivots {
        Some(p) => IlpInstance::new(p, n, d, k, q)?,
        None => IlpInstance::full(n, d, k, q)?,
    };
    if opts.cuts {
        inst.add_diagram_cuts()?;
    }
    let out = inst.solve(opts)?;
    Ok((out.bound(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::anticode_int;

    #[test]
    fn full_instance_is_sandwiched() {
        let (b, out) = ilp_pivot_bound(None, 6, 4, 3, 2, &IlpOptions::default()).unwrap();
        let v = b.at(2);
        assert!(out.optimal && out.certified);
        assert!(v >= BigInt::from(77) && v <= anticode_int(6, 4, 3, 2).unwrap(), "{v}");
        assert!(BigRational::from_integer(v.clone()) <= out.lp_value);
        let (cut, _) = ilp_pivot_bound(None, 6, 4, 3, 2, &IlpOptions { cuts: true, ..Default::default() }).unwrap();
        assert!(cut.at(2) <= v);
        let (relaxed, _) = ilp_pivot_bound(None, 6, 4, 3, 2, &IlpOptions { relax: true, ..Default::default() }).unwrap();
        assert!(relaxed.at(2) >= v);
    }

    #[test]
    fn single_pivot_is_a_minimum_ratio() {
        let v: PivotVector = "110100".parse().unwrap();
        let (b, _) = ilp_pivot_bound(Some(vec![v]), 6, 4, 3, 2, &IlpOptions::default()).unwrap();
        let expected = pivots_descending(6, 2)
            .iter()
            .filter_map(|w| {
                let m = pivot_subspace_count(&v, w, 2);
                (!m.is_zero()).then(|| BigInt::from(2).pow(w.dots() as u32) / m)
            })
            .min()
            .unwrap();
        assert_eq!(b.at(2), expected);
        assert!(expected >= BigInt::one());
    }

    #[test]
    fn float_relaxation_agrees() {
        let inst = IlpInstance::full(6, 4, 3, 2).unwrap();
        let exact = inst.relaxation::<BigRational>().solve();
        let approx = inst.relaxation::<f64>().solve();
        assert!((exact.value.to_f64_lossy() - approx.value).abs() < 1e-6);
    }

    #[test]
    fn lp_text_lists_every_variable() {
        let inst = IlpInstance::full(5, 4, 2, 2).unwrap();
        let text = inst.to_lp_format();
        assert!(text.starts_with("Maximize"));
        assert_eq!(text.matches(" <= ").count(), inst.rhs.len());
        assert!(text.contains("a_11000"));
        assert!(text.trim_end().ends_with("End"));
        assert!(IlpInstance::full(30, 4, 5, 2).is_err());
    }
}
