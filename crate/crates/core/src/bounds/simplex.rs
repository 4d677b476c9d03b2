//! Dense two-phase primal simplex with Bland's rule.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// Scalars the simplex runs over. Exact for rationals; f64 compares
/// against a fixed tolerance.
pub trait LpScalar: Clone + Debug + Num + Signed + PartialOrd {
    fn from_big(v: &BigInt) -> Self;
    fn floor_value(&self) -> Self;
    fn to_big_floor(&self) -> BigInt;
    fn is_integral(&self) -> bool {
        self.clone().floor_value() == *self
    }
    fn approx_zero(&self) -> bool {
        self.is_zero()
    }
    fn to_f64_lossy(&self) -> f64;
}

impl LpScalar for BigRational {
    fn from_big(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn floor_value(&self) -> Self {
        self.floor()
    }
    fn to_big_floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

const F64_TOL: f64 = 1e-9;

impl LpScalar for f64 {
    fn from_big(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }
    fn floor_value(&self) -> Self {
        (self + F64_TOL).floor()
    }
    fn to_big_floor(&self) -> BigInt {
        BigInt::from((self + F64_TOL).floor() as i128)
    }
    fn is_integral(&self) -> bool {
        (self - self.round()).abs() < F64_TOL
    }
    fn approx_zero(&self) -> bool {
        self.abs() < F64_TOL
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub sense: Sense,
    pub rhs: T,
}

/// maximize c x subject to rows, x >= 0.
#[derive(Clone, Debug)]
pub struct LpProblem<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Row<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    pub value: T,
    pub x: Vec<T>,
    /// One multiplier per row of the original problem.
    pub duals: Vec<T>,
}

struct Tableau<T> {
    /// m constraint rows then the reduced-cost row; last column is the rhs.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pr = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].approx_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pr) {
                if !p.approx_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
            row[c] = T::zero();
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, cost: &[T]) {
        let m = self.basis.len();
        let mut obj: Vec<T> = (0..=self.cols).map(|j| if j < self.cols { -cost[j].clone() } else { T::zero() }).collect();
        for i in 0..m {
            let cb = cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(&self.t[i]) {
                *o = o.clone() + cb.clone() * v.clone();
            }
        }
        self.t[m] = obj;
    }

    /// Bland's rule iterations over columns `< enter_limit`. False when unbounded.
    fn optimize(&mut self, enter_limit: usize) -> bool {
        let m = self.basis.len();
        loop {
            let Some(c) = (0..enter_limit).find(|&j| self.t[m][j].is_negative() && !self.t[m][j].approx_zero()) else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..m {
                let a = &self.t[i][c];
                if a.is_positive() && !a.approx_zero() {
                    let ratio = self.t[i][self.cols].clone() / a.clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

impl<T: LpScalar> LpProblem<T> {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> LpOutcome<T> {
        let n = self.n_vars();
        let m = self.rows.len();
        // Rows normalized to rhs >= 0; each gets an identity column (slack or
        // artificial) and Ge rows a surplus column.
        let mut flipped = vec![false; m];
        let mut senses = Vec::with_capacity(m);
        for (i, r) in self.rows.iter().enumerate() {
            flipped[i] = r.rhs.is_negative();
            senses.push(match (r.sense, flipped[i]) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            });
        }
        let n_slack = senses.iter().filter(|s| **s == Sense::Le).count();
        let n_surplus = senses.iter().filter(|s| **s == Sense::Ge).count();
        let n_art = m - n_slack;
        let art_start = n + n_slack + n_surplus;
        let cols = art_start + n_art;
        let mut t = vec![vec![T::zero(); cols + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut ident = vec![0; m];
        let (mut s_next, mut u_next, mut a_next) = (n, n + n_slack, art_start);
        for (i, r) in self.rows.iter().enumerate() {
            let sign = if flipped[i] { -T::one() } else { T::one() };
            for (j, a) in r.coeffs.iter().enumerate() {
                t[i][j] = sign.clone() * a.clone();
            }
            t[i][cols] = sign * r.rhs.clone();
            match senses[i] {
                Sense::Le => {
                    t[i][s_next] = T::one();
                    ident[i] = s_next;
                    s_next += 1;
                }
                Sense::Ge | Sense::Eq => {
                    if senses[i] == Sense::Ge {
                        t[i][u_next] = -T::one();
                        u_next += 1;
                    }
                    t[i][a_next] = T::one();
                    ident[i] = a_next;
                    a_next += 1;
                }
            }
            basis[i] = ident[i];
        }
        let mut tab = Tableau { t, basis, cols };
        let fail = |status| LpOutcome { status, value: T::zero(), x: vec![T::zero(); n], duals: vec![T::zero(); m] };

        if n_art > 0 {
            let cost: Vec<T> = (0..cols).map(|j| if j >= art_start { -T::one() } else { T::zero() }).collect();
            tab.set_costs(&cost);
            tab.optimize(cols);
            if !tab.t[m][cols].approx_zero() {
                return fail(LpStatus::Infeasible);
            }
            for i in 0..m {
                if tab.basis[i] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !tab.t[i][j].approx_zero()) {
                        tab.pivot(i, j);
                    }
                }
            }
        }
        let cost: Vec<T> = (0..cols).map(|j| if j < n { self.objective[j].clone() } else { T::zero() }).collect();
        tab.set_costs(&cost);
        if !tab.optimize(art_start) {
            return fail(LpStatus::Unbounded);
        }
        let mut x = vec![T::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.t[i][cols].clone();
            }
        }
        let duals = (0..m)
            .map(|i| {
                let y = tab.t[m][ident[i]].clone();
                if flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        LpOutcome { status: LpStatus::Optimal, value: tab.t[m][cols].clone(), x, duals }
    }

    /// Checks primal feasibility of x, dual feasibility of the multipliers
    /// and equality of both objectives.
    pub fn certify(&self, out: &LpOutcome<T>) -> bool {
        if out.status != LpStatus::Optimal || out.x.len() != self.n_vars() || out.duals.len() != self.rows.len() {
            return false;
        }
        let dot = |a: &[T], b: &[T]| a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + x.clone() * y.clone());
        let nonneg = |v: &T| !v.is_negative() || v.approx_zero();
        if !out.x.iter().all(nonneg) {
            return false;
        }
        for (r, y) in self.rows.iter().zip(&out.duals) {
            let slack = r.rhs.clone() - dot(&r.coeffs, &out.x);
            let ok = match r.sense {
                Sense::Le => nonneg(&slack) && nonneg(y),
                Sense::Ge => nonneg(&-slack) && nonneg(&-y.clone()),
                Sense::Eq => slack.approx_zero(),
            };
            if !ok {
                return false;
            }
        }
        for j in 0..self.n_vars() {
            let col = self.rows.iter().zip(&out.duals).fold(T::zero(), |s, (r, y)| s + r.coeffs[j].clone() * y.clone());
            if !nonneg(&(col - self.objective[j].clone())) {
                return false;
            }
        }
        let primal = dot(&self.objective, &out.x);
        let dual = self.rows.iter().zip(&out.duals).fold(T::zero(), |s, (r, y)| s + r.rhs.clone() * y.clone());
        (primal.clone() - out.value.clone()).approx_zero() && (dual - primal).approx_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn row<T: Clone>(coeffs: &[T], sense: Sense, rhs: T) -> Row<T> {
        Row { coeffs: coeffs.to_vec(), sense, rhs }
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18: optimum 36 at (2, 6).
        let p = LpProblem {
            objective: vec![r(3), r(5)],
            rows: vec![
                row(&[r(1), r(0)], Sense::Le, r(4)),
                row(&[r(0), r(2)], Sense::Le, r(12)),
                row(&[r(3), r(2)], Sense::Le, r(18)),
            ],
        };
        let out = p.solve();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, r(36));
        assert_eq!(out.x, vec![r(2), r(6)]);
        assert!(p.certify(&out));
        let pf = LpProblem {
            objective: vec![3.0, 5.0],
            rows: vec![
                row(&[1.0, 0.0], Sense::Le, 4.0),
                row(&[0.0, 2.0], Sense::Le, 12.0),
                row(&[3.0, 2.0], Sense::Le, 18.0),
            ],
        };
        let of = pf.solve();
        assert!((of.value - 36.0).abs() < 1e-9);
        assert!(pf.certify(&of));
    }

    #[test]
    fn phase_one_and_statuses() {
        // max x + y, x + y <= 5, x >= 2, y = 1: optimum 5 with fractional-free duals.
        let p = LpProblem {
            objective: vec![r(1), r(1)],
            rows: vec![
                row(&[r(1), r(1)], Sense::Le, r(5)),
                row(&[r(1), r(0)], Sense::Ge, r(2)),
                row(&[r(0), r(1)], Sense::Eq, r(1)),
            ],
        };
        let out = p.solve();
        assert_eq!(out.value, r(5));
        assert!(p.certify(&out));
        let inf = LpProblem { objective: vec![r(1)], rows: vec![row(&[r(1)], Sense::Le, r(1)), row(&[r(1)], Sense::Ge, r(2))] };
        assert_eq!(inf.solve().status, LpStatus::Infeasible);
        let unb = LpProblem { objective: vec![r(1), r(0)], rows: vec![row(&[r(0), r(1)], Sense::Le, r(1))] };
        assert_eq!(unb.solve().status, LpStatus::Unbounded);
        // A negative rhs is normalized: -x <= -3 means x >= 3.
        let neg = LpProblem { objective: vec![-r(1)], rows: vec![row(&[-r(1)], Sense::Le, -r(3))] };
        let o = neg.solve();
        assert_eq!(o.value, -r(3));
        assert!(neg.certify(&o));
    }

    #[test]
    fn tampered_certificates_fail() {
        let p = LpProblem { objective: vec![r(1), r(2)], rows: vec![row(&[r(1), r(1)], Sense::Le, r(3))] };
        let mut out = p.solve();
        assert_eq!(out.value, r(6));
        assert!(p.certify(&out));
        out.duals[0] = r(1);
        assert!(!p.certify(&out));
    }
}
