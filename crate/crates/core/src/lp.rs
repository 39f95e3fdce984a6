//! Bounded-variable primal simplex with Bland's rule.
//!
//! The same routine runs over exact rationals (the source of truth) and over
//! `f64`. A float run can be turned into an exact answer by [`certify`], which
//! rebuilds the basic solution of the final float basis in rational arithmetic
//! and checks primal and dual feasibility exactly; [`solve_min_screened`]
//! falls back to the exact simplex whenever that check fails.

use thiserror::Error;

use crate::polytope::{LinConstraint, Relation};
use crate::rational::{to_f64, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("objective has length {found}, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    ConstraintLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} variable bounds, got {found}")]
    BoundsLength { expected: usize, found: usize },
    #[error("variable {0} has lower bound above upper bound")]
    InvertedBounds(usize),
}

/// `minimize objective . f` subject to `constraints` and `lower <= f <= upper`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub n: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<LinConstraint>,
    pub bounds: Vec<(Rational, Rational)>,
}

impl LpProblem {
    pub fn new(
        n: usize,
        objective: Vec<Rational>,
        constraints: Vec<LinConstraint>,
        bounds: Vec<(Rational, Rational)>,
    ) -> Result<Self, LpError> {
        let p = Self {
            n,
            objective,
            constraints,
            bounds,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.n {
            return Err(LpError::ObjectiveLength {
                expected: self.n,
                found: self.objective.len(),
            });
        }
        for (index, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.n {
                return Err(LpError::ConstraintLength {
                    index,
                    expected: self.n,
                    found: c.coeffs.len(),
                });
            }
        }
        if self.bounds.len() != self.n {
            return Err(LpError::BoundsLength {
                expected: self.n,
                found: self.bounds.len(),
            });
        }
        if let Some(i) = self.bounds.iter().position(|(l, u)| l > u) {
            return Err(LpError::InvertedBounds(i));
        }
        Ok(())
    }

    pub fn value_at(&self, point: &[Rational]) -> Rational {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Exact feasibility of `point` (constraints and bounds).
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.n
            && self
                .bounds
                .iter()
                .zip(point)
                .all(|((l, u), x)| l <= x && x <= u)
            && self.constraints.iter().all(|c| c.is_satisfied(point))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    /// An optimal basic feasible solution.
    pub point: Vec<Rational>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// Where a structural variable sits in the final basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarState {
    Basic,
    AtLower,
    AtUpper,
}

/// Final basis of a simplex run, enough to rebuild the vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub structural: Vec<VarState>,
    /// Whether each row's slack is basic.
    pub slack_basic: Vec<bool>,
    /// Whether each row's phase-one artificial (if any) ended basic.
    pub artificial_basic: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Float runs only: the pivot cap was hit.
    IterationLimit,
}

/// Result of a simplex run in scalar type `S`.
#[derive(Debug, Clone)]
pub struct RawOutcome<S> {
    pub status: RawStatus,
    pub point: Vec<S>,
    pub value: S,
    pub basis: Option<Basis>,
    pub pivots: usize,
}

/// Constraint data converted to scalar type `S`.
#[derive(Debug, Clone)]
pub struct DenseLp<S> {
    pub n: usize,
    pub objective: Vec<S>,
    pub rows: Vec<DenseRow<S>>,
    pub lower: Vec<S>,
    pub upper: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct DenseRow<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

impl<S: Scalar> DenseLp<S> {
    pub fn from_problem(p: &LpProblem) -> Self {
        Self {
            n: p.n,
            objective: p.objective.iter().map(S::from_rational).collect(),
            rows: p.constraints.iter().map(DenseRow::from_constraint).collect(),
            lower: p.bounds.iter().map(|(l, _)| S::from_rational(l)).collect(),
            upper: p.bounds.iter().map(|(_, u)| S::from_rational(u)).collect(),
        }
    }
}

impl<S: Scalar> DenseRow<S> {
    pub fn from_constraint(c: &LinConstraint) -> Self {
        Self {
            coeffs: c.coeffs.iter().map(S::from_rational).collect(),
            relation: c.relation,
            rhs: S::from_rational(&c.rhs),
        }
    }
}

/// Exact optimum over the rationals.
pub fn solve_min(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let raw = simplex(&DenseLp::<Rational>::from_problem(p), None);
    Ok(match raw.status {
        RawStatus::Optimal => LpOutcome::Optimal(LpSolution {
            point: raw.point,
            value: raw.value,
        }),
        RawStatus::Infeasible => LpOutcome::Infeasible,
        RawStatus::Unbounded => LpOutcome::Unbounded,
        RawStatus::IterationLimit => unreachable!("exact runs have no pivot cap"),
    })
}

/// Float simplex. Results are approximate; use [`certify`] to confirm.
pub fn solve_min_approx(p: &DenseLp<f64>) -> RawOutcome<f64> {
    let cap = 50 * (p.rows.len() + p.n) + 1000;
    simplex(p, Some(cap))
}

/// Float solve, exact certification, exact fallback.
pub fn solve_min_screened(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let raw = solve_min_approx(&DenseLp::from_problem(p));
    if raw.status == RawStatus::Optimal {
        if let Some(basis) = &raw.basis {
            if let Some(sol) = certify(p, basis) {
                return Ok(LpOutcome::Optimal(sol));
            }
        }
    }
    solve_min(p)
}

const INF_LIMIT: usize = usize::MAX;

struct Tableau<S> {
    /// `x_B(i) = const - sum_k t[i][k] x_N(k)`
    t: Vec<Vec<S>>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<S>,
    lower: Vec<S>,
    /// `None` is +infinity.
    upper: Vec<Option<S>>,
    cost: Vec<S>,
    reduced: Vec<S>,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn fixed(&self, v: usize) -> bool {
        match &self.upper[v] {
            Some(u) => !u.sub(&self.lower[v]).is_pos(),
            None => false,
        }
    }

    fn recompute_reduced(&mut self) {
        self.reduced = self
            .nonbasic
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let mut r = self.cost[v].clone();
                for (i, &b) in self.basic.iter().enumerate() {
                    if !self.cost[b].is_nil() {
                        r.sub_mul_assign(&self.cost[b], &self.t[i][k]);
                    }
                }
                r
            })
            .collect();
    }

    fn objective(&self) -> S {
        let mut acc = S::nil();
        for (v, c) in self.cost.iter().enumerate() {
            if !c.is_nil() {
                acc = acc.add(&c.mul(&self.x[v]));
            }
        }
        acc
    }

    /// Runs Bland-rule iterations until optimal, unbounded or the cap.
    fn run(&mut self, cap: Option<usize>) -> RawStatus {
        loop {
            if let Some(cap) = cap {
                if self.pivots >= cap {
                    return RawStatus::IterationLimit;
                }
            }
            // entering: smallest variable index with an improving direction
            let mut enter: Option<(usize, usize)> = None;
            for (k, &v) in self.nonbasic.iter().enumerate() {
                if self.fixed(v) {
                    continue;
                }
                let r = &self.reduced[k];
                let improving = if self.at_upper[v] { r.is_pos() } else { r.is_neg() };
                if improving && enter.is_none_or(|(_, ev)| v < ev) {
                    enter = Some((k, v));
                }
            }
            let Some((k, ev)) = enter else {
                return RawStatus::Optimal;
            };
            let dir_up = !self.at_upper[ev];

            // ratio test; ties broken by smallest variable index
            let mut best: Option<(S, usize, usize)> = None; // (step, var, row or INF_LIMIT)
            if let Some(u) = &self.upper[ev] {
                best = Some((u.sub(&self.lower[ev]), ev, INF_LIMIT));
            }
            for (i, &bv) in self.basic.iter().enumerate() {
                let tik = &self.t[i][k];
                if tik.is_nil() {
                    continue;
                }
                // d x_B / d step
                let g = if dir_up { tik.neg() } else { tik.clone() };
                let limit = if g.is_neg() {
                    let room = self.x[bv].sub(&self.lower[bv]);
                    room.div(&g.neg())
                } else {
                    match &self.upper[bv] {
                        Some(u) => u.sub(&self.x[bv]).div(&g),
                        None => continue,
                    }
                };
                let limit = if limit.is_neg() { S::nil() } else { limit };
                let better = match &best {
                    None => true,
                    Some((s, v, _)) => {
                        let d = limit.sub(s);
                        d.is_neg() || (d.is_nil() && bv < *v)
                    }
                };
                if better {
                    best = Some((limit, bv, i));
                }
            }
            let Some((step, _, row)) = best else {
                return RawStatus::Unbounded;
            };
            self.pivots += 1;

            // move values
            let signed = if dir_up { step.clone() } else { step.neg() };
            self.x[ev] = self.x[ev].add(&signed);
            for (i, &bv) in self.basic.iter().enumerate() {
                let tik = &self.t[i][k];
                if !tik.is_nil() {
                    self.x[bv].sub_mul_assign(tik, &signed);
                }
            }

            if row == INF_LIMIT {
                self.at_upper[ev] = dir_up;
                self.x[ev] = if dir_up {
                    self.upper[ev].clone().expect("finite upper bound")
                } else {
                    self.lower[ev].clone()
                };
                continue;
            }

            let lv = self.basic[row];
            let tik = &self.t[row][k];
            let g = if dir_up { tik.neg() } else { tik.clone() };
            let leaves_at_upper = g.is_pos();
            self.x[lv] = if leaves_at_upper {
                self.upper[lv].clone().expect("finite upper bound")
            } else {
                self.lower[lv].clone()
            };
            self.at_upper[lv] = leaves_at_upper;
            self.at_upper[ev] = false;
            self.pivot(row, k);
        }
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let piv = self.t[r][k].clone();
        let inv = S::unit().div(&piv);
        let width = self.nonbasic.len();
        // new pivot row
        let mut prow = std::mem::take(&mut self.t[r]);
        for (c, v) in prow.iter_mut().enumerate() {
            if c == k {
                *v = inv.clone();
            } else if !v.is_nil() {
                *v = v.mul(&inv);
            }
        }
        let nz: Vec<usize> = (0..width).filter(|&c| c != k && !prow[c].is_nil()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[k].clone();
            if f.is_nil() {
                continue;
            }
            for &c in &nz {
                row[c].sub_mul_assign(&f, &prow[c]);
            }
            row[k] = f.neg().mul(&inv);
        }
        self.t[r] = prow;
        // reduced costs
        let rk = self.reduced[k].clone();
        if !rk.is_nil() {
            for &c in &nz {
                let v = self.t[r][c].clone();
                self.reduced[c].sub_mul_assign(&rk, &v);
            }
            self.reduced[k] = rk.neg().mul(&inv);
        } else {
            self.reduced[k] = S::nil();
        }
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[k]);
    }
}

/// Two-phase bounded simplex. Structural variables start at their lower
/// bounds; rows infeasible at that point get a phase-one artificial.
pub fn simplex<S: Scalar>(p: &DenseLp<S>, cap: Option<usize>) -> RawOutcome<S> {
    let n = p.n;
    let m = p.rows.len();
    let mut x: Vec<S> = p.lower.clone();
    let mut lower: Vec<S> = p.lower.clone();
    let mut upper: Vec<Option<S>> = p.upper.iter().cloned().map(Some).collect();
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut basic = Vec::with_capacity(m);
    let mut t: Vec<Vec<S>> = Vec::with_capacity(m);
    let mut art_of_row: Vec<Option<usize>> = vec![None; m];
    let mut art_sign: Vec<(usize, S)> = Vec::new(); // (row, sign)

    // slacks n..n+m
    for (i, row) in p.rows.iter().enumerate() {
        let mut val = row.rhs.clone();
        for (a, xv) in row.coeffs.iter().zip(&p.lower) {
            if !a.is_nil() {
                val.sub_mul_assign(a, xv);
            }
        }
        lower.push(S::nil());
        upper.push(match row.relation {
            Relation::Le => None,
            Relation::Eq => Some(S::nil()),
        });
        let feasible = match row.relation {
            Relation::Le => !val.is_neg(),
            Relation::Eq => val.is_nil(),
        };
        if feasible {
            x.push(val);
        } else {
            x.push(S::nil());
            let sign = if val.is_neg() { S::unit().neg() } else { S::unit() };
            art_sign.push((i, sign));
        }
    }
    // artificial variables follow the slacks
    for (a_idx, (i, _)) in art_sign.iter().enumerate() {
        art_of_row[*i] = Some(n + m + a_idx);
    }
    for (i, _) in art_sign.iter() {
        nonbasic.push(n + i);
    }
    let width = nonbasic.len();
    let mut col_of_slack = vec![usize::MAX; m];
    for (c, &v) in nonbasic.iter().enumerate().skip(n) {
        col_of_slack[v - n] = c;
    }
    for (i, row) in p.rows.iter().enumerate() {
        let mut tr: Vec<S> = Vec::with_capacity(width);
        match art_of_row[i] {
            None => {
                tr.extend(row.coeffs.iter().cloned());
                tr.resize(width, S::nil());
                basic.push(n + i);
            }
            Some(av) => {
                let sign = &art_sign[av - n - m].1;
                tr.extend(row.coeffs.iter().map(|a| a.mul(sign)));
                tr.resize(width, S::nil());
                tr[col_of_slack[i]] = sign.clone();
                let mut val = row.rhs.clone();
                for (a, xv) in row.coeffs.iter().zip(&p.lower) {
                    if !a.is_nil() {
                        val.sub_mul_assign(a, xv);
                    }
                }
                x.push(if val.is_neg() { val.neg() } else { val });
                lower.push(S::nil());
                upper.push(None);
                basic.push(av);
            }
        }
        t.push(tr);
    }
    // artificials were pushed in row order, matching art_sign order
    let total = x.len();
    let mut tab = Tableau {
        t,
        basic,
        nonbasic,
        at_upper: vec![false; total],
        x,
        lower,
        upper,
        cost: vec![S::nil(); total],
        reduced: Vec::new(),
        pivots: 0,
    };

    if !art_sign.is_empty() {
        for v in n + m..total {
            tab.cost[v] = S::unit();
        }
        tab.recompute_reduced();
        let status = tab.run(cap);
        if status == RawStatus::IterationLimit {
            return finish(tab, n, m, &art_of_row, RawStatus::IterationLimit);
        }
        let infeas = tab.objective();
        if infeas.is_pos() {
            return finish(tab, n, m, &art_of_row, RawStatus::Infeasible);
        }
        for v in n + m..total {
            tab.cost[v] = S::nil();
            tab.upper[v] = Some(S::nil());
            tab.x[v] = S::nil();
        }
    }
    for (j, c) in p.objective.iter().enumerate() {
        tab.cost[j] = c.clone();
    }
    tab.recompute_reduced();
    let status = tab.run(cap);
    finish(tab, n, m, &art_of_row, status)
}

fn finish<S: Scalar>(
    tab: Tableau<S>,
    n: usize,
    m: usize,
    art_of_row: &[Option<usize>],
    status: RawStatus,
) -> RawOutcome<S> {
    let mut is_basic = vec![false; tab.x.len()];
    for &b in &tab.basic {
        is_basic[b] = true;
    }
    let basis = Basis {
        structural: (0..n)
            .map(|j| {
                if is_basic[j] {
                    VarState::Basic
                } else if tab.at_upper[j] {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                }
            })
            .collect(),
        slack_basic: (0..m).map(|i| is_basic[n + i]).collect(),
        artificial_basic: art_of_row
            .iter()
            .map(|a| a.is_some_and(|v| is_basic[v]))
            .collect(),
    };
    let point: Vec<S> = tab.x[..n].to_vec();
    let mut value = S::nil();
    for (j, xv) in point.iter().enumerate() {
        value = value.add(&tab.cost[j].mul(xv));
    }
    RawOutcome {
        status,
        point,
        value,
        basis: Some(basis),
        pivots: tab.pivots,
    }
}

/// Solves `a x = b` exactly; free variables are set to zero. Returns the
/// solution and the rank, or `None` when the system is inconsistent.
pub fn solve_linear_system(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
    cols: usize,
) -> Option<(Vec<Rational>, usize)> {
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_nil()) else {
            continue;
        };
        a.swap(p, r);
        b.swap(p, r);
        let inv = Rational::from_integer(1.into()) / &a[r][c];
        for v in a[r].iter_mut() {
            if !v.is_nil() {
                *v *= &inv;
            }
        }
        b[r] *= &inv;
        let prow = a[r].clone();
        let pb = b[r].clone();
        for i in 0..rows {
            if i == r || a[i][c].is_nil() {
                continue;
            }
            let f = a[i][c].clone();
            for (cc, pv) in prow.iter().enumerate() {
                if !pv.is_nil() {
                    let d = &f * pv;
                    a[i][cc] -= d;
                }
            }
            b[i] -= &f * &pb;
        }
        pivot_cols.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_nil()) {
        return None;
    }
    let mut x = vec![<Rational as Scalar>::nil(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some((x, pivot_cols.len()))
}

/// Rebuilds the basic solution described by `basis` exactly and checks
/// primal feasibility, vertex uniqueness and dual feasibility. Returns the
/// exact optimum when all checks pass.
pub fn certify(p: &LpProblem, basis: &Basis) -> Option<LpSolution> {
    let n = p.n;
    let m = p.constraints.len();
    if basis.structural.len() != n || basis.slack_basic.len() != m {
        return None;
    }
    let basic_cols: Vec<usize> = (0..n)
        .filter(|&j| basis.structural[j] == VarState::Basic)
        .collect();
    let mut x: Vec<Rational> = (0..n)
        .map(|j| match basis.structural[j] {
            VarState::AtUpper => p.bounds[j].1.clone(),
            _ => p.bounds[j].0.clone(),
        })
        .collect();

    // rows pinned at equality
    let tight: Vec<usize> = (0..m)
        .filter(|&i| !basis.slack_basic[i] || p.constraints[i].relation == Relation::Eq)
        .collect();
    if !basic_cols.is_empty() {
        let a: Vec<Vec<Rational>> = tight
            .iter()
            .map(|&i| basic_cols.iter().map(|&j| p.constraints[i].coeffs[j].clone()).collect())
            .collect();
        let b: Vec<Rational> = tight
            .iter()
            .map(|&i| {
                let c = &p.constraints[i];
                let mut v = c.rhs.clone();
                for j in 0..n {
                    if basis.structural[j] != VarState::Basic && !c.coeffs[j].is_nil() {
                        v -= &c.coeffs[j] * &x[j];
                    }
                }
                v
            })
            .collect();
        let (sol, rank) = solve_linear_system(a, b, basic_cols.len())?;
        if rank != basic_cols.len() {
            return None;
        }
        for (&j, v) in basic_cols.iter().zip(sol) {
            x[j] = v;
        }
    } else if tight.iter().any(|&i| !p.constraints[i].is_satisfied(&x)) {
        return None;
    }
    if !p.is_feasible(&x) {
        return None;
    }

    // duals on tight rows whose artificial is not basic
    let dual_rows: Vec<usize> = (0..m)
        .filter(|&i| !basis.slack_basic[i] && !basis.artificial_basic.get(i).copied().unwrap_or(false))
        .collect();
    let lambda: Vec<Rational> = if basic_cols.is_empty() || dual_rows.is_empty() {
        if basic_cols.iter().any(|&j| !p.objective[j].is_nil()) {
            return None;
        }
        vec![<Rational as Scalar>::nil(); dual_rows.len()]
    } else {
        let a: Vec<Vec<Rational>> = basic_cols
            .iter()
            .map(|&j| dual_rows.iter().map(|&i| p.constraints[i].coeffs[j].clone()).collect())
            .collect();
        let b: Vec<Rational> = basic_cols.iter().map(|&j| -p.objective[j].clone()).collect();
        solve_linear_system(a, b, dual_rows.len())?.0
    };
    for (&i, l) in dual_rows.iter().zip(&lambda) {
        if p.constraints[i].relation == Relation::Le && num_traits::Signed::is_negative(l) {
            return None;
        }
    }
    for j in 0..n {
        if basis.structural[j] == VarState::Basic || p.bounds[j].0 == p.bounds[j].1 {
            continue;
        }
        let mut d = p.objective[j].clone();
        for (&i, l) in dual_rows.iter().zip(&lambda) {
            let a = &p.constraints[i].coeffs[j];
            if !a.is_nil() && !l.is_nil() {
                d += l * a;
            }
        }
        let ok = match basis.structural[j] {
            VarState::AtLower if x[j] == p.bounds[j].0 => !num_traits::Signed::is_negative(&d),
            VarState::AtUpper if x[j] == p.bounds[j].1 => !num_traits::Signed::is_positive(&d),
            _ => false,
        };
        if !ok {
            return None;
        }
    }
    let value = p.value_at(&x);
    Some(LpSolution { point: x, value })
}

/// Row multipliers of a float basis: the tight rows that carry a dual
/// are solved against the basic columns, every other row gets 0.
pub fn basis_multipliers(p: &DenseLp<f64>, basis: &Basis) -> Vec<f64> {
    let m = p.rows.len();
    let mut lambda = vec![0.0; m];
    if basis.structural.len() != p.n || basis.slack_basic.len() != m {
        return lambda;
    }
    let basic: Vec<usize> = (0..p.n).filter(|&j| basis.structural[j] == VarState::Basic).collect();
    let duals: Vec<usize> = (0..m)
        .filter(|&i| !basis.slack_basic[i] && !basis.artificial_basic.get(i).copied().unwrap_or(false))
        .collect();
    if basic.is_empty() || duals.is_empty() {
        return lambda;
    }
    // a[k][l] = coefficient of dual row l in basic column k
    let mut a: Vec<Vec<f64>> = basic
        .iter()
        .map(|&j| duals.iter().map(|&i| p.rows[i].coeffs[j]).collect())
        .collect();
    let mut b: Vec<f64> = basic.iter().map(|&j| -p.objective[j]).collect();
    let cols = duals.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let best = (r..a.len()).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()));
        let Some(piv) = best.filter(|&x| a[x][c].abs() > 1e-9) else {
            continue;
        };
        a.swap(piv, r);
        b.swap(piv, r);
        let inv = 1.0 / a[r][c];
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        b[r] *= inv;
        for i in 0..a.len() {
            if i != r && a[i][c] != 0.0 {
                let f = a[i][c];
                for cc in 0..cols {
                    a[i][cc] -= f * a[r][cc];
                }
                b[i] -= f * b[r];
            }
        }
        pivots.push(c);
        r += 1;
    }
    for (k, &c) in pivots.iter().enumerate() {
        lambda[duals[c]] = b[k];
    }
    lambda
}

/// Lower bound on the minimum of `p` from any row multipliers.
///
/// Multipliers of `<=` rows are clipped at 0; the bound is then
/// `min over the box of c.x + lambda.(A x - b)`, which no feasible point
/// undercuts. Infeasible problems may get any finite value.
pub fn lagrangian_bound(p: &DenseLp<f64>, lambda: &[f64]) -> f64 {
    let lambda: Vec<f64> = p
        .rows
        .iter()
        .zip(lambda)
        .map(|(r, &l)| if r.relation == Relation::Le { l.max(0.0) } else { l })
        .collect();
    let mut bound: f64 = -p.rows.iter().zip(&lambda).map(|(r, l)| l * r.rhs).sum::<f64>();
    for j in 0..p.n {
        let d = p.objective[j] + p.rows.iter().zip(&lambda).map(|(r, l)| l * r.coeffs[j]).sum::<f64>();
        bound += if d >= 0.0 { d * p.lower[j] } else { d * p.upper[j] };
    }
    bound
}

/// Rows joining the working problem per round.
const LAZY_BATCH: usize = 8;

fn row_violation(r: &DenseRow<f64>, x: &[f64]) -> f64 {
    let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
    match r.relation {
        Relation::Le => lhs - r.rhs,
        Relation::Eq => (lhs - r.rhs).abs(),
    }
}

fn restrict<S: Clone>(p: &DenseLp<S>, rows: &[usize]) -> DenseLp<S> {
    DenseLp {
        n: p.n,
        objective: p.objective.clone(),
        rows: rows.iter().map(|&i| p.rows[i].clone()).collect(),
        lower: p.lower.clone(),
        upper: p.upper.clone(),
    }
}

/// Adds the worst rows outside `working` by `violation`. False when none is violated.
fn grow(working: &mut Vec<usize>, violation: impl Fn(usize) -> Option<f64>, m: usize) -> bool {
    let mut out: Vec<(usize, f64)> = (0..m)
        .filter(|i| working.binary_search(i).is_err())
        .filter_map(|i| violation(i).map(|v| (i, v)))
        .collect();
    if out.is_empty() {
        return false;
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (i, _) in out.into_iter().take(LAZY_BATCH) {
        let pos = working.binary_search(&i).unwrap_err();
        working.insert(pos, i);
    }
    true
}

/// Float row generation from `working`. Returns the last run, over the
/// final working rows.
fn float_rounds(p: &DenseLp<f64>, working: &mut Vec<usize>) -> (DenseLp<f64>, RawOutcome<f64>) {
    loop {
        let sub = restrict(p, working);
        let raw = solve_min_approx(&sub);
        let more = raw.status == RawStatus::Optimal
            && grow(
                working,
                |i| Some(row_violation(&p.rows[i], &raw.point)).filter(|&v| v > 1e-9),
                p.rows.len(),
            );
        if !more {
            return (sub, raw);
        }
    }
}

fn initial_rows<S>(p: &DenseLp<S>) -> Vec<usize> {
    (0..p.rows.len()).filter(|&i| p.rows[i].relation == Relation::Eq).collect()
}

/// Exact optimum by row generation.
///
/// The working problem starts with the equality rows. Each round solves it
/// (float, then certified or exact) and adds the rows its optimum violates.
/// An optimum of a relaxation that satisfies every row is optimal, so the
/// answer is exact. Problems with many rows tight at the optimum, like
/// cones through a vertex, stay small this way.
pub fn solve_min_lazy(p: &LpProblem) -> Result<LpOutcome, LpError> {
    p.validate()?;
    let float = DenseLp::<f64>::from_problem(p);
    let mut working = initial_rows(&float);
    loop {
        let (_, raw) = float_rounds(&float, &mut working);
        let sub = LpProblem {
            n: p.n,
            objective: p.objective.clone(),
            constraints: working.iter().map(|&i| p.constraints[i].clone()).collect(),
            bounds: p.bounds.clone(),
        };
        let certified = match (&raw.status, &raw.basis) {
            (RawStatus::Optimal, Some(b)) => certify(&sub, b),
            _ => None,
        };
        let sol = match certified {
            Some(sol) => sol,
            None => match solve_min(&sub)? {
                LpOutcome::Optimal(sol) => sol,
                other => return Ok(other),
            },
        };
        let approx: Vec<f64> = sol.point.iter().map(to_f64).collect();
        let violated = |i: usize| {
            let c = &p.constraints[i];
            (!c.is_satisfied(&sol.point)).then(|| row_violation(&float.rows[i], &approx))
        };
        if !grow(&mut working, violated, p.constraints.len()) {
            return Ok(LpOutcome::Optimal(sol));
        }
    }
}

/// Float row generation followed by a Lagrangian bound on the final working
/// problem. The bound holds for `p` because the working problem relaxes it.
/// `None` when the float run is inconclusive.
pub fn lazy_lower_bound(p: &DenseLp<f64>) -> Option<f64> {
    let mut working = initial_rows(p);
    let (sub, raw) = float_rounds(p, &mut working);
    if raw.status != RawStatus::Optimal {
        return None;
    }
    let lambda = basis_multipliers(&sub, raw.basis.as_ref()?);
    Some(lagrangian_bound(&sub, &lambda).min(raw.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn unit_bounds(n: usize) -> Vec<(Rational, Rational)> {
        vec![(int(0), int(1)); n]
    }

    #[test]
    fn tight_cut() {
        let p = LpProblem::new(
            2,
            vec![int(1), int(1)],
            vec![LinConstraint::le(vec![int(-1), int(-1)], int(-1))],
            unit_bounds(2),
        )
        .unwrap();
        let sol = solve_min(&p).unwrap();
        assert_eq!(sol.optimal().unwrap().value, int(1));
        assert_eq!(solve_min_screened(&p).unwrap().optimal().unwrap().value, int(1));
    }

    #[test]
    fn forced_equality() {
        let p = LpProblem::new(
            1,
            vec![int(1)],
            vec![LinConstraint::le(vec![int(1)], ratio(2, 3)).as_equality()],
            unit_bounds(1),
        )
        .unwrap();
        let sol = solve_min(&p).unwrap();
        let s = sol.optimal().unwrap();
        assert_eq!(s.value, ratio(2, 3));
        assert_eq!(s.point, vec![ratio(2, 3)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let p = LpProblem::new(
            1,
            vec![int(1)],
            vec![LinConstraint::le(vec![int(1)], int(2)).as_equality()],
            unit_bounds(1),
        )
        .unwrap();
        assert_eq!(solve_min(&p).unwrap(), LpOutcome::Infeasible);
        assert_eq!(solve_min_screened(&p).unwrap(), LpOutcome::Infeasible);
        // an unbounded ray needs an unbounded variable: use a slack-like row
        // with every structural bounded, so the solver must report optimal.
        let q = LpProblem::new(
            2,
            vec![int(-1), int(-1)],
            vec![],
            unit_bounds(2),
        )
        .unwrap();
        assert_eq!(solve_min(&q).unwrap().optimal().unwrap().value, int(-2));
    }

    #[test]
    fn maximize_via_negative_costs_and_flips() {
        // max x + y s.t. x + 2y <= 2, bounds [0,1]^2 -> x = 1, y = 1/2
        let p = LpProblem::new(
            2,
            vec![int(-1), int(-1)],
            vec![LinConstraint::le(vec![int(1), int(2)], int(2))],
            unit_bounds(2),
        )
        .unwrap();
        let s = solve_min(&p).unwrap();
        let s = s.optimal().unwrap();
        assert_eq!(s.value, ratio(-3, 2));
        assert_eq!(s.point, vec![int(1), ratio(1, 2)]);
        let f = solve_min_screened(&p).unwrap();
        assert_eq!(f.optimal().unwrap().value, ratio(-3, 2));
    }

    #[test]
    fn malformed_dimensions_rejected() {
        assert!(matches!(
            LpProblem::new(2, vec![int(1)], vec![], unit_bounds(2)),
            Err(LpError::ObjectiveLength { .. })
        ));
        assert!(matches!(
            LpProblem::new(
                1,
                vec![int(1)],
                vec![LinConstraint::le(vec![int(1), int(1)], int(1))],
                unit_bounds(1)
            ),
            Err(LpError::ConstraintLength { index: 0, .. })
        ));
        assert!(matches!(
            LpProblem::new(1, vec![int(1)], vec![], vec![(int(1), int(0))]),
            Err(LpError::InvertedBounds(0))
        ));
    }

    #[test]
    fn linear_system_solver() {
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)], vec![int(2), int(0)]];
        let b = vec![int(3), int(1), int(4)];
        let (x, rank) = solve_linear_system(a.clone(), b, 2).unwrap();
        assert_eq!((x, rank), (vec![int(2), int(1)], 2));
        assert!(solve_linear_system(a, vec![int(3), int(1), int(5)], 2).is_none());
    }

    #[test]
    fn certify_rejects_wrong_basis() {
        let p = LpProblem::new(
            2,
            vec![int(1), int(1)],
            vec![LinConstraint::le(vec![int(-1), int(-1)], int(-1))],
            unit_bounds(2),
        )
        .unwrap();
        // both variables at upper bound: feasible but not optimal
        let basis = Basis {
            structural: vec![VarState::AtUpper, VarState::AtUpper],
            slack_basic: vec![true],
            artificial_basic: vec![false],
        };
        assert!(certify(&p, &basis).is_none());
    }

    #[test]
    fn lagrangian_bound_from_float_basis() {
        let p = LpProblem::new(
            3,
            vec![int(1), int(1), int(1)],
            vec![
                LinConstraint::le(vec![int(-1), int(-1), int(0)], int(-1)),
                LinConstraint::le(vec![int(0), int(-1), int(-1)], int(-1)),
            ],
            unit_bounds(3),
        )
        .unwrap();
        let lp = DenseLp::<f64>::from_problem(&p);
        let raw = solve_min_approx(&lp);
        let lambda = basis_multipliers(&lp, raw.basis.as_ref().unwrap());
        let bound = lagrangian_bound(&lp, &lambda);
        assert!((bound - 1.0).abs() < 1e-9, "{bound}");
        // any multipliers give a bound below the optimum
        for l in [[0.0, 0.0], [2.0, 0.5], [-3.0, 1.0], [0.3, 0.3]] {
            assert!(lagrangian_bound(&lp, &l) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn lazy_matches_full_solve() {
        // cover every pair of 4 variables; the first pair as an equality
        let mut rows = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                let mut c = vec![int(0); 4];
                c[a] = int(-1);
                c[b] = int(-1);
                rows.push(LinConstraint::le(c, int(-1)));
            }
        }
        rows[0] = rows[0].as_equality();
        let p = LpProblem::new(4, vec![int(1), int(2), int(3), int(4)], rows, unit_bounds(4)).unwrap();
        let lazy = solve_min_lazy(&p).unwrap();
        assert_eq!(lazy, solve_min(&p).unwrap());
        assert!(p.is_feasible(&lazy.optimal().unwrap().point));
        let bound = lazy_lower_bound(&DenseLp::from_problem(&p)).unwrap();
        assert!(bound <= to_f64(&lazy.optimal().unwrap().value) + 1e-9);

        let mut q = p.clone();
        q.constraints.push(LinConstraint::le(vec![int(1); 4], int(1)));
        assert_eq!(solve_min_lazy(&q).unwrap(), LpOutcome::Infeasible);
    }
}
