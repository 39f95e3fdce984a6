//! Fractional distance: the minimum `l1` weight of a nonzero vertex of
//! `P(H)`, found by minimizing `sum f` over each facet.
//!
//! The full method sweeps every facet of `P(H)`. The relaxed method sweeps
//! only the facets that miss the origin and optimizes over the fundamental
//! cone instead of the polytope; both give the same minimum.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::lp::{lazy_lower_bound, solve_min, solve_min_lazy, DenseLp, DenseRow, LpOutcome, LpProblem};
use crate::polytope::{
    check_row_weights, fundamental_cone, fundamental_polytope, in_fundamental_polytope, parity_constraint,
    subsets_of_size, ConstraintId, ConstraintIndexer, ConstraintKind, ConstraintSystem, LinConstraint,
    PolytopeError,
};
use crate::rational::{int, to_f64, Rational, RationalVector};

/// Slack used when comparing float screening values against the best value.
const SCREEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Every facet of `P(H)`.
    Full,
    /// Facets off the origin, optimized over `K(H)`.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FracDistError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("constraint {0} passes through the origin; the relaxed LP is defined for inactive constraints only")]
    ActiveFacet(usize),
    #[error("constraint {0} is not part of the fundamental polytope")]
    UnknownConstraint(usize),
    #[error("the fundamental polytope has no nonzero vertex")]
    NoFractionalVertex,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FacetStatus {
    /// Exact optimum of the facet LP.
    Value(Rational),
    Infeasible,
    /// The facet contains the origin, so its optimum is 0.
    ZeroSkipped,
    /// Float lower bound on the facet minimum, above `d_frac` and not
    /// confirmed exactly.
    Screened(f64),
    /// Skipped: the facet's weight lower bound exceeds the minimum.
    Pruned,
    /// Skipped: the minimum of this facet in an earlier sweep of a larger
    /// polytope already exceeds the minimum.
    Bounded(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetResult {
    pub id: ConstraintId,
    pub status: FacetStatus,
    /// Optimal vertex, present with [`FacetStatus::Value`].
    pub point: Option<RationalVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FracDistReport {
    pub d_frac: Rational,
    pub method: Method,
    /// Distinct minimum-weight vertices found, sorted lexicographically.
    pub gamma: Vec<RationalVector>,
    /// One entry per swept facet, in global constraint order.
    pub per_facet: Vec<FacetResult>,
    /// Facets skipped because their weight lower bound exceeds `d_frac`.
    pub pruned: u64,
}

impl FracDistReport {
    /// Number of facets the sweep was responsible for, pruned ones included.
    pub fn lp_count(&self) -> u64 {
        self.per_facet.len() as u64 + self.pruned
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Solve in floating point first and confirm only near-minimal facets.
    pub screen: bool,
    /// Skip facets whose weight lower bound exceeds the best value so far.
    pub prune: bool,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Also walk the optimal face of each minimal facet for tied vertices.
    pub expand_gamma: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            screen: true,
            prune: true,
            jobs: 0,
            expand_gamma: true,
        }
    }
}

impl SweepOptions {
    /// Every facet solved exactly, nothing skipped.
    pub fn exact() -> Self {
        Self {
            screen: false,
            prune: false,
            jobs: 0,
            expand_gamma: true,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum FacetKey {
    Parity(BitVector, Vec<usize>),
    Lower(usize),
    Upper(usize),
}

fn facet_key(h: &BitMatrix, id: &ConstraintId) -> FacetKey {
    match &id.kind {
        ConstraintKind::Parity { row, subset } => FacetKey::Parity(h.row(*row).clone(), subset.clone()),
        ConstraintKind::BoxLower(i) => FacetKey::Lower(*i),
        ConstraintKind::BoxUpper(i) => FacetKey::Upper(*i),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Hint {
    Infeasible,
    AtLeast(f64),
}

/// Facet minima of an earlier sweep, reused as lower bounds.
///
/// Adding rows to a matrix shrinks both `P(H)` and `K(H)`, so no facet
/// minimum can go down. The hints apply to any matrix that keeps every row
/// of the swept one and are ignored otherwise.
#[derive(Debug, Clone)]
pub struct FacetHints {
    method: Method,
    n: usize,
    rows: HashSet<BitVector>,
    bounds: HashMap<FacetKey, Hint>,
}

impl FacetHints {
    /// Hints from `report`, a sweep of `h`.
    pub fn from_report(h: &BitMatrix, report: &FracDistReport) -> Self {
        let bounds = report
            .per_facet
            .iter()
            .filter_map(|f| {
                let hint = match &f.status {
                    FacetStatus::Value(v) => Hint::AtLeast(to_f64(v)),
                    FacetStatus::Screened(v) | FacetStatus::Bounded(v) => Hint::AtLeast(*v),
                    FacetStatus::Infeasible => Hint::Infeasible,
                    FacetStatus::ZeroSkipped | FacetStatus::Pruned => return None,
                };
                Some((facet_key(h, &f.id), hint))
            })
            .collect();
        Self {
            method: report.method,
            n: h.n(),
            rows: h.rows().iter().cloned().collect(),
            bounds,
        }
    }

    fn applies_to(&self, h: &BitMatrix, method: Method) -> bool {
        let present: HashSet<&BitVector> = h.rows().iter().collect();
        self.method == method && self.n == h.n() && self.rows.iter().all(|r| present.contains(r))
    }

    fn get(&self, h: &BitMatrix, id: &ConstraintId) -> Option<Hint> {
        self.bounds.get(&facet_key(h, id)).copied()
    }
}

/// Runs `f` on a pool with `jobs` threads, or the global pool for 0.
pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// The non-box rows of a system plus the rules for restricting it to a facet.
struct FacetLps {
    n: usize,
    rows: Vec<LinConstraint>,
    row_ids: Vec<usize>,
    float_rows: Vec<DenseRow<f64>>,
}

impl FacetLps {
    fn new(sys: &ConstraintSystem) -> Self {
        let mut rows = Vec::new();
        let mut row_ids = Vec::new();
        for (id, c) in &sys.constraints {
            if matches!(id.kind, ConstraintKind::Parity { .. }) {
                rows.push(c.clone());
                row_ids.push(id.index);
            }
        }
        let float_rows = rows.iter().map(DenseRow::from_constraint).collect();
        Self {
            n: sys.n,
            rows,
            row_ids,
            float_rows,
        }
    }

    /// Rows of the facet LP: the facet row replaces its own inequality, or is
    /// appended when the system does not contain it.
    fn assemble<T: Clone>(&self, base: &[T], id: &ConstraintId, eq: Option<T>) -> Vec<T> {
        let mut out = base.to_vec();
        if let Some(eq) = eq {
            match self.row_ids.binary_search(&id.index) {
                Ok(pos) => out[pos] = eq,
                Err(_) => out.push(eq),
            }
        }
        out
    }

    fn bounds<T: Clone>(&self, id: &ConstraintId, zero: T, one: T) -> Vec<(T, T)> {
        let mut b = vec![(zero.clone(), one.clone()); self.n];
        match id.kind {
            ConstraintKind::BoxLower(i) => b[i] = (zero.clone(), zero),
            ConstraintKind::BoxUpper(i) => b[i] = (one.clone(), one),
            ConstraintKind::Parity { .. } => {}
        }
        b
    }

    fn exact(&self, id: &ConstraintId, c: &LinConstraint) -> LpProblem {
        let eq = matches!(id.kind, ConstraintKind::Parity { .. }).then(|| c.as_equality());
        let bounds = self.bounds(id, int(0), int(1));
        LpProblem {
            n: self.n,
            objective: vec![int(1); self.n],
            constraints: self.assemble(&self.rows, id, eq),
            bounds,
        }
    }

    fn float(&self, id: &ConstraintId, c: &LinConstraint) -> DenseLp<f64> {
        let eq = matches!(id.kind, ConstraintKind::Parity { .. }).then(|| {
            let mut r = DenseRow::from_constraint(c);
            r.relation = crate::polytope::Relation::Eq;
            r
        });
        let bounds = self.bounds(id, 0.0, 1.0);
        DenseLp {
            n: self.n,
            objective: vec![1.0; self.n],
            rows: self.assemble(&self.float_rows, id, eq),
            lower: bounds.iter().map(|b| b.0).collect(),
            upper: bounds.iter().map(|b| b.1).collect(),
        }
    }

    /// Exact optimum; `lazy` grows the row set from float guesses instead of
    /// running the exact simplex on every row.
    fn solve_exact(&self, id: &ConstraintId, c: &LinConstraint, lazy: bool) -> (FacetStatus, Option<RationalVector>) {
        let prob = self.exact(id, c);
        let out = if lazy { solve_min_lazy(&prob) } else { solve_min(&prob) };
        match out.expect("facet LP is well formed") {
            LpOutcome::Optimal(sol) => (FacetStatus::Value(sol.value), Some(sol.point)),
            LpOutcome::Infeasible => (FacetStatus::Infeasible, None),
            LpOutcome::Unbounded => unreachable!("all variables are bounded"),
        }
    }

    /// Vertices of the facet's minimum-weight face reached by minimizing and
    /// maximizing each coordinate at weight `d`.
    fn face_vertices(&self, id: &ConstraintId, c: &LinConstraint, d: &Rational) -> Vec<RationalVector> {
        let mut prob = self.exact(id, c);
        prob.constraints
            .push(LinConstraint::le(vec![int(1); self.n], d.clone()).as_equality());
        let mut out = Vec::new();
        for j in 0..self.n {
            for sign in [-1, 1] {
                prob.objective = vec![int(0); self.n];
                prob.objective[j] = int(sign);
                if let Ok(LpOutcome::Optimal(sol)) = solve_min_lazy(&prob) {
                    out.push(sol.point);
                }
            }
        }
        out
    }

    /// Lower bound from the multipliers of a float run, or `None` when the
    /// run is inconclusive. Float error can only make the bound weaker.
    fn solve_float(&self, id: &ConstraintId, c: &LinConstraint) -> Option<f64> {
        lazy_lower_bound(&self.float(id, c))
    }
}

fn find_constraint<'a>(sys: &'a ConstraintSystem, id: &ConstraintId) -> Option<&'a LinConstraint> {
    sys.constraints
        .iter()
        .find(|(cid, _)| cid.index == id.index)
        .map(|(_, c)| c)
}

/// Exact minimum of `sum f` over a single facet.
///
/// With `relaxed` the LP is taken over `K(H)` and `id` must be inactive.
pub fn facet_min_weight(h: &BitMatrix, id: &ConstraintId, relaxed: bool) -> Result<FacetResult, FracDistError> {
    let poly = fundamental_polytope(h)?;
    let c = find_constraint(&poly, id).ok_or(FracDistError::UnknownConstraint(id.index))?;
    if relaxed && id.is_active() {
        return Err(FracDistError::ActiveFacet(id.index));
    }
    if !relaxed && id.is_active() {
        return Ok(FacetResult {
            id: id.clone(),
            status: FacetStatus::ZeroSkipped,
            point: None,
        });
    }
    let lps = if relaxed {
        FacetLps::new(&fundamental_cone(h)?)
    } else {
        FacetLps::new(&poly)
    };
    let (status, point) = lps.solve_exact(id, c, true);
    Ok(FacetResult {
        id: id.clone(),
        status,
        point,
    })
}

/// `d_frac(H)` with default sweep options.
pub fn fractional_distance(h: &BitMatrix, method: Method) -> Result<FracDistReport, FracDistError> {
    fractional_distance_with(h, method, SweepOptions::default())
}

/// Minimum-weight vertices with default options.
pub fn gamma_set(h: &BitMatrix) -> Result<Vec<RationalVector>, FracDistError> {
    Ok(fractional_distance(h, Method::Relaxed)?.gamma)
}

/// Facets to sweep, produced one weight-bound class at a time.
enum FacetSource {
    Listed(Vec<ConstraintId>),
    /// Inactive facets of `P(H)`: odd subsets of size at least 3 and the
    /// upper box facets.
    Inactive {
        n: usize,
        rows: Vec<(usize, Vec<usize>)>,
        idx: ConstraintIndexer,
    },
}

impl FacetSource {
    fn inactive(h: &BitMatrix) -> Self {
        let mut seen = HashSet::new();
        let rows = h
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero() && seen.insert(*t))
            .map(|(i, t)| (i, t.support()))
            .collect();
        FacetSource::Inactive {
            n: h.n(),
            rows,
            idx: ConstraintIndexer::new(h),
        }
    }

    fn bounds(&self) -> Vec<usize> {
        match self {
            FacetSource::Listed(ids) => ids
                .iter()
                .map(|id| id.facet_weight_lower_bound())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            FacetSource::Inactive { n, rows, .. } => {
                let max_w = rows.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
                let mut b: BTreeSet<usize> = (3..=max_w).step_by(2).map(|s| s - 1).collect();
                if *n > 0 {
                    b.insert(1);
                }
                b.into_iter().collect()
            }
        }
    }

    fn group(&self, bound: usize) -> Vec<ConstraintId> {
        match self {
            FacetSource::Listed(ids) => ids
                .iter()
                .filter(|id| id.facet_weight_lower_bound() == bound)
                .cloned()
                .collect(),
            FacetSource::Inactive { n, rows, idx } => {
                let mut out = Vec::new();
                let size = bound + 1;
                for (row, support) in rows.iter().filter(|_| size >= 3 && size % 2 == 1) {
                    for (mask, subset) in subsets_of_size(support, size) {
                        out.push(ConstraintId {
                            index: idx.parity(*row, mask),
                            kind: ConstraintKind::Parity { row: *row, subset },
                        });
                    }
                }
                if bound == 1 {
                    out.extend((0..*n).map(|i| ConstraintId {
                        index: idx.box_upper(i),
                        kind: ConstraintKind::BoxUpper(i),
                    }));
                }
                out.sort_by_key(|id| id.index);
                out
            }
        }
    }

    fn count(&self, bound: usize) -> u64 {
        match self {
            FacetSource::Listed(_) => self.group(bound).len() as u64,
            FacetSource::Inactive { n, rows, .. } => {
                let size = bound as u64 + 1;
                let parity: u64 = if size >= 3 && size % 2 == 1 {
                    rows.iter().map(|(_, s)| binomial(s.len() as u64, size)).sum()
                } else {
                    0
                };
                parity + if bound == 1 { *n as u64 } else { 0 }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The inequality a constraint id stands for.
fn constraint_of(h: &BitMatrix, id: &ConstraintId) -> LinConstraint {
    let n = h.n();
    let unit = |i: usize, sign: i64, rhs: i64| {
        let mut a = vec![int(0); n];
        a[i] = int(sign);
        LinConstraint::le(a, int(rhs))
    };
    match &id.kind {
        ConstraintKind::Parity { row, subset } => parity_constraint(n, &h.row(*row).support(), subset),
        ConstraintKind::BoxLower(i) => unit(*i, -1, 0),
        ConstraintKind::BoxUpper(i) => unit(*i, 1, 1),
    }
}

struct Slot {
    id: ConstraintId,
    status: Option<FacetStatus>,
    point: Option<RationalVector>,
    float: Option<f64>,
}

impl Slot {
    fn new(id: ConstraintId) -> Self {
        Self {
            id,
            status: None,
            point: None,
            float: None,
        }
    }

    fn is_exact(&self) -> bool {
        matches!(
            self.status,
            Some(FacetStatus::Value(_)) | Some(FacetStatus::Infeasible) | Some(FacetStatus::ZeroSkipped)
        )
    }
}

pub fn fractional_distance_with(
    h: &BitMatrix,
    method: Method,
    opts: SweepOptions,
) -> Result<FracDistReport, FracDistError> {
    sweep_report(h, method, opts, None)
}

/// [`fractional_distance_with`] reusing facet minima from a sweep of a
/// matrix whose rows `h` contains. The minimum and `Γ` are unchanged;
/// facets whose inherited bound is above the minimum are not solved.
pub fn fractional_distance_hinted(
    h: &BitMatrix,
    method: Method,
    opts: SweepOptions,
    hints: &FacetHints,
) -> Result<FracDistReport, FracDistError> {
    sweep_report(h, method, opts, Some(hints).filter(|x| x.applies_to(h, method)))
}

fn sweep_report(
    h: &BitMatrix,
    method: Method,
    opts: SweepOptions,
    hints: Option<&FacetHints>,
) -> Result<FracDistReport, FracDistError> {
    check_row_weights(h)?;
    let (lps, source) = match method {
        Method::Full => {
            let poly = fundamental_polytope(h)?;
            let ids = poly.constraints.iter().map(|(id, _)| id.clone()).collect();
            (FacetLps::new(&poly), FacetSource::Listed(ids))
        }
        Method::Relaxed => (FacetLps::new(&fundamental_cone(h)?), FacetSource::inactive(h)),
    };
    let sweep = with_pool(opts.jobs, || Sweep::new(h, &lps, opts, hints).run(&source));
    let Sweep { mut slots, pruned, .. } = sweep;
    slots.sort_by_key(|s| s.id.index);

    let d_frac = best_exact(&slots).ok_or(FracDistError::NoFractionalVertex)?;
    let minimal: Vec<&Slot> = slots
        .iter()
        .filter(|s| s.status == Some(FacetStatus::Value(d_frac.clone())))
        .collect();
    let mut candidates: Vec<RationalVector> = minimal.iter().filter_map(|s| s.point.clone()).collect();
    if opts.expand_gamma {
        let extra: Vec<Vec<RationalVector>> = with_pool(opts.jobs, || {
            minimal
                .par_iter()
                .map(|s| lps.face_vertices(&s.id, &constraint_of(h, &s.id), &d_frac))
                .collect()
        });
        candidates.extend(extra.into_iter().flatten());
    }
    let mut gamma = BTreeSet::new();
    for p in candidates {
        if !gamma.contains(&p) && (method == Method::Full || in_fundamental_polytope(h, &p)?) {
            gamma.insert(p);
        }
    }
    let per_facet = slots
        .into_iter()
        .map(|s| FacetResult {
            id: s.id,
            status: s.status.expect("every swept facet is resolved"),
            point: s.point,
        })
        .collect();
    Ok(FracDistReport {
        d_frac,
        method,
        gamma: gamma.into_iter().collect(),
        per_facet,
        pruned,
    })
}

fn best_exact(slots: &[Slot]) -> Option<Rational> {
    slots
        .iter()
        .filter_map(|s| match &s.status {
            Some(FacetStatus::Value(v)) => Some(v.clone()),
            _ => None,
        })
        .min()
}

struct Sweep<'a> {
    h: &'a BitMatrix,
    lps: &'a FacetLps,
    opts: SweepOptions,
    hints: Option<&'a FacetHints>,
    slots: Vec<Slot>,
    /// Facets skipped without being listed.
    pruned: u64,
    /// Bound classes skipped, kept so they can be revisited.
    skipped: Vec<usize>,
}

impl<'a> Sweep<'a> {
    fn new(h: &'a BitMatrix, lps: &'a FacetLps, opts: SweepOptions, hints: Option<&'a FacetHints>) -> Self {
        Self {
            h,
            lps,
            opts,
            hints,
            slots: Vec::new(),
            pruned: 0,
            skipped: Vec::new(),
        }
    }

    fn solve_exact(&mut self, idx: &[usize]) {
        let (h, lps, hint) = (self.h, self.lps, self.opts.screen);
        let results: Vec<_> = idx
            .par_iter()
            .map(|&i| {
                let id = &self.slots[i].id;
                lps.solve_exact(id, &constraint_of(h, id), hint)
            })
            .collect();
        for (&i, (status, point)) in idx.iter().zip(results) {
            self.slots[i].status = Some(status);
            self.slots[i].point = point;
        }
    }

    fn solve_float(&mut self, idx: &[usize]) {
        let (h, lps) = (self.h, self.lps);
        let values: Vec<Option<f64>> = idx
            .par_iter()
            .map(|&i| {
                let id = &self.slots[i].id;
                lps.solve_float(id, &constraint_of(h, id))
            })
            .collect();
        for (&i, v) in idx.iter().zip(values) {
            self.slots[i].float = v;
            if let Some(v) = v {
                self.slots[i].status = Some(FacetStatus::Screened(v));
            }
        }
    }

    fn solve(&mut self, idx: &[usize]) {
        if self.opts.screen {
            self.solve_float(idx);
        } else {
            self.solve_exact(idx);
        }
    }

    /// Separates facets with an inherited bound; inherited infeasibility is
    /// final.
    fn split_hinted(&mut self, todo: Vec<usize>) -> (Vec<usize>, Vec<(usize, f64)>) {
        let Some(hints) = self.hints else {
            return (todo, Vec::new());
        };
        let mut fresh = Vec::new();
        let mut inherited = Vec::new();
        for i in todo {
            match hints.get(self.h, &self.slots[i].id) {
                None => fresh.push(i),
                Some(Hint::Infeasible) => self.slots[i].status = Some(FacetStatus::Infeasible),
                Some(Hint::AtLeast(b)) => inherited.push((i, b)),
            }
        }
        (fresh, inherited)
    }

    /// Solves inherited facets in increasing order of their bound until the
    /// bound passes the best value; the rest keep the bound.
    fn solve_inherited(&mut self, mut inherited: Vec<(usize, f64)>) {
        inherited.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let chunk = 4 * rayon::current_num_threads().max(2);
        let mut next = 0;
        while next < inherited.len() {
            let limit = self.current_best() + SCREEN_TOL;
            let batch: Vec<usize> = inherited[next..]
                .iter()
                .take(chunk)
                .take_while(|(_, b)| *b <= limit)
                .map(|(i, _)| *i)
                .collect();
            if batch.is_empty() {
                break;
            }
            next += batch.len();
            self.solve(&batch);
        }
        for &(i, b) in &inherited[next..] {
            self.slots[i].float = Some(b);
            self.slots[i].status = Some(FacetStatus::Bounded(b));
        }
    }

    /// Appends a bound class and returns the positions of its facets that
    /// still need an LP.
    fn add_group(&mut self, source: &FacetSource, bound: usize) -> Vec<usize> {
        let mut todo = Vec::new();
        for id in source.group(bound) {
            let mut slot = Slot::new(id);
            if slot.id.is_active() {
                // the origin lies on the facet
                slot.status = Some(FacetStatus::ZeroSkipped);
            } else {
                todo.push(self.slots.len());
            }
            self.slots.push(slot);
        }
        todo
    }

    fn current_best(&self) -> f64 {
        if self.opts.screen {
            self.slots
                .iter()
                .filter_map(|s| s.float)
                .fold(f64::INFINITY, f64::min)
        } else {
            best_exact(&self.slots).map_or(f64::INFINITY, |b| to_f64(&b))
        }
    }

    fn estimate(&self) -> f64 {
        self.slots
            .iter()
            .filter_map(|s| match &s.status {
                Some(FacetStatus::Value(v)) => Some(to_f64(v)),
                Some(FacetStatus::Infeasible | FacetStatus::ZeroSkipped) => None,
                _ => s.float,
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn run(mut self, source: &FacetSource) -> Self {
        for bound in source.bounds() {
            let best = self.current_best();
            if self.opts.prune && bound as f64 > best + SCREEN_TOL {
                self.pruned += source.count(bound);
                self.skipped.push(bound);
                continue;
            }
            let todo = self.add_group(source, bound);
            let (fresh, inherited) = self.split_hinted(todo);
            self.solve(&fresh);
            self.solve_inherited(inherited);
        }
        if !self.opts.screen {
            return self;
        }
        // exact confirmation, lowest bound first, of every facet whose bound
        // reaches the running minimum estimate (exact values where known,
        // float bounds elsewhere)
        let chunk = 4 * rayon::current_num_threads().max(2);
        loop {
            let threshold = self.estimate() + SCREEN_TOL;
            if let Some(pos) = self.skipped.iter().position(|&b| b as f64 <= threshold) {
                let b = self.skipped.remove(pos);
                self.pruned -= source.count(b);
                let todo = self.add_group(source, b);
                let (fresh, inherited) = self.split_hinted(todo);
                self.solve_float(&fresh);
                self.solve_inherited(inherited);
                continue;
            }
            let mut pending: Vec<(f64, usize)> = self
                .slots
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_exact())
                .map(|(i, s)| (s.float.unwrap_or(f64::NEG_INFINITY), i))
                .filter(|(v, _)| *v <= threshold)
                .collect();
            if pending.is_empty() {
                break;
            }
            pending.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let batch: Vec<usize> = pending.iter().take(chunk).map(|&(_, i)| i).collect();
            self.solve_exact(&batch);
        }
        self
    }
}
