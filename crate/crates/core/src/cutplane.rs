//! Redundant parity checks that cut fractional vertices off `P(H)`.
//!
//! A row `h` in the row space of `H` cuts a vertex `p` when
//! `p_j > sum_{l in Supp(h), l != j} p_l` for the largest coordinate `p_j` on
//! `Supp(h)`. Stacking such a row leaves the code unchanged but removes `p`
//! from the fundamental polytope.

use num_traits::Zero;
use thiserror::Error;

use crate::fracdist::{
    fractional_distance_hinted, fractional_distance_with, FacetHints, FracDistError, FracDistReport, Method,
    SweepOptions,
};
use crate::gf2::{BitMatrix, BitVector, Gf2Error};
use crate::rational::{Rational, RationalVector};

/// Largest `|Q|` accepted by the exhaustive search.
pub const MAX_EXHAUSTIVE_ROWS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("point has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exhaustive search over {q} rows exceeds the limit of {limit}")]
    TooManyRows { q: usize, limit: usize },
    #[error("cannot stack the zero row")]
    ZeroRow,
    #[error("the point to cut is zero")]
    ZeroPoint,
    #[error("exhaustive fallback limit {0} exceeds {MAX_EXHAUSTIVE_ROWS}")]
    FallbackLimit(usize),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    FracDist(#[from] FracDistError),
}

fn check_len(n: usize, p: &[Rational]) -> Result<(), CutError> {
    if p.len() != n {
        return Err(CutError::LengthMismatch {
            expected: n,
            found: p.len(),
        });
    }
    Ok(())
}

/// Whether `U(h)` excludes `p`: the largest coordinate of `p` on `Supp(h)`
/// strictly exceeds the sum of the others there. False for the zero row.
pub fn cutting_condition(p: &[Rational], h: &BitVector) -> Result<bool, CutError> {
    check_len(h.len(), p)?;
    let mut max: Option<&Rational> = None;
    let mut total = Rational::zero();
    for j in h.iter_ones() {
        total += &p[j];
        if max.is_none_or(|m| p[j] > *m) {
            max = Some(&p[j]);
        }
    }
    Ok(match max {
        Some(m) => m.clone() + m > total,
        None => false,
    })
}

/// Rows whose support meets `Supp(p)`.
pub fn support_index_set_q(h: &BitMatrix, p: &[Rational]) -> Result<Vec<usize>, CutError> {
    check_len(h.n(), p)?;
    Ok((0..h.m())
        .filter(|&i| h.row(i).iter_ones().any(|j| !p[j].is_zero()))
        .collect())
}

/// Columns by decreasing `p`, ties to the smaller index.
fn descending_order(p: &[Rational]) -> Vec<usize> {
    let mut tau: Vec<usize> = (0..p.len()).collect();
    tau.sort_by(|&a, &b| p[b].cmp(&p[a]).then(a.cmp(&b)));
    tau
}

/// Echelon-based search: restrict to the rows in `Q`, order the columns as
/// `tau_2, ..., tau_n, tau_1` (decreasing `p`, largest last), reduce to row
/// echelon form and return the first echelon row that cuts `p`.
pub fn search_redundant_row(h: &BitMatrix, p: &[Rational]) -> Result<Option<BitVector>, CutError> {
    check_len(h.n(), p)?;
    if p.iter().all(Zero::is_zero) {
        return Err(CutError::ZeroPoint);
    }
    let q = support_index_set_q(h, p)?;
    if q.is_empty() {
        return Ok(None);
    }
    let hq = h.select_rows(&q)?;
    let tau = descending_order(p);
    let mut order: Vec<usize> = tau[1..].to_vec();
    order.push(tau[0]);
    let ech = hq.row_echelon(&order)?;
    for row in ech.matrix.rows().iter().take(ech.rank) {
        if cutting_condition(p, row)? {
            return Ok(Some(row.clone()));
        }
    }
    Ok(None)
}

/// Every nonzero combination of the `Q` rows that cuts `p`, in ascending
/// coefficient-mask order (bit `b` selects the `b`-th row of `Q`).
pub fn qualifying_rows(h: &BitMatrix, p: &[Rational], limit: usize) -> Result<Vec<(u64, BitVector)>, CutError> {
    let q = support_index_set_q(h, p)?;
    let limit = limit.min(MAX_EXHAUSTIVE_ROWS);
    if q.len() > limit {
        return Err(CutError::TooManyRows { q: q.len(), limit });
    }
    let mut acc = BitVector::zeros(h.n());
    // Gray-code walk: step k flips row `trailing_zeros(k)`
    let mut mask = 0u64;
    let mut hits = Vec::new();
    for k in 1u64..1 << q.len() {
        let b = k.trailing_zeros() as usize;
        acc.xor_assign(h.row(q[b]));
        mask ^= 1 << b;
        if cutting_condition(p, &acc)? {
            hits.push((mask, acc.clone()));
        }
    }
    hits.sort_by_key(|(m, _)| *m);
    Ok(hits)
}

/// First cutting combination of the `Q` rows in ascending mask order.
pub fn exhaustive_cut_search(h: &BitMatrix, p: &[Rational], limit: usize) -> Result<Option<BitVector>, CutError> {
    let q = support_index_set_q(h, p)?;
    let limit = limit.min(MAX_EXHAUSTIVE_ROWS);
    if q.len() > limit {
        return Err(CutError::TooManyRows { q: q.len(), limit });
    }
    for mask in 1u64..1 << q.len() {
        let mut acc = BitVector::zeros(h.n());
        for (b, &i) in q.iter().enumerate() {
            if mask >> b & 1 == 1 {
                acc.xor_assign(h.row(i));
            }
        }
        if cutting_condition(p, &acc)? {
            return Ok(Some(acc));
        }
    }
    Ok(None)
}

/// `H` with `row` appended.
pub fn stack(h: &BitMatrix, row: &BitVector) -> Result<BitMatrix, CutError> {
    if row.len() != h.n() {
        return Err(CutError::LengthMismatch {
            expected: h.n(),
            found: row.len(),
        });
    }
    if row.is_zero() {
        return Err(CutError::ZeroRow);
    }
    Ok(h.with_row(row.clone())?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyConfig {
    /// Maximum number of rows to append.
    pub max_rows: usize,
    /// Stop once `d_frac` reaches this value.
    pub target_dfrac: Option<Rational>,
    /// Largest `|Q|` for which the exhaustive search is tried when the
    /// echelon search finds nothing.
    pub exhaustive_fallback_limit: usize,
    /// Discard rows that lower `d_frac`.
    pub only_improving: bool,
    pub sweep: SweepOptions,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            max_rows: 0,
            target_dfrac: None,
            exhaustive_fallback_limit: 20,
            only_improving: false,
            sweep: SweepOptions::default(),
        }
    }
}

impl GreedyConfig {
    pub fn with_max_rows(max_rows: usize) -> Self {
        Self {
            max_rows,
            ..Self::default()
        }
    }
}

/// One appended row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutRecord {
    pub iteration: usize,
    pub target_vertex: RationalVector,
    pub redundant_row: BitVector,
    pub d_frac_before: Rational,
    pub d_frac_after: Rational,
    pub gamma_size_before: usize,
}

/// Why the greedy loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    NoCut,
    MaxRows,
    TargetReached,
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub matrix: BitMatrix,
    pub log: Vec<CutRecord>,
    pub initial: FracDistReport,
    pub last: FracDistReport,
    pub stop: StopReason,
}

impl GreedyOutcome {
    pub fn d_frac(&self) -> &Rational {
        &self.last.d_frac
    }
}

/// Greedy cutting-plane loop: repeatedly take the minimum-weight vertices in
/// lexicographic order, find a redundant row cutting one of them and stack it.
/// The echelon search is tried on every vertex first; the exhaustive search
/// over `Q` is the fallback.
pub fn greedy_improve(h: &BitMatrix, cfg: &GreedyConfig) -> Result<GreedyOutcome, CutError> {
    greedy_improve_with(h, cfg, |_| {})
}

/// [`greedy_improve`] with a callback after each appended row.
pub fn greedy_improve_with(
    h: &BitMatrix,
    cfg: &GreedyConfig,
    mut on_cut: impl FnMut(&CutRecord),
) -> Result<GreedyOutcome, CutError> {
    if cfg.exhaustive_fallback_limit > MAX_EXHAUSTIVE_ROWS {
        return Err(CutError::FallbackLimit(cfg.exhaustive_fallback_limit));
    }
    let initial = fractional_distance_with(h, Method::Relaxed, cfg.sweep)?;
    let mut matrix = h.clone();
    let mut report = initial.clone();
    let mut log = Vec::new();
    let stop = loop {
        if cfg.target_dfrac.as_ref().is_some_and(|t| report.d_frac >= *t) {
            break StopReason::TargetReached;
        }
        if log.len() >= cfg.max_rows {
            break StopReason::MaxRows;
        }
        let Some((p, row, next, after)) = next_cut(&matrix, &report, cfg)? else {
            break StopReason::NoCut;
        };
        let record = CutRecord {
            iteration: log.len() + 1,
            target_vertex: p,
            redundant_row: row,
            d_frac_before: report.d_frac.clone(),
            d_frac_after: after.d_frac.clone(),
            gamma_size_before: report.gamma.len(),
        };
        on_cut(&record);
        log.push(record);
        matrix = next;
        report = after;
    };
    Ok(GreedyOutcome {
        matrix,
        log,
        initial,
        last: report,
        stop,
    })
}

type Cut = (RationalVector, BitVector, BitMatrix, FracDistReport);

fn next_cut(h: &BitMatrix, report: &FracDistReport, cfg: &GreedyConfig) -> Result<Option<Cut>, CutError> {
    let mut gamma = report.gamma.clone();
    gamma.sort();
    let mut tried: Vec<BitVector> = Vec::new();
    // stacking only shrinks the polytope, so the current sweep bounds the next
    let hints = FacetHints::from_report(h, report);
    for exhaustive in [false, true] {
        for p in &gamma {
            let row = if exhaustive {
                let q = support_index_set_q(h, p)?;
                if q.len() > cfg.exhaustive_fallback_limit {
                    continue;
                }
                exhaustive_cut_search(h, p, cfg.exhaustive_fallback_limit)?
            } else {
                search_redundant_row(h, p)?
            };
            let Some(row) = row else { continue };
            if tried.contains(&row) {
                continue;
            }
            tried.push(row.clone());
            let next = stack(h, &row)?;
            let after = fractional_distance_hinted(&next, Method::Relaxed, cfg.sweep, &hints)?;
            if cfg.only_improving && after.d_frac < report.d_frac {
                continue;
            }
            return Ok(Some((p.clone(), row, next, after)));
        }
    }
    Ok(None)
}
