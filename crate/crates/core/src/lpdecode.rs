//! LP decoding over the fundamental polytope for hard-decision channels.
//!
//! The decoder minimizes `sum_i c_i f_i` over `P(H)` with `c_i = +1` where the
//! received bit is 0 and `-1` where it is 1. Parity inequalities are added
//! on demand: each round solves the current relaxation, asks every row for
//! its most violated odd-subset inequality and stops once none is violated.
//! The final point is an optimal vertex of `P(H)` itself.
//!
//! A binary output is only reported as unambiguous when it is the unique
//! optimum; a second LP over the optimal face checks for ties.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::lp::{certify, simplex, solve_min, DenseLp, LpOutcome, LpProblem, LpSolution, RawStatus};
use crate::polytope::{fundamental_polytope, most_violated_subset, parity_constraint, LinConstraint, PolytopeError};
use crate::rational::{ceil, int, Rational, RationalVector, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("received word has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("fractional distance must be positive")]
    NonPositiveDistance,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// Binary output: a codeword.
    Codeword,
    /// At least one coordinate strictly between 0 and 1.
    Fractional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub output: RationalVector,
    pub objective: Rational,
    /// Another point of `P(H)` attains the same cost (codeword outputs only).
    pub tied: bool,
}

impl DecodeResult {
    fn from_solution(sol: LpSolution) -> Self {
        let binary = sol.point.iter().all(|x| x.is_zero() || x.is_one());
        Self {
            status: if binary {
                DecodeStatus::Codeword
            } else {
                DecodeStatus::Fractional
            },
            output: sol.point,
            objective: sol.value,
            tied: false,
        }
    }

    /// The output as a bit vector when it is a codeword.
    pub fn codeword(&self) -> Option<BitVector> {
        (self.status == DecodeStatus::Codeword)
            .then(|| BitVector::from_bools(&self.output.iter().map(|x| x.is_one()).collect::<Vec<_>>()))
    }

    /// Whether decoding returned exactly `sent` as the unique optimum.
    pub fn recovered(&self, sent: &BitVector) -> bool {
        !self.tied && self.codeword().as_ref() == Some(sent)
    }
}

/// BSC cost vector: `+1` for a received 0, `-1` for a received 1.
pub fn bsc_costs(received: &BitVector) -> Vec<Rational> {
    (0..received.len())
        .map(|i| if received.get(i) { int(-1) } else { int(1) })
        .collect()
}

/// Reusable decoder for one parity-check matrix.
#[derive(Debug, Clone)]
pub struct LpDecoder {
    n: usize,
    supports: Vec<Vec<usize>>,
}

impl LpDecoder {
    pub fn new(h: &BitMatrix) -> Self {
        let mut supports: Vec<Vec<usize>> = h
            .rows()
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| r.support())
            .collect();
        supports.sort();
        supports.dedup();
        Self { n: h.n(), supports }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn decode(&self, received: &BitVector) -> Result<DecodeResult, DecodeError> {
        if received.len() != self.n {
            return Err(DecodeError::LengthMismatch {
                expected: self.n,
                found: received.len(),
            });
        }
        let costs = bsc_costs(received);
        let mut result = DecodeResult::from_solution(self.minimize(costs.clone(), Vec::new()));
        if result.status == DecodeStatus::Codeword {
            result.tied = self.has_tie(&costs, &result);
        }
        Ok(result)
    }

    /// Whether some other point of `P(H)` costs no more than the codeword
    /// output: maximize the distance from it over the optimal level set.
    fn has_tie(&self, costs: &[Rational], result: &DecodeResult) -> bool {
        let objective = result
            .output
            .iter()
            .map(|x| if x.is_one() { int(1) } else { int(-1) })
            .collect();
        let level = LinConstraint::le(costs.to_vec(), result.objective.clone());
        let far = self.minimize(objective, vec![level]);
        // distance from the output = (number of ones) - objective . f
        int(result.output.iter().filter(|x| x.is_one()).count() as i64) - far.value > Rational::zero()
    }

    /// `min objective . f` over `P(H)` intersected with `extra`.
    fn minimize(&self, objective: Vec<Rational>, extra: Vec<LinConstraint>) -> LpSolution {
        let mut prob = LpProblem {
            n: self.n,
            objective,
            constraints: extra,
            bounds: vec![(int(0), int(1)); self.n],
        };
        let mut float = DenseLp::<f64>::from_problem(&prob);
        loop {
            let raw = simplex(&float, Some(50 * (float.rows.len() + self.n) + 1000));
            if raw.status == RawStatus::Optimal {
                // a float point may "violate" rows already present
                let cuts = self.separate(&raw.point);
                if self.add_cuts(&mut prob, &mut float, cuts) {
                    continue;
                }
            }
            let sol = match raw.basis.as_ref().filter(|_| raw.status == RawStatus::Optimal) {
                Some(basis) => certify(&prob, basis),
                None => None,
            };
            let sol = match sol {
                Some(sol) => sol,
                None => match solve_min(&prob).expect("decoding LP is well formed") {
                    LpOutcome::Optimal(sol) => sol,
                    // every system here contains a codeword and is bounded
                    LpOutcome::Infeasible | LpOutcome::Unbounded => unreachable!("feasible bounded LP"),
                },
            };
            let cuts = self.separate(&sol.point);
            if cuts.is_empty() {
                return sol;
            }
            self.add_cuts(&mut prob, &mut float, cuts);
        }
    }

    /// Most violated odd-subset inequality of every row that has one.
    fn separate<S: Scalar>(&self, x: &[S]) -> Vec<LinConstraint> {
        self.supports
            .iter()
            .filter_map(|support| {
                let (subset, excess) = most_violated_subset(support, x)?;
                excess
                    .is_pos()
                    .then(|| parity_constraint(self.n, support, &subset))
            })
            .collect()
    }

    /// Appends the cuts not yet present; true when any was new.
    fn add_cuts(&self, prob: &mut LpProblem, float: &mut DenseLp<f64>, cuts: Vec<LinConstraint>) -> bool {
        let mut added = false;
        for c in cuts {
            if prob.constraints.contains(&c) {
                continue;
            }
            float.rows.push(crate::lp::DenseRow::from_constraint(&c));
            prob.constraints.push(c);
            added = true;
        }
        added
    }
}

/// LP decoding of a hard-decision word.
pub fn lp_decode(h: &BitMatrix, received: &BitVector) -> Result<DecodeResult, DecodeError> {
    LpDecoder::new(h).decode(received)
}

/// LP decoding against the fully enumerated inequality system of `P(H)`.
/// Same optimum as [`lp_decode`]; kept as a reference for small codes.
pub fn lp_decode_enumerated(h: &BitMatrix, received: &BitVector) -> Result<DecodeResult, DecodeError> {
    if received.len() != h.n() {
        return Err(DecodeError::LengthMismatch {
            expected: h.n(),
            found: received.len(),
        });
    }
    let sys = fundamental_polytope(h)?;
    let prob = LpProblem {
        n: h.n(),
        objective: bsc_costs(received),
        constraints: sys
            .constraints
            .into_iter()
            .filter(|(id, _)| matches!(id.kind, crate::polytope::ConstraintKind::Parity { .. }))
            .map(|(_, c)| c)
            .collect(),
        bounds: vec![(int(0), int(1)); h.n()],
    };
    let mut result = match crate::lp::solve_min_screened(&prob).expect("decoding LP is well formed") {
        LpOutcome::Optimal(sol) => DecodeResult::from_solution(sol),
        LpOutcome::Infeasible | LpOutcome::Unbounded => unreachable!("P(H) contains 0"),
    };
    if result.status == DecodeStatus::Codeword {
        result.tied = LpDecoder::new(h).has_tie(&prob.objective, &result);
    }
    Ok(result)
}

/// Number of bit errors LP decoding is guaranteed to correct:
/// `ceil(d_frac / 2 - 1)`.
pub fn guaranteed_errors(d_frac: &Rational) -> Result<u64, DecodeError> {
    if *d_frac <= Rational::zero() {
        return Err(DecodeError::NonPositiveDistance);
    }
    let v = ceil(&(d_frac / int(2) - int(1)));
    Ok(num_traits::ToPrimitive::to_u64(&v).unwrap_or(0))
}
