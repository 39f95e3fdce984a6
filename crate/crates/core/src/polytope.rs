//! Linear descriptions of the single parity polytope, the fundamental polytope
//! and the fundamental cone of a parity-check matrix.
//!
//! Every parity inequality is kept in the normalized form
//! `sum_{j in S} f_j - sum_{j in Supp(t) \ S} f_j <= |S| - 1`, so all
//! coefficients are in `{-1, 0, 1}` and a constraint passes through the origin
//! exactly when its right-hand side is zero.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVector};
use crate::rational::{int, Rational, Scalar};

/// Rows heavier than this are refused: they would need `2^(w-1)` inequalities.
pub const MAX_ROW_WEIGHT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("point has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("row {row} has weight {weight}; at most {MAX_ROW_WEIGHT} is supported")]
    RowTooHeavy { row: usize, weight: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Eq,
}

/// `coeffs . f (<= | =) rhs`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub relation: Relation,
}

impl LinConstraint {
    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self {
            coeffs,
            rhs,
            relation: Relation::Le,
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, p: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(p)
            .filter(|(a, _)| !a.is_nil())
            .map(|(a, x)| a * x)
            .sum()
    }

    pub fn is_satisfied(&self, p: &[Rational]) -> bool {
        let lhs = self.lhs(p);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// The hyperplane of this inequality, as an equality.
    pub fn as_equality(&self) -> Self {
        Self {
            relation: Relation::Eq,
            ..self.clone()
        }
    }
}

/// What a constraint encodes. Indices are 0-based columns/rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// Odd subset `subset` of the support of row `row`.
    Parity { row: usize, subset: Vec<usize> },
    /// `-f_i <= 0`
    BoxLower(usize),
    /// `f_i <= 1`
    BoxUpper(usize),
}

/// A constraint together with its global position in the enumeration
/// (rows in order, subsets by ascending mask, then lower, then upper bounds).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintId {
    pub index: usize,
    pub kind: ConstraintKind,
}

impl ConstraintId {
    /// Whether the hyperplane passes through the origin.
    pub fn is_active(&self) -> bool {
        match &self.kind {
            ConstraintKind::Parity { subset, .. } => subset.len() == 1,
            ConstraintKind::BoxLower(_) => true,
            ConstraintKind::BoxUpper(_) => false,
        }
    }

    /// A lower bound on `sum f` over the facet of this constraint inside the
    /// unit cube: parity facets force `sum_{S} f >= |S| - 1`, upper box facets
    /// force one coordinate to 1.
    pub fn facet_weight_lower_bound(&self) -> usize {
        match &self.kind {
            ConstraintKind::Parity { subset, .. } => subset.len() - 1,
            ConstraintKind::BoxLower(_) => 0,
            ConstraintKind::BoxUpper(_) => 1,
        }
    }
}

/// Normalized coefficients of a parity inequality as `-1/0/+1`.
pub fn parity_coefficients(n: usize, support: &[usize], subset: &[usize]) -> Vec<i8> {
    let mut a = vec![0i8; n];
    for &j in support {
        a[j] = -1;
    }
    for &j in subset {
        a[j] = 1;
    }
    a
}

fn to_constraint(a: &[i8], rhs: i64) -> LinConstraint {
    LinConstraint::le(a.iter().map(|&v| int(v as i64)).collect(), int(rhs))
}

/// Position of `mask` among the odd-popcount integers in ascending order.
fn odd_rank(mask: u64) -> u64 {
    // count odd-popcount integers in [0, mask)
    let mut count = 0u64;
    let mut prefix_parity = 0u32;
    for b in (0..64).rev() {
        if mask >> b & 1 == 1 {
            // integers with the current prefix, bit b = 0, and any low b bits
            if b == 0 {
                count += (prefix_parity % 2) as u64;
            } else {
                count += 1u64 << (b - 1);
            }
            prefix_parity += 1;
        }
    }
    count
}

/// Odd subsets of `support`, in ascending mask order, as (mask, subset).
pub fn odd_subsets(support: &[usize]) -> impl Iterator<Item = (u64, Vec<usize>)> + '_ {
    let w = support.len();
    let end = if w == 0 { 0 } else { 1u64 << w };
    (1..end).filter(|m| m.count_ones() % 2 == 1).map(move |mask| {
        let subset = (0..w)
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| support[b])
            .collect();
        (mask, subset)
    })
}

/// Subsets of `support` with exactly `size` elements, as (mask, subset).
pub fn subsets_of_size(support: &[usize], size: usize) -> Vec<(u64, Vec<usize>)> {
    let w = support.len();
    let mut out = Vec::new();
    if size > w {
        return out;
    }
    let mut pos: Vec<usize> = (0..size).collect();
    loop {
        let mask = pos.iter().fold(0u64, |m, &b| m | 1 << b);
        out.push((mask, pos.iter().map(|&b| support[b]).collect()));
        // advance to the next combination
        let Some(i) = (0..size).rev().find(|&i| pos[i] < w - size + i) else {
            return out;
        };
        pos[i] += 1;
        for k in i + 1..size {
            pos[k] = pos[k - 1] + 1;
        }
    }
}

/// The normalized inequality of `U(t)` for odd subset `subset` of `support`.
pub fn parity_constraint(n: usize, support: &[usize], subset: &[usize]) -> LinConstraint {
    to_constraint(&parity_coefficients(n, support, subset), subset.len() as i64 - 1)
}

pub(crate) fn check_row_weights(h: &BitMatrix) -> Result<(), PolytopeError> {
    for (row, &weight) in h.row_weights().iter().enumerate() {
        if weight > MAX_ROW_WEIGHT {
            return Err(PolytopeError::RowTooHeavy { row, weight });
        }
    }
    Ok(())
}

/// Global index layout of a matrix's constraint enumeration.
#[derive(Debug, Clone)]
pub struct ConstraintIndexer {
    row_offsets: Vec<usize>,
    parity_total: usize,
    n: usize,
}

impl ConstraintIndexer {
    pub fn new(h: &BitMatrix) -> Self {
        let mut row_offsets = Vec::with_capacity(h.m());
        let mut acc = 0usize;
        for w in h.row_weights() {
            row_offsets.push(acc);
            if w > 0 {
                acc = acc.saturating_add(1usize << (w - 1).min(62));
            }
        }
        Self {
            row_offsets,
            parity_total: acc,
            n: h.n(),
        }
    }

    pub fn parity(&self, row: usize, mask: u64) -> usize {
        self.row_offsets[row] + odd_rank(mask) as usize
    }

    pub fn box_lower(&self, i: usize) -> usize {
        self.parity_total + i
    }

    pub fn box_upper(&self, i: usize) -> usize {
        self.parity_total + self.n + i
    }

    /// `M`, the length of the full enumeration.
    pub fn total(&self) -> usize {
        self.parity_total + 2 * self.n
    }
}

/// All inequalities of the single parity polytope of `t`, tagged with row
/// index `row` and numbered locally from zero.
pub fn parity_constraints(t: &BitVector, row: usize) -> Vec<(ConstraintId, LinConstraint)> {
    let support = t.support();
    let n = t.len();
    odd_subsets(&support)
        .enumerate()
        .map(|(index, (_, subset))| {
            let a = parity_coefficients(n, &support, &subset);
            let rhs = subset.len() as i64 - 1;
            (
                ConstraintId {
                    index,
                    kind: ConstraintKind::Parity { row, subset },
                },
                to_constraint(&a, rhs),
            )
        })
        .collect()
}

/// A list of constraints plus the active/inactive split.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub n: usize,
    pub constraints: Vec<(ConstraintId, LinConstraint)>,
    /// Positions in `constraints` whose hyperplane contains the origin.
    pub active: Vec<usize>,
    pub inactive: Vec<usize>,
}

impl ConstraintSystem {
    fn from_constraints(n: usize, constraints: Vec<(ConstraintId, LinConstraint)>) -> Self {
        let (active, inactive) =
            (0..constraints.len()).partition(|&i| constraints[i].1.rhs.is_nil());
        Self {
            n,
            constraints,
            active,
            inactive,
        }
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Exact membership test: every constraint holds with no tolerance.
    pub fn contains(&self, p: &[Rational]) -> Result<bool, PolytopeError> {
        if p.len() != self.n {
            return Err(PolytopeError::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        Ok(self.constraints.iter().all(|(_, c)| c.is_satisfied(p)))
    }
}

fn box_constraints(idx: &ConstraintIndexer, n: usize) -> Vec<(ConstraintId, LinConstraint)> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut a = vec![0i8; n];
        a[i] = -1;
        out.push((
            ConstraintId {
                index: idx.box_lower(i),
                kind: ConstraintKind::BoxLower(i),
            },
            to_constraint(&a, 0),
        ));
    }
    for i in 0..n {
        let mut a = vec![0i8; n];
        a[i] = 1;
        out.push((
            ConstraintId {
                index: idx.box_upper(i),
                kind: ConstraintKind::BoxUpper(i),
            },
            to_constraint(&a, 1),
        ));
    }
    out
}

/// The full inequality description of `P(H)`, duplicates removed.
pub fn fundamental_polytope(h: &BitMatrix) -> Result<ConstraintSystem, PolytopeError> {
    check_row_weights(h)?;
    let n = h.n();
    let idx = ConstraintIndexer::new(h);
    let mut seen: HashSet<(Vec<i8>, i64)> = HashSet::new();
    let mut constraints = Vec::new();
    for (row, t) in h.rows().iter().enumerate() {
        let support = t.support();
        for (mask, subset) in odd_subsets(&support) {
            let a = parity_coefficients(n, &support, &subset);
            let rhs = subset.len() as i64 - 1;
            if !seen.insert((a.clone(), rhs)) {
                continue;
            }
            constraints.push((
                ConstraintId {
                    index: idx.parity(row, mask),
                    kind: ConstraintKind::Parity { row, subset },
                },
                to_constraint(&a, rhs),
            ));
        }
    }
    constraints.extend(box_constraints(&idx, n));
    Ok(ConstraintSystem::from_constraints(n, constraints))
}

/// `K(H)`: the active inequalities of `P(H)` together with the unit box.
pub fn fundamental_cone(h: &BitMatrix) -> Result<ConstraintSystem, PolytopeError> {
    let n = h.n();
    let idx = ConstraintIndexer::new(h);
    let mut seen: HashSet<Vec<i8>> = HashSet::new();
    let mut constraints = Vec::new();
    for (row, t) in h.rows().iter().enumerate() {
        let support = t.support();
        for (b, &j) in support.iter().enumerate() {
            let a = parity_coefficients(n, &support, &[j]);
            if !seen.insert(a.clone()) {
                continue;
            }
            constraints.push((
                ConstraintId {
                    index: idx.parity(row, 1u64 << b),
                    kind: ConstraintKind::Parity {
                        row,
                        subset: vec![j],
                    },
                },
                to_constraint(&a, 0),
            ));
        }
    }
    constraints.extend(box_constraints(&idx, n));
    Ok(ConstraintSystem::from_constraints(n, constraints))
}

/// The most violated inequality of `U(t)` at `p`, restricted to the
/// parity part (the box is checked separately).
///
/// Returns the odd subset maximizing `sum_S p_j + sum_{rest} (1 - p_j)` and
/// the amount by which that sum exceeds `|Supp(t)| - 1`; the subset is
/// violated iff the excess is positive.
pub fn most_violated_subset<S: Scalar>(support: &[usize], p: &[S]) -> Option<(Vec<usize>, S)> {
    if support.is_empty() {
        return None;
    }
    let half = S::unit().div(&S::from_i64(2));
    let mut inside: Vec<bool> = support.iter().map(|&j| p[j] > half).collect();
    if inside.iter().filter(|&&b| b).count() % 2 == 0 {
        // toggle the coordinate closest to 1/2; ties go to the lower index
        let mut best: Option<(usize, S)> = None;
        for (b, &j) in support.iter().enumerate() {
            let d = p[j].sub(&half);
            let dist = if d.is_neg() { d.neg() } else { d };
            if best.as_ref().is_none_or(|(_, bd)| dist < *bd) {
                best = Some((b, dist));
            }
        }
        let (b, _) = best.expect("nonempty support");
        inside[b] = !inside[b];
    }
    let mut lhs = S::nil();
    let mut subset = Vec::new();
    for (b, &j) in support.iter().enumerate() {
        if inside[b] {
            lhs = lhs.add(&p[j]);
            subset.push(j);
        } else {
            lhs = lhs.add(&S::unit().sub(&p[j]));
        }
    }
    let excess = lhs.sub(&S::from_i64(support.len() as i64 - 1));
    Some((subset, excess))
}

fn in_unit_box(p: &[Rational]) -> bool {
    let one = int(1);
    p.iter().all(|x| !num_traits::Signed::is_negative(x) && *x <= one)
}

/// Exact membership in `U(t)` without enumerating its inequalities.
pub fn in_parity_polytope(t: &BitVector, p: &[Rational]) -> Result<bool, PolytopeError> {
    if p.len() != t.len() {
        return Err(PolytopeError::LengthMismatch {
            expected: t.len(),
            found: p.len(),
        });
    }
    if !in_unit_box(p) {
        return Ok(false);
    }
    Ok(match most_violated_subset(&t.support(), p) {
        Some((_, excess)) => !excess.is_pos(),
        None => true,
    })
}

/// Exact membership in `P(H)` by separation, linear in the number of ones.
pub fn in_fundamental_polytope(h: &BitMatrix, p: &[Rational]) -> Result<bool, PolytopeError> {
    if p.len() != h.n() {
        return Err(PolytopeError::LengthMismatch {
            expected: h.n(),
            found: p.len(),
        });
    }
    if !in_unit_box(p) {
        return Ok(false);
    }
    for t in h.rows() {
        if let Some((_, excess)) = most_violated_subset(&t.support(), p) {
            if excess.is_pos() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn hamming() -> BitMatrix {
        BitMatrix::from_strs(&["1011100", "1101010", "0111001"]).unwrap()
    }

    fn p_two_thirds() -> Vec<Rational> {
        let t = ratio(2, 3);
        vec![int(0), t.clone(), t.clone(), t, int(0), int(0), int(0)]
    }

    #[test]
    fn odd_rank_matches_enumeration() {
        let odd: Vec<u64> = (0..256u64).filter(|m| m.count_ones() % 2 == 1).collect();
        for (pos, &m) in odd.iter().enumerate() {
            assert_eq!(odd_rank(m), pos as u64, "mask {m}");
        }
    }

    #[test]
    fn first_hamming_row_subsets() {
        let h = hamming();
        let cons = parity_constraints(h.row(0), 0);
        assert_eq!(cons.len(), 8);
        let mut subsets: Vec<Vec<usize>> = cons
            .iter()
            .map(|(id, _)| match &id.kind {
                ConstraintKind::Parity { subset, .. } => {
                    subset.iter().map(|j| j + 1).collect()
                }
                _ => unreachable!(),
            })
            .collect();
        subsets.sort();
        let mut expected = vec![
            vec![1],
            vec![3],
            vec![4],
            vec![5],
            vec![3, 4, 5],
            vec![1, 4, 5],
            vec![1, 3, 5],
            vec![1, 3, 4],
        ];
        expected.sort();
        assert_eq!(subsets, expected);
    }

    #[test]
    fn singleton_support_and_zero_vector() {
        let t = BitVector::from_support(5, &[2]);
        let cons = parity_constraints(&t, 0);
        assert_eq!(cons.len(), 1);
        assert_eq!(cons[0].1.coeffs[2], int(1));
        assert!(cons[0].1.rhs.is_nil());
        assert!(parity_constraints(&BitVector::zeros(5), 0).is_empty());
    }

    #[test]
    fn hamming_polytope_counts() {
        let sys = fundamental_polytope(&hamming()).unwrap();
        assert_eq!(sys.len(), 24 + 14);
        assert_eq!(sys.active.len(), 12 + 7);
        assert_eq!(sys.inactive.len(), 12 + 7);
        let origin = vec![int(0); 7];
        for (id, c) in &sys.constraints {
            // active iff the origin is on the hyperplane
            assert_eq!(id.is_active(), c.lhs(&origin) == c.rhs);
        }
        let ids: Vec<usize> = sys.constraints.iter().map(|(id, _)| id.index).collect();
        assert_eq!(ids, (0..38).collect::<Vec<_>>());
    }

    #[test]
    fn fixed_size_subsets_match_filtered_enumeration() {
        let support = [0, 2, 3, 5, 8, 9];
        for size in [1, 3, 5, 7] {
            let mut expected: Vec<_> = odd_subsets(&support)
                .filter(|(_, s)| s.len() == size)
                .collect();
            expected.sort();
            let mut got = subsets_of_size(&support, size);
            got.sort();
            assert_eq!(got, expected, "size {size}");
        }
        assert_eq!(subsets_of_size(&[4], 0), vec![(0, vec![])]);
    }

    #[test]
    fn two_thirds_point_membership() {
        let h = hamming();
        let p = fundamental_polytope(&h).unwrap();
        let k = fundamental_cone(&h).unwrap();
        assert!(p.contains(&p_two_thirds()).unwrap());
        assert!(k.contains(&p_two_thirds()).unwrap());
        assert!(p.contains(&vec![int(0); 7]).unwrap());
        let stacked = h.with_row("1010011".parse().unwrap()).unwrap();
        let p2 = fundamental_polytope(&stacked).unwrap();
        assert!(!p2.contains(&p_two_thirds()).unwrap());
        assert!(!in_fundamental_polytope(&stacked, &p_two_thirds()).unwrap());
        assert!(p.contains(&vec![int(0); 6]).is_err());
    }

    #[test]
    fn cone_of_hamming() {
        let k = fundamental_cone(&hamming()).unwrap();
        assert_eq!(k.len(), 12 + 14);
        let mut e1 = vec![int(0); 7];
        e1[0] = int(1);
        assert!(!k.contains(&e1).unwrap());
        let ids: Vec<usize> = k.constraints.iter().map(|(id, _)| id.index).collect();
        // singletons of row 0 sit at masks 1, 2, 4, 8 -> positions 0, 1, 2, 4
        assert_eq!(&ids[..4], &[0, 1, 2, 4]);
    }

    #[test]
    fn codewords_lie_in_polytope() {
        let h = hamming();
        let sys = fundamental_polytope(&h).unwrap();
        for x in h.enumerate_codewords(1 << 8).unwrap() {
            let p: Vec<Rational> = x.to_bools().iter().map(|&b| int(b as i64)).collect();
            assert!(sys.contains(&p).unwrap());
        }
    }

    #[test]
    fn duplicate_rows_are_deduplicated() {
        let h = BitMatrix::from_strs(&["1110", "1110"]).unwrap();
        let sys = fundamental_polytope(&h).unwrap();
        assert_eq!(sys.len(), 4 + 8);
    }

    #[test]
    fn separation_finds_violation() {
        let t: BitVector = "1010011".parse().unwrap();
        let (subset, excess) = most_violated_subset(&t.support(), &p_two_thirds()).unwrap();
        assert_eq!(subset, vec![2]);
        assert_eq!(excess, ratio(2, 3));
    }
}
