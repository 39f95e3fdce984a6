//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use fraccut::{BitMatrix, BitVector, LinConstraint, LpProblem, Rational, Relation};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

/// Gauss-Jordan over the rationals for a square system; `None` when singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Rational::one() / a[col][col].clone();
        for c in col..k {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..k {
                    let d = &f * &a[col][c];
                    a[r][c] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All vertices of `{x : rows, lower <= x <= upper}` with finite bounds.
///
/// A vertex makes some set `R` of rows tight and pins the remaining
/// `n - |R|` free directions to bounds; every such choice is solved and
/// kept when feasible. Equality rows are chosen like the others, since
/// dependent equalities need not all enter the square system.
pub fn enumerate_vertices(p: &LpProblem) -> Vec<Vec<Rational>> {
    let n = p.n;
    let m = p.constraints.len();
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for k in 0..=m.min(n) {
        for tight in combinations(m, k) {
            let pinned = n - k;
            for vars in combinations(n, pinned) {
                for sides in 0u32..(1 << pinned) {
                    let mut a = Vec::with_capacity(n);
                    let mut b = Vec::with_capacity(n);
                    for &t in &tight {
                        a.push(p.constraints[t].coeffs.clone());
                        b.push(p.constraints[t].rhs.clone());
                    }
                    for (k, &v) in vars.iter().enumerate() {
                        let mut row = vec![Rational::zero(); n];
                        row[v] = Rational::one();
                        a.push(row);
                        b.push(if sides >> k & 1 == 1 {
                            p.bounds[v].1.clone()
                        } else {
                            p.bounds[v].0.clone()
                        });
                    }
                    if let Some(x) = solve_square(a, b) {
                        if feasible(p, &x) && !found.contains(&x) {
                            found.push(x);
                        }
                    }
                }
            }
        }
    }
    found
}

pub fn feasible(p: &LpProblem, x: &[Rational]) -> bool {
    x.iter().zip(&p.bounds).all(|(v, (lo, hi))| lo <= v && v <= hi)
        && p.constraints.iter().all(|c| c.is_satisfied(x))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimum over the enumerated vertices, `None` when there are none.
pub fn brute_force_min(p: &LpProblem) -> Option<Rational> {
    enumerate_vertices(p).iter().map(|v| dot(&p.objective, v)).min()
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Random bounded LP with small integer data.
pub fn random_lp(rng: &mut StdRng, max_vars: usize, max_rows: usize) -> LpProblem {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(0..=max_rows);
    let objective = (0..n).map(|_| rat(rng.random_range(-5..=5))).collect();
    let constraints = (0..m)
        .map(|_| {
            let coeffs: Vec<Rational> = (0..n).map(|_| rat(rng.random_range(-3..=3))).collect();
            let rhs = rat(rng.random_range(-2..=8));
            let relation = if rng.random_range(0..6) == 0 {
                Relation::Eq
            } else {
                Relation::Le
            };
            LinConstraint { coeffs, relation, rhs }
        })
        .collect();
    let bounds = (0..n)
        .map(|_| {
            let lo = rng.random_range(-3..=1);
            (rat(lo), rat(lo + rng.random_range(0..=4)))
        })
        .collect();
    LpProblem {
        n,
        objective,
        constraints,
        bounds,
    }
}

/// Random `m x n` matrix whose rows are nonzero with weight at most `max_weight`.
pub fn random_matrix(rng: &mut StdRng, m: usize, n: usize, max_weight: usize) -> BitMatrix {
    let rows = (0..m)
        .map(|_| {
            let w = rng.random_range(1..=max_weight.min(n));
            let mut cols: Vec<usize> = (0..n).collect();
            for i in 0..w {
                let j = rng.random_range(i..n);
                cols.swap(i, j);
            }
            BitVector::from_support(n, &cols[..w])
        })
        .collect();
    BitMatrix::new(rows).unwrap()
}

/// All codewords by scanning every binary word; independent of the
/// null-space enumeration in the library.
pub fn codewords_by_scan(h: &BitMatrix) -> Vec<BitVector> {
    let n = h.n();
    assert!(n <= 24);
    let masks: Vec<u32> = h
        .rows()
        .iter()
        .map(|r| r.iter_ones().fold(0u32, |acc, j| acc | 1 << j))
        .collect();
    (0u32..1 << n)
        .filter(|&x| masks.iter().all(|&r| (r & x).count_ones() % 2 == 0))
        .map(|x| BitVector::from_bools(&(0..n).map(|j| x >> j & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

/// Sum of the rows of `h` selected by `mask`.
pub fn combine(h: &BitMatrix, mask: u64) -> BitVector {
    let mut acc = BitVector::zeros(h.n());
    for i in 0..h.m() {
        if mask >> i & 1 == 1 {
            acc.xor_assign(h.row(i));
        }
    }
    acc
}
