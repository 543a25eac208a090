use std::collections::VecDeque;

use serde::Serialize;

use super::states::{build_state_set, StateSet};
use super::{low_mask, WwlParams};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// Square nonnegative integer matrix stored as sparse rows of `(column, value)`.
///
/// WWL transition matrices have at most two nonzeros per row (append a 0 or
/// a 1), so the sparse form scales to large state sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    size: usize,
    rows: Vec<Vec<(usize, u32)>>,
}

impl TransitionMatrix {
    pub fn from_dense(dense: &[Vec<u32>]) -> Result<Self> {
        let size = dense.len();
        let mut rows = Vec::with_capacity(size);
        for row in dense {
            if row.len() != size {
                return Err(Error::Dimension {
                    left: size,
                    right: row.len(),
                });
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j, v))
                    .collect(),
            );
        }
        Ok(TransitionMatrix { size, rows })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c == j)
            .map_or(0, |&(_, v)| v)
    }

    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.rows[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// `self * v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| f64::from(a) * v[j]).sum())
            .collect()
    }
}

/// Transition matrix over prefix states: entry `(i, j)` counts the ways to
/// append one bit to state `i` that keep the `beta`-window weight at most `p`
/// and leave state `j` as the new trailing `beta - 1` bits.
///
/// For `beta >= 2` this is exactly the 0/1 merge matrix. For `beta = 1` the
/// single empty state has two admissible continuations, giving `[[2]]`.
pub fn build_transition_matrix(params: WwlParams) -> Result<TransitionMatrix> {
    let states = build_state_set(params)?;
    Ok(transition_from_states(&states))
}

pub(crate) fn transition_from_states(states: &StateSet) -> TransitionMatrix {
    let params = states.params();
    let w = params.state_width();
    let keep = low_mask(w);
    let rows = states
        .masks()
        .iter()
        .map(|&s| {
            let mut row: Vec<(usize, u32)> = Vec::with_capacity(2);
            for bit in 0..2u64 {
                let merged = (s << 1) | bit;
                if merged.count_ones() as usize > params.p() {
                    continue;
                }
                let j = states
                    .index_of(merged & keep)
                    .expect("suffix of an admissible window is an admissible state");
                match row.iter_mut().find(|(c, _)| *c == j) {
                    Some((_, v)) => *v += 1,
                    None => row.push((j, 1)),
                }
            }
            row.sort_unstable();
            row
        })
        .collect();
    TransitionMatrix {
        size: states.len(),
        rows,
    }
}

/// Strong connectivity of the directed graph of `a`, checked by forward and
/// backward reachability from state 0.
pub fn is_irreducible(a: &TransitionMatrix) -> bool {
    if a.size == 0 {
        return false;
    }
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); a.size];
    for (i, row) in a.rows.iter().enumerate() {
        for &(j, _) in row {
            reverse[j].push(i);
        }
    }
    let forward: Vec<Vec<usize>> = a
        .rows
        .iter()
        .map(|r| r.iter().map(|&(j, _)| j).collect())
        .collect();
    reaches_all(&forward) && reaches_all(&reverse)
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == adj.len()
}

/// Certified bracket `lower <= lambda_max <= upper` on the Perron root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenEstimate {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

impl EigenEstimate {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

pub fn dominant_eigenvalue(a: &TransitionMatrix, tol: f64) -> Result<EigenEstimate> {
    dominant_eigenvalue_with_cap(a, tol, DEFAULT_MAX_ITERATIONS)
}

/// Power iteration from the all-ones vector with Collatz-Wielandt bounds.
///
/// For any positive `v`, `min_i (Av)_i / v_i <= lambda_max <= max_i (Av)_i / v_i`
/// when `a` is irreducible. Iterates until the bracket is no wider than `tol`.
/// Matrices without a positive diagonal entry are iterated as `A + I`, which
/// is primitive whenever `A` is irreducible; the bracket is still taken on `A`.
pub fn dominant_eigenvalue_with_cap(
    a: &TransitionMatrix,
    tol: f64,
    max_iterations: usize,
) -> Result<EigenEstimate> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    if !is_irreducible(a) {
        return Err(Error::NotIrreducible);
    }
    let shift = if (0..a.size).any(|i| a.entry(i, i) > 0) {
        0.0
    } else {
        1.0
    };
    let mut v = vec![1.0f64; a.size];
    let mut best = (0.0f64, f64::INFINITY);
    for it in 1..=max_iterations {
        let w = a.apply(&v);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (wi, vi) in w.iter().zip(&v) {
            let r = wi / vi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo < best.1 - best.0 {
            best = (lo, hi);
        }
        if hi - lo <= tol {
            return Ok(EigenEstimate {
                lower: lo,
                upper: hi,
                iterations: it,
            });
        }
        let mut next: Vec<f64> = w.iter().zip(&v).map(|(wi, vi)| wi + shift * vi).collect();
        let scale = next.iter().cloned().fold(0.0f64, f64::max);
        if scale == 0.0 {
            // only the 1x1 zero matrix gets here
            return Ok(EigenEstimate {
                lower: 0.0,
                upper: 0.0,
                iterations: it,
            });
        }
        next.iter_mut().for_each(|x| *x /= scale);
        v = next;
    }
    Err(Error::Convergence {
        lower: best.0,
        upper: best.1,
        iterations: max_iterations,
    })
}

/// Capacity of the WWL constraint with its eigenvalue bracket.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub beta: usize,
    pub p: usize,
    #[serde(rename = "M")]
    pub states: usize,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub capacity_lower: f64,
    pub capacity_upper: f64,
}

pub fn capacity(params: WwlParams, tol: f64) -> Result<CapacityReport> {
    let a = build_transition_matrix(params)?;
    let est = dominant_eigenvalue(&a, tol)?;
    Ok(CapacityReport {
        beta: params.beta(),
        p: params.p(),
        states: a.size(),
        lambda_lower: est.lower,
        lambda_upper: est.upper,
        capacity_lower: est.lower.log2(),
        capacity_upper: est.upper.log2(),
    })
}
