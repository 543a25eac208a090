use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::code::log2_big;
use crate::error::{Error, Result};

/// Number of `m x n` binary arrays in which every `a x b` sub-array holds at
/// most `p` ones. Windows hanging over an edge are clipped, so short
/// dimensions are handled the same way as the constraint checker does.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Array2DCount {
    pub a: usize,
    pub b: usize,
    pub p: usize,
    pub m: usize,
    pub n: usize,
    #[serde(serialize_with = "as_decimal")]
    pub count: BigUint,
    /// `log2(count) / (m n)`.
    pub normalized: f64,
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Exact count by a transfer matrix over columns.
///
/// The state is the last `b - 1` columns. The array is transposed first when
/// that gives a smaller state; `max_bits` caps the state width.
pub fn count_2d_arrays(
    a: usize,
    b: usize,
    p: usize,
    m: usize,
    n: usize,
    max_bits: usize,
) -> Result<Array2DCount> {
    if [a, b, p, m, n].contains(&0) {
        return Err(Error::InvalidParams("a, b, p, m, n must be positive".into()));
    }
    let cost = |rows: usize, cols_window: usize| rows * cols_window.saturating_sub(1).max(1);
    let count = if cost(m, b) <= cost(n, a) {
        count_columns(a, b, p, m, n, max_bits)?
    } else {
        count_columns(b, a, p, n, m, max_bits)?
    };
    let normalized = log2_big(&count) / (m * n) as f64;
    Ok(Array2DCount {
        a,
        b,
        p,
        m,
        n,
        count,
        normalized,
    })
}

fn count_columns(a: usize, b: usize, p: usize, m: usize, n: usize, max_bits: usize) -> Result<BigUint> {
    let keep = b - 1;
    let needed = m * keep.max(1);
    if needed > max_bits.min(62) {
        return Err(Error::Resource {
            what: "2D array transfer state",
            needed,
            limit: max_bits.min(62),
        });
    }
    let col_mask = (1u64 << m) - 1;
    let row_windows: Vec<u64> = if m >= a {
        (0..=m - a).map(|r| ((1u64 << a) - 1) << r).collect()
    } else {
        vec![col_mask]
    };
    // weights[v][w]: ones of column v inside row window w
    let weights: Vec<Vec<usize>> = (0..=col_mask)
        .map(|v| {
            row_windows
                .iter()
                .map(|&w| (v & w).count_ones() as usize)
                .collect()
        })
        .collect();
    let valid_columns: Vec<u64> = (0..=col_mask)
        .filter(|&v| weights[v as usize].iter().all(|&x| x <= p))
        .collect();

    let mut layer: HashMap<u64, BigUint> = HashMap::from([(0u64, BigUint::one())]);
    for _ in 0..n {
        let mut next: HashMap<u64, BigUint> = HashMap::new();
        for (&state, ways) in &layer {
            let history: Vec<u64> = (0..keep).map(|k| (state >> (k * m)) & col_mask).collect();
            let base: Vec<usize> = (0..row_windows.len())
                .map(|w| history.iter().map(|&c| weights[c as usize][w]).sum())
                .collect();
            for &v in &valid_columns {
                let ok = base
                    .iter()
                    .zip(&weights[v as usize])
                    .all(|(&h, &x)| h + x <= p);
                if !ok {
                    continue;
                }
                let shifted = if keep == 0 {
                    0
                } else {
                    ((state << m) | v) & ((1u64 << (m * keep)) - 1)
                };
                *next.entry(shifted).or_insert_with(BigUint::zero) += ways;
            }
        }
        layer = next;
    }
    Ok(layer.into_values().sum())
}
