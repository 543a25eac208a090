//! The `(alpha, beta, p)` time-space constraint and its verifier.

use serde::Serialize;

use crate::cell::{flip_matrix, FlipMatrix, WriteSequence};
use crate::error::{Error, Result};

/// Flip budget `p` over every window of `alpha` consecutive writes and `beta` contiguous cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConstraintParams {
    pub alpha: usize,
    pub beta: usize,
    pub p: usize,
}

impl ConstraintParams {
    pub fn new(alpha: usize, beta: usize, p: usize) -> Result<Self> {
        if alpha == 0 || beta == 0 || p == 0 {
            return Err(Error::InvalidParams(format!(
                "alpha, beta and p must be positive (got {alpha}, {beta}, {p})"
            )));
        }
        Ok(ConstraintParams { alpha, beta, p })
    }

    /// The budget covers every cell of every window, so nothing is constrained.
    pub fn is_vacuous(&self) -> bool {
        self.p >= self.alpha * self.beta
    }
}

/// Outcome of [`check_constraint`]. Positions are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violation { write: usize, cell: usize, cost: usize },
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Verdict::Satisfied)
    }
}

/// Checks every complete `alpha x beta` window of the flip matrix against the budget.
///
/// When the trace holds fewer than `alpha` writes, the single clipped window
/// covering all of them is checked instead. Shorter windows at the end of a
/// longer trace are contained in the last complete window and are skipped.
/// Reports the first violating window in (write, cell) order.
pub fn check_constraint(ws: &WriteSequence, params: ConstraintParams) -> Result<Verdict> {
    let n = ws.cells();
    if n < params.beta {
        return Err(Error::UnsupportedGeometry {
            cells: n,
            beta: params.beta,
        });
    }
    if ws.writes() == 0 {
        return Ok(Verdict::Satisfied);
    }
    let flips = flip_matrix(ws)?;
    Ok(check_flips(&flips, params))
}

fn check_flips(flips: &FlipMatrix, params: ConstraintParams) -> Verdict {
    let (m, n) = (flips.rows(), flips.cols());
    if params.is_vacuous() {
        return Verdict::Satisfied;
    }
    // prefix[i][j] = flips in rows < i and cols < j
    let mut prefix = vec![vec![0usize; n + 1]; m + 1];
    for i in 0..m {
        let mut run = 0;
        for j in 0..n {
            run += usize::from(flips.get(i, j));
            prefix[i + 1][j + 1] = prefix[i][j + 1] + run;
        }
    }
    let rows = params.alpha.min(m);
    for i in 0..=(m - rows) {
        for j in 0..=(n - params.beta) {
            let (i2, j2) = (i + rows, j + params.beta);
            let cost = prefix[i2][j2] + prefix[i][j] - prefix[i][j2] - prefix[i2][j];
            if cost > params.p {
                return Verdict::Violation {
                    write: i + 1,
                    cell: j + 1,
                    cost,
                };
            }
        }
    }
    Verdict::Satisfied
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::CellState;
    use proptest::prelude::*;

    fn ws(lines: &[&str]) -> WriteSequence {
        WriteSequence::from_states(lines.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    fn naive(ws: &WriteSequence, params: ConstraintParams) -> bool {
        let f = flip_matrix(ws).unwrap();
        let rows = params.alpha.min(f.rows());
        for i in 0..=(f.rows() - rows) {
            for j in 0..=(f.cols() - params.beta) {
                let mut cost = 0;
                for k in 0..rows {
                    for l in 0..params.beta {
                        cost += usize::from(f.get(i + k, j + l));
                    }
                }
                if cost > params.p {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn trivial_code_trace_of_three_writes() {
        // write 1 programs cells whose index is 1 or 2 mod 3, then two silent writes
        let programmed = "110110110110110";
        let t = ws(&["000000000000000", programmed, programmed, programmed]);
        let v = check_constraint(&t, ConstraintParams::new(3, 3, 2).unwrap()).unwrap();
        assert_eq!(v, Verdict::Satisfied);
    }

    #[test]
    fn all_cells_flipped_exceeds_budget() {
        let t = ws(&["000", "111"]);
        let v = check_constraint(&t, ConstraintParams::new(1, 3, 2).unwrap()).unwrap();
        assert_eq!(
            v,
            Verdict::Violation {
                write: 1,
                cell: 1,
                cost: 3
            }
        );
    }

    #[test]
    fn narrow_geometry_rejected() {
        let t = ws(&["00", "11"]);
        assert!(matches!(
            check_constraint(&t, ConstraintParams::new(1, 3, 1).unwrap()),
            Err(Error::UnsupportedGeometry { cells: 2, beta: 3 })
        ));
    }

    #[test]
    fn clipped_window_for_short_traces() {
        let t = ws(&["00", "11"]);
        let v = check_constraint(&t, ConstraintParams::new(4, 2, 1).unwrap()).unwrap();
        assert!(!v.is_satisfied());
    }

    #[test]
    fn zero_params_rejected() {
        assert!(ConstraintParams::new(0, 1, 1).is_err());
        assert!(ConstraintParams::new(2, 2, 4).unwrap().is_vacuous());
    }

    fn trace_strategy() -> impl Strategy<Value = WriteSequence> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(m, n)| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), m).prop_map(
                move |rows| {
                    let mut states = vec![CellState::zeros(n)];
                    states.extend(rows.into_iter().map(|r| CellState::from_bits(r).unwrap()));
                    WriteSequence::from_states(states).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn matches_naive_window_scan(t in trace_strategy(), a in 1usize..4, b in 1usize..4, p in 1usize..6) {
            prop_assume!(t.cells() >= b);
            let params = ConstraintParams::new(a, b, p).unwrap();
            let v = check_constraint(&t, params).unwrap();
            prop_assert_eq!(v.is_satisfied(), naive(&t, params));
        }

        #[test]
        fn vacuous_budget_always_satisfied(t in trace_strategy(), a in 1usize..4, b in 1usize..4) {
            prop_assume!(t.cells() >= b);
            let params = ConstraintParams::new(a, b, a * b).unwrap();
            prop_assert!(check_constraint(&t, params).unwrap().is_satisfied());
        }

        #[test]
        fn row_sums_are_hamming_distances(t in trace_strategy()) {
            let f = flip_matrix(&t).unwrap();
            for i in 0..f.rows() {
                let d = crate::cell::hamming_distance(&t.states()[i], &t.states()[i + 1]).unwrap();
                prop_assert_eq!(f.row_sum(i), d);
            }
        }
    }
}
