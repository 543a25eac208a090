//! The `(beta, p)` window-weight-limited (WWL) constraint: every `beta`
//! consecutive positions of a binary vector hold at most `p` ones.
//!
//! Windows are tracked through their trailing `beta - 1` bits ("prefix
//! states"), which gives a finite transition matrix whose dominant eigenvalue
//! fixes the capacity, and a count table that drives linear-time enumerative
//! rank and unrank.

mod enumerative;
mod matrix;
mod states;

pub use enumerative::{count_wwl, CountTable, Enumerator};
pub use matrix::{
    build_transition_matrix, capacity, dominant_eigenvalue, dominant_eigenvalue_with_cap,
    is_irreducible, CapacityReport, EigenEstimate, TransitionMatrix, DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
};
pub use states::{build_state_set, merge, StateSet};

use crate::error::{Error, Result};

/// Largest prefix-state set the engine will materialize.
pub const MAX_STATES: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WwlParams {
    beta: usize,
    p: usize,
}

impl WwlParams {
    pub fn new(beta: usize, p: usize) -> Result<Self> {
        if beta == 0 || p == 0 {
            return Err(Error::InvalidParams(format!(
                "beta and p must be positive (got beta={beta}, p={p})"
            )));
        }
        if p > beta {
            return Err(Error::InvalidParams(format!(
                "p={p} exceeds the window length beta={beta}"
            )));
        }
        if beta > 64 {
            return Err(Error::InvalidParams(format!(
                "beta={beta} is larger than the supported maximum of 64"
            )));
        }
        Ok(WwlParams { beta, p })
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Length of a prefix state, `beta - 1`.
    pub fn state_width(&self) -> usize {
        self.beta - 1
    }
}

/// True if every `beta`-window of `bits` holds at most `p` ones.
pub fn is_wwl(bits: &[bool], params: WwlParams) -> bool {
    let beta = params.beta;
    let mut weight = 0;
    for (i, &b) in bits.iter().enumerate() {
        weight += usize::from(b);
        if i >= beta {
            weight -= usize::from(bits[i - beta]);
        }
        if weight > params.p {
            return false;
        }
    }
    true
}

pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(WwlParams::new(0, 1).is_err());
        assert!(WwlParams::new(3, 0).is_err());
        assert!(WwlParams::new(3, 4).is_err());
        assert!(WwlParams::new(3, 3).is_ok());
        assert!(WwlParams::new(1, 1).is_ok());
    }

    #[test]
    fn window_check() {
        let p = WwlParams::new(6, 3).unwrap();
        let bits = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
        assert!(is_wwl(&bits("1011001001"), p));
        assert!(!is_wwl(&bits("1011100000"), p));
        assert!(!is_wwl(&bits("1011010000"), p));
        assert!(is_wwl(&bits(""), p));
    }
}
