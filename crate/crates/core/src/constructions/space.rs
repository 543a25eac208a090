use num_bigint::BigUint;

use crate::cell::CellState;
use crate::code::{check_message, check_write, log2_big, RewritingCode};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};
use crate::wwl::{Enumerator, WwlParams};

/// Differential code for the `(1, beta, p)` constraint.
///
/// The cells are `left | gap | right` with `n'`, `beta - 1` and `n'` cells.
/// The gap stays at zero. Each write XORs the codeword for the message into
/// the left half and copies the old left half into the right half, so the
/// flip vector of every write is `w(m) | 0 | flips(left)` and the decoder
/// recovers `w(m)` as `left XOR right`.
#[derive(Clone, Debug)]
pub struct SpaceCode {
    params: WwlParams,
    half: usize,
    enumerator: Enumerator,
}

impl SpaceCode {
    pub fn new(params: WwlParams, half: usize) -> Result<Self> {
        if half == 0 {
            return Err(Error::InvalidParams("half length must be positive".into()));
        }
        let enumerator = Enumerator::new(params, half)?;
        Ok(SpaceCode {
            params,
            half,
            enumerator,
        })
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn wwl_params(&self) -> WwlParams {
        self.params
    }

    fn gap(&self) -> usize {
        self.params.beta() - 1
    }

    fn split(&self, state: &CellState) -> Result<(CellState, CellState)> {
        if state.len() != self.cells() {
            return Err(Error::Dimension {
                left: self.cells(),
                right: state.len(),
            });
        }
        let h = self.half;
        let g = self.gap();
        if !state.slice(h, h + g).is_zero() {
            return Err(Error::State(format!("gap cells of {state} are not zero")));
        }
        Ok((state.slice(0, h), state.slice(h + g, 2 * h + g)))
    }
}

impl RewritingCode for SpaceCode {
    fn name(&self) -> String {
        "space".into()
    }

    fn cells(&self) -> usize {
        2 * self.half + self.gap()
    }

    fn constraint(&self) -> ConstraintParams {
        ConstraintParams {
            alpha: 1,
            beta: self.params.beta(),
            p: self.params.p(),
        }
    }

    fn period(&self) -> usize {
        1
    }

    fn message_count(&self, _write: usize) -> BigUint {
        self.enumerator.total().clone()
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        check_write(write)?;
        check_message(message, self.enumerator.total())?;
        let (left, _) = self.split(current)?;
        let word = self.enumerator.unrank(message)?;
        let next_left = left.xor(&word)?;
        let mut bits = next_left.bits().to_vec();
        bits.resize(self.half + self.gap(), false);
        bits.extend_from_slice(left.bits());
        CellState::from_bits(bits)
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        check_write(write)?;
        let (left, right) = self.split(current)?;
        let word = left.xor(&right)?;
        self.enumerator
            .rank(&word)
            .map_err(|_| Error::State(format!("{current} does not hold a valid codeword")))
    }

    fn theoretical_rate(&self) -> f64 {
        log2_big(self.enumerator.total()) / self.cells() as f64
    }
}
