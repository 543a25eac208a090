use num_bigint::BigUint;
use num_traits::One;

use crate::cell::CellState;
use crate::code::{check_write, RewritingCode};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};

/// Runs a `(1, beta, p)` code on every `alpha`-th write only.
pub struct DiluteTime {
    inner: Box<dyn RewritingCode>,
    alpha: usize,
}

impl DiluteTime {
    pub fn new(inner: Box<dyn RewritingCode>, alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidParams("alpha must be positive".into()));
        }
        if inner.constraint().alpha != 1 {
            return Err(Error::InvalidParams(format!(
                "time dilution needs an inner code with alpha=1, got {}",
                inner.constraint().alpha
            )));
        }
        Ok(DiluteTime { inner, alpha })
    }

    /// The inner write carried by `write`, if any.
    pub fn inner_write(&self, write: usize) -> Option<usize> {
        (write - 1).is_multiple_of(self.alpha).then(|| (write - 1) / self.alpha + 1)
    }
}

impl RewritingCode for DiluteTime {
    fn name(&self) -> String {
        format!("dilute-time[{}]", self.inner.name())
    }

    fn cells(&self) -> usize {
        self.inner.cells()
    }

    fn constraint(&self) -> ConstraintParams {
        ConstraintParams {
            alpha: self.alpha,
            ..self.inner.constraint()
        }
    }

    fn period(&self) -> usize {
        self.alpha * self.inner.period()
    }

    fn message_count(&self, write: usize) -> BigUint {
        match self.inner_write(write) {
            Some(w) => self.inner.message_count(w),
            None => BigUint::one(),
        }
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        check_write(write)?;
        match self.inner_write(write) {
            Some(w) => self.inner.encode(w, message, current),
            None if message.is_one() => Ok(current.clone()),
            None => Err(Error::Schedule {
                write,
                reason: format!("write carries no information, got message {message}"),
            }),
        }
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        check_write(write)?;
        match self.inner_write(write) {
            Some(w) => self.inner.decode(w, current),
            None => Ok(BigUint::one()),
        }
    }

    fn theoretical_rate(&self) -> f64 {
        self.inner.theoretical_rate() / self.alpha as f64
    }
}

/// Spreads an `(alpha, 1, p)` code over `beta` times as many cells; inner
/// cell `i` lives at physical cell `(i - 1) beta + 1` and the rest stay zero.
pub struct DiluteSpace {
    inner: Box<dyn RewritingCode>,
    beta: usize,
}

impl DiluteSpace {
    pub fn new(inner: Box<dyn RewritingCode>, beta: usize) -> Result<Self> {
        if beta == 0 {
            return Err(Error::InvalidParams("beta must be positive".into()));
        }
        if inner.constraint().beta != 1 {
            return Err(Error::InvalidParams(format!(
                "space dilution needs an inner code with beta=1, got {}",
                inner.constraint().beta
            )));
        }
        Ok(DiluteSpace { inner, beta })
    }

    fn gather(&self, state: &CellState) -> Result<CellState> {
        if state.len() != self.cells() {
            return Err(Error::Dimension {
                left: self.cells(),
                right: state.len(),
            });
        }
        let bits = state.bits();
        if bits
            .iter()
            .enumerate()
            .any(|(j, &b)| b && j % self.beta != 0)
        {
            return Err(Error::State(format!("{state} has a spacer cell set")));
        }
        CellState::from_bits(bits.iter().step_by(self.beta).copied().collect())
    }

    fn scatter(&self, inner: &CellState) -> CellState {
        let mut out = CellState::zeros(self.cells());
        for (i, &b) in inner.bits().iter().enumerate() {
            out.set(i * self.beta, b);
        }
        out
    }
}

impl RewritingCode for DiluteSpace {
    fn name(&self) -> String {
        format!("dilute-space[{}]", self.inner.name())
    }

    fn cells(&self) -> usize {
        self.inner.cells() * self.beta
    }

    fn constraint(&self) -> ConstraintParams {
        ConstraintParams {
            beta: self.beta,
            ..self.inner.constraint()
        }
    }

    fn period(&self) -> usize {
        self.inner.period()
    }

    fn message_count(&self, write: usize) -> BigUint {
        self.inner.message_count(write)
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        let inner = self.gather(current)?;
        Ok(self.scatter(&self.inner.encode(write, message, &inner)?))
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        self.inner.decode(write, &self.gather(current)?)
    }

    fn theoretical_rate(&self) -> f64 {
        self.inner.theoretical_rate() / self.beta as f64
    }
}
