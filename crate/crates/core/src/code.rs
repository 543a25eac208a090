//! The encoder/decoder interface shared by every construction, plus rate
//! accounting and a seeded simulation driver.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use crate::cell::{CellState, WriteSequence};
use crate::constraint::{check_constraint, ConstraintParams, Verdict};
use crate::error::{Error, Result};

/// A rewriting code over `cells()` binary cells.
///
/// Writes are numbered from 1 and both sides know the write number. Messages
/// on write `i` range over `[1 : message_count(i)]`; writes that carry no
/// information have a message count of 1.
pub trait RewritingCode: Send + Sync {
    fn name(&self) -> String;

    fn cells(&self) -> usize;

    /// The `(alpha, beta, p)` constraint every emitted trace satisfies.
    fn constraint(&self) -> ConstraintParams;

    /// Number of writes after which the message counts repeat.
    fn period(&self) -> usize;

    fn message_count(&self, write: usize) -> BigUint;

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState>;

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint>;

    /// Rate in bits per cell per write the construction attains with optimal components.
    fn theoretical_rate(&self) -> f64;
}

/// Rejects messages outside `[1 : count]`.
pub(crate) fn check_message(message: &BigUint, count: &BigUint) -> Result<()> {
    if message < &BigUint::one() || message > count {
        return Err(Error::Domain {
            message: message.to_string(),
            max: count.to_string(),
        });
    }
    Ok(())
}

pub(crate) fn check_write(write: usize) -> Result<()> {
    if write == 0 {
        return Err(Error::InvalidParams("writes are numbered from 1".into()));
    }
    Ok(())
}

/// `log2` of an arbitrary-precision integer, accurate to double precision.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.log2() + shift as f64
}

/// Bits written per cell per write over a window of writes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub bits_written: f64,
    pub writes: usize,
    pub cells: usize,
    pub rate: f64,
    pub period: usize,
    /// Set when the window is not a whole number of periods.
    pub warning: Option<String>,
}

/// Sums `log2 message_count(i)` for writes `1..=writes` and normalizes by `writes * cells`.
pub fn measure_rate(code: &dyn RewritingCode, writes: usize) -> Result<RateReport> {
    if writes == 0 {
        return Err(Error::InvalidParams("rate window needs at least one write".into()));
    }
    let period = code.period();
    let bits_written: f64 = (1..=writes).map(|i| log2_big(&code.message_count(i))).sum();
    let warning = (!writes.is_multiple_of(period)).then(|| {
        format!("window of {writes} writes is not a multiple of the period {period}; rate is rounded")
    });
    Ok(RateReport {
        bits_written,
        writes,
        cells: code.cells(),
        rate: bits_written / (writes as f64 * code.cells() as f64),
        period,
        warning,
    })
}

/// A uniformly random legal message for `write`.
pub fn random_message<R: Rng + ?Sized>(
    code: &dyn RewritingCode,
    write: usize,
    rng: &mut R,
) -> BigUint {
    let count = code.message_count(write);
    if count.is_one() {
        return BigUint::one();
    }
    rng.gen_biguint_below(&count) + 1u32
}

/// Result of driving a code with a message stream.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub trace: WriteSequence,
    pub messages: Vec<BigUint>,
    pub verdict: Verdict,
    pub rate: RateReport,
}

/// Encodes the given messages from the all-zero state, decoding after every
/// write, and checks the resulting trace against the declared constraint.
pub fn run_messages(code: &dyn RewritingCode, messages: &[BigUint]) -> Result<Simulation> {
    let mut trace = WriteSequence::new(code.cells());
    for (idx, m) in messages.iter().enumerate() {
        let write = idx + 1;
        let next = code.encode(write, m, trace.last())?;
        let decoded = code.decode(write, &next)?;
        if &decoded != m {
            return Err(Error::RoundTrip {
                write,
                expected: m.to_string(),
                decoded: decoded.to_string(),
            });
        }
        trace.push(next)?;
    }
    let verdict = check_constraint(&trace, code.constraint())?;
    let rate = measure_rate(code, messages.len().max(1))?;
    Ok(Simulation {
        trace,
        messages: messages.to_vec(),
        verdict,
        rate,
    })
}

/// Runs `writes` uniformly random messages through the code.
pub fn simulate<R: Rng + ?Sized>(
    code: &dyn RewritingCode,
    writes: usize,
    rng: &mut R,
) -> Result<Simulation> {
    let messages: Vec<BigUint> = (1..=writes).map(|i| random_message(code, i, rng)).collect();
    run_messages(code, &messages)
}
