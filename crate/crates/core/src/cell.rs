//! Binary cell-state vectors, write histories and their flip matrices.
//!
//! Cell 1 is the leftmost position and the most significant bit when a
//! state is read as a number, so the numeric order of states matches the
//! lexicographic order of their `0`/`1` strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A vector of binary cell levels of fixed length `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellState {
    bits: Vec<bool>,
}

impl CellState {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyInput("cell state must have at least one cell"));
        }
        Ok(CellState { bits })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "cell state must have at least one cell");
        CellState {
            bits: vec![false; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        assert!(n >= 1, "cell state must have at least one cell");
        CellState { bits: vec![true; n] }
    }

    /// Builds a length-`n` state from the low `n` bits of `value`, cell 1 first.
    pub fn from_u64(value: u64, n: usize) -> Self {
        assert!((1..=64).contains(&n));
        let bits = (0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect();
        CellState { bits }
    }

    /// Numeric value with cell 1 as the most significant bit.
    ///
    /// Only defined for states of at most 64 cells.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len() <= 64);
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Level of cell `i` (0-based).
    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, level: bool) {
        self.bits[i] = level;
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn complement(&self) -> CellState {
        CellState {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn xor(&self, other: &CellState) -> Result<CellState> {
        check_len(self, other)?;
        Ok(CellState {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    /// True when every cell of `self` is at most the same cell of `other`.
    pub fn is_below(&self, other: &CellState) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Cells `start..end` (0-based, half open) as a new state.
    pub fn slice(&self, start: usize, end: usize) -> CellState {
        CellState {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn concat(parts: &[&CellState]) -> CellState {
        CellState {
            bits: parts.iter().flat_map(|p| p.bits.iter().copied()).collect(),
        }
    }
}

fn check_len(u: &CellState, v: &CellState) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(())
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellState({self})")
    }
}

impl FromStr for CellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "unexpected character {other:?} in cell state {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        CellState::from_bits(bits)
    }
}

/// Number of cells in which `u` and `v` differ.
pub fn hamming_distance(u: &CellState, v: &CellState) -> Result<usize> {
    check_len(u, v)?;
    Ok(u.bits.iter().zip(&v.bits).filter(|(a, b)| a != b).count())
}

/// Time-ordered history of cell states; `states[0]` is the state before the first write.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WriteSequence {
    states: Vec<CellState>,
}

impl WriteSequence {
    /// A sequence holding only the all-zero initial state.
    pub fn new(n: usize) -> Self {
        WriteSequence {
            states: vec![CellState::zeros(n)],
        }
    }

    /// Builds a sequence whose first state must be all-zero.
    pub fn from_states(states: Vec<CellState>) -> Result<Self> {
        let ws = Self::with_initial(states)?;
        if !ws.states[0].is_zero() {
            return Err(Error::InvalidParams(
                "initial state must be all-zero".to_string(),
            ));
        }
        Ok(ws)
    }

    /// Builds a sequence with an arbitrary initial state, for externally supplied traces.
    pub fn with_initial(states: Vec<CellState>) -> Result<Self> {
        let first = states
            .first()
            .ok_or(Error::EmptyInput("write sequence needs an initial state"))?;
        let n = first.len();
        for s in &states {
            if s.len() != n {
                return Err(Error::Dimension {
                    left: n,
                    right: s.len(),
                });
            }
        }
        Ok(WriteSequence { states })
    }

    pub fn push(&mut self, state: CellState) -> Result<()> {
        check_len(&self.states[0], &state)?;
        self.states.push(state);
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.states[0].len()
    }

    /// Number of writes after the initial state.
    pub fn writes(&self) -> usize {
        self.states.len() - 1
    }

    pub fn states(&self) -> &[CellState] {
        &self.states
    }

    pub fn last(&self) -> &CellState {
        self.states.last().expect("never empty")
    }

    /// One state per line, initial state first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the line format produced by [`WriteSequence::to_text`].
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str, allow_nonzero_initial: bool) -> Result<Self> {
        let states = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(CellState::from_str)
            .collect::<Result<Vec<_>>>()?;
        if allow_nonzero_initial {
            Self::with_initial(states)
        } else {
            Self::from_states(states)
        }
    }
}

/// Binary matrix with one row per write; entry `(i, j)` is set iff cell `j` changed on write `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipMatrix {
    rows: Vec<Vec<bool>>,
    cols: usize,
}

impl FlipMatrix {
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry for write `i` and cell `j`, both 0-based.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.rows[i].iter().filter(|&&b| b).count()
    }
}

pub fn flip_matrix(ws: &WriteSequence) -> Result<FlipMatrix> {
    if ws.writes() == 0 {
        return Err(Error::EmptyInput("write sequence has no writes"));
    }
    let rows = ws
        .states
        .windows(2)
        .map(|w| {
            w[0].bits
                .iter()
                .zip(&w[1].bits)
                .map(|(a, b)| a != b)
                .collect()
        })
        .collect();
    Ok(FlipMatrix {
        rows,
        cols: ws.cells(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> CellState {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&st("0000"), &st("0000")).unwrap(), 0);
        assert_eq!(hamming_distance(&st("1011"), &st("1101")).unwrap(), 2);
        assert_eq!(hamming_distance(&st("10110"), &st("01001")).unwrap(), 5);
    }

    #[test]
    fn hamming_length_mismatch() {
        assert!(matches!(
            hamming_distance(&st("01"), &st("011")),
            Err(Error::Dimension { left: 2, right: 3 })
        ));
    }

    #[test]
    fn flip_matrix_examples() {
        let ws = WriteSequence::from_states(vec![st("0000"), st("1011")]).unwrap();
        let fm = flip_matrix(&ws).unwrap();
        assert_eq!(fm.rows(), 1);
        assert_eq!(fm.row(0), &[true, false, true, true]);

        let ws = WriteSequence::from_states(vec![st("0000"), st("1011"), st("1101")]).unwrap();
        let fm = flip_matrix(&ws).unwrap();
        assert_eq!(fm.row(0), &[true, false, true, true]);
        assert_eq!(fm.row(1), &[false, true, true, false]);

        let ws = WriteSequence::from_states(vec![st("00"), st("00"), st("00")]).unwrap();
        let fm = flip_matrix(&ws).unwrap();
        assert!((0..2).all(|i| fm.row_sum(i) == 0));
    }

    #[test]
    fn flip_matrix_needs_a_write() {
        let ws = WriteSequence::new(3);
        assert!(matches!(flip_matrix(&ws), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn initial_state_pinned_to_zero() {
        assert!(WriteSequence::from_states(vec![st("01")]).is_err());
        assert!(WriteSequence::with_initial(vec![st("01")]).is_ok());
        assert!(WriteSequence::from_states(vec![]).is_err());
        assert!(WriteSequence::from_states(vec![st("00"), st("011")]).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let text = "000\n101\n# comment\n\n111\n";
        let ws = WriteSequence::parse(text, false).unwrap();
        assert_eq!(ws.writes(), 2);
        assert_eq!(ws.to_text(), "000\n101\n111\n");
        assert!(WriteSequence::parse("0a0\n", false).is_err());
    }

    #[test]
    fn numeric_value_is_msb_first() {
        assert_eq!(st("11000").to_u64(), 24);
        assert_eq!(CellState::from_u64(24, 5), st("11000"));
    }
}
