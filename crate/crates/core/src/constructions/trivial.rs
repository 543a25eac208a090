use num_bigint::BigUint;
use num_traits::One;

use crate::cell::CellState;
use crate::code::{check_message, check_write, RewritingCode};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};

/// Block-partition code with rate `p / (alpha * beta)`.
///
/// Cells are split into blocks of `beta`. Writing `p = (q - 1) * beta + r`
/// with `r` in `[1 : beta]`, each period of `alpha` writes stores raw bits in
/// every cell on its first `q - 1` writes, in the first `r` cells of each
/// block on write `q`, and nothing afterwards.
#[derive(Clone, Debug)]
pub struct TrivialCode {
    params: ConstraintParams,
    n: usize,
    q: usize,
    r: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Full,
    Partial,
    Silent,
}

impl TrivialCode {
    pub fn new(params: ConstraintParams, n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(params.beta) {
            return Err(Error::Geometry(format!(
                "cell count {n} must be a positive multiple of beta={}",
                params.beta
            )));
        }
        let q = params.p.div_ceil(params.beta);
        let r = (params.p - 1) % params.beta + 1;
        Ok(TrivialCode { params, n, q, r })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    fn slot(&self, write: usize) -> Slot {
        let pos = (write - 1) % self.params.alpha + 1;
        match pos.cmp(&self.q) {
            std::cmp::Ordering::Less => Slot::Full,
            std::cmp::Ordering::Equal => Slot::Partial,
            std::cmp::Ordering::Greater => Slot::Silent,
        }
    }

    /// 0-based cells that carry data on `write`, left to right.
    pub fn programmable_cells(&self, write: usize) -> Vec<usize> {
        match self.slot(write) {
            Slot::Full => (0..self.n).collect(),
            Slot::Partial => (0..self.n)
                .filter(|j| j % self.params.beta < self.r)
                .collect(),
            Slot::Silent => Vec::new(),
        }
    }
}

impl RewritingCode for TrivialCode {
    fn name(&self) -> String {
        "trivial".into()
    }

    fn cells(&self) -> usize {
        self.n
    }

    fn constraint(&self) -> ConstraintParams {
        self.params
    }

    fn period(&self) -> usize {
        self.params.alpha
    }

    fn message_count(&self, write: usize) -> BigUint {
        BigUint::one() << self.programmable_cells(write).len()
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        check_write(write)?;
        if current.len() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: current.len(),
            });
        }
        check_message(message, &self.message_count(write))?;
        let cells = self.programmable_cells(write);
        let value = message - 1u32;
        let k = cells.len() as u64;
        let mut next = current.clone();
        for (idx, &j) in cells.iter().enumerate() {
            next.set(j, value.bit(k - 1 - idx as u64));
        }
        Ok(next)
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        check_write(write)?;
        let value = self
            .programmable_cells(write)
            .iter()
            .fold(BigUint::ZERO, |acc, &j| (acc << 1u32) + u32::from(current.get(j)));
        Ok(value + 1u32)
    }

    fn theoretical_rate(&self) -> f64 {
        let p = self.params;
        (p.p as f64 / (p.alpha * p.beta) as f64).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{measure_rate, simulate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn code(a: usize, b: usize, p: usize, n: usize) -> TrivialCode {
        TrivialCode::new(ConstraintParams::new(a, b, p).unwrap(), n).unwrap()
    }

    #[test]
    fn rate_two_ninths() {
        let c = code(3, 3, 2, 15);
        let r = measure_rate(&c, 3).unwrap();
        assert!((r.rate - 2.0 / 9.0).abs() < 1e-12);
        assert_eq!(r.warning, None);
        assert_eq!(c.programmable_cells(1).len(), 10);
        assert!(c.programmable_cells(2).is_empty());
    }

    #[test]
    fn full_budget_is_rate_one() {
        let c = code(1, 4, 4, 8);
        for w in 1..5 {
            assert_eq!(c.programmable_cells(w).len(), 8);
        }
        assert!((measure_rate(&c, 4).unwrap().rate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schedule_for_2_2_1() {
        let c = code(2, 2, 1, 4);
        assert_eq!(c.programmable_cells(1), vec![0, 2]);
        assert!(c.programmable_cells(2).is_empty());
        assert_eq!(c.period(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let sim = simulate(&c, 20, &mut rng).unwrap();
            assert!(sim.verdict.is_satisfied());
        }
    }

    #[test]
    fn multi_write_budget() {
        // p = 5, beta = 3: q = 2, r = 2
        let c = code(3, 3, 5, 9);
        assert_eq!((c.q(), c.r()), (2, 2));
        assert_eq!(c.programmable_cells(1).len(), 9);
        assert_eq!(c.programmable_cells(2).len(), 6);
        assert!((measure_rate(&c, 3).unwrap().rate - 5.0 / 9.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sim = simulate(&c, 60, &mut rng).unwrap();
        assert!(sim.verdict.is_satisfied());
    }

    #[test]
    fn geometry_and_range_errors() {
        assert!(matches!(
            TrivialCode::new(ConstraintParams::new(2, 3, 1).unwrap(), 10),
            Err(Error::Geometry(_))
        ));
        let c = code(2, 2, 1, 4);
        let z = CellState::zeros(4);
        assert!(c.encode(1, &BigUint::from(5u32), &z).is_err());
        assert!(c.encode(2, &BigUint::from(2u32), &z).is_err());
        assert_eq!(
            c.encode(1, &BigUint::from(4u32), &z).unwrap(),
            "1010".parse().unwrap()
        );
    }
}
