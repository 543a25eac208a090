use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::wom::WomCode;
use crate::cell::CellState;
use crate::code::{check_message, check_write, RewritingCode};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};

/// What a single write of a time schedule does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// WOM write `write`; `up` runs the code directly, otherwise on complements.
    Wom { write: usize, up: bool },
    /// No information; all cells set to the given level.
    Fill(bool),
    /// No information; state unchanged.
    Hold,
}

/// Alternating WOM phases on a single cell vector.
///
/// Each period has `p` phases of `t` WOM writes, alternating between the WOM
/// code and its complement, optionally followed by a write that fills every
/// cell (ones after an up phase, zeros after a down phase) and silent writes.
/// The first write of every phase starts the WOM code from its initial
/// state, which absorbs the fill when the previous phase ends without one.
#[derive(Clone, Debug)]
struct Schedule {
    wom: Arc<dyn WomCode>,
    p: usize,
    period: usize,
}

impl Schedule {
    fn t(&self) -> usize {
        self.wom.writes()
    }

    fn slot(&self, write: usize) -> Slot {
        let t = self.t();
        let r = (write - 1) / self.period;
        let ip = (write - 1) % self.period + 1;
        let first_up = self.p.is_multiple_of(2) || r.is_multiple_of(2);
        if ip <= self.p * t {
            let k = (ip - 1) / t;
            Slot::Wom {
                write: (ip - 1) % t + 1,
                up: first_up ^ (k % 2 == 1),
            }
        } else if ip == self.p * t + 1 {
            Slot::Fill(first_up ^ ((self.p - 1) % 2 == 1))
        } else {
            Slot::Hold
        }
    }

    fn message_count(&self, write: usize) -> BigUint {
        match self.slot(write) {
            Slot::Wom { write, .. } => BigUint::from(self.wom.message_count(write)),
            _ => BigUint::one(),
        }
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        check_write(write)?;
        let n = self.wom.cells();
        if current.len() != n {
            return Err(Error::Dimension {
                left: n,
                right: current.len(),
            });
        }
        match self.slot(write) {
            Slot::Wom { write: j, up } => {
                check_message(message, &self.message_count(write))?;
                let m = message.to_u64().expect("WOM messages fit in u64");
                let start = if j == 1 {
                    CellState::zeros(n)
                } else if up {
                    current.clone()
                } else {
                    current.complement()
                };
                let out = self.wom.encode(j, m, &start)?;
                Ok(if up { out } else { out.complement() })
            }
            slot => {
                if !message.is_one() {
                    return Err(Error::Schedule {
                        write,
                        reason: format!("write carries no information, got message {message}"),
                    });
                }
                Ok(match slot {
                    Slot::Fill(true) => CellState::ones(n),
                    Slot::Fill(false) => CellState::zeros(n),
                    _ => current.clone(),
                })
            }
        }
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        check_write(write)?;
        match self.slot(write) {
            Slot::Wom { write: j, up } => {
                let view = if up {
                    current.clone()
                } else {
                    current.complement()
                };
                self.wom.decode(j, &view).map(BigUint::from)
            }
            _ => Ok(BigUint::one()),
        }
    }
}

/// `(alpha, 1, 1)` code from a `t`-write WOM code, period `2(t + alpha)`.
///
/// Writes `t` WOM writes, fills with ones, stays silent for `alpha - 1`
/// writes, then repeats on complements and fills with zeros.
#[derive(Clone, Debug)]
pub struct TimeCode {
    alpha: usize,
    schedule: Schedule,
}

impl TimeCode {
    pub fn new(alpha: usize, wom: Arc<dyn WomCode>) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidParams("alpha must be positive".into()));
        }
        let period = wom.writes() + alpha;
        Ok(TimeCode {
            alpha,
            schedule: Schedule { wom, p: 1, period },
        })
    }

    pub fn slot(&self, write: usize) -> Slot {
        self.schedule.slot(write)
    }

    /// `log2(t + 1) / (t + alpha)`, the rate with a sum-rate optimal WOM code.
    pub fn optimal_rate(alpha: usize, t: usize) -> f64 {
        ((t + 1) as f64).log2() / (t + alpha) as f64
    }
}

impl RewritingCode for TimeCode {
    fn name(&self) -> String {
        format!("time[{}]", self.schedule.wom.name())
    }

    fn cells(&self) -> usize {
        self.schedule.wom.cells()
    }

    fn constraint(&self) -> ConstraintParams {
        ConstraintParams {
            alpha: self.alpha,
            beta: 1,
            p: 1,
        }
    }

    fn period(&self) -> usize {
        2 * self.schedule.period
    }

    fn message_count(&self, write: usize) -> BigUint {
        self.schedule.message_count(write)
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        self.schedule.encode(write, message, current)
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        self.schedule.decode(write, current)
    }

    fn theoretical_rate(&self) -> f64 {
        TimeCode::optimal_rate(self.alpha, self.schedule.t())
    }
}

/// `(alpha, 1, p)` code with `p` alternating WOM phases per period.
///
/// The standard form needs `alpha >= (p - 1) t + 1` and has period
/// `alpha + t`: `p t` WOM writes, one fill write, then silence. For odd `p`
/// the last phase is an up phase, so the fill sets all ones and the next
/// period starts on complements. The remark form drops the fill and the
/// silence, giving period `p t` and a `((p - 1) t, 1, p)` code.
#[derive(Clone, Debug)]
pub struct TimePCode {
    alpha: usize,
    p: usize,
    remark: bool,
    schedule: Schedule,
}

impl TimePCode {
    pub fn new(alpha: usize, p: usize, wom: Arc<dyn WomCode>) -> Result<Self> {
        if alpha == 0 || p == 0 {
            return Err(Error::InvalidParams("alpha and p must be positive".into()));
        }
        let t = wom.writes();
        if alpha < (p - 1) * t {
            return Err(Error::InvalidParams(format!(
                "alpha={alpha} < (p-1)t={}; use the remark variant",
                (p - 1) * t
            )));
        }
        if p * t + 1 > alpha + t {
            return Err(Error::InvalidParams(format!(
                "no room for the fill write: pt+1={} > alpha+t={}; use the remark variant",
                p * t + 1,
                alpha + t
            )));
        }
        Ok(TimePCode {
            alpha,
            p,
            remark: false,
            schedule: Schedule {
                wom,
                p,
                period: alpha + t,
            },
        })
    }

    /// Period-`p t` form for `t >= alpha / (p - 1)`.
    pub fn remark_variant(alpha: usize, p: usize, wom: Arc<dyn WomCode>) -> Result<Self> {
        if alpha == 0 || p < 2 {
            return Err(Error::InvalidParams(
                "remark variant needs alpha >= 1 and p >= 2".into(),
            ));
        }
        let t = wom.writes();
        if alpha > (p - 1) * t {
            return Err(Error::InvalidParams(format!(
                "remark variant needs alpha <= (p-1)t={}",
                (p - 1) * t
            )));
        }
        Ok(TimePCode {
            alpha,
            p,
            remark: true,
            schedule: Schedule {
                wom,
                p,
                period: p * t,
            },
        })
    }

    pub fn is_remark(&self) -> bool {
        self.remark
    }

    /// The window length the schedule is actually built for.
    pub fn effective_alpha(&self) -> usize {
        if self.remark {
            (self.p - 1) * self.schedule.t()
        } else {
            self.alpha
        }
    }

    pub fn slot(&self, write: usize) -> Slot {
        self.schedule.slot(write)
    }

    /// `p log2(t + 1) / (alpha + t)`, the rate with a sum-rate optimal WOM code.
    pub fn optimal_rate(alpha: usize, p: usize, t: usize) -> f64 {
        p as f64 * ((t + 1) as f64).log2() / (alpha + t) as f64
    }
}

impl RewritingCode for TimePCode {
    fn name(&self) -> String {
        let variant = if self.remark { "timep-remark" } else { "timep" };
        format!("{variant}[{}]", self.schedule.wom.name())
    }

    fn cells(&self) -> usize {
        self.schedule.wom.cells()
    }

    fn constraint(&self) -> ConstraintParams {
        ConstraintParams {
            alpha: self.alpha,
            beta: 1,
            p: self.p,
        }
    }

    fn period(&self) -> usize {
        self.schedule.period
    }

    fn message_count(&self, write: usize) -> BigUint {
        self.schedule.message_count(write)
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        self.schedule.encode(write, message, current)
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        self.schedule.decode(write, current)
    }

    fn theoretical_rate(&self) -> f64 {
        let t = self.schedule.t();
        if self.remark {
            ((t + 1) as f64).log2() / t as f64
        } else {
            TimePCode::optimal_rate(self.alpha, self.p, t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{measure_rate, simulate};
    use crate::constructions::wom::{rs_wom, BitPerWrite};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rs() -> Arc<dyn WomCode> {
        Arc::new(rs_wom())
    }

    fn bitper(t: usize) -> Arc<dyn WomCode> {
        Arc::new(BitPerWrite::new(t).unwrap())
    }

    #[test]
    fn time_code_schedule() {
        let c = TimeCode::new(4, rs()).unwrap();
        assert_eq!(c.period(), 12);
        let slots: Vec<Slot> = (1..=12).map(|i| c.slot(i)).collect();
        assert_eq!(slots[0], Slot::Wom { write: 1, up: true });
        assert_eq!(slots[1], Slot::Wom { write: 2, up: true });
        assert_eq!(slots[2], Slot::Fill(true));
        assert_eq!(&slots[3..6], &[Slot::Hold; 3]);
        assert_eq!(slots[6], Slot::Wom { write: 1, up: false });
        assert_eq!(slots[8], Slot::Fill(false));
        assert_eq!(c.slot(13), Slot::Wom { write: 1, up: true });
    }

    #[test]
    fn time_code_rates() {
        let c = TimeCode::new(4, rs()).unwrap();
        let r = measure_rate(&c, 12).unwrap();
        assert!((r.rate - 8.0 / 36.0).abs() < 1e-12);
        let row = [0.290, 0.256, 0.235, 0.216, 0.201];
        for (alpha, want) in (4..=8).zip(row) {
            let best = (1..=64)
                .map(|t| TimeCode::optimal_rate(alpha, t))
                .fold(0.0, f64::max);
            assert!((best - want).abs() < 0.003, "alpha={alpha} {best}");
        }
    }

    #[test]
    fn time_code_rejects_message_on_silent_write() {
        let c = TimeCode::new(4, rs()).unwrap();
        let z = CellState::zeros(3);
        assert!(matches!(
            c.encode(4, &BigUint::from(2u32), &z),
            Err(Error::Schedule { write: 4, .. })
        ));
    }

    #[test]
    fn time_codes_pass_checker() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let codes: Vec<Box<dyn RewritingCode>> = vec![
            Box::new(TimeCode::new(4, rs()).unwrap()),
            Box::new(TimeCode::new(1, bitper(3)).unwrap()),
            Box::new(TimePCode::new(2, 2, bitper(1)).unwrap()),
            Box::new(TimePCode::new(3, 2, rs()).unwrap()),
            Box::new(TimePCode::new(5, 3, rs()).unwrap()),
            Box::new(TimePCode::new(7, 4, rs()).unwrap()),
            Box::new(TimePCode::remark_variant(5, 3, bitper(3)).unwrap()),
            Box::new(TimePCode::remark_variant(3, 2, bitper(3)).unwrap()),
            Box::new(TimePCode::remark_variant(4, 3, rs()).unwrap()),
        ];
        for c in &codes {
            for _ in 0..50 {
                let sim = simulate(c.as_ref(), 4 * c.period(), &mut rng).unwrap();
                assert!(sim.verdict.is_satisfied(), "{}: {:?}", c.name(), sim.verdict);
            }
        }
    }

    #[test]
    fn timep_parameter_checks() {
        assert!(TimePCode::new(2, 2, rs()).is_err());
        assert!(TimePCode::new(1, 3, rs()).is_err());
        assert!(TimePCode::new(2, 2, bitper(1)).is_ok());
        assert_eq!(TimePCode::new(2, 2, bitper(1)).unwrap().period(), 3);
        let r = TimePCode::remark_variant(5, 3, bitper(3)).unwrap();
        assert_eq!((r.period(), r.effective_alpha()), (9, 6));
        assert!(TimePCode::remark_variant(7, 3, bitper(3)).is_err());
    }

    #[test]
    fn odd_p_alternates_periods() {
        let c = TimePCode::new(5, 3, rs()).unwrap();
        assert_eq!(c.period(), 7);
        assert_eq!(c.slot(1), Slot::Wom { write: 1, up: true });
        assert_eq!(c.slot(3), Slot::Wom { write: 1, up: false });
        assert_eq!(c.slot(5), Slot::Wom { write: 1, up: true });
        assert_eq!(c.slot(7), Slot::Fill(true));
        assert_eq!(c.slot(8), Slot::Wom { write: 1, up: false });
        assert_eq!(c.slot(14), Slot::Fill(false));
        let rate = measure_rate(&c, 7).unwrap().rate;
        assert!((rate - 3.0 * 4.0 / (7.0 * 3.0)).abs() < 1e-12);
    }
}
