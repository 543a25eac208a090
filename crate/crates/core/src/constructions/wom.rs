//! Binary write-once memory codes: `t` writes on `n` cells, each write may
//! only raise cells from 0 to 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cell::CellState;
use crate::error::{Error, Result};

pub trait WomCode: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn cells(&self) -> usize;

    /// Number of writes `t`.
    fn writes(&self) -> usize;

    /// Message alphabet size on write `j` in `[1 : t]`.
    fn message_count(&self, write: usize) -> u64;

    /// Encodes `message` on write `j`. The result must cover `current`.
    fn encode(&self, write: usize, message: u64, current: &CellState) -> Result<CellState>;

    fn decode(&self, write: usize, current: &CellState) -> Result<u64>;
}

fn check_wom_write(code: &dyn WomCode, write: usize) -> Result<()> {
    if write == 0 || write > code.writes() {
        return Err(Error::InvalidParams(format!(
            "WOM write {write} outside [1:{}]",
            code.writes()
        )));
    }
    Ok(())
}

fn check_wom_message(message: u64, count: u64) -> Result<()> {
    if message == 0 || message > count {
        return Err(Error::Domain {
            message: message.to_string(),
            max: count.to_string(),
        });
    }
    Ok(())
}

/// A WOM code given by explicit transition tables.
///
/// States are `u64` masks with cell 1 as the most significant of `n` bits.
#[derive(Clone, Debug)]
pub struct TableWom {
    name: String,
    n: usize,
    counts: Vec<u64>,
    encode: Vec<BTreeMap<(u64, u64), u64>>,
    decode: Vec<BTreeMap<u64, u64>>,
}

/// One row of a WOM table: on some write, `source` with `message` goes to `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: u64,
    pub message: u64,
    pub target: u64,
}

impl TableWom {
    /// Builds and validates a table. `writes[j]` lists the transitions of write `j + 1`.
    ///
    /// The message range of each write is `[1 : max message]`. Validation walks
    /// the states reachable from all zeros and requires every reachable state
    /// to have a transition for every message, every transition to only raise
    /// cells, and every reached state to decode to a single message.
    pub fn new(name: &str, n: usize, writes: Vec<Vec<Transition>>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::Validation(format!("cell count {n} outside [1:64]")));
        }
        if writes.is_empty() {
            return Err(Error::Validation("table has no writes".into()));
        }
        let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut reachable = BTreeSet::from([0u64]);
        let mut counts = Vec::new();
        let mut encode = Vec::new();
        let mut decode = Vec::new();
        for (j, rows) in writes.into_iter().enumerate() {
            let w = j + 1;
            let mut enc = BTreeMap::new();
            let mut count = 0;
            for t in rows {
                if t.source > limit || t.target > limit {
                    return Err(Error::Validation(format!(
                        "write {w}: state wider than {n} cells"
                    )));
                }
                if t.message == 0 {
                    return Err(Error::Validation(format!("write {w}: messages start at 1")));
                }
                if t.source & !t.target != 0 {
                    return Err(Error::Validation(format!(
                        "write {w}: {} -> {} lowers a cell",
                        fmt_state(t.source, n),
                        fmt_state(t.target, n)
                    )));
                }
                if let Some(prev) = enc.insert((t.source, t.message), t.target) {
                    if prev != t.target {
                        return Err(Error::Validation(format!(
                            "write {w}: state {} message {} has two targets",
                            fmt_state(t.source, n),
                            t.message
                        )));
                    }
                }
                count = count.max(t.message);
            }
            let mut dec: BTreeMap<u64, u64> = BTreeMap::new();
            let mut next = BTreeSet::new();
            for &s in &reachable {
                for m in 1..=count {
                    let Some(&target) = enc.get(&(s, m)) else {
                        return Err(Error::Validation(format!(
                            "write {w}: no transition for state {} message {m}",
                            fmt_state(s, n)
                        )));
                    };
                    if let Some(&other) = dec.get(&target) {
                        if other != m {
                            return Err(Error::Validation(format!(
                                "write {w}: state {} decodes to both {other} and {m}",
                                fmt_state(target, n)
                            )));
                        }
                    }
                    dec.insert(target, m);
                    next.insert(target);
                }
            }
            reachable = next;
            counts.push(count);
            encode.push(enc);
            decode.push(dec);
        }
        Ok(TableWom {
            name: name.to_string(),
            n,
            counts,
            encode,
            decode,
        })
    }

    /// Parses the text table format.
    ///
    /// ```text
    /// # comment
    /// 3 2          # n t
    /// write 1
    /// 000 1 -> 000
    /// ...
    /// write 2
    /// ...
    /// ```
    pub fn parse(name: &str, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n t` header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad header `{header}`"))))
            .collect::<Result<_>>()?;
        let [n, t] = nums[..] else {
            return Err(Error::Parse(format!("header `{header}` must be `n t`")));
        };
        let mut writes: Vec<Vec<Transition>> = Vec::new();
        for (lineno, line) in lines {
            let lineno = lineno + 1;
            if let Some(rest) = line.strip_prefix("write") {
                let w: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad write marker")))?;
                if w != writes.len() + 1 {
                    return Err(Error::Parse(format!(
                        "line {lineno}: expected `write {}`",
                        writes.len() + 1
                    )));
                }
                writes.push(Vec::new());
                continue;
            }
            let Some(current) = writes.last_mut() else {
                return Err(Error::Parse(format!(
                    "line {lineno}: transition before any `write` marker"
                )));
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let [src, msg, "->", dst] = tokens[..] else {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected `state message -> state`"
                )));
            };
            let parse_state = |s: &str| -> Result<u64> {
                let state: CellState = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad state `{s}`")))?;
                if state.len() != n {
                    return Err(Error::Parse(format!(
                        "line {lineno}: state `{s}` does not have {n} cells"
                    )));
                }
                Ok(state.to_u64())
            };
            current.push(Transition {
                source: parse_state(src)?,
                message: msg
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {lineno}: bad message `{msg}`")))?,
                target: parse_state(dst)?,
            });
        }
        if writes.len() != t {
            return Err(Error::Parse(format!(
                "header declares {t} writes, found {}",
                writes.len()
            )));
        }
        if n == 0 || n > 64 {
            return Err(Error::Parse(format!("cell count {n} outside [1:64]")));
        }
        TableWom::new(name, n, writes)
    }
}

fn fmt_state(s: u64, n: usize) -> String {
    CellState::from_u64(s, n).to_string()
}

impl WomCode for TableWom {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn cells(&self) -> usize {
        self.n
    }

    fn writes(&self) -> usize {
        self.counts.len()
    }

    fn message_count(&self, write: usize) -> u64 {
        self.counts[write - 1]
    }

    fn encode(&self, write: usize, message: u64, current: &CellState) -> Result<CellState> {
        check_wom_write(self, write)?;
        check_wom_message(message, self.counts[write - 1])?;
        if current.len() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: current.len(),
            });
        }
        self.encode[write - 1]
            .get(&(current.to_u64(), message))
            .map(|&s| CellState::from_u64(s, self.n))
            .ok_or_else(|| Error::State(format!("WOM write {write} from {current}")))
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<u64> {
        check_wom_write(self, write)?;
        if current.len() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: current.len(),
            });
        }
        self.decode[write - 1]
            .get(&current.to_u64())
            .copied()
            .ok_or_else(|| Error::State(format!("WOM write {write} cannot reach {current}")))
    }
}

/// The 2-write code storing two bits twice in three cells.
///
/// First write: 1 -> 000, 2 -> 001, 3 -> 010, 4 -> 100. A second write of a
/// different message uses the complement of that message's first-write pattern.
pub fn rs_wom() -> TableWom {
    const FIRST: [u64; 4] = [0b000, 0b001, 0b010, 0b100];
    let first: Vec<Transition> = (1..=4)
        .map(|m| Transition {
            source: 0,
            message: m,
            target: FIRST[m as usize - 1],
        })
        .collect();
    let mut second = Vec::new();
    for (i, &s) in FIRST.iter().enumerate() {
        for m in 1..=4u64 {
            let target = if i as u64 + 1 == m {
                s
            } else {
                !FIRST[m as usize - 1] & 0b111
            };
            second.push(Transition {
                source: s,
                message: m,
                target,
            });
        }
    }
    TableWom::new("rs", 3, vec![first, second]).expect("built-in table is valid")
}

/// `t` writes of one bit each on `t` cells: write `j` sets cell `j` to the bit.
#[derive(Clone, Copy, Debug)]
pub struct BitPerWrite {
    t: usize,
}

impl BitPerWrite {
    pub fn new(t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParams("bit-per-write needs t >= 1".into()));
        }
        Ok(BitPerWrite { t })
    }
}

impl WomCode for BitPerWrite {
    fn name(&self) -> String {
        format!("bitper({})", self.t)
    }

    fn cells(&self) -> usize {
        self.t
    }

    fn writes(&self) -> usize {
        self.t
    }

    fn message_count(&self, _write: usize) -> u64 {
        2
    }

    fn encode(&self, write: usize, message: u64, current: &CellState) -> Result<CellState> {
        check_wom_write(self, write)?;
        check_wom_message(message, 2)?;
        if current.len() != self.t {
            return Err(Error::Dimension {
                left: self.t,
                right: current.len(),
            });
        }
        if current.bits()[write - 1..].iter().any(|&b| b) {
            return Err(Error::State(format!(
                "WOM write {write}: cells from {write} on must be zero in {current}"
            )));
        }
        let mut next = current.clone();
        next.set(write - 1, message == 2);
        Ok(next)
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<u64> {
        check_wom_write(self, write)?;
        if current.len() != self.t {
            return Err(Error::Dimension {
                left: self.t,
                right: current.len(),
            });
        }
        Ok(1 + u64::from(current.get(write - 1)))
    }
}
