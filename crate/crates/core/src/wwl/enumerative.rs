use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::matrix::{transition_from_states, TransitionMatrix};
use super::states::{build_state_set, StateSet};
use super::{is_wwl, low_mask, WwlParams};
use crate::cell::CellState;
use crate::code::check_message;
use crate::error::{Error, Result};

/// Completion counts per vector length and prefix state.
///
/// `entry(len, k)` is the number of WWL vectors of length `len` whose first
/// `beta - 1` bits equal state `k` (0-based). Rows run from length `beta - 1`,
/// which is all ones, up to the largest length requested.
#[derive(Clone, Debug)]
pub struct CountTable {
    min_len: usize,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    /// Table with rows up to length `n + beta - 2`, enough to rank vectors of length `n`.
    pub fn build(params: WwlParams, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("vector length must be positive".into()));
        }
        let states = build_state_set(params)?;
        let a = transition_from_states(&states);
        Ok(Self::with_rows(&a, params.state_width(), n + params.beta() - 2))
    }

    fn with_rows(a: &TransitionMatrix, min_len: usize, max_len: usize) -> Self {
        let mut rows = Vec::with_capacity(max_len + 1 - min_len);
        rows.push(vec![BigUint::one(); a.size()]);
        for _ in min_len..max_len {
            let prev = rows.last().expect("seeded");
            let next = (0..a.size())
                .map(|i| {
                    a.row(i).iter().fold(BigUint::zero(), |acc, &(j, v)| {
                        acc + &prev[j] * v
                    })
                })
                .collect();
            rows.push(next);
        }
        CountTable { min_len, rows }
    }

    pub fn min_len(&self) -> usize {
        self.min_len
    }

    pub fn max_len(&self) -> usize {
        self.min_len + self.rows.len() - 1
    }

    pub fn row(&self, len: usize) -> &[BigUint] {
        &self.rows[len - self.min_len]
    }

    pub fn entry(&self, len: usize, k: usize) -> &BigUint {
        &self.rows[len - self.min_len][k]
    }

    /// Number of WWL vectors of length `len`, for `len >= beta - 1`.
    pub fn row_sum(&self, len: usize) -> BigUint {
        self.row(len).iter().sum()
    }
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of WWL vectors of length `n`.
pub fn count_wwl(params: WwlParams, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParams("vector length must be positive".into()));
    }
    let w = params.state_width();
    if n < w {
        // shorter than one window: only the total weight matters
        return Ok((0..=params.p().min(n)).map(|i| binomial_big(n, i)).sum());
    }
    let states = build_state_set(params)?;
    let a = transition_from_states(&states);
    Ok(CountTable::with_rows(&a, w, n).row_sum(n))
}

/// Enumerative codec between WWL vectors of length `n` and ranks `[1 : M_n]`
/// in increasing numeric order (first bit most significant).
#[derive(Clone, Debug)]
pub struct Enumerator {
    params: WwlParams,
    n: usize,
    states: StateSet,
    table: CountTable,
    total: BigUint,
}

impl Enumerator {
    pub fn new(params: WwlParams, n: usize) -> Result<Self> {
        let states = build_state_set(params)?;
        let a = transition_from_states(&states);
        if n == 0 {
            return Err(Error::InvalidParams("vector length must be positive".into()));
        }
        let table = CountTable::with_rows(&a, params.state_width(), n + params.beta() - 2);
        let total = count_wwl(params, n)?;
        Ok(Enumerator {
            params,
            n,
            states,
            table,
            total,
        })
    }

    pub fn params(&self) -> WwlParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `M_n`, the number of codewords.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn table(&self) -> &CountTable {
        &self.table
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn rank(&self, c: &CellState) -> Result<BigUint> {
        self.rank_counted(c).map(|(r, _)| r)
    }

    /// Rank together with the number of count-table lookups performed.
    ///
    /// Scans left to right; each 1 at position `j` adds the number of valid
    /// vectors that agree on the first `j - 1` bits and have a 0 at `j`,
    /// read from the table through the `beta - 2` preceding bits followed by 0.
    pub fn rank_counted(&self, c: &CellState) -> Result<(BigUint, usize)> {
        if c.len() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: c.len(),
            });
        }
        if !is_wwl(c.bits(), self.params) {
            return Err(Error::InvalidCodeword(c.to_string()));
        }
        let beta = self.params.beta();
        let history = low_mask(beta.saturating_sub(2));
        let mut recent = 0u64;
        let mut cnt = BigUint::zero();
        let mut lookups = 0;
        for (idx, &bit) in c.bits().iter().enumerate() {
            let j = idx + 1;
            if bit {
                cnt += self.lookup(recent, self.n - j + beta - 1);
                lookups += 1;
            }
            recent = ((recent << 1) | u64::from(bit)) & history;
        }
        Ok((cnt + 1u32, lookups))
    }

    pub fn unrank(&self, m: &BigUint) -> Result<CellState> {
        self.unrank_counted(m).map(|(c, _)| c)
    }

    /// Greedy left-to-right inverse of [`Enumerator::rank`].
    ///
    /// Tries a 1 at each position; if the window ending there stays within
    /// budget, the count of vectors with a 0 at that position decides whether
    /// the 1 is kept.
    pub fn unrank_counted(&self, m: &BigUint) -> Result<(CellState, usize)> {
        check_message(m, &self.total)?;
        let beta = self.params.beta();
        let history = low_mask(beta.saturating_sub(2));
        let window = low_mask(beta - 1);
        let target = m - 1u32;
        let mut bits = vec![false; self.n];
        let mut recent = 0u64;
        let mut cnt = BigUint::zero();
        let mut lookups = 0;
        for i in 1..=self.n {
            // only the window ending at i can break: everything after it is still 0
            let feasible = ((recent & window).count_ones() as usize) < self.params.p();
            let mut bit = false;
            if feasible {
                let try_cnt = &cnt + self.lookup(recent & history, self.n - i + beta - 1);
                lookups += 1;
                if try_cnt == target {
                    bits[i - 1] = true;
                    return Ok((CellState::from_bits(bits)?, lookups));
                }
                if try_cnt < target {
                    bit = true;
                    cnt = try_cnt;
                }
            }
            bits[i - 1] = bit;
            recent = (recent << 1) | u64::from(bit);
        }
        Ok((CellState::from_bits(bits)?, lookups))
    }

    fn lookup(&self, preceding: u64, len: usize) -> &BigUint {
        let prefix = (preceding << 1) & low_mask(self.params.state_width());
        let k = self
            .states
            .index_of(prefix)
            .expect("prefix of a valid vector is an admissible state");
        self.table.entry(len, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: usize, p: usize) -> WwlParams {
        WwlParams::new(b, p).unwrap()
    }

    fn st(s: &str) -> CellState {
        s.parse().unwrap()
    }

    /// Exhaustive list of valid vectors of length n in increasing numeric order.
    fn brute(params: WwlParams, n: usize) -> Vec<CellState> {
        (0..(1u64 << n))
            .map(|x| CellState::from_u64(x, n))
            .filter(|c| is_wwl(c.bits(), params))
            .collect()
    }

    #[test]
    fn count_table_entries_for_beta6_p3() {
        let t = CountTable::build(params(6, 3), 10).unwrap();
        // 1-based state indices: s_1, s_5, s_11, s_23, s_9, s_3
        assert_eq!(t.entry(14, 0), &BigUint::from(236u32));
        assert_eq!(t.entry(12, 4), &BigUint::from(72u32));
        assert_eq!(t.entry(11, 10), &BigUint::from(35u32));
        assert_eq!(t.entry(8, 22), &BigUint::from(8u32));
        assert_eq!(t.entry(5, 8), &BigUint::from(1u32));
        assert_eq!(t.entry(13, 2), &BigUint::from(119u32));
        assert_eq!(t.entry(6, 4), &BigUint::from(2u32));
        assert_eq!(t.min_len(), 5);
        assert_eq!(t.max_len(), 14);
        assert!(t.row(5).iter().all(|x| x.is_one()));
    }

    #[test]
    fn count_table_entries_match_prefix_counts() {
        let p = params(4, 2);
        let t = CountTable::build(p, 8).unwrap();
        let set = build_state_set(p).unwrap();
        for len in t.min_len()..=t.max_len() {
            let all = brute(p, len);
            for k in 0..set.len() {
                let prefix = set.state_bits(k);
                let expect = all.iter().filter(|c| c.bits()[..3] == prefix[..]).count();
                assert_eq!(t.entry(len, k), &BigUint::from(expect), "len={len} k={k}");
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_wwl(params(6, 3), 10).unwrap(), BigUint::from(421u32));
        assert_eq!(count_wwl(params(3, 2), 4).unwrap(), BigUint::from(13u32));
        assert_eq!(count_wwl(params(2, 1), 5).unwrap(), BigUint::from(13u32));
        assert_eq!(count_wwl(params(6, 3), 2).unwrap(), BigUint::from(4u32));
        assert_eq!(count_wwl(params(1, 1), 7).unwrap(), BigUint::from(128u32));
        assert!(count_wwl(params(2, 1), 0).is_err());
    }

    #[test]
    fn row_sums_match_count() {
        let p = params(5, 2);
        let t = CountTable::build(p, 20).unwrap();
        for len in t.min_len()..=t.max_len() {
            assert_eq!(t.row_sum(len), count_wwl(p, len).unwrap());
        }
    }

    #[test]
    fn rank_examples() {
        let e = Enumerator::new(params(6, 3), 10).unwrap();
        assert_eq!(e.rank(&st("1011001001")).unwrap(), BigUint::from(353u32));
        assert_eq!(e.rank(&st("0000000000")).unwrap(), BigUint::one());
        let e = Enumerator::new(params(3, 2), 4).unwrap();
        assert_eq!(e.rank(&st("0110")).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn unrank_examples() {
        let e = Enumerator::new(params(6, 3), 10).unwrap();
        assert_eq!(e.unrank(&BigUint::from(353u32)).unwrap(), st("1011001001"));
        assert_eq!(e.unrank(&BigUint::one()).unwrap(), st("0000000000"));
        let e = Enumerator::new(params(3, 2), 4).unwrap();
        assert_eq!(e.unrank(&BigUint::from(13u32)).unwrap(), st("1101"));
        assert_eq!(e.unrank(&BigUint::from(11u32)).unwrap(), st("1011"));
    }

    #[test]
    fn rank_errors() {
        let e = Enumerator::new(params(6, 3), 10).unwrap();
        assert!(matches!(
            e.rank(&st("1111000000")),
            Err(Error::InvalidCodeword(_))
        ));
        assert!(matches!(e.rank(&st("101")), Err(Error::Dimension { .. })));
        assert!(matches!(
            e.unrank(&BigUint::from(422u32)),
            Err(Error::Domain { .. })
        ));
        assert!(e.unrank(&BigUint::zero()).is_err());
    }

    #[test]
    fn bijection_on_small_grid() {
        for beta in 1..=5 {
            for p in 1..=beta {
                for n in 1..=10 {
                    let prm = params(beta, p);
                    let e = Enumerator::new(prm, n).unwrap();
                    let all = brute(prm, n);
                    assert_eq!(e.total(), &BigUint::from(all.len()));
                    for (idx, c) in all.iter().enumerate() {
                        let r = BigUint::from(idx + 1);
                        assert_eq!(e.rank(c).unwrap(), r);
                        assert_eq!(&e.unrank(&r).unwrap(), c);
                    }
                }
            }
        }
    }

    #[test]
    fn lookups_are_linear() {
        let e = Enumerator::new(params(7, 3), 200).unwrap();
        let m = e.total() / 3u32;
        let (c, l1) = e.unrank_counted(&m).unwrap();
        let (_, l2) = e.rank_counted(&c).unwrap();
        assert!(l1 <= 200 && l2 <= 200);
    }
}
