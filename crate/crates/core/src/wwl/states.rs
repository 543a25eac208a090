use super::{low_mask, WwlParams, MAX_STATES};
use crate::error::{Error, Result};

/// Admissible prefix states: all length-`(beta - 1)` vectors of weight at most `p`,
/// sorted by numeric value (first bit most significant).
///
/// States are stored as `u64` masks whose bit `beta - 2` is the first position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSet {
    params: WwlParams,
    states: Vec<u64>,
}

impl StateSet {
    pub fn params(&self) -> WwlParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn width(&self) -> usize {
        self.params.state_width()
    }

    pub fn masks(&self) -> &[u64] {
        &self.states
    }

    /// State `k` (0-based) as a bit vector.
    pub fn state_bits(&self, k: usize) -> Vec<bool> {
        let w = self.width();
        let s = self.states[k];
        (0..w).map(|i| (s >> (w - 1 - i)) & 1 == 1).collect()
    }

    /// Position of a prefix mask in the ordering, by binary search.
    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.states.binary_search(&mask).ok()
    }
}

/// Number of `k`-subsets of `n` items, saturating.
fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

pub fn build_state_set(params: WwlParams) -> Result<StateSet> {
    let w = params.state_width();
    let size = (0..=params.p().min(w))
        .map(|i| binomial(w, i))
        .fold(0usize, usize::saturating_add);
    if size > MAX_STATES {
        return Err(Error::Resource {
            what: "WWL prefix-state set",
            needed: size.next_power_of_two().trailing_zeros() as usize,
            limit: MAX_STATES.trailing_zeros() as usize,
        });
    }
    let mut states = Vec::with_capacity(size);
    states.push(0u64);
    for k in 1..=params.p().min(w) {
        // Gosper's hack: successive masks with exactly k bits set
        let mut x = low_mask(k);
        let limit = if w == 64 { u64::MAX } else { 1u64 << w };
        while w == 64 || x < limit {
            states.push(x);
            let c = x & x.wrapping_neg();
            let r = x.wrapping_add(c);
            if r == 0 {
                break;
            }
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    states.sort_unstable();
    debug_assert_eq!(states.len(), size);
    Ok(StateSet { params, states })
}

/// Merges two equal-length vectors that overlap in all but one position.
///
/// Returns `u` followed by the last bit of `v` when the last `L - 1` bits of
/// `u` equal the first `L - 1` bits of `v`, and `None` otherwise.
pub fn merge(u: &[bool], v: &[bool]) -> Result<Option<Vec<bool>>> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            left: u.len(),
            right: v.len(),
        });
    }
    let l = u.len();
    if l == 0 {
        return Ok(Some(Vec::new()));
    }
    if u[1..] != v[..l - 1] {
        return Ok(None);
    }
    let mut out = u.to_vec();
    out.push(v[l - 1]);
    Ok(Some(out))
}
