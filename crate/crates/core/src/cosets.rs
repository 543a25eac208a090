//! Coset codes for the `(1, beta, p)` constraint built from S-good linear
//! codes, where S is the set of `(beta, p)`-WWL vectors of length `n`.
//!
//! Vectors of `V_n` are `u64` masks with cell 1 as the most significant of
//! `n` bits, so the mask value is the lexicographic index used for
//! tie-breaking.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cell::CellState;
use crate::code::{check_message, check_write, RewritingCode};
use crate::constraint::ConstraintParams;
use crate::error::{Error, Result};
use crate::wwl::WwlParams;

/// Default cap on `n` for bitmaps over `V_n`.
pub const DEFAULT_MAX_BITS: usize = 24;

/// Candidates drawn per step in sampled mode.
pub const SAMPLE_SIZE: usize = 1 << 16;

fn mask_is_wwl(x: u64, n: usize, params: WwlParams) -> bool {
    let window = if params.beta() >= 64 {
        u64::MAX
    } else {
        (1u64 << params.beta()) - 1
    };
    (0..n).all(|s| ((x >> s) & window).count_ones() as usize <= params.p())
}

/// All `(beta, p)`-WWL vectors of length `n` in increasing order.
pub fn wwl_vectors(n: usize, params: WwlParams, max_bits: usize) -> Result<Vec<u64>> {
    check_size(n, max_bits)?;
    Ok((0..1u64 << n).filter(|&x| mask_is_wwl(x, n, params)).collect())
}

fn check_size(n: usize, max_bits: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    if n > max_bits || n > 40 {
        return Err(Error::Resource {
            what: "bitmap over V_n",
            needed: n,
            limit: max_bits.min(40),
        });
    }
    Ok(())
}

fn fmt_vec(x: u64, n: usize) -> String {
    CellState::from_u64(x, n).to_string()
}

/// Indicator of `S + span(basis)`, built by repeated doubling.
fn coverage(n: usize, wwl: &[u64], basis: &[u64]) -> Vec<bool> {
    let mut cover = vec![false; 1 << n];
    for &s in wwl {
        cover[s as usize] = true;
    }
    for &z in basis {
        cover = (0..cover.len()).map(|x| cover[x] || cover[x ^ z as usize]).collect();
    }
    cover
}

/// Checks whether `span(basis) + S = V_n` and returns `m_B`, the number of
/// uncovered vectors.
pub fn is_s_good(basis: &[u64], wwl: &[u64], n: usize, max_bits: usize) -> Result<(bool, u64)> {
    check_size(n, max_bits)?;
    if let Some(&z) = basis.iter().find(|&&z| z >> n != 0) {
        return Err(Error::InvalidParams(format!("basis vector {z:#x} wider than {n} bits")));
    }
    let cover = coverage(n, wwl, basis);
    let missing = cover.iter().filter(|&&c| !c).count() as u64;
    Ok((missing == 0, missing))
}

/// In-place Walsh-Hadamard transform with wrapping arithmetic.
fn walsh_hadamard(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u.wrapping_add(v);
                *y = u.wrapping_sub(v);
            }
        }
        h *= 2;
    }
}

/// `|C ∩ (z + C)|` for every `z`, via two transforms.
///
/// Intermediate sums overflow for large `n`, but the final values are below
/// `2^(2n)` so the wrapped result is exact.
fn autocorrelation(cover: &[bool]) -> Vec<i64> {
    let n = cover.len().trailing_zeros();
    let mut a: Vec<i64> = cover.iter().map(|&c| i64::from(c)).collect();
    walsh_hadamard(&mut a);
    for v in a.iter_mut() {
        *v = v.wrapping_mul(*v);
    }
    walsh_hadamard(&mut a);
    for v in a.iter_mut() {
        *v >>= n;
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { seed: u64 },
}

/// One accepted doubling: the new generator and the coverage after it.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStep {
    pub z: String,
    #[serde(rename = "N_B")]
    pub covered: u64,
    #[serde(rename = "Q_B")]
    pub q: f64,
}

/// Greedy construction of an S-good linear code by doubling.
#[derive(Clone, Debug)]
pub struct GoodCodeSearch {
    n: usize,
    params: WwlParams,
    mode: ScanMode,
    wwl: Vec<u64>,
    basis: Vec<u64>,
    in_code: Vec<bool>,
    cover: Vec<bool>,
    covered: u64,
    steps: Vec<SearchStep>,
    rng: ChaCha8Rng,
}

impl GoodCodeSearch {
    pub fn new(n: usize, params: WwlParams, mode: ScanMode, max_bits: usize) -> Result<Self> {
        let wwl = wwl_vectors(n, params, max_bits)?;
        let cover = coverage(n, &wwl, &[]);
        let mut in_code = vec![false; 1 << n];
        in_code[0] = true;
        let seed = match mode {
            ScanMode::Sampled { seed } => seed,
            ScanMode::Exhaustive => 0,
        };
        Ok(GoodCodeSearch {
            n,
            params,
            mode,
            covered: wwl.len() as u64,
            wwl,
            basis: Vec::new(),
            in_code,
            cover,
            steps: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> WwlParams {
        self.params
    }

    pub fn mode(&self) -> ScanMode {
        self.mode
    }

    /// The WWL set `S` in increasing order.
    pub fn wwl(&self) -> &[u64] {
        &self.wwl
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    /// Dimension `j` of the current code.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// `N_B = |B + S|`.
    pub fn covered(&self) -> u64 {
        self.covered
    }

    /// `Q_B = 1 - N_B / 2^n`.
    pub fn q(&self) -> f64 {
        1.0 - self.covered as f64 / (1u64 << self.n) as f64
    }

    /// `m_B = 2^n Q_B`, the number of uncovered vectors.
    pub fn uncovered(&self) -> u64 {
        (1u64 << self.n) - self.covered
    }

    pub fn is_good(&self) -> bool {
        self.uncovered() == 0
    }

    pub fn steps(&self) -> &[SearchStep] {
        &self.steps
    }

    pub fn coverage(&self) -> &[bool] {
        &self.cover
    }

    /// `ceil(n - log2 |S| + log2 n)`, the dimension by which goodness is guaranteed.
    pub fn dimension_bound(&self) -> usize {
        let n = self.n as f64;
        (n - (self.wwl.len() as f64).log2() + n.log2()).ceil().max(0.0) as usize
    }

    /// Adds the generator `z` outside the code that minimizes `|C ∩ (z + C)|`,
    /// smallest `z` on ties.
    pub fn greedy_double(&mut self) -> Result<&SearchStep> {
        if self.is_good() {
            return Err(Error::Precondition("code is already S-good".into()));
        }
        let corr = autocorrelation(&self.cover);
        let size = 1u64 << self.n;
        let exhaustive = || {
            (1..size)
                .filter(|&z| !self.in_code[z as usize])
                .min_by_key(|&z| (corr[z as usize], z))
        };
        let mut best = match self.mode {
            ScanMode::Exhaustive => exhaustive(),
            ScanMode::Sampled { .. } => {
                let draws = SAMPLE_SIZE.min(size as usize - 1);
                sample(&mut self.rng, size as usize - 1, draws)
                    .into_iter()
                    .map(|i| i as u64 + 1)
                    .filter(|&z| !self.in_code[z as usize])
                    .min_by_key(|&z| (corr[z as usize], z))
            }
        };
        if let Some(z) = best {
            if !self.meets_bound(2 * self.covered - corr[z as usize] as u64) {
                best = exhaustive();
            }
        }
        let z = best.ok_or_else(|| Error::Anomaly("no vector outside the code".into()))?;
        let new_covered = 2 * self.covered - corr[z as usize] as u64;
        if new_covered <= self.covered || !self.meets_bound(new_covered) {
            return Err(Error::Anomaly(format!(
                "doubling by {} gives N_B={new_covered} from {}",
                fmt_vec(z, self.n),
                self.covered
            )));
        }
        self.cover = (0..self.cover.len())
            .map(|x| self.cover[x] || self.cover[x ^ z as usize])
            .collect();
        self.in_code = (0..self.in_code.len())
            .map(|x| self.in_code[x] || self.in_code[x ^ z as usize])
            .collect();
        self.basis.push(z);
        self.covered = new_covered;
        self.steps.push(SearchStep {
            z: fmt_vec(z, self.n),
            covered: new_covered,
            q: self.q(),
        });
        Ok(self.steps.last().expect("just pushed"))
    }

    /// `Q_new <= Q_old^2` in exact arithmetic.
    fn meets_bound(&self, new_covered: u64) -> bool {
        let size = 1u128 << self.n;
        (size - new_covered as u128) * size <= (size - self.covered as u128).pow(2)
    }

    /// Doubles until the code is S-good.
    pub fn run(&mut self) -> Result<()> {
        while !self.is_good() {
            if self.basis.len() >= self.n {
                return Err(Error::Anomaly("full space reached without goodness".into()));
            }
            self.greedy_double()?;
        }
        Ok(())
    }
}

/// Syndrome coding over the cosets of an S-good linear code.
///
/// A write adds the smallest WWL vector whose syndrome moves the state to
/// the coset of the message; the decoder reads the syndrome.
#[derive(Clone, Debug)]
pub struct CosetCode {
    n: usize,
    params: WwlParams,
    basis: Vec<u64>,
    checks: Vec<u64>,
    leaders: Vec<u64>,
}

impl CosetCode {
    pub fn new(n: usize, params: WwlParams, basis: &[u64], max_bits: usize) -> Result<Self> {
        let wwl = wwl_vectors(n, params, max_bits)?;
        let (good, missing) = is_s_good(basis, &wwl, n, max_bits)?;
        if !good {
            return Err(Error::Precondition(format!(
                "basis is not S-good ({missing} vectors uncovered)"
            )));
        }
        let rows = reduce(basis);
        let checks = parity_checks(&rows, n);
        let mut leaders = vec![None; 1 << checks.len()];
        for &s in &wwl {
            let slot = &mut leaders[syndrome(&checks, s) as usize];
            if slot.is_none() {
                *slot = Some(s);
            }
        }
        let leaders = leaders
            .into_iter()
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::Anomaly("S-good code with an unreached syndrome".into()))?;
        Ok(CosetCode {
            n,
            params,
            basis: rows,
            checks,
            leaders,
        })
    }

    pub fn from_search(search: &GoodCodeSearch) -> Result<Self> {
        CosetCode::new(search.n(), search.params(), search.basis(), search.n())
    }

    /// Dimension `k` of the underlying linear code.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Parity functionals whose common kernel is the code.
    pub fn parity_checks(&self) -> &[u64] {
        &self.checks
    }

    pub fn syndrome(&self, x: u64) -> u64 {
        syndrome(&self.checks, x)
    }

    /// Coset leader used for each syndrome.
    pub fn leaders(&self) -> &[u64] {
        &self.leaders
    }

    fn state_mask(&self, state: &CellState) -> Result<u64> {
        if state.len() != self.n {
            return Err(Error::Dimension {
                left: self.n,
                right: state.len(),
            });
        }
        Ok(state.to_u64())
    }
}

/// Reduced row echelon form of the span, dropping dependent vectors.
fn reduce(basis: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = Vec::new();
    for &v in basis {
        let mut v = v;
        for &r in &rows {
            let pivot = 63 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let pivot = 63 - v.leading_zeros();
            for r in rows.iter_mut() {
                if *r >> pivot & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    rows
}

/// Basis of the dual of the span of `rows` (given in reduced echelon form).
fn parity_checks(rows: &[u64], n: usize) -> Vec<u64> {
    let pivots: Vec<u32> = rows.iter().map(|r| 63 - r.leading_zeros()).collect();
    (0..n as u32)
        .rev()
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut h = 1u64 << free;
            for (r, &p) in rows.iter().zip(&pivots) {
                if r >> free & 1 == 1 {
                    h |= 1u64 << p;
                }
            }
            h
        })
        .collect()
}

fn syndrome(checks: &[u64], x: u64) -> u64 {
    checks
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &h)| acc | (u64::from((h & x).count_ones() & 1) << i))
}

impl RewritingCode for CosetCode {
    fn name(&self) -> String {
        "coset".into()
    }

    fn cells(&self) -> usize {
        self.n
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
        BigUint::one() << self.checks.len()
    }

    fn encode(&self, write: usize, message: &BigUint, current: &CellState) -> Result<CellState> {
        check_write(write)?;
        check_message(message, &self.message_count(write))?;
        let x = self.state_mask(current)?;
        let target = (message - 1u32).to_u64().expect("fits by range check");
        let s = self.leaders[(self.syndrome(x) ^ target) as usize];
        Ok(CellState::from_u64(x ^ s, self.n))
    }

    fn decode(&self, write: usize, current: &CellState) -> Result<BigUint> {
        check_write(write)?;
        let x = self.state_mask(current)?;
        Ok(BigUint::from(self.syndrome(x)) + 1u32)
    }

    fn theoretical_rate(&self) -> f64 {
        self.checks.len() as f64 / self.n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wwl::{count_wwl, is_wwl};

    fn params(b: usize, p: usize) -> WwlParams {
        WwlParams::new(b, p).unwrap()
    }

    #[test]
    fn wwl_vectors_match_count_and_predicate() {
        for (b, p, n) in [(3, 2, 4), (6, 3, 10), (2, 1, 9), (4, 1, 7), (5, 5, 6)] {
            let v = wwl_vectors(n, params(b, p), 24).unwrap();
            assert_eq!(BigUint::from(v.len()), count_wwl(params(b, p), n).unwrap());
            for x in 0..1u64 << n {
                let bits = CellState::from_u64(x, n);
                assert_eq!(v.binary_search(&x).is_ok(), is_wwl(bits.bits(), params(b, p)));
            }
        }
    }

    #[test]
    fn goodness_examples() {
        let s = wwl_vectors(4, params(3, 2), 24).unwrap();
        assert_eq!(is_s_good(&[], &s, 4, 24).unwrap(), (false, 3));
        let full = [1, 2, 4, 8];
        assert_eq!(is_s_good(&full, &s, 4, 24).unwrap(), (true, 0));
        assert!(matches!(
            is_s_good(&[], &s, 30, 24),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn autocorrelation_matches_direct() {
        let s = wwl_vectors(6, params(3, 1), 24).unwrap();
        let cover = coverage(6, &s, &[0b101]);
        let corr = autocorrelation(&cover);
        for z in 0..64usize {
            let direct = (0..64).filter(|&x| cover[x] && cover[x ^ z]).count() as i64;
            assert_eq!(corr[z], direct);
        }
    }

    #[test]
    fn greedy_search_small() {
        let mut g = GoodCodeSearch::new(4, params(3, 2), ScanMode::Exhaustive, 24).unwrap();
        assert_eq!(g.covered(), 13);
        assert!((g.q() - 3.0 / 16.0).abs() < 1e-15);
        g.run().unwrap();
        assert!(g.dimension() <= 3);
        let code = CosetCode::from_search(&g).unwrap();
        assert_eq!(code.dimension(), g.dimension());
        for x in 0..16u64 {
            let c = CellState::from_u64(x, 4);
            for m in 1..=1u32 << (4 - code.dimension()) {
                let m = BigUint::from(m);
                let next = code.encode(1, &m, &c).unwrap();
                assert_eq!(code.decode(1, &next).unwrap(), m);
                assert!(is_wwl(c.xor(&next).unwrap().bits(), params(3, 2)));
            }
        }
    }

    #[test]
    fn parity_checks_annihilate_code() {
        let rows = reduce(&[0b1011, 0b0110, 0b1101]);
        assert_eq!(rows.len(), 2);
        let h = parity_checks(&rows, 4);
        assert_eq!(h.len(), 2);
        for &r in &rows {
            assert_eq!(syndrome(&h, r), 0);
        }
        let distinct: std::collections::BTreeSet<u64> = (0..16).map(|x| syndrome(&h, x)).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn non_good_basis_rejected() {
        assert!(matches!(
            CosetCode::new(4, params(3, 2), &[], 24),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sampled_mode_reaches_goodness() {
        let mut g =
            GoodCodeSearch::new(10, params(3, 2), ScanMode::Sampled { seed: 4 }, 24).unwrap();
        g.run().unwrap();
        assert!(g.dimension() <= g.dimension_bound());
    }
}
