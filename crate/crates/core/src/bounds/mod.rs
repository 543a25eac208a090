//! Upper and lower bounds on the `(alpha, beta, p)` capacity, exact counts
//! of small 2D arrays, and grid tables of bounds.

mod count2d;
mod table;

pub use count2d::{count_2d_arrays, Array2DCount};
pub use table::{emit_table, evaluate_grid, parse_grid, GridPoint};

use serde::Serialize;

use crate::constraint::ConstraintParams;
use crate::error::Result;
use crate::wwl::{capacity, WwlParams, DEFAULT_TOLERANCE};

/// Published upper bounds from square checkerboard constraints.
pub const REFERENCE_UPPER: [((usize, usize, usize), f64); 2] =
    [((2, 2, 1), 0.43431), ((3, 3, 1), 0.25681)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperProvenance {
    WwlAlpha1,
    WwlBeta1,
    #[serde(rename = "2d-reference")]
    Reference2d,
    #[serde(rename = "vacuous-1")]
    Vacuous1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerProvenance {
    Trivial,
    SpaceConstruction,
    TimeConstruction,
    Dilution,
    Coset,
}

impl UpperProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            UpperProvenance::WwlAlpha1 => "wwl-alpha1",
            UpperProvenance::WwlBeta1 => "wwl-beta1",
            UpperProvenance::Reference2d => "2d-reference",
            UpperProvenance::Vacuous1 => "vacuous-1",
        }
    }
}

impl LowerProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            LowerProvenance::Trivial => "trivial",
            LowerProvenance::SpaceConstruction => "space-construction",
            LowerProvenance::TimeConstruction => "time-construction",
            LowerProvenance::Dilution => "dilution",
            LowerProvenance::Coset => "coset",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UpperBound {
    pub value: f64,
    pub provenance: UpperProvenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub provenance: LowerProvenance,
    /// WOM write count of the best time construction, when one is used.
    pub t_opt: Option<usize>,
}

/// Bracket on `C(alpha, beta, p)` in bits per cell per write.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub alpha: usize,
    pub beta: usize,
    pub p: usize,
    pub coset: bool,
    pub lower: f64,
    pub lower_provenance: LowerProvenance,
    pub upper: f64,
    pub upper_provenance: UpperProvenance,
    pub t_opt: Option<usize>,
}

pub fn upper_bound(params: ConstraintParams) -> Result<UpperBound> {
    let ConstraintParams { alpha, beta, p } = params;
    let (value, provenance) = if params.is_vacuous() {
        (1.0, UpperProvenance::Vacuous1)
    } else if alpha == 1 {
        let c = capacity(WwlParams::new(beta, p)?, DEFAULT_TOLERANCE)?;
        (c.capacity_upper, UpperProvenance::WwlAlpha1)
    } else if beta == 1 {
        let c = capacity(WwlParams::new(alpha, p)?, DEFAULT_TOLERANCE)?;
        (c.capacity_upper, UpperProvenance::WwlBeta1)
    } else if let Some(&(_, v)) = REFERENCE_UPPER.iter().find(|(k, _)| *k == (alpha, beta, p)) {
        (v, UpperProvenance::Reference2d)
    } else {
        (1.0, UpperProvenance::Vacuous1)
    };
    Ok(UpperBound {
        value: value.min(1.0),
        provenance,
    })
}

/// Best `p log2(t + 1) / (alpha + t)` over admissible `t`, with the maximizing `t`.
///
/// For `p = 1` every `t` is admissible; the expression is unimodal in `t`
/// so the scan stops once it has been falling for a while.
pub fn best_time_rate(alpha: usize, p: usize) -> (f64, usize) {
    let rate = |t: usize| p as f64 * ((t + 1) as f64).log2() / (alpha + t) as f64;
    let max_t = if p == 1 { usize::MAX } else { alpha / (p - 1) };
    let mut best = (0.0, 0);
    let mut t = 1;
    while t <= max_t {
        let r = rate(t);
        if r > best.0 {
            best = (r, t);
        } else if p == 1 && t > 2 * best.1 + 16 {
            break;
        }
        t += 1;
    }
    best
}

fn alpha1_lower(beta: usize, p: usize, coset: bool) -> Result<LowerBound> {
    let trivial = p as f64 / beta as f64;
    let mut best = LowerBound {
        value: trivial,
        provenance: LowerProvenance::Trivial,
        t_opt: None,
    };
    let c = capacity(WwlParams::new(beta, p)?, DEFAULT_TOLERANCE)?.capacity_lower;
    if c / 2.0 > best.value {
        best.value = c / 2.0;
        best.provenance = LowerProvenance::SpaceConstruction;
    }
    if coset && c > best.value {
        best.value = c;
        best.provenance = LowerProvenance::Coset;
    }
    Ok(best)
}

fn beta1_lower(alpha: usize, p: usize) -> LowerBound {
    let mut best = LowerBound {
        value: p as f64 / alpha as f64,
        provenance: LowerProvenance::Trivial,
        t_opt: None,
    };
    let (r, t) = best_time_rate(alpha, p);
    if r > best.value {
        best = LowerBound {
            value: r,
            provenance: LowerProvenance::TimeConstruction,
            t_opt: Some(t),
        };
    }
    if p >= 2 {
        let t = alpha.div_ceil(p - 1);
        let r = ((t + 1) as f64).log2() / t as f64;
        if r > best.value {
            best = LowerBound {
                value: r,
                provenance: LowerProvenance::TimeConstruction,
                t_opt: Some(t),
            };
        }
    }
    best
}

pub fn lower_bound(params: ConstraintParams, coset: bool) -> Result<LowerBound> {
    let ConstraintParams { alpha, beta, p } = params;
    if params.is_vacuous() {
        return Ok(LowerBound {
            value: 1.0,
            provenance: LowerProvenance::Trivial,
            t_opt: None,
        });
    }
    if alpha == 1 {
        return alpha1_lower(beta, p, coset);
    }
    if beta == 1 {
        return Ok(beta1_lower(alpha, p));
    }
    let mut best = LowerBound {
        value: p as f64 / (alpha * beta) as f64,
        provenance: LowerProvenance::Trivial,
        t_opt: None,
    };
    // p >= alpha (resp. beta) makes the one-dimensional part vacuous
    let (time, t_opt) = if p >= alpha {
        (1.0, None)
    } else {
        let l = beta1_lower(alpha, p);
        (l.value, l.t_opt)
    };
    let space = if p >= beta {
        1.0
    } else {
        alpha1_lower(beta, p, coset)?.value
    };
    for (v, t_opt) in [(time / beta as f64, t_opt), (space / alpha as f64, None)] {
        if v > best.value {
            best = LowerBound {
                value: v,
                provenance: LowerProvenance::Dilution,
                t_opt,
            };
        }
    }
    Ok(best)
}

pub fn bounds(params: ConstraintParams, coset: bool) -> Result<BoundReport> {
    let lower = lower_bound(params, coset)?;
    let upper = upper_bound(params)?;
    Ok(BoundReport {
        alpha: params.alpha,
        beta: params.beta,
        p: params.p,
        coset,
        lower: lower.value,
        lower_provenance: lower.provenance,
        upper: upper.value,
        upper_provenance: upper.provenance,
        t_opt: lower.t_opt,
    })
}
