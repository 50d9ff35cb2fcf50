//! Closed-form conditional entropy of the two-qubit Werner-Popescu family,
//! the sign-change threshold `x*(q)` and the comparison of separability
//! criteria.
//!
//! For `rho = (1-x)/4 I + x |Psi-><Psi-|` both marginals are `I/2` and
//!
//! ```text
//! S_q[B|A] = S_q[A|B] = [ 3/2 a^q + 1/2 b^q - 1 ] / (1 - q),
//!     a = (1 - x)/2,  b = (1 + 3x)/2.
//! ```
//!
//! Since `3/2 a + 1/2 b = 1`, the bracket vanishes at `q = 1` and the
//! `q -> 1` limit is `-(3/2 a ln a + 1/2 b ln b)`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use crate::classical_entropy::EntropicIndex;
use crate::error::{Error, Result};
use crate::quantum_entropy::ppt_test;
use crate::quantum_state::werner_popescu;
use crate::roots::bisect;

/// Werner parameter above which the Bell inequalities are violated. Quoted,
/// not derived here.
pub const BELL_BOUND: f64 = FRAC_1_SQRT_2;

/// Analytic `q -> infinity` floor of the entropy threshold.
pub const Q_INFINITY_FLOOR: f64 = 1.0 / 3.0;

/// Largest index of the default large-`q` scan.
pub const DEFAULT_MAX_Q: f64 = 1e6;

const NEAR_ONE: f64 = 0.5;
const X_TOL: f64 = 1e-15;

/// Tolerance for treating the extrapolated entropy limit and the PPT flip as
/// the same point.
pub const CRITERION_MATCH_TOL: f64 = 1e-9;

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("Werner parameter x = {x} outside [0, 1]")))
    }
}

fn weights(x: f64) -> (f64, f64) {
    ((1.0 - x) / 2.0, (1.0 + 3.0 * x) / 2.0)
}

/// `v^q - v` as `v expm1((q-1) ln v)`, zero at `v = 0`.
fn pow_minus_self(v: f64, qm1: f64) -> f64 {
    if v > 0.0 {
        v * (qm1 * v.ln()).exp_m1()
    } else {
        0.0
    }
}

fn shannon_limit(x: f64) -> f64 {
    let (a, b) = weights(x);
    let xlnx = |v: f64| if v > 0.0 { v * v.ln() } else { 0.0 };
    -(1.5 * xlnx(a) + 0.5 * xlnx(b))
}

/// `ln(3/2 a^q + 1/2 b^q)`. Near `q = 1` via `ln_1p` of the bracket minus
/// one, elsewhere as a log-sum-exp so that neither term can under- or
/// overflow on its own.
fn log_bracket(x: f64, q: f64) -> f64 {
    let (a, b) = weights(x);
    let qm1 = q - 1.0;
    if qm1.abs() < NEAR_ONE {
        return (1.5 * pow_minus_self(a, qm1) + 0.5 * pow_minus_self(b, qm1)).ln_1p();
    }
    let lb = 0.5f64.ln() + q * b.ln();
    if a == 0.0 {
        return lb;
    }
    let la = 1.5f64.ln() + q * a.ln();
    let hi = la.max(lb);
    hi + ((la - hi).exp() + (lb - hi).exp()).ln()
}

/// `ln(1 + (1-q) S_q) / (1 - q)`: a strictly increasing function of the
/// conditional entropy with the same sign, finite for every `q`.
fn sign_profile(x: f64, q: EntropicIndex) -> f64 {
    if q.is_shannon_limit() {
        shannon_limit(x)
    } else {
        log_bracket(x, q.value()) / (1.0 - q.value())
    }
}

/// Closed-form `S_q[B|A]` of the Werner-Popescu state.
pub fn werner_cond_entropy(x: f64, q: EntropicIndex) -> Result<f64> {
    check_x(x)?;
    let qv = q.value();
    let qm1 = qv - 1.0;
    Ok(if q.is_shannon_limit() {
        shannon_limit(x)
    } else if qm1.abs() < NEAR_ONE {
        let (a, b) = weights(x);
        (1.5 * pow_minus_self(a, qm1) + 0.5 * pow_minus_self(b, qm1)) / (1.0 - qv)
    } else {
        log_bracket(x, qv).exp_m1() / (1.0 - qv)
    })
}

/// Sign change of the conditional entropy along the Werner family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub q: EntropicIndex,
    pub x_star: f64,
    /// `|ln(1 + (1-q) S_q) / (1-q)|` at `x_star` (the entropy itself at `q = 1`).
    pub solver_residual: f64,
}

/// Bisection for the unique root in `x` of the closed form at fixed `q`.
pub fn threshold(q: EntropicIndex) -> ThresholdPoint {
    let profile = |x: f64| sign_profile(x, q);
    // profile(0) = ln 2 (q = 1) or ln(2^(1-q))/(1-q) = ln 2 > 0, profile(1) < 0
    let x_star = bisect(profile, 0.0, 1.0, X_TOL).expect("Werner profile changes sign on [0, 1]");
    ThresholdPoint { q, x_star, solver_residual: profile(x_star).abs() }
}

pub fn threshold_scan(q_grid: &[EntropicIndex]) -> Vec<ThresholdPoint> {
    q_grid.iter().map(|&q| threshold(q)).collect()
}

/// `n` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (l0, l1) = (lo.ln(), hi.ln());
            (0..n).map(|i| if i == n - 1 { hi } else { (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp() }).collect()
        }
    }
}

/// Forty log-spaced indices from 0.2 to `DEFAULT_MAX_Q`, plus `q = 1`.
pub fn default_scan_grid() -> Vec<EntropicIndex> {
    let mut grid = log_spaced(0.2, DEFAULT_MAX_Q, 40);
    grid.push(1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.into_iter().map(|q| EntropicIndex::new(q).expect("positive grid")).collect()
}

/// Extrapolates `x*(q)` to `q -> infinity` from the two largest indices of
/// the grid, cancelling the leading `1/q` correction.
pub fn extrapolate_q_infinity(q_grid: &[EntropicIndex]) -> Result<f64> {
    let mut qs: Vec<f64> = q_grid.iter().map(|q| q.value()).collect();
    qs.sort_by(f64::total_cmp);
    qs.dedup();
    let [.., q1, q2] = qs[..] else {
        return Err(Error::Domain("extrapolation needs at least two distinct indices".into()));
    };
    let x1 = threshold(EntropicIndex::new(q1)?).x_star;
    let x2 = threshold(EntropicIndex::new(q2)?).x_star;
    Ok((q2 * x2 - q1 * x1) / (q2 - q1))
}

/// Werner parameter at which the partial transpose acquires a negative
/// eigenvalue, located by bisection on the eigensolver output.
pub fn ppt_threshold() -> f64 {
    let min_eig = |x: f64| ppt_test(&werner_popescu(x).expect("x in [0, 1]")).min_eig;
    bisect(min_eig, 0.0, 1.0, X_TOL).expect("PPT minimum eigenvalue changes sign on [0, 1]")
}

/// The separability criteria for the Werner family, weakest last.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionTable {
    pub bell_bound: f64,
    pub von_neumann_zero: f64,
    pub q_infinity_limit: f64,
    pub ppt_threshold: f64,
}

impl CriterionTable {
    /// `q_infinity_limit = ppt_threshold < bell_bound < von_neumann_zero`.
    pub fn is_ordered(&self) -> bool {
        (self.q_infinity_limit - self.ppt_threshold).abs() <= CRITERION_MATCH_TOL
            && self.ppt_threshold < self.bell_bound
            && self.q_infinity_limit < self.bell_bound
            && self.bell_bound < self.von_neumann_zero
    }

    /// `(label, value)` rows in display order.
    pub fn rows(&self) -> [(&'static str, f64); 4] {
        [
            ("q -> infinity entropy limit", self.q_infinity_limit),
            ("partial transpose (PPT)", self.ppt_threshold),
            ("Bell inequalities", self.bell_bound),
            ("von Neumann (q = 1)", self.von_neumann_zero),
        ]
    }
}

pub fn criterion_table() -> CriterionTable {
    let large_q: Vec<EntropicIndex> =
        log_spaced(1e3, DEFAULT_MAX_Q, 16).into_iter().map(|q| EntropicIndex::new(q).expect("positive grid")).collect();
    CriterionTable {
        bell_bound: BELL_BOUND,
        von_neumann_zero: threshold(EntropicIndex::SHANNON).x_star,
        q_infinity_limit: extrapolate_q_infinity(&large_q).expect("grid has two points"),
        ppt_threshold: ppt_threshold(),
    }
}
