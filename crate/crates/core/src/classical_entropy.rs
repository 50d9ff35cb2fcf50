//! Classical Shannon and Tsallis entropies on finite distributions, the
//! q-expectation conditional entropy and its pseudoadditive composition law.
//!
//! Conventions: `0^q = 0` for every `q > 0` and `0 ln 0 = 0`. Zero entries are
//! skipped outright, so padding a distribution with zeros never changes a sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance. Inputs within it are renormalized, others rejected.
pub const EPS_NORM: f64 = 1e-9;

/// Half-width of the window around `q = 1` that dispatches to the Shannon formula.
pub const EPS_Q: f64 = 1e-8;

/// Inside `|q - 1| < EXPM1_WINDOW` sums are evaluated in `expm1` form.
const EXPM1_WINDOW: f64 = 0.5;

/// Default scan grid for the entropic index.
pub const DEFAULT_Q_GRID: [f64; 8] = [0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0];

/// The entropic index `q`, restricted to finite positive values.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct EntropicIndex(f64);

impl EntropicIndex {
    /// The Shannon / von Neumann point `q = 1`.
    pub const SHANNON: EntropicIndex = EntropicIndex(1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 {
            Ok(EntropicIndex(q))
        } else {
            Err(Error::Domain(format!("entropic index must be positive and finite, got {q}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True when evaluation dispatches to the `q -> 1` limit.
    #[inline]
    pub fn is_shannon_limit(self) -> bool {
        (self.0 - 1.0).abs() < EPS_Q
    }
}

impl TryFrom<f64> for EntropicIndex {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        EntropicIndex::new(q)
    }
}

impl From<EntropicIndex> for f64 {
    fn from(q: EntropicIndex) -> f64 {
        q.0
    }
}

impl std::fmt::Display for EntropicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// [`DEFAULT_Q_GRID`] as validated indices.
pub fn default_q_grid() -> Vec<EntropicIndex> {
    DEFAULT_Q_GRID.iter().map(|&q| EntropicIndex(q)).collect()
}

fn validate_entries(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || !(0.0..=1.0 + EPS_NORM).contains(&v) {
            return Err(Error::InvalidDistribution(format!("entry {i} = {v} is outside [0, 1]")));
        }
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > EPS_NORM {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}, not 1 (tolerance {EPS_NORM:e})")));
    }
    Ok(total)
}

fn renormalize(values: &mut [f64], total: f64) {
    if total != 1.0 {
        values.iter_mut().for_each(|v| *v /= total);
    }
}

/// A normalized probability vector over `W >= 1` outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        let total = validate_entries(&probs)?;
        renormalize(&mut probs, total);
        Ok(ProbDist { probs })
    }

    pub fn uniform(w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        Ok(ProbDist { probs: vec![1.0 / w as f64; w] })
    }

    /// Point mass on outcome `i` of `w`.
    pub fn delta(w: usize, i: usize) -> Result<Self> {
        if i >= w {
            return Err(Error::Dimension(format!("outcome {i} out of range for W = {w}")));
        }
        let mut probs = vec![0.0; w];
        probs[i] = 1.0;
        Ok(ProbDist { probs })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The same distribution with one zero-probability outcome appended.
    pub fn with_null_outcome(&self) -> ProbDist {
        let mut probs = self.probs.clone();
        probs.push(0.0);
        ProbDist { probs }
    }

    /// Convex combination `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &ProbDist, t: f64) -> Result<ProbDist> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "cannot mix distributions of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("mixing weight {t} outside [0, 1]")));
        }
        ProbDist::new(self.probs.iter().zip(&other.probs).map(|(a, b)| t * a + (1.0 - t) * b).collect())
    }
}

impl TryFrom<Vec<f64>> for ProbDist {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        ProbDist::new(probs)
    }
}

impl From<ProbDist> for Vec<f64> {
    fn from(p: ProbDist) -> Vec<f64> {
        p.probs
    }
}

/// Joint distribution `p_ij(A, B)` stored row-major: rows index A, columns B.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct JointDist {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JointDist {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidDistribution("empty joint distribution".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(Error::Dimension(format!("row {bad} has length {}, expected {n_cols}", rows[bad].len())));
        }
        Self::from_flat(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    /// Builds from row-major data of length `rows * cols`.
    pub fn from_flat(rows: usize, cols: usize, mut data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries do not fill a {rows}x{cols} joint", data.len())));
        }
        let total = validate_entries(&data)?;
        renormalize(&mut data, total);
        Ok(JointDist { rows, cols, data })
    }

    /// The factorized joint `p_i r_j`.
    pub fn product(p: &ProbDist, r: &ProbDist) -> JointDist {
        let data = p.probs().iter().flat_map(|&pi| r.probs().iter().map(move |&rj| pi * rj)).collect();
        JointDist { rows: p.len(), cols: r.len(), data }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row-major joint probabilities.
    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// The joint viewed as a single distribution over `W * W'` outcomes.
    pub fn flattened(&self) -> ProbDist {
        ProbDist { probs: self.data.clone() }
    }

    fn row_masses(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    /// `p_i(A) = sum_j p_ij(A, B)`.
    pub fn marginal_a(&self) -> ProbDist {
        ProbDist { probs: self.row_masses() }
    }

    /// `p_j(B) = sum_i p_ij(A, B)`.
    pub fn marginal_b(&self) -> ProbDist {
        let probs = (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect();
        ProbDist { probs }
    }

    /// `p_ij(B | A) = p_ij(A, B) / p_i(A)` for row `i`.
    pub fn conditional_dist(&self, i: usize) -> Result<ProbDist> {
        if i >= self.rows {
            return Err(Error::Dimension(format!("row {i} out of range ({} rows)", self.rows)));
        }
        let row = self.row(i);
        let mass: f64 = row.iter().sum();
        if mass <= 0.0 {
            return Err(Error::NullConditioning { row: i });
        }
        Ok(ProbDist { probs: row.iter().map(|v| v / mass).collect() })
    }

    /// Rows and columns swapped, so that conditioning runs on B.
    pub fn transposed(&self) -> JointDist {
        let data =
            (0..self.cols).flat_map(|j| (0..self.rows).map(move |i| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        JointDist { rows: self.cols, cols: self.rows, data }
    }
}

impl TryFrom<Vec<Vec<f64>>> for JointDist {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        JointDist::new(rows)
    }
}

impl From<JointDist> for Vec<Vec<f64>> {
    fn from(j: JointDist) -> Vec<Vec<f64>> {
        j.data.chunks(j.cols).map(<[f64]>::to_vec).collect()
    }
}

// Slice-level kernels shared with the quantum side, which feeds spectra in.

pub(crate) fn shannon_of(probs: &[f64]) -> f64 {
    -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>()
}

pub(crate) fn power_sum(probs: &[f64], q: f64) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| (q * p.ln()).exp()).sum()
}

pub(crate) fn tsallis_of(probs: &[f64], q: f64) -> f64 {
    let qm1 = q - 1.0;
    if qm1.abs() < EPS_Q {
        shannon_of(probs)
    } else if qm1.abs() < EXPM1_WINDOW {
        // sum p^q - 1 = sum p (p^(q-1) - 1) for normalized p
        -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * (qm1 * p.ln()).exp_m1()).sum::<f64>() / qm1
    } else {
        (power_sum(probs, q) - 1.0) / (1.0 - q)
    }
}

/// Weights `p_i^q / sum_j p_j^q`, computed relative to the largest entry so
/// that large `q` does not underflow every weight at once.
pub(crate) fn escort_weights(probs: &[f64], q: f64) -> Vec<f64> {
    let Some(ln_max) = probs.iter().filter(|&&p| p > 0.0).map(|p| p.ln()).reduce(f64::max) else {
        return vec![0.0; probs.len()];
    };
    let raw: Vec<f64> = probs.iter().map(|&p| if p > 0.0 { (q * (p.ln() - ln_max)).exp() } else { 0.0 }).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// `(S_q[joint] - S_q[marginal]) / (1 + (1 - q) S_q[marginal])` for two
/// normalized spectra.
///
/// The constant terms of the two entropies cancel analytically, so the
/// numerator is formed as a difference of power sums (or of `expm1` sums near
/// `q = 1`) and both sums are scaled by the largest entry.
pub(crate) fn conditional_from_spectra(joint: &[f64], marginal: &[f64], q: f64) -> f64 {
    let qm1 = q - 1.0;
    if qm1.abs() < EPS_Q {
        return shannon_of(joint) - shannon_of(marginal);
    }
    if qm1.abs() < EXPM1_WINDOW {
        return (tsallis_of(joint, q) - tsallis_of(marginal, q)) / power_sum(marginal, q);
    }
    let ln_max = joint.iter().chain(marginal).filter(|&&p| p > 0.0).map(|p| p.ln()).fold(f64::NEG_INFINITY, f64::max);
    let scaled = |v: &[f64]| -> f64 { v.iter().filter(|&&p| p > 0.0).map(|&p| (q * (p.ln() - ln_max)).exp()).sum() };
    let joint_sum = scaled(joint);
    let marginal_sum = scaled(marginal);
    (joint_sum - marginal_sum) / ((1.0 - q) * marginal_sum)
}

/// `S_q` of the uniform distribution on `w` outcomes, `(W^(1-q) - 1)/(1-q)`.
pub fn uniform_tsallis(w: usize, q: EntropicIndex) -> f64 {
    let ln_w = (w as f64).ln();
    let omq = 1.0 - q.value();
    if q.is_shannon_limit() {
        ln_w
    } else {
        (omq * ln_w).exp_m1() / omq
    }
}

/// Boltzmann-Shannon entropy `-sum p ln p` in nats.
pub fn shannon_entropy(p: &ProbDist) -> f64 {
    shannon_of(p.probs())
}

/// Tsallis entropy `(sum p^q - 1)/(1 - q)`; Shannon inside the `q -> 1` window.
pub fn tsallis_entropy(p: &ProbDist, q: EntropicIndex) -> f64 {
    tsallis_of(p.probs(), q.value())
}

/// `p_i(A)` of a joint.
pub fn marginal_a(j: &JointDist) -> ProbDist {
    j.marginal_a()
}

/// Conditional distribution of B given row `i` of A.
pub fn conditional_dist(j: &JointDist, i: usize) -> Result<ProbDist> {
    j.conditional_dist(i)
}

/// Nonadditive conditional entropy `S_q[B|A]` as the q-expectation of the
/// row-conditional entropies. Zero-mass rows are skipped.
pub fn conditional_tsallis(j: &JointDist, q: EntropicIndex) -> f64 {
    let masses = j.row_masses();
    let weights = escort_weights(&masses, q.value());
    masses
        .iter()
        .zip(&weights)
        .enumerate()
        .filter(|(_, (&m, _))| m > 0.0)
        .map(|(i, (&m, &w))| {
            let conditional: Vec<f64> = j.row(i).iter().map(|v| v / m).collect();
            w * tsallis_of(&conditional, q.value())
        })
        .sum()
}

/// The same conditional entropy through `(S_q[A,B] - S_q[A]) / (1 + (1-q) S_q[A])`.
pub fn conditional_via_ratio(j: &JointDist, q: EntropicIndex) -> f64 {
    conditional_from_spectra(j.as_slice(), &j.row_masses(), q.value())
}

/// `sA + sB|A + (1 - q) sA sB|A`.
pub fn compose_pseudoadditive(s_a: f64, s_b_given_a: f64, q: EntropicIndex) -> f64 {
    s_a + s_b_given_a + (1.0 - q.value()) * s_a * s_b_given_a
}
