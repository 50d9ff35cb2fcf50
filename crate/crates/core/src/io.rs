//! JSON formats for states, ensembles and distributions.
//!
//! State: `{"dA": 2, "dB": 2, "re": [[...]], "im": [[...]]}`, row-major in
//! the A-major composite basis. `im` may be omitted for real matrices.
//!
//! Ensemble: `{"weights": [...], "pA": [[...]], "pB": [[...]], "UA": {"re", "im"},
//! "UB": {...}}` with both bases optional (identity by default).

use serde::{Deserialize, Serialize};

use crate::classical_entropy::ProbDist;
use crate::error::{Error, Result};
use crate::quantum_state::{BipartiteState, CMatrix, SeparableEnsemble, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let grid = |part: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| part(&m[(i, j)])).collect()).collect()
        };
        let im = grid(|z| z.im);
        let has_im = im.iter().flatten().any(|&v| v != 0.0);
        MatrixJson { re: grid(|z| z.re), im: has_im.then_some(im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if n == 0 || self.re.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("'re' must be a non-empty rectangular array".into()));
        }
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().any(|r| r.len() != cols) {
                return Err(Error::Dimension("'im' does not match the shape of 're'".into()));
            }
        }
        Ok(CMatrix::from_fn(n, cols, |i, j| C64::new(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(rename = "dA")]
    pub da: usize,
    #[serde(rename = "dB")]
    pub db: usize,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub weights: Vec<f64>,
    #[serde(rename = "pA")]
    pub pa: Vec<Vec<f64>>,
    #[serde(rename = "pB")]
    pub pb: Vec<Vec<f64>>,
    #[serde(rename = "UA", default, skip_serializing_if = "Option::is_none")]
    pub ua: Option<MatrixJson>,
    #[serde(rename = "UB", default, skip_serializing_if = "Option::is_none")]
    pub ub: Option<MatrixJson>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn state_from_json(text: &str) -> Result<BipartiteState> {
    let raw: StateJson = parse(text)?;
    BipartiteState::from_matrix(raw.da, raw.db, raw.matrix.to_matrix()?)
}

pub fn state_to_json(s: &BipartiteState) -> String {
    let (da, db) = s.dims();
    let raw = StateJson { da, db, matrix: MatrixJson::from_matrix(s.matrix()) };
    serde_json::to_string(&raw).expect("state serializes")
}

pub fn ensemble_from_json(text: &str) -> Result<SeparableEnsemble> {
    let raw: EnsembleJson = parse(text)?;
    let dists = |rows: Vec<Vec<f64>>| rows.into_iter().map(ProbDist::new).collect::<Result<Vec<_>>>();
    SeparableEnsemble::new(
        ProbDist::new(raw.weights)?,
        dists(raw.pa)?,
        dists(raw.pb)?,
        raw.ua.map(|u| u.to_matrix()).transpose()?,
        raw.ub.map(|u| u.to_matrix()).transpose()?,
    )
}

pub fn ensemble_to_json(e: &SeparableEnsemble) -> String {
    let rows = |ps: &[ProbDist]| ps.iter().map(|p| p.probs().to_vec()).collect();
    let raw = EnsembleJson {
        weights: e.weights().probs().to_vec(),
        pa: rows(e.pa()),
        pb: rows(e.pb()),
        ua: Some(MatrixJson::from_matrix(e.ua())),
        ub: Some(MatrixJson::from_matrix(e.ub())),
    };
    serde_json::to_string(&raw).expect("ensemble serializes")
}
