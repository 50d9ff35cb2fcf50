//! Finite-dimensional density matrices and bipartite algebra.
//!
//! Composite indices follow the A-major convention `k = a * dB + b` throughout:
//! the Kronecker product, both partial traces and both partial transposes all
//! assume it.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classical_entropy::{ProbDist, EPS_NORM};
use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Hermiticity tolerance (entrywise) and unitarity tolerance.
pub const EPS_HERM: f64 = 1e-9;

/// Eigenvalues above `-EPS_PSD` count as nonnegative.
pub const EPS_PSD: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);

/// One side of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
        })
    }
}

impl FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Subsystem::A),
            "B" | "b" => Ok(Subsystem::B),
            other => Err(Error::Parse(format!("unknown subsystem '{other}', expected A or B"))),
        }
    }
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Real spectrum of a Hermitian matrix, sorted in descending order.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("matrix has non-finite entries".into()));
    }
    let defect = hermiticity_defect(m);
    if defect > EPS_HERM {
        return Err(Error::InvalidState(format!("not Hermitian: max |m_ij - conj(m_ji)| = {defect:e}")));
    }
    let mut values: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// A validated density matrix together with its cleaned spectrum.
///
/// The stored matrix is exactly Hermitian with unit trace. The spectrum is
/// sorted descending, eigenvalues below [`EPS_PSD`] are set to zero and the
/// remainder renormalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn validate(m: CMatrix) -> Result<Self> {
        let raw = eigenvalues(&m)?;
        let trace = m.trace();
        if (trace.re - 1.0).abs() > EPS_NORM || trace.im.abs() > EPS_HERM {
            return Err(Error::InvalidState(format!("trace is {} + {}i, expected 1", trace.re, trace.im)));
        }
        let min = raw.last().copied().unwrap_or(0.0);
        if min < -EPS_PSD {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e} (tolerance {EPS_PSD:e})")));
        }
        let max = raw.first().copied().unwrap_or(0.0);
        if max > 1.0 + EPS_PSD {
            return Err(Error::InvalidState(format!("eigenvalue {max} exceeds 1")));
        }
        let matrix = hermitize(&m).unscale(trace.re);
        Ok(DensityMatrix { matrix, spectrum: clean_spectrum(raw) })
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        let matrix = CMatrix::identity(d, d).unscale(d as f64);
        Ok(DensityMatrix { matrix, spectrum: vec![1.0 / d as f64; d] })
    }

    /// `diag(p)` in the computational basis.
    pub fn diagonal(p: &ProbDist) -> Self {
        let diag = nalgebra::DVector::from_iterator(p.len(), p.probs().iter().map(|&v| C64::new(v, 0.0)));
        let mut spectrum = p.probs().to_vec();
        spectrum.sort_by(|a, b| b.total_cmp(a));
        DensityMatrix { matrix: CMatrix::from_diagonal(&diag), spectrum }
    }

    /// The projector onto `psi / |psi|`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero norm".into()));
        }
        let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
        Self::validate(&v * v.adjoint())
    }

    /// `U diag(p) U^dagger`.
    pub fn from_spectral(p: &ProbDist, u: &CMatrix) -> Result<Self> {
        if u.nrows() != p.len() || u.ncols() != p.len() {
            return Err(Error::Dimension(format!(
                "basis is {}x{}, distribution has {} outcomes",
                u.nrows(),
                u.ncols(),
                p.len()
            )));
        }
        Self::validate(spectral_matrix(p, u))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Clamped, renormalized eigenvalues in descending order.
    #[inline]
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn is_pure(&self) -> bool {
        self.spectrum.first().is_some_and(|&l| l == 1.0)
    }
}

fn clean_spectrum(raw: Vec<f64>) -> Vec<f64> {
    let clamped: Vec<f64> = raw.into_iter().map(|l| if l < EPS_PSD { 0.0 } else { l.min(1.0) }).collect();
    let total: f64 = clamped.iter().sum();
    clamped.into_iter().map(|l| l / total).collect()
}

fn spectral_matrix(p: &ProbDist, u: &CMatrix) -> CMatrix {
    let mut scaled = u.clone();
    for (j, &w) in p.probs().iter().enumerate() {
        scaled.column_mut(j).scale_mut(w);
    }
    scaled * u.adjoint()
}

/// A density matrix on `C^dA (x) C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    da: usize,
    db: usize,
    rho: DensityMatrix,
}

impl BipartiteState {
    pub fn new(da: usize, db: usize, rho: DensityMatrix) -> Result<Self> {
        if da == 0 || db == 0 || rho.dim() != da * db {
            return Err(Error::Dimension(format!(
                "{}x{} density matrix does not factor as {da} x {db}",
                rho.dim(),
                rho.dim()
            )));
        }
        Ok(BipartiteState { da, db, rho })
    }

    pub fn from_matrix(da: usize, db: usize, m: CMatrix) -> Result<Self> {
        if m.nrows() != da * db {
            return Err(Error::Dimension(format!("{}x{} matrix does not factor as {da} x {db}", m.nrows(), m.ncols())));
        }
        Self::new(da, db, DensityMatrix::validate(m)?)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.da, self.db)
    }

    #[inline]
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    /// Reduced state after tracing out `over`.
    pub fn partial_trace(&self, over: Subsystem) -> DensityMatrix {
        let (da, db) = (self.da, self.db);
        let m = self.matrix();
        let reduced = match over {
            Subsystem::B => CMatrix::from_fn(da, da, |a, ap| (0..db).map(|b| m[(a * db + b, ap * db + b)]).sum()),
            Subsystem::A => CMatrix::from_fn(db, db, |b, bp| (0..da).map(|a| m[(a * db + b, a * db + bp)]).sum()),
        };
        // The marginal of a valid state is valid; only rounding can be off.
        DensityMatrix::validate(reduced).expect("marginal of a valid state")
    }

    /// Reduced state of `keep`.
    pub fn marginal(&self, keep: Subsystem) -> DensityMatrix {
        self.partial_trace(keep.other())
    }

    /// Transpose of the indices of subsystem `on` only. The result is
    /// Hermitian with unit trace but need not be positive.
    pub fn partial_transpose(&self, on: Subsystem) -> CMatrix {
        let (da, db) = (self.da, self.db);
        let m = self.matrix();
        let n = da * db;
        CMatrix::from_fn(n, n, |r, c| {
            let (a, b) = (r / db, r % db);
            let (ap, bp) = (c / db, c % db);
            match on {
                Subsystem::B => m[(a * db + bp, ap * db + b)],
                Subsystem::A => m[(ap * db + b, a * db + bp)],
            }
        })
    }
}

pub fn validate(m: CMatrix) -> Result<DensityMatrix> {
    DensityMatrix::validate(m)
}

pub fn partial_trace(s: &BipartiteState, over: Subsystem) -> DensityMatrix {
    s.partial_trace(over)
}

pub fn partial_transpose(s: &BipartiteState, on: Subsystem) -> CMatrix {
    s.partial_transpose(on)
}

/// Kronecker product `a (x) b`. The spectrum is the sorted set of pairwise
/// products, taken directly rather than from a fresh eigensolve.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> BipartiteState {
    let matrix = a.matrix().kronecker(b.matrix());
    let mut spectrum: Vec<f64> = a.spectrum().iter().flat_map(|&x| b.spectrum().iter().map(move |&y| x * y)).collect();
    spectrum.sort_by(|x, y| y.total_cmp(x));
    BipartiteState { da: a.dim(), db: b.dim(), rho: DensityMatrix { matrix, spectrum } }
}

/// `w_lambda`, per-term local distributions and shared local eigenbases.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableEnsemble {
    weights: ProbDist,
    pa: Vec<ProbDist>,
    pb: Vec<ProbDist>,
    ua: CMatrix,
    ub: CMatrix,
}

fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

impl SeparableEnsemble {
    /// Missing bases default to the identity (computational basis).
    pub fn new(
        weights: ProbDist,
        pa: Vec<ProbDist>,
        pb: Vec<ProbDist>,
        ua: Option<CMatrix>,
        ub: Option<CMatrix>,
    ) -> Result<Self> {
        let terms = weights.len();
        if pa.len() != terms || pb.len() != terms {
            return Err(Error::Dimension(format!(
                "{terms} weights but {} A-distributions and {} B-distributions",
                pa.len(),
                pb.len()
            )));
        }
        let da = pa[0].len();
        let db = pb[0].len();
        if pa.iter().any(|p| p.len() != da) || pb.iter().any(|p| p.len() != db) {
            return Err(Error::Dimension("local distributions differ in size".into()));
        }
        let ua = ua.unwrap_or_else(|| CMatrix::identity(da, da));
        let ub = ub.unwrap_or_else(|| CMatrix::identity(db, db));
        for (name, u, d) in [("UA", &ua, da), ("UB", &ub, db)] {
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {d}x{d}", u.nrows(), u.ncols())));
            }
            let defect = unitarity_defect(u);
            if defect > EPS_HERM {
                return Err(Error::InvalidState(format!("{name} is not unitary (defect {defect:e})")));
            }
        }
        Ok(SeparableEnsemble { weights, pa, pb, ua, ub })
    }

    pub fn weights(&self) -> &ProbDist {
        &self.weights
    }

    pub fn pa(&self) -> &[ProbDist] {
        &self.pa
    }

    pub fn pb(&self) -> &[ProbDist] {
        &self.pb
    }

    pub fn ua(&self) -> &CMatrix {
        &self.ua
    }

    pub fn ub(&self) -> &CMatrix {
        &self.ub
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.pa[0].len(), self.pb[0].len())
    }

    pub fn terms(&self) -> usize {
        self.weights.len()
    }
}

/// `sum_l w_l rho_l(A) (x) rho_l(B)` with `rho_l(A) = UA diag(p_l) UA^dagger`.
pub fn assemble_separable(e: &SeparableEnsemble) -> Result<BipartiteState> {
    let (da, db) = e.dims();
    let mut total = CMatrix::from_element(da * db, da * db, ZERO);
    for ((&w, pa), pb) in e.weights.probs().iter().zip(&e.pa).zip(&e.pb) {
        if w == 0.0 {
            continue;
        }
        let local_a = spectral_matrix(pa, &e.ua);
        let local_b = spectral_matrix(pb, &e.ub);
        total += local_a.kronecker(&local_b).scale(w);
    }
    BipartiteState::from_matrix(da, db, total)
}

/// Assembles `sum_l w_l rho_l(A) (x) rho_l(B)` from arbitrary local states.
pub fn convex_mixture(weights: &ProbDist, terms: &[(DensityMatrix, DensityMatrix)]) -> Result<BipartiteState> {
    if terms.len() != weights.len() || terms.is_empty() {
        return Err(Error::Dimension(format!("{} weights for {} product terms", weights.len(), terms.len())));
    }
    let (da, db) = (terms[0].0.dim(), terms[0].1.dim());
    if terms.iter().any(|(a, b)| a.dim() != da || b.dim() != db) {
        return Err(Error::Dimension("product terms differ in local dimension".into()));
    }
    let mut total = CMatrix::from_element(da * db, da * db, ZERO);
    for (&w, (a, b)) in weights.probs().iter().zip(terms) {
        total += a.matrix().kronecker(b.matrix()).scale(w);
    }
    BipartiteState::from_matrix(da, db, total)
}

/// `|Psi-><Psi-|` with `|Psi-> = (|01> - |10>)/sqrt(2)`, basis state 0 = up.
pub fn singlet_projector() -> CMatrix {
    let mut m = CMatrix::from_element(4, 4, ZERO);
    m[(1, 1)] = C64::new(0.5, 0.0);
    m[(2, 2)] = C64::new(0.5, 0.0);
    m[(1, 2)] = C64::new(-0.5, 0.0);
    m[(2, 1)] = C64::new(-0.5, 0.0);
    m
}

/// Werner-Popescu state `(1 - x)/4 I + x |Psi-><Psi-|` for `0 <= x <= 1`.
pub fn werner_popescu(x: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Werner parameter x = {x} outside [0, 1]")));
    }
    let m = CMatrix::identity(4, 4).scale((1.0 - x) / 4.0) + singlet_projector().scale(x);
    BipartiteState::from_matrix(2, 2, m)
}

pub fn singlet() -> BipartiteState {
    werner_popescu(1.0).expect("x = 1 is in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0))
    }

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn validate_examples() {
        let half = real(&[&[0.5, 0.0], &[0.0, 0.5]]);
        assert!(validate(half).is_ok());

        let err = validate(real(&[&[1.2, 0.0], &[0.0, -0.2]])).unwrap_err();
        assert!(err.to_string().contains("negative eigenvalue"), "{err}");

        let plus = validate(real(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        assert!(plus.is_pure());
        assert_eq!(plus.spectrum(), &[1.0, 0.0]);
    }

    #[test]
    fn validate_names_violated_invariant() {
        let mut m = real(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(validate(m.clone()).unwrap_err().to_string().contains("Hermitian"));
        m[(0, 1)] = C64::new(0.0, 0.0);
        m[(0, 0)] = C64::new(0.7, 0.0);
        assert!(validate(m).unwrap_err().to_string().contains("trace"));
        assert!(eigenvalues(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn eigenvalues_sorted_descending() {
        let m = real(&[&[0.1, 0.0, 0.0], &[0.0, 0.6, 0.0], &[0.0, 0.0, 0.3]]);
        let ev = eigenvalues(&m).unwrap();
        assert_abs_diff_eq!(ev[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[2], 0.1, epsilon = 1e-15);

        let ev = eigenvalues(&singlet_projector()).unwrap();
        for (got, want) in ev.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn complex_hermitian_spectrum() {
        // [[1/2, -i/2], [i/2, 1/2]] is the projector onto (|0> + i|1>)/sqrt 2
        let mut m = real(&[&[0.5, 0.0], &[0.0, 0.5]]);
        m[(0, 1)] = C64::new(0.0, -0.5);
        m[(1, 0)] = C64::new(0.0, 0.5);
        let rho = validate(m).unwrap();
        assert_eq!(rho.spectrum(), &[1.0, 0.0]);
    }

    #[test]
    fn tensor_examples() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        let s = tensor(&half, &half);
        assert_abs_diff_eq!(max_abs_diff(s.matrix(), &CMatrix::identity(4, 4).unscale(4.0)), 0.0);

        let up = DensityMatrix::diagonal(&ProbDist::delta(2, 0).unwrap());
        let down = DensityMatrix::diagonal(&ProbDist::delta(2, 1).unwrap());
        let s = tensor(&up, &down);
        // |up down> is composite index 0 * 2 + 1
        assert_eq!(s.matrix()[(1, 1)], C64::new(1.0, 0.0));
        assert_eq!(s.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert!(s.rho().is_pure());
    }

    #[test]
    fn singlet_marginals_are_maximally_mixed() {
        let s = singlet();
        let half = CMatrix::identity(2, 2).unscale(2.0);
        for side in [Subsystem::A, Subsystem::B] {
            assert!(max_abs_diff(s.partial_trace(side).matrix(), &half) < 1e-15);
        }
    }

    #[test]
    fn partial_transpose_on_a_and_b_are_transposes_of_each_other() {
        let s = werner_popescu(0.3).unwrap();
        let on_a = s.partial_transpose(Subsystem::A);
        let on_b = s.partial_transpose(Subsystem::B);
        assert!(max_abs_diff(&on_a, &on_b.transpose()) == 0.0);
    }

    #[test]
    fn werner_domain() {
        assert!(werner_popescu(-0.01).is_err());
        assert!(werner_popescu(1.01).is_err());
        let mixed = werner_popescu(0.0).unwrap();
        assert!(max_abs_diff(mixed.matrix(), &CMatrix::identity(4, 4).unscale(4.0)) < 1e-16);
        assert!(singlet().rho().is_pure());
    }

    #[test]
    fn werner_threshold_spectrum() {
        let s = werner_popescu(1.0 / 3.0).unwrap();
        let want = [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (got, want) in s.rho().spectrum().iter().zip(want) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn ensemble_validation() {
        let w = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let p = vec![ProbDist::delta(2, 0).unwrap(), ProbDist::delta(2, 1).unwrap()];
        assert!(SeparableEnsemble::new(w.clone(), p.clone(), p[..1].to_vec(), None, None).is_err());
        let not_unitary = real(&[&[1.0, 0.0], &[0.0, 0.5]]);
        assert!(SeparableEnsemble::new(w.clone(), p.clone(), p.clone(), Some(not_unitary), None).is_err());

        let e = SeparableEnsemble::new(w, p.clone(), p, None, None).unwrap();
        let s = assemble_separable(&e).unwrap();
        let want = real(&[&[0.5, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.5]]);
        assert!(max_abs_diff(s.matrix(), &want) < 1e-15);
    }

    #[test]
    fn single_term_deterministic_ensemble_is_pure_product() {
        let e = SeparableEnsemble::new(
            ProbDist::delta(1, 0).unwrap(),
            vec![ProbDist::delta(2, 1).unwrap()],
            vec![ProbDist::delta(3, 2).unwrap()],
            None,
            None,
        )
        .unwrap();
        let s = assemble_separable(&e).unwrap();
        assert_eq!(s.dims(), (2, 3));
        assert!(s.rho().is_pure());
        assert_eq!(s.matrix()[(5, 5)], C64::new(1.0, 0.0));
    }

    #[test]
    fn subsystem_parsing() {
        assert_eq!("A".parse::<Subsystem>().unwrap(), Subsystem::A);
        assert_eq!("b".parse::<Subsystem>().unwrap(), Subsystem::B);
        assert!("C".parse::<Subsystem>().is_err());
        assert_eq!(Subsystem::A.other(), Subsystem::B);
    }
}
