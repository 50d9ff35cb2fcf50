//! Randomized consistency checks of the generalized Shannon-Khinchin axioms
//! for the Tsallis entropy and of the composition law behind them.
//!
//! Every report states the tolerance it passed at. These are evidence
//! checks over sampled inputs, not proofs.

use std::fmt;

use serde::Serialize;

use crate::classical_entropy::{
    compose_pseudoadditive, conditional_tsallis, conditional_via_ratio, default_q_grid, tsallis_entropy,
    uniform_tsallis, EntropicIndex, JointDist, ProbDist,
};
use crate::quantum_entropy::{conditional_quantum, quantum_tsallis};
use crate::quantum_state::{werner_popescu, Subsystem};
use crate::random::{random_joint, random_prob_dist, sample_rng};

pub const MAX_AT_UNIFORM_TOL: f64 = 1e-12;
pub const COMPOSITION_TOL: f64 = 1e-12;
pub const PSEUDOADDITIVITY_TOL: f64 = 1e-12;
pub const CORRESPONDENCE_TOL: f64 = 1e-12;
pub const QUANTUM_COMPOSITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AxiomId {
    /// Maximum at the equiprobable distribution.
    #[serde(rename = "I*")]
    MaxAtUniform,
    /// Pseudoadditive composition with the q-conditional entropy.
    #[serde(rename = "II*")]
    Composition,
    /// Expansibility under null outcomes.
    #[serde(rename = "III*")]
    Expansibility,
    #[serde(rename = "pseudoadditivity")]
    Pseudoadditivity,
    /// q-expectation form and ratio form of the conditional entropy agree.
    #[serde(rename = "correspondence")]
    Correspondence,
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomId::MaxAtUniform => "I*",
            AxiomId::Composition => "II*",
            AxiomId::Expansibility => "III*",
            AxiomId::Pseudoadditivity => "pseudoadditivity",
            AxiomId::Correspondence => "correspondence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom_id: AxiomId,
    /// What the check ran on, e.g. `W=5` or `joint 3x4`.
    pub context: String,
    pub q: f64,
    pub trials: usize,
    pub tolerance: f64,
    pub max_violation: f64,
    pub passed: bool,
}

impl AxiomReport {
    fn single(axiom_id: AxiomId, context: impl Into<String>, q: EntropicIndex, tolerance: f64, violation: f64) -> Self {
        AxiomReport {
            axiom_id,
            context: context.into(),
            q: q.value(),
            trials: 1,
            tolerance,
            max_violation: violation,
            passed: violation <= tolerance,
        }
    }

    /// Folds repeated single-trial reports of one check into one report.
    fn merge(mut reports: impl Iterator<Item = AxiomReport>, context: impl Into<String>) -> Option<AxiomReport> {
        let mut acc = reports.next()?;
        for r in reports {
            acc.trials += r.trials;
            acc.passed &= r.passed;
            if r.max_violation > acc.max_violation || r.max_violation.is_nan() {
                acc.max_violation = r.max_violation;
            }
        }
        acc.context = context.into();
        Some(acc)
    }
}

/// Largest exceedance `S_q(p) - S_q(uniform)` over the given distributions.
pub fn check_max_at_uniform_on(samples: &[ProbDist], q: EntropicIndex) -> AxiomReport {
    let w = samples.first().map_or(0, ProbDist::len);
    let ceiling = uniform_tsallis(w, q);
    let worst = samples.iter().map(|p| tsallis_entropy(p, q) - ceiling).fold(f64::NEG_INFINITY, f64::max);
    AxiomReport {
        axiom_id: AxiomId::MaxAtUniform,
        context: format!("W={w}"),
        q: q.value(),
        trials: samples.len(),
        tolerance: MAX_AT_UNIFORM_TOL,
        max_violation: worst,
        passed: worst <= MAX_AT_UNIFORM_TOL && samples.iter().all(|p| p.len() == w),
    }
}

/// Axiom I* on `trials` Dirichlet samples of size `w`.
pub fn check_max_at_uniform(w: usize, q: EntropicIndex, trials: usize, seed: u64) -> AxiomReport {
    let samples: Vec<ProbDist> = (0..trials).map(|i| random_prob_dist(&mut sample_rng(seed, i as u64), w)).collect();
    check_max_at_uniform_on(&samples, q)
}

/// Axiom II*: `S_q[A,B]` from the flattened joint against
/// `S_q[A] + S_q[B|A] + (1-q) S_q[A] S_q[B|A]`.
pub fn check_composition(joint: &JointDist, q: EntropicIndex) -> AxiomReport {
    let direct = tsallis_entropy(&joint.flattened(), q);
    let composed = compose_pseudoadditive(tsallis_entropy(&joint.marginal_a(), q), conditional_tsallis(joint, q), q);
    AxiomReport::single(
        AxiomId::Composition,
        format!("joint {}x{}", joint.rows(), joint.cols()),
        q,
        COMPOSITION_TOL,
        (direct - composed).abs(),
    )
}

/// Axiom III*: appending a null outcome must not change a single bit.
pub fn check_expansibility(p: &ProbDist, q: EntropicIndex) -> AxiomReport {
    let before = tsallis_entropy(p, q);
    let after = tsallis_entropy(&p.with_null_outcome(), q);
    let mut report =
        AxiomReport::single(AxiomId::Expansibility, format!("W={}", p.len()), q, 0.0, (before - after).abs());
    report.passed = before.to_bits() == after.to_bits();
    report
}

/// Pseudoadditivity of the factorized joint `pA (x) pB`.
pub fn check_pseudoadditivity_product(pa: &ProbDist, pb: &ProbDist, q: EntropicIndex) -> AxiomReport {
    let joint = JointDist::product(pa, pb);
    let direct = tsallis_entropy(&joint.flattened(), q);
    let composed = compose_pseudoadditive(tsallis_entropy(pa, q), tsallis_entropy(pb, q), q);
    AxiomReport::single(
        AxiomId::Pseudoadditivity,
        format!("{}x{}", pa.len(), pb.len()),
        q,
        PSEUDOADDITIVITY_TOL,
        (direct - composed).abs(),
    )
}

/// The q-expectation definition of `S_q[B|A]` against the ratio form.
pub fn check_correspondence(joint: &JointDist, q: EntropicIndex) -> AxiomReport {
    let diff = (conditional_tsallis(joint, q) - conditional_via_ratio(joint, q)).abs();
    AxiomReport::single(
        AxiomId::Correspondence,
        format!("joint {}x{}", joint.rows(), joint.cols()),
        q,
        CORRESPONDENCE_TOL,
        diff,
    )
}

/// Quantum form of axiom II* on the Werner state with parameter `x`.
pub fn check_quantum_composition(x: f64, q: EntropicIndex) -> crate::error::Result<AxiomReport> {
    let s = werner_popescu(x)?;
    let report = conditional_quantum(&s, q, Subsystem::A);
    let s_a = quantum_tsallis(&s.marginal(Subsystem::A), q);
    let composed = compose_pseudoadditive(s_a, report.value, q);
    let direct = quantum_tsallis(s.rho(), q);
    // near the singlet at large q the conditional term dwarfs the sum
    let cross = (1.0 - q.value()) * s_a * report.value;
    let scale = [1.0, direct.abs(), report.value.abs(), cross.abs()].into_iter().fold(0.0, f64::max);
    Ok(AxiomReport::single(
        AxiomId::Composition,
        format!("Werner x={x}"),
        q,
        QUANTUM_COMPOSITION_TOL,
        (direct - composed).abs() / scale,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomSuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub q_grid: Vec<EntropicIndex>,
    /// Distribution sizes for the maximality check.
    pub sizes: Vec<usize>,
    /// Shape of the random joints.
    pub joint_shape: (usize, usize),
}

impl Default for AxiomSuiteConfig {
    fn default() -> Self {
        AxiomSuiteConfig { trials: 1000, seed: 0, q_grid: default_q_grid(), sizes: vec![2, 3, 5], joint_shape: (3, 4) }
    }
}

/// Runs every check for every index in the grid. Trial `i` of each check
/// draws from the stream `seed + i`.
pub fn run_suite(config: &AxiomSuiteConfig) -> Vec<AxiomReport> {
    let (rows, cols) = config.joint_shape;
    let n = config.trials;
    let stream = |i: usize| sample_rng(config.seed, i as u64);
    let joints: Vec<JointDist> = (0..n).map(|i| random_joint(&mut stream(i), rows, cols)).collect();
    let pairs: Vec<(ProbDist, ProbDist)> = (0..n)
        .map(|i| {
            let mut rng = stream(i);
            (random_prob_dist(&mut rng, rows), random_prob_dist(&mut rng, cols))
        })
        .collect();
    let werner_grid: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let shape = format!("joint {rows}x{cols}");

    let mut reports = Vec::new();
    for &q in &config.q_grid {
        for &w in &config.sizes {
            reports.push(check_max_at_uniform(w, q, n, config.seed));
        }
        reports.extend(AxiomReport::merge(joints.iter().map(|j| check_composition(j, q)), shape.clone()));
        reports.extend(AxiomReport::merge(
            werner_grid.iter().map(|&x| check_quantum_composition(x, q).expect("grid inside [0, 1]")),
            "Werner x in [0, 1]",
        ));
        reports.extend(AxiomReport::merge(pairs.iter().map(|(a, _)| check_expansibility(a, q)), format!("W={rows}")));
        reports.extend(AxiomReport::merge(
            pairs.iter().map(|(a, b)| check_pseudoadditivity_product(a, b, q)),
            format!("{rows}x{cols}"),
        ));
        reports.extend(AxiomReport::merge(joints.iter().map(|j| check_correspondence(j, q)), shape.clone()));
    }
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q(v: f64) -> EntropicIndex {
        EntropicIndex::new(v).unwrap()
    }

    #[test]
    fn uniform_attains_the_maximum() {
        let r = check_max_at_uniform_on(&[ProbDist::uniform(2).unwrap()], q(2.0));
        assert!(r.passed);
        assert!(r.max_violation.abs() <= 1e-12);

        let r = check_max_at_uniform_on(&[ProbDist::delta(2, 0).unwrap()], q(2.0));
        assert!(r.passed);
        assert_abs_diff_eq!(r.max_violation, -0.5, epsilon = 1e-15);

        let r = check_max_at_uniform(5, q(0.5), 1000, 3);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.trials, 1000);
    }

    #[test]
    fn uniform_joint_composition_at_q2() {
        let j = JointDist::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let r = check_composition(&j, q(2.0));
        assert!(r.passed);
        assert_abs_diff_eq!(tsallis_entropy(&j.flattened(), q(2.0)), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn composition_shannon_limit_is_chain_rule() {
        let j = JointDist::new(vec![vec![0.1, 0.4], vec![0.3, 0.2]]).unwrap();
        assert!(check_composition(&j, EntropicIndex::SHANNON).passed);
    }

    #[test]
    fn expansibility_is_exact() {
        for p in [ProbDist::uniform(2).unwrap(), ProbDist::delta(3, 1).unwrap()] {
            for &qv in &[0.3, 1.0, 3.7, 80.0] {
                let r = check_expansibility(&p, q(qv));
                assert!(r.passed);
                assert_eq!(r.max_violation, 0.0);
            }
        }
    }

    #[test]
    fn pseudoadditivity_examples() {
        let u = ProbDist::uniform(2).unwrap();
        assert!(check_pseudoadditivity_product(&u, &u, q(2.0)).passed);
        assert!(check_pseudoadditivity_product(&u, &u, EntropicIndex::SHANNON).passed);

        let delta = ProbDist::delta(3, 0).unwrap();
        let r = ProbDist::new(vec![0.2, 0.8]).unwrap();
        let joint = JointDist::product(&delta, &r);
        assert_abs_diff_eq!(tsallis_entropy(&joint.flattened(), q(4.0)), tsallis_entropy(&r, q(4.0)), epsilon = 1e-15);
    }

    #[test]
    fn quantum_composition_on_werner() {
        for &qv in &[0.2, 1.0, 2.0, 200.0] {
            assert!(check_quantum_composition(0.75, q(qv)).unwrap().passed);
        }
        assert!(check_quantum_composition(1.2, q(2.0)).is_err());
    }

    #[test]
    fn reports_serialize_with_axiom_labels() {
        let r = check_expansibility(&ProbDist::uniform(2).unwrap(), q(2.0));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"axiom_id\":\"III*\""), "{json}");
    }

    #[test]
    fn small_suite_passes() {
        let config = AxiomSuiteConfig { trials: 50, seed: 11, ..Default::default() };
        let reports = run_suite(&config);
        assert_eq!(reports.len(), 8 * (3 + 5));
        for r in &reports {
            assert!(r.passed, "{r:?}");
        }
    }
}
