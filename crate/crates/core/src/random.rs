//! Seeded generators for distributions, unitaries and separable states.
//!
//! Distributions are symmetric Dirichlet(1) draws. Unitaries come from the QR
//! factorization of a complex Gaussian matrix with the phases of `R`'s
//! diagonal folded back into `Q`, which gives the Haar measure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::classical_entropy::{JointDist, ProbDist};
use crate::quantum_state::{convex_mixture, BipartiteState, CMatrix, DensityMatrix, SeparableEnsemble, C64};

pub type SampleRng = ChaCha8Rng;

/// Generator for sample `index` of a run with base seed `seed`. Each sample
/// owns its stream (`seed + index`) so results do not depend on ordering.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index))
}

fn dirichlet_raw<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

pub fn random_prob_dist<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbDist {
    ProbDist::new(dirichlet_raw(rng, n)).expect("Dirichlet draw is normalized")
}

/// Uniform draw from the simplex of `rows x cols` joints.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> JointDist {
    JointDist::from_flat(rows, cols, dirichlet_raw(rng, rows * cols)).expect("Dirichlet draw is normalized")
}

pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

/// `U diag(p) U^dagger` with Haar `U` and Dirichlet `p`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityMatrix {
    let p = random_prob_dist(rng, n);
    let u = random_unitary(rng, n);
    DensityMatrix::from_spectral(&p, &u).expect("spectral construction is a valid state")
}

/// Shared-basis ensemble with `terms` product components.
pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize, terms: usize) -> SeparableEnsemble {
    let weights = random_prob_dist(rng, terms);
    let pa = (0..terms).map(|_| random_prob_dist(rng, da)).collect();
    let pb = (0..terms).map(|_| random_prob_dist(rng, db)).collect();
    let ua = random_unitary(rng, da);
    let ub = random_unitary(rng, db);
    SeparableEnsemble::new(weights, pa, pb, Some(ua), Some(ub)).expect("generated ensemble is valid")
}

/// Convex mixture of `terms` products of independent random local states.
pub fn random_general_separable<R: Rng + ?Sized>(rng: &mut R, da: usize, db: usize, terms: usize) -> BipartiteState {
    let weights = random_prob_dist(rng, terms);
    let products: Vec<_> = (0..terms).map(|_| (random_density(rng, da), random_density(rng, db))).collect();
    convex_mixture(&weights, &products).expect("mixture of product states is valid")
}
