//! Seeded random generators shared by the integration suites.

use framekit::frames::VectorSequence;
use framekit::linalg::{CMat, Tol, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Haar-ish random unitary via QR of a random complex matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    let qr = random_matrix(rng, d, d).qr();
    qr.q()
}

pub fn random_onb(rng: &mut ChaCha8Rng, d: usize) -> VectorSequence {
    VectorSequence::from_matrix(random_unitary(rng, d))
}

/// `U diag(sigma) V^*` with the given singular values, `d x m`.
pub fn matrix_with_singular_values(rng: &mut ChaCha8Rng, d: usize, m: usize, sigma: &[f64]) -> CMat {
    let u = random_unitary(rng, d);
    let v = random_unitary(rng, m);
    let mut s = CMat::zeros(d, m);
    for (i, &x) in sigma.iter().enumerate() {
        s[(i, i)] = C64::new(x, 0.0);
    }
    u * s * v.adjoint()
}

/// Full-rank random frame of `m >= d` vectors with singular values in
/// `[0.5, 2]`.
pub fn random_frame(rng: &mut ChaCha8Rng, d: usize, m: usize) -> VectorSequence {
    let sigma: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..2.0)).collect();
    VectorSequence::from_matrix(matrix_with_singular_values(rng, d, m, &sigma))
}

/// Random frame sequence of rank `r <= min(d, m)`.
pub fn random_frame_sequence(rng: &mut ChaCha8Rng, d: usize, m: usize, r: usize) -> VectorSequence {
    let sigma: Vec<f64> = (0..r).map(|_| rng.gen_range(0.5..2.0)).collect();
    VectorSequence::from_matrix(matrix_with_singular_values(rng, d, m, &sigma))
}

/// Random tight frame: all singular values equal.
#[allow(dead_code)]
pub fn random_tight_frame(rng: &mut ChaCha8Rng, d: usize, m: usize) -> VectorSequence {
    let c = rng.gen_range(0.5..2.0);
    let sigma = vec![c; d];
    VectorSequence::from_matrix(matrix_with_singular_values(rng, d, m, &sigma))
}

/// Random admissible operator for type III: singular values drawn from
/// `[sqrt(A), sqrt(B)]` for the optimal bounds of `f`.
pub fn random_admissible_q(rng: &mut ChaCha8Rng, f: &VectorSequence, tol: &Tol) -> CMat {
    let (a, b) = f.optimal_bounds(tol).unwrap();
    let d = f.ambient_dim();
    let sigma: Vec<f64> = (0..d)
        .map(|_| rng.gen_range(a.sqrt()..=b.sqrt()))
        .collect();
    matrix_with_singular_values(rng, d, d, &sigma)
}

pub fn rel_close(x: f64, y: f64, tau: f64) -> bool {
    (x - y).abs() <= tau * y.abs().max(1.0)
}
