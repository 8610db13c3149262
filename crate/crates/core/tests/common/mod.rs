#![allow(dead_code)]

use num_complex::Complex64;
use qbs::linalg::{identity, ComplexMatrix};
use qbs::ShiftEmbedding;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let q = m.qr().q();
    // guard against a degenerate draw
    if (q.adjoint() * &q - identity(d)).norm() > 1e-10 {
        return identity(d);
    }
    q
}

pub fn phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// `U diag(x) U*`.
pub fn conj_diag(u: &ComplexMatrix, x: &[Complex64]) -> ComplexMatrix {
    u * ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(x)) * u.adjoint()
}

/// Class-Q embedding with σ(|Q|,|E|) = {(s_i, t_i)}, written in a random
/// basis of `H₂`, with random phases on `Q` and `V`.
pub fn random_embedding(rng: &mut impl Rng, points: &[(f64, f64)], levels: usize) -> ShiftEmbedding {
    let d = points.len();
    let w = random_unitary(rng, d);
    let qd: Vec<Complex64> = points.iter().map(|&(s, _)| phase(rng) * s).collect();
    let q = conj_diag(&w, &qd);
    let mut e = ComplexMatrix::zeros((levels + 1) * d, d);
    for (i, &(_, t)) in points.iter().enumerate() {
        for c in 0..d {
            e[(i, c)] = w[(c, i)].conj() * t;
        }
    }
    ShiftEmbedding::new(levels, d, 1, phase(rng), e, q).unwrap()
}

pub fn random_points(rng: &mut impl Rng, d: usize, s_max: f64, t_max: f64) -> Vec<(f64, f64)> {
    (0..d)
        .map(|_| (rng.random_range(0.0..s_max), rng.random_range(0.0..t_max)))
        .collect()
}

/// Points drawn from a finite lattice that includes exact arc and axis
/// points, so that band effects are exercised without random near-misses.
pub fn lattice_points(rng: &mut impl Rng, d: usize) -> Vec<(f64, f64)> {
    const S: [f64; 8] = [0.0, 0.3, 0.5, 0.6, 0.8, 1.0, 1.2, 2.0];
    const T: [f64; 7] = [0.0, 0.4, 0.6, 0.8, 1.0, 1.5, 2.0];
    const ARC: [(f64, f64); 4] = [(0.6, 0.8), (0.8, 0.6), (1.0, 0.0), (0.0, 1.0)];
    (0..d)
        .map(|_| {
            if rng.random_bool(0.2) {
                ARC[rng.random_range(0..ARC.len())]
            } else {
                (S[rng.random_range(0..S.len())], T[rng.random_range(0..T.len())])
            }
        })
        .collect()
}
