#![allow(dead_code)]

use jsr_lipschitz::irreducibility::chi;
use jsr_lipschitz::linalg::{dot, vector_norm};
use jsr_lipschitz::{Matrix, MatrixSet, NormKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PHI: f64 = 1.618_033_988_749_895;

pub fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
    Matrix::from_rows(&[[a, b], [c, d]]).unwrap()
}

pub fn golden_pair() -> MatrixSet {
    MatrixSet::new(vec![m2(1.0, 1.0, 0.0, 1.0), m2(1.0, 0.0, 1.0, 1.0)]).unwrap()
}

pub fn r90() -> MatrixSet {
    MatrixSet::singleton(m2(0.0, -1.0, 1.0, 0.0))
}

pub fn random_set(rng: &mut ChaCha8Rng, members: usize) -> MatrixSet {
    MatrixSet::new(
        (0..members).map(|_| Matrix::new(2, (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()).collect(),
    )
    .unwrap()
}

/// Planar sets with 2–3 members, entries in [−1, 1], kept once `χ_1` (ℓ2, grid 256)
/// certifies above 0.01.
pub fn certified_suite(seed: u64, count: usize) -> Vec<MatrixSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(2..=3);
        let s = random_set(&mut rng, m);
        if chi(&s, 1, NormKind::Two, 256).unwrap().chi_lower > 0.01 {
            out.push(s);
        }
    }
    out
}

/// Brute-force inscribed radius: minimises the symmetric support function
/// `max_i |<u, v_i>|` over dual-unit directions `u`, first on a uniform sample of
/// the half circle and then by golden-section search around every sampled
/// local minimum close to the best one.
pub fn dense_direction_radius(points: &[[f64; 2]], kind: NormKind, samples: usize) -> f64 {
    let dual = kind.dual();
    let f = |phi: f64| {
        let u = [phi.cos(), phi.sin()];
        let s = vector_norm(&u, dual);
        let u = [u[0] / s, u[1] / s];
        points.iter().map(|p| dot(&u, p).abs()).fold(0.0, f64::max)
    };
    let step = std::f64::consts::PI / samples as f64;
    let values: Vec<f64> = (0..samples).map(|j| f(j as f64 * step)).collect();
    let best = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut result = best;
    for j in 0..samples {
        let prev = values[(j + samples - 1) % samples];
        let next = values[(j + 1) % samples];
        if values[j] <= prev && values[j] <= next && values[j] <= best + 1e-3 {
            let (mut a, mut b) = ((j as f64 - 1.0) * step, (j as f64 + 1.0) * step);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            result = result.min(f(0.5 * (a + b)));
        }
    }
    result
}
