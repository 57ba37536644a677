//! Seeded random sampling of group elements and boundary points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{BoundaryPoint, Isometry};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut SeededRng) -> Complex64 {
    // Box-Muller; one complex normal per pair of uniforms.
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar((-2.0 * u.ln()).sqrt(), v) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random element of PSL(2,C) with entries of modulus at most `bound`
/// before determinant normalization.
pub fn random_isometry(rng: &mut SeededRng, bound: f64) -> Isometry {
    loop {
        let e: Vec<Complex64> = (0..4)
            .map(|_| {
                let r = bound * rng.gen::<f64>().sqrt();
                Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        let det = e[0] * e[3] - e[1] * e[2];
        if det.norm() > 1e-2 * bound * bound {
            if let Ok(g) = Isometry::from_matrix(e[0], e[1], e[2], e[3]) {
                return g;
            }
        }
    }
}

/// Random element of PSL(2,C) drawn as a product of Gaussian matrices; gives
/// moderate-size isometries suited to volume sampling.
pub fn random_gaussian_isometry(rng: &mut SeededRng) -> Isometry {
    loop {
        let e: Vec<Complex64> = (0..4).map(|_| gaussian_complex(rng)).collect();
        if let Ok(g) = Isometry::from_matrix(e[0], e[1], e[2], e[3]) {
            let det = e[0] * e[3] - e[1] * e[2];
            if det.norm() > 1e-3 {
                return g;
            }
        }
    }
}

/// Random real element of PSL(2,R).
pub fn random_real_isometry(rng: &mut SeededRng, bound: f64) -> Isometry {
    loop {
        let e: Vec<f64> = (0..4).map(|_| rng.gen_range(-bound..bound)).collect();
        let det = e[0] * e[3] - e[1] * e[2];
        if det.abs() > 1e-2 * bound * bound {
            if let Ok(g) = Isometry::from_real(e[0], e[1], e[2], e[3]) {
                return g;
            }
        }
    }
}

/// Random finite boundary point with Gaussian coordinates.
pub fn random_boundary_point(rng: &mut SeededRng) -> BoundaryPoint {
    BoundaryPoint::finite(gaussian_complex(rng))
}
