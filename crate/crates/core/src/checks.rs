//! Seeded numerical self-checks: the cocycle identity, dilogarithm
//! functional equations, and the Borel pullback identity.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::borel::{borel_cocycle, borel_multiplicity, multi_index_set, veronese_flag};
use crate::error::Result;
use crate::sampling::{random_boundary_point, random_gaussian_isometry, rng};
use crate::volume::{bloch_wigner, ideal_tet_volume, vol3_cocycle, V3};
use crate::{BoundaryPoint, Isometry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleReport {
    pub samples: usize,
    pub max_coboundary: f64,
    pub d_regular: f64,
    pub max_five_term: f64,
    pub max_symmetry: f64,
}

/// Alternating sum over the faces of a 4-simplex of group elements.
pub fn vol3_coboundary(x: &BoundaryPoint, g: &[Isometry; 5]) -> f64 {
    (0..5)
        .map(|i| {
            let f: Vec<&Isometry> = (0..5).filter(|&k| k != i).map(|k| &g[k]).collect();
            let v = vol3_cocycle(x, [f[0], f[1], f[2], f[3]]);
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

/// `D(x) + D(y) + D((1-x)/(1-xy)) + D(1-xy) + D((1-y)/(1-xy))`, which vanishes.
pub fn five_term(x: Complex64, y: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let xy = one - x * y;
    bloch_wigner(x) + bloch_wigner(y) + bloch_wigner((one - x) / xy) + bloch_wigner(xy) + bloch_wigner((one - y) / xy)
}

pub fn cocycle_check(samples: usize, seed: u64) -> CocycleReport {
    let mut r = rng(seed);
    let mut max_cob: f64 = 0.0;
    let mut max_five: f64 = 0.0;
    let mut max_sym: f64 = 0.0;
    for _ in 0..samples {
        let x = random_boundary_point(&mut r);
        let g: [Isometry; 5] = std::array::from_fn(|_| random_gaussian_isometry(&mut r));
        max_cob = max_cob.max(vol3_coboundary(&x, &g).abs());

        let z = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        let w = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        max_five = max_five.max(five_term(z, w).abs());
        let d = bloch_wigner(z);
        let sym = (d + bloch_wigner(z.inv())).abs().max((d + bloch_wigner(Complex64::new(1.0, 0.0) - z)).abs());
        max_sym = max_sym.max(sym);
    }
    CocycleReport {
        samples,
        max_coboundary: max_cob,
        d_regular: bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)),
        max_five_term: max_five,
        max_symmetry: max_sym,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelReport {
    pub n: usize,
    pub samples: usize,
    pub multi_index_count: usize,
    pub multiplicity: usize,
    pub max_pullback_residual: f64,
    pub max_abs_value: f64,
    pub sup_bound: f64,
}

/// Compares the Borel cocycle of Veronese flags with the scaled ideal volume.
pub fn borel_check(n: usize, samples: usize, seed: u64) -> Result<BorelReport> {
    let m = multi_index_set(n)?.len();
    let mult = borel_multiplicity(n);
    let mut r = rng(seed);
    let mut max_res: f64 = 0.0;
    let mut max_abs: f64 = 0.0;
    for _ in 0..samples {
        let p: [BoundaryPoint; 4] = std::array::from_fn(|_| random_boundary_point(&mut r));
        let flags = p.iter().map(|q| veronese_flag(n, q)).collect::<Result<Vec<_>>>()?;
        let b = borel_cocycle([&flags[0], &flags[1], &flags[2], &flags[3]])?;
        let v = ideal_tet_volume([&p[0], &p[1], &p[2], &p[3]]);
        max_res = max_res.max((b - mult as f64 * v).abs());
        max_abs = max_abs.max(b.abs());
    }
    Ok(BorelReport {
        n,
        samples,
        multi_index_count: m,
        multiplicity: mult,
        max_pullback_residual: max_res,
        max_abs_value: max_abs,
        sup_bound: mult as f64 * V3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let c = cocycle_check(50, 1);
        assert!(c.max_coboundary < 1e-9 && c.max_five_term < 1e-10 && c.max_symmetry < 1e-10);
        let b = borel_check(3, 10, 1).unwrap();
        assert_eq!(b.multi_index_count, 4);
        assert!(b.max_pullback_residual < 1e-8);
    }
}
