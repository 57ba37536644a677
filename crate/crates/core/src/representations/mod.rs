//! Explicit representation families of free groups and certificates of
//! density and of the Schottky property.

mod dense;
mod schottky;

use std::f64::consts::{FRAC_PI_8, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chains::{FieldTag, Word};
use crate::error::{Error, Result};
use crate::{Isometry, Representation};

pub use dense::{
    certify_dense, certify_dense_psl2r, enumerate_words, DensityCertificate, DensitySearch, RealDensityCertificate,
};
pub use schottky::{certify_schottky, Disc, DiscPair, SchottkyCertificate, DISC_INFLATION};

/// Margulis constant used by density certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mu3(f64);

impl Mu3 {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 {
            Ok(Mu3(mu))
        } else {
            Err(Error::InvalidInput(format!("mu must be positive, got {mu}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Mu3 {
    fn default() -> Self {
        Mu3(0.104)
    }
}

/// A strict inequality `lhs < rhs`, with `margin = rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl Inequality {
    pub fn less(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Inequality { name: name.into(), lhs, rhs, margin: rhs - lhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs < self.rhs && self.margin > 0.0
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("certificate check failed: {what}")))
    }
}

/// Generators read back from a certificate, used as stored after a
/// determinant check relative to the entry size.
fn raw_generators(gens: &[Isometry]) -> Result<Vec<Isometry>> {
    for g in gens {
        let scale = g.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
        check((g.det() - 1.0).norm() <= 1e-9 * scale * scale, "determinant")?;
    }
    Ok(gens.to_vec())
}

/// Generator 1 is loxodromic with complex length `r + i t` along the
/// vertical axis; generator 2 rotates by `2 pi theta` about the geodesic
/// from -1 to 1, which meets the vertical axis orthogonally at (0, 1).
pub fn rho_theta(r: f64, t: f64, theta: f64) -> Result<Representation> {
    if !(r > 0.0) || !(t > 0.0 && t < FRAC_PI_8) || !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidInput(format!("rho_theta parameters out of range: r={r}, t={t}, theta={theta}")));
    }
    let a = Isometry::diagonal(Complex64::new(r / 2.0, t / 2.0).exp())?;
    let (s, c) = (PI * theta).sin_cos();
    let b = Isometry::new(Complex64::new(c, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, s), Complex64::new(c, 0.0))?;
    Representation::new(vec![a, b], FieldTag::Complex)
}

/// The pair `x(alpha) = diag(alpha, 1/alpha)` and `y(beta)`, the
/// hyperbolic-cosine matrix of `beta` with axis from -1 to 1.
pub fn h_alpha_beta(alpha: Complex64, beta: Complex64) -> Result<Representation> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !v.is_finite() || (v.norm() - 1.0).abs() < 1e-12 || v.norm() == 0.0 {
            return Err(Error::InvalidInput(format!("|{name}| must be finite, nonzero and different from 1, got {v}")));
        }
    }
    let x = Isometry::diagonal(alpha)?;
    let (p, m) = ((beta + beta.inv()) / 2.0, (beta - beta.inv()) / 2.0);
    let y = Isometry::from_matrix(p, m, m, p)?;
    Ok(Representation::detect(vec![x, y]))
}

/// `h_alpha_beta(e^a, e^b)`: small log-parameters give elements close to the identity.
pub fn h_alpha_beta_log(a: Complex64, b: Complex64) -> Result<Representation> {
    h_alpha_beta(a.exp(), b.exp())
}

/// Largest admissible rotation threshold below 1/4, shrunk by a relative
/// `1e-9` so that the defining inequality holds strictly.
pub fn threshold_tau0(r: f64, mu: Mu3) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("r must be positive, got {r}")));
    }
    let s = ((mu.value() / 2.0).sinh() / (r + 1.0).sinh()).min(1.0);
    Ok((s.asin() / (2.0 * PI)).min(0.25) * (1.0 - 1e-9))
}

/// `2 asinh(sin(2 pi tau0) sinh(r + 1)) < mu`.
pub fn threshold_inequality(r: f64, tau0: f64, mu: Mu3) -> Inequality {
    let lhs = 2.0 * ((2.0 * PI * tau0).sin() * (r + 1.0).sinh()).asinh();
    Inequality::less("2 asinh(sin(2 pi tau0) sinh(r+1)) < mu", lhs, mu.value())
}

/// Signed representative of `x mod 1` in `[-1/2, 1/2)`.
fn centered_frac(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

/// Whether `n` passes both window conditions for index `i`.
pub fn exponent_windows_hold(thetas: &[f64], tau0: f64, i: usize, n: u64) -> bool {
    thetas.iter().enumerate().all(|(j, &th)| {
        let x = n as f64 * th;
        if j == i {
            centered_frac(x).abs() < tau0
        } else {
            let f = x - x.floor();
            f > 0.125 && f < 0.375
        }
    })
}

/// For each `i`, the least `n >= 1` with `n theta_i` within `tau0` of an
/// integer and `n theta_j mod 1` in `(1/8, 3/8)` for every `j != i`.
///
/// The `theta` are assumed rationally independent and irrational.
pub fn find_exponents(thetas: &[f64], tau0: f64, scan_bound: u64) -> Result<Vec<u64>> {
    if thetas.is_empty() || !(tau0 > 0.0 && tau0 < 0.5) {
        return Err(Error::InvalidInput("need at least one theta and tau0 in (0, 1/2)".into()));
    }
    (0..thetas.len())
        .map(|i| {
            (1..=scan_bound)
                .find(|&n| exponent_windows_hold(thetas, tau0, i, n))
                .ok_or(Error::BudgetExceeded { best: scan_bound as f64 })
        })
        .collect()
}

/// Side pairings of the regular hyperbolic `4g`-gon centered at `i` with
/// angle sum `2 pi`, in the upper half-plane, together with the relator
/// `[x1, y1] .. [xg, yg]` over the generators `x1, y1, .., xg, yg`.
pub fn fuchsian_surface_rep(g: usize) -> Result<(Representation, Word)> {
    if g < 2 {
        return Err(Error::InvalidInput(format!("genus must be at least 2, got {g}")));
    }
    let n = 4 * g;
    let nf = n as f64;
    let alpha = 2.0 * PI / nf;
    let rho = (1.0 / ((PI / nf).tan() * (alpha / 2.0).tan())).acosh();
    let h = (rho.tanh() * (PI / nf).cos()).atanh();
    let mid = |k: usize| 2.0 * PI * (k as f64 + 0.5) / nf;
    let rot = |phi: f64| [Complex64::from_polar(1.0, phi / 2.0), 0.0.into(), 0.0.into(), Complex64::from_polar(1.0, -phi / 2.0)];
    let trans = |d: f64| {
        let (c, s) = ((d / 2.0).cosh(), (d / 2.0).sinh());
        [c.into(), s.into(), s.into(), c.into()]
    };
    // Disk element sending side `from` onto side `to`.
    let pairing = |from: usize, to: usize| mul(mul(rot(mid(to)), trans(2.0 * h)), rot(PI - mid(from)));
    let cayley = [Complex64::i(), Complex64::i(), (-1.0).into(), 1.0.into()];
    let cayley_inv = [Complex64::new(0.5, 0.0) / Complex64::i(), (-0.5).into(), Complex64::new(0.5, 0.0) / Complex64::i(), 0.5.into()];
    let to_uhp = |m: [Complex64; 4]| -> Result<Isometry> {
        let u = mul(mul(cayley, m), cayley_inv);
        let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if u.iter().any(|z| z.im.abs() > 1e-12 * scale) {
            return Err(Error::NotReal);
        }
        Isometry::from_real(u[0].re, u[1].re, u[2].re, u[3].re)
    };
    let mut gens = Vec::with_capacity(2 * g);
    for j in 0..g {
        gens.push(to_uhp(pairing(4 * j + 2, 4 * j))?);
        gens.push(to_uhp(pairing(4 * j + 3, 4 * j + 1))?.inverse());
    }
    let relator = surface_relator(g);
    let rep = Representation::new(gens, FieldTag::Real)?;
    // Rounding is relative to the largest partial product of the relator.
    let mut p = Isometry::identity();
    let mut scale: f64 = 1.0;
    for &l in relator.letters() {
        let k = l.unsigned_abs() as usize - 1;
        p = p.compose(&if l > 0 { rep.generators()[k] } else { rep.generators()[k].inverse() });
        scale = p.entries().iter().map(|z| z.norm()).fold(scale, f64::max);
    }
    let err = p.identity_distance();
    if err > 1e-13 * n as f64 * scale * scale {
        return Err(Error::InvalidInput(format!("surface relator residual {err:e}")));
    }
    Ok((rep, relator))
}

/// The relator word, reduced; it is never shortened since consecutive letters differ.
pub fn surface_relator(g: usize) -> Word {
    relator_letters(g)
}

fn relator_letters(g: usize) -> Word {
    let letters = (0..g).flat_map(|j| {
        let (x, y) = (2 * j as i32 + 1, 2 * j as i32 + 2);
        [x, y, -x, -y]
    });
    Word::from_letters(letters).expect("nonzero letters")
}

fn mul(x: [Complex64; 4], y: [Complex64; 4]) -> [Complex64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

/// Generator 1 translates by `l` along the imaginary axis; generator 2
/// rotates by `pi q` about `i`.
pub fn dense_psl2r(l: f64, q: f64) -> Result<Representation> {
    if !(l > 0.0) || !q.is_finite() {
        return Err(Error::InvalidInput(format!("dense_psl2r needs l > 0 and finite q, got l={l}, q={q}")));
    }
    let a = Isometry::from_real((l / 2.0).exp(), 0.0, 0.0, (-l / 2.0).exp())?;
    let b = Isometry::rotation_about_i(PI * q);
    Representation::new(vec![a, b], FieldTag::Real)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::{is_elementary_pair_real, Elementarity, FixedPoints, IsometryClass};
    use crate::BoundaryPoint;

    #[test]
    fn rho_theta_generators() {
        let rep = rho_theta(2.0, 0.3, 0.37).unwrap();
        match rep.generators()[0].classify().unwrap() {
            IsometryClass::Loxodromic { length } => {
                assert!((length.re - 2.0).abs() < 1e-12 && (length.im - 0.3).abs() < 1e-12)
            }
            c => panic!("{c:?}"),
        }
        match rep.generators()[1].classify().unwrap() {
            IsometryClass::Elliptic { angle } => assert!((angle.abs() - 2.0 * PI * 0.37).abs() < 1e-12),
            c => panic!("{c:?}"),
        }
        let pts = rep.generators()[1].fixed_points().unwrap().points();
        let one = BoundaryPoint::finite(1.0.into());
        let minus = BoundaryPoint::finite((-1.0).into());
        assert!(pts.iter().any(|p| p.approx_eq(&one, 1e-12)) && pts.iter().any(|p| p.approx_eq(&minus, 1e-12)));
        let b5 = rep.generators()[1].pow(5);
        match b5.classify().unwrap() {
            IsometryClass::Elliptic { angle } => {
                let want = crate::isometry::wrap_angle(2.0 * PI * 5.0 * 0.37);
                assert!((angle.abs() - want.abs()).abs() < 1e-10);
            }
            c => panic!("{c:?}"),
        }
        assert!(rho_theta(1.0, 0.5, 0.3).is_err());
    }

    #[test]
    fn h_alpha_beta_fixed_points() {
        let rep = h_alpha_beta(Complex64::new(2.0, 1.0), Complex64::new(3.0, 0.0)).unwrap();
        match rep.generators()[0].fixed_points().unwrap() {
            FixedPoints::Loxodromic { attracting, repelling } => {
                assert!(attracting.is_infinity());
                assert!(repelling.approx_eq(&BoundaryPoint::finite(0.0.into()), 1e-14));
            }
            f => panic!("{f:?}"),
        }
        let pts = rep.generators()[1].fixed_points().unwrap().points();
        assert!(pts.iter().any(|p| p.approx_eq(&BoundaryPoint::finite(1.0.into()), 1e-12)));
        assert!(pts.iter().any(|p| p.approx_eq(&BoundaryPoint::finite((-1.0).into()), 1e-12)));
        assert!(h_alpha_beta(Complex64::new(0.0, 1.0), 2.0.into()).is_err());
    }

    #[test]
    fn tau0_value_and_strictness() {
        let mu = Mu3::default();
        let t = threshold_tau0(1.0, mu).unwrap();
        let oracle = ((0.052f64).sinh() / 2.0f64.sinh()).asin() / (2.0 * PI);
        assert!((t - oracle).abs() < 1e-11);
        assert!((t - 0.002283).abs() < 1e-6);
        assert!(threshold_inequality(1.0, t, mu).holds());
        assert!(threshold_tau0(2.0, mu).unwrap() < t);
        assert!(threshold_tau0(0.0, mu).is_err());
    }

    #[test]
    fn exponents_match_scan() {
        let th = 2f64.sqrt() - 1.0;
        let n = find_exponents(&[th], 0.01, 10_000_000).unwrap();
        let brute = (1u64..).find(|&k| {
            let x = k as f64 * th;
            (x - x.round()).abs() < 0.01
        });
        assert_eq!(Some(n[0]), brute);
        let ths = [2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0];
        let ns = find_exponents(&ths, 0.01, 10_000_000).unwrap();
        for (i, &n) in ns.iter().enumerate() {
            assert!(exponent_windows_hold(&ths, 0.01, i, n));
            assert!((1..n).all(|m| !exponent_windows_hold(&ths, 0.01, i, m)));
        }
        assert!(matches!(find_exponents(&[0.5, 0.5], 0.01, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn surface_generators() {
        for g in 2..=5 {
            let (rep, rel) = fuchsian_surface_rep(g).unwrap();
            assert_eq!(rep.rank(), 2 * g);
            assert_eq!(rel.len(), 4 * g);
            assert!(rep.eval(&rel).unwrap().identity_distance() < 1e-9);
            for x in rep.generators() {
                assert!(x.trace().norm() > 2.0);
            }
        }
        assert!(fuchsian_surface_rep(1).is_err());
    }

    #[test]
    fn dense_real_pair() {
        let rep = dense_psl2r(1.0, 2f64.sqrt()).unwrap();
        let g = rep.generators();
        assert_eq!(is_elementary_pair_real(&g[0], &g[1]), Elementarity::NonElementary);
        match g[0].classify().unwrap() {
            IsometryClass::Loxodromic { length } => assert!((length.re - 1.0).abs() < 1e-12 && length.im.abs() < 1e-12),
            c => panic!("{c:?}"),
        }
    }
}
