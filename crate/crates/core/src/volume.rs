//! The Bloch-Wigner dilogarithm, ideal tetrahedron volumes, and the signed
//! volume and area cocycles evaluated on orbits of a basepoint.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::isometry::{BoundaryPoint, H2Point, ProjectiveIsometry};
use crate::scalar::Real;

/// Volume of the regular ideal tetrahedron, `D(e^{i pi/3})`.
pub const V3: f64 = 1.014_941_606_409_653_6;

/// Frame points closer than this in the chordal metric count as coincident.
pub const TOL_FRAME: f64 = 1e-13;

/// `B_{2k} / (2k+1)!` for `k = 1..=21`.
#[allow(clippy::excessive_precision)]
const BERNOULLI_SERIES: [f64; 21] = [
    0.027777777777777777778,
    -0.00027777777777777777778,
    4.7241118669690098262e-6,
    -9.1857730746619635509e-8,
    1.8978869988970999072e-9,
    -4.0647616451442255268e-11,
    8.9216910204564525552e-13,
    -1.9939295860721075687e-14,
    4.5189800296199181917e-16,
    -1.0356517612181247014e-17,
    2.3952186210261867457e-19,
    -5.5817858743250093363e-21,
    1.3091507554183212858e-22,
    -3.0874198024267402932e-24,
    7.3159756527022034204e-26,
    -1.740845657234000741e-27,
    4.1576356446138997196e-29,
    -9.9621484882846221032e-31,
    2.3940344248961653005e-32,
    -5.7683473553673900843e-34,
    1.3931794796470079778e-35,
];

/// `Li_2(z)` for `|z| <= 1`, `Re z <= 1/2`, via the Bernoulli expansion in
/// `u = -log(1 - z)`, which converges for `|u| < 2 pi`.
fn li2_reduced<T: Real>(z: Complex<T>) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let u = -(one - z).ln();
    let u2 = u * u;
    let mut acc = u - u2 * T::lit(0.25);
    let mut pow = u * u2;
    let tiny = T::epsilon() * T::lit(1e-3);
    for &coef in BERNOULLI_SERIES.iter() {
        let term = pow * T::lit(coef);
        acc = acc + term;
        if term.norm() <= tiny * acc.norm() {
            break;
        }
        pow = pow * u2;
    }
    acc
}

/// Bloch-Wigner function `D(z) = Im Li_2(z) + arg(1 - z) log|z|`.
///
/// Total on the Riemann sphere: returns 0 at `0`, `1` and non-finite input.
/// The argument is first moved into `|z| <= 1, Re z <= 1/2` using
/// `D(1/z) = -D(z)` and `D(1 - z) = -D(z)`.
pub fn bloch_wigner<T: Real>(z: Complex<T>) -> T {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return T::zero();
    }
    let one = Complex::new(T::one(), T::zero());
    if z.norm() == T::zero() || (z - one).norm() == T::zero() || z.im == T::zero() {
        return T::zero();
    }
    let mut w = z;
    let mut sign = T::one();
    if w.norm() > T::one() {
        w = w.inv();
        sign = -sign;
    }
    if w.re > T::lit(0.5) {
        w = one - w;
        sign = -sign;
    }
    let li2 = li2_reduced(w);
    let d = li2.im + (one - w).arg() * w.norm().ln();
    sign * d
}

/// Cross ratio of four points: the image of `z3` under the Möbius map sending
/// `(z0, z1, z2)` to `(inf, 0, 1)`.
pub fn cross_ratio<T: Real>(
    z0: &BoundaryPoint<T>,
    z1: &BoundaryPoint<T>,
    z2: &BoundaryPoint<T>,
    z3: &BoundaryPoint<T>,
) -> Result<BoundaryPoint<T>> {
    let tol = T::lit(TOL_FRAME);
    if z0.chordal_distance(z1) < tol || z0.chordal_distance(z2) < tol || z1.chordal_distance(z2) < tol {
        return Err(Error::DegenerateFrame);
    }
    let br = |x: &BoundaryPoint<T>, y: &BoundaryPoint<T>| {
        let (x0, x1) = x.coords();
        let (y0, y1) = y.coords();
        x0 * y1 - x1 * y0
    };
    let num = br(z3, z1) * br(z2, z0);
    let den = br(z3, z0) * br(z2, z1);
    BoundaryPoint::new(num, den)
}

/// Signed volume of the ideal tetrahedron with ordered vertices `z`; zero when
/// two vertices coincide.
pub fn ideal_tet_volume<T: Real>(z: [&BoundaryPoint<T>; 4]) -> T {
    let tol = T::lit(TOL_FRAME);
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i].chordal_distance(z[j]) < tol {
                return T::zero();
            }
        }
    }
    match cross_ratio(z[0], z[1], z[2], z[3]) {
        Ok(w) => w.to_complex().map_or(T::zero(), bloch_wigner),
        Err(_) => T::zero(),
    }
}

/// `vol_3^x(g0, .., g3)` for an ideal basepoint `x`.
pub fn vol3_cocycle<T: Real>(x: &BoundaryPoint<T>, g: [&ProjectiveIsometry<T>; 4]) -> T {
    let p = g.map(|h| h.apply_boundary(x));
    ideal_tet_volume([&p[0], &p[1], &p[2], &p[3]])
}

/// A vertex of a triangle in the closed hyperbolic plane: an interior point or
/// an ideal point on `R ∪ {inf}` (`None` is infinity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H2Vertex<T> {
    Finite(H2Point<T>),
    Ideal(Option<T>),
}

impl<T: Real> H2Vertex<T> {
    /// Image in the Poincaré disk under `z -> (z - i)/(z + i)`.
    fn to_disk(self) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        match self {
            H2Vertex::Finite(p) => (p.z - i) / (p.z + i),
            H2Vertex::Ideal(Some(r)) => {
                let z = Complex::new(r, T::zero());
                (z - i) / (z + i)
            }
            H2Vertex::Ideal(None) => Complex::new(T::one(), T::zero()),
        }
    }

    fn is_ideal(&self) -> bool {
        matches!(self, H2Vertex::Ideal(_))
    }

    pub fn apply(&self, g: &ProjectiveIsometry<T>) -> Result<Self> {
        match self {
            H2Vertex::Finite(p) => Ok(H2Vertex::Finite(g.apply_h2(p)?)),
            H2Vertex::Ideal(r) => Ok(H2Vertex::Ideal(g.apply_real_line(*r)?)),
        }
    }
}

/// Orientation-signed area of a hyperbolic triangle by angle defect.
///
/// Degenerate triangles (coincident or collinear vertices) have area zero;
/// ideal vertices contribute zero angle.
pub fn signed_area_h2<T: Real>(x0: &H2Vertex<T>, x1: &H2Vertex<T>, x2: &H2Vertex<T>) -> T {
    let verts = [*x0, *x1, *x2];
    let w = verts.map(|v| v.to_disk());
    let tol = T::lit(TOL_FRAME);
    for i in 0..3 {
        for j in i + 1..3 {
            if (w[i] - w[j]).norm() < tol {
                return T::zero();
            }
        }
    }
    // Orientation from the Klein model, where geodesics are straight.
    let klein = w.map(|p| p * (T::lit(2.0) / (T::one() + p.norm_sqr())));
    let e1 = klein[1] - klein[0];
    let e2 = klein[2] - klein[0];
    let orient = e1.re * e2.im - e1.im * e2.re;
    let scale = e1.norm() * e2.norm();
    if orient.abs() <= T::lit(1e-14) * scale {
        return T::zero();
    }
    let mut defect = T::PI();
    for k in 0..3 {
        if verts[k].is_ideal() {
            continue;
        }
        let p = w[k];
        // The disk automorphism moving p to 0 has positive real derivative at p,
        // so tangent directions at p are the arguments of the images.
        let to_origin = |q: Complex<T>| (q - p) / (Complex::new(T::one(), T::zero()) - p.conj() * q);
        let u = to_origin(w[(k + 1) % 3]);
        let v = to_origin(w[(k + 2) % 3]);
        defect = defect - (v / u).arg().abs();
    }
    let area = defect.max(T::zero());
    if orient > T::zero() {
        area
    } else {
        -area
    }
}

/// `vol_2^x(g0, g1, g2)`: signed area of the orbit triangle of `x`.
pub fn vol2_cocycle<T: Real>(x: &H2Vertex<T>, g: [&ProjectiveIsometry<T>; 3]) -> Result<T> {
    let p0 = x.apply(g[0])?;
    let p1 = x.apply(g[1])?;
    let p2 = x.apply(g[2])?;
    Ok(signed_area_h2(&p0, &p1, &p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn bp(z: Complex<f64>) -> BoundaryPoint<f64> {
        BoundaryPoint::finite(z)
    }

    #[test]
    fn bloch_wigner_reference_values() {
        assert!((bloch_wigner(Complex::from_polar(1.0, PI / 3.0)) - V3).abs() < 1e-13);
        assert_eq!(bloch_wigner(cx(0.5, 0.0)), 0.0);
        // mpmath: Im Li2(z) + arg(1-z) log|z| at 0.3+0.7i
        assert!((bloch_wigner(cx(0.3, 0.7)) - 0.981_810_571_427_325_5).abs() < 1e-13);
        assert!((bloch_wigner(cx(0.3, -0.7)) + 0.981_810_571_427_325_5).abs() < 1e-13);
        assert_eq!(bloch_wigner(cx(0.0, 0.0)), 0.0);
        assert_eq!(bloch_wigner(cx(1.0, 0.0)), 0.0);
        assert_eq!(bloch_wigner(cx(f64::INFINITY, 0.0)), 0.0);
    }

    #[test]
    fn bloch_wigner_in_single_precision() {
        let d = bloch_wigner(Complex::<f32>::from_polar(1.0, std::f32::consts::PI / 3.0));
        assert!((d - V3 as f32).abs() < 1e-5);
    }

    #[test]
    fn cross_ratio_normal_form() {
        let z = cx(0.2, 1.3);
        let w = cross_ratio(&BoundaryPoint::infinity(), &bp(cx(0.0, 0.0)), &bp(cx(1.0, 0.0)), &bp(z)).unwrap();
        assert!((w.to_complex().unwrap() - z).norm() < 1e-15);
        let one = cross_ratio(&BoundaryPoint::infinity(), &bp(cx(0.0, 0.0)), &bp(cx(1.0, 0.0)), &bp(cx(1.0, 0.0)));
        assert!((one.unwrap().to_complex().unwrap() - cx(1.0, 0.0)).norm() < 1e-15);
        let bad = cross_ratio(&bp(cx(1.0, 0.0)), &bp(cx(1.0, 0.0)), &bp(cx(2.0, 0.0)), &bp(z));
        assert_eq!(bad, Err(Error::DegenerateFrame));
    }

    #[test]
    fn ideal_tet_examples() {
        let inf = BoundaryPoint::infinity();
        let zero = bp(cx(0.0, 0.0));
        let one = bp(cx(1.0, 0.0));
        let zeta = bp(Complex::from_polar(1.0, PI / 3.0));
        assert!((ideal_tet_volume([&inf, &zero, &one, &zeta]) - V3).abs() < 1e-13);
        assert_eq!(ideal_tet_volume([&inf, &zero, &zero, &zeta]), 0.0);
        let v = ideal_tet_volume([&inf, &zero, &one, &zeta]);
        assert!((ideal_tet_volume([&zero, &inf, &one, &zeta]) + v).abs() < 1e-13);
        assert!((ideal_tet_volume([&inf, &zero, &zeta, &one]) + v).abs() < 1e-13);
    }

    /// Area by the hyperboloid formula tan(A/2) = det / (1 + cosh a + cosh b + cosh c).
    fn hyperboloid_area(p: [Complex<f64>; 3]) -> f64 {
        let lift = |z: Complex<f64>| {
            let w = (z - cx(0.0, 1.0)) / (z + cx(0.0, 1.0));
            let r2 = w.norm_sqr();
            [(1.0 + r2) / (1.0 - r2), 2.0 * w.re / (1.0 - r2), 2.0 * w.im / (1.0 - r2)]
        };
        let [u, v, w] = p.map(lift);
        let mink = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] - x[1] * y[1] - x[2] * y[2];
        let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]);
        2.0 * det.atan2(1.0 + mink(u, v) + mink(v, w) + mink(w, u))
    }

    fn fin(z: Complex<f64>) -> H2Vertex<f64> {
        H2Vertex::Finite(H2Point::new(z).unwrap())
    }

    #[test]
    fn area_examples() {
        let pts = [cx(0.0, 1.0), cx(1.0, 1.0), cx(0.0, 2.0)];
        let a = signed_area_h2(&fin(pts[0]), &fin(pts[1]), &fin(pts[2]));
        let oracle = hyperboloid_area(pts);
        assert!(a > 0.0);
        assert!((a - oracle).abs() < 1e-12, "{a} vs {oracle}");
        assert!((signed_area_h2(&fin(pts[0]), &fin(pts[2]), &fin(pts[1])) + a).abs() < 1e-14);
        assert_eq!(signed_area_h2(&fin(pts[0]), &fin(pts[0]), &fin(pts[1])), 0.0);
        // three points on the imaginary axis are collinear
        assert_eq!(signed_area_h2(&fin(cx(0.0, 1.0)), &fin(cx(0.0, 2.0)), &fin(cx(0.0, 3.0))), 0.0);
        let ideal = signed_area_h2(&H2Vertex::Ideal(Some(0.0)), &H2Vertex::Ideal(Some(1.0)), &H2Vertex::Ideal(None));
        assert!((ideal - PI).abs() < 1e-14);
    }

    #[test]
    fn vol3_equal_elements_vanish() {
        let g = ProjectiveIsometry::from_matrix(cx(1.0, 1.0), cx(2.0, 0.0), cx(0.5, -0.2), cx(1.5, 0.0)).unwrap();
        let x = bp(cx(0.3, 0.2));
        assert_eq!(vol3_cocycle(&x, [&g, &g, &g, &g]), 0.0);
    }
}
