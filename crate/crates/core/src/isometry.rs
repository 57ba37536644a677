//! Orientation-preserving isometries of hyperbolic 3-space as elements of
//! PSL(2,C), acting on the Riemann sphere, the upper half-space and (for the
//! real subgroup) the upper half-plane.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default tolerance on `|det - 1|`.
pub const TOL_DET: f64 = 1e-12;
/// Default tolerance separating parabolic, identity and elliptic classes.
pub const TOL_CLASS: f64 = 1e-9;

/// Entries with modulus at or below this are skipped when choosing the sign
/// representative.
const TOL_SIGN: f64 = 1e-14;

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn cr<T: Real>(re: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::zero())
}

/// An element of PSL(2,C): a determinant-one matrix `[[a, b], [c, d]]` taken
/// up to sign, stored in its canonical sign representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveIsometry<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
}

impl<T: Real> ProjectiveIsometry<T> {
    /// Builds an isometry from a matrix with `|det - 1| < tol_det`.
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let det = a * d - b * c;
        let off = (det - Complex::new(T::one(), T::zero())).norm();
        if off >= T::lit(TOL_DET) {
            return Err(Error::InvalidInput(format!(
                "determinant deviates from 1 by {:e}",
                off.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { a, b, c, d }.canonical())
    }

    /// Builds an isometry from any invertible matrix by rescaling to determinant one.
    pub fn from_matrix(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let det = a * d - b * c;
        let scale = entry_scale(&[a, b, c, d]);
        if det.norm() <= T::epsilon() * scale * scale || !det.norm().is_finite() {
            return Err(Error::Singular(det.norm().to_f64().unwrap_or(f64::NAN)));
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s }.canonical())
    }

    /// Builds an isometry from a real matrix, rescaling to determinant one.
    pub fn from_real(a: T, b: T, c: T, d: T) -> Result<Self> {
        let z = T::zero();
        Self::from_matrix(Complex::new(a, z), Complex::new(b, z), Complex::new(c, z), Complex::new(d, z))
    }

    pub fn identity() -> Self {
        let one = cr(1.0);
        let zero = cr(0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// `diag(lambda, 1/lambda)`.
    pub fn diagonal(lambda: Complex<T>) -> Result<Self> {
        if lambda.norm() == T::zero() {
            return Err(Error::Singular(0.0));
        }
        let zero = cr(0.0);
        Ok(Self { a: lambda, b: zero, c: zero, d: lambda.inv() }.canonical())
    }

    /// Rotation by `angle` about the geodesic from 0 to infinity.
    pub fn rotation_about_vertical(angle: T) -> Self {
        let half = angle / T::lit(2.0);
        let zero = cr(0.0);
        Self { a: Complex::from_polar(T::one(), half), b: zero, c: zero, d: Complex::from_polar(T::one(), -half) }
            .canonical()
    }

    /// Rotation by `angle` about the geodesic with endpoints `-i` and `i`
    /// (a real matrix; the rotation about `i` in the upper half-plane).
    pub fn rotation_about_i(angle: T) -> Self {
        let half = angle / T::lit(2.0);
        let (s, co) = half.sin_cos();
        let z = T::zero();
        Self { a: c(co, z), b: c(-s, z), c: c(s, z), d: c(co, z) }.canonical()
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> Complex<T> {
        self.a
    }
    pub fn b(&self) -> Complex<T> {
        self.b
    }
    pub fn c(&self) -> Complex<T> {
        self.c
    }
    pub fn d(&self) -> Complex<T> {
        self.d
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    /// Trace of the canonical lift. Only defined up to sign on PSL(2,C).
    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    /// Square of the trace; independent of the lift.
    pub fn trace_sq(&self) -> Complex<T> {
        let t = self.trace();
        t * t
    }

    /// Canonical sign representative: the first entry of `(a, b, c, d)` with
    /// non-negligible modulus has argument in `[0, pi)`.
    pub fn canonical(self) -> Self {
        let tol = T::lit(TOL_SIGN);
        for e in [self.a, self.b, self.c, self.d] {
            if e.norm() > tol {
                let negate = e.im < T::zero() || (e.im == T::zero() && e.re < T::zero());
                return if negate { self.negated() } else { self };
            }
        }
        self
    }

    fn negated(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Matrix product `self * other`, renormalized to determinant one.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let det = a * d - b * c;
        let s = det.sqrt();
        Self { a: a / s, b: b / s, c: c / s, d: d / s }.canonical()
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    /// `self^n` for any integer `n` by repeated squaring.
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `self * h * self^-1`.
    pub fn conjugate(&self, h: &Self) -> Self {
        self.compose(h).compose(&self.inverse())
    }

    /// Max-entry distance between projective classes (minimum over the sign).
    pub fn distance(&self, other: &Self) -> T {
        let plus = max_entry_diff(&self.entries(), &other.entries(), T::one());
        let minus = max_entry_diff(&self.entries(), &other.entries(), -T::one());
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.distance(other) < tol
    }

    /// Distance to the identity class.
    pub fn identity_distance(&self) -> T {
        self.distance(&Self::identity())
    }

    /// True when every entry is real up to `tol`.
    pub fn is_real(&self, tol: T) -> bool {
        self.entries().iter().all(|e| e.im.abs() <= tol)
    }

    /// Classifies by trace into identity, elliptic, parabolic or loxodromic.
    pub fn classify(&self) -> Result<IsometryClass<T>> {
        self.classify_with(T::lit(TOL_CLASS))
    }

    pub fn classify_with(&self, tol_class: T) -> Result<IsometryClass<T>> {
        let tr = self.trace();
        let tr2 = tr * tr;
        let four = T::lit(4.0);
        let gap = (tr2 - Complex::new(four, T::zero())).norm();
        if gap < tol_class {
            let id = self.identity_distance();
            if id < tol_class {
                return Ok(IsometryClass::Identity);
            }
            if id > tol_class.sqrt() {
                return Ok(IsometryClass::Parabolic);
            }
            return Err(Error::AmbiguousClass(gap.to_f64().unwrap_or(f64::NAN)));
        }
        if tr2.im.abs() < tol_class && tr2.re >= T::zero() && tr2.re < four {
            let half = (tr2.re.max(T::zero()).sqrt() / T::lit(2.0)).min(T::one());
            return Ok(IsometryClass::Elliptic { angle: T::lit(2.0) * half.acos() });
        }
        let lambda = self.dominant_eigenvalue();
        let mut tau = lambda.ln() * T::lit(2.0);
        tau.im = wrap_angle(tau.im);
        Ok(IsometryClass::Loxodromic { length: tau })
    }

    /// Eigenvalue of larger modulus of the canonical lift.
    fn dominant_eigenvalue(&self) -> Complex<T> {
        let (l1, l2) = self.eigenvalues();
        if l1.norm() >= l2.norm() {
            l1
        } else {
            l2
        }
    }

    fn eigenvalues(&self) -> (Complex<T>, Complex<T>) {
        let tr = self.trace();
        let disc = (tr * tr - cr(4.0)).sqrt();
        let half = T::lit(0.5);
        let l1 = (tr + disc) * half;
        let l2 = (tr - disc) * half;
        (l1, l2)
    }

    fn eigenvector(&self, lambda: Complex<T>) -> Option<BoundaryPoint<T>> {
        let v1 = (self.b, lambda - self.a);
        let v2 = (lambda - self.d, self.c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        if n.sqrt() <= T::lit(1e-13) {
            None
        } else {
            BoundaryPoint::new(v.0, v.1).ok()
        }
    }

    /// Fixed points on the sphere at infinity.
    pub fn fixed_points(&self) -> Result<FixedPoints<T>> {
        match self.classify()? {
            IsometryClass::Identity => Err(Error::IdentityHasAllFixed),
            IsometryClass::Parabolic => {
                let tr = self.trace();
                let lambda = tr * T::lit(0.5);
                self.eigenvector(lambda).map(FixedPoints::Parabolic).ok_or(Error::IdentityHasAllFixed)
            }
            IsometryClass::Elliptic { .. } => {
                let (l1, l2) = self.eigenvalues();
                let (p, q) = (self.eigenvector(l1), self.eigenvector(l2));
                match (p, q) {
                    (Some(p), Some(q)) => Ok(FixedPoints::Elliptic(p, q)),
                    _ => Err(Error::IdentityHasAllFixed),
                }
            }
            IsometryClass::Loxodromic { .. } => {
                let (l1, l2) = self.eigenvalues();
                let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
                match (self.eigenvector(big), self.eigenvector(small)) {
                    (Some(attracting), Some(repelling)) => Ok(FixedPoints::Loxodromic { attracting, repelling }),
                    _ => Err(Error::IdentityHasAllFixed),
                }
            }
        }
    }

    pub fn apply_boundary(&self, p: &BoundaryPoint<T>) -> BoundaryPoint<T> {
        let z0 = self.a * p.z0 + self.b * p.z1;
        let z1 = self.c * p.z0 + self.d * p.z1;
        BoundaryPoint::normalize_unchecked(z0, z1)
    }

    /// Action on the upper half-space by the quaternionic extension.
    pub fn apply_h3(&self, x: &H3Point<T>) -> H3Point<T> {
        let t2 = x.t * x.t;
        let cz_d = self.c * x.z + self.d;
        let den = cz_d.norm_sqr() + self.c.norm_sqr() * t2;
        let num = (self.a * x.z + self.b) * cz_d.conj() + self.a * self.c.conj() * t2;
        H3Point { z: num / den, t: x.t / den }
    }

    /// Action on the upper half-plane; the isometry must be real.
    pub fn apply_h2(&self, x: &H2Point<T>) -> Result<H2Point<T>> {
        self.real_entries()?;
        let z = (self.a * x.z + self.b) / (self.c * x.z + self.d);
        Ok(H2Point { z: Complex::new(z.re, z.im.max(T::min_positive_value())) })
    }

    /// Action on the boundary of the upper half-plane, `None` meaning infinity.
    pub fn apply_real_line(&self, x: Option<T>) -> Result<Option<T>> {
        let [a, b, c, d] = self.real_entries()?;
        let (num, den) = match x {
            Some(r) => (a * r + b, c * r + d),
            None => (a, c),
        };
        if den == T::zero() || (num / den).abs() > T::lit(1e300).min(T::max_value()) {
            Ok(None)
        } else {
            Ok(Some(num / den))
        }
    }

    /// Real parts of the entries, after checking they are real.
    pub fn real_entries(&self) -> Result<[T; 4]> {
        let scale = entry_scale(&self.entries()).max(T::one());
        if !self.is_real(T::lit(TOL_CLASS) * scale) {
            return Err(Error::NotReal);
        }
        Ok([self.a.re, self.b.re, self.c.re, self.d.re])
    }
}

fn entry_scale<T: Real>(es: &[Complex<T>]) -> T {
    es.iter().fold(T::zero(), |m, e| m.max(e.norm()))
}

fn max_entry_diff<T: Real>(x: &[Complex<T>; 4], y: &[Complex<T>; 4], sign: T) -> T {
    x.iter().zip(y).fold(T::zero(), |m, (p, q)| m.max((*p - *q * sign).norm()))
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut y = x % two_pi;
    if y <= -T::PI() {
        y = y + two_pi;
    } else if y > T::PI() {
        y = y - two_pi;
    }
    y
}

/// Conjugacy-invariant type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IsometryClass<T> {
    Identity,
    /// Rotation angle in `(0, pi]`.
    Elliptic { angle: T },
    Parabolic,
    /// Complex translation length with positive real part and imaginary part in `(-pi, pi]`.
    Loxodromic { length: Complex<T> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoints<T> {
    Parabolic(BoundaryPoint<T>),
    Elliptic(BoundaryPoint<T>, BoundaryPoint<T>),
    Loxodromic { attracting: BoundaryPoint<T>, repelling: BoundaryPoint<T> },
}

impl<T: Real> FixedPoints<T> {
    pub fn points(&self) -> Vec<BoundaryPoint<T>> {
        match *self {
            FixedPoints::Parabolic(p) => vec![p],
            FixedPoints::Elliptic(p, q) => vec![p, q],
            FixedPoints::Loxodromic { attracting, repelling } => vec![attracting, repelling],
        }
    }
}

/// A point of CP^1 in homogeneous coordinates `[z0 : z1]`, representing
/// `z0 / z1`, normalized so the coordinate of larger modulus equals one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint<T> {
    z0: Complex<T>,
    z1: Complex<T>,
}

impl<T: Real> BoundaryPoint<T> {
    pub fn new(z0: Complex<T>, z1: Complex<T>) -> Result<Self> {
        if z0.norm() == T::zero() && z1.norm() == T::zero() {
            return Err(Error::InvalidInput("both homogeneous coordinates vanish".into()));
        }
        if !(z0.norm().is_finite() && z1.norm().is_finite()) {
            return Err(Error::InvalidInput("non-finite homogeneous coordinate".into()));
        }
        Ok(Self::normalize_unchecked(z0, z1))
    }

    fn normalize_unchecked(z0: Complex<T>, z1: Complex<T>) -> Self {
        if z0.norm() >= z1.norm() {
            Self { z0: Complex::new(T::one(), T::zero()), z1: z1 / z0 }
        } else {
            Self { z0: z0 / z1, z1: Complex::new(T::one(), T::zero()) }
        }
    }

    pub fn finite(z: Complex<T>) -> Self {
        Self::normalize_unchecked(z, Complex::new(T::one(), T::zero()))
    }

    pub fn infinity() -> Self {
        Self { z0: Complex::new(T::one(), T::zero()), z1: Complex::new(T::zero(), T::zero()) }
    }

    pub fn coords(&self) -> (Complex<T>, Complex<T>) {
        (self.z0, self.z1)
    }

    pub fn is_infinity(&self) -> bool {
        self.z1.norm() == T::zero()
    }

    /// Affine coordinate, `None` at infinity.
    pub fn to_complex(&self) -> Option<Complex<T>> {
        if self.is_infinity() {
            None
        } else {
            Some(self.z0 / self.z1)
        }
    }

    /// Chordal distance on the unit sphere, in `[0, 1]`.
    pub fn chordal_distance(&self, other: &Self) -> T {
        let cross = self.z0 * other.z1 - self.z1 * other.z0;
        let n1 = (self.z0.norm_sqr() + self.z1.norm_sqr()).sqrt();
        let n2 = (other.z0.norm_sqr() + other.z1.norm_sqr()).sqrt();
        cross.norm() / (n1 * n2)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.chordal_distance(other) < tol
    }
}

/// A point `(z, t)` of the upper half-space, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Point<T> {
    pub z: Complex<T>,
    pub t: T,
}

impl<T: Real> H3Point<T> {
    pub fn new(z: Complex<T>, t: T) -> Result<Self> {
        if !(t > T::zero()) || !t.is_finite() {
            return Err(Error::InvalidInput("height must be positive".into()));
        }
        Ok(Self { z, t })
    }

    /// The point `j = (0, 1)`.
    pub fn origin() -> Self {
        Self { z: Complex::new(T::zero(), T::zero()), t: T::one() }
    }

    /// Hyperbolic distance.
    pub fn dist(&self, other: &Self) -> T {
        dist_h3(self, other)
    }
}

/// Hyperbolic distance in the upper half-space.
pub fn dist_h3<T: Real>(x: &H3Point<T>, y: &H3Point<T>) -> T {
    let dz = (x.z - y.z).norm_sqr();
    let dt = x.t - y.t;
    let chord = (dz + dt * dt).sqrt();
    T::lit(2.0) * (chord / (T::lit(2.0) * (x.t * y.t).sqrt())).asinh()
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Point<T> {
    pub z: Complex<T>,
}

impl<T: Real> H2Point<T> {
    pub fn new(z: Complex<T>) -> Result<Self> {
        if !(z.im > T::zero()) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidInput("imaginary part must be positive".into()));
        }
        Ok(Self { z })
    }

    pub fn i() -> Self {
        Self { z: Complex::new(T::zero(), T::one()) }
    }

    pub fn dist(&self, other: &Self) -> T {
        let dz = (self.z - other.z).norm();
        T::lit(2.0) * (dz / (T::lit(2.0) * (self.z.im * other.z.im).sqrt())).asinh()
    }
}

/// Outcome of the elementarity detectors for a pair of isometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Elementarity {
    CommonFixedPoint,
    InvariantGeodesic,
    InvariantPlane,
    FixedInteriorPoint,
    NonElementary,
}

/// Runs the elementarity detectors on the group generated by `a` and `b`.
///
/// Detectors, in order: a common fixed point at infinity (`tr [a, b] = 2`),
/// an invariant geodesic, a common fixed interior point for two elliptics
/// with intersecting axes, and an invariant plane (all of `tr^2 a`,
/// `tr^2 b`, `tr a tr b tr ab` real).
pub fn is_elementary_pair<T: Real>(a: &ProjectiveIsometry<T>, b: &ProjectiveIsometry<T>) -> Elementarity {
    elementarity(a, b, true)
}

/// Elementarity inside PSL(2,R): the plane detector is skipped since every
/// real pair preserves the hyperbolic plane.
pub fn is_elementary_pair_real<T: Real>(a: &ProjectiveIsometry<T>, b: &ProjectiveIsometry<T>) -> Elementarity {
    elementarity(a, b, false)
}

fn elementarity<T: Real>(a: &ProjectiveIsometry<T>, b: &ProjectiveIsometry<T>, plane: bool) -> Elementarity {
    let tol = T::lit(TOL_CLASS);
    let scale = entry_scale(&a.entries()).max(entry_scale(&b.entries())).max(T::one());
    let tol_s = tol * scale * scale;
    if lift_comm_trace(a, b).sub_two_norm() < tol_s {
        return Elementarity::CommonFixedPoint;
    }

    if let (Ok(fa), Ok(fb)) = (a.fixed_points(), b.fixed_points()) {
        let pa = fa.points();
        let pb = fb.points();
        if pa.len() == 2 && preserves_pair(b, &pa, tol) || pb.len() == 2 && preserves_pair(a, &pb, tol) {
            return Elementarity::InvariantGeodesic;
        }
        if let (FixedPoints::Elliptic(p1, p2), FixedPoints::Elliptic(q1, q2)) = (fa, fb) {
            if geodesics_intersect(&p1, &p2, &q1, &q2, tol) {
                return Elementarity::FixedInteriorPoint;
            }
        }
    }

    if !plane {
        return Elementarity::NonElementary;
    }
    let ta = a.trace();
    let tb = b.trace();
    let tab = a.compose(b).trace();
    let real = |z: Complex<T>| z.im.abs() <= tol_s * (T::one() + z.norm());
    if real(ta * ta) && real(tb * tb) && real(ta * tb * tab) {
        return Elementarity::InvariantPlane;
    }
    Elementarity::NonElementary
}

struct CommTrace<T>(Complex<T>);

impl<T: Real> CommTrace<T> {
    fn sub_two_norm(&self) -> T {
        (self.0 - cr(2.0)).norm()
    }
}

/// Trace of the commutator of SL(2,C) lifts; independent of the lifts chosen.
fn lift_comm_trace<T: Real>(a: &ProjectiveIsometry<T>, b: &ProjectiveIsometry<T>) -> CommTrace<T> {
    let m = |x: [Complex<T>; 4], y: [Complex<T>; 4]| {
        [
            x[0] * y[0] + x[1] * y[2],
            x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3],
        ]
    };
    let inv = |x: [Complex<T>; 4]| [x[3], -x[1], -x[2], x[0]];
    let ea = a.entries();
    let eb = b.entries();
    let p = m(m(m(ea, eb), inv(ea)), inv(eb));
    CommTrace(p[0] + p[3])
}

fn preserves_pair<T: Real>(g: &ProjectiveIsometry<T>, pair: &[BoundaryPoint<T>], tol: T) -> bool {
    let tol = tol.sqrt();
    let (p, q) = (pair[0], pair[1]);
    let (gp, gq) = (g.apply_boundary(&p), g.apply_boundary(&q));
    (gp.approx_eq(&p, tol) && gq.approx_eq(&q, tol)) || (gp.approx_eq(&q, tol) && gq.approx_eq(&p, tol))
}

/// Whether the geodesics `(p1, p2)` and `(q1, q2)` meet in hyperbolic space
/// (including coinciding): the cross ratio sending `p1, p2, q1` to
/// `inf, 0, 1` must send `q2` to a non-positive real.
fn geodesics_intersect<T: Real>(
    p1: &BoundaryPoint<T>,
    p2: &BoundaryPoint<T>,
    q1: &BoundaryPoint<T>,
    q2: &BoundaryPoint<T>,
    tol: T,
) -> bool {
    let close = tol.sqrt();
    let shared = [p1, p2].iter().any(|p| p.approx_eq(q1, close) || p.approx_eq(q2, close));
    if shared {
        return false;
    }
    let br = |x: &BoundaryPoint<T>, y: &BoundaryPoint<T>| x.z0 * y.z1 - x.z1 * y.z0;
    let num = br(q2, p2) * br(q1, p1);
    let den = br(q2, p1) * br(q1, p2);
    if den.norm() <= T::epsilon() {
        return false;
    }
    let w = num / den;
    w.im.abs() <= close * (T::one() + w.norm()) && w.re < T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    type Iso = ProjectiveIsometry<f64>;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn diag(x: f64) -> Iso {
        Iso::diagonal(cx(x, 0.0)).unwrap()
    }

    #[test]
    fn compose_identity_inverse_and_diagonal() {
        let g = Iso::from_matrix(cx(1.0, 2.0), cx(0.5, -1.0), cx(0.3, 0.0), cx(2.0, 1.0)).unwrap();
        assert!(Iso::identity().compose(&g).approx_eq(&g, 1e-14));
        assert!(g.compose(&g.inverse()).approx_eq(&Iso::identity(), 1e-12));
        assert!(diag(2.0).compose(&diag(3.0)).approx_eq(&diag(6.0), 1e-14));
    }

    #[test]
    fn canonical_is_idempotent_and_sign_free() {
        let g = Iso::from_matrix(cx(-1.0, 0.0), cx(2.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)).unwrap();
        assert_eq!(g.canonical(), g);
        assert!(g.a().re > 0.0);
        let h = Iso::from_matrix(cx(0.0, -1.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0)).unwrap();
        assert!(h.a().im > 0.0);
    }

    #[test]
    fn new_rejects_bad_determinant() {
        assert!(Iso::new(cx(2.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)).is_err());
        assert!(Iso::from_matrix(cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0)).is_err());
    }

    #[test]
    fn classify_examples() {
        let (r, t) = (1.0, std::f64::consts::PI / 16.0);
        let g = Iso::diagonal(Complex::new(r / 2.0, t / 2.0).exp()).unwrap();
        match g.classify().unwrap() {
            IsometryClass::Loxodromic { length } => {
                assert!((length - cx(r, t)).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let th = std::f64::consts::PI / 3.0;
        let rot = Iso::from_real(th.cos(), -th.sin(), th.sin(), th.cos()).unwrap();
        match rot.classify().unwrap() {
            IsometryClass::Elliptic { angle } => assert!((angle - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let par = Iso::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(par.classify().unwrap(), IsometryClass::Parabolic);
        assert_eq!(Iso::identity().classify().unwrap(), IsometryClass::Identity);
    }

    #[test]
    fn classify_ambiguous_near_identity() {
        let g = Iso::from_real(1.0, 1e-6, 0.0, 1.0).unwrap();
        assert!(matches!(g.classify(), Err(Error::AmbiguousClass(_))));
    }

    #[test]
    fn fixed_points_examples() {
        match diag(2.0).fixed_points().unwrap() {
            FixedPoints::Loxodromic { attracting, repelling } => {
                assert!(attracting.is_infinity());
                assert!(repelling.to_complex().unwrap().norm() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        let par = Iso::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        match par.fixed_points().unwrap() {
            FixedPoints::Parabolic(p) => assert!(p.is_infinity()),
            other => panic!("{other:?}"),
        }
        assert_eq!(Iso::identity().fixed_points(), Err(Error::IdentityHasAllFixed));
        let h = Iso::from_matrix(cx(1.0, 1.0), cx(2.0, 0.0), cx(0.5, -0.2), cx(1.5, 0.0)).unwrap();
        let conj = h.conjugate(&diag(2.0));
        match conj.fixed_points().unwrap() {
            FixedPoints::Loxodromic { attracting, repelling } => {
                assert!(attracting.approx_eq(&h.apply_boundary(&BoundaryPoint::infinity()), 1e-9));
                assert!(repelling.approx_eq(&h.apply_boundary(&BoundaryPoint::finite(cx(0.0, 0.0))), 1e-9));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn action_examples() {
        let o = H3Point::<f64>::origin();
        assert_eq!(Iso::identity().apply_h3(&o), o);
        let up = Iso::diagonal(cx(0.5f64.exp(), 0.0)).unwrap().apply_h3(&o);
        assert!(up.z.norm() < 1e-15 && (up.t - 1f64.exp()).abs() < 1e-14);
        let inv = Iso::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(inv.apply_boundary(&BoundaryPoint::finite(cx(0.0, 0.0))).is_infinity());
        let cplx = Iso::from_matrix(cx(1.0, 1.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, -1.0)).unwrap();
        assert_eq!(cplx.apply_h2(&H2Point::i()), Err(Error::NotReal));
    }

    #[test]
    fn distances() {
        let o = H3Point::<f64>::origin();
        assert_eq!(o.dist(&o), 0.0);
        let e = H3Point::new(cx(0.0, 0.0), 1f64.exp()).unwrap();
        assert!((o.dist(&e) - 1.0).abs() < 1e-14);
        assert!(H3Point::new(cx(0.0, 0.0), 0.0f64).is_err());
    }

    #[test]
    fn elementarity_examples() {
        let par = Iso::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(is_elementary_pair(&diag(2.0), &par), Elementarity::CommonFixedPoint);
        let r1 = Iso::from_real(2.0, 1.0, 1.0, 1.0).unwrap();
        let r2 = Iso::from_real(1.0, 3.0, 1.0, 4.0).unwrap();
        assert_ne!(is_elementary_pair(&r1, &r2), Elementarity::NonElementary);
        // a rotation by pi about a geodesic orthogonal to the axis of a swaps its endpoints
        let flip = Iso::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(is_elementary_pair(&diag(3.0), &flip), Elementarity::InvariantGeodesic);
        let e1 = Iso::rotation_about_vertical(0.7);
        let e2 = Iso::rotation_about_i(1.1);
        assert_eq!(is_elementary_pair(&e1, &e2), Elementarity::FixedInteriorPoint);
    }
}
