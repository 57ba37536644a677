use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check, raw_generators, Inequality};
use crate::chains::Word;
use crate::error::{Error, Result};
use crate::isometry::IsometryClass;
use crate::{BoundaryPoint, Isometry, Representation, SCHEMA_VERSION};

/// Relative inflation applied to every disc before the disjointness test.
pub const DISC_INFLATION: f64 = 0.01;

const MESH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disc {
    fn new(center: Complex64, radius: f64) -> Self {
        Disc { center: [center.re, center.im], radius }
    }

    fn center(&self) -> Complex64 {
        Complex64::new(self.center[0], self.center[1])
    }
}

/// Isometric circles of a generator: it maps the exterior of `repelling`
/// into `attracting`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscPair {
    pub generator: String,
    pub repelling: Disc,
    pub attracting: Disc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyParameters {
    pub generators: Vec<Isometry>,
    /// Unitary change of chart in which the discs are reported; it moves a
    /// point away from every fixed point to infinity.
    pub conjugator: Isometry,
    pub inflation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyWitnesses {
    pub discs: Vec<DiscPair>,
    pub gap_margin: f64,
}

/// Ping-pong certificate: pairwise disjoint discs with each generator
/// mapping the exterior of one disc into its partner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyCertificate {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub kind: String,
    pub parameters: SchottkyParameters,
    pub witnesses: SchottkyWitnesses,
    pub inequalities: Vec<Inequality>,
    pub assumptions: Vec<String>,
}

/// Candidate points for the chart change: the six axis points, then a
/// Fibonacci lattice on the sphere.
fn chart_candidates() -> Vec<BoundaryPoint> {
    let mut pts = vec![
        BoundaryPoint::finite(Complex64::i()),
        BoundaryPoint::finite(-Complex64::i()),
        BoundaryPoint::finite(1.0.into()),
        BoundaryPoint::finite((-1.0).into()),
        BoundaryPoint::finite(0.0.into()),
        BoundaryPoint::infinity(),
    ];
    let n = 200;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    for k in 0..n {
        let zc = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let r = (1.0 - zc * zc).sqrt();
        let phi = golden * k as f64;
        // Inverse stereographic projection from the north pole.
        pts.push(BoundaryPoint::finite(Complex64::from_polar(r / (1.0 - zc), phi)));
    }
    pts
}

/// SU(2) element sending `p` to infinity.
fn to_infinity(p: &BoundaryPoint) -> Result<Isometry> {
    let (p0, p1) = p.coords();
    let n = (p0.norm_sqr() + p1.norm_sqr()).sqrt();
    let (p0, p1) = (p0 / n, p1 / n);
    Isometry::new(p0.conj(), p1.conj(), -p1, p0)
}

fn circle_through(z: [Complex64; 3]) -> Option<(Complex64, f64)> {
    let (a, b, c) = (z[0], z[1], z[2]);
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    if d.abs() < 1e-300 {
        return None;
    }
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let center = Complex64::new(ux, uy);
    Some((center, (a - center).norm()))
}

fn mobius(g: &Isometry, z: Complex64) -> Complex64 {
    (g.a() * z + g.b()) / (g.c() * z + g.d())
}

struct Construction {
    discs: Vec<DiscPair>,
    inequalities: Vec<Inequality>,
    gap_margin: f64,
}

fn construct(gens: &[Isometry], k: &Isometry, inflation: f64) -> Result<Construction> {
    let mut discs = Vec::new();
    let mut ineq = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let h = k.compose(g).compose(&k.inverse());
        let c = h.c();
        if c.norm() < 1e-14 {
            return Err(Error::InvalidInput(format!("generator {i} fixes the chart point")));
        }
        let r = 1.0 / c.norm();
        let rep = Disc::new(-h.d() / c, r);
        let att = Disc::new(h.a() / c, r);
        let name = Word::generator(i).to_string();

        // The isometric circle of h maps onto that of its inverse.
        let pts = [0.0, 2.0, 4.0].map(|t: f64| mobius(&h, rep.center() + Complex64::from_polar(r, t)));
        let (ic, ir) = circle_through(pts).ok_or(Error::DegenerateFrame)?;
        let dev = (ic - att.center()).norm() + (ir - r).abs();
        ineq.push(Inequality::less(format!("{name}: image circle deviation < tol"), dev, 1e-9 * (1.0 + att.center().norm() + r)));

        // Sample mesh on the inflated repelling circle, plus infinity.
        let mut worst = (h.a() / c - att.center()).norm() / r;
        for m in 0..MESH {
            let t = std::f64::consts::TAU * m as f64 / MESH as f64;
            let z = rep.center() + Complex64::from_polar(r * (1.0 + inflation), t);
            worst = worst.max((mobius(&h, z) - att.center()).norm() / r);
        }
        ineq.push(Inequality::less(format!("{name}: mesh image radius ratio < 1"), worst, 1.0));
        discs.push(DiscPair { generator: name, repelling: rep, attracting: att });
    }
    let all: Vec<(String, Disc)> = discs
        .iter()
        .flat_map(|p| [(format!("{}-", p.generator), p.repelling), (format!("{}+", p.generator), p.attracting)])
        .collect();
    let mut gap = f64::INFINITY;
    for (j, (nj, dj)) in all.iter().enumerate() {
        for (ni, di) in &all[..j] {
            let lhs = (1.0 + inflation) * (di.radius + dj.radius);
            let rhs = (di.center() - dj.center()).norm();
            let e = Inequality::less(format!("disjoint {ni} {nj}"), lhs, rhs);
            gap = gap.min(e.margin);
            ineq.push(e);
        }
    }
    Ok(Construction { discs, inequalities: ineq, gap_margin: gap })
}

impl SchottkyCertificate {
    /// Rebuilds the discs from the raw matrices and rechecks every inequality.
    pub fn verify(&self) -> Result<()> {
        check(self.kind == "schottky", "type")?;
        let gens = raw_generators(&self.parameters.generators)?;
        let k = raw_generators(&[self.parameters.conjugator])?[0];
        let c = construct(&gens, &k, self.parameters.inflation)?;
        check(c.inequalities.iter().all(Inequality::holds), "inequality")?;
        check(c.gap_margin > 0.0, "gap margin")?;
        check(c.discs.len() == self.witnesses.discs.len(), "disc count")?;
        for (a, b) in c.discs.iter().zip(&self.witnesses.discs) {
            for (x, y) in [(a.repelling, b.repelling), (a.attracting, b.attracting)] {
                let d = (x.center() - y.center()).norm() + (x.radius - y.radius).abs();
                check(d <= 1e-12 * (1.0 + x.center().norm() + x.radius), "disc data")?;
            }
        }
        Ok(())
    }
}

/// Ping-pong on isometric circles in a chart where no fixed point is near infinity.
pub fn certify_schottky(rep: &Representation) -> Result<SchottkyCertificate> {
    let mut fixed = Vec::new();
    for (i, g) in rep.generators().iter().enumerate() {
        if !matches!(g.classify()?, IsometryClass::Loxodromic { .. }) {
            return Err(Error::InvalidInput(format!("generator {i} is not loxodromic")));
        }
        fixed.extend(g.fixed_points()?.points());
    }
    let p = chart_candidates()
        .into_iter()
        .map(|p| (fixed.iter().map(|q| p.chordal_distance(q)).fold(f64::INFINITY, f64::min), p))
        .fold((f64::NEG_INFINITY, BoundaryPoint::infinity()), |best, cur| if cur.0 > best.0 { cur } else { best })
        .1;
    let k = to_infinity(&p)?;
    let c = construct(rep.generators(), &k, DISC_INFLATION)?;
    if !(c.gap_margin > 0.0) {
        return Err(Error::DiscsOverlap { margin: c.gap_margin });
    }
    if !c.inequalities.iter().all(Inequality::holds) {
        return Err(Error::NotFound("mapping check failed".into()));
    }
    let cert = SchottkyCertificate {
        schema_version: SCHEMA_VERSION,
        kind: "schottky".into(),
        parameters: SchottkyParameters { generators: rep.generators().to_vec(), conjugator: k, inflation: DISC_INFLATION },
        witnesses: SchottkyWitnesses { discs: c.discs, gap_margin: c.gap_margin },
        inequalities: c.inequalities,
        assumptions: vec![],
    };
    cert.verify()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::{h_alpha_beta, h_alpha_beta_log, rho_theta};
    use std::f64::consts::PI;

    #[test]
    fn large_parameters_play_ping_pong() {
        let rep = h_alpha_beta(101.0.into(), 101.0.into()).unwrap();
        let cert = certify_schottky(&rep).unwrap();
        assert!(cert.witnesses.gap_margin > 0.0);
        assert_eq!(cert.witnesses.discs.len(), 2);
        // Oracle: in the chart moving i to infinity, the first generator has
        // lower-left entry (101 - 1/101)/2 in modulus, so radius 2/(101 - 1/101).
        let r = 2.0 / (101.0 - 1.0 / 101.0);
        assert!((cert.witnesses.discs[0].repelling.radius - r).abs() < 1e-12);
        let json = serde_json::to_string(&cert).unwrap();
        let back: SchottkyCertificate = serde_json::from_str(&json).unwrap();
        back.verify().unwrap();
    }

    #[test]
    fn small_parameters_overlap() {
        let rep = h_alpha_beta_log(Complex64::from_polar(0.05, PI / 5.0), 0.05.into()).unwrap();
        assert!(matches!(certify_schottky(&rep), Err(Error::DiscsOverlap { .. })));
    }

    #[test]
    fn long_conjugate_pair() {
        // r above the ping-pong threshold, n theta near 1/4.
        let r = 26.0;
        let theta = 0.25 / 7.0 + 1e-3;
        let rho = rho_theta(r, 0.1, theta).unwrap();
        let b7 = crate::chains::Word::generator(1).pow(7);
        let c = b7.concat(&crate::chains::Word::generator(0)).concat(&b7.inverse());
        let sub = rho.restrict(&[crate::chains::Word::generator(0), c]).unwrap();
        certify_schottky(&sub).unwrap().verify().unwrap();
    }

    #[test]
    fn forged_disc_is_rejected() {
        let rep = h_alpha_beta(101.0.into(), 101.0.into()).unwrap();
        let mut cert = certify_schottky(&rep).unwrap();
        cert.witnesses.discs[0].attracting.radius *= 2.0;
        assert!(cert.verify().is_err());
    }
}
