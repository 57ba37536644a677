use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check, raw_generators, Inequality, Mu3};
use crate::chains::{FieldTag, Word};
use crate::error::{Error, Result};
use crate::isometry::{is_elementary_pair, is_elementary_pair_real, Elementarity, IsometryClass};
use crate::{H3Point, Isometry, Representation, SCHEMA_VERSION};

/// Bounds on the word enumeration of [`certify_dense`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensitySearch {
    pub max_len: usize,
    pub max_words: usize,
}

impl Default for DensitySearch {
    fn default() -> Self {
        DensitySearch { max_len: 6, max_words: 200_000 }
    }
}

/// Non-trivial reduced words of length at most `max_len` in shortlex order
/// over the letters `a, A, b, B, ..`, truncated to `max_words`.
pub fn enumerate_words(rank: usize, max_len: usize, max_words: usize) -> Vec<Word> {
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    let mut layer = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.letters().last() == Some(&-l) {
                    continue;
                }
                if out.len() + next.len() >= max_words {
                    out.extend(next);
                    return out;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::from_letters(v).expect("nonzero letters"));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityParameters {
    pub generators: Vec<Isometry>,
    pub basepoint: H3Point,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityWitnesses {
    pub g: String,
    pub h: String,
    pub elementarity: Elementarity,
}

/// Two words moving the basepoint by less than the Margulis constant and
/// generating a non-elementary group. Such a group is not discrete, and a
/// non-elementary indiscrete subgroup of PSL(2,C) is dense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub kind: String,
    pub parameters: DensityParameters,
    pub witnesses: DensityWitnesses,
    pub inequalities: Vec<Inequality>,
    pub assumptions: Vec<String>,
}

fn rebuild(gens: &[Isometry]) -> Result<Representation> {
    Ok(Representation::detect(raw_generators(gens)?))
}

fn trace_invariants(g: &Isometry, h: &Isometry) -> [Complex64; 3] {
    let (tg, th) = (g.trace(), h.trace());
    [tg * tg, th * th, tg * th * g.compose(h).trace()]
}

fn density_inequalities(g: &Isometry, h: &Isometry, x: &H3Point, mu: f64) -> Vec<Inequality> {
    let comm = g.compose(h).compose(&g.inverse()).compose(&h.inverse());
    let im = trace_invariants(g, h).iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    vec![
        Inequality::less("d(x, g x) < mu", x.dist(&g.apply_h3(x)), mu),
        Inequality::less("d(x, h x) < mu", x.dist(&h.apply_h3(x)), mu),
        Inequality::less("tol < |[g, h] - id|", 1e-9, comm.identity_distance()),
        Inequality::less("tol < max |Im trace invariant|", 1e-9, im),
    ]
}

impl DensityCertificate {
    /// Recomputes every inequality and the elementarity report from the raw matrices.
    pub fn verify(&self) -> Result<()> {
        check(self.kind == "density", "type")?;
        let rep = rebuild(&self.parameters.generators)?;
        let g = rep.eval(&self.witnesses.g.parse()?)?;
        let h = rep.eval(&self.witnesses.h.parse()?)?;
        let x = &self.parameters.basepoint;
        let ineq = density_inequalities(&g, &h, x, self.parameters.mu);
        check(ineq.iter().all(Inequality::holds), "inequality")?;
        check(is_elementary_pair(&g, &h) == Elementarity::NonElementary, "elementarity")?;
        check(ineq.len() == self.inequalities.len(), "inequality count")?;
        for (a, b) in ineq.iter().zip(&self.inequalities) {
            check((a.lhs - b.lhs).abs() <= 1e-12 * (1.0 + a.lhs.abs()), &a.name)?;
        }
        Ok(())
    }
}

/// Searches shortlex-ordered words for the least pair certifying density.
pub fn certify_dense(rep: &Representation, x: &H3Point, mu: Mu3, search: DensitySearch) -> Result<DensityCertificate> {
    let words = enumerate_words(rep.rank(), search.max_len, search.max_words);
    let images: Vec<Option<Isometry>> = words
        .par_iter()
        .map(|w| {
            let g = rep.eval(w).ok()?;
            (x.dist(&g.apply_h3(x)) < mu.value()).then_some(g)
        })
        .collect();
    let short: Vec<(usize, Isometry)> = images.into_iter().enumerate().filter_map(|(i, g)| g.map(|g| (i, g))).collect();
    let mut rejects = std::collections::BTreeSet::new();
    for (j, (wj, gj)) in short.iter().enumerate() {
        for (wi, gi) in &short[..j] {
            let e = is_elementary_pair(gi, gj);
            if e != Elementarity::NonElementary {
                rejects.insert(format!("{e:?}"));
                continue;
            }
            let ineq = density_inequalities(gi, gj, x, mu.value());
            if !ineq.iter().all(Inequality::holds) {
                continue;
            }
            return Ok(DensityCertificate {
                schema_version: SCHEMA_VERSION,
                kind: "density".into(),
                parameters: DensityParameters { generators: rep.generators().to_vec(), basepoint: *x, mu: mu.value() },
                witnesses: DensityWitnesses { g: words[*wi].to_string(), h: words[*wj].to_string(), elementarity: e },
                inequalities: ineq,
                assumptions: vec![
                    format!("the 3-dimensional Margulis constant is at least {}", mu.value()),
                    "a non-elementary indiscrete subgroup of PSL(2,C) is dense".into(),
                ],
            });
        }
    }
    let seen: Vec<String> = rejects.into_iter().collect();
    Err(Error::NotFound(format!("{} short words; elementary pairs: {}", short.len(), seen.join(", "))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDensityParameters {
    pub generators: Vec<Isometry>,
    pub rotation_over_pi: f64,
}

/// Density in PSL(2,R) of a pair whose second generator is an elliptic of
/// irrational rotation (so the closure holds a full rotation group) and
/// which fixes no point, geodesic or ideal point of the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDensityCertificate {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub kind: String,
    pub parameters: RealDensityParameters,
    pub witnesses: DensityWitnesses,
    pub inequalities: Vec<Inequality>,
    pub assumptions: Vec<String>,
}

fn real_density_inequalities(a: &Isometry, b: &Isometry) -> Vec<Inequality> {
    let comm = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
    vec![
        Inequality::less("|tr b| < 2", b.trace().norm(), 2.0),
        Inequality::less("tol < |[a, b] - id|", 1e-9, comm.identity_distance()),
    ]
}

impl RealDensityCertificate {
    pub fn verify(&self) -> Result<()> {
        check(self.kind == "density-psl2r", "type")?;
        let rep = rebuild(&self.parameters.generators)?;
        check(rep.field() == FieldTag::Real && rep.rank() == 2, "real pair")?;
        let (a, b) = (rep.generators()[0], rep.generators()[1]);
        check(real_density_inequalities(&a, &b).iter().all(Inequality::holds), "inequality")?;
        check(is_elementary_pair_real(&a, &b) == Elementarity::NonElementary, "elementarity")?;
        if let IsometryClass::Elliptic { angle } = b.classify()? {
            let q = self.parameters.rotation_over_pi;
            let d = crate::isometry::wrap_angle(angle - std::f64::consts::PI * q).abs();
            let d2 = crate::isometry::wrap_angle(angle + std::f64::consts::PI * q).abs();
            check(d.min(d2) < 1e-9, "rotation angle")
        } else {
            check(false, "second generator elliptic")
        }
    }
}

/// Certificate for a real pair `(a, b)` with `b` a rotation by `pi q`, `q` declared irrational.
pub fn certify_dense_psl2r(rep: &Representation, q: f64) -> Result<RealDensityCertificate> {
    if rep.field() != FieldTag::Real || rep.rank() != 2 {
        return Err(Error::InvalidInput("expected a real representation of rank 2".into()));
    }
    let (a, b) = (rep.generators()[0], rep.generators()[1]);
    let e = is_elementary_pair_real(&a, &b);
    let ineq = real_density_inequalities(&a, &b);
    if e != Elementarity::NonElementary || !ineq.iter().all(Inequality::holds) {
        return Err(Error::NotFound(format!("real pair is {e:?}")));
    }
    let cert = RealDensityCertificate {
        schema_version: SCHEMA_VERSION,
        kind: "density-psl2r".into(),
        parameters: RealDensityParameters { generators: rep.generators().to_vec(), rotation_over_pi: q },
        witnesses: DensityWitnesses { g: "a".into(), h: "b".into(), elementarity: e },
        inequalities: ineq,
        assumptions: vec![format!("rotation angle / pi = {q} is irrational (declared, not checked)")],
    };
    cert.verify()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::{dense_psl2r, fuchsian_surface_rep, h_alpha_beta_log};
    use std::f64::consts::PI;

    fn j() -> H3Point {
        H3Point::origin()
    }

    #[test]
    fn enumeration_is_shortlex() {
        let w = enumerate_words(2, 2, usize::MAX);
        assert_eq!(w.len(), 4 + 12);
        assert_eq!(w[0].to_string(), "a");
        assert_eq!(w[4].to_string(), "aa");
        assert_eq!(enumerate_words(2, 5, 7).len(), 7);
    }

    #[test]
    fn small_log_parameters_are_dense() {
        let rep = h_alpha_beta_log(Complex64::from_polar(0.05, PI / 5.0), 0.05.into()).unwrap();
        let cert = certify_dense(&rep, &j(), Mu3::default(), DensitySearch::default()).unwrap();
        assert_eq!((cert.witnesses.g.as_str(), cert.witnesses.h.as_str()), ("a", "b"));
        cert.verify().unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: DensityCertificate = serde_json::from_str(&json).unwrap();
        back.verify().unwrap();

        let mut forged = cert.clone();
        forged.parameters.mu = 0.01;
        assert!(forged.verify().is_err());
    }

    #[test]
    fn fuchsian_is_not_certified() {
        let (rep, _) = fuchsian_surface_rep(2).unwrap();
        let search = DensitySearch { max_len: 3, max_words: 10_000 };
        match certify_dense(&rep, &j(), Mu3::new(5.0).unwrap(), search) {
            Err(Error::NotFound(msg)) => assert!(msg.contains("InvariantPlane"), "{msg}"),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn real_dense_pair() {
        let rep = dense_psl2r(1.0, 2f64.sqrt()).unwrap();
        let cert = certify_dense_psl2r(&rep, 2f64.sqrt()).unwrap();
        cert.verify().unwrap();
        assert!(cert.assumptions[0].contains("irrational"));
    }
}
