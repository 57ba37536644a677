use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::chain::{Coefficient, GroupChain};
use super::word::Word;
use crate::borel::{borel_cocycle, borel_multiplicity, veronese_flag, veronese_matrix, Flag};
use crate::error::{Error, Result};
use crate::isometry::ProjectiveIsometry;
use crate::scalar::Real;
use crate::volume::{vol2_cocycle, vol3_cocycle, H2Vertex, V3};
use crate::{BoundaryPoint, Isometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
}

/// A homomorphism from the free group of rank `d` into PSL(2,C), given by
/// the images of the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeRepresentation<T> {
    generators: Vec<ProjectiveIsometry<T>>,
    field: FieldTag,
}

impl<T: Real> FreeRepresentation<T> {
    /// A representation tagged real must have real generator matrices.
    pub fn new(generators: Vec<ProjectiveIsometry<T>>, field: FieldTag) -> Result<Self> {
        if field == FieldTag::Real {
            for g in &generators {
                g.real_entries()?;
            }
        }
        Ok(FreeRepresentation { generators, field })
    }

    /// Tags the representation real when every generator is real.
    pub fn detect(generators: Vec<ProjectiveIsometry<T>>) -> Self {
        let field = if generators.iter().all(|g| g.real_entries().is_ok()) { FieldTag::Real } else { FieldTag::Complex };
        FreeRepresentation { generators, field }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn generators(&self) -> &[ProjectiveIsometry<T>] {
        &self.generators
    }

    fn letter(&self, l: i32) -> Result<ProjectiveIsometry<T>> {
        let idx = l.unsigned_abs() as usize - 1;
        let g = self.generators.get(idx).ok_or(Error::RankMismatch { index: idx, rank: self.rank() })?;
        Ok(if l > 0 { *g } else { g.inverse() })
    }

    /// Image of a word, multiplied left to right.
    pub fn eval(&self, w: &Word) -> Result<ProjectiveIsometry<T>> {
        w.letters().iter().try_fold(ProjectiveIsometry::identity(), |acc, &l| Ok(acc.compose(&self.letter(l)?)))
    }

    /// Image of a word, multiplied right to left; an independent path for re-verification.
    pub fn eval_rtl(&self, w: &Word) -> Result<ProjectiveIsometry<T>> {
        w.letters().iter().rev().try_fold(ProjectiveIsometry::identity(), |acc, &l| Ok(self.letter(l)?.compose(&acc)))
    }

    /// Restriction to the subgroup generated by `words`.
    pub fn restrict(&self, words: &[Word]) -> Result<Self> {
        let gens = words.iter().map(|w| self.eval(w)).collect::<Result<Vec<_>>>()?;
        Ok(FreeRepresentation { generators: gens, field: self.field })
    }
}

/// A bounded cocycle that can be evaluated on chains through a representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Cocycle {
    /// Signed volume of ideal orbit tetrahedra.
    Vol3 { basepoint: BoundaryPoint },
    /// Signed area of orbit triangles; the representation must be real.
    Vol2 { basepoint: H2Vertex<f64> },
    /// Borel cocycle of the Veronese flags of the orbit of an ideal point,
    /// pushed through the irreducible representation into PSL(n,C).
    Borel { n: usize, basepoint: BoundaryPoint },
}

impl Cocycle {
    pub fn degree(&self) -> usize {
        match self {
            Cocycle::Vol2 { .. } => 2,
            _ => 3,
        }
    }

    /// Sup norm of the cochain.
    pub fn sup_bound(&self) -> f64 {
        match self {
            Cocycle::Vol3 { .. } => V3,
            Cocycle::Vol2 { .. } => std::f64::consts::PI,
            Cocycle::Borel { n, .. } => borel_multiplicity(*n) as f64 * V3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Cocycle::Vol3 { .. } => "vol3",
            Cocycle::Vol2 { .. } => "vol2",
            Cocycle::Borel { .. } => "borel",
        }
    }

    /// Value on the simplex with vertex images `g`.
    pub fn value(&self, g: &[Isometry]) -> Result<f64> {
        if g.len() != self.degree() + 1 {
            return Err(Error::DegreeMismatch { expected: self.degree() + 1, found: g.len() });
        }
        match self {
            Cocycle::Vol3 { basepoint } => Ok(vol3_cocycle(basepoint, [&g[0], &g[1], &g[2], &g[3]])),
            Cocycle::Vol2 { basepoint } => vol2_cocycle(basepoint, [&g[0], &g[1], &g[2]]),
            Cocycle::Borel { n, basepoint } => {
                let base = veronese_flag(*n, basepoint)?;
                let flags = g.iter().map(|h| base.transform(&veronese_matrix(*n, h)?)).collect::<Result<Vec<Flag>>>()?;
                borel_cocycle([&flags[0], &flags[1], &flags[2], &flags[3]])
            }
        }
    }
}

/// Compensated (Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// `rho^* B (Z) = sum_j a_j B(id, rho(w1^j), .., rho(wk^j))`.
pub fn evaluate<C: Coefficient>(cocycle: &Cocycle, rep: &FreeRepresentation<f64>, z: &GroupChain<C>) -> Result<f64> {
    if z.degree() != cocycle.degree() {
        return Err(Error::DegreeMismatch { expected: cocycle.degree(), found: z.degree() });
    }
    let mut cache: HashMap<&Word, Isometry> = HashMap::new();
    let mut acc = KahanSum::default();
    for (s, c) in z.terms() {
        let mut imgs = Vec::with_capacity(s.degree() + 1);
        imgs.push(Isometry::identity());
        for w in s.words() {
            let g = match cache.get(w) {
                Some(g) => *g,
                None => {
                    let g = rep.eval(w)?;
                    cache.insert(w, g);
                    g
                }
            };
            imgs.push(g);
        }
        let coef = c.to_f64().ok_or_else(|| Error::InvalidInput("coefficient not representable".into()))?;
        acc.add(coef * cocycle.value(&imgs)?);
    }
    Ok(acc.value())
}

/// Largest discrepancy between left-to-right and right-to-left evaluation of `w`.
pub fn evaluation_discrepancy(rep: &FreeRepresentation<f64>, w: &Word) -> Result<f64> {
    Ok(rep.eval(w)?.distance(&rep.eval_rtl(w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain::{RealChain, Simplex};
    use num_complex::Complex64;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn rep() -> FreeRepresentation<f64> {
        let a = Isometry::from_matrix(
            Complex64::new(1.0, 0.5),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.3, 0.1),
            Complex64::new(1.2, -0.4),
        )
        .unwrap();
        let b = Isometry::diagonal(Complex64::new(1.5, 0.7)).unwrap();
        FreeRepresentation::new(vec![a, b], FieldTag::Complex).unwrap()
    }

    #[test]
    fn word_eval_examples() {
        let r = rep();
        assert!(r.eval(&Word::identity()).unwrap().approx_eq(&Isometry::identity(), 1e-15));
        let x = w("abAb");
        let xx = Word::from_letters(x.letters().iter().copied().chain(x.inverse().letters().iter().copied())).unwrap();
        assert!(r.eval(&xx).unwrap().approx_eq(&Isometry::identity(), 1e-12));
        assert!(r.eval(&w("b")).unwrap().approx_eq(&r.generators()[1], 1e-15));
        assert!(evaluation_discrepancy(&r, &w("abbaBAb")).unwrap() < 1e-10);
        assert!(r.eval(&w("c")).is_err());
    }

    #[test]
    fn real_tag_is_checked() {
        let r = rep();
        assert_eq!(FreeRepresentation::new(r.generators().to_vec(), FieldTag::Real), Err(Error::NotReal));
    }

    #[test]
    fn evaluate_zero_and_coincident() {
        let r = rep();
        let c = Cocycle::Vol3 { basepoint: BoundaryPoint::finite(Complex64::new(0.3, 0.4)) };
        assert_eq!(evaluate(&c, &r, &RealChain::zero(3)).unwrap(), 0.0);
        let s = Simplex::new(vec![Word::identity(), w("a"), w("a")]);
        let z = RealChain::from_terms(3, [(s, 1.0)]).unwrap();
        assert_eq!(evaluate(&c, &r, &z).unwrap(), 0.0);
        assert!(evaluate(&c, &r, &RealChain::zero(2)).is_err());
    }
}
