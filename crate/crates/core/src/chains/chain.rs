use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};

use super::word::{Substitution, Word};
use crate::error::{Error, Result};

/// Chain coefficients: exact rationals or reals.
pub trait Coefficient:
    Clone + PartialEq + PartialOrd + Signed + ToPrimitive + Debug + Display + FromStr + Send + Sync + 'static
{
}

impl Coefficient for f64 {}
impl Coefficient for Rational64 {}

/// The class of `(g0, .., gk)` modulo left translation, stored through its
/// representative `(id, w1, .., wk)`; only `w1..wk` are kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Word>);

impl Simplex {
    /// Simplex with vertices `(id, w1, .., wk)`.
    pub fn new(words: Vec<Word>) -> Self {
        Simplex(words)
    }

    /// Normalizes an arbitrary tuple `(g0, .., gk)` to `(id, g0^-1 g1, ..)`.
    pub fn from_vertices(vertices: &[Word]) -> Self {
        let base = vertices[0].inverse();
        Simplex(vertices[1..].iter().map(|w| base.concat(w)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    /// Vertex list `(id, w1, .., wk)`.
    pub fn vertices(&self) -> Vec<Word> {
        std::iter::once(Word::identity()).chain(self.0.iter().cloned()).collect()
    }

    /// The `i`-th face, renormalized.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.vertices();
        v.remove(i);
        Simplex::from_vertices(&v)
    }
}

/// A finite formal combination of simplices of a fixed degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupChain<C> {
    degree: usize,
    terms: BTreeMap<Simplex, C>,
}

impl<C: Coefficient> GroupChain<C> {
    pub fn zero(degree: usize) -> Self {
        GroupChain { degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Simplex, C)>) -> Result<Self> {
        let mut z = Self::zero(degree);
        for (s, c) in terms {
            z.add_term(s, c)?;
        }
        Ok(z)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `coef * simplex`, merging with an existing term and dropping zeros.
    pub fn add_term(&mut self, simplex: Simplex, coef: C) -> Result<()> {
        if simplex.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: simplex.degree() });
        }
        if coef.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&simplex) {
            Some(old) => {
                let sum = old + coef;
                if !sum.is_zero() {
                    self.terms.insert(simplex, sum);
                }
            }
            None => {
                self.terms.insert(simplex, coef);
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &Simplex) -> Option<&C> {
        self.terms.get(s)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum |a_i|`.
    pub fn norm_l1(&self) -> C {
        self.terms.values().fold(C::zero(), |acc, c| acc + c.abs())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, c) in &self.terms {
            let _ = out.add_term(s.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.degree != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    /// Alternating sum of faces.
    pub fn boundary(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let mut out = Self::zero(self.degree - 1);
        for (s, c) in &self.terms {
            for i in 0..=self.degree {
                let coef = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_term(s.face(i), coef)?;
            }
        }
        Ok(out)
    }

    /// Image under the homomorphism given by `phi`.
    pub fn pushforward(&self, phi: &Substitution) -> Result<Self> {
        let mut out = Self::zero(self.degree);
        for (s, c) in &self.terms {
            let words = s.words().iter().map(|w| phi.apply(w)).collect::<Result<Vec<_>>>()?;
            out.add_term(Simplex::new(words), c.clone())?;
        }
        Ok(out)
    }

    /// Smallest free rank containing every word of the chain.
    pub fn min_rank(&self) -> usize {
        self.terms.keys().flat_map(|s| s.words().iter().map(Word::min_rank)).max().unwrap_or(0)
    }

    /// Converts coefficients to `f64`.
    pub fn to_real(&self) -> GroupChain<f64> {
        GroupChain {
            degree: self.degree,
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c.to_f64().unwrap_or(f64::NAN))).collect(),
        }
    }
}

pub type RealChain = GroupChain<f64>;
pub type RationalChain = GroupChain<Rational64>;
