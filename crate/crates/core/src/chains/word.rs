use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest rank expressible in the letter notation `a..z` / `A..Z`.
pub const MAX_RANK: usize = 26;

/// A freely reduced word in a free group. Letters are signed generator
/// indices: `+(i + 1)` is the `i`-th generator, `-(i + 1)` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The `index`-th generator (zero-based).
    pub fn generator(index: usize) -> Self {
        Word(vec![index as i32 + 1])
    }

    /// Reduces an arbitrary letter sequence. Zero letters are rejected.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Result<Self> {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            if l == 0 {
                return Err(Error::InvalidInput("letter 0 is not a generator".into()));
            }
            push_reduced(&mut out, l);
        }
        Ok(Word(out))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// `self^n`.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    /// One more than the largest generator index used; 0 for the identity.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            let idx = (l.unsigned_abs() - 1) as u8;
            let ch = if l > 0 { b'a' + idx } else { b'A' + idx };
            write!(f, "{}", ch as char)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses `1` (identity) or a string over `a..z` (generators) and `A..Z`
    /// (inverses). The result is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::identity());
        }
        if s.is_empty() {
            return Err(Error::InvalidInput("empty word; write 1 for the identity".into()));
        }
        let letters = s
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok(c as i32 - 'a' as i32 + 1),
                'A'..='Z' => Ok(-(c as i32 - 'A' as i32 + 1)),
                _ => Err(Error::InvalidInput(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(letters)
    }
}

/// A homomorphism between free groups given by the images of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(images: Vec<Word>) -> Self {
        Substitution { images }
    }

    pub fn identity(rank: usize) -> Self {
        Substitution { images: (0..rank).map(Word::generator).collect() }
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Word::identity();
        for &l in w.letters() {
            let idx = l.unsigned_abs() as usize - 1;
            let img = self.images.get(idx).ok_or(Error::RankMismatch { index: idx, rank: self.images.len() })?;
            out = if l > 0 { out.concat(img) } else { out.concat(&img.inverse()) };
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let w: Word = "abBA".parse().unwrap();
        assert!(w.is_identity());
        let w: Word = "abC".parse().unwrap();
        assert!(w.concat(&w.inverse()).is_identity());
        assert_eq!(w.to_string(), "abC");
        assert_eq!(Word::identity().to_string(), "1");
        assert_eq!("1".parse::<Word>().unwrap(), Word::identity());
        assert!("a1".parse::<Word>().is_err());
        assert_eq!("ab".parse::<Word>().unwrap().pow(-2).to_string(), "BABA");
    }

    #[test]
    fn substitution_applies_images() {
        let phi = Substitution::new(vec!["ab".parse().unwrap(), "B".parse().unwrap()]);
        let w: Word = "abA".parse().unwrap();
        assert_eq!(phi.apply(&w).unwrap().to_string(), "aBA");
        assert!(phi.apply(&"c".parse().unwrap()).is_err());
    }
}
