//! Plain-text chain files.
//!
//! ```text
//! # hypvol chain degree=2
//! 1; a; ab
//! -1/2; b; 1
//! ```
//!
//! Each data line is `coefficient; w1; ..; wk` for the simplex
//! `(id, w1, .., wk)`. Lines starting with `#` other than the header are
//! ignored, as are blank lines.

use std::fmt::Write as _;

use super::chain::{Coefficient, GroupChain, Simplex};
use super::word::Word;
use crate::error::{Error, Result};

const HEADER: &str = "# hypvol chain degree=";

pub fn write_chain<C: Coefficient>(z: &GroupChain<C>) -> String {
    let mut out = format!("{HEADER}{}\n", z.degree());
    for (s, c) in z.terms() {
        let _ = write!(out, "{c}");
        for w in s.words() {
            let _ = write!(out, "; {w}");
        }
        out.push('\n');
    }
    out
}

pub fn read_chain<C: Coefficient>(text: &str) -> Result<GroupChain<C>> {
    let mut degree = None;
    let mut chain: Option<GroupChain<C>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix(HEADER) {
            let k = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse { line: lineno, msg: format!("bad degree: {e}") })?;
            if degree.is_some() {
                return Err(Error::Parse { line: lineno, msg: "duplicate header".into() });
            }
            degree = Some(k);
            chain = Some(GroupChain::zero(k));
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let z = chain.as_mut().ok_or(Error::Parse { line: lineno, msg: "data before header".into() })?;
        let mut fields = line.split(';').map(str::trim);
        let coef_text = fields.next().unwrap_or("");
        let coef = coef_text
            .parse::<C>()
            .map_err(|_| Error::Parse { line: lineno, msg: format!("bad coefficient {coef_text:?}") })?;
        let words = fields
            .map(|f| f.parse::<Word>().map_err(|e| Error::Parse { line: lineno, msg: e.to_string() }))
            .collect::<Result<Vec<_>>>()?;
        z.add_term(Simplex::new(words), coef)
            .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
    }
    chain.ok_or(Error::Parse { line: 0, msg: "missing header".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain::{RationalChain, RealChain};
    use num_rational::Rational64;

    #[test]
    fn round_trip() {
        let text = "# hypvol chain degree=2\n# comment\n\n1; a; ab\n-1/2; b; 1\n";
        let z: RationalChain = read_chain(text).unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z.norm_l1(), Rational64::new(3, 2));
        let again: RationalChain = read_chain(&write_chain(&z)).unwrap();
        assert_eq!(again, z);

        let r = RealChain::from_terms(1, [(Simplex::new(vec!["aB".parse().unwrap()]), 0.1 + 0.2)]).unwrap();
        assert_eq!(read_chain::<f64>(&write_chain(&r)).unwrap(), r);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "# hypvol chain degree=2\n1; a; ab\nx; a; b\n";
        assert!(matches!(read_chain::<Rational64>(bad), Err(Error::Parse { line: 3, .. })));
        let bad = "# hypvol chain degree=2\n1; a\n";
        assert!(matches!(read_chain::<Rational64>(bad), Err(Error::Parse { line: 2, .. })));
        let bad = "1; a\n";
        assert!(matches!(read_chain::<Rational64>(bad), Err(Error::Parse { line: 1, .. })));
        let bad = "# hypvol chain degree=1\n1; a7\n";
        assert!(matches!(read_chain::<Rational64>(bad), Err(Error::Parse { line: 2, .. })));
    }
}
