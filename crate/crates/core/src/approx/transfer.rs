use serde::{Deserialize, Serialize};

use super::search::{Approximation, Approximator, Metric, SearchBudget};
use crate::chains::{evaluate, Coefficient, Cocycle, GroupChain, Substitution, Word};
use crate::error::{Error, Result};
use crate::{BoundaryPoint, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferConfig {
    /// Required bound on the change of the evaluation.
    pub eps: f64,
    /// Element tolerance of the first attempt; halved after each failure.
    pub initial_tolerance: f64,
    pub max_retries: usize,
    pub metric: Metric,
    pub budget: SearchBudget,
}

impl Default for TransferConfig {
    fn default() -> Self {
        TransferConfig {
            eps: 0.5,
            initial_tolerance: 0.125,
            max_retries: 8,
            metric: Metric::default(),
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainData {
    pub norm: f64,
    pub boundary_norm: f64,
    pub evaluation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub cocycle: String,
    pub eps: f64,
    pub input: ChainData,
    pub substitution: Vec<String>,
    pub element_errors: Vec<f64>,
    pub element_tolerance: f64,
    pub attempts: usize,
    pub output: ChainData,
    pub deviation: f64,
    /// `norm(Z(eps)) <= norm(Z)` and the same for boundaries, compared in
    /// the coefficient type.
    pub norms_contract: bool,
}

fn norm_f64<C: Coefficient>(c: C) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Checks that each simplex has pairwise distinct ideal orbit points.
fn check_distinct<C: Coefficient>(rep0: &Representation, z: &GroupChain<C>, x: &BoundaryPoint) -> Result<()> {
    for (s, _) in z.terms() {
        let pts = s.vertices().iter().map(|w| Ok(rep0.eval(w)?.apply_boundary(x))).collect::<Result<Vec<_>>>()?;
        for (j, p) in pts.iter().enumerate() {
            if pts[..j].iter().any(|q| q.chordal_distance(p) < 1e-9) {
                return Err(Error::InvalidInput(format!("simplex {:?} has coincident orbit points", s.words())));
            }
        }
    }
    Ok(())
}

/// Replaces each generator of the source group by a word in the dense
/// representation approximating its image, and checks a posteriori that
/// the evaluation moves by less than `eps`.
pub fn transfer_chain<C: Coefficient>(
    rep0: &Representation,
    z: &GroupChain<C>,
    cocycle: &Cocycle,
    rep: &Representation,
    cfg: &TransferConfig,
) -> Result<(GroupChain<C>, TransferReport)> {
    if !(cfg.eps > 0.0 && cfg.initial_tolerance > 0.0) {
        return Err(Error::InvalidInput("eps and initial tolerance must be positive".into()));
    }
    if z.min_rank() > rep0.rank() {
        return Err(Error::RankMismatch { index: z.min_rank() - 1, rank: rep0.rank() });
    }
    match cocycle {
        Cocycle::Vol3 { basepoint } | Cocycle::Borel { basepoint, .. } => check_distinct(rep0, z, basepoint)?,
        Cocycle::Vol2 { .. } => {}
    }
    let eval0 = evaluate(cocycle, rep0, z)?;
    let bz = z.boundary()?;
    let input = ChainData { norm: norm_f64(z.norm_l1()), boundary_norm: norm_f64(bz.norm_l1()), evaluation: eval0 };

    let mut search = Approximator::new(rep, cfg.metric, cfg.budget)?;
    let mut tol = cfg.initial_tolerance;
    let mut best_dev = f64::INFINITY;
    let mut last_words: Option<Vec<String>> = None;
    for attempt in 1..=cfg.max_retries + 1 {
        let mut found: Vec<Approximation> = Vec::with_capacity(rep0.rank());
        for target in rep0.generators() {
            let mut best = None;
            match search.approximate(target, tol, &mut best) {
                Ok(a) => found.push(a),
                Err(Error::BudgetExceeded { .. }) => found.push(best.ok_or(Error::BudgetExceeded { best: f64::INFINITY })?),
                Err(e) => return Err(e),
            }
        }
        let words: Vec<String> = found.iter().map(|a| a.word.clone()).collect();
        if last_words.as_ref() == Some(&words) {
            // The budget produced no better words; further halving cannot help.
            break;
        }
        let phi = Substitution::new(words.iter().map(|w| w.parse::<Word>()).collect::<Result<Vec<_>>>()?);
        let ze = z.pushforward(&phi)?;
        let eval = evaluate(cocycle, rep, &ze)?;
        let dev = (eval0 - eval).abs();
        best_dev = best_dev.min(dev);
        if dev < cfg.eps {
            let bze = ze.boundary()?;
            let norms_contract = ze.norm_l1() <= z.norm_l1() && bze.norm_l1() <= bz.norm_l1();
            let report = TransferReport {
                cocycle: cocycle.name().into(),
                eps: cfg.eps,
                input,
                substitution: words,
                element_errors: found.iter().map(|a| a.distance).collect(),
                element_tolerance: tol,
                attempts: attempt,
                output: ChainData { norm: norm_f64(ze.norm_l1()), boundary_norm: norm_f64(bze.norm_l1()), evaluation: eval },
                deviation: dev,
                norms_contract,
            };
            return Ok((ze, report));
        }
        last_words = Some(words);
        tol /= 2.0;
    }
    Err(Error::BudgetExceeded { best: best_dev })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{RationalChain, Simplex};
    use crate::representations::{dense_psl2r, h_alpha_beta};
    use num_complex::Complex64;
    use num_rational::Rational64;

    #[test]
    fn identity_transfer_has_zero_deviation() {
        let rep = h_alpha_beta(Complex64::new(1.5, 0.4), Complex64::new(0.3, 1.1)).unwrap();
        let w = |s: &str| s.parse::<Word>().unwrap();
        let z = RationalChain::from_terms(
            3,
            [
                (Simplex::new(vec![w("a"), w("b"), w("ab")]), Rational64::from(1)),
                (Simplex::new(vec![w("b"), w("ba"), w("aB")]), Rational64::new(-1, 2)),
            ],
        )
        .unwrap();
        let cocycle = Cocycle::Vol3 { basepoint: BoundaryPoint::finite(Complex64::new(0.2, 0.7)) };
        let cfg = TransferConfig { budget: SearchBudget { max_depth: 1, ..SearchBudget::default() }, ..Default::default() };
        let (ze, report) = transfer_chain(&rep, &z, &cocycle, &rep, &cfg).unwrap();
        assert_eq!(report.substitution, vec!["a", "b"]);
        assert_eq!(report.deviation, 0.0);
        assert_eq!(ze, z);
        assert!(report.norms_contract);
    }

    #[test]
    fn coincident_orbit_points_are_rejected() {
        let rep = dense_psl2r(1.0, 2f64.sqrt()).unwrap();
        let w = |s: &str| s.parse::<Word>().unwrap();
        let z = RationalChain::from_terms(3, [(Simplex::new(vec![w("a"), w("A"), w("b")]), Rational64::from(1))]).unwrap();
        // Infinity is fixed by a.
        let cocycle = Cocycle::Vol3 { basepoint: BoundaryPoint::infinity() };
        assert!(matches!(
            transfer_chain(&rep, &z, &cocycle, &rep, &TransferConfig::default()),
            Err(Error::InvalidInput(_))
        ));
    }
}
