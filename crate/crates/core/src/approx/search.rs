use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kdtree::KdTree;
use crate::chains::Word;
use crate::error::{Error, Result};
use crate::isometry::IsometryClass;
use crate::{H3Point, Isometry, Representation};

/// Distance between isometries used by the word search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Metric {
    /// Largest displacement between the two images of four probe points:
    /// `(0, 1)`, and three points at distance `radius` from it in
    /// orthogonal directions.
    Displacement { radius: f64 },
    /// Frobenius norm of the difference of the matrices, minimized over sign.
    OperatorNorm,
}

impl Default for Metric {
    fn default() -> Self {
        Metric::Displacement { radius: 1.0 }
    }
}

const DIM: usize = 12;

impl Metric {
    fn probes(radius: f64) -> [H3Point; 4] {
        let p1 = H3Point { z: Complex64::new(0.0, 0.0), t: radius.exp() };
        let (s, c) = FRAC_PI_4.sin_cos();
        let rx = Isometry::new(c.into(), Complex64::new(0.0, s), Complex64::new(0.0, s), c.into()).expect("unit determinant");
        let ry = Isometry::rotation_about_i(std::f64::consts::FRAC_PI_2);
        [H3Point::origin(), p1, rx.apply_h3(&p1), ry.apply_h3(&p1)]
    }

    pub fn distance(&self, g: &Isometry, h: &Isometry) -> f64 {
        match *self {
            Metric::Displacement { radius } => Self::probes(radius)
                .iter()
                .map(|p| g.apply_h3(p).dist(&h.apply_h3(p)))
                .fold(0.0, f64::max),
            Metric::OperatorNorm => g.distance(h),
        }
    }

    /// Euclidean embedding whose nearest neighbours approximate the metric.
    fn feature(&self, g: &Isometry) -> [f64; DIM] {
        let mut f = [0.0; DIM];
        match *self {
            Metric::Displacement { radius } => {
                for (k, p) in Self::probes(radius).iter().enumerate() {
                    let q = g.apply_h3(p);
                    let den = q.z.norm_sqr() + (q.t + 1.0) * (q.t + 1.0);
                    f[3 * k] = 2.0 * q.z.re / den;
                    f[3 * k + 1] = 2.0 * q.z.im / den;
                    f[3 * k + 2] = (q.z.norm_sqr() + q.t * q.t - 1.0) / den;
                }
            }
            Metric::OperatorNorm => {
                // Sign-normalized entries; the canonical sign makes g and -g agree.
                for (k, e) in g.canonical().entries().iter().enumerate() {
                    f[2 * k] = e.re;
                    f[2 * k + 1] = e.im;
                }
            }
        }
        f
    }
}

/// Limits on the meet-in-the-middle search. Words are products of
/// syllables: a power `g^m` of one generator, `|m| <= max_power` for
/// elliptic generators and `|m| = 1` otherwise, with consecutive syllables
/// on different generators. Each half of a product has at most `max_depth`
/// syllables and each half-ball at most `max_nodes` words.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_power: u32,
    pub max_depth: usize,
    pub max_nodes: usize,
    pub neighbours: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_power: 40, max_depth: 4, max_nodes: 400_000, neighbours: 4 }
    }
}

/// A search request for a dense representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxRequest {
    pub rep: Representation,
    pub eps: f64,
    pub metric: Metric,
    pub budget: SearchBudget,
    pub seed: u64,
}

/// A found word with its verified distance to the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub word: String,
    pub distance: f64,
    pub depth: usize,
}

struct Ball {
    words: Vec<Word>,
    images: Vec<Isometry>,
    tree: KdTree<DIM>,
}

/// Reusable searcher holding the syllable balls built so far.
pub struct Approximator {
    rep: Representation,
    metric: Metric,
    budget: SearchBudget,
    syllables: Vec<(usize, Word, Isometry)>,
    balls: BTreeMap<usize, Ball>,
}

impl Approximator {
    pub fn new(rep: &Representation, metric: Metric, budget: SearchBudget) -> Result<Self> {
        if budget.max_depth == 0 || budget.neighbours == 0 {
            return Err(Error::InvalidInput("search depth and neighbour count must be positive".into()));
        }
        let mut syllables = Vec::new();
        for (i, g) in rep.generators().iter().enumerate() {
            let elliptic = matches!(g.classify(), Ok(IsometryClass::Elliptic { .. }));
            let top = if elliptic { budget.max_power.max(1) as i64 } else { 1 };
            for m in 1..=top {
                for s in [m, -m] {
                    syllables.push((i, Word::generator(i).pow(s), g.pow(s)));
                }
            }
        }
        Ok(Approximator { rep: rep.clone(), metric, budget, syllables, balls: BTreeMap::new() })
    }

    pub fn from_request(req: &ApproxRequest) -> Result<Self> {
        if !(req.eps > 0.0) {
            return Err(Error::InvalidInput(format!("eps must be positive, got {}", req.eps)));
        }
        Self::new(&req.rep, req.metric, req.budget)
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    fn ball(&mut self, depth: usize) -> Result<&Ball> {
        if !self.balls.contains_key(&depth) {
            let mut words = vec![Word::identity()];
            let mut images = vec![Isometry::identity()];
            let mut last: Vec<Option<usize>> = vec![None];
            let mut frontier = vec![0usize];
            for _ in 0..depth {
                let mut next = Vec::new();
                for &k in &frontier {
                    for (gen, w, g) in &self.syllables {
                        if last[k] == Some(*gen) {
                            continue;
                        }
                        if words.len() >= self.budget.max_nodes {
                            return Err(Error::BudgetExceeded { best: f64::INFINITY });
                        }
                        words.push(words[k].concat(w));
                        images.push(images[k].compose(g));
                        last.push(Some(*gen));
                        next.push(words.len() - 1);
                    }
                }
                frontier = next;
            }
            let metric = self.metric;
            let feats: Vec<[f64; DIM]> = images.par_iter().map(|g| metric.feature(g)).collect();
            self.balls.insert(depth, Ball { words, images, tree: KdTree::build(feats) });
        }
        Ok(&self.balls[&depth])
    }

    /// Best product `u v` over one ball depth; ties go to the shorter, then
    /// lexicographically smaller, word.
    fn best_at(&mut self, depth: usize, target: &Isometry) -> Result<Approximation> {
        let metric = self.metric;
        let k = self.budget.neighbours;
        let rep = self.rep.clone();
        let ball = self.ball(depth)?;
        let best = (0..ball.words.len())
            .into_par_iter()
            .map(|iu| {
                let want = ball.images[iu].inverse().compose(target);
                ball.tree
                    .nearest(&metric.feature(&want), k)
                    .into_iter()
                    .map(|(iv, _)| {
                        let w = ball.words[iu].concat(&ball.words[iv]);
                        let d = metric.distance(&ball.images[iu].compose(&ball.images[iv]), target);
                        (d, w)
                    })
                    .min_by(cmp_cand)
                    .expect("non-empty ball")
            })
            .min_by(cmp_cand)
            .expect("non-empty ball");
        // Re-evaluate the word itself, independently of the ball products.
        let g = rep.eval(&best.1)?;
        Ok(Approximation { word: best.1.to_string(), distance: metric.distance(&g, target), depth })
    }

    /// Searches increasing depths until the distance drops below `eps`.
    /// On failure returns `BudgetExceeded` with the best distance; the best
    /// approximation so far is also returned through `best_out`.
    pub fn approximate(&mut self, target: &Isometry, eps: f64, best_out: &mut Option<Approximation>) -> Result<Approximation> {
        for depth in 1..=self.budget.max_depth {
            let cand = match self.best_at(depth, target) {
                Ok(c) => c,
                Err(Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            };
            if best_out.as_ref().is_none_or(|b| cand.distance < b.distance) {
                *best_out = Some(cand.clone());
            }
            if cand.distance < eps {
                self.verify(&cand, target, eps)?;
                return Ok(cand);
            }
        }
        Err(Error::BudgetExceeded { best: best_out.as_ref().map_or(f64::INFINITY, |b| b.distance) })
    }

    /// Recomputes the distance with right-to-left evaluation.
    fn verify(&self, a: &Approximation, target: &Isometry, eps: f64) -> Result<()> {
        let g = self.rep.eval_rtl(&a.word.parse()?)?;
        let d = self.metric.distance(&g, target);
        if d < eps {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("word {} fails re-verification: {d:e}", a.word)))
        }
    }
}

fn cmp_cand(a: &(f64, Word), b: &(f64, Word)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1))
}

/// One-shot search for a single target.
pub fn approximate_element(req: &ApproxRequest, target: &Isometry) -> Result<Approximation> {
    let mut ap = Approximator::from_request(req)?;
    ap.approximate(target, req.eps, &mut None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representations::dense_psl2r;

    fn req(eps: f64) -> ApproxRequest {
        ApproxRequest {
            rep: dense_psl2r(1.0, 2f64.sqrt()).unwrap(),
            eps,
            metric: Metric::default(),
            budget: SearchBudget { max_power: 12, max_depth: 3, max_nodes: 100_000, neighbours: 4 },
            seed: 42,
        }
    }

    #[test]
    fn trivial_targets() {
        let r = req(1e-6);
        let a = approximate_element(&r, &r.rep.generators()[0]).unwrap();
        assert_eq!((a.word.as_str(), a.distance), ("a", 0.0));
        let id = approximate_element(&r, &Isometry::identity()).unwrap();
        assert_eq!((id.word.as_str(), id.distance), ("1", 0.0));
    }

    #[test]
    fn quarter_rotation_is_reached() {
        let r = req(0.2);
        let target = Isometry::rotation_about_i(std::f64::consts::FRAC_PI_2);
        let a = approximate_element(&r, &target).unwrap();
        assert!(a.distance < 0.2);
        let w: Word = a.word.parse().unwrap();
        assert!(w.len() <= 30, "{}", a.word);
        assert_eq!(approximate_element(&r, &target).unwrap(), a);
    }

    #[test]
    fn exhausted_budget_reports_best() {
        let mut r = req(1e-12);
        r.budget.max_depth = 1;
        let target = Isometry::rotation_about_i(1.0);
        match approximate_element(&r, &target) {
            Err(Error::BudgetExceeded { best }) => assert!(best.is_finite() && best > 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn metrics_vanish_on_equal_elements() {
        let g = Isometry::rotation_about_i(0.7);
        for m in [Metric::default(), Metric::OperatorNorm] {
            assert!(m.distance(&g, &g) < 1e-12);
            assert!(m.distance(&g, &Isometry::identity()) > 0.1);
        }
    }
}
