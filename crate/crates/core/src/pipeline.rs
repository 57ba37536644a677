//! Surface free-approximation chains and per-chain seminorm lower bounds.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{transfer_chain, TransferConfig, TransferReport};
use crate::chains::{evaluate, Cocycle, RationalChain, Simplex, Word};
use crate::error::{Error, Result};
use crate::representations::{surface_relator, Inequality};
use crate::{Representation, SCHEMA_VERSION};

/// A chain over a free group together with the bound `K` on its boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeApproximation {
    pub rank: usize,
    /// What the free generators map to.
    pub target: String,
    pub chain: RationalChain,
    pub bound: Rational64,
}

impl FreeApproximation {
    pub fn boundary_norm(&self) -> Result<Rational64> {
        Ok(self.chain.boundary()?.norm_l1())
    }
}

/// Fan triangulation of the `4g`-gon from the vertex at angle 0, rooted at
/// the `root`-th cyclic rotation of the surface relator.
pub fn surface_chain_rooted(g: usize, root: usize) -> Result<FreeApproximation> {
    if g < 2 {
        return Err(Error::InvalidInput(format!("genus must be at least 2, got {g}")));
    }
    let rel = surface_relator(g).letters().to_vec();
    let n = rel.len();
    let letters: Vec<i32> = (0..n).map(|k| rel[(k + root) % n]).collect();
    // Vertices of the polygon: prefixes of the relator.
    let mut prefixes = vec![Word::identity()];
    for &l in &letters {
        let w = prefixes.last().expect("non-empty").concat(&Word::from_letters([l])?);
        prefixes.push(w);
    }
    let mut chain = RationalChain::zero(2);
    let minus = Rational64::from(-1);
    for k in 1..n - 1 {
        // Side k is read forward when its letter is a generator, backward
        // for an inverse, so that paired sides cancel in the boundary.
        let (s, c) = if letters[k] > 0 {
            (Simplex::new(vec![prefixes[k].clone(), prefixes[k + 1].clone()]), Rational64::from(1))
        } else {
            (Simplex::new(vec![prefixes[k + 1].clone(), prefixes[k].clone()]), minus)
        };
        // Prefix order traverses the polygon clockwise.
        chain.add_term(s, c * minus)?;
    }
    Ok(FreeApproximation {
        rank: 2 * g,
        target: format!("fundamental group of the closed genus-{g} surface"),
        chain,
        bound: Rational64::from(2),
    })
}

pub fn surface_chain(g: usize) -> Result<FreeApproximation> {
    surface_chain_rooted(g, 0)
}

/// How a family item is evaluated.
#[derive(Debug, Clone)]
pub enum ItemSource {
    /// Evaluate directly under the target representation.
    Direct,
    /// Evaluate directly under the item's own representation, for families
    /// whose groups vary with the parameter.
    Own { rep: Representation },
    /// Transfer from `rep0` into the target representation first.
    Transfer { rep0: Representation },
}

#[derive(Debug, Clone)]
pub struct FamilyItem {
    pub parameter: u64,
    pub chain: RationalChain,
    pub source: ItemSource,
}

/// The exact inequality for one chain: for every bounded cochain `b` of one
/// degree less, `|f + db| >= value / norm - |b| * boundary_norm / norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainBound {
    pub parameter: u64,
    pub value: f64,
    pub reference_value: Option<f64>,
    pub deviation: f64,
    pub norm: f64,
    pub boundary_norm: f64,
    pub ratio: f64,
    pub boundary_ratio: f64,
    pub bound: f64,
    pub inequalities: Vec<Inequality>,
    pub tag: String,
    pub transfer: Option<TransferReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormLowerBound {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub kind: String,
    pub cocycle: String,
    pub representation: String,
    pub items: Vec<ChainBound>,
    /// Minimum of the per-chain bounds over the successful items.
    pub headline: f64,
    pub boundary_ratios: Vec<f64>,
    pub statement: String,
    pub limit_claim: String,
}

impl ChainBound {
    fn failed(parameter: u64, e: &Error) -> Self {
        ChainBound {
            parameter,
            value: f64::NAN,
            reference_value: None,
            deviation: f64::NAN,
            norm: f64::NAN,
            boundary_norm: f64::NAN,
            ratio: f64::NAN,
            boundary_ratio: f64::NAN,
            bound: f64::NAN,
            inequalities: vec![],
            tag: "failed".into(),
            transfer: None,
            error: Some(e.to_string()),
        }
    }

    /// Recomputes ratios and the inequality records from the raw fields.
    pub fn recheck(&self) -> bool {
        if self.error.is_some() {
            return true;
        }
        let ratio = self.value / self.norm;
        let bratio = self.boundary_norm / self.norm;
        let reference = self.reference_value.unwrap_or(self.value);
        let bound = (reference.abs() - self.deviation) / self.norm;
        ratio == self.ratio
            && bratio == self.boundary_ratio
            && bound == self.bound
            && bound <= self.value.abs() / self.norm
            && self.inequalities.iter().all(Inequality::holds)
    }
}

fn rational_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn evaluate_item(cocycle: &Cocycle, rep: &Representation, item: &FamilyItem, cfg: &TransferConfig) -> Result<ChainBound> {
    let (chain, value, reference, deviation, transfer) = match &item.source {
        ItemSource::Direct => {
            let v = evaluate(cocycle, rep, &item.chain)?;
            (item.chain.clone(), v, None, 0.0, None)
        }
        ItemSource::Own { rep } => {
            let v = evaluate(cocycle, rep, &item.chain)?;
            (item.chain.clone(), v, None, 0.0, None)
        }
        ItemSource::Transfer { rep0 } => {
            let (ze, report) = transfer_chain(rep0, &item.chain, cocycle, rep, cfg)?;
            // Re-evaluate rather than trusting the report.
            let v = evaluate(cocycle, rep, &ze)?;
            let v0 = evaluate(cocycle, rep0, &item.chain)?;
            let dev = (v0 - v).abs();
            (ze, v, Some(v0), dev, Some(report))
        }
    };
    let norm = rational_f64(chain.norm_l1());
    if norm == 0.0 {
        return Err(Error::InvalidInput("chain of norm zero".into()));
    }
    let boundary_norm = rational_f64(chain.boundary()?.norm_l1());
    let reference_abs = reference.unwrap_or(value).abs();
    let bound = (reference_abs - deviation) / norm;
    let mut inequalities = vec![Inequality::less("|value| <= sup * norm", value.abs(), cocycle.sup_bound() * norm * (1.0 + 1e-12))];
    if let Some(r) = &transfer {
        inequalities.push(Inequality::less("deviation < eps", deviation, r.eps));
    }
    Ok(ChainBound {
        parameter: item.parameter,
        value,
        reference_value: reference,
        deviation,
        norm,
        boundary_norm,
        ratio: value / norm,
        boundary_ratio: boundary_norm / norm,
        bound,
        inequalities,
        tag: "machine-checked".into(),
        transfer,
        error: None,
    })
}

/// Per-chain lower bounds for `|rho^* f + db|` over a family of chains.
pub fn seminorm_bound(
    cocycle: &Cocycle,
    rep: &Representation,
    representation: &str,
    family: &[FamilyItem],
    cfg: &TransferConfig,
) -> Result<SeminormLowerBound> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let items: Vec<ChainBound> = family
        .par_iter()
        .map(|it| evaluate_item(cocycle, rep, it, cfg).unwrap_or_else(|e| ChainBound::failed(it.parameter, &e)))
        .collect();
    let ok: Vec<&ChainBound> = items.iter().filter(|c| c.error.is_none()).collect();
    let headline = ok.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
    Ok(SeminormLowerBound {
        schema_version: SCHEMA_VERSION,
        kind: "seminorm-lower-bound".into(),
        cocycle: cocycle.name().into(),
        representation: representation.into(),
        boundary_ratios: ok.iter().map(|c| c.boundary_ratio).collect(),
        headline: if ok.is_empty() { f64::NAN } else { headline },
        items,
        statement: "for every bounded cochain b of one degree less and every listed chain Z: \
                    |rho^* f + db|_inf >= bound(Z) - |b|_inf * boundary_ratio(Z)"
            .into(),
        limit_claim: "family extrapolation: if boundary_ratio tends to 0 along the family, the seminorm of the \
                      class is at least the limit inferior of the bounds; not certified by a finite computation"
            .into(),
    })
}

impl SeminormLowerBound {
    /// CSV rows `parameter,value,norm,ratio` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,value,norm,boundary_norm,ratio,bound\n");
        for c in &self.items {
            out.push_str(&format!(
                "{},{:.17e},{},{},{:.17e},{:.17e}\n",
                c.parameter, c.value, c.norm, c.boundary_norm, c.ratio, c.bound
            ));
        }
        out
    }
}
