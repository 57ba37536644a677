//! Command-line front end. Every run prints one JSON document holding the
//! full configuration and the result; floats carry 17 significant digits.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::approx::{approximate_element, transfer_chain, ApproxRequest, Metric, SearchBudget, TransferConfig};
use crate::chains::{read_chain, write_chain, Cocycle, RationalChain, Word};
use crate::checks::{borel_check, cocycle_check};
use crate::error::{Error, Result};
use crate::pipeline::{seminorm_bound, surface_chain_rooted, FamilyItem, ItemSource};
use crate::representations::{
    certify_dense, certify_dense_psl2r, certify_schottky, dense_psl2r, exponent_windows_hold, find_exponents,
    fuchsian_surface_rep, h_alpha_beta, h_alpha_beta_log, rho_theta, DensitySearch, Mu3,
};
use crate::volume::{H2Vertex, V3};
use crate::{H2Point, H3Point, Isometry, Representation, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hypvol", version, about = "Hyperbolic volume cocycles, certificates and chain transfer")]
pub struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, env = "HYPVOL_SEED", default_value_t = 42, global = true)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Borel cocycle of Veronese flags against the scaled ideal volume.
    BorelCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Cocycle identity of the volume cocycle and dilogarithm identities.
    CocycleCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Fan chain of the genus-g surface and its evaluation.
    SurfaceChain {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Cyclic rotation of the relator used as the fan root.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Write the chain in text format.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Search a density certificate.
    CertifyDense {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, default_value_t = 0.104)]
        mu: f64,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 200_000)]
        max_words: usize,
    },
    /// Build a ping-pong certificate.
    CertifySchottky {
        #[command(flatten)]
        rep: RepArgs,
    },
    /// Exponents placing rotations in the required windows.
    FindExponents {
        #[arg(long, value_delimiter = ',', default_values_t = [2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0])]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        tau0: f64,
        #[arg(long, default_value_t = 10_000_000)]
        scan_bound: u64,
    },
    /// Approximate a real isometry by a word in the dense pair.
    Approximate {
        #[command(flatten)]
        dense: DenseArgs,
        /// Target rotation angle about i (ignored when --target is given).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        target_rotation: f64,
        /// Target as a real matrix `a,b,c,d`.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        target: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Transfer a surface chain into the dense pair.
    Transfer {
        #[command(flatten)]
        dense: DenseArgs,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Input chain file; defaults to the surface chain.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0.125)]
        initial_tolerance: f64,
        #[arg(long, default_value_t = 8)]
        max_retries: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Per-chain seminorm lower bounds over a genus family.
    SeminormBound {
        #[arg(long, value_enum, default_value_t = BoundFamily::Fuchsian)]
        family: BoundFamily,
        #[arg(long, default_value_t = 2)]
        genus_min: usize,
        #[arg(long, default_value_t = 10)]
        genus_max: usize,
        #[command(flatten)]
        dense: DenseArgs,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[command(flatten)]
        search: SearchArgs,
        /// Also write `parameter,value,norm,...` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `diag(alpha, 1/alpha)` and the hyperbolic-cosine matrix of beta.
    HAlphaBeta,
    /// As above with `alpha = exp(a)`, `beta = exp(b)`.
    HAlphaBetaLog,
    /// Loxodromic `r + i t` and elliptic of angle `2 pi theta`.
    RhoTheta,
    /// Translation by `ell` and rotation by `pi q` in the plane.
    Psl2r,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    /// Each genus under its own Fuchsian representation.
    Fuchsian,
    /// Each genus transferred into the dense pair.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricArg {
    Displacement,
    Operator,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RepArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Complex number as `re`, `re,im` or `modulus@argument`.
    #[arg(long, value_parser = parse_complex)]
    pub alpha: Option<Complex64>,
    #[arg(long, value_parser = parse_complex)]
    pub beta: Option<Complex64>,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t: f64,
    #[arg(long, default_value_t = 2f64.sqrt() - 1.0)]
    pub theta: f64,
    /// Replace the second generator `b` by `b^n a b^-n`.
    #[arg(long)]
    pub conjugate_power: Option<i64>,
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    #[arg(long, default_value_t = 2f64.sqrt())]
    pub q: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DenseArgs {
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    #[arg(long, default_value_t = 2f64.sqrt())]
    pub q: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 4)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 40)]
    pub max_power: u32,
    #[arg(long, default_value_t = 400_000)]
    pub max_nodes: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Displacement)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

impl SearchArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget { max_power: self.max_power, max_depth: self.max_depth, max_nodes: self.max_nodes, neighbours: 4 }
    }

    fn metric(&self) -> Metric {
        match self.metric {
            MetricArg::Displacement => Metric::Displacement { radius: self.radius },
            MetricArg::Operator => Metric::OperatorNorm,
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((m, a)) = s.split_once('@') {
        Ok(Complex64::from_polar(num(m)?, num(a)?))
    } else if let Some((re, im)) = s.split_once(',') {
        Ok(Complex64::new(num(re)?, num(im)?))
    } else {
        Ok(Complex64::new(num(s)?, 0.0))
    }
}

fn build_rep(args: &RepArgs, default: Family) -> Result<Representation> {
    let family = args.family.unwrap_or(default);
    let rep = match family {
        Family::HAlphaBeta => {
            h_alpha_beta(args.alpha.unwrap_or(101.0.into()), args.beta.unwrap_or(101.0.into()))?
        }
        Family::HAlphaBetaLog => h_alpha_beta_log(
            args.alpha.unwrap_or(Complex64::from_polar(0.05, std::f64::consts::PI / 5.0)),
            args.beta.unwrap_or(0.05.into()),
        )?,
        Family::RhoTheta => rho_theta(args.r, args.t, args.theta)?,
        Family::Psl2r => dense_psl2r(args.ell, args.q)?,
    };
    match args.conjugate_power {
        None => Ok(rep),
        Some(n) => {
            let bn = Word::generator(1).pow(n);
            let c = bn.concat(&Word::generator(0)).concat(&bn.inverse());
            rep.restrict(&[Word::generator(0), c])
        }
    }
}

fn vol2() -> Cocycle {
    Cocycle::Vol2 { basepoint: H2Vertex::Finite(H2Point::i()) }
}

struct Outcome {
    status: &'static str,
    code: i32,
    result: serde_json::Value,
}

fn pass_if(ok: bool, result: serde_json::Value) -> Outcome {
    if ok {
        Outcome { status: "pass", code: EXIT_OK, result }
    } else {
        Outcome { status: "fail", code: EXIT_CHECK_FAILED, result }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::BorelCheck { n, samples, tol } => {
            let r = borel_check(*n, *samples, cli.seed)?;
            let ok = r.max_pullback_residual < *tol
                && r.multi_index_count == n * (n * n - 1) / 6
                && r.max_abs_value <= r.sup_bound + 1e-9;
            Ok(pass_if(ok, to_value(&r)?))
        }
        Command::CocycleCheck { samples, tol } => {
            let r = cocycle_check(*samples, cli.seed);
            let ok = r.max_coboundary < *tol && (r.d_regular - V3).abs() < 1e-9 && r.max_five_term < 1e-10 && r.max_symmetry < 1e-10;
            Ok(pass_if(ok, to_value(&r)?))
        }
        Command::SurfaceChain { genus, root, emit } => {
            let fa = surface_chain_rooted(*genus, *root)?;
            let (rep, _) = fuchsian_surface_rep(*genus)?;
            let value = crate::chains::evaluate(&vol2(), &rep, &fa.chain)?;
            let norm = fa.chain.norm_l1();
            let bnorm = fa.boundary_norm()?;
            if let Some(p) = emit {
                write_file(p, &write_chain(&fa.chain))?;
            }
            let expected = 4.0 * std::f64::consts::PI * (*genus as f64 - 1.0);
            let ok = *norm.numer() == 4 * *genus as i64 - 2 && *norm.denom() == 1 && bnorm <= fa.bound && (value - expected).abs() < 1e-9;
            let n = *norm.numer() as f64 / *norm.denom() as f64;
            Ok(pass_if(
                ok,
                json!({
                    "genus": genus,
                    "simplices": fa.chain.len(),
                    "norm": norm.to_string(),
                    "boundary_norm": bnorm.to_string(),
                    "bound": fa.bound.to_string(),
                    "evaluation": value,
                    "expected": expected,
                    "efficiency": value / n,
                }),
            ))
        }
        Command::CertifyDense { rep, mu, max_len, max_words } => {
            let family = rep.family.unwrap_or(Family::HAlphaBetaLog);
            let r = build_rep(rep, Family::HAlphaBetaLog)?;
            let cert = if family == Family::Psl2r && rep.conjugate_power.is_none() {
                to_value(&certify_dense_psl2r(&r, rep.q)?)?
            } else {
                let search = DensitySearch { max_len: *max_len, max_words: *max_words };
                let c = certify_dense(&r, &H3Point::origin(), Mu3::new(*mu)?, search)?;
                c.verify()?;
                to_value(&c)?
            };
            Ok(Outcome { status: "certified", code: EXIT_OK, result: cert })
        }
        Command::CertifySchottky { rep } => {
            let c = certify_schottky(&build_rep(rep, Family::HAlphaBeta)?)?;
            Ok(Outcome { status: "certified", code: EXIT_OK, result: to_value(&c)? })
        }
        Command::FindExponents { theta, tau0, scan_bound } => {
            let ns = find_exponents(theta, *tau0, *scan_bound)?;
            let checks: Vec<bool> = ns.iter().enumerate().map(|(i, &n)| exponent_windows_hold(theta, *tau0, i, n)).collect();
            let minimal: Vec<bool> =
                ns.iter().enumerate().map(|(i, &n)| n == 1 || !exponent_windows_hold(theta, *tau0, i, n - 1)).collect();
            let ok = checks.iter().all(|&b| b) && minimal.iter().all(|&b| b);
            Ok(pass_if(ok, json!({ "exponents": ns, "windows_hold": checks, "previous_fails": minimal })))
        }
        Command::Approximate { dense, target_rotation, target, eps, search } => {
            let rep = dense_psl2r(dense.ell, dense.q)?;
            let t = match target {
                Some(m) => Isometry::from_real(m[0], m[1], m[2], m[3])?,
                None => Isometry::rotation_about_i(*target_rotation),
            };
            let req = ApproxRequest { rep, eps: *eps, metric: search.metric(), budget: search.budget(), seed: cli.seed };
            let a = approximate_element(&req, &t)?;
            let len = a.word.parse::<Word>()?.len();
            Ok(Outcome { status: "pass", code: EXIT_OK, result: json!({ "approximation": a, "word_length": len }) })
        }
        Command::Transfer { dense, genus, chain, emit, eps, initial_tolerance, max_retries, search } => {
            let (rep0, _) = fuchsian_surface_rep(*genus)?;
            let z: RationalChain = match chain {
                Some(p) => read_chain(
                    &std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))?,
                )?,
                None => surface_chain_rooted(*genus, 0)?.chain,
            };
            let rep = dense_psl2r(dense.ell, dense.q)?;
            let cfg = TransferConfig {
                eps: *eps,
                initial_tolerance: *initial_tolerance,
                max_retries: *max_retries,
                metric: search.metric(),
                budget: search.budget(),
            };
            let (ze, report) = transfer_chain(&rep0, &z, &vol2(), &rep, &cfg)?;
            if let Some(p) = emit {
                write_file(p, &write_chain(&ze))?;
            }
            Ok(pass_if(report.norms_contract && report.deviation < *eps, to_value(&report)?))
        }
        Command::SeminormBound { family, genus_min, genus_max, dense, eps, search, csv } => {
            if genus_min < &2 || genus_max < genus_min {
                return Err(Error::InvalidInput("need 2 <= genus-min <= genus-max".into()));
            }
            let cfg = TransferConfig { eps: *eps, metric: search.metric(), budget: search.budget(), ..TransferConfig::default() };
            let dense_rep = dense_psl2r(dense.ell, dense.q)?;
            let items = (*genus_min..=*genus_max)
                .map(|g| {
                    let (rep0, _) = fuchsian_surface_rep(g)?;
                    let chain = surface_chain_rooted(g, 0)?.chain;
                    let source = match family {
                        BoundFamily::Fuchsian => ItemSource::Own { rep: rep0 },
                        BoundFamily::Dense => ItemSource::Transfer { rep0 },
                    };
                    Ok(FamilyItem { parameter: g as u64, chain, source })
                })
                .collect::<Result<Vec<_>>>()?;
            let name = match family {
                BoundFamily::Fuchsian => "fuchsian surface representations".to_string(),
                BoundFamily::Dense => format!("dense pair ell={} q={}", dense.ell, dense.q),
            };
            let r = seminorm_bound(&vol2(), &dense_rep, &name, &items, &cfg)?;
            if let Some(p) = csv {
                write_file(p, &r.to_csv())?;
            }
            let ok = r.items.iter().all(|c| c.error.is_none() && c.recheck());
            Ok(pass_if(ok, to_value(&r)?))
        }
    }
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::NotFound(_) => ("not-found", EXIT_NOT_FOUND),
        Error::DiscsOverlap { .. } => ("discs-overlap", EXIT_NOT_FOUND),
        Error::BudgetExceeded { .. } => ("budget-exceeded", EXIT_BUDGET),
        _ => ("invalid-input", EXIT_INVALID),
    }
}

/// JSON formatter printing every float with 17 significant digits.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        write!(w, "{:.16e}", v as f64)
    }
}

/// Serializes with [`Sig17`] floats.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    v.serialize(&mut ser).expect("serializable");
    String::from_utf8(buf).expect("utf-8")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::BorelCheck { .. } => "borel-check",
        Command::CocycleCheck { .. } => "cocycle-check",
        Command::SurfaceChain { .. } => "surface-chain",
        Command::CertifyDense { .. } => "certify-dense",
        Command::CertifySchottky { .. } => "certify-schottky",
        Command::FindExponents { .. } => "find-exponents",
        Command::Approximate { .. } => "approximate",
        Command::Transfer { .. } => "transfer",
        Command::SeminormBound { .. } => "seminorm-bound",
    }
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::InvalidInput(e.to_string())),
        },
        None => execute(&cli),
    };
    let (body, code) = match outcome {
        Ok(o) => (
            json!({
                "schema_version": SCHEMA_VERSION,
                "command": command_name(&cli.command),
                "config": cli,
                "status": o.status,
                "result": o.result,
            }),
            o.code,
        ),
        Err(e) => {
            let (kind, code) = error_kind(&e);
            let diag = json!({ "error": kind, "message": e.to_string() });
            eprintln!("{}", to_json(&diag));
            (
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_name(&cli.command),
                    "config": cli,
                    "status": kind,
                    "error": diag,
                }),
                code,
            )
        }
    };
    let text = to_json(&body) + "\n";
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return EXIT_INVALID;
            }
        }
        None => {
            let _ = io::stdout().lock().write_all(text.as_bytes());
        }
    }
    code
}
