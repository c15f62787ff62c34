use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use magica_core::compalg::AlgebraTag;
use magica_core::context::AlgebraContext;
use magica_core::exactnum::ScalarSampler;
use magica_core::freudenthal::FtsVector;
use magica_core::jet::CertMode;
use magica_core::strata::{classify_detailed, sample_stratum, StratumLabel};
use magica_core::tancone::{hessian_profile, polar_cone_at_x0};
use magica_core::verify::{
    all_passed, calibration_record, run_verify, AlgebraReport, AlgebraSelection, Mode, OutputFormat, RunConfig,
    Status, GRID_BUDGET,
};
use magica_core::Error;

#[derive(Parser)]
#[command(name = "magica", version, about = "Exact checks on the Freudenthal quartic and its orbit strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// 1, 2, 4, 8 or all (all = 1, 2, 4; adds 8 with --include-slow)
    #[arg(long, default_value = "all")]
    algebra: String,
    #[arg(long, env = "MAGICA_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Randomized)]
    mode: ModeArg,
    /// Include the octonion algebra in `all` and its Lie closure checks
    #[arg(long)]
    include_slow: bool,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Randomized,
    Grid,
}

#[derive(Copy, Clone, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Calibrate the invariant quartic
    Calibrate(Common),
    /// Run the full verification report
    Verify {
        #[command(flatten)]
        common: Common,
        /// Add one to calibrated coefficient I (0-based) before checking
        #[arg(long, value_name = "I")]
        perturb_coeff: Option<usize>,
        /// Run only these check ids; a trailing dot selects a group, e.g. strata.
        #[arg(long, value_name = "ID", value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Classify a point read as JSON from a file or stdin
    Classify {
        #[command(flatten)]
        common: Common,
        /// Point file; stdin when absent or "-"
        #[arg(long)]
        point: Option<String>,
    },
    /// Draw random points of a stratum
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Multiplicity and Hessian profile of the quartic at a point
    TangentCone {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        point: Option<String>,
    },
    /// Leading forms of the polar cubic and of f at x0
    Polar {
        #[command(flatten)]
        common: Common,
        /// Direction p as a point file; random with nonzero beta when absent
        #[arg(long)]
        p: Option<String>,
    },
}

/// Exit status 2: bad usage or input.
struct Usage(String);

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn config(c: &Common) -> Result<RunConfig, Usage> {
    let algebra: AlgebraSelection = c.algebra.parse().map_err(|e: Error| Usage(e.to_string()))?;
    Ok(RunConfig {
        algebra,
        seed: c.seed,
        trials: c.trials as usize,
        mode: match c.mode {
            ModeArg::Randomized => Mode::Randomized,
            ModeArg::Grid => Mode::Grid,
        },
        include_slow: c.include_slow,
        output: match c.output {
            OutputArg::Json => OutputFormat::Json,
            OutputArg::Text => OutputFormat::Text,
        },
        perturb_coeff: None,
        only: Vec::new(),
    })
}

fn cert_mode(cfg: &RunConfig) -> CertMode {
    match cfg.mode {
        Mode::Randomized => CertMode::Randomized { trials: cfg.trials },
        Mode::Grid => CertMode::Grid { budget: GRID_BUDGET },
    }
}

fn read_text(path: Option<&str>) -> Result<String, Usage> {
    let mut text = String::new();
    match path {
        None | Some("-") => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => std::fs::read_to_string(p).map(|t| text = t),
    }
    .map_err(|e| Usage(format!("cannot read point: {e}")))?;
    Ok(text)
}

fn check_tag(x: &FtsVector, cfg: &RunConfig) -> Result<(), Usage> {
    if let AlgebraSelection::One(t) = cfg.algebra {
        if t != x.tag() {
            return Err(Usage(format!("point has algebra {} but --algebra is {}", x.tag().dim(), t.dim())));
        }
    }
    Ok(())
}

fn read_point(path: Option<&str>, cfg: &RunConfig) -> Result<FtsVector, Usage> {
    let x: FtsVector =
        serde_json::from_str(&read_text(path)?).map_err(|e| Usage(format!("malformed point: {e}")))?;
    check_tag(&x, cfg)?;
    Ok(x)
}

/// A single point, or an array of points as printed by `sample`.
fn read_points(path: Option<&str>, cfg: &RunConfig) -> Result<(Vec<FtsVector>, bool), Usage> {
    let v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| Usage(format!("malformed point: {e}")))?;
    let many = v.is_array();
    let items = if many { v.as_array().cloned().unwrap_or_default() } else { vec![v] };
    let pts = items
        .into_iter()
        .map(|p| serde_json::from_value::<FtsVector>(p).map_err(|e| Usage(format!("malformed point: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(x) = pts.iter().find(|x| x.tag() != pts[0].tag()) {
        return Err(Usage(format!("mixed algebras in input ({} and {})", pts[0].tag().dim(), x.tag().dim())));
    }
    for x in &pts {
        check_tag(x, cfg)?;
    }
    Ok((pts, many))
}

/// The single algebra a command acts on.
fn single_algebra(cfg: &RunConfig) -> Result<AlgebraTag, Usage> {
    match cfg.algebra {
        AlgebraSelection::One(t) => Ok(t),
        AlgebraSelection::All => Err(Usage("this command needs --algebra 1, 2, 4 or 8".into())),
    }
}

fn emit(cfg: &RunConfig, v: &Value, text: impl FnOnce() -> String) {
    let body = match cfg.output {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("json")),
        OutputFormat::Text => text(),
    };
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn report_text(reports: &[AlgebraReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let coeffs: Vec<String> = r.calibration.coeffs.iter().map(ToString::to_string).collect();
        s += &format!("algebra {}: coeffs [{}], flip sign {:+}\n", r.algebra, coeffs.join(", "), r.calibration.flip_sign);
        for c in &r.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            s += &format!("  {tag} {} ({} samples, seed {}): {}\n", c.id, c.samples, c.seed, c.observed);
        }
    }
    s
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Calibrate(common) => {
            let cfg = config(&common)?;
            let mut out = Vec::new();
            for tag in cfg.algebras() {
                let ctx = AlgebraContext::new(tag, cfg.seed)?;
                out.push(json!({ "algebra": tag.dim(), "calibration": calibration_record(&ctx) }));
            }
            let v = Value::Array(out);
            emit(&cfg, &v, || {
                v.as_array()
                    .unwrap()
                    .iter()
                    .map(|r| format!("algebra {}: {}\n", r["algebra"], r["calibration"]))
                    .collect()
            });
            Ok(true)
        }
        Command::Verify { common, perturb_coeff, only } => {
            let mut cfg = config(&common)?;
            if perturb_coeff.is_some_and(|i| i >= 6) {
                return Err(Failure::Usage("--perturb-coeff must be below 6".into()));
            }
            cfg.perturb_coeff = perturb_coeff;
            cfg.only = only;
            let reports = run_verify(&cfg).map_err(|e| match e {
                Error::Parse(m) => Failure::Usage(m),
                e => e.into(),
            })?;
            let v = serde_json::to_value(&reports).expect("json");
            emit(&cfg, &v, || report_text(&reports));
            Ok(all_passed(&reports))
        }
        Command::Classify { common, point } => {
            let cfg = config(&common)?;
            let (pts, many) = read_points(point.as_deref(), &cfg)?;
            let Some(first) = pts.first() else {
                return Err(Usage("no points given".into()).into());
            };
            let ctx = AlgebraContext::new(first.tag(), cfg.seed)?;
            let mut out = Vec::with_capacity(pts.len());
            let mut lines = String::new();
            for x in &pts {
                let d = classify_detailed(ctx.coeffs(), x)?;
                let mut v = json!({
                    "algebra": x.tag().dim(),
                    "label": d.label,
                    "q_value": d.q_value,
                    "gradient_zero": d.gradient_zero,
                });
                if let Some(r) = d.hessian_rank {
                    v["hessian_rank"] = json!(r);
                    v["kernel_dim"] = json!(FtsVector::coord_dim(x.tag()) - r);
                }
                lines.push_str(&format!("{} (Q = {})\n", d.label.name(), d.q_value));
                out.push(v);
            }
            let v = if many { Value::Array(out) } else { out.pop().expect("one point") };
            emit(&cfg, &v, || lines);
            Ok(true)
        }
        Command::Sample { common, label, count } => {
            let cfg = config(&common)?;
            let tag = single_algebra(&cfg)?;
            let label: StratumLabel = label.parse().map_err(|e: Error| Usage(e.to_string()))?;
            let ctx = AlgebraContext::new(tag, cfg.seed)?;
            let pts = (0..count as u64)
                .map(|i| sample_stratum(&ctx, label, cfg.seed.wrapping_add(i)))
                .collect::<Result<Vec<_>, _>>()?;
            let v = serde_json::to_value(&pts).expect("json");
            emit(&cfg, &v, || pts.iter().map(|p| format!("{}\n", serde_json::to_string(p).unwrap())).collect());
            Ok(true)
        }
        Command::TangentCone { common, point } => {
            let cfg = config(&common)?;
            let x = read_point(point.as_deref(), &cfg)?;
            let ctx = AlgebraContext::new(x.tag(), cfg.seed)?;
            let mut rng = ScalarSampler::new(cfg.seed, 3);
            let prof = hessian_profile(ctx.coeffs(), &x, cert_mode(&cfg), &mut rng)?;
            let v = serde_json::to_value(prof).expect("json");
            emit(&cfg, &v, || {
                format!("multiplicity {}, hessian rank {}, kernel {}\n", prof.multiplicity, prof.hessian_rank, prof.kernel_dim)
            });
            Ok(true)
        }
        Command::Polar { common, p } => {
            let cfg = config(&common)?;
            let mut rng = ScalarSampler::new(cfg.seed, 3);
            let p = match p {
                Some(path) => read_point(Some(&path), &cfg)?,
                None => {
                    let tag = single_algebra(&cfg)?;
                    let mut p = FtsVector::random_int(tag, &mut rng);
                    p.beta = rng.nonzero_gauss_int();
                    p
                }
            };
            let ctx = AlgebraContext::new(p.tag(), cfg.seed)?;
            let r = polar_cone_at_x0(ctx.coeffs(), &p, cert_mode(&cfg), &mut rng)?;
            let v = json!({ "algebra": p.tag().dim(), "p": p, "passed": r.passed(), "report": r });
            emit(&cfg, &v, || {
                let names: Vec<&str> = r.failures().iter().map(|(n, _)| *n).collect();
                if names.is_empty() {
                    "all polar checks pass\n".to_string()
                } else {
                    format!("failed: {}\n", names.join(", "))
                }
            });
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
