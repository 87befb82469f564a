use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use spectral_rumin::carnot::library::builtin;
use spectral_rumin::carnot::{AlgebraError, FromJsonError};
use spectral_rumin::forms::{build_ce_complex, build_polynomial_complex};
use spectral_rumin::spectral::{LimitReport, PageReport};
use spectral_rumin::suites::{
    duality_suite, morphism_suite, pullback_suite, DualitySuite, MorphismSuite, PullbackSuite,
};
use spectral_rumin::{compute_pages, limit_page, GradedLieAlgebra, SpectralError, Tolerances};

const EXIT_INVALID: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_MALFORMED: u8 = 64;

#[derive(Parser)]
#[command(
    name = "spectral-rumin",
    version,
    about = "Spectral sequences of weight-filtered de Rham models on Carnot groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Root seed for every random stream.
    #[arg(long, global = true, env = "SPECTRAL_RUMIN_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Ce,
    Poly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Duality,
    Morphism,
    Pullback,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group description (JSON file or built-in name).
    GroupValidate { path: String },
    /// Spectral sequence of the weight filtration on a de Rham model.
    Ss {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Model::Ce)]
        model: Model,
        /// Coefficient weight bound of the polynomial model.
        #[arg(long, default_value_t = 1)]
        poly_weight: u32,
        /// Last page to compute; defaults to the filtration length plus one.
        #[arg(long)]
        max_page: Option<usize>,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        /// Residual tolerance of the pullback suite.
        #[arg(long)]
        tol: Option<f64>,
    },
}

/// A rendered report together with its exit status.
struct Outcome {
    json: serde_json::Value,
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_MALFORMED } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::GroupValidate { path } => group_validate(path, cli.seed),
        Command::Ss { group, model, poly_weight, max_page } => ss(group, *model, *poly_weight, *max_page, cli.seed),
        Command::Verify { suite, cases, tol } => verify(*suite, *cases, *tol, cli.seed),
    };
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("reports serialize") + "\n",
        Format::Text => outcome.text,
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return ExitCode::from(EXIT_INVALID);
    }
    ExitCode::from(outcome.code)
}

fn failure(command: &str, seed: u64, code: u8, message: String) -> Outcome {
    eprintln!("error: {message}");
    Outcome { json: json!({ "command": command, "seed": seed, "error": message }), text: String::new(), code }
}

enum LoadError {
    Malformed(String),
    Invalid(AlgebraError),
}

/// Reads a group from a JSON file, falling back to a built-in name.
fn load_group(arg: &str) -> Result<GradedLieAlgebra, LoadError> {
    let path = Path::new(arg);
    if !path.exists() {
        return builtin(arg).ok_or_else(|| LoadError::Malformed(format!("{arg}: no such file or built-in group")));
    }
    let s = std::fs::read_to_string(path).map_err(|e| LoadError::Malformed(format!("{arg}: {e}")))?;
    match GradedLieAlgebra::from_json_str(&s) {
        Ok(g) => Ok(g),
        Err(FromJsonError::Parse(e)) => Err(LoadError::Malformed(e)),
        Err(FromJsonError::Algebra(AlgebraError::Malformed(e))) => Err(LoadError::Malformed(e)),
        Err(FromJsonError::Algebra(e)) => Err(LoadError::Invalid(e)),
    }
}

fn group_validate(path: &str, seed: u64) -> Outcome {
    match load_group(path) {
        Ok(g) => Outcome {
            json: json!({
                "command": "group-validate",
                "seed": seed,
                "name": g.name(),
                "valid": true,
                "n": g.dim(),
                "nu": g.homogeneous_dim(),
                "layers": g.layer_dims(),
                "violations": [],
            }),
            text: format!(
                "{}: valid, n = {}, nu = {}, layers {:?}\n",
                g.name(),
                g.dim(),
                g.homogeneous_dim(),
                g.layer_dims()
            ),
            code: 0,
        },
        Err(LoadError::Malformed(e)) => {
            failure("group-validate", seed, EXIT_MALFORMED, format!("malformed input: {e}"))
        }
        Err(LoadError::Invalid(AlgebraError::Invalid(violations))) => {
            let mut text = format!("{path}: invalid\n");
            for v in &violations {
                let _ = writeln!(text, "  {v}");
            }
            Outcome {
                json: json!({ "command": "group-validate", "seed": seed, "valid": false, "violations": violations }),
                text,
                code: EXIT_INVALID,
            }
        }
        Err(LoadError::Invalid(e)) => failure("group-validate", seed, EXIT_MALFORMED, e.to_string()),
    }
}

#[derive(Serialize)]
struct SsReport<'a> {
    command: &'static str,
    seed: u64,
    group: &'a str,
    model: Model,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly_weight: Option<u32>,
    max_page: usize,
    dims: Vec<usize>,
    pages: Vec<PageReport>,
    limit: LimitReport,
    consistent: bool,
}

fn ss(group: &str, model: Model, d: u32, max_page: Option<usize>, seed: u64) -> Outcome {
    let g = match load_group(group) {
        Ok(g) => g,
        Err(LoadError::Malformed(e)) => return failure("ss", seed, EXIT_MALFORMED, format!("malformed input: {e}")),
        Err(LoadError::Invalid(e)) => return failure("ss", seed, EXIT_INVALID, e.to_string()),
    };
    let build = match model {
        Model::Ce => build_ce_complex(&g),
        Model::Poly => build_polynomial_complex(&g, d),
    };
    let fc = &build.complex;
    let r_max = max_page.unwrap_or((fc.p_max() - fc.p_min() + 2) as usize);
    let computed = compute_pages(fc, r_max).and_then(|ss| limit_page(&ss, fc).map(|lim| (ss, lim)));
    let (pages, limit) = match computed {
        Ok(x) => x,
        Err(e @ SpectralError::NonStabilized { .. }) => return failure("ss", seed, EXIT_INVALID, e.to_string()),
        Err(e) => return failure("ss", seed, EXIT_VERIFICATION, format!("invariant failure: {e}")),
    };
    let consistent = limit.converges() && limit.total_by_degree.iter().all(|(k, t)| limit.betti.get(k) == Some(t));
    let mut text =
        format!("{} {}", g.name(), if model == Model::Ce { "ce".to_string() } else { format!("poly D={d}") });
    let _ = writeln!(text, ", dims {:?}, seed {seed}", fc.dims());
    for r in 0..=r_max {
        text.push('\n');
        text.push_str(&pages.render_page(r));
    }
    let _ = writeln!(text, "\nstable from page {}", limit.stable_from);
    let _ = writeln!(text, "E_inf by degree {:?}", limit.total_by_degree.values().collect::<Vec<_>>());
    let _ = writeln!(text, "Betti numbers   {:?}", limit.betti.values().collect::<Vec<_>>());
    let _ = writeln!(text, "E_inf = gr H: {}", if consistent { "yes" } else { "NO" });
    let report = SsReport {
        command: "ss",
        seed,
        group: g.name(),
        model,
        poly_weight: (model == Model::Poly).then_some(d),
        max_page: r_max,
        dims: fc.dims().to_vec(),
        pages: pages.report(),
        limit,
        consistent,
    };
    Outcome {
        json: serde_json::to_value(&report).expect("reports serialize"),
        text,
        code: if consistent { 0 } else { EXIT_VERIFICATION },
    }
}

fn verify(suite: Suite, cases: usize, tol: Option<f64>, seed: u64) -> Outcome {
    let (json, text, pass) = match suite {
        Suite::Duality => {
            let s = duality_suite(seed, cases);
            (serde_json::to_value(&s), duality_text(&s), s.pass)
        }
        Suite::Morphism => {
            let s = morphism_suite(seed, cases);
            (serde_json::to_value(&s), morphism_text(&s), s.pass)
        }
        Suite::Pullback => {
            let mut t = Tolerances::default();
            if let Some(v) = tol {
                if v.is_nan() || v <= 0.0 {
                    return failure("verify", seed, EXIT_INVALID, format!("tolerance must be positive, got {v}"));
                }
                t.pass_residual = v;
            }
            let s = pullback_suite(seed, &t);
            (serde_json::to_value(&s), pullback_text(&s), s.pass)
        }
    };
    let mut text = text;
    let _ = writeln!(text, "{}", if pass { "PASS" } else { "FAIL" });
    Outcome { json: json.expect("reports serialize"), text, code: if pass { 0 } else { EXIT_VERIFICATION } }
}

fn duality_text(s: &DualitySuite) -> String {
    let mut t = format!("duality suite, seed {}, {} cases, pages 0..={}\n", s.seed, s.cases.len(), s.r_max);
    let _ = writeln!(t, "{:>4}  {:>5}  {:<16} {:>9}  {:>6}  result", "case", "coord", "dims", "p range", "blocks");
    for c in &s.cases {
        let _ = writeln!(
            t,
            "{:>4}  {:>5}  {:<16} {:>9}  {:>6}  {}",
            c.case,
            c.coordinate,
            format!("{:?}", c.dims),
            format!("{}..{}", c.filtration.0, c.filtration.1),
            c.cells,
            c.error.as_deref().unwrap_or("ok")
        );
    }
    t
}

fn morphism_text(s: &MorphismSuite) -> String {
    let mut t = format!("morphism suite on {}, seed {}, {} samples\n", s.instance, s.seed, s.cases.len());
    let _ = writeln!(
        t,
        "{:>20}  {:>5}  {:>8}  {:>5}  {:>9}  result",
        "sample seed", "chain", "identity", "pages", "transport"
    );
    for c in &s.cases {
        let _ = writeln!(
            t,
            "{:>20}  {:>5}  {:>8}  {:>5}  {:>9}  {}",
            c.sample_seed,
            c.is_chain_map,
            c.identity_holds,
            c.pages,
            c.transport_consistent,
            if c.pass { "ok" } else { "FAIL" }
        );
    }
    let _ = writeln!(t, "non-chain samples: {}", s.non_chain_maps);
    let nc = &s.negative_control;
    let _ = writeln!(
        t,
        "negative control seed {}: identity holds {}, certificate {}, first failure {:?}, transport consistent {} -> {}",
        nc.seed,
        nc.identity_holds,
        nc.certificate.as_ref().map_or("none".into(), |c| format!("k={} a={} r={} b={} value={}", c.k, c.a, c.r, c.b, c.value)),
        nc.failure,
        nc.transport_consistent,
        if nc.fails_as_required { "fails as required" } else { "DID NOT FAIL" }
    );
    t
}

fn pullback_text(s: &PullbackSuite) -> String {
    let mut t = format!(
        "pullback suite, seed {}, grids {}/{}, tolerance {:e}\n",
        s.seed, s.tolerances.grids.0, s.tolerances.grids.1, s.tolerances.pass_residual
    );
    let _ = writeln!(
        t,
        "{:<13} {:<8} {:<6} {:>11} {:>11} {:>6}  pass",
        "map", "omega", "eta", "residual 1", "residual 2", "order"
    );
    for r in s.shear.iter().chain(&s.baseline).chain(std::iter::once(&s.diagnostic)) {
        let _ = writeln!(
            t,
            "{:<13} {:<8} {:<6} {:>11.3e} {:>11.3e} {:>6}  {}",
            r.map,
            r.omega,
            r.eta,
            r.residuals[0],
            r.residuals[1],
            r.order.map_or("-".into(), |o| format!("{o:.2}")),
            r.pass.map_or("diagnostic", |p| if p { "yes" } else { "NO" })
        );
    }
    let _ = writeln!(t, "baseline x{} below tolerance: {}", s.tolerances.baseline_ratio, s.baseline_below_tolerance);
    t
}
