use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use lhv_cli::suites;
use lhv_core::algebra::Algebra;
use lhv_core::autos::{apply_automorphism, compose_params, extract_params, invert_params, isomorphism_by_scaling};
use lhv_core::bider::{check_biderivation, extract_inner_coefficient};
use lhv_core::config::AlgebraConfig;
use lhv_core::derivations::decompose_degree_zero;
use lhv_core::io;
use lhv_core::syntax::parse_expression;
use lhv_core::twolocal::{certify_two_local, WitnessSpace};

#[derive(Parser)]
#[command(name = "lhv", version, about = "Exact checks in the generalized loop Heisenberg-Virasoro algebra")]
struct Cli {
    /// Print only the JSON report, no summary on stderr
    #[arg(long, global = true)]
    json_only: bool,
    /// Include wall time in the JSON output
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression such as `[L(2;0), L(1;1)]`
    Bracket {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        expr: String,
    },
    /// Run a verification suite, or `all`
    Verify {
        suite: String,
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Derivation tables
    #[command(subcommand)]
    Derivation(DerivationCmd),
    /// Biderivation tables
    #[command(subcommand)]
    Bider(BiderCmd),
    /// Automorphisms given by (a, phi, chi, psi, b)
    #[command(subcommand)]
    Aut(AutCmd),
    /// Lattice scalings
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Maps given on finitely many samples
    #[command(subcommand)]
    Twolocal(TwoLocalCmd),
}

#[derive(Subcommand)]
enum DerivationCmd {
    /// Split a degree-zero table into the four families
    Decompose {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        table: PathBuf,
    },
}

#[derive(Subcommand)]
enum BiderCmd {
    /// Read lambda off a bilinear table with f = lambda [.,.]
    Extract {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        table: PathBuf,
    },
}

/// Parameter arguments take a JSON file or inline JSON.
#[derive(Subcommand)]
enum AutCmd {
    /// Parameters of first o second
    Compose {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Image of an expression
    Apply {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        params: String,
        #[arg(long)]
        expr: String,
    },
    /// Recover parameters from a basis table
    Extract {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        table: PathBuf,
    },
    Invert {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        params: String,
    },
}

#[derive(Subcommand)]
enum GammaCmd {
    /// Find a with a * other = gamma and check the induced isomorphism
    Scaling {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        other: PathBuf,
    },
}

#[derive(Subcommand)]
enum TwoLocalCmd {
    /// Find one derivation matching every sample
    Certify {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        table: PathBuf,
    },
}

/// Usage and input problems exit with 2, failed checks with 1.
enum Failure {
    Usage(String),
    Check(Value, String),
}

type Outcome = Result<(Value, String), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(c: &ConfigArg) -> Result<AlgebraConfig, Failure> {
    AlgebraConfig::load(&c.config).map_err(usage)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&src).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn json_arg(arg: &str) -> Result<Value, Failure> {
    if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(usage)
    } else {
        read_json(Path::new(arg))
    }
}

fn run(cmd: &Cmd) -> Outcome {
    match cmd {
        Cmd::Bracket { config, expr } => {
            let cfg = load(config)?;
            let x = parse_expression(&cfg.gamma, expr).map_err(usage)?;
            let text = x.to_string();
            Ok((json!({ "expr": expr, "result": io::element_to_json(&x), "text": text }), text))
        }
        Cmd::Verify { suite, config, seed } => {
            let cfg = load(config)?;
            let reports = suites::run(suite, &cfg, *seed).map_err(usage)?;
            let mut lines = Vec::new();
            for r in &reports {
                let status = if r.passed() { "pass" } else { "FAIL" };
                lines.push(format!("{status} {}", r.suite));
                for c in r.checks.iter().filter(|c| !c.passed) {
                    lines.push(format!("  failed check {}: {}", c.name, c.counterexample.clone().unwrap_or_default()));
                }
            }
            let passed = reports.iter().all(suites::Report::passed);
            let out = if suite == "all" {
                json!({
                    "suite": "all",
                    "seed": seed,
                    "passed": passed,
                    "reports": reports.iter().map(suites::Report::to_json).collect::<Vec<_>>(),
                })
            } else {
                reports[0].to_json()
            };
            if passed {
                Ok((out, lines.join("\n")))
            } else {
                Err(Failure::Check(out, lines.join("\n")))
            }
        }
        Cmd::Derivation(DerivationCmd::Decompose { config, table }) => {
            let cfg = load(config)?;
            let t = io::table_from_json(&read_json(table)?).map_err(usage)?;
            match decompose_degree_zero(&Algebra::new(cfg.gamma), &t) {
                Ok(d) => Ok((io::decomposition_to_json(&d), "decomposed with zero residual".into())),
                Err(e) => Err(Failure::Check(json!({ "error": e.to_string() }), e.to_string())),
            }
        }
        Cmd::Bider(BiderCmd::Extract { config, table }) => {
            let cfg = load(config)?;
            let alg = Algebra::new(cfg.gamma.clone());
            let f = io::bilinear_from_json(&read_json(table)?).map_err(usage)?;
            let bx = f.domain().clone();
            let report = check_biderivation(&alg, &f, &bx);
            match extract_inner_coefficient(&alg, &f, &bx, cfg.reference_pair.clone()) {
                Ok(l) => Ok((
                    json!({ "lambda": l.to_string(), "triples_checked": report.checked }),
                    format!("f = {l} [.,.]"),
                )),
                Err(e) => Err(Failure::Check(json!({ "error": e.to_string() }), e.to_string())),
            }
        }
        Cmd::Aut(a) => aut(a),
        Cmd::Gamma(GammaCmd::Scaling { config, other }) => {
            let cfg = load(config)?;
            let other = AlgebraConfig::load(other).map_err(usage)?;
            match isomorphism_by_scaling(&cfg.gamma, &other.gamma, &cfg.bx) {
                Some(iso) => {
                    let out = json!({
                        "a": iso.map.a.to_string(),
                        "pairs_checked": iso.pairs_checked,
                        "first_failure": iso.first_failure.as_ref().map(|(x, y)| [x.to_string(), y.to_string()]),
                    });
                    let text = format!("a = {}", iso.map.a);
                    if iso.first_failure.is_none() {
                        Ok((out, text))
                    } else {
                        Err(Failure::Check(out, text))
                    }
                }
                None => Err(Failure::Check(json!({ "a": null }), "no scaling relates the lattices".into())),
            }
        }
        Cmd::Twolocal(TwoLocalCmd::Certify { config, table }) => {
            let cfg = load(config)?;
            let alg = Algebra::new(cfg.gamma.clone());
            let delta = io::two_local_from_json(&read_json(table)?).map_err(usage)?;
            match certify_two_local(&alg, &delta, &cfg.bx, &WitnessSpace::for_box(&cfg.bx), cfg.anchors) {
                Ok(c) => {
                    let ok = c.residuals.iter().all(|r| r.is_zero());
                    let out = io::certificate_to_json(&c, &delta.samples);
                    let text = format!("certified {} samples", delta.len());
                    if ok {
                        Ok((out, text))
                    } else {
                        Err(Failure::Check(out, "nonzero residual".into()))
                    }
                }
                Err(e) => Err(Failure::Check(json!({ "error": e.to_string() }), e.to_string())),
            }
        }
    }
}

fn aut(cmd: &AutCmd) -> Outcome {
    let bad = |e: lhv_core::autos::AutError| usage(e);
    match cmd {
        AutCmd::Compose { config, first, second } => {
            let cfg = load(config)?;
            let p1 = io::params_from_json(&cfg.gamma, &json_arg(first)?).map_err(usage)?;
            let p2 = io::params_from_json(&cfg.gamma, &json_arg(second)?).map_err(usage)?;
            let p = compose_params(&cfg.gamma, &p1, &p2).map_err(bad)?;
            Ok((io::params_to_json(&p), "composed".into()))
        }
        AutCmd::Apply { config, params, expr } => {
            let cfg = load(config)?;
            let p = io::params_from_json(&cfg.gamma, &json_arg(params)?).map_err(usage)?;
            let x = parse_expression(&cfg.gamma, expr).map_err(usage)?;
            let y = apply_automorphism(&cfg.gamma, &p, &x).map_err(bad)?;
            let text = y.to_string();
            Ok((json!({ "result": io::element_to_json(&y), "text": text }), text))
        }
        AutCmd::Extract { config, table } => {
            let cfg = load(config)?;
            let t = io::table_from_json(&read_json(table)?).map_err(usage)?;
            match extract_params(&Algebra::new(cfg.gamma), &t) {
                Ok(p) => Ok((io::params_to_json(&p), "extracted".into())),
                Err(e) => Err(Failure::Check(json!({ "error": e.to_string() }), e.to_string())),
            }
        }
        AutCmd::Invert { config, params } => {
            let cfg = load(config)?;
            let p = io::params_from_json(&cfg.gamma, &json_arg(params)?).map_err(usage)?;
            let q = invert_params(&cfg.gamma, &p).map_err(bad)?;
            Ok((io::params_to_json(&q), "inverted".into()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("LHV_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let outcome = run(&cli.cmd);
    let elapsed = start.elapsed();
    let (mut out, summary, code) = match outcome {
        Ok((v, s)) => (v, s, 0),
        Err(Failure::Check(v, s)) => (v, s, 1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    if cli.timing {
        if let Value::Object(o) = &mut out {
            o.insert("wall_ms".into(), json!(elapsed.as_millis() as u64));
        }
    }
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    if !cli.json_only {
        eprintln!("{summary}");
        eprintln!("wall time {:.2}s", elapsed.as_secs_f64());
    }
    ExitCode::from(code)
}
