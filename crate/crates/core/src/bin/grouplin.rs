use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use grouplin::decoder::{self, DecoderContext, Leftover};
use grouplin::io::{self, SystemFile};
use grouplin::rational::{self, Rational};
use grouplin::reduction::{self, projection_family, ReductionParams, Side};
use grouplin::{rep, selftest, solvers, Result};

/// Group 3-LIN toolkit: representations, the Label Cover reduction, solvers
/// and the influence decoder. Output is canonical JSON on stdout; logs go to
/// stderr (set RUST_LOG to adjust). GROUPLIN_CAP overrides enumeration caps.
#[derive(Parser)]
#[command(name = "grouplin", version)]
struct Cli {
    /// Accepted for compatibility; every command prints JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    G1,
    G2,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::G1 => Side::G1,
            SideArg::G2 => Side::G2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Expect,
    Derand,
    Noncubic,
}

#[derive(Clone, Copy, ValueEnum)]
enum LeftoverArg {
    Giveup,
    Normalize,
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group table and describe the group.
    VerifyGroup {
        /// Group JSON file or catalog:NAME.
        group: String,
    },
    /// Irreducible unitary representations of a group.
    Irreps {
        group: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = rep::DEFAULT_TOL)]
        tol: f64,
    },
    /// Build the weighted 3-LIN system of a Label Cover instance.
    Reduce {
        /// Instance JSON file or catalog:NAME.
        lc: String,
        /// Template JSON file or catalog:NAME.
        #[arg(long)]
        template: String,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the system here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Satisfied weight of an assignment.
    Eval {
        system: PathBuf,
        /// JSON object mapping variable names to element indices.
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long, value_enum, default_value = "g1")]
        side: SideArg,
    },
    /// Run a solver on a system.
    Solve {
        system: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_enum, default_value = "g2")]
        side: SideArg,
        /// Completeness parameter for the non-cubic procedure.
        #[arg(long, value_parser = parse_rational, default_value = "1")]
        c: Rational,
        #[arg(long)]
        cap: Option<u128>,
    },
    /// Decode a Label Cover strategy from an assignment family over G2.
    Decode {
        lc: String,
        #[arg(long)]
        template: String,
        /// Family JSON; the planted family of the best labeling when omitted.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, value_parser = parse_rational)]
        delta: Rational,
        #[arg(long, value_enum, default_value = "giveup")]
        leftover: LeftoverArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the whole chain on one instance and emit a single report.
    Pipeline {
        lc: String,
        #[arg(long)]
        template: String,
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, value_parser = parse_rational)]
        delta: Rational,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in check suite; exits 5 when any check fails.
    Selftest {
        /// One of groups, reps, fourier, reduction, solvers, decoder.
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

const SELFTEST_FAILED: u8 = 5;

fn here() -> &'static Path {
    Path::new("")
}

fn run(cmd: Command) -> Result<(Value, u8)> {
    let out = match cmd {
        Command::VerifyGroup { group } => {
            let g = io::resolve_group(&group, here())?;
            json!({
                "name": g.name(),
                "order": g.order(),
                "abelian": g.is_abelian(),
                "identity": g.identity(),
                "conjugacy_classes": g.conjugacy_classes(),
                "valid": true,
            })
        }
        Command::Irreps { group, seed, tol } => {
            let g = io::resolve_group(&group, here())?;
            let set = rep::irreps(&g, seed, tol)?;
            serde_json::to_value(io::irreps_json(&set))?
        }
        Command::Reduce { lc, template, eps, mode, samples, seed, out } => {
            let instance = io::load_lc(&lc)?;
            let t = io::resolve_template(&template, here())?;
            let params = match mode {
                ModeArg::Exact => ReductionParams::exact(eps),
                ModeArg::Sampled => ReductionParams::sampled(eps, samples, seed),
            };
            let system = reduction::build_system(&instance, &t, &params)?;
            let reference = if template.starts_with(io::CATALOG_PREFIX) {
                template
            } else {
                std::fs::canonicalize(&template)?.to_string_lossy().into_owned()
            };
            let file = SystemFile::from_system(&system, &reference);
            if let Some(path) = out {
                io::write_json(&path, &file)?;
                json!({ "written": path, "variables": system.variables.len(), "equations": system.equations.len() })
            } else {
                serde_json::to_value(file)?
            }
        }
        Command::Eval { system, assignment, side } => {
            let s = io::load_system(&system)?;
            let values = io::load_assignment(&assignment, &s)?;
            let value = reduction::evaluate(&s, &values, side.into())?;
            json!({ "value": io::rat(&value) })
        }
        Command::Solve { system, method, side, c, cap } => {
            let s = io::load_system(&system)?;
            let side: Side = side.into();
            match method {
                Method::Brute => {
                    let (value, a) = solvers::brute_force_opt(&s, side, cap.unwrap_or(solvers::BRUTE_FORCE_CAP))?;
                    json!({ "value": io::rat(&value), "assignment": io::assignment_json(&s, &a) })
                }
                Method::Expect => json!({ "value": io::rat(&solvers::random_expectation(&s, side)) }),
                Method::Derand => {
                    let (a, value) = solvers::derandomize(&s, side);
                    json!({ "value": io::rat(&value), "assignment": io::assignment_json(&s, &a) })
                }
                Method::Noncubic => serde_json::to_value(solvers::non_cubic_solve(&s, &c)?)?,
            }
        }
        Command::Decode { lc, template, family, eps, delta, leftover, seed } => {
            let instance = io::load_lc(&lc)?;
            let t = io::resolve_template(&template, here())?;
            let fam = match family {
                Some(path) => io::load_family(&path, &instance, &t)?,
                None => {
                    let (h_d, h_e, _) = selftest::best_labeling(&instance)?;
                    projection_family(&instance, &t, &h_d, &h_e, Side::G2)
                }
            };
            let ctx = DecoderContext::new(instance.clone(), t, eps, delta, fam, seed)?;
            let leftover = match leftover {
                LeftoverArg::Giveup => Leftover::GiveUp,
                LeftoverArg::Normalize => Leftover::Normalize,
            };
            let d = decoder::decode(&ctx, leftover)?;
            let (h_d, h_e, value) = decoder::derandomize_strategy(&instance, &d.strategy);
            let mut derandomized = io::labeling_json(&instance, &h_d, &h_e);
            derandomized["value"] = io::rat(&value);
            json!({
                "omega": d.omega.index,
                "eta": d.omega.eta,
                "margin": d.omega.margin,
                "xyz": d.omega.xyz,
                "kappa": d.kappa,
                "kappa_formula": d.kappa_formula,
                "alpha": io::rat(&d.alpha),
                "alpha_effective": io::rat(&d.alpha_effective),
                "family_value": io::rat(&ctx.value()),
                "strategy": io::strategy_json(&instance, &d.strategy),
                "expected_value": d.expected_value,
                "derandomized": derandomized,
            })
        }
        Command::Pipeline { lc, template, eps, delta, family, seed } => {
            let instance = io::load_lc(&lc)?;
            let t = io::resolve_template(&template, here())?;
            let fam = family.map(|p| io::load_family(&p, &instance, &t)).transpose()?;
            selftest::run_pipeline(&instance, &t, &eps, &delta, fam, seed)?
        }
        Command::Selftest { suite, seed, tol } => {
            let report = selftest::selftest(seed, tol, suite.as_deref())?;
            let code = if report.all_pass() { 0 } else { SELFTEST_FAILED };
            return Ok((serde_json::to_value(report)?, code));
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let _ = cli.json;
    match run(cli.command).and_then(|(v, code)| Ok((io::canonical(&v)?, code))) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
