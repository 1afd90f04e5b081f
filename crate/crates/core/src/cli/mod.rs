//! Command-line front end. Each command reads a problem file, runs one
//! analysis and emits a JSON report followed by a plain-text summary.
//!
//! Exit codes: 0 when no failure witness was found, 1 when at least one was,
//! 2 when the input was rejected before any mathematics ran.

mod problem;
mod render;
mod selftest;

pub use problem::{
    ActionSpec, ComplexSpec, EntrySpec, GeneratorSpec, Problem, ProblemError, ProblemFile, PushSpec, RationalSpec,
    SamplingSpec, SummandSpec,
};
pub use selftest::{selftest_oracle, Mismatch, SelftestSummary};

use crate::action::ProjectiveAction;
use crate::eqsheaf::{check_star, CheckConfig};
use crate::fm::{necessary_check, omega_check, FmError, NamedComplex, OmegaReport, OmegaVerdict};
use crate::group::Subgroup;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eqdescent", version, about = "Descent of equivariant complexes along diagonal quotients of projective space")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Sample points per stratum (overrides the problem file).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Sampling seed (overrides the problem file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Check only the points listed in the problem file.
    #[arg(long, global = true)]
    pub points_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stratify projective space by stabilizer.
    Strata { file: PathBuf },
    /// Decide whether a complex descends to a perfect complex on the quotient.
    CheckDescent {
        file: PathBuf,
        #[arg(long)]
        complex: String,
    },
    /// Decide whether a functor word induces an equivalence of the quotients.
    Omega {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Generator on the source (default: a heuristic line bundle sum).
        #[arg(long)]
        gen_a: Option<String>,
        /// Generator on the target (default: a heuristic line bundle sum).
        #[arg(long)]
        gen_b: Option<String>,
    },
    /// The kernel-only necessary conditions for a shift/twist word.
    Necessary {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compare block cohomology against the cyclotomic oracle on random instances.
    SelftestOracle {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command wants printed, and its exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn invalid(message: impl std::fmt::Display) -> Outcome {
        Outcome { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_INVALID }
    }
}

#[derive(Serialize)]
struct ReportFile<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    input_digest: Option<String>,
    parameters: Value,
    result: Value,
    caveats: Vec<String>,
    exit_code: i32,
    /// Wall-clock time; the only field that varies between identical runs.
    timing_ms: u64,
}

struct Rendered {
    result: Value,
    caveats: Vec<String>,
    text: String,
    code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let (name, file) = match &cli.command {
        Command::Strata { file } => ("strata", Some(file)),
        Command::CheckDescent { file, .. } => ("check-descent", Some(file)),
        Command::Omega { file, .. } => ("omega", Some(file)),
        Command::Necessary { file, .. } => ("necessary", Some(file)),
        Command::SelftestOracle { .. } => ("selftest-oracle", None),
    };

    let (digest, problem) = match file {
        Some(path) => match load(path) {
            Ok((d, p)) => (Some(d), Some(p)),
            Err(o) => return o,
        },
        None => (None, None),
    };
    let config = problem.as_ref().map(|p| effective_config(&cli.global, &p.sampling));

    let rendered = match (&cli.command, problem.as_ref(), config.as_ref()) {
        (Command::Strata { .. }, Some(p), _) => Ok(cmd_strata(p)),
        (Command::CheckDescent { complex, .. }, Some(p), Some(cfg)) => cmd_check_descent(p, complex, cfg),
        (Command::Omega { word, gen_a, gen_b, .. }, Some(p), Some(cfg)) => {
            cmd_omega(p, word, gen_a.as_deref(), gen_b.as_deref(), cfg)
        }
        (Command::Necessary { word, .. }, Some(p), Some(cfg)) => cmd_necessary(p, word, cfg),
        (Command::SelftestOracle { trials, seed }, _, _) => Ok(cmd_selftest(*trials, *seed)),
        _ => unreachable!("file commands always load a problem"),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(message) => return Outcome::invalid(message),
    };

    let parameters = match (&cli.command, config) {
        (Command::SelftestOracle { trials, seed }, _) => serde_json::json!({ "trials": trials, "seed": seed }),
        (_, Some(cfg)) => serde_json::json!({
            "samples_per_stratum": cfg.samples_per_stratum,
            "seed": cfg.seed,
            "points_only": cfg.points_only,
        }),
        _ => Value::Null,
    };
    let report = ReportFile {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: name,
        input_digest: digest,
        parameters,
        result: rendered.result,
        caveats: rendered.caveats,
        exit_code: rendered.code,
        timing_ms: start.elapsed().as_millis() as u64,
    };
    let json = serde_json::to_string_pretty(&report).expect("reports serialize");
    Outcome { stdout: format!("{json}\n\n{}", rendered.text), stderr: String::new(), code: rendered.code }
}

fn load(path: &Path) -> Result<(String, Problem), Outcome> {
    let bytes = std::fs::read(path).map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes).map_err(|_| Outcome::invalid(format!("{}: not UTF-8", path.display())))?;
    let problem = ProblemFile::parse(&text)
        .and_then(|f| f.resolve())
        .map_err(|e| Outcome::invalid(format!("{}: {e}", path.display())))?;
    Ok((digest, problem))
}

fn effective_config(global: &GlobalArgs, file: &CheckConfig) -> CheckConfig {
    CheckConfig {
        samples_per_stratum: global.samples.unwrap_or(file.samples_per_stratum),
        seed: global.seed.unwrap_or(file.seed),
        points_only: global.points_only,
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

#[derive(Serialize)]
struct StratumRow {
    support: Vec<usize>,
    stabilizer_order: usize,
    stabilizer_generators: Vec<Vec<u64>>,
    scalar_character: crate::group::Character,
    fixed: bool,
}

fn generators(s: &Subgroup) -> Vec<Vec<u64>> {
    let mut g: Vec<Vec<u64>> =
        s.generators().iter().filter(|g| !g.is_identity()).map(|g| g.coords().to_vec()).collect();
    g.sort();
    g.dedup();
    g
}

fn cmd_strata(p: &Problem) -> Rendered {
    let table = p.action.strata();
    let rows: Vec<StratumRow> = table
        .strata
        .iter()
        .map(|s| StratumRow {
            support: s.support.clone(),
            stabilizer_order: s.stabilizer.order(),
            stabilizer_generators: generators(&s.stabilizer),
            scalar_character: s.scalar_char.canonical_lift(&s.stabilizer),
            fixed: !s.stabilizer.is_trivial(),
        })
        .collect();
    let fixed = table.fixed_supports();
    let components = maximal_supports(&fixed);
    let locus: Vec<String> = components.iter().map(|s| render::linear_subspace(&p.action, s)).collect();
    let result = serde_json::json!({
        "group": p.action.group().orders(),
        "dim": p.action.dim(),
        "strata": to_value(&rows),
        "fixed_supports": fixed,
        "fixed_locus": locus,
        "free": p.action.is_free(),
    });
    let text = render::strata(&p.action, &rows.iter().map(|r| render::StratumLine {
        support: &r.support,
        order: r.stabilizer_order,
        generators: &r.stabilizer_generators,
        scalar: r.scalar_character.to_string(),
    }).collect::<Vec<_>>(), &locus);
    Rendered { result, caveats: Vec::new(), text, code: EXIT_PASS }
}

/// Supports not contained in another fixed support: the components of the fixed locus.
fn maximal_supports(fixed: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fixed
        .iter()
        .filter(|s| !fixed.iter().any(|t| t.len() > s.len() && s.iter().all(|i| t.contains(i))))
        .cloned()
        .collect()
}

fn lookup<'a, T>(map: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, String> {
    map.get(name).ok_or_else(|| {
        let known: Vec<&str> = map.keys().map(String::as_str).collect();
        format!("no {kind} named '{name}' (known: {})", if known.is_empty() { "none".into() } else { known.join(", ") })
    })
}

fn cmd_check_descent(p: &Problem, name: &str, cfg: &CheckConfig) -> Result<Rendered, String> {
    let c = lookup(&p.complexes, "complex", name)?;
    let report = check_star(c, &p.points, cfg).map_err(|e| format!("complex '{name}': {e}"))?;
    let code = if report.passed() { EXIT_PASS } else { EXIT_FAIL };
    let text = render::descent(&format!("check-descent {name}"), &report);
    let result = serde_json::json!({ "complex": name, "report": to_value(&report) });
    Ok(Rendered { result, caveats: report.caveats.clone(), text, code })
}

fn cmd_omega(
    p: &Problem,
    word: &str,
    gen_a: Option<&str>,
    gen_b: Option<&str>,
    cfg: &CheckConfig,
) -> Result<Rendered, String> {
    let w = lookup(&p.words, "word", word)?;
    let target: ProjectiveAction = w.target().cloned().unwrap_or_else(|| p.action.clone());
    let a = match gen_a {
        Some(n) => NamedComplex::new(n, lookup(&p.complexes, "complex", n)?.clone()),
        None => NamedComplex::default_for(&p.action),
    };
    let b = match gen_b {
        Some(n) => {
            // complexes are declared on the source action; read this one on the target
            let c = lookup(&p.complexes, "complex", n)?.with_action(target.clone()).map_err(|e| format!("complex '{n}': {e}"))?;
            NamedComplex::new(n, c)
        }
        None => NamedComplex::default_for(&target),
    };
    let report = omega_check(w, &a, &b, &p.points, cfg).map_err(|e| match e {
        FmError::GeneratorDoesNotDescend { name, report } => {
            let first = &report.witnesses[0];
            format!(
                "generator '{name}' does not descend (H^{} carries character {} at {}); it cannot serve as a generator",
                first.degree, first.character, first.point
            )
        }
        other => other.to_string(),
    })?;
    let code = match report.verdict {
        OmegaVerdict::Certified => EXIT_PASS,
        OmegaVerdict::Disproved => EXIT_FAIL,
    };
    let caveats = omega_caveats(&report);
    let text = render::omega(word, &report);
    let result = serde_json::json!({ "word": word, "report": to_value(&report) });
    Ok(Rendered { result, caveats, text, code })
}

fn omega_caveats(r: &OmegaReport) -> Vec<String> {
    let mut out = r.caveats.clone();
    out.extend(r.condition_i.caveats.iter().map(|c| format!("condition (i): {c}")));
    out.extend(r.condition_ii.caveats.iter().map(|c| format!("condition (ii): {c}")));
    out
}

fn cmd_necessary(p: &Problem, word: &str, cfg: &CheckConfig) -> Result<Rendered, String> {
    let w = lookup(&p.words, "word", word)?;
    let (i, ii) = necessary_check(w, &p.action, cfg).map_err(|e| format!("word '{word}': {e}"))?;
    let passed = i.passed() && ii.passed();
    let code = if passed { EXIT_PASS } else { EXIT_FAIL };
    let text = format!(
        "{}\n{}",
        render::descent(&format!("necessary {word}: condition (i-nec)"), &i),
        render::descent(&format!("necessary {word}: condition (ii-nec)"), &ii)
    );
    let result = serde_json::json!({
        "word": word,
        "verdict": if passed { "pass" } else { "fail" },
        "condition_i_nec": to_value(&i),
        "condition_ii_nec": to_value(&ii),
    });
    Ok(Rendered { result, caveats: Vec::new(), text, code })
}

fn cmd_selftest(trials: usize, seed: u64) -> Rendered {
    let summary = selftest_oracle(trials, seed);
    let code = if summary.mismatches.is_empty() { EXIT_PASS } else { EXIT_FAIL };
    let text = render::selftest(&summary);
    Rendered { result: to_value(&summary), caveats: Vec::new(), text, code }
}

/// Parses the JSON report at the head of a command's stdout.
pub fn report_json(stdout: &str) -> Option<Value> {
    serde_json::Deserializer::from_str(stdout).into_iter::<Value>().next()?.ok()
}

/// The report with the timing field removed, for byte comparisons.
pub fn without_timing(stdout: &str) -> Option<String> {
    let mut v = report_json(stdout)?;
    v.as_object_mut()?.remove("timing_ms");
    serde_json::to_string(&v).ok()
}
