//! `semiqt` command-line driver.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use semiqt::frobenius::FiniteAbelianGroup;
use semiqt::nonlocality::{
    build_empirical_model, check_no_signalling, chsh_oracle, lhv_check_nonneg, lhv_solve_field, BellScenario,
    EmpiricalModel,
};
use semiqt::phases::{coset_labels, enumerate_phases, mermin_feasible, run_abelian_hsp};
use semiqt::semiring::CarrierSpec;
use semiqt::zoo::{self, Report};
use semiqt::Semiring;

#[derive(Parser, Debug)]
#[command(name = "semiqt", version, about = "Toy quantum theories over commutative involutive semirings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the verification suite for one theory or all of them.
    Verify {
        #[arg(default_value = "all")]
        target: String,
        #[arg(long, default_value_t = zoo::DEFAULT_SEED)]
        seed: u64,
    },
    /// Analyse a Bell scenario or a hand-built empirical model.
    Bell { config: PathBuf },
    /// Run the abelian hidden subgroup algorithm.
    Hsp { config: PathBuf },
    /// Enumerate the phase group of a finite carrier.
    Phases { kind: PhaseKind, p: u64, n: u32 },
    /// Decide whether Mermin-type arguments exist over `F_{p^n}(sqrt eps)`.
    Mermin { p: u64, n: u32 },
    /// Replay a saved run configuration.
    Run { config: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PhaseKind {
    /// `F_{p^n}(sqrt eps)`.
    Ffqt,
    /// Residues of the unramified p-adic extension mod `p^n`.
    Padic,
}

impl PhaseKind {
    fn spec(self, p: u64, n: u32) -> CarrierSpec {
        match self {
            PhaseKind::Ffqt => CarrierSpec::QuadraticExtension { p, n, modulus: None, epsilon: None },
            PhaseKind::Padic => CarrierSpec::PadicResidue { p, precision: n },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
enum Command {
    Verify { target: String, seed: u64 },
    Bell { config: PathBuf },
    Hsp { config: PathBuf },
    Phases { kind: PhaseKind, p: u64, n: u32 },
    Mermin { p: u64, n: u32 },
}

/// A fully resolved invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct RunConfig {
    command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    semiring: Option<CarrierSpec>,
    format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<PathBuf>,
}

/// Bad input: exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use semiqt::Error as E;
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::NotPrime(_)
                | E::InvalidParameter(_)
                | E::Reducible(_)
                | E::NotPrimitive(..)
                | E::NotInCarrier(_)
                | E::SemiringMismatch
                | E::DimensionMismatch(_)
                | E::InvalidOracle(_)
                | E::Parse(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

/// What a command produced: a JSON document, its markdown rendering, and
/// whether every check it ran passed.
struct Output {
    json: Value,
    markdown: String,
    ok: bool,
}

impl RunConfig {
    fn from_cli(cli: Cli) -> anyhow::Result<Self> {
        let command = match cli.command {
            Cmd::Verify { target, seed } => Command::Verify { target, seed },
            Cmd::Bell { config } => Command::Bell { config },
            Cmd::Hsp { config } => Command::Hsp { config },
            Cmd::Phases { kind, p, n } => Command::Phases { kind, p, n },
            Cmd::Mermin { p, n } => Command::Mermin { p, n },
            Cmd::Run { config } => {
                let text = read(&config)?;
                let rc: RunConfig =
                    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", config.display())))?;
                return Ok(rc);
            }
        };
        let semiring = match &command {
            Command::Phases { kind, p, n } => Some(kind.spec(*p, *n)),
            Command::Mermin { p, n } => Some(PhaseKind::Ffqt.spec(*p, *n)),
            _ => None,
        };
        Ok(RunConfig { command, semiring, format: cli.format, output: cli.output })
    }

    fn execute(&self) -> anyhow::Result<Output> {
        match &self.command {
            Command::Verify { target, seed } => verify(target, *seed),
            Command::Bell { config } => bell(&read_json(config)?),
            Command::Hsp { config } => hsp(&read_json(config)?),
            Command::Phases { kind, p, n } => {
                let s = Semiring::new(kind.spec(*p, *n))?;
                Ok(generic(enumerate_phases(&s)?.to_json()))
            }
            Command::Mermin { p, n } => Ok(generic(serde_json::to_value(mermin_feasible(*p, *n)?)?)),
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn generic(json: Value) -> Output {
    let markdown = markdown_table(&json);
    Output { json, markdown, ok: true }
}

/// Two-column table of the top-level fields, values as compact JSON.
fn markdown_table(v: &Value) -> String {
    let mut out = String::from("| field | value |\n|---|---|\n");
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                out.push_str(&format!("| {k} | `{}` |\n", x.to_string().replace('|', "\\|")));
            }
        }
        other => out.push_str(&format!("| value | `{other}` |\n")),
    }
    out
}

fn verify(target: &str, seed: u64) -> anyhow::Result<Output> {
    let reports: Vec<Report> = if target == "all" {
        zoo::run_all(seed)?
    } else if zoo::THEORIES.contains(&target) {
        vec![zoo::run(target, seed)?]
    } else {
        return Err(usage(format!("unknown theory {target:?}; expected all or one of {}", zoo::THEORIES.join(", "))));
    };
    let ok = reports.iter().all(Report::all_pass);
    let markdown = reports.iter().map(Report::to_markdown).collect::<Vec<_>>().join("\n");
    let json = match reports.as_slice() {
        [one] if target != "all" => one.to_json(),
        many => Value::Array(many.iter().map(Report::to_json).collect()),
    };
    Ok(Output { json, markdown, ok })
}

fn bell(cfg: &Value) -> anyhow::Result<Output> {
    let model = if cfg.get("contexts").is_some() {
        EmpiricalModel::from_json(cfg)?
    } else {
        build_empirical_model(&BellScenario::from_json(cfg)?)?
    };
    let ns = check_no_signalling(&model)?;
    let field_lhv = match lhv_solve_field(&model) {
        Ok(Some(sol)) => json!({"found": true, "solution": sol.to_json()}),
        Ok(None) => json!({"found": false}),
        Err(e @ (semiqt::Error::NotAField(_) | semiqt::Error::SizeBound(_))) => json!({"skipped": e.to_string()}),
        Err(e) => return Err(e.into()),
    };
    let nonneg_lhv = match lhv_check_nonneg(&model) {
        Ok(v) => v.to_json(),
        Err(e @ (semiqt::Error::Unsupported(_) | semiqt::Error::SizeBound(_))) => json!({"skipped": e.to_string()}),
        Err(e) => return Err(e.into()),
    };
    let mut json = json!({
        "model": model.to_json(),
        "no_signalling": {"holds": ns.holds, "witness": ns.witness},
        "field_lhv": field_lhv,
        "nonneg_lhv": nonneg_lhv,
    });
    if let Ok(o) = chsh_oracle(&model) {
        json["chsh_oracle"] = json!({
            "signs": o.signs,
            "value": o.value.to_string(),
            "vertex_bound": o.vertex_bound.to_string(),
            "visibility": o.visibility.to_string(),
            "normalised_margin": o.normalised_margin().to_string(),
        });
    }
    let summary = json!({
        "no_signalling": ns.holds,
        "field_lhv": json["field_lhv"],
        "nonneg_lhv_local": json["nonneg_lhv"]["local"],
        "visibility": json["nonneg_lhv"]["visibility"],
    });
    Ok(Output { markdown: markdown_table(&summary), json, ok: true })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HspConfig {
    semiring: CarrierSpec,
    group: Vec<u64>,
    #[serde(default)]
    hidden: Option<Vec<Vec<u64>>>,
    #[serde(default)]
    labels: Option<Vec<u64>>,
}

fn hsp(cfg: &Value) -> anyhow::Result<Output> {
    let cfg: HspConfig = serde_json::from_value(cfg.clone()).map_err(|e| usage(format!("hsp config: {e}")))?;
    let s = Semiring::new(cfg.semiring.clone())?;
    let g = FiniteAbelianGroup::new(cfg.group.clone())?;
    let labels = match (cfg.hidden, cfg.labels) {
        (Some(hidden), None) => {
            let mut idx = Vec::with_capacity(hidden.len());
            for h in &hidden {
                if h.len() != g.factors().len() || h.iter().zip(g.factors()).any(|(x, n)| x >= n) {
                    return Err(usage(format!("{h:?} is not an element of Z{:?}", g.factors())));
                }
                idx.push(g.index(h));
            }
            idx.sort_unstable();
            idx.dedup();
            if !idx.contains(&0) || g.generated(&idx) != idx {
                return Err(usage("hidden set is not a subgroup"));
            }
            coset_labels(&g, &idx)
        }
        (None, Some(labels)) => labels,
        _ => return Err(usage("give exactly one of \"hidden\" or \"labels\"")),
    };
    let out = run_abelian_hsp(&g, &s, &labels)?;
    let json = json!({"semiring": cfg.semiring, "group": cfg.group, "outcome": out});
    let summary = json!({"group": json["group"], "subgroup": json["outcome"]["subgroup"], "generators": json["outcome"]["generators"]});
    Ok(Output { markdown: markdown_table(&summary), json, ok: true })
}

fn emit(rc: &RunConfig, out: &Output) -> anyhow::Result<()> {
    let text = match rc.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Md => out.markdown.clone(),
    };
    match &rc.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let rc = RunConfig::from_cli(cli)?;
    let out = rc.execute()?;
    emit(&rc, &out)?;
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::from_cli(Cli::try_parse_from(std::iter::once("semiqt").chain(args.iter().copied())).unwrap())
            .unwrap()
    }

    #[test]
    fn run_config_round_trips() {
        for args in [
            &["verify"][..],
            &["verify", "padic", "--seed", "7", "--format", "md"],
            &["bell", "cfg.json", "-o", "out.json"],
            &["hsp", "simon.json"],
            &["phases", "padic", "3", "2"],
            &["mermin", "5", "1"],
        ] {
            let rc = parse(args);
            let text = serde_json::to_string(&rc).unwrap();
            assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), rc, "{text}");
        }
    }

    #[test]
    fn phases_config_carries_the_carrier() {
        let rc = parse(&["phases", "ffqt", "3", "1"]);
        assert_eq!(rc.semiring, Some(CarrierSpec::QuadraticExtension { p: 3, n: 1, modulus: None, epsilon: None }));
        assert_eq!(rc.format, Format::Json);
    }

    #[test]
    fn usage_errors_map_to_two() {
        assert_eq!(exit_code(&usage("x")), 2);
        assert_eq!(exit_code(&semiqt::Error::NotPrime(4).into()), 2);
        assert_eq!(exit_code(&semiqt::Error::BudgetExceeded { needed: 2, budget: 1 }.into()), 1);
        assert_eq!(exit_code(&semiqt::Error::NonNormalised("state".into()).into()), 1);
    }

    #[test]
    fn markdown_escapes_pipes() {
        assert_eq!(markdown_table(&json!({"a": "x|y"})), "| field | value |\n|---|---|\n| a | `\"x\\|y\"` |\n");
    }
}
