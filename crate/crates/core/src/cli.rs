//! Command-line front end.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::axioms::{render_axioms, DocFormat};
use crate::check::{corpus, run_suite, SuiteConfig};
use crate::classify::classify;
use crate::eqsystem::{simulate, ModalSystem, SimulateOptions};
use crate::error::Error;
use crate::normal::{preprocess, render_pure, to_disjunctive, to_nabla, to_pure_disjunction};
use crate::pipeline::{run_pipeline, Pipeline, PipelineOptions};
use crate::semantics::{budget_from_env, eval, Env, KripkeModel};
use crate::syntax::{parse, Action, SharpSignature, Signatures};

#[derive(Parser, Debug)]
#[command(
    name = "flatfix",
    version,
    about = "Axiomatizations for flat modal fixpoint connectives"
)]
struct Cli {
    /// Signature file with one `name(x; p1, ..., pn) := body` per line.
    #[arg(long, global = true)]
    sigs: Option<PathBuf>,
    /// Comma-separated actions, added to those occurring in the input.
    #[arg(long, global = true, value_delimiter = ',')]
    actions: Vec<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite a formula into one of the cover-modality normal forms.
    Normalize {
        #[arg(long, value_enum, default_value = "nabla")]
        form: Form,
        /// Fixpoint variable, for `pure-nbx`.
        #[arg(long, default_value = "x")]
        x: String,
        formula: String,
    },
    /// Emit the system of equations representing a connective body.
    Represent(Target),
    /// Emit the simple system simulating the representation.
    Simulate {
        #[command(flatten)]
        target: Target,
        /// Read a semi-simple system from a file instead.
        #[arg(long)]
        system: Option<PathBuf>,
        /// No cover arithmetic after merging.
        #[arg(long)]
        raw: bool,
        /// Keep only subsets reachable from the point.
        #[arg(long)]
        reachable: bool,
    },
    /// Emit the K_ff or K+_ff axiom system.
    Axiomatize {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value = "kffplus")]
        system: AxiomSystem,
        /// Leave the Kozen-Park axiom and rule out of K+_ff.
        #[arg(long)]
        lean: bool,
    },
    /// Report whether a formula is harmless and whether its cover form is untied.
    Classify {
        #[arg(long, default_value = "x")]
        x: String,
        formula: String,
    },
    /// Truth set of a formula on a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// File holding the formula.
        #[arg(long)]
        formula: PathBuf,
    },
    /// Run the invariant suite on the corpus (or on `--sigs`).
    Check {
        #[arg(long, default_value_t = 100)]
        models: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "exhaustive-2state")]
        exhaustive_two_state: bool,
        #[arg(long, default_value_t = 200)]
        random_formulas: usize,
    },
}

#[derive(clap::Args, Debug)]
struct Target {
    /// Connective from the signature file; all of them when omitted.
    #[arg(long)]
    connective: Option<String>,
    /// Body given inline, with fixpoint variable `--x` and its other free
    /// variables as parameters.
    #[arg(long)]
    body: Option<String>,
    #[arg(long, default_value = "x")]
    x: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    Nabla,
    Disjunctive,
    PureNabla,
    PureNbx,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxiomSystem {
    Kff,
    Kffplus,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Runs the command line `args` (program name first) and returns the exit
/// status: 0 on success, 1 when `check` finds a failure, 2 on usage, input
/// or budget errors.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn load_sigs(cli: &Cli) -> Res<Option<Signatures>> {
    match &cli.sigs {
        Some(path) => Ok(Some(Signatures::load(&read(path)?)?)),
        None => Ok(None),
    }
}

fn declared(cli: &Cli) -> Option<BTreeSet<Action>> {
    if cli.actions.is_empty() {
        None
    } else {
        Some(cli.actions.iter().map(|a| Action::new(a.trim())).collect())
    }
}

fn targets(cli: &Cli, t: &Target, sigs: &Signatures) -> Res<Vec<SharpSignature>> {
    if let Some(body) = &t.body {
        let f = parse(body, sigs)?;
        let params: Vec<String> = f.free_vars().into_iter().filter(|v| *v != t.x).collect();
        let name = t.connective.clone().unwrap_or_else(|| "gamma".into());
        return Ok(vec![SharpSignature::new(name, t.x.clone(), params, f)?]);
    }
    if cli.sigs.is_none() {
        return Err(Failure::Usage(
            "give `--body` or a signature file with `--sigs`".into(),
        ));
    }
    match &t.connective {
        Some(name) => sigs
            .get(name)
            .cloned()
            .map(|s| vec![s])
            .ok_or_else(|| Failure::Usage(format!("unknown connective `{name}`"))),
        None => Ok(sigs.iter().cloned().collect()),
    }
}

fn pipelines(
    cli: &Cli,
    t: &Target,
    sigs: &Signatures,
    opts: PipelineOptions,
) -> Res<Vec<Pipeline>> {
    let acts = declared(cli);
    targets(cli, t, sigs)?
        .iter()
        .map(|s| run_pipeline(s, acts.as_ref(), opts).map_err(Failure::from))
        .collect()
}

fn emit(out: &mut dyn Write, text: &str) -> Res<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> Res<()> {
    emit(
        out,
        &(serde_json::to_string_pretty(v).expect("json value serializes") + "\n"),
    )
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Res<()> {
    let loaded = load_sigs(cli)?;
    let sigs = loaded.clone().unwrap_or_default();
    match &cli.command {
        Command::Normalize { form, x, formula } => {
            let f = parse(formula, &sigs)?;
            let mut acts = f.actions();
            acts.extend(declared(cli).unwrap_or_default());
            let nabla = to_nabla(&f)?;
            let result = match form {
                Form::Nabla => nabla,
                Form::Disjunctive => to_disjunctive(&nabla)?,
                Form::PureNabla => to_pure_disjunction(&nabla, &acts)?,
                Form::PureNbx => render_pure(&preprocess(&f, x, &acts)?.pure, x),
            };
            if cli.json {
                emit_json(
                    out,
                    &json!({"input": f.to_string(), "form": format!("{form:?}"), "output": result.to_string()}),
                )
            } else {
                emit(out, &format!("{result}\n"))
            }
        }
        Command::Represent(t) => {
            let ps = pipelines(cli, t, &sigs, PipelineOptions::default())?;
            if cli.json {
                let docs: Vec<_> = ps
                    .iter()
                    .map(|p| json!({"connective": p.sig.name, "system": p.rep.system.to_json_value()}))
                    .collect();
                emit_json(out, &json!(docs))
            } else {
                for p in &ps {
                    emit(out, &format!("# {}\n{}", p.sig, p.rep.system.render_text()))?;
                }
                Ok(())
            }
        }
        Command::Simulate {
            target,
            system,
            raw,
            reachable,
        } => {
            let opts = SimulateOptions {
                raw: *raw,
                reachable_only: *reachable,
            };
            let systems: Vec<(String, ModalSystem)> = match system {
                Some(path) => {
                    let text = read(path)?;
                    let src = path.display().to_string();
                    let inputs: Vec<(String, ModalSystem)> = match text.trim_start().chars().next()
                    {
                        Some('[') => {
                            let docs: Vec<serde_json::Value> = serde_json::from_str(&text)
                                .map_err(|e| {
                                    Failure::Usage(format!("invalid system document: {e}"))
                                })?;
                            docs.iter()
                                .map(|d| {
                                    let name =
                                        d["connective"].as_str().map_or(src.clone(), String::from);
                                    let sys = d.get("system").unwrap_or(d).to_string();
                                    Ok((name, ModalSystem::from_json(&sys, &sigs)?))
                                })
                                .collect::<Res<_>>()?
                        }
                        Some('{') => vec![(src, ModalSystem::from_json(&text, &sigs)?)],
                        _ => vec![(src, ModalSystem::parse_text(&text, &sigs)?)],
                    };
                    inputs
                        .into_iter()
                        .map(|(name, t)| Ok((name, simulate(&t, opts)?.system)))
                        .collect::<Res<_>>()?
                }
                None => pipelines(
                    cli,
                    target,
                    &sigs,
                    PipelineOptions {
                        simulate: opts,
                        lean: false,
                    },
                )?
                .into_iter()
                .map(|p| (p.sig.to_string(), p.sim.system))
                .collect(),
            };
            if cli.json {
                let docs: Vec<_> = systems
                    .iter()
                    .map(|(src, s)| json!({"source": src, "system": s.to_json_value()}))
                    .collect();
                emit_json(out, &json!(docs))
            } else {
                for (src, s) in &systems {
                    emit(out, &format!("# {src}\n{}", s.render_text()))?;
                }
                Ok(())
            }
        }
        Command::Axiomatize {
            target,
            system,
            lean,
        } => {
            let ps = pipelines(
                cli,
                target,
                &sigs,
                PipelineOptions {
                    lean: *lean,
                    ..Default::default()
                },
            )?;
            let mut table = sigs.clone();
            for p in &ps {
                if table.get(&p.sig.name).is_none() {
                    table.insert(p.sig.clone())?;
                }
            }
            let mut advice = String::new();
            for p in &ps {
                let c = classify(&p.sig.body, &p.sig.x)?;
                let class = match (c.harmless, c.untied) {
                    (true, _) => Some("harmless"),
                    (false, true) => Some("untied"),
                    _ => None,
                };
                let line = match class {
                    Some(class) => format!(
                        "# {}: body is {class}, kff is already complete\n",
                        p.sig.name
                    ),
                    None => format!(
                        "# {}: body is neither harmless nor untied, use kffplus\n",
                        p.sig.name
                    ),
                };
                advice.push_str(&line);
            }
            let sets: Vec<_> = ps
                .into_iter()
                .map(|p| match system {
                    AxiomSystem::Kff => p.kff,
                    AxiomSystem::Kffplus => p.kplus,
                })
                .collect();
            let format = if cli.json {
                DocFormat::Json
            } else {
                DocFormat::Text
            };
            if !cli.json {
                emit(out, &advice)?;
            }
            emit(out, &render_axioms(&sets, &table, format))
        }
        Command::Classify { x, formula } => {
            let f = parse(formula, &sigs)?;
            let c = classify(&f, x)?;
            if cli.json {
                emit_json(
                    out,
                    &serde_json::to_value(&c).expect("classification serializes"),
                )
            } else {
                emit(out, &format!("{c}\n"))
            }
        }
        Command::Eval { model, formula } => {
            let m = KripkeModel::from_json(&read(model)?)?;
            let f = parse(read(formula)?.trim(), &sigs)?;
            let set = eval(&m, &Env::new(), &f, &sigs)?;
            if cli.json {
                let ids: Vec<i64> = set.iter().map(|i| m.id(i)).collect();
                emit_json(out, &json!({"formula": f.to_string(), "states": ids}))
            } else {
                emit(out, &format!("{}\n", m.show(set)))
            }
        }
        Command::Check {
            models,
            max_states,
            seed,
            exhaustive_two_state,
            random_formulas,
        } => {
            let cfg = SuiteConfig {
                models: *models,
                max_states: *max_states,
                seed: *seed,
                exhaustive_two_state: *exhaustive_two_state,
                random_formulas: *random_formulas,
                budget: budget_from_env(),
            };
            let report = run_suite(&loaded.unwrap_or_else(corpus), &cfg);
            emit(
                out,
                &if cli.json {
                    report.to_json()
                } else {
                    report.render_text()
                },
            )?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
