use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use efcheck_core::algebra::{derive_tables, validate_presentation, AlgebraPresentation};
use efcheck_core::equations::{
    check_bisim_invariance, check_cef, check_cefk, check_ef, compute_k, BisimMode, EquationReport,
};
use efcheck_core::forest::{bisimilar, parse_unranked_term, ForestGraph};
use efcheck_core::logic::{equiv, modelcheck, Formula, Semantics, TypeTable};
use efcheck_core::Error;

#[derive(Parser)]
#[command(
    name = "efcheck",
    version,
    about = "Decision procedures for regular forest languages"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra presentation (.alg) or a forest (.forest).
    Validate {
        file: PathBuf,
        /// Random samples for the associativity check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Evaluate a forest in an algebra.
    Eval {
        algebra: PathBuf,
        forest: PathBuf,
        /// Arity to evaluate at (default: the forest's arity).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Print the derived operation tables.
    Tables {
        algebra: PathBuf,
        /// Largest multiplicity for the substitution tables.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Print the constant K = |A0|^(2|A1|) + |A0|.
    #[command(name = "K")]
    K { algebra: PathBuf },
    /// Check an equational characterisation.
    Check {
        kind: CheckKind,
        algebra: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long)]
        mode: Option<ModeArg>,
    },
    /// Model check a counting EF forest formula.
    Modelcheck {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        forest: PathBuf,
        #[arg(long, default_value = "inclusive")]
        semantics: SemanticsArg,
    },
    /// Decide counting bisimilarity of two forests.
    Equiv {
        s: PathBuf,
        t: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        m: u64,
    },
    /// Decide bisimilarity of two forests.
    Bisim { s: PathBuf, t: PathBuf },
    /// Print the counting types of a forest and its vertices.
    Types {
        forest: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long)]
        m: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    BisimInvariance,
    Ef,
    Cef,
    CefAuto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    RefuteOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Inclusive,
    Literal,
}

/// A command's printable result and exit code.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<AlgebraPresentation, Error> {
    AlgebraPresentation::from_json(&read(path)?)
}

/// A forest file holds JSON or, failing that, a term.
fn load_forest(path: &Path) -> Result<ForestGraph, Error> {
    let text = read(path)?;
    let g = if text.trim_start().starts_with('{') {
        ForestGraph::from_json(&text)?
    } else {
        parse_unranked_term(text.trim())?
    };
    g.ensure_valid()?;
    Ok(g)
}

fn predicate(value: bool, key: &str) -> Outcome {
    Outcome {
        text: value.to_string(),
        json: json!({ key: value }),
        code: u8::from(!value),
    }
}

fn report(r: EquationReport) -> Outcome {
    Outcome {
        text: r.render(),
        json: r.to_json_value(),
        code: u8::from(!r.passed()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Validate { file, samples } => {
            let is_forest = file.extension().is_some_and(|e| e == "forest");
            if is_forest {
                let g = load_forest(file)?;
                return Ok(Outcome {
                    text: format!("valid forest: {} nodes, arity {}", g.len(), g.arity()),
                    json: json!({"valid": true, "nodes": g.len(), "arity": g.arity()}),
                    code: 0,
                });
            }
            let pres = load_algebra(file)?;
            let r = validate_presentation(&pres, *samples, 0)?;
            let mut text = format!(
                "{} ({} samples)",
                if r.passed() { "valid" } else { "INVALID" },
                r.samples
            );
            for (name, errs) in [
                ("unit law", &r.unit_law),
                ("associativity", &r.associativity),
                ("unique acceptance", &r.unique_acceptance),
                ("omega laws", &r.omega_laws),
            ] {
                for e in errs {
                    text.push_str(&format!("\n  {name}: {e}"));
                }
            }
            let mut v = serde_json::to_value(&r).expect("report serialises");
            v["valid"] = json!(r.passed());
            Ok(Outcome {
                text,
                json: v,
                code: u8::from(!r.passed()),
            })
        }
        Command::Eval { algebra, forest, m } => {
            let pres = load_algebra(algebra)?;
            let text = read(forest)?;
            let g = if text.trim_start().starts_with('{') {
                ForestGraph::from_json(&text)?
            } else {
                efcheck_core::forest::parse_forest_term(text.trim(), Some(pres.alphabet()))?
            };
            let m = m.unwrap_or(g.arity());
            let e = pres.evaluate(&g, m)?;
            let accepted = m == 0 && pres.accepted().is_some_and(|a| a.contains(&e));
            Ok(Outcome {
                text: e.clone(),
                json: json!({"element": e, "arity": m, "accepted": accepted}),
                code: 0,
            })
        }
        Command::Tables { algebra, k } => {
            let pres = load_algebra(algebra)?;
            let t = derive_tables(&pres, *k as usize)?;
            let v = t.to_json();
            Ok(Outcome {
                text: serde_json::to_string_pretty(&v).expect("tables serialise"),
                json: v,
                code: 0,
            })
        }
        Command::K { algebra } => {
            let k = compute_k(&load_algebra(algebra)?)?;
            Ok(Outcome {
                text: k.to_string(),
                json: json!({ "K": k }),
                code: 0,
            })
        }
        Command::Check {
            kind,
            algebra,
            k,
            mode,
        } => {
            let pres = load_algebra(algebra)?;
            let r = match kind {
                CheckKind::BisimInvariance => {
                    let mode = match mode {
                        Some(ModeArg::Full) => BisimMode::Full,
                        Some(ModeArg::RefuteOnly) => BisimMode::RefuteOnly,
                        None if pres.has_arity(4) => BisimMode::Full,
                        None => {
                            eprintln!(
                                "warning: no arity-4 elements listed; using refute-only mode"
                            );
                            BisimMode::RefuteOnly
                        }
                    };
                    check_bisim_invariance(&pres, mode)?
                }
                CheckKind::Ef => check_ef(&pres)?,
                CheckKind::Cef => {
                    let k = k.ok_or_else(|| Error::Malformed("check cef needs --k".into()))?;
                    check_cefk(&pres, k as usize)?
                }
                CheckKind::CefAuto => check_cef(&pres)?,
            };
            Ok(report(r))
        }
        Command::Modelcheck {
            formula,
            forest,
            semantics,
        } => {
            let phi = Formula::parse_forest(formula)?;
            let g = load_forest(forest)?;
            let sem = match semantics {
                SemanticsArg::Inclusive => Semantics::Inclusive,
                SemanticsArg::Literal => Semantics::Literal,
            };
            Ok(predicate(modelcheck(&g, &phi, sem)?, "holds"))
        }
        Command::Equiv { s, t, k, m } => {
            let (s, t) = (load_forest(s)?, load_forest(t)?);
            Ok(predicate(equiv(&s, &t, *k as usize, *m as usize)?, "equiv"))
        }
        Command::Bisim { s, t } => {
            let (s, t) = (load_forest(s)?, load_forest(t)?);
            Ok(predicate(bisimilar(&s, &t)?, "bisimilar"))
        }
        Command::Types { forest, k, m } => {
            let g = load_forest(forest)?;
            let table = TypeTable::new(*k as usize);
            let m = *m as usize;
            let forest_type = table.value(table.forest_type(&g, m)?).to_string();
            let nodes: Vec<String> = g
                .reachable()
                .into_iter()
                .map(|v| table.tp(&g, v, m).map(|id| table.value(id).to_string()))
                .collect::<Result<_, _>>()?;
            let mut text = format!("forest: {forest_type}");
            for (v, tp) in nodes.iter().enumerate() {
                text.push_str(&format!("\nnode {v}: {tp}"));
            }
            Ok(Outcome {
                text,
                json: json!({"k": k, "m": m, "forest": forest_type, "nodes": nodes}),
                code: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&out.json).expect("output serialises")
                );
            } else {
                println!("{}", out.text.trim_end());
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
