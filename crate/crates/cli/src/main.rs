//! `znfree`: command-line access to towers of HNN-extensions.
//!
//! Every verb prints one line of compact JSON on stdout.  Errors go to
//! stderr prefixed with their name.  Exit status is 0 on success, 1 for a
//! mathematical failure and 2 when the input could not be read.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use znfree::abelian::reduce_basis;
use znfree::axioms::check_axioms;
use znfree::complex::{build_blueprint, emit};
use znfree::length::{LengthEngine, LengthError};
use znfree::validate::validate_tower;
use znfree::weights::{build_constraints, lex_shortest_length, solve_weights, weighted_length};
use znfree::{Letter, TowerPresentation};

const DEFAULT_RADIUS: u64 = 4;

#[derive(Parser)]
#[command(name = "znfree", version, about = "Normal forms and length functions for towers of HNN-extensions")]
struct Cli {
    /// Radius bounding every ball-based search [default: 4].
    ///
    /// `wm` and `len --check-oracle` widen the default so that the input
    /// word itself lies inside the ball; an explicit value is used as given.
    #[arg(long, global = true, env = "ZNFREE_RADIUS")]
    radius: Option<u64>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the side conditions of every level.
    Validate { tower: PathBuf },
    /// Britton normal form and a minimal spelling of a word.
    Normalize { tower: PathBuf, word: String },
    /// Length of a word.
    Len {
        tower: PathBuf,
        word: String,
        /// Cross-check against lexicographic shortest paths in the Cayley graph.
        #[arg(long)]
        check_oracle: bool,
    },
    /// Gromov product c(g, f).
    Gromov { tower: PathBuf, g: String, f: String },
    /// Common beginning of g and f.
    Com { tower: PathBuf, g: String, f: String },
    /// Basis of the abelian subgroup generated by commuting words.
    ReduceBasis {
        tower: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Integer weights making every associated pair equally long.
    Weights { tower: PathBuf },
    /// Weighted word metric of a word under the solved weights.
    Wm { tower: PathBuf, word: String },
    /// Torus-gluing blueprint of the tower.
    Complex {
        tower: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sweep the length axioms over a ball.
    CheckAxioms { tower: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    /// A computation failed or found a violation.
    Domain(String),
    /// Input could not be read.
    Io(String),
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn load(path: &PathBuf) -> Result<TowerPresentation, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("IoError: {}: {e}", path.display())))?;
    TowerPresentation::parse(&bytes).map_err(domain)
}

fn word(tower: &TowerPresentation, text: &str) -> Result<Vec<Letter>, Failure> {
    Ok(tower.parse_word(text).map_err(domain)?.0)
}

fn show(tower: &TowerPresentation, w: &[Letter]) -> String {
    tower.format_letters(w)
}

/// Output on success; an optional failure still prints its report first.
struct Outcome {
    stdout: String,
    failure: Option<Failure>,
}

impl From<Value> for Outcome {
    fn from(v: Value) -> Outcome {
        Outcome { stdout: v.to_string(), failure: None }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let radius = cli.radius.unwrap_or(DEFAULT_RADIUS);
    Ok(match cli.verb {
        Verb::Validate { tower } => {
            let t = load(&tower)?;
            let report = validate_tower(&t, radius).map_err(domain)?;
            let stdout = serde_json::to_string(&report).expect("report serializes");
            Outcome { stdout, failure: report.first_error().map(domain) }
        }
        Verb::Normalize { tower, word: text } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let nf = engine.group().britton_reduce(&t.parse_word(&text).map_err(domain)?);
            let minimal = engine.length_reduce(&nf).map_err(domain)?;
            json!({
                "normal_form": t.format_word(&nf.word),
                "level": nf.tower_level,
                "minimal": t.format_word(&minimal),
                "length": engine.length_of(&minimal),
            })
            .into()
        }
        Verb::Len { tower, word: text, check_oracle } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let w = word(&t, &text)?;
            let length = engine.try_length(&w).map_err(domain)?;
            if !check_oracle {
                return Ok(json!({ "length": length }).into());
            }
            let r = cli.radius.unwrap_or_else(|| DEFAULT_RADIUS.max(w.len() as u64));
            let oracle = lex_shortest_length(&w, engine.group(), r)
                .map_err(|_| domain(LengthError::OracleBallExceeded(r)))?;
            if oracle != length {
                return Err(domain(LengthError::OracleMismatch { engine: length, oracle }));
            }
            json!({ "length": length, "oracle": oracle, "radius": r }).into()
        }
        Verb::Gromov { tower, g, f } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let c = engine.gromov_product(&word(&t, &g)?, &word(&t, &f)?).map_err(domain)?;
            json!({ "gromov_product": c }).into()
        }
        Verb::Com { tower, g, f } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let u = engine.common_beginning(&word(&t, &g)?, &word(&t, &f)?).map_err(domain)?;
            json!({ "common_beginning": show(&t, &u), "length": engine.length(&u) }).into()
        }
        Verb::ReduceBasis { tower, words } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let inputs = words.iter().map(|s| word(&t, s)).collect::<Result<Vec<_>, _>>()?;
            let basis = reduce_basis(&engine, &inputs, cli.radius).map_err(domain)?;
            json!({
                "basis": basis.gens.iter().map(|g| show(&t, g)).collect::<Vec<_>>(),
                "heights": basis.heights,
                "conjugator": show(&t, &basis.conjugator),
                "radius": basis.radius,
            })
            .into()
        }
        Verb::Weights { tower } => {
            let t = load(&tower)?;
            let ws = solve_weights(&build_constraints(&t)).map_err(domain)?;
            Outcome { stdout: serde_json::to_string(&ws).expect("weights serialize"), failure: None }
        }
        Verb::Wm { tower, word: text } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let ws = solve_weights(&build_constraints(&t)).map_err(domain)?;
            let w = word(&t, &text)?;
            let r = cli.radius.unwrap_or_else(|| DEFAULT_RADIUS.max(ws.word_weight(&w)));
            let wm = weighted_length(&w, &ws, engine.group(), r).map_err(domain)?;
            json!({ "wm": wm, "radius": r }).into()
        }
        Verb::Complex { tower, format } => {
            let t = load(&tower)?;
            let ws = solve_weights(&build_constraints(&t)).map_err(domain)?;
            let b = build_blueprint(&t, &ws).map_err(domain)?;
            let fmt = match format {
                Format::Json => "json",
                Format::Dot => "dot",
            };
            let text = emit(&b, fmt).map_err(domain)?;
            Outcome { stdout: text.trim_end().to_string(), failure: None }
        }
        Verb::CheckAxioms { tower } => {
            let t = load(&tower)?;
            let engine = LengthEngine::new(&t).map_err(domain)?;
            let ws = solve_weights(&build_constraints(&t)).map_err(domain)?;
            let report = check_axioms(&engine, &ws.as_vec(), radius);
            let failure = [
                ("L1", &report.l1),
                ("L2", &report.l2),
                ("L3", &report.l3),
                ("L4", &report.l4),
                ("L5", &report.l5),
                ("L6", &report.l6),
            ]
            .into_iter()
            .find(|(_, a)| !a.passed())
            .map(|(name, a)| {
                Failure::Domain(format!(
                    "AxiomViolation: {name} fails {} of {} checks at radius {radius}, e.g. {}",
                    a.violations,
                    a.checked,
                    a.first_counterexample.as_deref().unwrap_or("?")
                ))
            });
            Outcome { stdout: serde_json::to_string(&report).expect("report serializes"), failure }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (stdout, failure) = match run(cli) {
        Ok(o) => (Some(o.stdout), o.failure),
        Err(f) => (None, Some(f)),
    };
    if let Some(s) = stdout {
        println!("{s}");
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Some(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
