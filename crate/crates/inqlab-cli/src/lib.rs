//! The `inqlab` command line: one JSON object per output line on stdout, diagnostics on stderr.
//!
//! Exit codes: 0 when the result was computed, 1 when a property was refuted or a countermodel
//! was found, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::error::Error;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use inqlab::algebra::{
    birkhoff_reduce, is_core_generated, is_well_connected, refuting_valuation, validate, AlgebraError, CoreValuation,
};
use inqlab::corpus::{standard_corpus, DEFAULT_SEED};
use inqlab::duality::{algebra_to_frame, cross_check, dual_algebra};
use inqlab::io::{decode_algebra, decode_frame, decode_model, encode_frame, AlgebraFile, ModelFile};
use inqlab::team::{countermodel_search, eval_team, frame_valid, SearchOptions, SearchOutcome, TeamEvaluator};
use inqlab::{dnf, parse, Axiom, FiniteAlgebra, Flavour, Formula, Frame, Team};
use serde_json::{json, Value};

type Fallible<T> = Result<T, Box<dyn Error>>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "inqlab",
    version,
    about = "Team semantics, algebras and duality for inquisitive and dependence logic"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// `inq` or `dep`; algebra verbs default to the flavour of the input algebra.
    #[arg(long, global = true)]
    pub flavour: Option<Flavour>,
    /// Restrict countermodel search to discrete frames.
    #[arg(long, global = true)]
    pub classical: bool,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_worlds: usize,
    /// Search frames up to isomorphism only.
    #[arg(long, global = true)]
    pub dedup_iso: bool,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed of the random part of the built-in formula corpus.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report the first countermodel in enumeration order.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Parse and pretty-print a formula.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Disjunctive normal form: the list of standard disjuncts.
    Dnf {
        #[arg(long)]
        formula: String,
    },
    /// Support of a formula at a team of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated world names; empty for the empty team.
        #[arg(long)]
        team: String,
        #[arg(long)]
        formula: String,
    },
    /// Validity in a model or on a frame under team semantics.
    ValidTeam {
        #[arg(long, conflicts_with = "frame", required_unless_present = "frame")]
        model: Option<PathBuf>,
        #[arg(long)]
        frame: Option<PathBuf>,
        #[arg(long)]
        formula: String,
    },
    /// Validity in an algebra; without `--formula` the built-in corpus is checked.
    ValidAlg {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Search for a countermodel up to `--max-worlds`.
    Countermodel {
        #[arg(long)]
        formula: String,
    },
    /// Validate the algebra axioms of a flavour.
    CheckAlgebra {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// The dual algebra of a frame.
    Dualize {
        #[arg(long)]
        frame: PathBuf,
    },
    /// The dual frame of an algebra.
    DualizeBack {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Team semantics against the dual algebraic model; without `--formula` the built-in corpus
    /// is checked.
    CrossCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Reduce a refuting algebra to a finite, core-generated, well-connected one.
    Reduce {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Instantiate an axiom schema A1..A15; slots default to p, q, r.
    Axiom {
        name: Axiom,
        /// A formula for the next slot; repeat once per slot.
        #[arg(long = "arg")]
        args: Vec<String>,
    },
}

/// Parses `argv` (program name first), runs the verb and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let go = || {
        let mut buf = Vec::new();
        let result = dispatch(&cli, &mut buf).map_err(|e| e.to_string());
        (buf, result)
    };
    let (buf, result) = match cli.opts.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(e) => (Vec::new(), Err(e.to_string())),
        },
        None => go(),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "inqlab: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Fallible<()> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn read(path: &Path) -> Fallible<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_algebra(path: &Path) -> Fallible<FiniteAlgebra> {
    Ok(decode_algebra(&read(path)?)?)
}

pub fn parse_team(f: &Frame, text: &str) -> Fallible<Team> {
    let mut t = Team::EMPTY;
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let w = f.world(name).ok_or_else(|| format!("unknown world {name:?}"))?;
        t = t.union(Team::singleton(w));
    }
    Ok(t)
}

fn valuation_json(a: &FiniteAlgebra, mu: &CoreValuation) -> Value {
    let named: BTreeMap<&str, &str> = mu.iter().map(|(p, &e)| (p.as_str(), a.name(e))).collect();
    json!(named)
}

fn corpus_or(formula: &Option<String>, seed: u64) -> Fallible<Vec<Formula>> {
    match formula {
        Some(text) => Ok(vec![parse(text)?]),
        None => Ok(standard_corpus(seed)),
    }
}

fn search_options(opts: &GlobalOpts) -> SearchOptions {
    let mut s = SearchOptions::new(opts.max_worlds);
    s.classical = opts.classical;
    s.dedup_iso = opts.dedup_iso;
    s.jobs = opts.jobs;
    s.deterministic = opts.deterministic;
    s
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Fallible<i32> {
    let opts = &cli.opts;
    match &cli.verb {
        Verb::Parse { formula } => {
            let phi = parse(formula)?;
            emit(
                out,
                &json!({
                    "formula": phi.to_string(),
                    "atoms": phi.atoms(),
                    "standard": phi.is_standard(),
                    "intuitionistic": phi.is_intuitionistic(),
                    "size": phi.size(),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Verb::Dnf { formula } => {
            let parts: Vec<String> = dnf(&parse(formula)?).iter().map(Formula::to_string).collect();
            emit(out, &json!({ "dnf": parts }))?;
            Ok(EXIT_OK)
        }
        Verb::Eval { model, team, formula } => {
            let m = decode_model(&read(model)?)?;
            let t = parse_team(m.frame(), team)?;
            let supports = eval_team(&m, t, &parse(formula)?)?;
            emit(out, &json!({ "supports": supports }))?;
            Ok(EXIT_OK)
        }
        Verb::ValidTeam { model, frame, formula } => {
            let phi = parse(formula)?;
            let line = match (model, frame) {
                (Some(path), _) => {
                    let m = decode_model(&read(path)?)?;
                    let failure = TeamEvaluator::new(&m, &phi).first_failure();
                    json!({
                        "valid": failure.is_none(),
                        "failing_team": failure.map(|t| m.frame().team_names(t)),
                    })
                }
                (None, Some(path)) => json!({ "valid": frame_valid(&decode_frame(&read(path)?)?, &phi) }),
                (None, None) => return Err("one of --model or --frame is required".into()),
            };
            let valid = line["valid"] == Value::Bool(true);
            emit(out, &line)?;
            Ok(if valid { EXIT_OK } else { EXIT_REFUTED })
        }
        Verb::ValidAlg { algebra, formula } => {
            let a = load_algebra(algebra)?;
            let mut code = EXIT_OK;
            for phi in corpus_or(formula, opts.seed)? {
                if formula.is_none() && !a.has_tensor() && !phi.is_intuitionistic() {
                    continue;
                }
                let refuter = refuting_valuation(&a, &phi)?;
                if refuter.is_some() {
                    code = EXIT_REFUTED;
                }
                emit(
                    out,
                    &json!({
                        "formula": phi.to_string(),
                        "valid": refuter.is_none(),
                        "refuting_valuation": refuter.map(|mu| valuation_json(&a, &mu)),
                    }),
                )?;
            }
            Ok(code)
        }
        Verb::Countermodel { formula } => {
            let phi = parse(formula)?;
            match countermodel_search(&phi, &search_options(opts)) {
                SearchOutcome::Countermodel { model, team } => {
                    emit(
                        out,
                        &json!({
                            "countermodel": ModelFile::from_model(&model),
                            "team": model.frame().team_names(team),
                        }),
                    )?;
                    Ok(EXIT_REFUTED)
                }
                SearchOutcome::ValidUpTo(n) => {
                    emit(out, &json!({ "valid_up_to": n }))?;
                    Ok(EXIT_OK)
                }
            }
        }
        Verb::CheckAlgebra { algebra } => {
            let a = load_algebra(algebra)?;
            let flavour = opts.flavour.unwrap_or(a.flavour());
            match validate(&a, flavour) {
                Ok(()) => {
                    emit(
                        out,
                        &json!({
                            "flavour": flavour.to_string(),
                            "valid": true,
                            "elements": a.len(),
                            "core_generated": is_core_generated(&a),
                            "well_connected": is_well_connected(&a),
                        }),
                    )?;
                    Ok(EXIT_OK)
                }
                Err(v) => {
                    emit(
                        out,
                        &json!({ "flavour": flavour.to_string(), "valid": false, "law": v.law, "detail": v.detail }),
                    )?;
                    Ok(EXIT_REFUTED)
                }
            }
        }
        Verb::Dualize { frame } => {
            let f = decode_frame(&read(frame)?)?;
            let d = dual_algebra(&f, opts.flavour.unwrap_or(Flavour::Inq))?;
            let mut file = AlgebraFile::from_algebra(&d.algebra);
            file.provenance = Some(d.provenance());
            writeln!(out, "{}", serde_json::to_string(&file)?)?;
            Ok(EXIT_OK)
        }
        Verb::DualizeBack { algebra } => {
            let (g, _) = algebra_to_frame(&load_algebra(algebra)?)?;
            writeln!(out, "{}", encode_frame(&g))?;
            Ok(EXIT_OK)
        }
        Verb::CrossCheck { model, formula } => {
            let m = decode_model(&read(model)?)?;
            let flavour = opts.flavour.unwrap_or(Flavour::Inq);
            let mut code = EXIT_OK;
            for phi in corpus_or(formula, opts.seed)? {
                if formula.is_none() && flavour == Flavour::Inq && !phi.is_intuitionistic() {
                    continue;
                }
                let c = cross_check(&m, &phi, flavour)?;
                if !c.agrees() {
                    code = EXIT_REFUTED;
                }
                emit(
                    out,
                    &json!({ "formula": phi.to_string(), "team": c.team, "algebra": c.algebra, "agrees": c.agrees() }),
                )?;
            }
            Ok(code)
        }
        Verb::Reduce { algebra, formula } => {
            let a = load_algebra(algebra)?;
            let phi = parse(formula)?;
            match birkhoff_reduce(&a, &phi, opts.flavour.unwrap_or(a.flavour())) {
                Ok(r) => {
                    emit(
                        out,
                        &json!({
                            "algebra": AlgebraFile::from_algebra(&r.algebra),
                            "valuation": valuation_json(&r.algebra, &r.valuation),
                        }),
                    )?;
                    Ok(EXIT_REFUTED)
                }
                Err(AlgebraError::PhiIsValid) => {
                    emit(out, &json!({ "valid": true }))?;
                    Ok(EXIT_OK)
                }
                Err(e) => Err(e.into()),
            }
        }
        Verb::Axiom { name, args } => {
            let slots: Vec<Formula> = if args.is_empty() {
                ["p", "q", "r"]
                    .iter()
                    .take(name.arity())
                    .map(|s| Formula::atom(s))
                    .collect()
            } else {
                args.iter().map(|s| parse(s)).collect::<Result<_, _>>()?
            };
            let phi = name.instantiate(&slots)?;
            emit(out, &json!({ "axiom": name.to_string(), "formula": phi.to_string() }))?;
            Ok(EXIT_OK)
        }
    }
}
