//! The `coh` command line. [`run`] is the whole program minus process I/O.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::coherence::{coherent_set_with, extension_interval_with, Book, EventList};
use crate::error::{Error, Result};
use crate::formula::{parse_event, EventFormula, VarContext};
use crate::fp::{
    chi_synthesis, decide_consequence_with, is_prob_substitution_with, local_deduction_exponent_with, parse_modal,
    verify_generality_with, verify_unifier_with, ModalFormula, ProbSubstitution, UnificationProblem,
};
use crate::limits::Limits;
use crate::polytope::Polytope;
use crate::rational::{format_point, format_rational, parse_rational, Point};

#[derive(Debug, Parser)]
#[command(name = "coh", version, about = "Exact coherence checking and FP(Ł,Ł) consequence")]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide coherence of a book.
    Check {
        #[command(flatten)]
        events: EventsArg,
        #[arg(long, num_args = 1.., required = true)]
        book: Vec<String>,
    },
    /// Print the coherent set of an event list.
    Set {
        #[command(flatten)]
        events: EventsArg,
    },
    /// Coherent prices for a new event given a coherent book.
    Extend {
        #[command(flatten)]
        events: EventsArg,
        #[arg(long, num_args = 1.., required = true)]
        book: Vec<String>,
        #[arg(long = "new")]
        new_event: String,
    },
    /// Probability logic queries.
    Fp {
        #[command(subcommand)]
        command: FpCommand,
    },
    /// Synthesize a formula whose oneset is a polytope; variables are p1, p2, ...
    Chi {
        /// Points spanning the polytope, coordinates separated by commas.
        #[arg(long, num_args = 1.., conflicts_with = "events")]
        points: Vec<String>,
        /// Use the coherent set of these events.
        #[arg(long, num_args = 1..)]
        events: Vec<String>,
    },
    /// Least n with premise^n -> conclusion provable.
    Ldt { premise: String, conclusion: String },
    /// Unifier checks.
    Unify {
        #[command(subcommand)]
        command: UnifyCommand,
    },
    /// Run a JSON query file (one query object or an array of them).
    Batch {
        file: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Args)]
struct EventsArg {
    #[arg(long, num_args = 1.., required = true)]
    events: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum FpCommand {
    /// Decide theoremhood.
    Prove { formula: String },
    /// Decide whether the premise entails the conclusion.
    Entail { premise: String, conclusion: String },
}

#[derive(Debug, Args)]
struct SubstitutionArgs {
    /// An identity `LHS RHS` of the unification problem.
    #[arg(long = "identity", num_args = 2, value_names = ["LHS", "RHS"], required = true)]
    identities: Vec<String>,
    /// `ATOM=FORMULA`, e.g. `P(x)=P(y) + P(y)`.
    #[arg(long)]
    sigma: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum UnifyCommand {
    /// Check that sigma unifies the identities.
    Verify {
        #[command(flatten)]
        problem: SubstitutionArgs,
    },
    /// Check that sigma = delta ∘ tau on every atom.
    Generality {
        #[command(flatten)]
        problem: SubstitutionArgs,
        #[arg(long)]
        tau: Vec<String>,
        #[arg(long)]
        delta: Vec<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionCap { .. } | Error::DepthCap { .. } => 3,
        Error::Internal(_) | Error::Unbounded | Error::ExponentBound(_) => 1,
        _ => 2,
    }
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = Limits::from_env().and_then(|limits| execute(&cli.command, &limits));
    match result {
        Ok(value) => Outcome {
            code: match cli.command {
                Command::Batch { .. } => batch_code(&value),
                _ => 0,
            },
            stdout: render(&value, cli.json),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(v: &Value, as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(v).expect("serializable");
        s.push('\n');
        return s;
    }
    let mut out = String::new();
    write_text(v, "", &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::Null => Some("-".into()),
        Value::Array(xs) if xs.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_))) => Some(format!(
            "({})",
            xs.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn write_text(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{indent}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        write_text(x, &format!("{indent}  "), out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{indent}- {s}\n")),
                    None => {
                        out.push_str(&format!("{indent}-\n"));
                        write_text(x, &format!("{indent}  "), out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{indent}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn execute(cmd: &Command, limits: &Limits) -> Result<Value> {
    match cmd {
        Command::Check { events, book } => {
            let e = EventList::parse(&events.events)?;
            check_value(&e, &parse_book(book)?, limits)
        }
        Command::Set { events } => set_value(&EventList::parse(&events.events)?, limits),
        Command::Extend {
            events,
            book,
            new_event,
        } => extend_value(
            &EventList::parse(&events.events)?,
            &parse_book(book)?,
            &parse_event(new_event)?,
            limits,
        ),
        Command::Fp { command } => match command {
            FpCommand::Prove { formula } => entail_value(&ModalFormula::Top, &parse_modal(formula)?, limits),
            FpCommand::Entail { premise, conclusion } => {
                entail_value(&parse_modal(premise)?, &parse_modal(conclusion)?, limits)
            }
        },
        Command::Chi { points, events } => {
            let (poly, k) = if events.is_empty() {
                if points.is_empty() {
                    return Err(Error::EmptyInput);
                }
                let pts = points.iter().map(|p| parse_point(p)).collect::<Result<Vec<_>>>()?;
                let dim = pts[0].len();
                limits.check_events(dim)?;
                (Polytope::hull_capped(&pts, limits.max_events)?, dim)
            } else {
                let e = EventList::parse(events)?;
                let set = coherent_set_with(&e, limits, &Default::default())?;
                (set.polytope().clone(), e.len())
            };
            let ctx = VarContext::from_names((1..=k).map(|i| format!("p{i}")));
            let chi = chi_synthesis(&poly, &ctx)?;
            Ok(json!({ "formula": chi.canonical() }))
        }
        Command::Ldt { premise, conclusion } => ldt_value(&parse_modal(premise)?, &parse_modal(conclusion)?, limits),
        Command::Unify { command } => match command {
            UnifyCommand::Verify { problem } => {
                let (p, sigma) = parse_problem(problem)?;
                Ok(json!({ "holds": verify_unifier_with(&p, &sigma, limits)? }))
            }
            UnifyCommand::Generality { problem, tau, delta } => {
                let (p, sigma) = parse_problem(problem)?;
                let tau = parse_substitution(tau)?;
                let delta = parse_substitution(delta)?;
                Ok(json!({ "holds": verify_generality_with(&sigma, &tau, &delta, &p, limits)? }))
            }
        },
        Command::Batch { file, jobs } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::InvalidInput(format!("cannot read {file}: {e}")))?;
            batch_value(&text, *jobs, limits)
        }
    }
}

fn parse_book(prices: &[String]) -> Result<Book> {
    Book::new(prices.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?)
}

fn parse_point(text: &str) -> Result<Point> {
    text.split(',').map(parse_rational).collect()
}

fn parse_substitution(pairs: &[String]) -> Result<ProbSubstitution> {
    let split = pairs
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(a, f)| (a.to_string(), f.to_string()))
                .ok_or_else(|| Error::InvalidInput(format!("expected ATOM=FORMULA, found `{p}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    ProbSubstitution::parse(&split)
}

fn parse_problem(args: &SubstitutionArgs) -> Result<(UnificationProblem, ProbSubstitution)> {
    let ids = args
        .identities
        .chunks(2)
        .map(|c| Ok((parse_modal(&c[0])?, parse_modal(&c[1])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((UnificationProblem::new(ids)?, parse_substitution(&args.sigma)?))
}

fn check_value(events: &EventList, book: &Book, limits: &Limits) -> Result<Value> {
    let set = coherent_set_with(events, limits, &Default::default())?;
    let verdict = set.check(book)?;
    Ok(serde_json::to_value(verdict.to_json()).expect("serializable"))
}

fn set_value(events: &EventList, limits: &Limits) -> Result<Value> {
    let set = coherent_set_with(events, limits, &Default::default())?;
    let poly = set.polytope().to_json();
    Ok(json!({
        "events": events.events().iter().map(EventFormula::canonical).collect::<Vec<_>>(),
        "vertices": poly.vertices,
        "halfspaces": poly.halfspaces,
        "valuations": set.preimages().iter().map(|p| format_point(p)).collect::<Vec<_>>(),
    }))
}

fn extend_value(events: &EventList, book: &Book, psi: &EventFormula, limits: &Limits) -> Result<Value> {
    match extension_interval_with(events, book, psi, limits) {
        Ok((lo, hi)) => Ok(json!({ "lo": format_rational(&lo), "hi": format_rational(&hi) })),
        Err(Error::Incoherent(db)) => Ok(json!({
            "coherent": false,
            "dutch_book": {
                "stakes": format_point(&db.stakes),
                "guaranteed_loss": format_rational(&db.guaranteed_loss),
            }
        })),
        Err(e) => Err(e),
    }
}

fn entail_value(premise: &ModalFormula, conclusion: &ModalFormula, limits: &Limits) -> Result<Value> {
    let c = decide_consequence_with(premise, conclusion, limits)?;
    Ok(serde_json::to_value(c.to_json()).expect("serializable"))
}

fn ldt_value(premise: &ModalFormula, conclusion: &ModalFormula, limits: &Limits) -> Result<Value> {
    let c = decide_consequence_with(premise, conclusion, limits)?;
    let mut j = c.to_json();
    if c.holds {
        j.exponent = local_deduction_exponent_with(premise, conclusion, limits)?.map(u64::from);
    }
    Ok(serde_json::to_value(j).expect("serializable"))
}

/// One query of a batch file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    #[serde(default)]
    pub events: Vec<String>,
    pub book: Option<HashMap<String, String>>,
    /// Event whose coherent price range is asked for; needs `book`.
    pub new: Option<String>,
    pub premise: Option<String>,
    pub conclusion: Option<String>,
    pub substitution: Option<HashMap<String, String>>,
    pub identities: Option<Vec<(String, String)>>,
}

impl QueryFile {
    fn book_for(&self, events: &EventList) -> Result<Book> {
        let raw = self.book.as_ref().expect("book present");
        let mut by_event: HashMap<String, String> = HashMap::new();
        for (k, v) in raw {
            by_event.insert(parse_event(k)?.canonical(), v.clone());
        }
        let prices = events
            .events()
            .iter()
            .map(|e| {
                let key = e.canonical();
                by_event
                    .get(&key)
                    .ok_or_else(|| Error::InvalidInput(format!("book has no price for `{key}`")))
                    .and_then(|p| parse_rational(p))
            })
            .collect::<Result<Vec<_>>>()?;
        Book::new(prices)
    }

    fn substitution(&self) -> Result<ProbSubstitution> {
        let pairs: Vec<(String, String)> = self
            .substitution
            .iter()
            .flatten()
            .map(|(a, f)| (a.clone(), f.clone()))
            .collect();
        ProbSubstitution::parse(&pairs)
    }

    pub fn run(&self, limits: &Limits) -> Result<Value> {
        if let Some(ids) = &self.identities {
            let ids = ids
                .iter()
                .map(|(l, r)| Ok((parse_modal(l)?, parse_modal(r)?)))
                .collect::<Result<Vec<_>>>()?;
            let p = UnificationProblem::new(ids)?;
            return Ok(json!({ "holds": verify_unifier_with(&p, &self.substitution()?, limits)? }));
        }
        if self.premise.is_some() || self.conclusion.is_some() {
            let premise = match &self.premise {
                Some(p) => parse_modal(p)?,
                None => ModalFormula::Top,
            };
            let conclusion = match &self.conclusion {
                Some(c) => parse_modal(c)?,
                None => ModalFormula::Top,
            };
            return entail_value(&premise, &conclusion, limits);
        }
        let events = EventList::parse(&self.events)?;
        if self.substitution.is_some() {
            let c = is_prob_substitution_with(&self.substitution()?, &events, limits)?;
            let mut v = json!({ "holds": c.holds });
            if let Some(w) = c.witness {
                v["witness"] = json!(format_point(&w));
            }
            return Ok(v);
        }
        match (&self.book, &self.new) {
            (Some(_), Some(new)) => extend_value(&events, &self.book_for(&events)?, &parse_event(new)?, limits),
            (Some(_), None) => check_value(&events, &self.book_for(&events)?, limits),
            (None, Some(_)) => Err(Error::InvalidInput("`new` requires a `book`".into())),
            (None, None) => set_value(&events, limits),
        }
    }
}

fn batch_value(text: &str, jobs: usize, limits: &Limits) -> Result<Value> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("invalid JSON: {e}")))?;
    let items = match doc {
        Value::Array(xs) => xs,
        other => vec![other],
    };
    let queries = items
        .into_iter()
        .map(|v| serde_json::from_value::<QueryFile>(v).map_err(|e| Error::InvalidInput(format!("bad query: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Mutex<Option<Value>>> = queries.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, queries.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(q) = queries.get(i) else { break };
                let v = match q.run(limits) {
                    Ok(v) => v,
                    Err(e) => json!({ "error": e.to_string(), "code": exit_code(&e) }),
                };
                *results[i].lock().unwrap() = Some(v);
            });
        }
    });
    Ok(Value::Array(
        results
            .into_iter()
            .map(|m| m.into_inner().unwrap().expect("every query ran"))
            .collect(),
    ))
}

// Exit code of a batch: that of the first failed query, else 0.
fn batch_code(v: &Value) -> i32 {
    v.as_array()
        .into_iter()
        .flatten()
        .find_map(|r| r.get("code").and_then(Value::as_i64))
        .unwrap_or(0) as i32
}
