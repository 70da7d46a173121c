//! Command-line front end. [`run_cli`] does all the work and returns the exit code and
//! output, so it can be driven from tests without spawning a process.
//!
//! Exit codes: 0 valid / exists, 1 invalid / does not exist, 2 usage error, input error or
//! exhausted budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use dlmcheck::decide::{
    decide_dlm, decide_lg_inverse_free, PreorderRel, SolverConfig, SubtermSet, Verdict,
};
use dlmcheck::invelim::{decide_lg, eliminate_inverses};
use dlmcheck::lift::{lift_preorder, verify_preorder};
use dlmcheck::models::ChainEndo;
use dlmcheck::oracle::{
    enumerate_endomorphisms, enumerate_ordered_monoids, oracle_dlm_validity, OracleVerdict,
    DEFAULT_MAX_ASSIGNMENTS,
};
use dlmcheck::rightorder::{
    right_order_exists_finite_monoid, right_order_exists_free, FiniteMonoid, OrderQuery,
};
use dlmcheck::search::{Budget, Tri, TriMatrix};
use dlmcheck::terms::{parse_statement, parse_word, LTerm, MonWord, ParseOptions, Statement};
use dlmcheck::Error;

#[derive(Parser, Debug)]
#[command(name = "dlmcheck", version, about = "Decide inequalities in distributive lattice-ordered monoids and lattice-ordered groups")]
pub struct Cli {
    /// Search node limit per statement.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,
    /// Wall-clock limit per statement, in seconds.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_seconds: u64,
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validity in all distributive lattice-ordered monoids (inverse-free input).
    DecideDlm { statement: String },
    /// Validity in all lattice-ordered groups, by eliminating inverses.
    DecideLg { statement: String },
    /// Validity of an inverse-free statement in all lattice-ordered groups, by strict search.
    DecideLgInvfree { statement: String },
    /// Print the inverse-free statements equivalent to a group statement.
    Eliminate { statement: String },
    /// Whether strict constraints `s < t` (one per line) extend to a right order on the free monoid.
    RightOrderFree {
        #[arg(long)]
        constraints: PathBuf,
    },
    /// Search for a right order on a finite monoid given as JSON {"size", "unit", "table"}.
    RightOrderMonoid {
        #[arg(long)]
        monoid: PathBuf,
    },
    /// Exhaustive check in the order-endomorphisms of an N-element chain.
    Oracle {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        chain: u64,
        statement: String,
    },
    /// List order-endomorphisms of an N-chain or totally ordered monoids of size N.
    Enumerate {
        what: Enumerable,
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Lift a right-invariant preorder, given as JSON {"universe": [...], "matrix": [[...]]}.
    Lift {
        #[arg(long)]
        preorder: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Enumerable {
    Endos,
    OrderedMonoids,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    positive: bool,
    text: String,
    json: Json,
}

pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput { code: 2, stdout: String::new(), stderr: text }
            } else {
                CliOutput { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Text => r.text,
                Format::Json => serde_json::to_string_pretty(&r.json).expect("json") + "\n",
            };
            CliOutput { code: if r.positive { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = match cli.format {
                Format::Text => String::new(),
                Format::Json => {
                    serde_json::to_string_pretty(&json!({ "error": e.to_string() })).expect("json")
                        + "\n"
                }
            };
            CliOutput { code: 2, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn config(cli: &Cli) -> SolverConfig {
    SolverConfig {
        budget: Budget {
            max_nodes: cli.max_nodes,
            max_time: Some(Duration::from_secs(cli.max_seconds)),
        },
        threads: cli.threads as usize,
        ..SolverConfig::default()
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Json, Error> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

/// Words with explicit `*` so they read back through the parser.
fn word_text(w: &MonWord) -> String {
    LTerm::from_word(w).to_string()
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let cfg = config(cli);
    match &cli.command {
        Command::DecideDlm { statement } => {
            let s = parse_statement(statement)?;
            Ok(verdict_report(&s, &decide_dlm(&s, &cfg)?))
        }
        Command::DecideLgInvfree { statement } => {
            let s = parse_statement(statement)?;
            Ok(verdict_report(&s, &decide_lg_inverse_free(&s, &cfg)?))
        }
        Command::DecideLg { statement } => {
            let s = parse_statement(statement)?;
            let v = decide_lg(&s, &cfg)?;
            let mut r = verdict_report(&s, &v.verdict);
            let eliminated: Vec<String> = v.eliminated.iter().map(|e| e.to_string()).collect();
            let mut text = String::from("inverse-free equivalents:\n");
            for e in &eliminated {
                text += &format!("  {e}\n");
            }
            if let Some(k) = v.failing {
                text += &format!("failing statement: {}\n", eliminated[k]);
            }
            r.text = text + &r.text;
            r.json["eliminated"] = json!(eliminated);
            r.json["failing"] = json!(v.failing);
            Ok(r)
        }
        Command::Eliminate { statement } => {
            let s = parse_statement(statement)?;
            let out: Vec<String> = eliminate_inverses(&s, cfg.size_cap)?
                .iter()
                .map(Statement::to_string)
                .collect();
            Ok(Report {
                positive: true,
                text: out.iter().map(|l| format!("{l}\n")).collect(),
                json: json!({ "statement": s.to_string(), "eliminated": out }),
            })
        }
        Command::RightOrderFree { constraints } => {
            let q = parse_constraints(&read(constraints)?)?;
            let a = right_order_exists_free(&q, &cfg)?;
            let mut json = json!({
                "exists": a.exists,
                "statement": a.statement.as_ref().map(|s| s.to_string()),
            });
            let mut text = format!(
                "{}\n",
                if a.exists { "a right order exists" } else { "no right order exists" }
            );
            if let Some(s) = &a.statement {
                text += &format!("equivalent failure of: {s}\n");
            }
            if let Some(r) = a.verdict.as_ref().and_then(Verdict::refutation) {
                json["countermodel"] = r.countermodel.to_json()?;
                text += &format!("{}\n", r.countermodel);
            }
            Ok(Report { positive: a.exists, text, json })
        }
        Command::RightOrderMonoid { monoid } => {
            let m = FiniteMonoid::from_json(&read_json(monoid)?)?;
            let (order, stats) = right_order_exists_finite_monoid(&m, &cfg.budget)?;
            let text = match &order {
                Some(o) => {
                    let parts: Vec<String> = o.ascending.iter().map(|a| a.to_string()).collect();
                    format!("right order: {}\n", parts.join(" < "))
                }
                None => "no right order exists\n".to_string(),
            };
            Ok(Report {
                positive: order.is_some(),
                text,
                json: json!({
                    "exists": order.is_some(),
                    "order": order.as_ref().map(|o| o.ascending.clone()),
                    "nodes": stats.nodes,
                }),
            })
        }
        Command::Oracle { chain, statement } => {
            let s = parse_statement(statement)?;
            let n = *chain as usize;
            Ok(match oracle_dlm_validity(&s, n, DEFAULT_MAX_ASSIGNMENTS)? {
                OracleVerdict::Valid => Report {
                    positive: true,
                    text: format!("valid in End({n})\n"),
                    json: json!({ "verdict": "valid", "chain": n, "statement": s.to_string() }),
                },
                OracleVerdict::Invalid { assignment, point } => {
                    let mut text = format!("invalid in End({n}) at point {point}\n");
                    for (v, f) in &assignment {
                        text += &format!("  {v} ↦ {f}\n");
                    }
                    let assignment: serde_json::Map<String, Json> = assignment
                        .iter()
                        .map(|(v, f)| (v.to_string(), json!(f.map())))
                        .collect();
                    Report {
                        positive: false,
                        text,
                        json: json!({
                            "verdict": "invalid",
                            "chain": n,
                            "statement": s.to_string(),
                            "assignment": assignment,
                            "point": point,
                        }),
                    }
                }
            })
        }
        Command::Enumerate { what, n } => {
            let n = *n as usize;
            Ok(match what {
                Enumerable::Endos => {
                    let all = enumerate_endomorphisms(n);
                    let text = format!(
                        "{} order-endomorphisms\n{}",
                        all.len(),
                        all.iter().map(|f| format!("{f}\n")).collect::<String>()
                    );
                    let maps: Vec<&[usize]> = all.iter().map(ChainEndo::map).collect();
                    Report { positive: true, text, json: json!(maps) }
                }
                Enumerable::OrderedMonoids => {
                    let all = enumerate_ordered_monoids(n, &cfg.budget)?;
                    let mut text = format!("{} totally ordered monoids\n", all.len());
                    for m in &all {
                        text += &format!("unit {}: {:?}\n", m.monoid.unit(), m.monoid.table());
                    }
                    let list: Vec<Json> = all.iter().map(|m| m.monoid.to_json()).collect();
                    Report { positive: true, text, json: json!(list) }
                }
            })
        }
        Command::Lift { preorder } => {
            let p = parse_preorder(&read_json(preorder)?)?;
            let lifted = lift_preorder(&p)?;
            let report = verify_preorder(&lifted, true, None);
            if let Some(v) = report.first() {
                return Err(Error::CertificateRejected(format!("lifted relation: {v}")));
            }
            let u = lifted.universe();
            let universe: Vec<String> = u.words().iter().map(word_text).collect();
            let matrix: Vec<Vec<bool>> = (0..u.len())
                .map(|i| (0..u.len()).map(|j| lifted.le(i, j)).collect())
                .collect();
            Ok(Report {
                positive: true,
                text: format!("{lifted}\n"),
                json: json!({ "universe": universe, "matrix": matrix, "order": lifted.to_string() }),
            })
        }
    }
}

fn verdict_report(s: &Statement, v: &Verdict) -> Report {
    let stats = v.stats();
    match v {
        Verdict::Valid { inequalities, .. } => Report {
            positive: true,
            text: format!(
                "valid ({inequalities} basic inequalities, {} search nodes)\n",
                stats.nodes
            ),
            json: json!({
                "verdict": "valid",
                "statement": s.to_string(),
                "inequalities": inequalities,
                "nodes": stats.nodes,
                "conflicts": stats.conflicts,
            }),
        },
        Verdict::Invalid { refutation, .. } => {
            let r = refutation;
            let text = format!(
                "invalid\nfailing inequality: {}\npreorder: {}\ncountermodel: {}\n",
                r.inequality.to_statement(),
                r.preorder,
                r.countermodel
            );
            let countermodel = r
                .countermodel
                .to_json()
                .unwrap_or_else(|e| json!({ "error": e.to_string() }));
            Report {
                positive: false,
                text,
                json: json!({
                    "verdict": "invalid",
                    "statement": s.to_string(),
                    "inequality": r.inequality.to_statement().to_string(),
                    "preorder": r.preorder.to_string(),
                    "countermodel": countermodel,
                    "nodes": stats.nodes,
                    "conflicts": stats.conflicts,
                }),
            }
        }
    }
}

/// One `word < word` per line; blank lines and `#` comments are skipped.
pub fn parse_constraints(text: &str) -> Result<OrderQuery, Error> {
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (s, t) = line.split_once('<').ok_or_else(|| Error::Syntax {
            line: n + 1,
            column: 1,
            message: "expected `word < word`".into(),
        })?;
        let at_line = |e: Error| match e {
            Error::Syntax { column, message, .. } => Error::Syntax { line: n + 1, column, message },
            other => other,
        };
        let opts = ParseOptions::default();
        pairs.push((
            parse_word(s, opts).map_err(at_line)?,
            parse_word(t, opts).map_err(at_line)?,
        ));
    }
    Ok(OrderQuery::new(pairs))
}

/// `{"universe": ["e", "x", "x*y", ...], "matrix": [[true, ...], ...]}` with
/// `matrix[i][j]` meaning `universe[i] ⪯ universe[j]`.
pub fn parse_preorder(v: &Json) -> Result<PreorderRel, Error> {
    let bad = |m: &str| Error::Malformed(m.to_string());
    let words = v["universe"]
        .as_array()
        .ok_or_else(|| bad("missing universe"))?
        .iter()
        .map(|w| {
            let w = w.as_str().ok_or_else(|| bad("universe entries must be strings"))?;
            parse_word(w, ParseOptions::default())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = words.len();
    let universe = Arc::new(SubtermSet::from_words(words.clone())?);
    if universe.len() != n {
        return Err(bad("universe lists a word twice"));
    }
    let rows = v["matrix"].as_array().ok_or_else(|| bad("missing matrix"))?;
    if rows.len() != n {
        return Err(bad("matrix size does not match the universe"));
    }
    // Rows follow the listed order; the relation is indexed in shortlex order.
    let mut m = TriMatrix::new(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| bad("bad matrix row"))?;
        for (j, cell) in row.iter().enumerate() {
            let b = cell.as_bool().ok_or_else(|| bad("matrix entries must be booleans"))?;
            let a = universe.index_of(&words[i]).expect("listed word");
            let c = universe.index_of(&words[j]).expect("listed word");
            m.put(a, c, Tri::from_bool(b));
        }
    }
    PreorderRel::new(universe, m)
}
