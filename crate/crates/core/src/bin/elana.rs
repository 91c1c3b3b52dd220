//! Command-line front end for the workbench.
//!
//! Exit codes: 0 when the checked property holds (or everything passed),
//! 1 when a violation, mismatch or countermodel was found, 2 on usage or
//! input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use elana::concept::Declarations;
use elana::doc::InterpretationDoc;
use elana::fixtures;
use elana::inference::{closure, ClosureConfig, Fact};
use elana::interp::{Interpretation, Mode};
use elana::oracle::gen::GenParams;
use elana::oracle::matrix::{run_divergence_matrix, CellVerdict};
use elana::oracle::props::{run_sweep, PropId, ALL_PROPS};
use elana::oracle::search::{countermodel_search, Bounds, SearchOutcome};
use elana::oracle::mu_naive;
use elana::parse::{parse_quad, parse_statement, parse_tbox};
use elana::proportions::{ap_concepts, ApLevel};
use elana::tbox::{check_tbox, Statement, TBox};
use elana::translations::mu;

#[derive(Parser)]
#[command(
    name = "elana",
    about = "Reasoning workbench for feature-enriched interpretations with analogy assertions",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strong,
    Weak,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strong => Mode::Strong,
            ModeArg::Weak => Mode::Weak,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Features,
    Extensions,
    Both,
}

impl From<LevelArg> for ApLevel {
    fn from(l: LevelArg) -> ApLevel {
        match l {
            LevelArg::Features => ApLevel::Features,
            LevelArg::Extensions => ApLevel::Extensions,
            LevelArg::Both => ApLevel::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate an interpretation document against its declared mode.
    Validate {
        /// Interpretation document (JSON).
        doc: PathBuf,
    },
    /// Check every statement of a TBox file against an interpretation.
    Check {
        doc: PathBuf,
        /// TBox file (line-oriented).
        tbox: PathBuf,
    },
    /// Compute the set of domain translations between two concepts.
    Mu {
        doc: PathBuf,
        /// Left concept, s-expression syntax (e.g. "(and Cat Young)").
        c: String,
        /// Right concept.
        d: String,
        /// Also compute the result by brute-force enumeration and compare.
        #[arg(long)]
        naive: bool,
    },
    /// Evaluate an analogy assertion "C1 : C2 :: D1 : D2".
    Ana {
        doc: PathBuf,
        /// The quadruple, e.g. "Cat : WildCat :: Dog : Wolf".
        quad: String,
        /// Require equality of the two translation sets (sana).
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate an analogical proportion "C1 : C2 :: D1 : D2".
    Ap {
        doc: PathBuf,
        quad: String,
        /// Carrier to evaluate on.
        #[arg(long, value_enum, default_value = "features")]
        level: LevelArg,
    },
    /// Run the inference rules to a fixpoint over a TBox.
    Infer {
        tbox: PathBuf,
        /// Witness interpretation; must model the TBox. Used to discharge
        /// nonemptiness side conditions.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Semantics the rules are sound for. Defaults to the witness's
        /// mode, or strong.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Maximum nesting depth of derived concepts.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// A statement to look for among the derived facts.
        #[arg(long)]
        query: Option<String>,
    },
    /// Search for a small interpretation modelling a TBox but falsifying a
    /// query statement.
    Countermodel {
        tbox: PathBuf,
        /// The statement to falsify.
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 6)]
        max_features: usize,
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
        #[arg(long, value_enum, default_value = "strong")]
        mode: ModeArg,
    },
    /// Sweep candidate properties over randomly generated interpretations,
    /// or verify the mode-divergence matrix.
    Props(PropsArgs),
    /// Run the bundled fixture corpus.
    Fixtures {
        /// A single fixture id; all fixtures when omitted.
        id: Option<String>,
    },
}

#[derive(Args)]
struct PropsArgs {
    /// Property ids to sweep; all when omitted.
    #[arg(long = "prop")]
    props: Vec<String>,
    #[arg(long, default_value_t = 200)]
    seeds: u64,
    /// Instantiations per generated interpretation.
    #[arg(long, default_value_t = 3)]
    per_seed: usize,
    /// Evaluate assertions as strict (sana).
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "strong")]
    mode: ModeArg,
    #[arg(long, default_value_t = 8)]
    max_features: usize,
    #[arg(long, default_value_t = 4)]
    max_domains: usize,
    /// Verify the divergence matrix for the mode instead of sweeping.
    #[arg(long)]
    matrix: bool,
}

/// 0 holds, 1 violation/countermodel, 2 usage or input error.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_interp(path: &PathBuf) -> Result<Interpretation, String> {
    let doc = InterpretationDoc::from_json(&read(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    doc.build().map_err(|e| format!("{}: {e}", path.display()))
}

fn load_tbox(path: &PathBuf) -> Result<TBox, String> {
    parse_tbox(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn tbox_decls(tbox: &TBox) -> Declarations {
    let mut decls = Declarations::default();
    for st in &tbox.statements {
        match st {
            Statement::Natural(a) => {
                decls.natural_atoms.insert(a.clone());
            }
            Statement::Intra(r) => {
                decls.intra_roles.insert(r.clone());
            }
            _ => {}
        }
    }
    decls
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Strong => "strong",
        Mode::Weak => "weak",
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    let fail = |e: elana::error::ModelError| e.to_string();
    match &cli.command {
        Command::Validate { doc } => {
            let interp = load_interp(doc)?;
            let report = interp.validate();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "validate",
                        "mode": mode_name(report.mode),
                        "valid": report.is_valid(),
                        "violations": report.violations.iter().map(|v| json!({
                            "condition": v.condition.to_string(),
                            "message": v.message,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else if report.is_valid() {
                println!("valid ({} mode)", mode_name(report.mode));
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
            }
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Check { doc, tbox } => {
            let interp = load_interp(doc)?;
            let tbox = load_tbox(tbox)?;
            let checks = check_tbox(&interp, &tbox).map_err(fail)?;
            let all = checks.iter().all(|c| c.holds);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "check",
                        "all_hold": all,
                        "statements": checks.iter().map(|c| json!({
                            "statement": c.statement,
                            "holds": c.holds,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                for c in &checks {
                    println!("{} {}", if c.holds { "holds" } else { "fails" }, c.statement);
                }
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Mu { doc, c, d, naive } => {
            let interp = load_interp(doc)?;
            let decls = interp.decls();
            let parse = |s: &str| {
                elana::parse::parse_concept_checked(s, &decls).map_err(|e| e.to_string())
            };
            let (c, d) = (parse(c)?, parse(d)?);
            let set = mu(&interp, &c, &d).map_err(fail)?;
            let naive_agrees = if *naive {
                Some(mu_naive(&interp, &c, &d).map_err(fail)? == set)
            } else {
                None
            };
            let rendered: Vec<String> = set.iter().map(|u| u.display()).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "mu",
                        "c": c.to_string(),
                        "d": d.to_string(),
                        "translations": rendered,
                        "count": set.len(),
                        "naive_agrees": naive_agrees,
                    })
                );
            } else {
                println!("mu({c}, {d}) = {{{}}}", rendered.join(", "));
                if let Some(agrees) = naive_agrees {
                    println!("naive enumeration {}", if agrees { "agrees" } else { "DISAGREES" });
                }
            }
            if naive_agrees == Some(false) {
                return Ok(1);
            }
            Ok(if set.is_empty() { 1 } else { 0 })
        }
        Command::Ana { doc, quad, strict } => {
            let interp = load_interp(doc)?;
            let decls = interp.decls();
            let [c1, c2, d1, d2] = parse_quad(quad, &decls).map_err(|e| e.to_string())?;
            let assertion = elana::tbox::AnalogyAssertion {
                strict: *strict,
                c1,
                c2,
                d1,
                d2,
            };
            let holds = elana::tbox::satisfies_assertion(&interp, &assertion).map_err(fail)?;
            let left: Vec<String> = mu(&interp, &assertion.c1, &assertion.c2)
                .map_err(fail)?
                .iter()
                .map(|u| u.display())
                .collect();
            let right: Vec<String> = mu(&interp, &assertion.d1, &assertion.d2)
                .map_err(fail)?
                .iter()
                .map(|u| u.display())
                .collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "ana",
                        "assertion": assertion.to_string(),
                        "strict": assertion.strict,
                        "holds": holds,
                        "mu_left": left,
                        "mu_right": right,
                    })
                );
            } else {
                println!("{} {}", if holds { "holds" } else { "fails" }, assertion);
                println!("  mu(left)  = {{{}}}", left.join(", "));
                println!("  mu(right) = {{{}}}", right.join(", "));
            }
            Ok(if holds { 0 } else { 1 })
        }
        Command::Ap { doc, quad, level } => {
            let interp = load_interp(doc)?;
            let decls = interp.decls();
            let [a, b, c, d] = parse_quad(quad, &decls).map_err(|e| e.to_string())?;
            let holds = ap_concepts(&interp, (*level).into(), &a, &b, &c, &d).map_err(fail)?;
            let level_name = match level {
                LevelArg::Features => "features",
                LevelArg::Extensions => "extensions",
                LevelArg::Both => "both",
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "ap",
                        "quad": format!("{a} : {b} :: {c} : {d}"),
                        "level": level_name,
                        "holds": holds,
                    })
                );
            } else {
                println!(
                    "{} ap[{level_name}] {a} : {b} :: {c} : {d}",
                    if holds { "holds" } else { "fails" }
                );
            }
            Ok(if holds { 0 } else { 1 })
        }
        Command::Infer { tbox, witness, mode, depth, query } => {
            let tbox = load_tbox(tbox)?;
            let witness_interp = witness.as_ref().map(load_interp).transpose()?;
            let mode: Mode = match (mode, &witness_interp) {
                (Some(m), _) => (*m).into(),
                (None, Some(w)) => w.mode(),
                (None, None) => Mode::Strong,
            };
            let cfg = ClosureConfig { mode, depth_bound: *depth };
            let result = closure(&tbox, witness_interp.as_ref(), &cfg).map_err(fail)?;
            let query_fact = query
                .as_ref()
                .map(|q| -> Result<Fact, String> {
                    let mut decls = tbox_decls(&tbox);
                    if let Some(w) = &witness_interp {
                        let wd = w.decls();
                        decls.natural_atoms.extend(wd.natural_atoms);
                        decls.intra_roles.extend(wd.intra_roles);
                    }
                    match parse_statement(q, 1, &decls).map_err(|e| e.to_string())? {
                        Statement::Inclusion(c, d) => Ok(Fact::Ci(c, d)),
                        Statement::Analogy(a) => Ok(Fact::Ana(a)),
                        Statement::NonEmpty(c) => Ok(Fact::NonEmpty(c)),
                        Statement::Natural(_) | Statement::Intra(_) => {
                            Err("declarations cannot be queried".into())
                        }
                    }
                })
                .transpose()?;
            let derived = query_fact.as_ref().map(|f| result.contains(f));
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "infer",
                        "mode": mode_name(mode),
                        "depth_bound": depth,
                        "bound_reached": result.bound_reached,
                        "derivations": result.derivations.iter().map(|d| json!({
                            "fact": d.conclusion.to_string(),
                            "rule": d.rule,
                            "premises": d.premises.iter().map(|p| p.to_string())
                                .collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                        "query": query_fact.as_ref().map(|f| json!({
                            "statement": f.to_string(),
                            "derived": derived,
                        })),
                    })
                );
            } else {
                for d in &result.derivations {
                    if d.rule == "asserted" {
                        continue;
                    }
                    println!("{}  [{}]", d.conclusion, d.rule);
                }
                if result.bound_reached {
                    println!("(depth bound {depth} reached; closure is truncated)");
                }
                if let Some(f) = &query_fact {
                    println!(
                        "query {}: {}",
                        f,
                        if derived == Some(true) { "derived" } else { "not derived" }
                    );
                }
            }
            Ok(match derived {
                Some(true) | None => 0,
                Some(false) => 1,
            })
        }
        Command::Countermodel { tbox, query, max_features, max_atoms, mode } => {
            let tbox = load_tbox(tbox)?;
            let decls = tbox_decls(&tbox);
            let query = parse_statement(query, 1, &decls).map_err(|e| e.to_string())?;
            let bounds = Bounds {
                max_features: *max_features,
                max_atoms: *max_atoms,
                mode: (*mode).into(),
            };
            let outcome = countermodel_search(&tbox, &query, &bounds).map_err(fail)?;
            match outcome {
                SearchOutcome::Counterexample(interp) => {
                    let doc = InterpretationDoc::from_interpretation(&interp);
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "command": "countermodel",
                                "found": true,
                                "query": query.to_string(),
                                "interpretation": serde_json::to_value(&doc)
                                    .expect("document serializes"),
                            })
                        );
                    } else {
                        println!("countermodel found for `{query}`:");
                        print!("{}", doc.to_json());
                    }
                    Ok(1)
                }
                SearchOutcome::NoneWithinBounds => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "command": "countermodel",
                                "found": false,
                                "query": query.to_string(),
                                "interpretation": serde_json::Value::Null,
                            })
                        );
                    } else {
                        println!(
                            "no countermodel within bounds (max_features={max_features}, \
                             max_atoms={max_atoms}); this is not a proof of entailment"
                        );
                    }
                    Ok(0)
                }
            }
        }
        Command::Props(args) => {
            if args.matrix {
                return run_matrix(cli, args);
            }
            let props: Vec<PropId> = if args.props.is_empty() {
                ALL_PROPS.to_vec()
            } else {
                args.props
                    .iter()
                    .map(|s| s.parse::<PropId>())
                    .collect::<Result<_, _>>()?
            };
            let params = GenParams {
                max_features: args.max_features,
                max_domains: args.max_domains,
                mode: args.mode.into(),
                ..GenParams::default()
            };
            let mut reports = Vec::new();
            for &prop in &props {
                reports.push(run_sweep(prop, &params, args.seeds, args.strict, args.per_seed)
                    .map_err(fail)?);
            }
            let passed = reports.iter().all(|r| r.passed());
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "props",
                        "mode": mode_name(params.mode),
                        "strict": args.strict,
                        "seeds": args.seeds,
                        "passed": passed,
                        "results": reports.iter().map(|r| json!({
                            "prop": r.prop.id(),
                            "instances": r.instances,
                            "nonvacuous": r.nonvacuous,
                            "violations": r.violations,
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                for r in &reports {
                    println!(
                        "{} {}: {} instances, {} with premises, {} violations{}",
                        if r.passed() { "pass" } else { "FAIL" },
                        r.prop,
                        r.instances,
                        r.nonvacuous,
                        r.violations.len(),
                        if r.violations.is_empty() {
                            String::new()
                        } else {
                            format!(" (seeds {:?})", r.violations)
                        }
                    );
                }
            }
            Ok(if passed { 0 } else { 1 })
        }
        Command::Fixtures { id } => {
            let selected: Vec<fixtures::Fixture> = match id {
                Some(id) => vec![fixtures::by_id(id).ok_or_else(|| {
                    let known: Vec<&str> = fixtures::corpus().iter().map(|f| f.id).collect();
                    format!("unknown fixture `{id}`; known: {}", known.join(", "))
                })?],
                None => fixtures::corpus().to_vec(),
            };
            let mut reports = Vec::new();
            for f in selected {
                reports.push(fixtures::run(f).map_err(fail)?);
            }
            let passed = reports.iter().all(|r| r.passed());
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "command": "fixtures",
                        "passed": passed,
                        "reports": reports.iter().map(|r| json!({
                            "id": r.id,
                            "passed": r.passed(),
                            "validation": r.validation,
                            "outcomes": r.outcomes.iter().map(|o| json!({
                                "check": o.check,
                                "expected": o.expected,
                                "actual": o.actual,
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    })
                );
            } else {
                for r in &reports {
                    println!("{} {}", if r.passed() { "pass" } else { "FAIL" }, r.id);
                    for v in &r.validation {
                        println!("  validator: {v}");
                    }
                    for o in &r.outcomes {
                        if !o.passed() {
                            println!(
                                "  expected {} but got {}: {}",
                                verdict(o.expected),
                                verdict(o.actual),
                                o.check
                            );
                        }
                    }
                }
            }
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn run_matrix(cli: &Cli, args: &PropsArgs) -> Result<u8, String> {
    let report = run_divergence_matrix(args.mode.into(), args.seeds)
        .map_err(|e| e.to_string())?;
    if cli.json {
        println!(
            "{}",
            json!({
                "command": "props",
                "matrix": {
                    "mode": mode_name(report.mode),
                    "passed": report.passed(),
                    "cells": report.cells.iter().map(|c| json!({
                        "prop": c.prop.id(),
                        "strict": c.strict,
                        "expected": c.expected.to_string(),
                        "fixture": c.fixture,
                        "confirmed": c.confirmed,
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                },
            })
        );
    } else {
        // Align the text table on the longest rule name.
        let width = report.cells.iter().map(|c| c.prop.id().len()).max().unwrap_or(0);
        for c in &report.cells {
            println!(
                "{} {:width$} {:8} {:5} — {}",
                if c.confirmed { "pass" } else { "FAIL" },
                c.prop.id(),
                if c.strict { "strict" } else { "standard" },
                matches!(c.expected, CellVerdict::Holds)
                    .then_some("HOLDS")
                    .unwrap_or("FAILS"),
                c.detail,
            );
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}
