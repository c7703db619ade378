//! Batch front end for the justification-logic toolkit.
//!
//! Exit codes: 0 when the requested check holds or the output was produced,
//! 1 when a check fails (rejected proof, model violations, false formula,
//! soundness counterexample), 2 on usage, parse, or resource errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use subsetjl::fuzz::{
    build_case, check_case, check_defined_application, check_native_application, Counterexample,
    FuzzParams,
};
use subsetjl::syntax::{forget_translation, parse_formula, parse_term};
use subsetjl::{
    aggregated_evidence, check_derivation, j_axiom_derivation, probability_lower_bound,
    BetaAxiom, ConstantSpecification, Derivation, Dialect, EventAssignment, EvidenceDatabase,
    LogicConfig, ProbabilitySpace, SubsetModel, Verdict, WorldId,
};

#[derive(Parser)]
#[command(name = "subsetjl", version, about = "Justification logic with subset semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LogicArgs {
    /// Logic dialect.
    #[arg(long, value_parser = Dialect::from_str, default_value = "star")]
    logic: Dialect,
    /// Comma-separated strength axioms out of jt, jd, j4.
    #[arg(long, value_delimiter = ',', value_parser = BetaAxiom::from_str)]
    beta: Vec<BetaAxiom>,
    /// Enable the aggregated-evidence postulates (prob dialect only).
    #[arg(long)]
    pe: bool,
    /// `total` or a path to a constant-specification file.
    #[arg(long, default_value = "total")]
    cs: String,
}

impl LogicArgs {
    fn config(&self) -> Result<LogicConfig> {
        Ok(LogicConfig::new(self.logic, self.beta.iter().copied(), self.pe)?)
    }

    fn constant_specification(&self, config: &LogicConfig) -> Result<ConstantSpecification> {
        if self.cs == "total" {
            return Ok(ConstantSpecification::total());
        }
        let text = read(Path::new(&self.cs))?;
        Ok(ConstantSpecification::parse(&text, config)
            .with_context(|| format!("in {}", self.cs))?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula (or a term, with --term) and echo its canonical form.
    Parse {
        /// Logic dialect.
        #[arg(long, value_parser = Dialect::from_str, default_value = "star")]
        logic: Dialect,
        /// Treat the input as an evidence term.
        #[arg(long)]
        term: bool,
        text: String,
    },
    /// Check a derivation file step by step.
    CheckProof {
        #[command(flatten)]
        logic: LogicArgs,
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Validate a model file against its semantic conditions.
    CheckModel {
        #[arg(long)]
        json: bool,
        file: PathBuf,
    },
    /// Evaluate a formula at a world of a model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        world: u32,
        formula: String,
    },
    /// Emit the derivation of s:(A -> B) -> (t:A -> (s.t):B) for the
    /// defined application.
    DeriveJ {
        s: String,
        t: String,
        a: String,
        b: String,
    },
    /// Erase evidence terms from a formula.
    Translate {
        /// Logic dialect.
        #[arg(long, value_parser = Dialect::from_str, default_value = "star")]
        logic: Dialect,
        formula: String,
    },
    /// Aggregate an evidence database into a single term.
    Aggregate {
        #[arg(long)]
        db: PathBuf,
    },
    /// Exact lower bound for the target's probability under an assignment.
    Bound {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        asg: PathBuf,
    },
    /// Generate seeded models and check the derivation library and
    /// application laws on each.
    FuzzSoundness {
        #[command(flatten)]
        logic: LogicArgs,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of consecutive seeds to run.
        #[arg(long, default_value_t = 50)]
        count: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Parse { logic, term, text } => {
            if term {
                println!("{}", parse_term(&text, logic)?);
            } else {
                println!("{}", parse_formula(&text, logic)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckProof { logic, json, file } => {
            let config = logic.config()?;
            let cs = logic.constant_specification(&config)?;
            let text = read(&file)?;
            let derivation = Derivation::parse(&text, config.dialect())
                .with_context(|| format!("in {}", file.display()))?;
            match check_derivation(&derivation, &config, &cs)? {
                Verdict::Accepted => {
                    if json {
                        println!("{}", json!({ "verdict": "accepted" }));
                    } else {
                        println!("accepted");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Rejected { step, reason } => {
                    if json {
                        println!(
                            "{}",
                            json!({ "verdict": "rejected", "step": step + 1, "reason": reason })
                        );
                    } else {
                        println!("rejected at step {}: {reason}", step + 1);
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CheckModel { json, file } => {
            let model = SubsetModel::from_json(&read(&file)?)
                .with_context(|| format!("in {}", file.display()))?;
            let violations = model.validate();
            if json {
                let rows: Vec<_> = violations
                    .iter()
                    .map(|v| {
                        json!({
                            "condition": v.condition.name(),
                            "world": v.world.map(|w| w.0),
                            "witnesses": v.witnesses,
                        })
                    })
                    .collect();
                println!("{}", json!(rows));
            } else if violations.is_empty() {
                println!("no violations");
            } else {
                for v in &violations {
                    match v.world {
                        Some(w) => {
                            println!("{} at world {}: {}", v.condition.name(), w.0, v.witnesses.join(", "))
                        }
                        None => println!("{}: {}", v.condition.name(), v.witnesses.join(", ")),
                    }
                }
            }
            Ok(if violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Eval {
            model,
            world,
            formula,
        } => {
            let model = SubsetModel::from_json(&read(&model)?)?;
            let f = parse_formula(&formula, model.config().dialect())?;
            let value = model.eval_truth(WorldId(world), &f)?;
            println!("{value}");
            Ok(if value { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::DeriveJ { s, t, a, b } => {
            let s = parse_term(&s, Dialect::Star)?;
            let t = parse_term(&t, Dialect::Star)?;
            let a = parse_formula(&a, Dialect::Star)?;
            let b = parse_formula(&b, Dialect::Star)?;
            print!("{}", j_axiom_derivation(&s, &t, &a, &b)?.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Translate { logic, formula } => {
            println!("{}", forget_translation(&parse_formula(&formula, logic)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Aggregate { db } => {
            let db = EvidenceDatabase::parse(&read(&db)?)?;
            println!("{}", aggregated_evidence(&db)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { db, space, asg } => {
            let db = EvidenceDatabase::parse(&read(&db)?)?;
            let space = ProbabilitySpace::parse(&read(&space)?)?;
            let asg = EventAssignment::parse(&read(&asg)?, &space)?;
            println!("{}", probability_lower_bound(&db, &asg, &space)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::FuzzSoundness {
            logic,
            seed,
            count,
            json,
        } => fuzz_soundness(&logic, seed, count, json),
    }
}

enum CaseOutcome {
    Ok {
        derivations: usize,
        step_checks: usize,
        application_instances: usize,
    },
    GenerationFailed(String),
    Counterexamples(Vec<Counterexample>),
}

fn run_seed(seed: u64, params: &FuzzParams) -> CaseOutcome {
    let case = match build_case(seed, params) {
        Ok(case) => case,
        Err(e) => return CaseOutcome::GenerationFailed(e.to_string()),
    };
    let mut bad = match check_case(&case) {
        Ok(bad) => bad,
        Err(e) => return CaseOutcome::GenerationFailed(e.to_string()),
    };
    let scan = if params.config.dialect() == Dialect::App {
        check_native_application(&case.model)
    } else {
        check_defined_application(&case.model)
    };
    let instances = match scan {
        Ok((instances, mut more)) => {
            bad.append(&mut more);
            instances
        }
        Err(e) => return CaseOutcome::GenerationFailed(e.to_string()),
    };
    if !bad.is_empty() {
        return CaseOutcome::Counterexamples(bad);
    }
    let steps: usize = case
        .library
        .iter()
        .map(|entry| entry.derivation.steps.len())
        .sum();
    CaseOutcome::Ok {
        derivations: case.library.len(),
        step_checks: steps * case.model.normal_worlds().len(),
        application_instances: instances,
    }
}

fn fuzz_soundness(logic: &LogicArgs, start: u64, count: u64, json: bool) -> Result<ExitCode> {
    let config = logic.config()?;
    let mut params = FuzzParams::new(config);
    params.cs = logic.constant_specification(&params.config)?;

    let outcomes: Vec<(u64, CaseOutcome)> = (start..start + count)
        .into_par_iter()
        .map(|seed| (seed, run_seed(seed, &params)))
        .collect();

    let mut checked = 0u64;
    let mut failed_generation = 0u64;
    let mut counterexamples = 0u64;
    for (_, outcome) in &outcomes {
        match outcome {
            CaseOutcome::Ok { .. } => checked += 1,
            CaseOutcome::GenerationFailed(_) => failed_generation += 1,
            CaseOutcome::Counterexamples(bad) => {
                checked += 1;
                counterexamples += bad.len() as u64;
            }
        }
    }

    if json {
        let results: Vec<_> = outcomes
            .iter()
            .map(|(seed, outcome)| match outcome {
                CaseOutcome::Ok {
                    derivations,
                    step_checks,
                    application_instances,
                } => json!({
                    "seed": seed,
                    "status": "ok",
                    "derivations": derivations,
                    "step_checks": step_checks,
                    "application_instances": application_instances,
                }),
                CaseOutcome::GenerationFailed(e) => {
                    json!({ "seed": seed, "status": "generation-failed", "error": e })
                }
                CaseOutcome::Counterexamples(bad) => json!({
                    "seed": seed,
                    "status": "counterexamples",
                    "counterexamples": bad
                        .iter()
                        .map(|c| json!({
                            "entry": c.entry,
                            "step": c.step,
                            "world": c.world.0,
                            "formula": c.formula,
                        }))
                        .collect::<Vec<_>>(),
                }),
            })
            .collect();
        println!(
            "{}",
            json!({
                "results": results,
                "summary": {
                    "seeds": count,
                    "checked": checked,
                    "generation_failures": failed_generation,
                    "counterexamples": counterexamples,
                },
            })
        );
    } else {
        for (seed, outcome) in &outcomes {
            match outcome {
                CaseOutcome::Ok {
                    derivations,
                    step_checks,
                    application_instances,
                } => println!(
                    "seed {seed}: ok ({derivations} derivations, {step_checks} step checks, {application_instances} application instances)"
                ),
                CaseOutcome::GenerationFailed(e) => {
                    println!("seed {seed}: generation failed ({e})")
                }
                CaseOutcome::Counterexamples(bad) => {
                    for c in bad {
                        println!(
                            "seed {seed}: counterexample in {} step {} at world {}: {}",
                            c.entry, c.step, c.world.0, c.formula
                        );
                    }
                }
            }
        }
        println!(
            "checked {checked}/{count} seeds, {counterexamples} counterexamples, {failed_generation} generation failures"
        );
    }

    if counterexamples > 0 {
        Ok(ExitCode::from(1))
    } else if checked == 0 {
        anyhow::bail!("no seed produced a model");
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
