use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use bmtl_core::harness::{run_campaign, GenConfig};
use bmtl_core::{
    eval_truth_set, parse_formula, parse_trace, reliable_region, Formula, OpKind, RewriteMode,
    Rewriter,
};
use serde_json::json;

use crate::{Command, FormulaInput, Mode, ModeArgs};

#[derive(Debug)]
pub enum CliError {
    Syntax(String),
    Usage(String),
    Precondition(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Syntax(_) | CliError::Usage(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Syntax(m) | CliError::Usage(m) | CliError::Precondition(m) | CliError::Io(m) => {
                f.write_str(m)
            }
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_formula(input: &FormulaInput) -> Result<Formula, CliError> {
    let text = match (&input.formula, &input.file) {
        (Some(text), None) => text.clone(),
        (None, Some(path)) => read(path)?,
        _ => return Err(CliError::Usage("give a formula or --file, not both".into())),
    };
    parse_formula(&text).map_err(|e| CliError::Syntax(e.to_string()))
}

fn rewrite_mode(args: &ModeArgs) -> Result<RewriteMode, CliError> {
    match args.mode {
        Mode::Punctual => {
            if args.kappa.is_some() || args.lambda.is_some() {
                return Err(CliError::Usage("--kappa/--lambda require --mode mitl".into()));
            }
            Ok(RewriteMode::Punctual)
        }
        Mode::Mitl => {
            for (name, v) in [("kappa", &args.kappa), ("lambda", &args.lambda)] {
                if v.as_ref().is_some_and(|v| !v.is_positive()) {
                    return Err(CliError::Precondition(format!("--{name} must be positive")));
                }
            }
            Ok(RewriteMode::SingletonFree { kappa: args.kappa.clone(), lambda: args.lambda.clone() })
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

pub fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Parse(input) => {
            println!("{}", load_formula(&input)?.to_sexpr());
        }
        Command::Rewrite { input, mode, report, json } => {
            let f = load_formula(&input)?;
            let mode = rewrite_mode(&mode)?;
            let result = Rewriter::new(mode).normalize(&f).map_err(|e| {
                if e.is_precondition() {
                    CliError::Precondition(e.to_string())
                } else {
                    CliError::Usage(e.to_string())
                }
            })?;
            if json {
                let mut value = json!({
                    "input": result.input.to_string(),
                    "output": result.output.to_string(),
                });
                if report {
                    value["rules"] = serde_json::to_value(&result.rules_applied)
                        .expect("rule applications serialize");
                }
                print_json(&value);
            } else {
                println!("{}", result.output);
                if report {
                    for app in &result.rules_applied {
                        println!("{app}");
                    }
                }
            }
        }
        Command::Eval { input, trace, json } => {
            let f = load_formula(&input)?;
            let tr = parse_trace(&read(&trace)?).map_err(|e| CliError::Syntax(e.to_string()))?;
            let truth = eval_truth_set(&f, &tr);
            let region = reliable_region(&f, &tr);
            if json {
                print_json(&json!({ "truth": truth, "reliable": region.interval() }));
            } else {
                println!("truth: {truth}");
                match region.interval() {
                    Some(r) => println!("reliable: {r}"),
                    None => println!("reliable: empty"),
                }
            }
        }
        Command::Census { input, json } => {
            let f = load_formula(&input)?;
            let census = f.census();
            if json {
                print_json(&serde_json::to_value(&census).expect("census serializes"));
            } else {
                for kind in OpKind::ALL {
                    println!("{}: {}", kind.name(), census.count(kind));
                }
                println!("has_singleton_bound: {}", census.has_singleton_bound);
                println!("depth: {}", census.max_depth);
                println!("negation_free: {}", census.is_negation_free());
            }
        }
        Command::Check {
            mode,
            seed,
            trials,
            max_depth,
            facts,
            horizon_length,
            bound_max,
            bound_denominator_max,
            json,
        } => {
            let mode = rewrite_mode(&mode)?;
            if max_depth == 0 || facts == 0 || trials == 0 || bound_denominator_max == 0 {
                return Err(CliError::Usage(
                    "--trials, --max-depth, --facts and --bound-denominator-max must be positive"
                        .into(),
                ));
            }
            if !horizon_length.is_positive() || !bound_max.is_positive() {
                return Err(CliError::Usage(
                    "--horizon-length and --bound-max must be positive".into(),
                ));
            }
            let cfg = GenConfig {
                seed,
                trials,
                max_depth,
                facts_per_trace: facts,
                horizon_length,
                bound_max,
                bound_denominator_max,
                ..GenConfig::for_mode(&mode)
            };
            let report = run_campaign(&cfg, &mode);
            if json {
                print_json(&serde_json::to_value(&report).expect("report serializes"));
            } else {
                println!("mode: {}  seed: {}", report.mode, report.seed);
                println!(
                    "trials: {}  run: {}  passed: {}  failed: {}  empty regions: {}",
                    report.trials,
                    report.trials_run,
                    report.passes,
                    report.failures.len(),
                    report.empty_regions
                );
                println!(
                    "oracle points: {}  slack pairs: {}",
                    report.oracle_points, report.slack_pairs
                );
                println!("wall time: {} ms", report.wall_time_ms);
                for f in &report.failures {
                    println!("--- trial {} ({:?})", f.trial, f.kind);
                    println!("formula:   {}", f.formula);
                    if let Some(r) = &f.rewritten {
                        println!("rewritten: {r}");
                    }
                    if let Some(i) = &f.differing_interval {
                        println!("differs on {i}");
                    }
                    if let Some(m) = &f.message {
                        println!("{m}");
                    }
                    print!("{}", f.trace);
                }
            }
            if !report.is_success() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
