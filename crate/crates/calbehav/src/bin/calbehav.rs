//! Command-line front end: mine rules, evaluate them, compare against the
//! static baselines, generate synthetic bundles, and expand calendars.
//!
//! Exit codes: 0 success, 1 error, 2 no behavioral evidence in the inputs,
//! 3 internal failure.

use calbehav::baselines::KeywordRuleTable;
use calbehav::calendar::{expand_all, parse_icalendar, CalendarEvent, DateRange, EventOccurrence};
use calbehav::config::{parse_precedence, FileConfig, Overrides, RunConfig};
use calbehav::evaluation::{
    compare_methods, default_sweep_thresholds, k_fold_cv, reports_to_csv, sweep_plot_files,
    threshold_sweep, EvalOptions, MetricsReport,
};
use calbehav::mapping::{classify_calls, instances_to_csv, map_events_to_behavior, EventBehaviorInstance};
use calbehav::miner::{build_agt, extract_rules, rank_contexts, render_tree, rules_to_json};
use calbehav::phonelog::{parse_call_log, RelationshipMap};
use calbehav::synth::{
    demo_bundle, demo_cohort, demo_cohort_window, demo_window, generate_bundle, UserProfile,
    BUNDLE_CALENDAR, BUNDLE_CALLS, BUNDLE_RELATIONSHIPS,
};
use calbehav::{Diagnostic, Error, Ratio};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "calbehav", version, about = "Mines personal call-handling rules from a calendar and a call log")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine behavioral rules and write the tree, rules, and instances.
    Mine(MineArgs),
    /// Cross-validate the miner on one dataset.
    Evaluate(EvaluateArgs),
    /// Cross-validate the miner and both static baselines side by side.
    Compare(CompareArgs),
    /// Generate synthetic bundles (calendar, calls, relationships, truth).
    Synth(SynthArgs),
    /// Expand a calendar into dated occurrences over a window.
    Expand(ExpandArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PrecedenceArg {
    /// Rank context attributes once on the whole dataset.
    Global,
    /// Re-rank the remaining attributes inside every tree node.
    PerNode,
}

impl PrecedenceArg {
    fn as_str(self) -> &'static str {
        match self {
            PrecedenceArg::Global => "global",
            PrecedenceArg::PerNode => "per-node",
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// iCalendar file with the user's events.
    #[arg(long)]
    calendar: PathBuf,
    /// Call log CSV: timestamp,call_type,duration_sec,contact.
    #[arg(long)]
    calls: PathBuf,
    /// Optional contact,relationship CSV; unmapped contacts become "unknown".
    #[arg(long)]
    relationships: Option<PathBuf>,
    /// Expansion window YYYY-MM-DD..YYYY-MM-DD; defaults to the call log's span.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Minimum rule confidence as a decimal, e.g. 0.8.
    #[arg(long)]
    min_confidence: Option<String>,
    /// Minimum instances under a tree node.
    #[arg(long)]
    min_support: Option<usize>,
    /// How nodes pick their split attribute.
    #[arg(long, value_enum)]
    precedence: Option<PrecedenceArg>,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    /// Output directory.
    #[arg(long, default_value = "calbehav-out")]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    /// Cross-validation folds.
    #[arg(long)]
    folds: Option<usize>,
    /// Fold-partition seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Label used in the written reports.
    #[arg(long, default_value = "user")]
    user: String,
    /// Also sweep the confidence threshold and write plot data.
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value = "calbehav-out")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Directory of per-user bundles (each holding calendar.ics, calls.csv,
    /// and optionally relationships.csv). Mutually exclusive with --calendar.
    #[arg(long, conflicts_with_all = ["calendar", "calls", "relationships"])]
    bundle_dir: Option<PathBuf>,
    #[arg(long, requires = "calls")]
    calendar: Option<PathBuf>,
    #[arg(long, requires = "calendar")]
    calls: Option<PathBuf>,
    #[arg(long)]
    relationships: Option<PathBuf>,
    /// Expansion window; per-bundle call-log span when omitted.
    #[arg(long)]
    window: Option<String>,
    /// JSON keyword table for the keyword baseline.
    #[arg(long)]
    keywords: Option<PathBuf>,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "calbehav-out")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// `demo` for the canned bundle, or a path to a profile JSON.
    #[arg(long, conflicts_with = "demo_cohort")]
    profile: Option<String>,
    /// Generate the built-in ten-user comparison cohort.
    #[arg(long)]
    demo_cohort: bool,
    /// Generation window for profile files, YYYY-MM-DD..YYYY-MM-DD.
    #[arg(long)]
    span: Option<String>,
    /// Overrides the profile file's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "calbehav-out")]
    out: PathBuf,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    calendar: PathBuf,
    /// Expansion window YYYY-MM-DD..YYYY-MM-DD.
    #[arg(long)]
    window: String,
    /// Optional directory for occurrences.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let code = std::panic::catch_unwind(run).unwrap_or_else(|_| {
        eprintln!("calbehav: internal error (panic); details above");
        3
    });
    std::process::exit(code);
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err @ Error::NoEvidence) => {
            eprintln!("calbehav: {err}");
            2
        }
        Err(err) => {
            eprintln!("calbehav: {err}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Mine(args) => mine(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Compare(args) => compare(args),
        Command::Synth(args) => synth(args),
        Command::Expand(args) => expand(args),
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Prints diagnostics to stderr; error-severity ones abort the run.
fn report_diagnostics(source_name: &str, diagnostics: &[Diagnostic]) -> Result<(), Error> {
    for diagnostic in diagnostics {
        eprintln!("calbehav: {source_name}: {diagnostic}");
    }
    let errors = calbehav::error::error_count(diagnostics);
    if errors > 0 {
        return Err(Error::Ingestion { source_name: source_name.to_string(), count: errors });
    }
    Ok(())
}

fn resolve_config(thresholds: &ThresholdArgs, folds: Option<usize>, seed: Option<u64>) -> Result<RunConfig, Error> {
    let file = FileConfig::from_env()?;
    let min_confidence = thresholds
        .min_confidence
        .as_deref()
        .map(|text| Ratio::parse_decimal(text).map_err(|e| Error::Config(format!("--min-confidence: {e}"))))
        .transpose()?;
    let precedence = thresholds
        .precedence
        .map(|p| parse_precedence(p.as_str()))
        .transpose()?;
    RunConfig::resolve(
        &file,
        &Overrides { min_confidence, min_support: thresholds.min_support, folds, seed, precedence },
    )
}

struct Loaded {
    events: Vec<CalendarEvent>,
    occurrences: Vec<EventOccurrence>,
    instances: Vec<EventBehaviorInstance>,
    window: DateRange,
    call_count: usize,
    skipped_outgoing: usize,
}

fn load_inputs(
    calendar_path: &Path,
    calls_path: &Path,
    relationships_path: Option<&Path>,
    window_flag: Option<&str>,
) -> Result<Loaded, Error> {
    let calendar = parse_icalendar(&read_file(calendar_path)?);
    report_diagnostics(&calendar_path.display().to_string(), &calendar.diagnostics)?;

    let log = parse_call_log(&read_file(calls_path)?)?;
    report_diagnostics(&calls_path.display().to_string(), &log.diagnostics)?;

    let relationships = match relationships_path {
        None => RelationshipMap::default(),
        Some(path) => {
            let (map, diagnostics) = RelationshipMap::parse_csv(&read_file(path)?)?;
            report_diagnostics(&path.display().to_string(), &diagnostics)?;
            map
        }
    };

    let window = match window_flag {
        Some(text) => DateRange::parse(text)?,
        None => {
            // The call log's own span: without any classified call there is
            // nothing to learn from.
            let first = log.records.first().ok_or(Error::NoEvidence)?;
            let last = log.records.last().expect("non-empty");
            DateRange::new(first.timestamp.date(), last.timestamp.date())
        }
    };

    let occurrences = expand_all(&calendar.events, window)?;
    let calls = classify_calls(&log.records);
    let skipped_outgoing = log.records.len() - calls.len();
    let instances = map_events_to_behavior(&occurrences, &calendar.events, &calls, &relationships);
    if instances.is_empty() {
        return Err(Error::NoEvidence);
    }
    Ok(Loaded {
        events: calendar.events,
        occurrences,
        instances,
        window,
        call_count: calls.len(),
        skipped_outgoing,
    })
}

fn eval_options(config: &RunConfig) -> EvalOptions {
    EvalOptions {
        min_confidence: config.min_confidence,
        min_support: config.min_support,
        precedence: config.precedence,
        folds: config.folds,
        seed: config.seed,
    }
}

fn precedence_name(config: &RunConfig) -> &'static str {
    match config.precedence {
        calbehav::miner::PrecedenceMode::Global => "global",
        calbehav::miner::PrecedenceMode::PerNode => "per-node",
    }
}

fn mine(args: MineArgs) -> Result<(), Error> {
    let config = resolve_config(&args.thresholds, None, None)?;
    let loaded = load_inputs(
        &args.input.calendar,
        &args.input.calls,
        args.input.relationships.as_deref(),
        args.input.window.as_deref(),
    )?;
    let root = build_agt(&loaded.instances, config.min_confidence, config.min_support, config.precedence);
    let rules = extract_rules(&root, config.min_confidence);

    let mut behavior_counts = std::collections::BTreeMap::new();
    for instance in &loaded.instances {
        *behavior_counts.entry(instance.behavior.as_str()).or_insert(0usize) += 1;
    }
    let ranking: Vec<&str> = rank_contexts(&loaded.instances).iter().map(|a| a.as_str()).collect();
    let summary = json!({
        "window": loaded.window.to_string(),
        "event_count": loaded.events.len(),
        "occurrence_count": loaded.occurrences.len(),
        "call_count": loaded.call_count,
        "skipped_outgoing": loaded.skipped_outgoing,
        "instance_count": loaded.instances.len(),
        "behavior_counts": behavior_counts,
        "min_confidence": config.min_confidence.to_string(),
        "min_support": config.min_support,
        "precedence": precedence_name(&config),
        "ranking": ranking,
        "rule_count": rules.len(),
    });

    write_file(&args.out, "instances.csv", &instances_to_csv(&loaded.instances))?;
    write_file(&args.out, "tree.txt", &render_tree(&root))?;
    write_file(&args.out, "rules.json", &pretty(&rules_to_json(&rules)))?;
    write_file(&args.out, "summary.json", &pretty(&summary))?;

    for rule in &rules {
        println!("{}", rule.render());
    }
    println!(
        "mined {} rule(s) from {} instance(s) over {}; outputs in {}",
        rules.len(),
        loaded.instances.len(),
        loaded.window,
        args.out.display()
    );
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> Result<(), Error> {
    let config = resolve_config(&args.thresholds, args.folds, args.seed)?;
    let loaded = load_inputs(
        &args.input.calendar,
        &args.input.calls,
        args.input.relationships.as_deref(),
        args.input.window.as_deref(),
    )?;
    let options = eval_options(&config);
    let report = k_fold_cv(&loaded.instances, &options)?;

    let sweep = if args.sweep {
        let points = threshold_sweep(&loaded.instances, &options, &default_sweep_thresholds());
        let (coverage, accuracy) = sweep_plot_files(&points);
        write_file(&args.out, "coverage.dat", &coverage)?;
        write_file(&args.out, "accuracy.dat", &accuracy)?;
        Some(points)
    } else {
        None
    };

    let json = json!({
        "user": args.user,
        "window": loaded.window.to_string(),
        "instance_count": loaded.instances.len(),
        "folds": config.folds,
        "seed": config.seed,
        "methods": [report],
        "sweep": sweep,
    });
    write_file(&args.out, "report.json", &pretty(&json))?;
    write_file(&args.out, "report.csv", &reports_to_csv(&args.user, std::slice::from_ref(&report)))?;

    println!(
        "{}: error {:.2}% uncovered {:.2}% rules {} ({} folds, seed {})",
        args.user,
        report.error_rate * 100.0,
        report.uncovered_rate * 100.0,
        report.rule_count,
        config.folds,
        config.seed
    );
    Ok(())
}

fn load_keyword_table(path: Option<&Path>) -> Result<KeywordRuleTable, Error> {
    match path {
        None => Ok(KeywordRuleTable::default_table()),
        Some(path) => {
            let value: serde_json::Value = serde_json::from_str(&read_file(path)?)?;
            KeywordRuleTable::from_json(&value)
        }
    }
}

fn compare(args: CompareArgs) -> Result<(), Error> {
    let config = resolve_config(&args.thresholds, args.folds, args.seed)?;
    let options = eval_options(&config);
    let table = load_keyword_table(args.keywords.as_deref())?;

    let results: Vec<(String, Vec<MetricsReport>)> = match (&args.bundle_dir, &args.calendar, &args.calls) {
        (Some(dir), None, None) => compare_bundle_dir(dir, args.window.as_deref(), &options, &table)?,
        (None, Some(calendar), Some(calls)) => {
            let loaded = load_inputs(calendar, calls, args.relationships.as_deref(), args.window.as_deref())?;
            let reports = compare_methods(&loaded.instances, &options, &table)?;
            vec![(String::from("user"), reports)]
        }
        _ => {
            return Err(Error::Config(String::from(
                "compare needs either --bundle-dir or both --calendar and --calls",
            )))
        }
    };

    let mut wins: std::collections::BTreeMap<String, usize> = std::collections::BTreeMap::new();
    for (user, reports) in &results {
        let best = reports
            .iter()
            .min_by(|a, b| a.error_rate.partial_cmp(&b.error_rate).expect("finite error rates"))
            .expect("three methods");
        let tied = reports.iter().filter(|r| r.error_rate == best.error_rate).count() > 1;
        let winner = if tied { "tie" } else { best.method.as_str() };
        *wins.entry(winner.to_string()).or_insert(0) += 1;
        let line: Vec<String> = reports
            .iter()
            .map(|r| format!("{} {:.2}%", r.method, r.error_rate * 100.0))
            .collect();
        println!("{user}: {} -> {winner}", line.join("  "));
    }

    let users_json: Vec<serde_json::Value> = results
        .iter()
        .map(|(user, reports)| json!({"user": user, "methods": reports}))
        .collect();
    let comparison = json!({
        "folds": config.folds,
        "seed": config.seed,
        "min_confidence": config.min_confidence.to_string(),
        "min_support": config.min_support,
        "users": users_json,
        "wins": wins,
    });
    write_file(&args.out, "comparison.json", &pretty(&comparison))?;

    let mut csv = String::new();
    for (i, (user, reports)) in results.iter().enumerate() {
        let block = reports_to_csv(user, reports);
        if i == 0 {
            csv.push_str(&block);
        } else if let Some((_, body)) = block.split_once('\n') {
            csv.push_str(body);
        }
    }
    write_file(&args.out, "comparison.csv", &csv)?;

    let summary: Vec<String> = wins.iter().map(|(method, n)| format!("{method} {n}")).collect();
    println!("wins over {} user(s): {}", results.len(), summary.join(", "));
    Ok(())
}

fn compare_bundle_dir(
    dir: &Path,
    window: Option<&str>,
    options: &EvalOptions,
    table: &KeywordRuleTable,
) -> Result<Vec<(String, Vec<MetricsReport>)>, Error> {
    let mut bundle_dirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(format!("reading {}", dir.display()), e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| path.is_dir() && path.join(BUNDLE_CALENDAR).is_file() && path.join(BUNDLE_CALLS).is_file())
        .collect();
    bundle_dirs.sort();
    if bundle_dirs.is_empty() {
        return Err(Error::Config(format!(
            "{} holds no bundle directories (need {BUNDLE_CALENDAR} and {BUNDLE_CALLS})",
            dir.display()
        )));
    }

    // Bundles are independent; score them on one thread each.
    let mut results: Vec<(String, Result<Vec<MetricsReport>, Error>)> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = bundle_dirs
            .iter()
            .map(|path| {
                let user = path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                let handle = scope.spawn(move || {
                    let relationships = path.join(BUNDLE_RELATIONSHIPS);
                    let loaded = load_inputs(
                        &path.join(BUNDLE_CALENDAR),
                        &path.join(BUNDLE_CALLS),
                        relationships.is_file().then_some(relationships.as_path()),
                        window,
                    )?;
                    compare_methods(&loaded.instances, options, table)
                });
                (user, handle)
            })
            .collect();
        for (user, handle) in handles {
            let outcome = handle.join().unwrap_or_else(|_| {
                Err(Error::Config(format!("bundle {user}: worker thread panicked")))
            });
            results.push((user, outcome));
        }
    });

    results
        .into_iter()
        .map(|(user, outcome)| {
            outcome
                .map(|reports| (user.clone(), reports))
                .map_err(|e| Error::Config(format!("bundle {user}: {e}")))
        })
        .collect()
}

fn synth(args: SynthArgs) -> Result<(), Error> {
    match (&args.profile, args.demo_cohort) {
        (Some(profile), false) if profile == "demo" => {
            if args.seed.is_some() || args.span.is_some() {
                return Err(Error::Config(String::from(
                    "the demo bundle is fixed; --seed and --span do not apply",
                )));
            }
            let bundle = demo_bundle();
            bundle.write_to_dir(&args.out)?;
            println!(
                "wrote demo bundle to {} ({} calls over {})",
                args.out.display(),
                bundle.calls_csv.lines().count() - 1,
                demo_window()
            );
            Ok(())
        }
        (Some(path), false) => {
            let mut profile = UserProfile::from_json(&read_file(Path::new(path))?)?;
            if let Some(seed) = args.seed {
                profile.seed = seed;
            }
            let span = args
                .span
                .as_deref()
                .ok_or_else(|| Error::Config(String::from("--span is required with a profile file")))?;
            let bundle = generate_bundle(&profile, DateRange::parse(span)?)?;
            bundle.write_to_dir(&args.out)?;
            println!(
                "wrote bundle to {} (seed {}, {} calls)",
                args.out.display(),
                profile.seed,
                bundle.calls_csv.lines().count() - 1
            );
            Ok(())
        }
        (None, true) => {
            if args.seed.is_some() || args.span.is_some() {
                return Err(Error::Config(String::from(
                    "the demo cohort is fixed; --seed and --span do not apply",
                )));
            }
            for (user, profile) in demo_cohort() {
                let bundle = generate_bundle(&profile, demo_cohort_window())?;
                let dir = args.out.join(&user);
                bundle.write_to_dir(&dir)?;
                println!(
                    "wrote {} (seed {}, {} calls)",
                    dir.display(),
                    profile.seed,
                    bundle.calls_csv.lines().count() - 1
                );
            }
            println!("cohort window: {}", demo_cohort_window());
            Ok(())
        }
        _ => Err(Error::Config(String::from("synth needs --profile <demo|path> or --demo-cohort"))),
    }
}

fn expand(args: ExpandArgs) -> Result<(), Error> {
    let calendar = parse_icalendar(&read_file(&args.calendar)?);
    report_diagnostics(&args.calendar.display().to_string(), &calendar.diagnostics)?;
    let window = DateRange::parse(&args.window)?;
    let occurrences = expand_all(&calendar.events, window)?;
    for occurrence in &occurrences {
        println!(
            "{} {}-{} {} {}",
            occurrence.date,
            occurrence.start_time.format("%H:%M:%S"),
            occurrence.end_time.format("%H:%M:%S"),
            occurrence.event_type,
            occurrence.event_uid
        );
    }
    println!(
        "{} occurrence(s) from {} event(s) over {}",
        occurrences.len(),
        calendar.events.len(),
        window
    );
    if let Some(out) = &args.out {
        let rows: Vec<serde_json::Value> = occurrences
            .iter()
            .map(|o| {
                json!({
                    "event_uid": o.event_uid,
                    "date": o.date.to_string(),
                    "start_time": o.start_time.format("%H:%M:%S").to_string(),
                    "end_time": o.end_time.format("%H:%M:%S").to_string(),
                    "event_type": o.event_type.to_string(),
                })
            })
            .collect();
        write_file(out, "occurrences.json", &pretty(&json!(rows)))?;
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serializes");
    text.push('\n');
    text
}
