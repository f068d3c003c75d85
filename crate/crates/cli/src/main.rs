//! Command-line surface: single-series HAC estimation, Monte Carlo
//! experiments from config files, and published-table reproduction runs.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numerical
//! failure.

mod config;
mod tables;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fdcv_core::error::FdcvError;
use fdcv_core::estimators::CandidateClass;
use fdcv_core::selector::{select, Restriction};
use fdcv_core::sim::{run_experiment, CoverageReport, ExperimentConfig};
use fdcv_core::spectral::TimeSeries;

#[derive(Parser)]
#[command(
    name = "fdcv",
    version,
    about = "Cross-validated HAC standard errors for a stationary mean"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the long-run variance and HAC standard error of one series.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo coverage experiment from a config file.
    Simulate(SimulateArgs),
    /// Re-run a published simulation table and compare side by side.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Input file: one numeric value per line, '#' comments allowed,
    /// an optional single header line is skipped.
    #[arg(long)]
    input: PathBuf,
    /// Band exponent of the cross-validation criterion.
    #[arg(long, default_value_t = 0.8)]
    c: f64,
    /// Candidate-class restriction.
    #[arg(long, value_enum, default_value_t = RestrictionArg::All)]
    restriction: RestrictionArg,
    /// Output format for stdout.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Also write the report into this directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment description (flat key = value file).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's replication count.
    #[arg(long)]
    replications: Option<usize>,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's band exponent.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Table identifier: 1, 2, 3, 4, 5, 6, 7 or c-study.
    #[arg(long)]
    table: String,
    /// Replications per cell (default 3000, the published count).
    #[arg(long, default_value_t = 3000)]
    replications: usize,
    /// Fast preset: 500 replications per cell.
    #[arg(long)]
    fast: bool,
    #[arg(long, default_value_t = 20260808)]
    seed: u64,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum RestrictionArg {
    All,
    ArOnly,
    ParzenOnly,
}

impl From<RestrictionArg> for Restriction {
    fn from(value: RestrictionArg) -> Self {
        match value {
            RestrictionArg::All => Restriction::All,
            RestrictionArg::ArOnly => Restriction::ArOnly,
            RestrictionArg::ParzenOnly => Restriction::ParzenOnly,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

enum AppError {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Data(_) => 3,
            AppError::Numerical(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Data(m) | AppError::Numerical(m) => m,
        }
    }
}

fn numerical(e: FdcvError) -> AppError {
    AppError::Numerical(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn init_threads(threads: Option<usize>) -> Result<(), AppError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(AppError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| AppError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn read_series(path: &Path) -> Result<Vec<f64>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut saw_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens = line.split([',', ';', '\t', ' ']).filter(|t| !t.is_empty());
        let mut parsed = Vec::new();
        let mut ok = true;
        for token in tokens {
            match token.parse::<f64>() {
                Ok(v) => parsed.push(v),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            if !saw_data {
                // a single leading header line is tolerated
                saw_data = true;
                continue;
            }
            return Err(AppError::Data(format!(
                "{}:{}: cannot parse `{}` as a number",
                path.display(),
                idx + 1,
                line
            )));
        }
        saw_data = true;
        values.extend(parsed);
    }
    if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
        return Err(AppError::Data(format!(
            "{}: non-finite value at position {bad}",
            path.display()
        )));
    }
    if values.len() < 8 {
        return Err(AppError::Data(format!(
            "{}: need at least 8 values, found {}",
            path.display(),
            values.len()
        )));
    }
    Ok(values)
}

fn cmd_estimate(args: EstimateArgs) -> Result<(), AppError> {
    init_threads(args.threads)?;
    if !(args.c > 0.0 && args.c < 1.0) {
        return Err(AppError::Usage(format!(
            "--c must lie strictly between 0 and 1, got {}",
            args.c
        )));
    }
    let values = read_series(&args.input)?;
    let series = TimeSeries::new(values).map_err(|e| AppError::Data(e.to_string()))?;
    let class = CandidateClass::for_length(series.len());
    let result =
        select(&series, &class, args.c, args.restriction.into()).map_err(numerical)?;

    let text = render_estimate_text(&series, &result);
    let json = estimate_json(&series, &result, args.c);
    let csv = render_estimate_csv(&series, &result);
    match args.format {
        FormatArg::Text => print!("{text}"),
        FormatArg::Json => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
        FormatArg::Csv => print!("{csv}"),
    }
    if let Some(dir) = &args.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| AppError::Data(format!("{}: {e}", dir.display())))?;
        write_file(dir.join("estimate.txt"), &text)?;
        write_file(
            dir.join("estimate.json"),
            &serde_json::to_string_pretty(&json).unwrap(),
        )?;
        write_file(dir.join("estimate.csv"), &csv)?;
    }
    Ok(())
}

fn render_estimate_text(series: &TimeSeries, result: &fdcv_core::FdcvResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "n = {}, sample mean = {:.6}\n",
        series.len(),
        result.mean
    ));
    out.push_str("candidate scores:\n");
    for score in &result.scores {
        if score.disqualified {
            out.push_str(&format!("  {:<7} disqualified\n", score.candidate.to_string()));
        } else {
            out.push_str(&format!(
                "  {:<7} {:+.6}\n",
                score.candidate.to_string(),
                score.score
            ));
        }
    }
    out.push_str(&format!(
        "selected: {} (band size {})\n",
        result.selected.spec(),
        result.scores.first().map_or(0, |s| s.band_size)
    ));
    out.push_str(&format!(
        "f(0) = {:.6}, long-run variance = {:.6}, se(mean) = {:.6}\n",
        result.f0_hat,
        2.0 * std::f64::consts::PI * result.f0_hat,
        result.se_hat
    ));
    for interval in &result.intervals {
        out.push_str(&format!(
            "{:.0}% interval: [{:.6}, {:.6}]\n",
            interval.level * 100.0,
            interval.lower,
            interval.upper
        ));
    }
    out
}

fn estimate_json(
    series: &TimeSeries,
    result: &fdcv_core::FdcvResult,
    c: f64,
) -> serde_json::Value {
    serde_json::json!({
        "schema_version": 1,
        "n": series.len(),
        "c": c,
        "mean": result.mean,
        "selected": result.selected.spec().to_string(),
        "f0_hat": result.f0_hat,
        "long_run_variance": 2.0 * std::f64::consts::PI * result.f0_hat,
        "se_hat": result.se_hat,
        "intervals": result.intervals.iter().map(|i| serde_json::json!({
            "level": i.level,
            "lower": i.lower,
            "upper": i.upper,
        })).collect::<Vec<_>>(),
        "scores": result.scores.iter().map(|s| serde_json::json!({
            "candidate": s.candidate.to_string(),
            "score": if s.disqualified { serde_json::Value::Null }
                     else { serde_json::json!(s.score) },
            "band_size": s.band_size,
            "disqualified": s.disqualified,
        })).collect::<Vec<_>>(),
    })
}

fn render_estimate_csv(series: &TimeSeries, result: &fdcv_core::FdcvResult) -> String {
    let mut out = String::from("key,value\n");
    out.push_str(&format!("n,{}\n", series.len()));
    out.push_str(&format!("mean,{}\n", result.mean));
    out.push_str(&format!("selected,{}\n", result.selected.spec()));
    out.push_str(&format!("f0_hat,{}\n", result.f0_hat));
    out.push_str(&format!(
        "long_run_variance,{}\n",
        2.0 * std::f64::consts::PI * result.f0_hat
    ));
    out.push_str(&format!("se_hat,{}\n", result.se_hat));
    for interval in &result.intervals {
        out.push_str(&format!(
            "lower_{0:.0},{1}\nupper_{0:.0},{2}\n",
            interval.level * 100.0,
            interval.lower,
            interval.upper
        ));
    }
    out.push_str("candidate,score\n");
    for score in &result.scores {
        if score.disqualified {
            out.push_str(&format!("{},disqualified\n", score.candidate));
        } else {
            out.push_str(&format!("{},{}\n", score.candidate, score.score));
        }
    }
    out
}

fn write_file(path: PathBuf, body: &str) -> Result<(), AppError> {
    std::fs::write(&path, body).map_err(|e| AppError::Data(format!("{}: {e}", path.display())))
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), AppError> {
    init_threads(args.threads)?;
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| AppError::Usage(format!("{}: {e}", args.config.display())))?;
    let mut experiment =
        config::parse_experiment(&text).map_err(|e| AppError::Usage(e.to_string()))?;
    if let Some(reps) = args.replications {
        experiment.replications = reps;
    }
    if let Some(seed) = args.seed {
        experiment.seed = seed;
    }
    if let Some(c) = args.c {
        experiment.c = c;
    }
    let report = run_experiment(&experiment).map_err(numerical)?;
    let stem = args
        .config
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("experiment");
    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| AppError::Data(format!("{}: {e}", args.output_dir.display())))?;
    let json_path = args.output_dir.join(format!("{stem}_report.json"));
    let text_path = args.output_dir.join(format!("{stem}_report.txt"));
    write_file(json_path.clone(), &serde_json::to_string_pretty(&report).unwrap())?;
    write_file(text_path.clone(), &report.render_text())?;
    print!("{}", report.render_text());
    println!(
        "wrote {} and {}",
        json_path.display(),
        text_path.display()
    );
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), AppError> {
    init_threads(args.threads)?;
    let id = args.table.trim().to_ascii_lowercase();
    let Some(cells) = tables::table_cells(&id) else {
        return Err(AppError::Usage(format!(
            "unknown table `{}`; expected one of {:?}",
            args.table,
            tables::TABLE_IDS
        )));
    };
    let replications = if args.fast { 500 } else { args.replications };
    if replications == 0 {
        return Err(AppError::Usage("--replications must be positive".into()));
    }
    println!(
        "table {}: {} | {} cells x {} replications | seed {}",
        id,
        tables::describe(&id),
        cells.len(),
        replications,
        args.seed
    );

    let mut reports: Vec<(tables::ReferenceCell, CoverageReport)> = Vec::new();
    for (index, cell) in cells.iter().enumerate() {
        let mut experiment = ExperimentConfig::new(
            cell.dgp(),
            cell.methods.clone(),
            replications,
            // one deterministic seed block per cell
            args.seed.wrapping_add(1000 * index as u64),
        );
        experiment.c = cell.c;
        let report = run_experiment(&experiment).map_err(numerical)?;
        print!("{}", render_comparison(cell, &report));
        reports.push((cell.clone(), report));
    }

    let mut text = String::new();
    for (cell, report) in &reports {
        text.push_str(&render_comparison(cell, report));
    }
    if id == "4" {
        let eff = render_efficiency_comparison(&reports);
        text.push_str(&eff);
        print!("{eff}");
    }

    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| AppError::Data(format!("{}: {e}", args.output_dir.display())))?;
    let json = serde_json::json!({
        "schema_version": 1,
        "table": id,
        "replications": replications,
        "seed": args.seed,
        "cells": reports.iter().map(|(cell, report)| serde_json::json!({
            "label": cell.label,
            "reference": cell.reference,
            "report": report,
        })).collect::<Vec<_>>(),
    });
    let stem = format!("table_{}", id.replace('-', "_"));
    let json_path = args.output_dir.join(format!("{stem}.json"));
    let text_path = args.output_dir.join(format!("{stem}.txt"));
    write_file(json_path.clone(), &serde_json::to_string_pretty(&json).unwrap())?;
    write_file(text_path.clone(), &text)?;
    println!("wrote {} and {}", json_path.display(), text_path.display());
    Ok(())
}

fn render_comparison(cell: &tables::ReferenceCell, report: &CoverageReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("\n{}\n", cell.label));
    out.push_str(&format!(
        "{:<8}{:>22}{:>22}{:>22}\n",
        "method", "90% obs/ref/dev", "95% obs/ref/dev", "99% obs/ref/dev"
    ));
    for (mi, method) in cell.methods.iter().enumerate() {
        out.push_str(&format!("{:<8}", method.to_string()));
        for (li, level) in [0.90, 0.95, 0.99].iter().enumerate() {
            let observed = report.coverage(*method, *level).unwrap_or(f64::NAN) * 100.0;
            let reference = cell.reference[mi][li];
            out.push_str(&format!(
                "{:>9.1}/{:>5.1}/{:>+5.1}",
                observed,
                reference,
                observed - reference
            ));
        }
        out.push('\n');
    }
    out
}

fn render_efficiency_comparison(
    reports: &[(tables::ReferenceCell, CoverageReport)],
) -> String {
    let mut out = String::from("\nrelative efficiency at 95% (observed vs reference):\n");
    for (cell, report) in reports {
        let Some(eff) = &report.efficiency_at_95 else {
            continue;
        };
        let reference = tables::MA1_EFFICIENCY_REFERENCE
            .iter()
            .find(|(psi, n, _)| {
                cell.label.contains(&format!("psi = {psi}")) && cell.n == *n
            })
            .map(|(_, _, e)| *e);
        out.push_str(&format!("{}: ", cell.label));
        let labels = ["CV_C", "AM-PW", "NW-PW"];
        for i in 0..3 {
            out.push_str(&format!("{} {:.2}", labels[i], eff.efficiency[i]));
            if let Some(r) = reference {
                out.push_str(&format!(" (ref {:.2})", r[i]));
            }
            if i < 2 {
                out.push_str(", ");
            }
        }
        out.push('\n');
    }
    out
}
