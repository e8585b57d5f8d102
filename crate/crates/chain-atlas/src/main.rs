use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use chain_atlas::{
    best_essential, chain_cost, dp_solve, enumerate_orderings_with_limit, essential_set,
    penalty_nonessential_removed, penalty_of_removal_with_limit, run_experiment, synthesize,
    verify_uniquely_optimal_with, write_records_csv, write_summary_json, ChainError,
    ExperimentConfig, Instance, Ordering, PenaltyReport, DEFAULT_ENUM_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "chain-atlas",
    version,
    about = "Analyse matrix-chain parenthesisations: optimal orderings, the essential fan-out family, removal penalties, witness synthesis, and sampling experiments."
)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Chain-length cap for exhaustive enumeration (default 15).
    #[arg(long, global = true, env = "CHAIN_ATLAS_ENUM_LIMIT")]
    enum_limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal ordering by dynamic programming.
    Solve {
        /// Dimension tuple, e.g. "10,100,5,50".
        #[arg(long)]
        dims: String,
    },
    /// List every ordering of a chain of n matrices in canonical order.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Show the essential (fan-out) family, evaluated on an instance when
    /// one is given.
    Essential {
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        dims: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Penalty of removing specific orderings, or every non-essential one.
    Penalty {
        #[arg(long)]
        dims: String,
        /// Ordering to remove; repeatable.
        #[arg(long = "remove")]
        remove: Vec<String>,
        /// Remove every ordering outside the essential family.
        #[arg(long, conflicts_with = "remove")]
        non_essential: bool,
    },
    /// Construct an instance on which the given ordering is uniquely
    /// optimal, and verify it.
    Synthesize {
        /// Ordering text, e.g. "(M1 M2) (M3 M4)".
        #[arg(long)]
        ordering: String,
    },
    /// Check whether an ordering is uniquely optimal on an instance.
    Verify {
        #[arg(long)]
        ordering: String,
        #[arg(long)]
        dims: String,
    },
    /// Run the sampling experiment and write per-sample CSV and summary JSON.
    Experiment {
        #[arg(long)]
        n: usize,
        /// Samples to draw (desk scale by default).
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_dim: u64,
        #[arg(long, default_value_t = 1000)]
        max_dim: u64,
        /// Per-sample CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON output path.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Worker threads (0 = automatic).
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = cli.enum_limit.unwrap_or(DEFAULT_ENUM_LIMIT);
    let json = cli.json;
    let result = match cli.command {
        Command::Solve { dims } => cmd_solve(&dims, json),
        Command::Enumerate { n } => cmd_enumerate(n, limit, json),
        Command::Essential { dims, n } => cmd_essential(dims.as_deref(), n, json),
        Command::Penalty {
            dims,
            remove,
            non_essential,
        } => cmd_penalty(&dims, &remove, non_essential, limit, json),
        Command::Synthesize { ordering } => cmd_synthesize(&ordering, limit, json),
        Command::Verify { ordering, dims } => cmd_verify(&ordering, &dims, limit, json),
        Command::Experiment {
            n,
            samples,
            seed,
            min_dim,
            max_dim,
            out,
            summary,
            workers,
        } => {
            let cfg = ExperimentConfig {
                n,
                samples,
                dim_min: min_dim,
                dim_max: max_dim,
                seed,
                workers,
            };
            cmd_experiment(&cfg, out.as_deref(), summary.as_deref(), json)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 = usage or parse error, 3 = enumeration limit, 4 = I/O failure.
fn exit_code(e: &ChainError) -> u8 {
    match e {
        ChainError::EnumerationLimitExceeded { .. } => 3,
        ChainError::Io(_) => 4,
        _ => 2,
    }
}

fn dims_json(inst: &Instance) -> Value {
    Value::Array(
        inst.dims()
            .iter()
            .map(|d| Value::String(d.to_string()))
            .collect(),
    )
}

fn triplets_json(o: &Ordering) -> Value {
    Value::Array(
        o.triplets()
            .iter()
            .map(|&(a, b, c)| json!([a, b, c]))
            .collect(),
    )
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("plain values serialise")
    );
}

fn cmd_solve(dims: &str, json: bool) -> Result<(), ChainError> {
    let inst: Instance = dims.parse()?;
    let result = dp_solve(&inst);
    if json {
        print_json(&json!({
            "n": inst.n(),
            "dims": dims_json(&inst),
            "optimal_cost": result.cost.to_string(),
            "ordering": result.ordering.render(),
            "triplets": triplets_json(&result.ordering),
            "method": result.method.as_str(),
        }));
    } else {
        println!("{:<14}{}  (n={})", "instance", inst, inst.n());
        println!("{:<14}{}", "optimal cost", result.cost);
        println!("{:<14}{}", "ordering", result.ordering);
        println!("{:<14}{}", "triplets", result.ordering.triplets());
        println!("{:<14}{}", "method", result.method.as_str());
    }
    Ok(())
}

/// Catalan number C_m, exact for the whole enumerable range.
fn catalan(m: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 1..=m as u128 {
        c = c * 2 * (2 * i - 1) / (i + 1);
    }
    c
}

fn cmd_enumerate(n: usize, limit: usize, json: bool) -> Result<(), ChainError> {
    let orderings = enumerate_orderings_with_limit(n, limit)?;
    let count = catalan(n - 1);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    if json {
        write!(
            out,
            "{{\n  \"n\": {n},\n  \"count\": {count},\n  \"orderings\": ["
        )?;
        for (i, o) in orderings.enumerate() {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "\n    {}", Value::String(o.render()))?;
        }
        writeln!(out, "\n  ]\n}}")?;
    } else {
        writeln!(out, "{:<8}ordering", "index")?;
        for (i, o) in orderings.enumerate() {
            writeln!(out, "{i:<8}{o}")?;
        }
        writeln!(out, "count: {count}")?;
    }
    Ok(())
}

fn cmd_essential(dims: Option<&str>, n: Option<usize>, json: bool) -> Result<(), ChainError> {
    match (dims, n) {
        (Some(text), _) => {
            let inst: Instance = text.parse()?;
            let members = essential_set(inst.n())?;
            let best = best_essential(&inst);
            let report = penalty_nonessential_removed(&inst);
            if json {
                let rows: Vec<Value> = members
                    .iter()
                    .map(|(h, o)| {
                        json!({
                            "h": h,
                            "ordering": o.render(),
                            "cost": chain_cost(o, &inst).expect("member lengths match").to_string(),
                            "best": *h == best.h,
                        })
                    })
                    .collect();
                print_json(&json!({
                    "n": inst.n(),
                    "dims": dims_json(&inst),
                    "members": rows,
                    "best_h": best.h,
                    "best_cost": best.cost.to_string(),
                    "optimal_cost": report.optimal_cost.to_string(),
                    "penalty": report.penalty_decimal(),
                    "penalty_exact": report.penalty.to_string(),
                }));
            } else {
                let ord_width = members
                    .iter()
                    .map(|(_, o)| o.render().len())
                    .max()
                    .unwrap_or(8)
                    .max("ordering".len());
                println!(
                    "{:<4}{:<width$}  {:>14}  best",
                    "h",
                    "ordering",
                    "cost",
                    width = ord_width
                );
                for (h, o) in &members {
                    let cost = chain_cost(o, &inst).expect("member lengths match");
                    let marker = if *h == best.h { "*" } else { "" };
                    println!(
                        "{h:<4}{:<width$}  {cost:>14}  {marker}",
                        o.render(),
                        width = ord_width
                    );
                }
                println!("optimal cost       {}", report.optimal_cost);
                println!("best essential     {} (h={})", best.cost, best.h);
                println!(
                    "penalty vs optimal {} (exact {})",
                    report.penalty_decimal(),
                    report.penalty
                );
            }
        }
        (None, Some(n)) => {
            let members = essential_set(n)?;
            if json {
                let rows: Vec<Value> = members
                    .iter()
                    .map(|(h, o)| json!({"h": h, "ordering": o.render()}))
                    .collect();
                print_json(&json!({"n": n, "members": rows}));
            } else {
                println!("{:<4}ordering", "h");
                for (h, o) in &members {
                    println!("{h:<4}{o}");
                }
                println!("count: {}", members.len());
            }
        }
        (None, None) => unreachable!("clap requires one of --dims/--n"),
    }
    Ok(())
}

fn penalty_json(inst: &Instance, report: &PenaltyReport) -> Value {
    json!({
        "n": inst.n(),
        "dims": dims_json(inst),
        "removed": report.removed_description,
        "optimal_cost": report.optimal_cost.to_string(),
        "restricted_cost": report.restricted_cost.to_string(),
        "penalty": report.penalty_decimal(),
        "penalty_exact": report.penalty.to_string(),
    })
}

fn cmd_penalty(
    dims: &str,
    remove: &[String],
    non_essential: bool,
    limit: usize,
    json: bool,
) -> Result<(), ChainError> {
    let inst: Instance = dims.parse()?;
    let report = if non_essential {
        penalty_nonessential_removed(&inst)
    } else {
        let mut removed = Vec::with_capacity(remove.len());
        for text in remove {
            let o: Ordering = text.parse()?;
            if o.chain_length() != inst.n() {
                return Err(ChainError::LengthMismatch {
                    ordering: o.chain_length(),
                    instance: inst.n(),
                });
            }
            removed.push(o);
        }
        penalty_of_removal_with_limit(&inst, &removed, limit)?
    };
    if json {
        print_json(&penalty_json(&inst, &report));
    } else {
        println!("{:<17}{}", "instance", inst);
        println!("{:<17}{}", "removed", report.removed_description);
        println!("{:<17}{}", "optimal cost", report.optimal_cost);
        println!("{:<17}{}", "restricted cost", report.restricted_cost);
        println!(
            "{:<17}{} (exact {})",
            "penalty",
            report.penalty_decimal(),
            report.penalty
        );
    }
    Ok(())
}

fn cmd_synthesize(ordering: &str, limit: usize, json: bool) -> Result<(), ChainError> {
    let o: Ordering = ordering.parse()?;
    let inst = synthesize(&o);
    let report = verify_uniquely_optimal_with(&o, &inst, limit, true)?;
    if json {
        print_json(&json!({
            "ordering": o.render(),
            "instance": inst.to_string(),
            "dims": dims_json(&inst),
            "verified": report.uniquely_optimal,
            "verify_path": report.path.as_str(),
        }));
    } else {
        println!("{inst} verified={}", report.uniquely_optimal);
    }
    Ok(())
}

fn cmd_verify(ordering: &str, dims: &str, limit: usize, json: bool) -> Result<(), ChainError> {
    let o: Ordering = ordering.parse()?;
    let inst: Instance = dims.parse()?;
    let report = verify_uniquely_optimal_with(&o, &inst, limit, true)?;
    if json {
        print_json(&json!({
            "ordering": o.render(),
            "dims": dims_json(&inst),
            "uniquely_optimal": report.uniquely_optimal,
            "path": report.path.as_str(),
        }));
    } else {
        println!("{:<18}{}", "ordering", o);
        println!("{:<18}{}", "instance", inst);
        println!("{:<18}{}", "uniquely optimal", report.uniquely_optimal);
        println!("{:<18}{}", "path", report.path.as_str());
    }
    Ok(())
}

fn cmd_experiment(
    cfg: &ExperimentConfig,
    out: Option<&std::path::Path>,
    summary_path: Option<&std::path::Path>,
    json: bool,
) -> Result<(), ChainError> {
    let (records, summary) = run_experiment(cfg)?;
    if let Some(path) = out {
        let file = File::create(path)?;
        write_records_csv(BufWriter::new(file), cfg.n, &records)?;
    }
    if let Some(path) = summary_path {
        let file = File::create(path)?;
        write_summary_json(BufWriter::new(file), &summary)?;
    }
    if json {
        let value = serde_json::to_value(&summary).expect("summary serialises");
        print_json(&value);
    } else {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
        let mut line = format!(
            "n={} samples={} seed={} fraction_nonzero={:.6} mean_nonzero_penalty={} p99={} max={}",
            summary.n,
            summary.samples,
            summary.seed,
            summary.fraction_nonzero,
            opt(summary.mean_nonzero_penalty),
            opt(summary.p99),
            opt(summary.max),
        );
        if let Some(path) = out {
            line.push_str(&format!(" csv={}", path.display()));
        }
        if let Some(path) = summary_path {
            line.push_str(&format!(" summary={}", path.display()));
        }
        println!("{line}");
    }
    Ok(())
}
