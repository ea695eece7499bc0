//! Reproducible experiment runner: named experiments write seeded,
//! deterministic CSV tables plus a JSON metadata sidecar; `verify` runs the
//! acceptance suite.

mod config;
mod experiments;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bqsp_core::acceptance::{run_all, AcceptanceOptions};

use config::parse_config;
use experiments::{run_experiment, Table, REGISTRY};

const VERSION: &str = concat!("bqsp-v", env!("CARGO_PKG_VERSION"));

fn print_usage() {
    eprintln!(
        "usage:
  bqsp run <config.toml|config.json> [--seed N] [--jobs N] [--out PATH]
  bqsp list
  bqsp verify [--fast] [--jobs N]

Configs are TOML (JSON accepted); see `bqsp list` for experiment names.
The BQSP_FOCK_DIM environment variable overrides the Fock truncation."
    );
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("list") => cmd_list(),
        Some("verify") => cmd_verify(&args[1..]),
        Some("--help") | Some("-h") | None => {
            print_usage();
            ExitCode::from(if args.is_empty() { 2 } else { 0 })
        }
        Some(other) => {
            eprintln!("error: unknown command '{other}'");
            print_usage();
            ExitCode::from(2)
        }
    }
}

struct Flags {
    seed: Option<u64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    fast: bool,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut f = Flags { seed: None, jobs: None, out: None, fast: false, positional: Vec::new() };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--seed" => {
                let v = it.next().ok_or("--seed needs a value")?;
                f.seed = Some(v.parse().map_err(|_| format!("bad --seed '{v}'"))?);
            }
            "--jobs" => {
                let v = it.next().ok_or("--jobs needs a value")?;
                f.jobs = Some(v.parse().map_err(|_| format!("bad --jobs '{v}'"))?);
            }
            "--out" => {
                let v = it.next().ok_or("--out needs a value")?;
                f.out = Some(PathBuf::from(v));
            }
            "--fast" => f.fast = true,
            other if other.starts_with("--") => return Err(format!("unknown flag '{other}'")),
            other => f.positional.push(other.to_string()),
        }
    }
    Ok(f)
}

fn set_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn cmd_list() -> ExitCode {
    println!("available experiments:");
    for e in &REGISTRY {
        println!("  {:20} {}", e.name, e.about);
    }
    ExitCode::SUCCESS
}

fn render_csv(table: &Table) -> String {
    let mut s = String::from("# schema=1\n");
    s.push_str(&table.headers.join(","));
    s.push('\n');
    for row in &table.rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn cmd_run(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    set_jobs(flags.jobs);
    let Some(path) = flags.positional.first() else {
        eprintln!("error: `bqsp run` needs a config file");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    let started = std::time::Instant::now();
    let table = match run_experiment(&cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: experiment failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let csv = render_csv(&table);
    let out_base = flags
        .out
        .or_else(|| cfg.output_path.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cfg.experiment)));
    let csv_path = if out_base.extension().is_some() {
        out_base.clone()
    } else {
        out_base.with_extension("csv")
    };
    if let Some(parent) = csv_path.parent() {
        if !parent.as_os_str().is_empty() {
            let _ = std::fs::create_dir_all(parent);
        }
    }
    if let Err(e) = std::fs::write(&csv_path, &csv) {
        eprintln!("error: cannot write {}: {e}", csv_path.display());
        return ExitCode::FAILURE;
    }
    // metadata sidecar with the fully resolved config and version
    let meta = serde_json::json!({
        "version": VERSION,
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "resolved_config": serde_json::to_value(&cfg).unwrap(),
        "rows": table.rows.len(),
        "runtime_seconds": started.elapsed().as_secs_f64(),
    });
    let meta_path = csv_path.with_extension("meta.json");
    if let Err(e) = std::fs::write(&meta_path, serde_json::to_string_pretty(&meta).unwrap()) {
        eprintln!("error: cannot write {}: {e}", meta_path.display());
        return ExitCode::FAILURE;
    }
    print!("{csv}");
    eprintln!(
        "wrote {} ({} rows) and {} in {:.2}s",
        csv_path.display(),
        table.rows.len(),
        meta_path.display(),
        started.elapsed().as_secs_f64()
    );
    ExitCode::SUCCESS
}

fn cmd_verify(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    set_jobs(flags.jobs);
    let opts = if flags.fast { AcceptanceOptions::fast() } else { AcceptanceOptions::default() };
    let results = run_all(&opts);
    let mut all_ok = true;
    let mut lock = std::io::stdout().lock();
    for r in &results {
        let _ = writeln!(
            lock,
            "[{}] criterion {:2} {:35} ({:7.2}s)  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.details
        );
        all_ok &= r.passed;
    }
    drop(lock);
    if all_ok {
        println!("all {} criteria passed ({VERSION})", results.len());
        ExitCode::SUCCESS
    } else {
        eprintln!("acceptance failures detected");
        ExitCode::FAILURE
    }
}
