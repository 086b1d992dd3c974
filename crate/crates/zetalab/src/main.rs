use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zetalab::acceptance::{run_all, AcceptanceLab};
use zetalab::config::ExperimentConfig;
use zetalab::experiments::{compute_zero_window, run};
use zetalab::report::{read_jsonl, write_csv, RunManifest};

#[derive(Parser)]
#[command(
    name = "zetalab",
    version,
    about = "Critical-line statistics laboratory: certified zeta zeros, \
             linear statistics, and moment experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Worker threads (defaults to the core count).
    #[arg(long)]
    threads: Option<usize>,
    /// Zero-cache directory.
    #[arg(long, default_value = "cache")]
    cache_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Locate and certify zeros on a window, writing the cache file.
    Zeros {
        #[command(flatten)]
        common: CommonArgs,
        /// Window start (>= 10).
        #[arg(long)]
        t_low: f64,
        /// Window end.
        #[arg(long)]
        t_high: f64,
        /// Optional summary output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment from a config file.
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Config path (sectioned key = value text).
        #[arg(long)]
        config: PathBuf,
        /// Override the height T.
        #[arg(long, name = "T")]
        t_big: Option<f64>,
        /// Override the zero-statistic order k.
        #[arg(long)]
        k: Option<u32>,
        /// Override the transform support radius.
        #[arg(long)]
        eta: Option<f64>,
        /// Override the sampling seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full acceptance suite; exit nonzero on any failure.
    Selftest {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Merge JSONL record files into one flat CSV table.
    Report {
        /// Input record files.
        #[arg(long, required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn set_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Zeros {
            common,
            t_low,
            t_high,
            out,
        } => {
            set_threads(common.threads);
            let (table, events) = compute_zero_window(&common.cache_dir, t_low, t_high)?;
            let mut summary = String::new();
            summary.push_str(&format!(
                "window [{t_low}, {t_high}]: {} zeros, certified = {}, N(t_low) = {}\n",
                table.len(),
                table.certified(),
                table.n_start()
            ));
            if let Some(first) = table.gammas().first() {
                summary.push_str(&format!("first ordinate {first:.9}\n"));
            }
            for e in &events {
                summary.push_str(e);
                summary.push('\n');
            }
            print!("{summary}");
            if let Some(path) = out {
                std::fs::write(&path, summary)?;
            }
            if !table.certified() {
                eprintln!("error: window failed Turing certification");
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            common,
            config,
            t_big,
            k,
            eta,
            seed,
            out,
        } => {
            set_threads(common.threads);
            let text = std::fs::read_to_string(&config)?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            cfg.cache_dir = common.cache_dir;
            if let Some(v) = t_big {
                cfg.t_big = v;
            }
            if let Some(v) = k {
                cfg.k = v;
            }
            if let Some(v) = eta {
                cfg.eta = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = out {
                cfg.out_dir = v;
            }
            cfg.validate()?;
            let manifest = run(&cfg)?;
            print!("{}", manifest.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { common } => {
            set_threads(common.threads);
            let lab = AcceptanceLab::new(&common.cache_dir);
            let results = run_all(&lab);
            let mut manifest = RunManifest::default();
            for r in &results {
                println!("{}", r.line());
                manifest.outcomes.push((r.id.to_string(), r.pass));
            }
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.id)
                .collect();
            if failed.is_empty() {
                println!("selftest: all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("selftest: FAILED criteria: {}", failed.join(", "));
                Ok(ExitCode::from(1))
            }
        }
        Command::Report { inputs, out } => {
            let mut rows = Vec::new();
            for path in &inputs {
                rows.extend(read_jsonl(path)?);
            }
            write_csv(&out, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
