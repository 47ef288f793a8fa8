//! `verify <suite|list>`: runs one verification suite and prints its report.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dualgpd::harness::{list_suites, regen_golden, run_suite, ConfigOverrides, DimRange, HarnessError, OutputFormat, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "verify", about = "Exact verification suites for dual VB-groupoids and Poisson double groupoids")]
struct Cli {
    /// Suite name, or `list`.
    suite: String,
    /// `N` or `A..B`; see `verify list` for what each suite ranges over.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Defaults to DUALGPD_SEED, then 7.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Compare against golden data in this directory.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// `key = value` file read before the environment and the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Rewrite the golden data in --golden instead of comparing.
    #[arg(long, requires = "golden")]
    regen_golden: bool,
    /// Run the suite's fault fixture; the report is then expected to fail.
    #[arg(long)]
    inject_fault: bool,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
}

fn overrides(cli: &Cli) -> Result<ConfigOverrides, HarnessError> {
    let file = match &cli.config {
        Some(p) => ConfigOverrides::from_file(p)?,
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        dims: cli.dims.as_deref().map(str::parse::<DimRange>).transpose()?,
        trials: cli.trials,
        seed: cli.seed,
        format: cli.format,
        golden: cli.golden.clone(),
        inject_fault: cli.inject_fault.then_some(true),
    };
    Ok(flags.over(ConfigOverrides::from_env()?.over(file)))
}

fn run(cli: &Cli) -> Result<bool, HarnessError> {
    if cli.suite == "list" {
        let all = list_suites();
        if cli.format == Some(OutputFormat::Json) {
            println!("{}", serde_json::to_string_pretty(&all).expect("serializable"));
        } else {
            for d in all {
                println!("{:<17} dims {:<5} trials {:<4} {}", d.name, d.default_dims.to_string(), d.default_trials, d.anchor);
            }
        }
        return Ok(true);
    }
    let suite: Suite = cli.suite.parse()?;
    let config = SuiteConfig::resolve(suite, overrides(cli)?)?;
    if cli.regen_golden {
        let dir = config.golden.clone().expect("clap requires --golden");
        for name in regen_golden(&SuiteConfig { golden: None, ..config }, &dir, true)? {
            println!("wrote {}", dir.join(name).display());
        }
        return Ok(true);
    }
    let mut report = run_suite(&config)?;
    if !cli.timing {
        report.timing_ms = None;
    }
    match config.format {
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Text => print!("{}", report.to_text()),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
