use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modecrb::scenarios::{
    emit_psd, run_point, run_sweep, CaseSelect, ScenarioConfig, SnrMode, SweepKind, SystemSource,
};
use modecrb::CrbError;

/// Cramér-Rao bounds for joint mode-meter and forced-oscillation estimation.
#[derive(Parser, Debug)]
#[command(name = "crb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` configuration file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Cases to run: 1, 2, both, ambient or all.
    #[arg(long, global = true)]
    case: Option<CaseSelect>,

    /// Base seed of the Monte-Carlo noise streams.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo trials M.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Record length N.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Output file (default stdout).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// ARMAX coefficient file replacing the built-in surrogate.
    #[arg(long, global = true, value_name = "PATH")]
    system: Option<PathBuf>,

    /// FO frequency in Hz.
    #[arg(long, global = true)]
    freq_hz: Option<f64>,

    /// SNR in dB.
    #[arg(long, global = true)]
    snr_db: Option<f64>,

    /// SNR reference: local or global.
    #[arg(long, global = true)]
    snr_mode: Option<SnrMode>,

    /// Append a wall-clock column (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds at a single scenario point.
    Point,
    /// Bounds over a sweep of FO frequency, SNR or record length.
    Sweep {
        /// Swept coordinate: freq, snr or length.
        #[arg(long)]
        sweep: Option<SweepKind>,
        /// Comma-separated sweep values (default grid if omitted).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// ARMA power spectral density table.
    Psd,
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<CrbError> for Failure {
    fn from(e: CrbError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn effective_config(cli: &Cli) -> Result<ScenarioConfig, CrbError> {
    let mut cfg = ScenarioConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CrbError::Config(format!("{}: {e}", path.display())))?;
        cfg.apply_text(&text)?;
    }
    if let Some(c) = cli.case {
        cfg.case = c;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(m) = cli.trials {
        cfg.trials = m;
    }
    if let Some(n) = cli.samples {
        cfg.samples = n;
    }
    if let Some(p) = &cli.system {
        cfg.system = SystemSource::File(p.clone());
    }
    if let Some(f) = cli.freq_hz {
        cfg.freq_hz = f;
    }
    if let Some(s) = cli.snr_db {
        cfg.snr_db = s;
    }
    if let Some(m) = cli.snr_mode {
        cfg.snr_mode = m;
    }
    if let Command::Sweep { sweep, values } = &cli.command {
        if let Some(k) = sweep {
            cfg.sweep = *k;
        }
        if let Some(v) = values {
            cfg.sweep_values = v.clone();
        }
    }
    Ok(cfg)
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = effective_config(cli).map_err(|e| Failure::Config(e.to_string()))?;
    if cli.print_config {
        print!("{}", cfg.to_text());
        return Ok(());
    }
    let sys = cfg.system.load().map_err(|e| Failure::Config(e.to_string()))?;
    match cli.command {
        Command::Psd => {
            emit_psd(&sys, open_out(&cli.out)?)?;
            Ok(())
        }
        Command::Point => {
            let point = cfg.base_point();
            cfg.validate(&sys, &[point]).map_err(|e| Failure::Config(e.to_string()))?;
            let rows = run_point(&cfg, &sys, point, 0);
            modecrb::scenarios::write_reports(&rows, open_out(&cli.out)?, cli.timing)?;
            match rows.into_iter().find_map(|r| r.result.err()) {
                Some(e) => Err(e.into()),
                None => Ok(()),
            }
        }
        Command::Sweep { .. } => {
            let points = cfg.points().map_err(|e| Failure::Config(e.to_string()))?;
            cfg.validate(&sys, &points).map_err(|e| Failure::Config(e.to_string()))?;
            let rows = run_sweep(&cfg, &sys)?;
            modecrb::scenarios::write_reports(&rows, open_out(&cli.out)?, cli.timing)?;
            let failed = rows.iter().filter(|r| r.result.is_err()).count();
            if failed > 0 {
                return Err(Failure::Numerical(format!("{failed} sweep rows failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Argument errors are configuration errors (exit 1), not clap's default 2.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("crb: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("crb: configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("crb: numerical failure: {msg}");
            ExitCode::from(2)
        }
    }
}
