use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use slt::config::{parse_grid, ExperimentConfig, Mode};
use slt::formats;
use slt::harness::{self, BoundRow, GaRow};
use slt_core::{
    channel_llr, design_distribution, ChannelParams, DesignParams, ReceivedBlock, SltCode,
};

#[derive(Parser)]
#[command(name = "slt", version, about = "Systematic LT codes over BPSK/AWGN")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a source word into a systematic codeword.
    Encode(EncodeArgs),
    /// Decode channel LLRs (or received samples) with belief propagation.
    Decode(DecodeArgs),
    /// Monte Carlo BER sweep, optionally with GA and bound columns.
    Simulate(SimulateArgs),
    /// Gaussian-approximation BER prediction over an overhead grid.
    Ga(GaArgs),
    /// Design a check-degree distribution by linear programming.
    Optimize(OptimizeArgs),
    /// Error-floor lower bounds over an overhead grid.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args)]
struct EncodeArgs {
    /// Code graph file; if absent a code is drawn from --k/--m/--dist/--code-seed.
    #[arg(long, conflicts_with_all = ["k", "m"])]
    code: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "omega3")]
    dist: String,
    #[arg(long, default_value_t = 0)]
    code_seed: u64,
    /// Also write the code graph here.
    #[arg(long)]
    save_code: Option<PathBuf>,
    /// Source bits as a 0/1 string; read from --input or stdin if absent.
    #[arg(long, conflicts_with = "input")]
    bits: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Channel LLRs, one per code symbol; stdin if absent.
    #[arg(long, conflicts_with = "received")]
    llr: Option<PathBuf>,
    /// Received BPSK samples; converted to LLRs with --sigma2.
    #[arg(long)]
    received: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = slt_core::codec::DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SimulateArgs {
    /// Master seed; every random draw of the sweep derives from it.
    #[arg(long)]
    seed: u64,
    /// `key = value` file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// Overheads, `a,b,c` or `start:step:stop`.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    sigma2: Option<f64>,
    /// Preset name (omega1, omega2, omega3) or distribution file.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    max_bp_iters: Option<usize>,
    #[arg(long)]
    min_error_events: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Send random source words instead of the all-zero word.
    #[arg(long)]
    random_codeword: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct GaArgs {
    #[arg(long, default_value = "omega3")]
    dist: String,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value = "0:0.25:3")]
    eps: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Maximum check degree.
    #[arg(long, default_value_t = 20)]
    dc: usize,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    /// Upper end of the mean grid.
    #[arg(long, default_value_t = 45.0)]
    mu0: f64,
    #[arg(long, default_value_t = 500)]
    grid_points: usize,
    #[arg(long, default_value_t = 1e-6)]
    slack: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BoundsArgs {
    /// Average check degree; taken from --dist if absent.
    #[arg(long, conflicts_with = "dist")]
    beta: Option<f64>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value = "0:0.25:3")]
    eps: String,
    /// Drop the degree-0 Poisson term from lb1.
    #[arg(long)]
    exclude_degree_zero: bool,
    #[command(flatten)]
    output: Output,
}

fn read_input(path: Option<&Path>) -> Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            File::open(p)
                .with_context(|| format!("opening {}", p.display()))?
                .read_to_string(&mut text)?;
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn encode(args: EncodeArgs) -> Result<()> {
    let code = match (&args.code, args.k, args.m) {
        (Some(path), _, _) => formats::load_code(path)?,
        (None, Some(k), Some(m)) => {
            let omega = formats::load_distribution(&args.dist)?;
            SltCode::build(k, m, &omega, args.code_seed)?
        }
        _ => bail!("give either --code or both --k and --m"),
    };
    if let Some(path) = &args.save_code {
        std::fs::write(path, formats::format_code(&code))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let text = match args.bits {
        Some(b) => b,
        None => read_input(args.input.as_deref())?,
    };
    let codeword = code.encode(&formats::parse_bits(&text)?)?;
    let mut out = args.output.open()?;
    writeln!(out, "{}", formats::format_bits(&codeword))?;
    out.flush()?;
    Ok(())
}

fn decode(args: DecodeArgs) -> Result<()> {
    let code = formats::load_code(&args.code)?;
    let llr = match &args.received {
        Some(path) => {
            let y = formats::parse_reals(&read_input(Some(path))?)?;
            channel_llr(&ReceivedBlock(y), &ChannelParams::new(args.sigma2)?)
        }
        None => formats::parse_reals(&read_input(args.llr.as_deref())?)?,
    };
    let result = code.decode_bp(&llr, args.max_iters)?;
    eprintln!(
        "iterations={} converged={}",
        result.iterations_used, result.converged
    );
    let mut out = args.output.open()?;
    writeln!(out, "{}", formats::format_bits(result.source_bits()))?;
    out.flush()?;
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_kv_file(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.master_seed = args.seed;
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(eps) = &args.eps {
        cfg.epsilons = parse_grid(eps)?;
    }
    if let Some(s) = args.sigma2 {
        cfg.sigma2 = s;
    }
    if let Some(d) = args.dist {
        cfg.distribution = d;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(i) = args.max_bp_iters {
        cfg.max_bp_iters = i;
    }
    if let Some(e) = args.min_error_events {
        cfg.min_error_events = e;
    }
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    cfg.random_codeword |= args.random_codeword;
    let mut out = args.output.open()?;
    let result = harness::run_sweep(&cfg, &mut out);
    out.flush()?;
    let result = result?;
    for r in &result.records {
        eprintln!(
            "epsilon={} ber={:.3e} errors={} trials={} seconds={:.2}",
            r.epsilon, r.ber, r.error_events, r.trials_run, r.wall_seconds
        );
    }
    Ok(())
}

fn ga(args: GaArgs) -> Result<()> {
    let omega = formats::load_distribution(&args.dist)?;
    let rows = parse_grid(&args.eps)?
        .into_iter()
        .map(|e| harness::ga_point(&omega, args.sigma2, e))
        .collect::<Result<Vec<GaRow>, _>>()?;
    harness::write_csv(args.output.open()?, &rows)?;
    Ok(())
}

fn optimize(args: OptimizeArgs) -> Result<()> {
    let params = DesignParams {
        max_degree: args.dc,
        sigma2: args.sigma2,
        mu0: args.mu0,
        grid_points: args.grid_points,
        slack: args.slack,
    };
    let d = design_distribution(&params)?;
    let mut out = args.output.open()?;
    writeln!(
        out,
        "# alpha={} beta={} epsilon_min={}",
        d.alpha, d.beta, d.epsilon_min
    )?;
    out.write_all(formats::format_distribution(&d.omega_check).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<()> {
    let beta = match (args.beta, &args.dist) {
        (Some(b), _) => b,
        (None, Some(d)) => formats::load_distribution(d)?.avg_degree(),
        (None, None) => bail!("give --beta or --dist"),
    };
    let rows = parse_grid(&args.eps)?
        .into_iter()
        .map(|e| harness::bound_point(beta, args.sigma2, e, !args.exclude_degree_zero))
        .collect::<Result<Vec<BoundRow>, _>>()?;
    harness::write_csv(args.output.open()?, &rows)?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a),
        Command::Ga(a) => ga(a),
        Command::Optimize(a) => optimize(a),
        Command::Bounds(a) => bounds(a),
    }
}
