use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use bcs_core::model::{bench, parse_problem, print_problem, Ncsp};
use bcs_core::report::{stats_json, write_boxes, write_svg, RunReport};
use bcs_core::search::{solve, Algorithm, CbPolicy, Order, SolveOptions, SplitPolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Inner and boundary box coverings of numerical constraint problems.
#[derive(Parser)]
#[command(name = "bcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a benchmark or a problem file.
    Solve(SolveArgs),
    /// List the built-in benchmarks.
    List,
    /// Parse and validate a problem file.
    Check {
        file: PathBuf,
        /// Print the normalized problem.
        #[arg(long)]
        print: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct SolveArgs {
    /// Benchmark name, or @path for a problem file.
    #[arg(long, required_unless_present = "all_benchmarks")]
    problem: Option<String>,
    /// Solve every built-in benchmark and print one summary line each.
    #[arg(long, conflicts_with_all = ["problem", "out", "svg", "stats"])]
    all_benchmarks: bool,
    /// dmbc, dmbc_plus, uca5, uca6 or uca6_plus.
    #[arg(long, default_value = "uca6_plus", value_parser = parse_algo)]
    algo: Algorithm,
    /// Tolerance: one value for every variable or a comma-separated list.
    #[arg(long, default_value = "0.1")]
    eps: String,
    /// ds or bs-ds.
    #[arg(long, value_parser = parse_split)]
    split: Option<SplitPolicy>,
    #[arg(long, value_enum)]
    memo: Option<OnOff>,
    /// Fragmentation ratio for box splitting.
    #[arg(long)]
    frag: Option<f64>,
    /// Active-variable count at which UCA6+ switches to cell subdivision.
    #[arg(long)]
    dstop: Option<usize>,
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    /// Constraints given fresh complementary boxes in UCA6+: all or first-K.
    #[arg(long, value_parser = parse_cb)]
    cb: Option<CbPolicy>,
    /// Write boxes to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave running constraint ids out of the box file.
    #[arg(long)]
    no_running: bool,
    /// Write the JSON run report to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Draw a 2-D paving as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Dfs,
    Bfs,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

fn parse_split(s: &str) -> Result<SplitPolicy, String> {
    s.parse()
}

fn parse_cb(s: &str) -> Result<CbPolicy, String> {
    s.parse()
}

/// Failures are split into usage errors and broken solver guarantees.
enum Failure {
    Usage(anyhow::Error),
    Contract(Vec<String>),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn load_problem(spec: &str) -> Result<Ncsp> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return parse_problem(&text).map_err(|e| anyhow!("{path}: {e}"));
    }
    bench::benchmark(spec).ok_or_else(|| anyhow!("unknown problem '{spec}' (try `bcs list`)"))
}

fn options(args: &SolveArgs, dim: usize) -> Result<SolveOptions> {
    let parts: Vec<f64> = args
        .eps
        .split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad eps value '{s}'")))
        .collect::<Result<_>>()?;
    let eps = match parts.len() {
        1 => vec![parts[0]; dim],
        n if n == dim => parts,
        n => bail!("eps has {n} values but the problem has {dim} variables"),
    };
    let mut o = SolveOptions::new(args.algo, eps);
    if let Some(s) = args.split {
        o.split = s;
    }
    if let Some(m) = args.memo {
        o.memo = matches!(m, OnOff::On);
    }
    if let Some(f) = args.frag {
        o.frag_ratio = f;
    }
    if let Some(d) = args.dstop {
        o.d_stop = d;
    }
    if let Some(ord) = args.order {
        o.order = match ord {
            OrderArg::Dfs => Order::Dfs,
            OrderArg::Bfs => Order::Bfs,
        };
    }
    if let Some(cb) = args.cb {
        o.cb_policy = cb;
    }
    o.validate(dim)?;
    Ok(o)
}

fn run_solve(args: &SolveArgs) -> Result<(), Failure> {
    if args.all_benchmarks {
        println!("{:<5} {:<10} {:>9} {:>8} {:>9} {:>8}", "name", "algo", "time_s", "inner", "boundary", "ratio");
        for name in bench::names() {
            let p = load_problem(name)?;
            let o = options(args, p.dim())?;
            let r = solve(&p, &o).map_err(anyhow::Error::from)?;
            let bad = r.contract_violations(&p);
            if !bad.is_empty() {
                return Err(Failure::Contract(bad));
            }
            let s = &r.stats;
            let ratio = s.ratio.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
            println!("{:<5} {:<10} {:>9.3} {:>8} {:>9} {:>8}", name, o.algorithm, s.wall_time_s, s.inner_boxes, s.boundary_boxes, ratio);
        }
        return Ok(());
    }
    let spec = args.problem.as_deref().expect("clap requires --problem");
    let p = load_problem(spec)?;
    let o = options(args, p.dim())?;
    let r = solve(&p, &o).map_err(anyhow::Error::from)?;
    let bad = r.contract_violations(&p);
    if !bad.is_empty() {
        return Err(Failure::Contract(bad));
    }
    let mut report = RunReport::new(&r, &o);
    if let Some(path) = &args.out {
        write_boxes(&r, path, !args.no_running).map_err(anyhow::Error::from)?;
        report.files.push(path.display().to_string());
    }
    if let Some(path) = &args.svg {
        write_svg(&r, &p.domain(), path).map_err(anyhow::Error::from)?;
        report.files.push(path.display().to_string());
    }
    if let Some(path) = &args.stats {
        report.files.push(path.display().to_string());
        stats_json(&report, path).map_err(anyhow::Error::from)?;
    }
    println!("{}", report.to_json().map_err(anyhow::Error::from)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::List => {
            for name in bench::names() {
                let p = load_problem(name)?;
                let n = p.constraints().len();
                println!("{:<5} {} variables, {} constraint{}", name, p.dim(), n, if n == 1 { "" } else { "s" });
            }
            Ok(())
        }
        Command::Check { file, print } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let p = parse_problem(&text).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            if print {
                print!("{}", print_problem(&p));
            } else {
                println!("ok: problem {} with {} variables and {} constraints", p.name(), p.dim(), p.constraints().len());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Contract(msgs)) => {
            for m in msgs {
                eprintln!("contract violation: {m}");
            }
            ExitCode::from(2)
        }
    }
}
