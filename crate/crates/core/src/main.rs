use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dcopt::dontcare::{complete_dc, DcConfig, DEFAULT_MAX_FANINS, MAX_VARS};
use dcopt::optimize::{mfs, verify, MfsConfig, MfsStats, Verdict};
use dcopt::windowing::Context;
use dcopt::{parse_blif, write_blif, Network, TruthTable};

#[derive(Parser)]
#[command(
    name = "dcopt",
    version,
    about = "Optimize Boolean networks with complete don't-cares"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize every node against its don't-cares and write the result
    Optimize(OptimizeArgs),
    /// Print the don't-cares of one node
    Cdc(CdcArgs),
    /// Check two networks for combinational equivalence
    Verify { a: PathBuf, b: PathBuf },
    /// Print size statistics
    Stats {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ContextArgs {
    /// Window size as fanin x fanout levels, e.g. 2x2
    #[arg(long, default_value = "2x2", value_parser = parse_window)]
    window: Context,
    /// Use the whole network instead of a window
    #[arg(long)]
    global: bool,
}

impl ContextArgs {
    fn context(&self) -> Context {
        if self.global {
            Context::Global
        } else {
            self.window
        }
    }
}

fn parse_window(s: &str) -> Result<Context, String> {
    match s.parse()? {
        Context::Global => Err("use --global for the whole network".into()),
        c => Ok(c),
    }
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[command(flatten)]
    context: ContextArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rounds of 64 random patterns simulated per node
    #[arg(long, default_value_t = 32)]
    sim_words: usize,
    /// Skip nodes with more fanins
    #[arg(long, default_value_t = DEFAULT_MAX_FANINS)]
    max_fanins: usize,
    #[arg(long, default_value_t = 1)]
    passes: usize,
    /// Check the result against the input
    #[arg(long)]
    verify: bool,
    /// Print the statistics as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CdcArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    node: String,
    #[command(flatten)]
    context: ContextArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Serialize)]
struct NetworkStats<'a> {
    name: &'a str,
    inputs: usize,
    outputs: usize,
    nodes: usize,
    sop_literals: usize,
}

fn read_network(path: &Path) -> Result<Network> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_blif(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn print_stats_table(net_name: &str, context: Context, s: &MfsStats) {
    println!("{:<16}{}", "network", net_name);
    println!("{:<16}{}", "context", context);
    println!("{:<16}{} -> {}", "nodes", s.nodes_before, s.nodes_after);
    println!(
        "{:<16}{} -> {} (after sweep {})",
        "SOP literals", s.literals_before, s.literals_after, s.literals_swept
    );
    println!("{:<16}{}", "visited", s.visited);
    println!("{:<16}{}", "changed", s.changed);
    println!(
        "{:<16}{} fanin limit, {} solver",
        "skipped", s.skipped_fanins, s.skipped_solver
    );
    println!("{:<16}{}", "passes", s.passes);
    println!("{:<16}{:.3} s", "time", s.elapsed_secs);
}

fn print_counterexample(assignment: &[(String, bool)], po: &str) {
    println!("counterexample on output {po}");
    for (name, v) in assignment {
        println!("  {name} = {}", *v as u8);
    }
}

fn run_optimize(args: &OptimizeArgs) -> Result<ExitCode> {
    if args.max_fanins > MAX_VARS {
        bail!("--max-fanins cannot exceed {MAX_VARS}");
    }
    let original = read_network(&args.input)?;
    let mut net = original.clone();
    let config = MfsConfig {
        context: args.context.context(),
        dc: DcConfig {
            sim_words: args.sim_words,
            seed: args.seed,
            max_fanins: args.max_fanins,
            ..DcConfig::default()
        },
        passes: args.passes,
    };
    let stats = mfs(&mut net, &config);
    fs::write(&args.output, write_blif(&net)).with_context(|| format!("cannot write {}", args.output.display()))?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&stats)?);
    } else {
        print_stats_table(net.name(), config.context, &stats);
    }
    if args.verify {
        match verify(&original, &net)? {
            Verdict::Equivalent => {
                if !args.json {
                    println!("{:<16}equivalent", "verify");
                }
            }
            Verdict::Counterexample { assignment, po } => {
                print_counterexample(&assignment, &po);
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn minterm_list(t: &TruthTable) -> String {
    if t.is_zero() {
        return "(empty)".into();
    }
    t.minterms()
        .map(|m| {
            (0..t.num_vars())
                .map(|j| if m >> j & 1 != 0 { '1' } else { '0' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_cdc(args: &CdcArgs) -> Result<ExitCode> {
    let net = read_network(&args.input)?;
    let id = net
        .find(&args.node)
        .ok_or_else(|| anyhow!("no node named '{}'", args.node))?;
    let config = DcConfig {
        seed: args.seed,
        max_fanins: MAX_VARS,
        ..DcConfig::default()
    };
    let r = complete_dc(&net, id, args.context.context(), &config)?;
    let names = |ids: &[dcopt::NodeId]| ids.iter().map(|i| net.node(*i).name()).collect::<Vec<_>>().join(" ");
    println!("node: {}", args.node);
    println!("fanins: {}", names(net.fanins(id)));
    println!("leaves: {}", names(&r.window.leaves));
    println!("roots: {}", names(&r.window.roots));
    println!("onset: {}", minterm_list(r.isf.onset()));
    println!("dcset: {}", minterm_list(r.isf.dcset()));
    Ok(ExitCode::SUCCESS)
}

fn run_verify(a: &Path, b: &Path) -> Result<ExitCode> {
    let (na, nb) = (read_network(a)?, read_network(b)?);
    match verify(&na, &nb)? {
        Verdict::Equivalent => {
            println!("equivalent");
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Counterexample { assignment, po } => {
            print_counterexample(&assignment, &po);
            Ok(ExitCode::from(2))
        }
    }
}

fn run_stats(file: &Path, json: bool) -> Result<ExitCode> {
    let net = read_network(file)?;
    let s = NetworkStats {
        name: net.name(),
        inputs: net.pis().len(),
        outputs: net.pos().len(),
        nodes: net.num_logic_nodes(),
        sop_literals: net.literal_count(),
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&s)?);
    } else {
        println!("{:<16}{}", "network", s.name);
        println!("{:<16}{}", "inputs", s.inputs);
        println!("{:<16}{}", "outputs", s.outputs);
        println!("{:<16}{}", "nodes", s.nodes);
        println!("{:<16}{}", "SOP literals", s.sop_literals);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Optimize(args) => run_optimize(args),
        Command::Cdc(args) => run_cdc(args),
        Command::Verify { a, b } => run_verify(a, b),
        Command::Stats { file, json } => run_stats(file, *json),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
