use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::ops::ControlFlow;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use treemine::closed::{enumerate_closed, MiningConfig};
use treemine::gadget::{self, Report};
use treemine::height2::maximal_common_trees;
use treemine::oracle::{self, PatternSet};
use treemine::{
    canonical_form, load_dataset, parse_tree, subtree_iso, support_set, Dataset, ErrorClass, Mode,
};

/// Closed frequent subtree mining, reference oracles and reduction gadgets.
#[derive(Parser)]
#[command(name = "treemine", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate patterns with the fast miner.
    #[command(subcommand)]
    Mine(MineCmd),
    /// Exhaustive reference computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Maximal common trees of an unordered dataset of height at most 2.
    Mct(DataArgs),
    /// Support of a pattern; without --pattern, of each tree read from stdin.
    Support(SupportArgs),
    /// Whether --pattern is subtree isomorphic to --target.
    Iso(IsoArgs),
    /// Build a reduction gadget dataset.
    #[command(subcommand)]
    Gen(GadgetCmd),
    /// Check the reduction claims on an instance.
    #[command(subcommand)]
    Verify(GadgetCmd),
    /// Canonical key of --pattern, or of each input line.
    Canon(CanonArgs),
}

#[derive(Subcommand)]
enum MineCmd {
    /// Closed frequent trees (unordered, height at most 2).
    Closed(MineArgs),
}

#[derive(Subcommand)]
enum OracleCmd {
    Frequent(ThetaArgs),
    Closed(ThetaArgs),
    Maximal(ThetaArgs),
    Mct(DataArgs),
    /// Maximal independent sets of a hypergraph file.
    Mis(IoArgs),
}

#[derive(Subcommand)]
enum GadgetCmd {
    /// Hypergraph file ("n m" then one edge per line).
    Dual(IoArgs),
    /// DIMACS CNF file.
    Sat(SatArgs),
    /// Transaction file; --theta is the frequency threshold eta.
    Itemset(ItemsetArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Input file, or - for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output file (default standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DataArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Overrides the dataset header.
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct ThetaArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 1)]
    theta: usize,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    data: ThetaArgs,
    /// Stop after this many solutions.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct SupportArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Args)]
struct IsoArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "unordered")]
    mode: Mode,
}

#[derive(Args)]
struct CanonArgs {
    #[arg(long)]
    pattern: Option<String>,
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, default_value = "unordered")]
    mode: Mode,
}

#[derive(Args)]
struct SatArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Seed for sampled assignments (verify only).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of assignments to check (verify only).
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(Args)]
struct ItemsetArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, default_value_t = 1)]
    theta: usize,
    /// Maximal frequent itemsets, one per line (gen only; computed by
    /// brute force when absent).
    #[arg(long)]
    known: Option<PathBuf>,
}

enum Failure {
    Lib(treemine::Error),
    Io(io::Error),
    /// A verification report contained a failed check.
    Verify,
}

impl From<treemine::Error> for Failure {
    fn from(e: treemine::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Run = Result<(), Failure>;

/// Line sink that flushes after every line.
struct Out(Box<dyn Write>);

impl Out {
    fn open(path: &Option<PathBuf>) -> io::Result<Out> {
        Ok(Out(match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        }))
    }

    fn line(&mut self, s: impl std::fmt::Display) -> io::Result<()> {
        writeln!(self.0, "{s}")?;
        self.0.flush()
    }

    fn text(&mut self, s: &str) -> io::Result<()> {
        self.0.write_all(s.as_bytes())?;
        self.0.flush()
    }
}

fn read_input(path: &str) -> Result<Box<dyn BufRead>, Failure> {
    Ok(if path == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        let f = File::open(path).map_err(|e| treemine::Error::Io(format!("{path}: {e}")))?;
        Box::new(BufReader::new(f))
    })
}

fn read_text(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    read_input(path)?
        .read_to_string(&mut s)
        .map_err(|e| treemine::Error::Io(format!("{path}: {e}")))?;
    Ok(s)
}

fn dataset(args: &DataArgs) -> Result<Dataset, Failure> {
    Ok(load_dataset(read_input(&args.io.input)?, args.mode)?)
}

fn print_set(out: &mut Out, set: &PatternSet) -> Run {
    for k in set.keys() {
        out.line(k)?;
    }
    Ok(())
}

fn print_report(out: &mut Out, r: &Report) -> Run {
    out.text(&r.to_string())?;
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn mine_closed(a: &MineArgs) -> Run {
    let d = dataset(&a.data.data)?;
    let mut out = Out::open(&a.data.data.io.out)?;
    let mut pipe_err = None;
    let config = MiningConfig {
        theta: a.data.theta,
        limit: a.limit,
    };
    let summary = enumerate_closed(&d, config, |n| match out.line(&n.canon) {
        Ok(()) => ControlFlow::Continue(()),
        Err(e) => {
            pipe_err = Some(e);
            ControlFlow::Break(())
        }
    })?;
    eprintln!(
        "solutions={} max_delay_us={} max_depth={} max_live_patterns={} stopped_early={}",
        summary.count,
        summary.max_delay.as_micros(),
        summary.max_depth,
        summary.max_live_patterns,
        summary.stopped_early
    );
    match pipe_err {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn oracle(cmd: &OracleCmd) -> Run {
    match cmd {
        OracleCmd::Frequent(a) | OracleCmd::Closed(a) | OracleCmd::Maximal(a) => {
            let d = dataset(&a.data)?;
            let set = match cmd {
                OracleCmd::Frequent(_) => oracle::brute_frequent(&d, a.theta)?,
                OracleCmd::Closed(_) => oracle::brute_closed(&d, a.theta)?,
                _ => oracle::brute_maximal(&d, a.theta)?,
            };
            print_set(&mut Out::open(&a.data.io.out)?, &set)
        }
        OracleCmd::Mct(a) => {
            let d = dataset(a)?;
            print_set(&mut Out::open(&a.io.out)?, &oracle::brute_mct(&d)?)
        }
        OracleCmd::Mis(a) => {
            let h = gadget::parse_hypergraph(&read_text(&a.input)?)?;
            let mut out = Out::open(&a.out)?;
            for set in oracle::brute_mis(&h)? {
                let words: Vec<String> = set.iter().map(usize::to_string).collect();
                out.line(words.join(" "))?;
            }
            Ok(())
        }
    }
}

fn mct(a: &DataArgs) -> Run {
    let d = dataset(a)?;
    if d.mode() != Mode::Unordered {
        return Err(treemine::Error::Constraint("mct requires an unordered dataset".into()).into());
    }
    let mut keys: Vec<_> = maximal_common_trees(d.trees())?
        .iter()
        .map(|t| canonical_form(t, Mode::Unordered))
        .collect();
    keys.sort();
    let mut out = Out::open(&a.io.out)?;
    for k in keys {
        out.line(k)?;
    }
    Ok(())
}

fn support(a: &SupportArgs) -> Run {
    let d = dataset(&a.data)?;
    let mut out = Out::open(&a.data.io.out)?;
    let one = |text: &str| -> Result<String, Failure> {
        let p = parse_tree(text)?;
        let s = support_set(&p, &d);
        let idx: Vec<String> = s.indices.iter().map(usize::to_string).collect();
        Ok(format!(
            "{} {} {}",
            canonical_form(&p, d.mode()),
            s.count(),
            idx.join(",")
        ))
    };
    match &a.pattern {
        Some(p) => out.line(one(p)?)?,
        None => {
            for (i, line) in io::stdin().lock().lines().enumerate() {
                let line = line?;
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let r = one(line).map_err(|f| match f {
                    Failure::Lib(e) => Failure::Lib(treemine::Error::Line {
                        line: i + 1,
                        source: Box::new(e),
                    }),
                    other => other,
                })?;
                out.line(r)?;
            }
        }
    }
    Ok(())
}

fn iso(a: &IsoArgs) -> Run {
    let p = parse_tree(&a.pattern)?;
    let t = parse_tree(&a.target)?;
    Out::open(&None)?.line(subtree_iso(&p, &t, a.mode))?;
    Ok(())
}

fn canon(a: &CanonArgs) -> Run {
    let mut out = Out::open(&a.io.out)?;
    match &a.pattern {
        Some(p) => out.line(canonical_form(&parse_tree(p)?, a.mode))?,
        None => {
            let d = load_dataset(read_input(&a.io.input)?, Some(a.mode))?;
            for i in 0..d.len() {
                out.line(d.canon(i))?;
            }
        }
    }
    Ok(())
}

fn gen(cmd: &GadgetCmd) -> Run {
    match cmd {
        GadgetCmd::Dual(a) => {
            let h = gadget::parse_hypergraph(&read_text(&a.input)?)?;
            let g = gadget::gen_dualization_instance(&h)?;
            let theta = g.dataset.len();
            let d = g.dataset.with_theta_hint(theta);
            Out::open(&a.out)?.text(&d.to_text())?;
        }
        GadgetCmd::Sat(a) => {
            let cnf = gadget::parse_dimacs(&read_text(&a.io.input)?)?;
            let g = gadget::gen_sat_instance(&cnf)?;
            for w in &g.warnings {
                eprintln!("warning: {w}");
            }
            Out::open(&a.io.out)?.text(&g.dataset.to_text())?;
        }
        GadgetCmd::Itemset(a) => {
            let db = gadget::parse_transactions(&read_text(&a.io.input)?)?;
            let known = match &a.known {
                Some(p) => {
                    let k = gadget::parse_transactions(&read_text(&p.to_string_lossy())?)?;
                    k.transactions
                }
                None => gadget::brute_maximal_itemsets(&db, a.theta)?,
            };
            let g = gadget::gen_itemset_instance(&db, &known, a.theta)?;
            Out::open(&a.io.out)?.text(&g.dataset.to_text())?;
        }
    }
    Ok(())
}

fn verify(cmd: &GadgetCmd) -> Run {
    match cmd {
        GadgetCmd::Dual(a) => {
            let h = gadget::parse_hypergraph(&read_text(&a.input)?)?;
            print_report(&mut Out::open(&a.out)?, &gadget::verify_dual(&h)?)
        }
        GadgetCmd::Sat(a) => {
            let cnf = gadget::parse_dimacs(&read_text(&a.io.input)?)?;
            let r = gadget::verify_sat(&cnf, a.samples, a.seed)?;
            print_report(&mut Out::open(&a.io.out)?, &r)
        }
        GadgetCmd::Itemset(a) => {
            let db = gadget::parse_transactions(&read_text(&a.io.input)?)?;
            print_report(
                &mut Out::open(&a.io.out)?,
                &gadget::verify_itemset(&db, a.theta)?,
            )
        }
    }
}

fn run(cli: Cli) -> Run {
    match &cli.cmd {
        Cmd::Mine(MineCmd::Closed(a)) => mine_closed(a),
        Cmd::Oracle(c) => oracle(c),
        Cmd::Mct(a) => mct(a),
        Cmd::Support(a) => support(a),
        Cmd::Iso(a) => iso(a),
        Cmd::Gen(c) => gen(c),
        Cmd::Verify(c) => verify(c),
        Cmd::Canon(a) => canon(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Input => 2,
                ErrorClass::Constraint => 3,
                ErrorClass::SizeGuard => 4,
            })
        }
    }
}
