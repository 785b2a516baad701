//! Command-line front end. Every subcommand maps onto one library entry
//! point; the binary's only jobs are argument parsing, file plumbing, and
//! exit codes (0 = success / not distinguished, 1 = distinguished,
//! 2 = usage, 3 = runtime or resource limit).

use std::fs;
use std::path::Path;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::generate::{barabasi_albert, erdos_renyi, sample_gammas};
use crate::graph::Graph;
use crate::harness::{
    class_count_vs_precision, lottery_experiment, min_precision_bits,
    MinBitsOutcome, ModelOptions, precision_sweep,
};
use crate::io::{load_citations, load_graph, save_graph};
use crate::korder::{
    default_nwl_rounds, k_perfect_simulation, nwl_distinguish, nwl_refine, DEFAULT_TUPLE_BUDGET,
};
use crate::mpnn::{
    feature_class_count, mpnn_distinguish, mpnn_readout, mpnn_run, Activation, Encoding,
    MpnnConfig, WeightScheme,
};
use crate::precision::PrecisionContext;
use crate::report::{format_hex_f64, parse_real, CsvRecord, Report, RunConfig};
use crate::wl::{
    default_max_rounds, default_pair_rounds, wl_distinguish, wl_run, DistinguishOutcome,
};

#[derive(Parser)]
#[command(name = "wlsim", version, about = "Color refinement and its arithmetic simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color refinement on one graph or a pair.
    #[command(subcommand)]
    Wl(WlCmd),
    /// k-order refinement over node tuples.
    #[command(subcommand)]
    Nwl(NwlCmd),
    /// The one-dimensional message-passing network.
    #[command(subcommand)]
    Mpnn(MpnnCmd),
    /// The k-order message-passing network.
    #[command(subcommand)]
    Kmpnn(KmpnnCmd),
    /// Batch experiments with CSV/JSON reports.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
    /// Graph generation and ingestion helpers.
    #[command(subcommand)]
    Generate(GenerateCmd),
}

#[derive(Subcommand)]
enum WlCmd {
    /// Refine one graph to convergence and print per-round class counts.
    Run {
        graph: String,
        /// Node label file ("node label" per line).
        #[arg(long)]
        labels: Option<String>,
        /// Refinement round budget (default: node count).
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Write the full trace as CSV (round,node,color); "-" = stdout.
        #[arg(long, value_name =  "PATH")]
        emit_trace: Option<String>,
    },
    /// Exit 1 if refinement tells the two graphs apart, 0 otherwise.
    Distinguish {
        graph1: String,
        graph2: String,
        /// Round budget (default: combined node count).
        #[arg(long)]
        max_rounds: Option<usize>,
    },
}

#[derive(Subcommand)]
enum NwlCmd {
    /// k-order refinement on one graph.
    Run {
        graph: String,
        /// Tuple order (k >= 2).
        #[arg(short, long = "order")]
        k: usize,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Abort when n^k exceeds this many tuples.
        #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
        tuple_budget: u64,
    },
    /// Exit 1 if the k-order test tells the two graphs apart.
    Distinguish {
        graph1: String,
        graph2: String,
        #[arg(short, long = "order")]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
        tuple_budget: u64,
    },
}

/// Model flags shared by the network subcommands.
#[derive(Args, Clone)]
struct ModelArgs {
    /// Parameter in (0,1); decimal or hex float, comma-separate for
    /// per-layer values.
    #[arg(long)]
    gamma: String,
    /// Significand precision in bits.
    #[arg(long)]
    bits: u32,
    #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "sigmoid")]
    activation: String,
    #[arg(long, value_parser = ["theory", "simplified"], default_value = "simplified")]
    scheme: String,
    #[arg(long, value_parser = ["constant-one", "sqrt-primes"], default_value = "constant-one")]
    encoding: String,
}

#[derive(Subcommand)]
enum MpnnCmd {
    /// Run the network and print the final readout and class count.
    Run {
        graph: String,
        #[arg(long)]
        labels: Option<String>,
        #[command(flatten)]
        model: ModelArgs,
        /// Rounds to run (default: the refinement convergence round).
        #[arg(long)]
        layers: Option<usize>,
        /// Write the trace as CSV (round,node,feature hex+decimal).
        #[arg(long, value_name = "PATH")]
        emit_trace: Option<String>,
    },
    /// Exit 1 if the final readouts differ as p-bit values.
    Distinguish {
        graph1: String,
        graph2: String,
        #[command(flatten)]
        model: ModelArgs,
        /// Rounds to run (default: combined node count).
        #[arg(long)]
        layers: Option<usize>,
    },
}

#[derive(Subcommand)]
enum KmpnnCmd {
    /// Check whether the k-order network tracks k-order refinement.
    Simulate {
        graph: String,
        #[arg(short, long = "order")]
        k: usize,
        /// Parameter in (0,1); decimal or hex float.
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        bits: u32,
        /// arctan stays injective where sigmoid saturates under the
        /// (n+1)-base weights, so it is the default here.
        #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "arctan")]
        activation: String,
        #[arg(long, default_value_t = DEFAULT_TUPLE_BUDGET)]
        tuple_budget: u64,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Which gammas simulate refinement perfectly on every graph in a
    /// directory of .edges files.
    Lottery {
        #[arg(long)]
        graphs_dir: String,
        #[arg(long, default_value_t = 50)]
        num_gammas: usize,
        #[arg(long, default_value_t = 256)]
        bits: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Report path (.csv or .json); "-" or omitted = CSV to stdout.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "sigmoid")]
        activation: String,
        #[arg(long, value_parser = ["theory", "simplified"], default_value = "simplified")]
        scheme: String,
    },
    /// Minimum sufficient precision as graph size grows: one G(n, 4/n)
    /// instance per size, `num_gammas` gammas each.
    PrecisionSweep {
        /// Comma-separated sizes, e.g. 50,100,200.
        #[arg(long)]
        sizes: String,
        #[arg(long, default_value_t = 10)]
        num_gammas: usize,
        /// Gammas are sampled from (0, gamma_max).
        #[arg(long, default_value_t = 0.5)]
        gamma_max: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Give up on a (graph, gamma) cell above this precision.
        #[arg(long, default_value_t = 1024)]
        p_max: u32,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "sigmoid")]
        activation: String,
        #[arg(long, value_parser = ["theory", "simplified"], default_value = "simplified")]
        scheme: String,
    },
    /// Distinct feature values at convergence vs precision, against the
    /// refinement class count.
    Classes {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        labels: Option<String>,
        /// Comma-separated precisions, e.g. 8,16,32,64,128,256.
        #[arg(long)]
        bits_list: String,
        /// Explicit gammas (decimal or hex float, comma-separated);
        /// defaults to `num_gammas` sampled values.
        #[arg(long)]
        gammas: Option<String>,
        #[arg(long, default_value_t = 20)]
        num_gammas: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "sigmoid")]
        activation: String,
        #[arg(long, value_parser = ["theory", "simplified"], default_value = "simplified")]
        scheme: String,
        #[arg(long, value_parser = ["constant-one", "sqrt-primes"], default_value = "constant-one")]
        encoding: String,
    },
    /// Minimum sufficient precision for one graph and gamma.
    MinBits {
        graph: String,
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1024)]
        p_max: u32,
        #[arg(long, value_parser = ["sigmoid", "arctan"], default_value = "sigmoid")]
        activation: String,
        #[arg(long, value_parser = ["theory", "simplified"], default_value = "simplified")]
        scheme: String,
    },
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Erdos-Renyi G(n, p).
    Er {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        prob: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: String,
    },
    /// Barabasi-Albert preferential attachment.
    Ba {
        #[arg(long)]
        nodes: usize,
        /// Edges added per new node.
        #[arg(long)]
        attach: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: String,
    },
    /// Convert a citation list (arbitrary ids, one "a b" pair per line)
    /// into a simple undirected graph file.
    FromCitations {
        input: String,
        #[arg(long)]
        out: String,
    },
}

/// Parses argv and runs; the return value is the process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// [`run`] with explicit arguments, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Wl(cmd) => run_wl(cmd),
        Command::Nwl(cmd) => run_nwl(cmd),
        Command::Mpnn(cmd) => run_mpnn(cmd),
        Command::Kmpnn(cmd) => run_kmpnn(cmd),
        Command::Experiment(cmd) => run_experiment(cmd),
        Command::Generate(cmd) => run_generate(cmd),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad {what} `{}`", item.trim())))
        })
        .collect()
}

fn parse_gammas(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|item| parse_real(item.trim())).collect()
}

fn activation_from(s: &str) -> Activation {
    match s {
        "arctan" => Activation::Arctan,
        _ => Activation::Sigmoid,
    }
}

fn scheme_from(s: &str) -> WeightScheme {
    match s {
        "theory" => WeightScheme::Theory,
        _ => WeightScheme::Simplified,
    }
}

fn encoding_from(s: &str) -> Encoding {
    match s {
        "sqrt-primes" => Encoding::SqrtPrimes,
        _ => Encoding::ConstantOne,
    }
}

impl ModelArgs {
    fn config(&self) -> Result<MpnnConfig> {
        let cfg = MpnnConfig {
            gammas: parse_gammas(&self.gamma)?,
            activation: activation_from(&self.activation),
            scheme: scheme_from(&self.scheme),
            encoding: encoding_from(&self.encoding),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.bits)
    }
}

fn load(path: &str, labels: Option<&str>) -> Result<Graph> {
    load_graph(Path::new(path), labels.map(Path::new))
}

fn write_output(path: &str, content: &str) -> Result<()> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        fs::write(path, content).map_err(|e| Error::io(path, e))
    }
}

fn emit_report<T: serde::Serialize + CsvRecord>(
    report: &Report<T>,
    out: Option<&str>,
) -> Result<()> {
    match out {
        None | Some("-") => write_output("-", &report.to_csv()?),
        Some(path) => {
            write_output(path, &report.render(path)?)?;
            eprintln!("wrote {path} ({} records)", report.records.len());
            Ok(())
        }
    }
}

struct WlTraceRow {
    round: usize,
    node: u32,
    color: u32,
}

impl CsvRecord for WlTraceRow {
    fn columns() -> &'static [&'static str] {
        &["round", "node", "color"]
    }
    fn row(&self) -> Vec<String> {
        vec![self.round.to_string(), self.node.to_string(), self.color.to_string()]
    }
}

impl serde::Serialize for WlTraceRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WlTraceRow", 3)?;
        st.serialize_field("round", &self.round)?;
        st.serialize_field("node", &self.node)?;
        st.serialize_field("color", &self.color)?;
        st.end()
    }
}

struct MpnnTraceRow {
    round: usize,
    node: u32,
    hex: String,
    decimal: f64,
}

impl CsvRecord for MpnnTraceRow {
    fn columns() -> &'static [&'static str] {
        &["round", "node", "feature_hex", "feature_decimal"]
    }
    fn row(&self) -> Vec<String> {
        vec![
            self.round.to_string(),
            self.node.to_string(),
            self.hex.clone(),
            format!("{:e}", self.decimal),
        ]
    }
}

impl serde::Serialize for MpnnTraceRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MpnnTraceRow", 4)?;
        st.serialize_field("round", &self.round)?;
        st.serialize_field("node", &self.node)?;
        st.serialize_field("feature_hex", &self.hex)?;
        st.serialize_field("feature_decimal", &self.decimal)?;
        st.end()
    }
}

fn run_wl(cmd: WlCmd) -> Result<i32> {
    match cmd {
        WlCmd::Run { graph, labels, max_rounds, emit_trace } => {
            let g = load(&graph, labels.as_deref())?;
            let budget = max_rounds.unwrap_or_else(|| default_max_rounds(&g));
            let trace = wl_run(&g, budget)?;
            println!("nodes: {}", g.node_count());
            println!("edges: {}", g.edge_count());
            for (t, classes) in trace.class_counts.iter().enumerate() {
                println!("round {t}: {classes} classes");
            }
            match trace.stable_round() {
                Some(t) => println!("stable after round {t}"),
                None => println!("round budget {budget} exhausted before stability"),
            }
            if let Some(path) = emit_trace {
                let rows: Vec<WlTraceRow> = trace
                    .colorings
                    .iter()
                    .enumerate()
                    .flat_map(|(t, colors)| {
                        colors.iter().enumerate().map(move |(v, &c)| WlTraceRow {
                            round: t,
                            node: v as u32,
                            color: c,
                        })
                    })
                    .collect();
                let config = RunConfig::new("wl run")
                    .arg("graph", &graph)
                    .arg("max_rounds", budget);
                emit_report(&Report::new(config, rows), Some(&path))?;
            }
            Ok(0)
        }
        WlCmd::Distinguish { graph1, graph2, max_rounds } => {
            let g1 = load(&graph1, None)?;
            let g2 = load(&graph2, None)?;
            let budget = max_rounds.unwrap_or_else(|| default_pair_rounds(&g1, &g2));
            match wl_distinguish(&g1, &g2, budget)? {
                DistinguishOutcome::Distinguished { round } => {
                    println!("distinguished at round {round}");
                    Ok(1)
                }
                DistinguishOutcome::Undistinguished { rounds } => {
                    println!("undistinguished after {rounds} rounds");
                    Ok(0)
                }
            }
        }
    }
}

fn run_nwl(cmd: NwlCmd) -> Result<i32> {
    match cmd {
        NwlCmd::Run { graph, k, max_rounds, tuple_budget } => {
            let g = load(&graph, None)?;
            let budget = max_rounds.unwrap_or_else(|| default_nwl_rounds(&[&g], k));
            let trace = nwl_refine(&[&g], k, budget, tuple_budget)?;
            println!("nodes: {} (order {k}: {} tuples)", g.node_count(), g.node_count().pow(k as u32));
            for (t, classes) in trace.class_counts.iter().enumerate() {
                println!("round {t}: {classes} classes");
            }
            match trace.stable_round() {
                Some(t) => println!("stable after round {t}"),
                None => println!("round budget {budget} exhausted before stability"),
            }
            Ok(0)
        }
        NwlCmd::Distinguish { graph1, graph2, k, tuple_budget } => {
            let g1 = load(&graph1, None)?;
            let g2 = load(&graph2, None)?;
            match nwl_distinguish(&g1, &g2, k, tuple_budget)? {
                DistinguishOutcome::Distinguished { round } => {
                    println!("distinguished at round {round}");
                    Ok(1)
                }
                DistinguishOutcome::Undistinguished { rounds } => {
                    println!("undistinguished after {rounds} rounds");
                    Ok(0)
                }
            }
        }
    }
}

fn run_mpnn(cmd: MpnnCmd) -> Result<i32> {
    match cmd {
        MpnnCmd::Run { graph, labels, model, layers, emit_trace } => {
            let g = load(&graph, labels.as_deref())?;
            let cfg = model.config()?;
            let ctx = model.context()?;
            let rounds = match layers {
                Some(t) => t,
                None => {
                    let wl = wl_run(&g, default_max_rounds(&g))?;
                    wl.stable_round().unwrap_or(wl.colorings.len() - 1)
                }
            };
            let trace = mpnn_run(&g, &cfg, rounds, &ctx)?;
            let last = trace.last().expect("trace has the initial round");
            let readout = mpnn_readout(last, &ctx);
            println!("rounds: {rounds}");
            println!("classes: {}", feature_class_count(&last.values));
            println!("readout: {} ({})", ctx.format_hex(&readout), readout.to_f64());
            if let Some(path) = emit_trace {
                let rows: Vec<MpnnTraceRow> = trace
                    .iter()
                    .flat_map(|features| {
                        let round = features.round;
                        features.values.iter().enumerate().map(move |(v, x)| MpnnTraceRow {
                            round,
                            node: v as u32,
                            hex: ctx.format_hex(x),
                            decimal: x.to_f64(),
                        })
                    })
                    .collect();
                let config = RunConfig::new("mpnn run")
                    .arg("graph", &graph)
                    .arg("gamma", &model.gamma)
                    .arg("bits", model.bits)
                    .arg("layers", rounds)
                    .arg("activation", &model.activation)
                    .arg("scheme", &model.scheme)
                    .arg("encoding", &model.encoding);
                emit_report(&Report::new(config, rows), Some(&path))?;
            }
            Ok(0)
        }
        MpnnCmd::Distinguish { graph1, graph2, model, layers } => {
            let g1 = load(&graph1, None)?;
            let g2 = load(&graph2, None)?;
            let cfg = model.config()?;
            let ctx = model.context()?;
            let rounds = layers.unwrap_or_else(|| default_pair_rounds(&g1, &g2));
            if mpnn_distinguish(&g1, &g2, &cfg, rounds, &ctx)? {
                println!("distinguished: readouts differ at {} bits", model.bits);
                Ok(1)
            } else {
                println!("undistinguished: readouts agree at {} bits", model.bits);
                Ok(0)
            }
        }
    }
}

fn run_kmpnn(cmd: KmpnnCmd) -> Result<i32> {
    match cmd {
        KmpnnCmd::Simulate { graph, k, gamma, bits, activation, tuple_budget } => {
            let g = load(&graph, None)?;
            let gamma = parse_real(&gamma)?;
            let ctx = PrecisionContext::new(bits)?;
            let perfect =
                k_perfect_simulation(&g, k, gamma, activation_from(&activation), &ctx, tuple_budget)?;
            println!(
                "perfect: {perfect} (k={k}, gamma={}, {bits} bits)",
                format_hex_f64(gamma)
            );
            Ok(0)
        }
    }
}

fn load_graphs_dir(dir: &str) -> Result<Vec<(String, Graph)>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<std::path::PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "edges"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::invalid(format!("no .edges files in `{dir}`")));
    }
    paths
        .iter()
        .map(|p| {
            let id = p.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            Ok((id, load_graph(p, None)?))
        })
        .collect()
}

fn run_experiment(cmd: ExperimentCmd) -> Result<i32> {
    match cmd {
        ExperimentCmd::Lottery { graphs_dir, num_gammas, bits, seed, out, activation, scheme } => {
            if num_gammas == 0 {
                return Err(Error::invalid("--num-gammas must be at least 1".to_string()));
            }
            let graphs = load_graphs_dir(&graphs_dir)?;
            let gammas = sample_gammas(num_gammas, 0.0, 1.0, seed);
            let ctx = PrecisionContext::new(bits)?;
            let opts = ModelOptions {
                activation: activation_from(&activation),
                scheme: scheme_from(&scheme),
                encoding: Encoding::ConstantOne,
            };
            let result = lottery_experiment(&graphs, &gammas, &ctx, &opts)?;
            eprintln!(
                "{} of {} gammas are lottery gammas over {} graphs",
                result.lottery_gammas.len(),
                num_gammas,
                result.graph_count
            );
            let config = RunConfig::new("experiment lottery")
                .arg("graphs_dir", &graphs_dir)
                .arg("graph_count", result.graph_count)
                .arg("num_gammas", num_gammas)
                .arg("bits", bits)
                .arg("seed", seed)
                .arg("activation", &activation)
                .arg("scheme", &scheme);
            emit_report(&Report::new(config, result.rows), out.as_deref())?;
            Ok(0)
        }
        ExperimentCmd::PrecisionSweep {
            sizes,
            num_gammas,
            gamma_max,
            seed,
            p_max,
            out,
            activation,
            scheme,
        } => {
            if num_gammas == 0 {
                return Err(Error::invalid("--num-gammas must be at least 1".to_string()));
            }
            let sizes: Vec<usize> = parse_list(&sizes, "size")?;
            if sizes.is_empty() {
                return Err(Error::invalid("--sizes must name at least one size".to_string()));
            }
            let gammas = sample_gammas(num_gammas, 0.0, gamma_max, seed);
            let opts = ModelOptions {
                activation: activation_from(&activation),
                scheme: scheme_from(&scheme),
                encoding: Encoding::ConstantOne,
            };
            let result = precision_sweep(&sizes, &gammas, seed, p_max, &opts)?;
            for s in &result.summary {
                eprintln!(
                    "n={}: mean {:.1} bits (sd {:.1}) over {}/{} gammas",
                    s.n, s.mean_bits, s.sd_bits, s.found, s.total
                );
            }
            let config = RunConfig::new("experiment precision-sweep")
                .arg("sizes", sizes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","))
                .arg("num_gammas", num_gammas)
                .arg("gamma_max", format_hex_f64(gamma_max))
                .arg("seed", seed)
                .arg("p_max", p_max)
                .arg("activation", &activation)
                .arg("scheme", &scheme);
            emit_report(&Report::new(config, result.cells), out.as_deref())?;
            Ok(0)
        }
        ExperimentCmd::Classes {
            graph,
            labels,
            bits_list,
            gammas,
            num_gammas,
            seed,
            out,
            activation,
            scheme,
            encoding,
        } => {
            let g = load(&graph, labels.as_deref())?;
            let bits_list: Vec<u32> = parse_list(&bits_list, "precision")?;
            if bits_list.is_empty() {
                return Err(Error::invalid("--bits-list must name a precision".to_string()));
            }
            let gammas = match gammas {
                Some(list) => parse_gammas(&list)?,
                None => sample_gammas(num_gammas, 0.0, 1.0, seed),
            };
            let opts = ModelOptions {
                activation: activation_from(&activation),
                scheme: scheme_from(&scheme),
                encoding: encoding_from(&encoding),
            };
            let records = class_count_vs_precision(&g, &gammas, &bits_list, &opts)?;
            if let Some(r) = records.first() {
                eprintln!("refinement classes at convergence: {}", r.wl_classes);
            }
            let config = RunConfig::new("experiment classes")
                .arg("graph", &graph)
                .arg("bits_list", bits_list.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
                .arg("gammas", gammas.iter().map(|&g| format_hex_f64(g)).collect::<Vec<_>>().join(","))
                .arg("activation", &activation)
                .arg("scheme", &scheme)
                .arg("encoding", &encoding);
            emit_report(&Report::new(config, records), out.as_deref())?;
            Ok(0)
        }
        ExperimentCmd::MinBits { graph, gamma, p_max, activation, scheme } => {
            let g = load(&graph, None)?;
            let gamma = parse_real(&gamma)?;
            let opts = ModelOptions {
                activation: activation_from(&activation),
                scheme: scheme_from(&scheme),
                encoding: Encoding::ConstantOne,
            };
            let search = min_precision_bits(&g, gamma, p_max, &opts)?;
            for (bits, ok) in &search.probes {
                println!("probe {bits}: {}", if *ok { "perfect" } else { "imperfect" });
            }
            match search.outcome {
                MinBitsOutcome::Found { bits, largest_failing_below } => {
                    match largest_failing_below {
                        Some(below) => println!("minimum: {bits} bits (fails at {below})"),
                        None => println!("minimum: {bits} bits (lattice floor)"),
                    }
                    Ok(0)
                }
                MinBitsOutcome::NotFound { p_max } => {
                    println!("no sufficient precision up to {p_max} bits");
                    Ok(0)
                }
            }
        }
    }
}

fn run_generate(cmd: GenerateCmd) -> Result<i32> {
    match cmd {
        GenerateCmd::Er { nodes, prob, seed, out } => {
            let g = erdos_renyi(nodes, prob, seed)?;
            save_graph(&g, Path::new(&out))?;
            eprintln!("wrote G({nodes}, {prob}) with {} edges to {out}", g.edge_count());
            Ok(0)
        }
        GenerateCmd::Ba { nodes, attach, seed, out } => {
            let g = barabasi_albert(nodes, attach, seed)?;
            save_graph(&g, Path::new(&out))?;
            eprintln!("wrote BA({nodes}, {attach}) with {} edges to {out}", g.edge_count());
            Ok(0)
        }
        GenerateCmd::FromCitations { input, out } => {
            let g = load_citations(Path::new(&input))?;
            save_graph(&g, Path::new(&out))?;
            eprintln!(
                "wrote {} nodes / {} edges from `{}` to {out}",
                g.node_count(),
                g.edge_count(),
                input
            );
            Ok(0)
        }
    }
}
