//! Command-line front end over the `mrse_kit` library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mrse_kit::experiment::{self, ExperimentPlan, SweepAxis};
use mrse_kit::graph::{LabelSet, MultiRelationalGraph, ReduceMode};
use mrse_kit::io::{self, EdgeListOptions, EntropyRow};
use mrse_kit::minimize::{
    minimize, minimize_recursive, DeltaMode, MinimizeConfig, Objective, Strategy, SurfableGraph,
};
use mrse_kit::surfing::SurfConfig;
use mrse_kit::synth::{planted_partition, SynthConfig};
use mrse_kit::tree::EncodingTree;
use mrse_kit::{metrics, Error, Result};

#[derive(Parser)]
#[command(name = "mrse-kit", version, about = "Structural entropy of (multi-relational) graphs")]
struct Cli {
    /// Worker threads for sweeps
    #[arg(long, global = true, env = "MRSE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic edge list (BA or planted partition)
    Generate(GenerateArgs),
    /// Report one- and two-dimensional entropies
    Entropy(EntropyArgs),
    /// Find a low-entropy partition
    Minimize(MinimizeArgs),
    /// Score a partition against ground-truth labels
    Eval(EvalArgs),
    /// Collapse relations into one
    Reduce(ReduceArgs),
    /// Run a synthetic sweep and write one CSV row per run
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Edge list with columns `src dst rel [weight]`
    graph: PathBuf,
    /// Mirror every row (default: follow the file's orientation comment)
    #[arg(long)]
    undirected: bool,
}

impl GraphInput {
    fn load(&self) -> Result<MultiRelationalGraph> {
        let options = EdgeListOptions {
            undirected: self.undirected.then_some(true),
        };
        io::load_edge_list(&self.graph, options)
    }
}

#[derive(Args)]
struct SurfArgs {
    /// Probability of following an arc rather than teleporting
    #[arg(long, default_value_t = 0.85)]
    teleport: f64,
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: usize,
    /// How SE and RSSE collapse relations: presence or weight-sum
    #[arg(long, default_value = "presence")]
    reduction: ReduceMode,
}

impl SurfArgs {
    fn config(&self) -> SurfConfig {
        SurfConfig {
            teleport: self.teleport,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Barabási–Albert growth (the default)
    #[arg(long, conflicts_with = "planted")]
    ba: bool,
    /// Planted partition with sizes from --communities
    #[arg(long)]
    planted: bool,
    #[arg(short = 'n', long, default_value_t = 100)]
    nodes: usize,
    /// Edges per arriving node
    #[arg(short = 'm', long, default_value_t = 3)]
    attach: usize,
    #[arg(long)]
    sparsity: Option<f64>,
    #[arg(long, default_value_t = 1)]
    relations: usize,
    /// Orient BA arcs from arriving node to target
    #[arg(long)]
    directed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Community sizes for --planted, comma separated
    #[arg(long, value_delimiter = ',', default_value = "25,25,25,25")]
    communities: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    intra: f64,
    #[arg(long, default_value_t = 0.02)]
    inter: f64,
    /// Edge-list output (stdout when absent)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Ground-truth label output for --planted
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, value_delimiter = ',', default_value = "se,rsse,mrse")]
    objective: Vec<Objective>,
    /// Only report this dimension (1, or 2 with --partition)
    #[arg(long)]
    dim: Option<usize>,
    /// `node community` file defining a two-level tree
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Write the stationary vectors of the first objective here
    #[arg(long)]
    stationary_out: Option<PathBuf>,
    #[command(flatten)]
    surf: SurfArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinimizeArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value = "mrse")]
    objective: Objective,
    /// vanilla or hierarchical
    #[arg(long, default_value = "vanilla")]
    strategy: Strategy,
    /// Clusters per chunk for the hierarchical strategy
    #[arg(short = 'n', long, default_value_t = 100)]
    subgraph_size: usize,
    /// exact or paper
    #[arg(long, default_value = "exact")]
    delta: DeltaMode,
    /// Levels of recursive minimization
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[command(flatten)]
    surf: SurfArgs,
    /// Partition output (stdout when absent); deeper levels go to `<path>.level<k>`
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Merge trace CSV
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// `node community` file
    #[arg(long)]
    partition: PathBuf,
    /// `node class` file
    #[arg(long)]
    labels: PathBuf,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: GraphInput,
    /// presence or weight-sum
    #[arg(long, default_value = "presence")]
    mode: ReduceMode,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// size, relations or sparsity
    #[arg(long, default_value = "size")]
    axis: SweepAxis,
    /// Axis values, comma separated (default depends on the axis)
    #[arg(long, value_delimiter = ',')]
    grid: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, value_delimiter = ',', default_value = "se,rsse,mrse")]
    objectives: Vec<Objective>,
    /// Nodes per graph (default: 100 for the size axis, 300 otherwise)
    #[arg(short = 'n', long)]
    nodes: Option<usize>,
    #[arg(short = 'm', long, default_value_t = 3)]
    attach: usize,
    /// Relations per graph (default: 1 for the size axis, 3 otherwise)
    #[arg(long)]
    relations: Option<usize>,
    #[arg(long)]
    sparsity: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "vanilla")]
    strategy: Strategy,
    #[arg(long, default_value_t = 100)]
    subgraph_size: usize,
    #[arg(long, default_value = "exact")]
    delta: DeltaMode,
    /// Write 0 in the wall_ms column so reruns are byte-identical
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    surf: SurfArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate(a: &GenerateArgs) -> Result<()> {
    if a.planted {
        let (g, labels) = planted_partition(&a.communities, a.intra, a.inter, a.relations, a.seed)?;
        emit(a.out.as_deref(), &io::format_edge_list(&g))?;
        if let Some(path) = &a.labels {
            io::write_text(path, &io::format_labels(&labels, g.nodes()))?;
        }
        return Ok(());
    }
    let cfg = SynthConfig {
        nodes: a.nodes,
        attach: a.attach,
        sparsity: a.sparsity,
        relations: a.relations,
        seed: a.seed,
        directed: a.directed,
    };
    emit(a.out.as_deref(), &io::format_edge_list(&cfg.generate()?))
}

fn entropy(a: &EntropyArgs) -> Result<()> {
    let g = a.input.load()?;
    let partition = match &a.partition {
        Some(p) => Some(io::parse_partition(&io::read_text(p)?, g.nodes())?),
        None => None,
    };
    match a.dim {
        Some(1) | None => {}
        Some(2) if partition.is_some() => {}
        Some(2) => return Err(Error::InvalidConfig("--dim 2 needs --partition".into())),
        Some(d) => return Err(Error::InvalidConfig(format!("unsupported dimension {d}"))),
    }
    let cfg = MinimizeConfig {
        surf: a.surf.config(),
        reduction: a.surf.reduction,
        ..MinimizeConfig::default()
    };
    let mut rows = Vec::new();
    for (k, &objective) in a.objective.iter().enumerate() {
        let prepared = g.prepare(objective, &cfg)?;
        if k == 0 {
            if let Some(path) = &a.stationary_out {
                let mut text = io::format_distribution("node", g.nodes(), prepared.field.occupancy());
                if !prepared.relations.is_empty() {
                    text.push('\n');
                    text.push_str(&io::format_distribution("relation", g.relations(), &prepared.relations));
                }
                io::write_text(path, &text)?;
            }
        }
        if a.dim != Some(2) {
            rows.push(EntropyRow {
                metric: objective.to_string(),
                dimension: 1,
                value: prepared.one_dim,
                iterations: prepared.iterations,
            });
        }
        if let (Some(p), true) = (&partition, a.dim != Some(1)) {
            let tree = EncodingTree::from_partition(p)?;
            rows.push(EntropyRow {
                metric: objective.to_string(),
                dimension: 2,
                value: prepared.field.evaluate(&tree)?,
                iterations: prepared.iterations,
            });
        }
    }
    let config = format!(
        "teleport={};reduction={:?}",
        a.surf.teleport, a.surf.reduction
    );
    let text = io::header_comment(&config) + &io::format_entropy_report(&rows);
    emit(a.out.as_deref(), &text)
}

fn minimize_cmd(a: &MinimizeArgs) -> Result<()> {
    let g = a.input.load()?;
    let cfg = MinimizeConfig {
        objective: a.objective,
        strategy: a.strategy,
        subgraph_size: a.subgraph_size,
        delta: a.delta,
        surf: a.surf.config(),
        reduction: a.surf.reduction,
    };
    let result = minimize(&g, &cfg)?;
    let partition = result.partition();
    eprintln!(
        "{}: 1D {:.6}, 2D {:.6}, {} communities, {} merges",
        a.objective,
        result.one_dim,
        result.final_objective,
        partition.len(),
        result.trace.len()
    );
    emit(a.out.as_deref(), &io::format_partition(&partition, g.nodes()))?;
    if let Some(path) = &a.trace {
        let config = format!("objective={};strategy={:?};delta={:?}", a.objective, a.strategy, a.delta);
        let text = io::header_comment(&config) + &io::format_trace(&result.trace, g.nodes());
        io::write_text(path, &text)?;
    }
    if a.depth > 1 {
        let Some(out) = &a.out else {
            return Err(Error::InvalidConfig("--depth above 1 needs --out".into()));
        };
        for (k, level) in minimize_recursive(&g, a.depth, &cfg)?.iter().enumerate() {
            let path = PathBuf::from(format!("{}.level{}", out.display(), k + 1));
            io::write_text(path, &io::format_partition(level, g.nodes()))?;
        }
    }
    Ok(())
}

fn eval(a: &EvalArgs) -> Result<()> {
    let label_text = io::read_text(&a.labels)?;
    let nodes: LabelSet = io::node_column(&label_text);
    let truth = io::parse_labels(&label_text, &nodes)?;
    let pred = io::parse_partition(&io::read_text(&a.partition)?, &nodes)?;
    let scores = metrics::evaluate(&pred, &truth)?;
    let text = io::header_comment("nmi=arithmetic") + &io::format_eval_report(&scores);
    emit(a.out.as_deref(), &text)
}

fn reduce(a: &ReduceArgs) -> Result<()> {
    let g = a.input.load()?;
    let directed = g.is_directed();
    let single = g.reduce_to_single(a.mode);
    // undirected graphs pass each edge once and are mirrored on construction
    let arcs = single
        .arcs()
        .iter()
        .filter(|arc| directed || arc.source <= arc.target)
        .map(|arc| (arc.source, arc.target, 0, arc.weight));
    let reduced = MultiRelationalGraph::with_labels(
        g.nodes().clone(),
        LabelSet::from_names(["combined"])?,
        arcs,
        directed,
    )?;
    emit(a.out.as_deref(), &io::format_edge_list(&reduced))
}

fn experiment_cmd(a: &ExperimentArgs, threads: Option<usize>) -> Result<()> {
    let mut plan = ExperimentPlan::new(a.axis);
    if !a.grid.is_empty() {
        plan.grid = a.grid.clone();
    }
    plan.seeds = a.seeds;
    plan.objectives = a.objectives.clone();
    if let Some(n) = a.nodes {
        plan.template.nodes = n;
    }
    if let Some(r) = a.relations {
        plan.template.relations = r;
    }
    plan.template.attach = a.attach;
    plan.template.sparsity = a.sparsity;
    plan.template.seed = a.seed;
    plan.minimize = MinimizeConfig {
        strategy: a.strategy,
        subgraph_size: a.subgraph_size,
        delta: a.delta,
        surf: a.surf.config(),
        reduction: a.surf.reduction,
        ..MinimizeConfig::default()
    };
    plan.timing = !a.no_timing;
    let rows = experiment::run(&plan, threads)?;
    let text = io::header_comment(&plan.describe()) + &experiment::format_rows(&plan, &rows);
    emit(a.out.as_deref(), &text)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Entropy(a) => entropy(a),
        Command::Minimize(a) => minimize_cmd(a),
        Command::Eval(a) => eval(a),
        Command::Reduce(a) => reduce(a),
        Command::Experiment(a) => experiment_cmd(a, cli.threads),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NonConvergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
