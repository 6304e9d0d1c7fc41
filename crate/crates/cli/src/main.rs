use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use modmle::graph::{clique_union, half_regular, noisy_partition_graph, partition_graph};
use modmle::io::{parse_cover, parse_partition, to_json, write_atomic, FamilyDoc, PartitionReport};
use modmle::mle::{pairs_cover, partition_to_cover, uniform_cover};
use modmle::overlap::{two_stage_traced, LargeInit, OmegaCaps, TwoStageConfig, DEFAULT_MAX_OMEGA_MEMBERS};
use modmle::search::{brute_force_optimum, greedy_clustering, greedy_merging, init_threshold, CandidateFamily};
use modmle::{ClusterScore, Error, FuzzyCover, NodeSet, Partition, WeightedGraph};

#[derive(Parser)]
#[command(name = "modmle", version, about = "Find network modules by greedy search over fuzzy clusterings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Greedy clustering from a fuzzy initial cover
    Cluster(ClusterArgs),
    /// Greedy agglomerative merging
    Merge(MergeArgs),
    /// Two-stage search for overlapping modules
    Overlap(OverlapArgs),
    /// Write a benchmark graph as an edge list
    Gen(GenArgs),
    /// Exact optimum by enumerating all partitions (n <= 12)
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreName {
    Modularity,
    DualWeight,
    CommonNeighbor,
    CubicTriangle,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long, value_enum, default_value = "modularity")]
    score: ScoreName,
    /// Triangle weight for the cubic score, in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InitMode {
    /// Uniform over every subset containing the node (n <= 14)
    Uniform,
    /// Uniform over the pairs containing the node
    Pairs,
    /// Each node alone
    Singletons,
    /// Proportional to v(A)/|A| over --candidates, above --theta
    Threshold,
    /// Read from --init-file
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum LargeMode {
    Uniform,
    Score,
}

#[derive(Args)]
struct ClusterArgs {
    /// Edge-list file
    input: PathBuf,
    #[command(flatten)]
    score: ScoreArgs,
    #[arg(long, value_enum, default_value = "uniform")]
    init: InitMode,
    /// Candidate sets for threshold init: all, pairs, singletons or up-to-K
    #[arg(long, default_value = "all")]
    candidates: String,
    #[arg(long)]
    init_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the search trace as JSON lines
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MergeArgs {
    input: PathBuf,
    #[command(flatten)]
    score: ScoreArgs,
    /// Start from this partition instead of singletons
    #[arg(long)]
    start: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OverlapArgs {
    input: PathBuf,
    #[command(flatten)]
    score: ScoreArgs,
    /// Candidate sets for the small-module stage
    #[arg(long, default_value = "pairs")]
    candidates: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta: f64,
    /// Large-module stage only considers unions with more members than this
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    vartheta: i64,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest union kept in the large-module search space (default n)
    #[arg(long)]
    max_omega_size: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_OMEGA_MEMBERS)]
    max_omega_members: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    large_init: LargeMode,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Two cliques on the halves joined by a perfect matching
    HalfRegular {
        #[arg(long)]
        n: usize,
    },
    /// Disjoint cliques on the given blocks, e.g. "0,1,2;3,4"
    Partition {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Planted partition with random edge additions and deletions
    Noisy {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p_add: f64,
        #[arg(long)]
        p_del: f64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Union of (possibly overlapping) cliques, e.g. "0,1,2;2,3,4"
    Cliques {
        #[arg(long)]
        cliques: String,
    },
    Empty {
        #[arg(long)]
        n: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[command(flatten)]
    score: ScoreArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Cap(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Merge(a) => cmd_merge(a),
        Command::Overlap(a) => cmd_overlap(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot open {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    WeightedGraph::from_edge_list(&read_input(path)?)
        .map_err(|e| Failure::Io(format!("cannot parse {}: {e}", path.display())))
}

fn build_score(g: &WeightedGraph, a: &ScoreArgs) -> Result<ClusterScore, Failure> {
    Ok(match a.score {
        ScoreName::Modularity => ClusterScore::modularity(g)?,
        ScoreName::DualWeight => ClusterScore::dual_weight(g)?,
        ScoreName::CommonNeighbor => ClusterScore::common_neighbor(g)?,
        ScoreName::CubicTriangle => {
            if !(a.beta > 0.0 && a.beta <= 1.0) {
                return Err(Failure::Usage(format!("--beta must lie in (0, 1], got {}", a.beta)));
            }
            ClusterScore::cubic_triangle(g, a.beta)?
        }
    })
}

/// The given seed, or one drawn from the clock; printed either way.
fn effective_seed(seed: Option<u64>) -> u64 {
    let seed = seed.unwrap_or_else(|| {
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0)
    });
    eprintln!("seed: {seed}");
    seed
}

fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => write_atomic(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn candidates(arg: &str, n: usize) -> Result<CandidateFamily, Failure> {
    match arg {
        "all" => Ok(CandidateFamily::all_subsets(n)?),
        "pairs" => Ok(CandidateFamily::pairs(n)),
        "singletons" => Ok(CandidateFamily::singletons(n)),
        _ => arg
            .strip_prefix("up-to-")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .map(|k| CandidateFamily::up_to(n, k))
            .ok_or_else(|| Failure::Usage(format!("unknown candidate family '{arg}'"))),
    }
}

fn initial_cover(a: &ClusterArgs, s: &ClusterScore) -> Result<FuzzyCover, Failure> {
    let n = s.n();
    Ok(match a.init {
        InitMode::Uniform => uniform_cover(n)?,
        InitMode::Pairs => pairs_cover(n)?,
        InitMode::Singletons => partition_to_cover(&Partition::bottom(n)),
        InitMode::Threshold => init_threshold(s, &candidates(&a.candidates, n)?, a.theta),
        InitMode::File => {
            let path = a
                .init_file
                .as_deref()
                .ok_or_else(|| Failure::Usage("--init file needs --init-file".into()))?;
            let q = parse_cover(&read_input(path)?)
                .map_err(|e| Failure::Io(format!("cannot parse {}: {e}", path.display())))?;
            if q.n() != n {
                return Err(Failure::Usage(format!("cover has {} nodes, graph has {n}", q.n())));
            }
            q
        }
    })
}

fn cmd_cluster(a: ClusterArgs) -> CmdResult {
    let g = read_graph(&a.input)?;
    let s = build_score(&g, &a.score)?;
    let init = initial_cover(&a, &s)?;
    let seed = effective_seed(a.seed);
    let (p, trace) = greedy_clustering(&s, &init, seed)?;
    if let Some(t) = &a.trace {
        emit(Some(t), &trace.to_jsonl())?;
    }
    emit(a.output.as_deref(), &to_json(&PartitionReport::new(&s, &p, Some(seed))?))
}

fn cmd_merge(a: MergeArgs) -> CmdResult {
    let g = read_graph(&a.input)?;
    let s = build_score(&g, &a.score)?;
    let start = match &a.start {
        Some(path) => {
            let p = parse_partition(&read_input(path)?)
                .map_err(|e| Failure::Io(format!("cannot parse {}: {e}", path.display())))?;
            if p.n() != s.n() {
                return Err(Failure::Usage(format!("start partition has {} nodes, graph has {}", p.n(), s.n())));
            }
            p
        }
        None => Partition::bottom(s.n()),
    };
    let seed = effective_seed(a.seed);
    let (p, trace) = greedy_merging(&s, &start, seed)?;
    if let Some(t) = &a.trace {
        emit(Some(t), &trace.to_jsonl())?;
    }
    emit(a.output.as_deref(), &to_json(&PartitionReport::new(&s, &p, Some(seed))?))
}

fn cmd_overlap(a: OverlapArgs) -> CmdResult {
    if a.vartheta < 0 {
        return Err(Failure::Usage(format!("--vartheta must be >= 0, got {}", a.vartheta)));
    }
    if a.runs == 0 {
        return Err(Failure::Usage("--runs must be >= 1".into()));
    }
    let g = read_graph(&a.input)?;
    let s = build_score(&g, &a.score)?;
    let small = candidates(&a.candidates, s.n())?;
    let seed = effective_seed(a.seed);
    let cfg = TwoStageConfig {
        theta: a.theta,
        vartheta: a.vartheta as usize,
        runs: a.runs,
        base_seed: seed,
        caps: OmegaCaps { max_size: a.max_omega_size.unwrap_or(s.n()), max_members: a.max_omega_members },
        mode: match a.large_init {
            LargeMode::Uniform => LargeInit::Uniform,
            LargeMode::Score => LargeInit::ScoreWeighted,
        },
    };
    let (family, runs) = two_stage_traced(&s, &small, &cfg)?;
    if let Some(t) = &a.trace {
        let text: String = runs.iter().enumerate().map(|(r, (_, tr))| tr.to_jsonl_for_run(r)).collect();
        emit(Some(t), &text)?;
    }
    emit(a.output.as_deref(), &to_json(&FamilyDoc::new(&s, &family, Some(seed))))
}

fn parse_sets(arg: &str) -> Result<Vec<NodeSet>, Failure> {
    arg.split(';')
        .filter(|b| !b.trim().is_empty())
        .map(|b| {
            b.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<NodeSet, _>>()
                .map_err(|e| Failure::Usage(format!("bad node list '{b}': {e}")))
        })
        .collect()
}

fn parse_blocks(arg: &str, n: Option<usize>) -> Result<Partition, Failure> {
    let blocks = parse_sets(arg)?;
    let n = n.unwrap_or_else(|| blocks.iter().filter_map(NodeSet::last).max().map_or(0, |m| m + 1));
    Ok(Partition::new(n, blocks)?)
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let g = match a.kind {
        GenKind::HalfRegular { n } => half_regular(n)?,
        GenKind::Partition { blocks, n } => partition_graph(&parse_blocks(&blocks, n)?),
        GenKind::Noisy { blocks, n, p_add, p_del, seed } => {
            let p = parse_blocks(&blocks, n)?;
            noisy_partition_graph(&p, p_add, p_del, effective_seed(seed))?
        }
        GenKind::Cliques { cliques } => clique_union(&parse_sets(&cliques)?)?.0,
        GenKind::Empty { n } => WeightedGraph::empty(n),
        GenKind::Complete { n } => WeightedGraph::complete(n),
    };
    emit(a.output.as_deref(), &g.to_edge_list())
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let g = read_graph(&a.input)?;
    let s = build_score(&g, &a.score)?;
    let opt = brute_force_optimum(&s)?;
    let mut report = PartitionReport::new(&s, &opt.partition, None)?;
    report.ties = Some(opt.ties);
    emit(a.output.as_deref(), &to_json(&report))
}
