use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use lptsp_core::generate::{self, Model, ModelKind};
use lptsp_core::labeling::{Guarantee, SolveOptions, SolveReport};
use lptsp_core::{
    build_instance, export_tsplib, greedy_label_for_order, import_tour, label_from_path,
    min_path_cover, oracle_span_branch_bound, oracle_span_permutations, solve_with,
    span_via_path_cover, verify_labeling, Graph, LabelingDocument, Method, PVector,
};

/// Exit status for a labeling that fails verification.
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lptsp",
    version,
    about = "Minimum-span L(p)-labelings via path TSP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label a graph through the TSP reduction.
    Solve(SolveArgs),
    /// Exact span by search over labelings, without the reduction.
    Oracle(OracleArgs),
    /// Check a labels file against the separation constraints.
    Verify(VerifyArgs),
    /// Print the weight matrix of the reduced instance.
    Reduce(ReduceArgs),
    /// Write the reduced instance as TSPLIB with a dummy city.
    Export(ExportArgs),
    /// Turn a TSPLIB tour of an exported instance back into a labeling.
    Import(ImportArgs),
    /// Minimum path cover, and the L(p,q) span of a diameter-2 graph.
    Pathcover(PathcoverArgs),
    /// Generate a graph as an edge list.
    Gen(GenArgs),
}

#[derive(Args)]
struct Input {
    /// Edge-list file: "n m" header, then one "u v" pair per line.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Separation vector, e.g. 2,1. Its length is k.
    #[arg(short = 'p', long = "p")]
    p: String,
    /// Extend p with copies of p_min up to the graph's diameter.
    #[arg(long)]
    pad: bool,
}

impl Input {
    fn load(&self) -> Result<(Graph, PVector)> {
        let g = read_graph(&self.graph)?;
        let mut p: PVector = self
            .p
            .parse()
            .with_context(|| format!("bad separation vector {:?}", self.p))?;
        if self.pad {
            if let Some(d) = g.all_pairs_distances().diameter() {
                p = p.padded_to(d as usize);
            }
        }
        Ok((g, p))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "exact")]
    method: String,
    /// Run even when p_max > 2 p_min (no optimality or ratio guarantee).
    #[arg(long)]
    force: bool,
    /// Print labels and the solve report as one JSON object.
    #[arg(long)]
    json: bool,
    /// Largest instance the exact solver accepts.
    #[arg(long, default_value_t = lptsp_core::tsp::DEFAULT_HELD_KARP_CAP)]
    cap: usize,
    /// Local-search move budget per start.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMethod {
    Permutations,
    BranchBound,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "permutations")]
    method: OracleMethod,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    /// Labels JSON as written by `solve`.
    #[arg(short = 'l', long = "labels")]
    labels: PathBuf,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    input: Input,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "lptsp")]
    name: String,
    /// Output file; stdout when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ImportArgs {
    #[command(flatten)]
    input: Input,
    /// TSPLIB tour file over the exported cities.
    #[arg(short = 't', long = "tour")]
    tour: PathBuf,
}

#[derive(Args)]
struct PathcoverArgs {
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Distance-1 separation; give together with --q to compute the span.
    #[arg(long, requires = "q")]
    p: Option<u32>,
    /// Distance-2 separation.
    #[arg(long, requires = "p")]
    q: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: String,
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability of the random model.
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    /// Diameter cap of the random model.
    #[arg(long, default_value_t = 2)]
    diam_cap: u32,
}

#[derive(Serialize, Deserialize)]
struct SolveOutput {
    #[serde(flatten)]
    labeling: LabelingDocument,
    report: SolveReport,
}

#[derive(Serialize)]
struct PathcoverOutput {
    size: usize,
    paths: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<u64>,
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Graph::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let method: Method = args.method.parse()?;
    let options = SolveOptions {
        force: args.force,
        held_karp_cap: args.cap,
        local_search_budget: args.budget,
    };
    let solution = solve_with(&g, &p, method, &options)?;
    let doc = LabelingDocument::new(&solution.labeling, method.as_str());
    let report = solution.report;
    if args.json {
        print_json(&SolveOutput {
            labeling: doc,
            report,
        })?;
        return Ok(ExitCode::SUCCESS);
    }
    print_json(&doc)?;
    eprintln!(
        "method={} n={} k={} diameter={} path_length={} span={} verified={} time={:.3}s",
        report.method,
        report.n,
        report.k,
        report.diameter,
        report.path_length,
        report.span,
        report.verified,
        report.wall_time_secs
    );
    match report.guarantee {
        Guarantee::Optimal => eprintln!("span is optimal"),
        Guarantee::WithinOneAndAHalf => eprintln!("span is within 1.5x of optimal"),
        Guarantee::None if !report.ratio_ok => {
            eprintln!(
                "warning: p_max > 2 p_min, the instance is not metric and no guarantee applies"
            )
        }
        Guarantee::None => eprintln!("heuristic span, no guarantee"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: &OracleArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let (labeling, name) = match args.method {
        OracleMethod::Permutations => (oracle_span_permutations(&g, &p)?, "oracle-permutations"),
        OracleMethod::BranchBound => {
            let identity: Vec<usize> = (0..g.n()).collect();
            let upper = greedy_label_for_order(&g, &p, &identity).span();
            let labeling = oracle_span_branch_bound(&g, &p, upper)
                .context("no labeling within the greedy bound")?;
            (labeling, "oracle-branch-bound")
        }
    };
    print_json(&LabelingDocument::new(&labeling, name))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let text = fs::read_to_string(&args.labels)
        .with_context(|| format!("cannot read {}", args.labels.display()))?;
    let doc: LabelingDocument = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse {}", args.labels.display()))?;
    let labeling = doc.to_labeling(g.n())?;
    let violations = verify_labeling(&g, &p, &labeling)?;
    if violations.is_empty() {
        println!("valid");
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        println!("{v}");
    }
    println!("invalid: {} violation(s)", violations.len());
    Ok(ExitCode::from(EXIT_INVALID))
}

fn cmd_reduce(args: &ReduceArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let inst = build_instance(&g, &p)?;
    if !p.ratio_ok() {
        eprintln!("warning: p_max > 2 p_min, the instance may violate the triangle inequality");
    }
    let mut out = io::stdout().lock();
    for u in 0..inst.n() {
        let row: Vec<String> = inst.row(u).iter().map(u32::to_string).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(args: &ExportArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let text = export_tsplib(&build_instance(&g, &p)?, &args.name);
    match &args.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_import(args: &ImportArgs) -> Result<ExitCode> {
    let (g, p) = args.input.load()?;
    let inst = build_instance(&g, &p)?;
    let text = fs::read_to_string(&args.tour)
        .with_context(|| format!("cannot read {}", args.tour.display()))?;
    let path = import_tour(&text, &inst)?;
    let labeling = if p.ratio_ok() {
        label_from_path(&inst, &path)
    } else {
        greedy_label_for_order(&g, &p, &path.order)
    }
    .normalized();
    eprintln!("path_length={} span={}", path.length, labeling.span());
    print_json(&LabelingDocument::new(&labeling, "tsplib-tour"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_pathcover(args: &PathcoverArgs) -> Result<ExitCode> {
    let g = read_graph(&args.graph)?;
    let cover = min_path_cover(&g)?;
    let span = match (args.p, args.q) {
        (Some(p), Some(q)) => Some(span_via_path_cover(&g, p, q)?),
        _ => None,
    };
    if args.json {
        print_json(&PathcoverOutput {
            size: cover.size(),
            paths: cover.paths,
            span,
        })?;
        return Ok(ExitCode::SUCCESS);
    }
    println!("paths: {}", cover.size());
    for path in &cover.paths {
        let ids: Vec<String> = path.iter().map(usize::to_string).collect();
        println!("{}", ids.join(" "));
    }
    if let Some(span) = span {
        println!("span: {span}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    let model = match args.model.parse::<ModelKind>()? {
        ModelKind::Random => Model::Random {
            edge_prob: args.edge_prob,
            diameter_cap: args.diam_cap,
        },
        ModelKind::Path => Model::Path,
        ModelKind::Cycle => Model::Cycle,
        ModelKind::Star => Model::Star,
        ModelKind::Complete => Model::Complete,
        ModelKind::Split => Model::Split,
    };
    let g = generate::generate(model, args.n, args.seed)?;
    io::stdout().lock().write_all(g.to_edge_list().as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Export(args) => cmd_export(args),
        Command::Import(args) => cmd_import(args),
        Command::Pathcover(args) => cmd_pathcover(args),
        Command::Gen(args) => cmd_gen(args),
    }
}

/// 2 when the input is well formed but outside the solver's preconditions,
/// 1 for everything else.
fn exit_code(err: &anyhow::Error) -> ExitCode {
    let precondition = err
        .chain()
        .filter_map(|e| e.downcast_ref::<lptsp_core::Error>())
        .any(lptsp_core::Error::is_precondition);
    ExitCode::from(if precondition { 2 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}
