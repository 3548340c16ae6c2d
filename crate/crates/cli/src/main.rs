//! `gxr` — command-line front end for the graph-repair engine.
//!
//! Reads graphs (JSON), constraint sets (text), and criterion parameter
//! files (JSON); prints deterministic text or JSON on stdout. Exit codes
//! partition outcomes: 0 success (or "yes" for the boolean commands), 1
//! "no", 2 usage errors, 3 parse errors, 4 instance too large for the
//! configured search caps, 5 node-induced search refused as unsound.
//! Every failure is additionally mirrored as one JSON object on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use gxr_core::{
    build_lexmax, build_parity3sat, build_qbf, cqa_enumerate_witness, is_consistent, parse_node,
    parse_path, preferred_repairs, repair_check, repair_compute, repair_exists, sampling,
    ConstraintSet, CqaError, CqaInstance, DataGraph, LabelOrder, LexmaxFlavor, PreferenceCriterion,
    PreferenceError, Prioritization, QbfVariant, ReductionError, ReductionInstance, RepairError,
    SearchConfig, SearchMode, WeightFunction,
};

/// A failure with its fixed exit code. Parse failures, cap overruns, and
/// mode-soundness refusals have dedicated codes; everything else — bad
/// flags, unreadable files, mismatched parameters — counts as usage.
enum Failure {
    Usage(String),
    Parse(String),
    TooLarge(String),
    Unsound(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
            Failure::TooLarge(_) => 4,
            Failure::Unsound(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Parse(_) => "parse",
            Failure::TooLarge(_) => "instance-too-large",
            Failure::Unsound(_) => "mode-unsound",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::TooLarge(m) | Failure::Unsound(m) => m,
        }
    }

    /// Prints the machine-readable error object and terminates.
    fn exit(self) -> ! {
        let err = serde_json::json!({
            "error": { "kind": self.kind(), "code": self.code(), "message": self.message() }
        });
        eprintln!("{err}");
        process::exit(self.code())
    }
}

impl From<RepairError> for Failure {
    fn from(e: RepairError) -> Failure {
        match e {
            RepairError::InstanceTooLarge { .. } => Failure::TooLarge(e.to_string()),
            RepairError::ModeUnsound(_) => Failure::Unsound(e.to_string()),
            RepairError::Preference(p) => p.into(),
            RepairError::Fragment(_) => Failure::Usage(e.to_string()),
        }
    }
}

impl From<CqaError> for Failure {
    fn from(e: CqaError) -> Failure {
        match e {
            CqaError::Repair(r) => r.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<PreferenceError> for Failure {
    fn from(e: PreferenceError) -> Failure {
        match e {
            // A structurally broken or cyclic parameter file is a file
            // problem; a parameter that fails to cover the graph is not.
            PreferenceError::Format(_) | PreferenceError::OrderCycle(_) => {
                Failure::Parse(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "gxr",
    version,
    about = "Evaluate, check, repair, and query data graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression; prints the satisfying pairs or nodes.
    Eval(EvalArgs),
    /// Check a graph against constraints; exit 0 if consistent, 1 if not.
    Check(CheckArgs),
    /// Compute a preferred repair (all of them with --all).
    Repair(RepairArgs),
    /// Decide whether a candidate graph is a preferred repair; exit 0/1.
    RepairCheck(RepairCheckArgs),
    /// Decide whether a non-empty preferred repair exists; exit 0/1.
    RepairExists(RepairExistsArgs),
    /// Answer a query in every preferred repair; exit 0 if certain, 1 if not.
    Cqa(CqaArgs),
    /// Generate a hardness-construction instance into a directory.
    Gen(GenArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    /// Line-oriented output.
    Text,
    /// One JSON value on stdout.
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CriterionName {
    /// Set inclusion.
    Subset,
    /// Prioritized set inclusion.
    PrioSubset,
    /// Cardinality.
    Card,
    /// Prioritized cardinality.
    PrioCard,
    /// Weighted cardinality.
    Weight,
    /// Dershowitz–Manna order on edge/data multisets.
    Multiset,
}

/// Criterion selection plus its parameter files. Each file is required
/// exactly when the chosen criterion takes that parameter.
#[derive(Args)]
struct CriterionArgs {
    /// Preference criterion ordering the consistent subgraphs.
    #[arg(long, value_enum, default_value_t = CriterionName::Subset)]
    criterion: CriterionName,
    /// Prioritization file (for prio-subset and prio-card).
    #[arg(long, value_name = "FILE")]
    prioritization: Option<PathBuf>,
    /// Weight-function file (for weight).
    #[arg(long, value_name = "FILE")]
    weights: Option<PathBuf>,
    /// Label/data order file (for multiset).
    #[arg(long, value_name = "FILE")]
    order: Option<PathBuf>,
}

impl CriterionArgs {
    fn build(&self) -> Result<PreferenceCriterion, Failure> {
        let wants_prioritization = matches!(
            self.criterion,
            CriterionName::PrioSubset | CriterionName::PrioCard
        );
        require(
            "--prioritization",
            "prio-subset and prio-card",
            wants_prioritization,
            self.prioritization.is_some(),
        )?;
        require(
            "--weights",
            "weight",
            self.criterion == CriterionName::Weight,
            self.weights.is_some(),
        )?;
        require(
            "--order",
            "multiset",
            self.criterion == CriterionName::Multiset,
            self.order.is_some(),
        )?;

        Ok(match self.criterion {
            CriterionName::Subset => PreferenceCriterion::Subset,
            CriterionName::Card => PreferenceCriterion::Cardinality,
            CriterionName::PrioSubset => {
                let p =
                    Prioritization::from_json_str(&read(self.prioritization.as_ref().unwrap())?)?;
                PreferenceCriterion::PrioritizedSubset(p)
            }
            CriterionName::PrioCard => {
                let p =
                    Prioritization::from_json_str(&read(self.prioritization.as_ref().unwrap())?)?;
                PreferenceCriterion::PrioritizedCardinality(p)
            }
            CriterionName::Weight => {
                let w = WeightFunction::from_json_str(&read(self.weights.as_ref().unwrap())?)?;
                PreferenceCriterion::Weight(w)
            }
            CriterionName::Multiset => {
                let o = LabelOrder::from_json_str(&read(self.order.as_ref().unwrap())?)?;
                PreferenceCriterion::Multiset(o)
            }
        })
    }
}

fn require(flag: &str, criteria: &str, wanted: bool, given: bool) -> Result<(), Failure> {
    match (wanted, given) {
        (true, false) => Err(Failure::Usage(format!("{flag} is required for {criteria}"))),
        (false, true) => Err(Failure::Usage(format!("{flag} only applies to {criteria}"))),
        _ => Ok(()),
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeName {
    /// Exhaustive search over all fact subsets.
    Facts,
    /// Search over node-induced subgraphs (monotone constraint sets only).
    NodeInduced,
}

/// Search-engine knobs shared by the repair and query commands.
#[derive(Args)]
struct SearchArgs {
    /// Search space to enumerate.
    #[arg(long, value_enum, default_value_t = ModeName::Facts)]
    mode: ModeName,
    /// Override the fact-count cap for facts mode.
    #[arg(long, value_name = "N")]
    max_facts: Option<usize>,
    /// Override the node-count cap for node-induced mode.
    #[arg(long, value_name = "N")]
    max_nodes: Option<usize>,
    /// Size of the worker thread pool (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

impl SearchArgs {
    fn build(&self) -> Result<(SearchMode, SearchConfig), Failure> {
        if let Some(n) = self.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
        }
        let mut cfg = SearchConfig::default();
        if let Some(n) = self.max_facts {
            cfg.max_facts = n;
        }
        if let Some(n) = self.max_nodes {
            cfg.max_nodes = n;
        }
        let mode = match self.mode {
            ModeName::Facts => SearchMode::FactLattice,
            ModeName::NodeInduced => SearchMode::NodeInduced,
        };
        Ok((mode, cfg))
    }
}

#[derive(Args)]
#[command(group = ArgGroup::new("expr").required(true).args(["path", "node"]))]
struct EvalArgs {
    /// Path expression; prints its satisfying pairs.
    #[arg(long, value_name = "EXPR")]
    path: Option<String>,
    /// Node expression; prints its satisfying nodes.
    #[arg(long, value_name = "EXPR")]
    node: Option<String>,
    /// Graph file (JSON).
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    /// Graph file (JSON).
    graph: PathBuf,
    /// Constraint file (one `path:`/`node:` line per constraint).
    constraints: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RepairArgs {
    graph: PathBuf,
    constraints: PathBuf,
    /// Print every preferred repair, not just the canonical first.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RepairCheckArgs {
    graph: PathBuf,
    /// Candidate repair (JSON graph file).
    candidate: PathBuf,
    constraints: PathBuf,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RepairExistsArgs {
    graph: PathBuf,
    constraints: PathBuf,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct CqaArgs {
    graph: PathBuf,
    constraints: PathBuf,
    /// Query path expression.
    #[arg(long, value_name = "EXPR")]
    query: String,
    /// Query source node.
    #[arg(long, value_name = "ID")]
    source: String,
    /// Query target node.
    #[arg(long, value_name = "ID")]
    target: String,
    /// Suppress the refuting-repair witness on "false" answers.
    #[arg(long)]
    quiet: bool,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
}

#[derive(Copy, Clone, ValueEnum)]
enum QbfVariantName {
    /// Positive path constraints, subset criterion.
    PosPath,
    /// The same constraints as node constraints.
    Node,
    /// Multiset criterion over a discrete label order.
    Multiset,
}

#[derive(Copy, Clone, ValueEnum)]
enum LexmaxFlavorName {
    /// Data weights encode the lexicographic order.
    Weight,
    /// A prioritization does.
    PrioCard,
}

#[derive(Subcommand)]
enum GenFamily {
    /// ∀∃-formula instance: the query is certain iff the formula is true.
    Qbf {
        /// Universally quantified variables.
        #[arg(long, value_name = "N", default_value_t = 2)]
        x_vars: usize,
        /// Existentially quantified variables.
        #[arg(long, value_name = "N", default_value_t = 2)]
        y_vars: usize,
        /// Clauses in the random matrix.
        #[arg(long, value_name = "N", default_value_t = 3)]
        clauses: usize,
        #[arg(long, value_enum, default_value_t = QbfVariantName::PosPath)]
        variant: QbfVariantName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (created if missing).
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Formula-chain instance: the query is certain iff an even number of
    /// the chained formulas is unsatisfiable.
    Parity {
        /// Formulas in the chain.
        #[arg(long, value_name = "N", default_value_t = 2)]
        formulas: usize,
        /// Variables per formula.
        #[arg(long, value_name = "N", default_value_t = 2)]
        vars: usize,
        /// Clauses per formula (at least two are generated).
        #[arg(long, value_name = "N", default_value_t = 2)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Lexicographic-maximum instance: the query is certain iff the last
    /// variable is true in the lexicographically largest satisfying
    /// assignment.
    Lexmax {
        /// Variables in the random formula.
        #[arg(long, value_name = "N", default_value_t = 2)]
        vars: usize,
        /// Clauses in the random formula.
        #[arg(long, value_name = "N", default_value_t = 2)]
        clauses: usize,
        #[arg(long, value_enum, default_value_t = LexmaxFlavorName::Weight)]
        flavor: LexmaxFlavorName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Help and version render on stdout and succeed.
        Err(e) if e.exit_code() == 0 => e.exit(),
        Err(e) => Failure::Usage(e.to_string()).exit(),
    };
    match run(cli.command) {
        Ok(code) => process::exit(code),
        Err(f) => f.exit(),
    }
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Eval(a) => run_eval(a),
        Command::Check(a) => run_check(a),
        Command::Repair(a) => run_repair(a),
        Command::RepairCheck(a) => run_repair_check(a),
        Command::RepairExists(a) => run_repair_exists(a),
        Command::Cqa(a) => run_cqa(a),
        Command::Gen(a) => run_gen(a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<DataGraph, Failure> {
    DataGraph::from_json_str(&read(path)?)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_constraints(path: &Path) -> Result<ConstraintSet, Failure> {
    ConstraintSet::parse(&read(path)?)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// Re-reads a graph's canonical JSON as a `serde_json` value for embedding
/// in composite output.
fn graph_value(g: &DataGraph) -> serde_json::Value {
    serde_json::from_str(&g.to_json_string()).expect("canonical graph JSON parses")
}

fn run_eval(a: EvalArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    if let Some(src) = &a.path {
        let expr = parse_path(src).map_err(|e| Failure::Parse(e.to_string()))?;
        let pairs = gxr_core::eval_path(&g, &expr);
        match a.format {
            Format::Text => {
                for (u, v) in &pairs {
                    println!("{u}\t{v}");
                }
            }
            Format::Json => println!(
                "{}",
                serde_json::to_string(&pairs).expect("pair serialization cannot fail")
            ),
        }
    } else {
        let src = a.node.as_ref().expect("clap enforces one of --path/--node");
        let expr = parse_node(src).map_err(|e| Failure::Parse(e.to_string()))?;
        let nodes = gxr_core::eval_node(&g, &expr);
        match a.format {
            Format::Text => {
                for u in &nodes {
                    println!("{u}");
                }
            }
            Format::Json => println!(
                "{}",
                serde_json::to_string(&nodes).expect("node serialization cannot fail")
            ),
        }
    }
    Ok(0)
}

fn run_check(a: CheckArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    let r = load_constraints(&a.constraints)?;
    let rep = is_consistent(&g, &r);
    match a.format {
        Format::Text => {
            if rep.consistent {
                println!("consistent");
            } else {
                println!("inconsistent");
                for (i, u) in &rep.node_violations {
                    println!("node-violation {i} {u}");
                }
                for (i, u, v) in &rep.pair_violations {
                    println!("pair-violation {i} {u} {v}");
                }
            }
        }
        Format::Json => {
            let node_violations: Vec<_> = rep
                .node_violations
                .iter()
                .map(|(i, u)| serde_json::json!({ "constraint": i, "node": u }))
                .collect();
            let pair_violations: Vec<_> = rep
                .pair_violations
                .iter()
                .map(|(i, u, v)| serde_json::json!({ "constraint": i, "from": u, "to": v }))
                .collect();
            let out = serde_json::json!({
                "consistent": rep.consistent,
                "node_violations": node_violations,
                "pair_violations": pair_violations,
            });
            println!("{out}");
        }
    }
    Ok(if rep.consistent { 0 } else { 1 })
}

fn run_repair(a: RepairArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    let r = load_constraints(&a.constraints)?;
    let crit = a.criterion.build()?;
    let (mode, cfg) = a.search.build()?;
    if a.all {
        let ans = preferred_repairs(&g, &r, &crit, mode, &cfg)?;
        match a.format {
            Format::Text => {
                for (k, h) in ans.repairs.iter().enumerate() {
                    if k > 0 {
                        println!("---");
                    }
                    println!("{}", h.to_json_string());
                }
            }
            Format::Json => {
                let repairs: Vec<_> = ans.repairs.iter().map(graph_value).collect();
                println!(
                    "{}",
                    serde_json::to_string(&repairs).expect("repair serialization cannot fail")
                );
            }
        }
    } else {
        let h = repair_compute(&g, &r, &crit, mode, &cfg)?;
        match a.format {
            Format::Text => println!("{}", h.to_json_string()),
            Format::Json => println!("{}", graph_value(&h)),
        }
    }
    Ok(0)
}

fn run_repair_check(a: RepairCheckArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    let candidate = load_graph(&a.candidate)?;
    let r = load_constraints(&a.constraints)?;
    let crit = a.criterion.build()?;
    let (mode, cfg) = a.search.build()?;
    let accepted = repair_check(&g, &candidate, &r, &crit, mode, &cfg)?;
    match a.format {
        Format::Text => println!("{}", if accepted { "accepted" } else { "rejected" }),
        Format::Json => println!("{}", serde_json::json!({ "accepted": accepted })),
    }
    Ok(if accepted { 0 } else { 1 })
}

fn run_repair_exists(a: RepairExistsArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    let r = load_constraints(&a.constraints)?;
    let crit = a.criterion.build()?;
    let (mode, cfg) = a.search.build()?;
    let exists = repair_exists(&g, &r, &crit, mode, &cfg)?;
    match a.format {
        Format::Text => println!("{}", if exists { "exists" } else { "none" }),
        Format::Json => println!("{}", serde_json::json!({ "exists": exists })),
    }
    Ok(if exists { 0 } else { 1 })
}

fn run_cqa(a: CqaArgs) -> Result<i32, Failure> {
    let g = load_graph(&a.graph)?;
    let r = load_constraints(&a.constraints)?;
    let query = parse_path(&a.query).map_err(|e| Failure::Parse(e.to_string()))?;
    let crit = a.criterion.build()?;
    let (mode, cfg) = a.search.build()?;
    let inst = CqaInstance::new(g, r, query, a.source, a.target, crit)?;
    let out = cqa_enumerate_witness(&inst, mode, &cfg)?;
    match a.format {
        Format::Text => {
            println!("{}", if out.answer { "true" } else { "false" });
            if !a.quiet {
                if let Some(w) = &out.refutation {
                    println!("{}", w.to_json_string());
                }
            }
        }
        Format::Json => {
            let mut obj = serde_json::json!({ "answer": out.answer });
            if !a.quiet {
                if let Some(w) = &out.refutation {
                    obj["witness"] = graph_value(w);
                }
            }
            println!("{obj}");
        }
    }
    Ok(if out.answer { 0 } else { 1 })
}

fn run_gen(a: GenArgs) -> Result<i32, Failure> {
    let (inst, out) = match a.family {
        GenFamily::Qbf {
            x_vars,
            y_vars,
            clauses,
            variant,
            seed,
            out,
        } => {
            let mut rng = sampling::rng(seed);
            let q = sampling::qbf(&mut rng, x_vars, y_vars, clauses);
            let variant = match variant {
                QbfVariantName::PosPath => QbfVariant::PosPath,
                QbfVariantName::Node => QbfVariant::NodeVariant,
                QbfVariantName::Multiset => QbfVariant::MultisetVariant,
            };
            (build_qbf(&q, variant)?, out)
        }
        GenFamily::Parity {
            formulas,
            vars,
            clauses,
            seed,
            out,
        } => {
            let mut rng = sampling::rng(seed);
            let chain = sampling::parity_chain(&mut rng, formulas, vars, clauses);
            (build_parity3sat(&chain)?, out)
        }
        GenFamily::Lexmax {
            vars,
            clauses,
            flavor,
            seed,
            out,
        } => {
            let mut rng = sampling::rng(seed);
            let f = sampling::cnf(&mut rng, vars, clauses);
            let flavor = match flavor {
                LexmaxFlavorName::Weight => LexmaxFlavor::Weight,
                LexmaxFlavorName::PrioCard => LexmaxFlavor::PrioritizedCardinality,
            };
            (build_lexmax(&f, flavor)?, out)
        }
    };
    write_instance(&inst, &out)
}

/// Writes an instance directory: graph, constraints, manifest, and the
/// criterion's parameter file if it has one. Prints the manifest.
fn write_instance(inst: &ReductionInstance, out: &Path) -> Result<i32, Failure> {
    fs::create_dir_all(out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out.display())))?;
    let write = |name: &str, mut contents: String| -> Result<(), Failure> {
        if !contents.ends_with('\n') {
            contents.push('\n');
        }
        let path = out.join(name);
        fs::write(&path, contents)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
    };
    write("graph.json", inst.graph.to_json_string())?;
    write("constraints.txt", inst.constraints.to_string())?;
    match &inst.criterion {
        PreferenceCriterion::PrioritizedSubset(p)
        | PreferenceCriterion::PrioritizedCardinality(p) => {
            write("prioritization.json", p.to_json_string())?
        }
        PreferenceCriterion::Weight(w) => write("weights.json", w.to_json_string())?,
        PreferenceCriterion::Multiset(o) => write("order.json", o.to_json_string())?,
        PreferenceCriterion::Subset | PreferenceCriterion::Cardinality => {}
    }
    let manifest = inst.manifest_json();
    write("manifest.json", manifest.clone())?;
    print!("{manifest}");
    Ok(0)
}
