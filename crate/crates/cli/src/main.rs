//! Command-line front end: ingest graphs, embeddings, frames and designs;
//! run the transfer analysis; emit machine-readable reports, amplitude
//! traces and SVG frames.
//!
//! Exit codes: 0 success, 2 input parse error, 3 precondition violation.
//! Set QWALK_LOG to any nonempty value for progress diagnostics on stderr.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::Digest;

use qwalk_core::graphs::{self, build_arc_space, MultiGraph};
use qwalk_core::io::{
    oracle_summary, DesignJson, EmbeddingJson, FramesJson, GraphJson, ReportJson, SpectrumJson,
    SzegedyJson, TolerancesJson, VerdictJson,
};
use qwalk_core::transfer::{
    design_analyze, srg_analyze, Analyzer, SrgParams, TransferOptions, TransferVerdict,
};
use qwalk_core::walks::{arc_reversal_walk, vertex_face_walk, TwoReflectionWalk};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Two-reflection quantum walk analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze state transfer for vertex pairs and/or periodicity.
    Analyze(AnalyzeArgs),
    /// Evolve a vertex state and print per-arc amplitudes as CSV.
    Evolve(EvolveArgs),
    /// Generate graph or embedding JSON for the built-in families.
    Families(FamiliesArgs),
    /// Parameter-level strongly-regular-graph analysis.
    Srg(SrgArgs),
    /// Validate a block design and decide point-started peak transfer.
    Design(DesignArgs),
}

#[derive(Args)]
struct WalkArgs {
    /// Walk model: arc-reversal, vertex-face, generic, szegedy.
    #[arg(long, default_value = "arc-reversal")]
    walk: String,
    /// Bound on cosine denominators during recognition.
    #[arg(long)]
    q_max: Option<u64>,
    /// Recognition / support tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Eigenvalue clustering tolerance.
    #[arg(long)]
    cluster_tol: Option<f64>,
    /// Enable the exact-arithmetic layer (default).
    #[arg(long, overrides_with = "no_exact")]
    exact: bool,
    /// Disable the exact-arithmetic layer.
    #[arg(long)]
    no_exact: bool,
    /// Force the time-evolution cross-check (default on).
    #[arg(long, overrides_with = "no_oracle")]
    oracle: bool,
    /// Disable the time-evolution cross-check.
    #[arg(long)]
    no_oracle: bool,
}

impl WalkArgs {
    fn options(&self) -> TransferOptions {
        let mut opts = TransferOptions::default();
        if let Some(q) = self.q_max {
            opts.q_max = q;
        }
        if let Some(t) = self.tol {
            opts.recog_tol = t;
            opts.support_tol = t;
        }
        if let Some(c) = self.cluster_tol {
            opts.cluster_tol = c;
        }
        if self.no_exact {
            opts.exact_dim_limit = 0;
        }
        if self.no_oracle {
            opts.oracle = false;
        }
        opts
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input JSON (graph, embedding, frames or szegedy data per --walk).
    input: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
    /// "all" or a semicolon-separated list "u,v;u,v".
    #[arg(long)]
    pairs: Option<String>,
    /// Decide periodicity at every vertex.
    #[arg(long)]
    periodicity: bool,
    /// Emit CSV rows instead of the JSON report.
    #[arg(long)]
    csv: bool,
    /// Include full idempotent matrices in the report.
    #[arg(long)]
    idempotents: bool,
    /// Worker threads for the all-pairs loop.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct EvolveArgs {
    input: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
    /// Starting vertex (its uniform outgoing-arc state).
    #[arg(long)]
    start: usize,
    #[arg(long, default_value_t = 8)]
    t_max: usize,
    /// Directory for per-step SVG frames.
    #[arg(long)]
    frames: Option<PathBuf>,
}

#[derive(Args)]
struct FamiliesArgs {
    #[command(subcommand)]
    family: FamilyCommand,
}

#[derive(Subcommand)]
enum FamilyCommand {
    Cycle { n: usize, #[arg(short, long)] output: PathBuf },
    Complete { n: usize, #[arg(short, long)] output: PathBuf },
    Path { n: usize, #[arg(short, long)] output: PathBuf },
    /// Complete multipartite graph with the given part sizes.
    Multipartite {
        #[arg(value_delimiter = ',')]
        parts: Vec<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Blow-up of a base graph JSON by m.
    Blowup { base: PathBuf, m: usize, #[arg(short, long)] output: PathBuf },
    /// The 5-layer hub family on n + m + 3 vertices.
    Gnm { n: usize, m: usize, #[arg(short, long)] output: PathBuf },
    Hamming33 { #[arg(short, long)] output: PathBuf },
    Foldedcube { d: usize, #[arg(short, long)] output: PathBuf },
    Figure2 { #[arg(short, long)] output: PathBuf },
    Petersen { #[arg(short, long)] output: PathBuf },
    Paley { q: usize, #[arg(short, long)] output: PathBuf },
    /// Toroidal grid embedding JSON.
    Grid { n: usize, m: usize, #[arg(short, long)] output: PathBuf },
    /// Point-block incidence graph of a design JSON.
    DesignIncidence { design: PathBuf, #[arg(short, long)] output: PathBuf },
}

#[derive(Args)]
struct SrgArgs {
    n: usize,
    k: usize,
    a: usize,
    c: usize,
}

#[derive(Args)]
struct DesignArgs {
    /// Design JSON { "v": int, "blocks": [[points], ...] }.
    input: PathBuf,
}

enum CliError {
    Parse(String),
    Precondition(String),
    /// Downstream consumer closed the pipe; not an error.
    BrokenPipe,
}

impl From<qwalk_core::Error> for CliError {
    fn from(e: qwalk_core::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Parse(e.to_string())
        }
    }
}

fn log_enabled() -> bool {
    std::env::var("QWALK_LOG").is_ok_and(|v| !v.is_empty())
}

macro_rules! qlog {
    ($($arg:tt)*) => {
        if log_enabled() {
            eprintln!("[qwalk] {}", format!($($arg)*));
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Evolve(args) => cmd_evolve(&args),
        Command::Families(args) => cmd_families(&args.family),
        Command::Srg(args) => cmd_srg(&args),
        Command::Design(args) => cmd_design(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Parse(msg)) => {
            eprintln!("qwalk: parse error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Precondition(msg)) => {
            eprintln!("qwalk: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
    }
}

/// println! panics on EPIPE; route bulk output through this instead.
fn emit(line: std::fmt::Arguments) -> Result<(), CliError> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    out.write_fmt(line)?;
    out.write_all(b"\n")?;
    Ok(())
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!($($arg)*))? };
}

/// The loaded walk plus the underlying graph/embedding when one exists
/// (needed for arc geometry in rendering).
struct LoadedWalk {
    walk: TwoReflectionWalk,
    graph: Option<MultiGraph>,
    layout: Option<Vec<(f64, f64)>>,
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path.as_os_str() == "-" {
        use std::io::Read;
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read(path)?)
    }
}

fn load_walk(path: &Path, kind: &str) -> Result<(LoadedWalk, Vec<u8>), CliError> {
    let bytes = read_input(path)?;
    let walk = load_walk_from_bytes(&bytes, kind)?;
    Ok((walk, bytes))
}

fn load_walk_from_bytes(bytes: &[u8], kind: &str) -> Result<LoadedWalk, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    match kind {
        "arc-reversal" => {
            let json: GraphJson = serde_json::from_str(text)?;
            let graph = json.to_graph()?;
            let walk = arc_reversal_walk(&graph)?;
            Ok(LoadedWalk {
                walk,
                graph: Some(graph),
                layout: None,
            })
        }
        "vertex-face" => {
            let json: EmbeddingJson = serde_json::from_str(text)?;
            let map = json.to_map()?;
            let walk = vertex_face_walk(&map)?;
            let layout = map.layout().map(|l| l.to_vec());
            Ok(LoadedWalk {
                walk,
                graph: Some(map.graph().clone()),
                layout,
            })
        }
        "generic" => {
            let json: FramesJson = serde_json::from_str(text)?;
            Ok(LoadedWalk {
                walk: json.to_walk()?,
                graph: None,
                layout: None,
            })
        }
        "szegedy" => {
            let json: SzegedyJson = serde_json::from_str(text)?;
            Ok(LoadedWalk {
                walk: json.to_walk()?,
                graph: None,
                layout: None,
            })
        }
        other => Err(CliError::Precondition(format!(
            "unknown walk kind '{other}' (expected arc-reversal, vertex-face, generic, szegedy)"
        ))),
    }
}

fn input_digest(bytes: &[u8]) -> String {
    let mut hasher = sha2::Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

fn parse_pairs(spec: &str, dim: usize) -> Result<Vec<(usize, usize)>, CliError> {
    if spec == "all" {
        let mut out = Vec::new();
        for u in 0..dim {
            for v in (u + 1)..dim {
                out.push((u, v));
            }
        }
        return Ok(out);
    }
    let mut out = Vec::new();
    for item in spec.split(';') {
        let mut parts = item.split(',');
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CliError::Parse(format!("bad pair '{item}', expected u,v")));
        };
        let u: usize = u
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("bad vertex '{u}'")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("bad vertex '{v}'")))?;
        out.push((u, v));
    }
    Ok(out)
}

fn decide_pairs_parallel(
    analyzer: &Analyzer,
    pairs: &[(usize, usize)],
    jobs: usize,
) -> Result<Vec<TransferVerdict>, CliError> {
    if jobs <= 1 || pairs.len() < 2 {
        return pairs
            .iter()
            .map(|&(u, v)| analyzer.decide_pair(u, v).map_err(CliError::from))
            .collect();
    }
    let jobs = jobs.min(pairs.len());
    let chunk = pairs.len().div_ceil(jobs);
    let results = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for slice in pairs.chunks(chunk) {
            handles.push(scope.spawn(move || {
                slice
                    .iter()
                    .map(|&(u, v)| analyzer.decide_pair(u, v))
                    .collect::<qwalk_core::Result<Vec<_>>>()
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut out = Vec::with_capacity(pairs.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let (loaded, input_bytes) = load_walk(&args.input, &args.walk.walk)?;
    let opts = args.walk.options();
    qlog!(
        "walk '{}': {} states, B is {}x{}",
        args.walk.walk,
        loaded.walk.state_dim(),
        loaded.walk.projected_dim(),
        loaded.walk.projected_dim()
    );
    let analyzer = Analyzer::new(loaded.walk, opts.clone())?;
    let dim = analyzer.dim();
    let mut verdicts: Vec<TransferVerdict> = Vec::new();
    if let Some(pair_spec) = &args.pairs {
        let pairs = parse_pairs(pair_spec, dim)?;
        verdicts.extend(decide_pairs_parallel(&analyzer, &pairs, args.jobs)?);
    }
    if args.periodicity {
        for u in 0..dim {
            verdicts.push(analyzer.decide_periodicity(u)?);
        }
    }
    if args.pairs.is_none() && !args.periodicity {
        let pairs = parse_pairs("all", dim)?;
        verdicts.extend(decide_pairs_parallel(&analyzer, &pairs, args.jobs)?);
    }
    qlog!("{} verdicts", verdicts.len());
    if args.csv {
        outln!("u,v,kind,tau,gamma,amount,bound,grade,oracle_passed");
        for v in &verdicts {
            let json = VerdictJson::from(v);
            outln!(
                "{},{},{},{},{},{},{},{},{}",
                json.pair[0],
                json.pair[1],
                json.kind,
                json.tau.as_deref().unwrap_or(""),
                json.gamma.map_or(String::new(), |g| g.to_string()),
                json.amount.map_or(String::new(), |a| format!("{a:.12}")),
                json.bound.map_or(String::new(), |b| format!("{b:.12}")),
                json.grade,
                json.oracle.as_ref().map_or(String::new(), |o| o.passed.to_string()),
            );
        }
        return Ok(());
    }
    let report = ReportJson {
        input_digest: input_digest(&input_bytes),
        walk: args.walk.walk.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        tolerances: TolerancesJson {
            q_max: opts.effective_q_max(dim),
            recog_tol: opts.recog_tol,
            support_tol: opts.support_tol,
            cluster_tol: opts.cluster_tol,
        },
        spectrum: SpectrumJson::from_spectral(&analyzer.spectral, args.idempotents),
        verdicts: verdicts.iter().map(VerdictJson::from).collect(),
        oracle_summary: oracle_summary(&verdicts),
    };
    outln!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<(), CliError> {
    let (loaded, _) = load_walk(&args.input, &args.walk.walk)?;
    let walk = &loaded.walk;
    if args.start >= walk.projected_dim() {
        return Err(CliError::Precondition(format!(
            "start vertex {} out of range ({} states)",
            args.start,
            walk.projected_dim()
        )));
    }
    let arcs = loaded.graph.as_ref().map(build_arc_space);
    if args.frames.is_some() && arcs.is_none() {
        return Err(CliError::Precondition(
            "SVG frames need an underlying graph (arc-reversal or vertex-face walk)".into(),
        ));
    }
    let mut state = walk.vertex_state(args.start);
    if let Some(dir) = &args.frames {
        std::fs::create_dir_all(dir)?;
    }
    if arcs.is_some() {
        outln!("t,arc,tail,head,amplitude");
    } else {
        outln!("t,arc,amplitude");
    }
    for t in 0..=args.t_max {
        for a in 0..walk.state_dim() {
            match &arcs {
                Some(space) => {
                    let arc = &space.arcs[a];
                    outln!("{t},{a},{},{},{:.12}", arc.tail, arc.head, state[a]);
                }
                None => outln!("{t},{a},{:.12}", state[a]),
            }
        }
        if let (Some(dir), Some(space), Some(graph)) = (&args.frames, &arcs, &loaded.graph) {
            let svg = svg::render_frame(graph, space, loaded.layout.as_deref(), state.as_slice());
            let path = dir.join(format!("frame_{t:04}.svg"));
            atomic_write(&path, svg.as_bytes())?;
        }
        if t < args.t_max {
            state = walk.evolve(&state, 1);
        }
    }
    Ok(())
}

fn cmd_families(cmd: &FamilyCommand) -> Result<(), CliError> {
    match cmd {
        FamilyCommand::Grid { n, m, output } => {
            let map = qwalk_core::embeddings::toroidal_grid(*n, *m)?;
            let json = EmbeddingJson::from_map(&map);
            write_json(output, &json)
        }
        other => {
            let (graph, output) = match other {
                FamilyCommand::Cycle { n, output } => (graphs::cycle(*n)?, output),
                FamilyCommand::Complete { n, output } => (graphs::complete(*n)?, output),
                FamilyCommand::Path { n, output } => (graphs::path(*n)?, output),
                FamilyCommand::Multipartite { parts, output } => {
                    (graphs::complete_multipartite(parts)?, output)
                }
                FamilyCommand::Blowup { base, m, output } => {
                    let text = std::fs::read_to_string(base)?;
                    let json: GraphJson = serde_json::from_str(&text)?;
                    (graphs::blow_up(&json.to_graph()?, *m)?, output)
                }
                FamilyCommand::Gnm { n, m, output } => (graphs::gnm(*n, *m)?, output),
                FamilyCommand::Hamming33 { output } => (graphs::hamming_h33()?, output),
                FamilyCommand::Foldedcube { d, output } => (graphs::folded_cube(*d)?, output),
                FamilyCommand::Figure2 { output } => (graphs::figure2().0, output),
                FamilyCommand::Petersen { output } => (graphs::petersen()?, output),
                FamilyCommand::Paley { q, output } => (graphs::paley(*q)?, output),
                FamilyCommand::DesignIncidence { design, output } => {
                    let text = std::fs::read_to_string(design)?;
                    let json: DesignJson = serde_json::from_str(&text)?;
                    (graphs::design_incidence(json.v, &json.blocks)?, output)
                }
                FamilyCommand::Grid { .. } => unreachable!("handled above"),
            };
            write_json(output, &GraphJson::from_graph(&graph))
        }
    }
}

fn cmd_srg(args: &SrgArgs) -> Result<(), CliError> {
    let verdict = srg_analyze(SrgParams {
        n: args.n,
        k: args.k,
        a: args.a,
        c: args.c,
    })?;
    let out = serde_json::json!({
        "params": { "n": args.n, "k": args.k, "a": args.a, "c": args.c },
        "class": format!("{:?}", verdict.class),
        "admits_peak": verdict.admits_peak,
        "reasoning": verdict.reasoning,
    });
    outln!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn cmd_design(args: &DesignArgs) -> Result<(), CliError> {
    let bytes = read_input(&args.input)?;
    let json: DesignJson = serde_json::from_slice(&bytes)?;
    let params = graphs::validate_design(json.v, &json.blocks)?;
    let verdict = design_analyze(params, Some((json.v, &json.blocks)))?;
    let out = serde_json::json!({
        "params": {
            "v": params.v, "b": params.b, "r": params.r,
            "k": params.k, "lambda": params.lambda,
        },
        "admits_peak_from_point": verdict.admits_peak_from_point,
        "tau": verdict.tau.as_ref().map(|t| t.to_string()),
        "instance_verdict": verdict.instance_verdict.as_ref().map(VerdictJson::from),
    });
    outln!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)?;
    atomic_write(path, text.as_bytes())
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out")
        )),
        None => PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().and_then(|f| f.to_str()).unwrap_or("out")
        )),
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
