use crate::args::*;
use crate::manifest::{digest, InputDigest, Report, RunManifest};
use crate::{config, tables, CliError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;
use trustnet_core::cluster::{disagreements, CorrelationConfig, Partition, SpectralConfig};
use trustnet_core::graph::{GraphSummary, DEFAULT_WEIGHT_DIVISOR};
use trustnet_core::linkpred::{densify, fairness_goodness, DensifyMode, FGConfig, DEFAULT_PAIR_BUDGET};
use trustnet_core::resiliency::{
    compare_methods, eval_link_prediction, eval_positive_only_ablation, run_pipeline, yearwise, ClusterMethod,
    PipelineConfig, YearwiseMode, YearwiseSeries,
};
use trustnet_core::{trust_report, NodeId, Sample, SignedDiGraph, SignedEdge, TrustReport};

type Result<T> = std::result::Result<T, CliError>;

const DEFAULT_K: usize = 5;
const DEFAULT_DELTA: f64 = 0.05;

/// Graph as written by `ingest`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub manifest: String,
    pub summary: GraphSummary,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<SignedEdge>,
}

pub fn run(command: Command, argv: Vec<String>) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a, argv),
        Command::Predict(a) => predict(a, argv),
        Command::Cluster(a) => cluster(a, argv),
        Command::Trust(a) => trust(a, argv),
        Command::Resiliency(a) => resiliency(a, argv),
        Command::Eval(EvalCommand::LinkPrediction(a)) => link_prediction(a, argv),
        Command::Eval(EvalCommand::Ablation(a)) => ablation(a, argv),
        Command::Eval(EvalCommand::Yearwise(a)) => yearwise_cmd(a, argv),
        Command::Eval(EvalCommand::CompareMethods(a)) => compare(a, argv),
    }
}

/// Collects artifacts for one run and writes the manifest last.
struct Output {
    dir: PathBuf,
    manifest_name: String,
    subcommand: &'static str,
    argv: Vec<String>,
    config: serde_json::Value,
    input: Option<InputDigest>,
    seeds: BTreeMap<String, u64>,
    artifacts: Vec<String>,
    started: Instant,
}

impl Output {
    fn new<T: Serialize>(subcommand: &'static str, argv: Vec<String>, settings: &T, dir: PathBuf, manifest_name: &str) -> Result<Self> {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir,
            manifest_name: manifest_name.to_string(),
            subcommand,
            argv,
            config: config::snapshot(settings),
            input: None,
            seeds: BTreeMap::new(),
            artifacts: Vec::new(),
            started: Instant::now(),
        })
    }

    fn in_dir<T: Serialize>(subcommand: &'static str, argv: Vec<String>, settings: &T, common: &Common) -> Result<Self> {
        let dir = common.out.clone().ok_or_else(|| CliError::usage("missing --out"))?;
        Self::new(subcommand, argv, settings, dir, "manifest.json")
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.artifacts.push(name.to_string());
        self.dir.join(name)
    }

    fn json<T: Serialize>(&mut self, name: &str, report: T) -> Result<()> {
        let envelope = Report {
            manifest: self.manifest_name.clone(),
            input_sha256: self.input.as_ref().map(|d| d.sha256.clone()),
            report,
        };
        let path = self.path(name);
        write_json(&path, &envelope)
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let path = self.path(name);
        tables::write(&path, rows).map_err(|e| CliError::data(format!("{}: {e:#}", path.display())))
    }

    fn finish(self) -> Result<()> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.argv,
            subcommand: self.subcommand.to_string(),
            config: self.config,
            input: self.input,
            seeds: self.seeds,
            artifacts: self.artifacts,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        write_json(&self.dir.join(&self.manifest_name), &manifest)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::data)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn input_path(common: &Common) -> Result<&Path> {
    common.input.as_deref().ok_or_else(|| CliError::usage("missing --input"))
}

fn divisor(common: &Common) -> f64 {
    common.weight_divisor.unwrap_or(DEFAULT_WEIGHT_DIVISOR)
}

/// Reads a rating CSV or a graph JSON written by `ingest`.
pub fn load_graph(path: &Path, weight_divisor: f64) -> Result<SignedDiGraph> {
    let mut head = [0u8; 64];
    let n = {
        use std::io::Read;
        let mut f = std::fs::File::open(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        f.read(&mut head).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?
    };
    let is_json = head[..n].iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{');
    if is_json {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        let file: GraphFile = serde_json::from_str(&text).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        Ok(SignedDiGraph::new(file.nodes, file.edges)?)
    } else {
        Ok(SignedDiGraph::ingest_csv(path, weight_divisor)?)
    }
}

fn load_input(out: &mut Output, common: &Common) -> Result<SignedDiGraph> {
    let path = input_path(common)?;
    let g = load_graph(path, divisor(common))?;
    out.input = Some(digest(path)?);
    Ok(g)
}

fn fg_config(a: &FgArgs) -> FGConfig {
    let d = FGConfig::default();
    FGConfig {
        max_iterations: a.fg_max_iterations.unwrap_or(d.max_iterations),
        tolerance: a.fg_tolerance.unwrap_or(d.tolerance),
        relaxation: a.fg_relaxation.unwrap_or(d.relaxation),
        ..d
    }
}

fn densify_mode(a: &DensifyArgs) -> Option<DensifyMode> {
    if a.no_densify == Some(true) {
        return None;
    }
    Some(match a.densify.unwrap_or(DensifyChoice::MissingOnly) {
        DensifyChoice::MissingOnly => DensifyMode::MissingOnly,
        DensifyChoice::AllPairs => DensifyMode::AllPairsCapped { budget: a.pair_budget.unwrap_or(DEFAULT_PAIR_BUDGET) },
    })
}

fn sample(spec: &Option<String>) -> Result<Option<Sample>> {
    spec.as_deref().map(|s| s.parse::<Sample>().map_err(CliError::from)).transpose()
}

fn apply_sample(g: SignedDiGraph, spec: &Option<Sample>) -> SignedDiGraph {
    match spec {
        Some(s) => g.sample(s),
        None => g,
    }
}

fn spectral(k: usize, dim: Option<usize>, restarts: Option<usize>, seed: u64) -> SpectralConfig {
    let base = SpectralConfig::new(k, seed);
    SpectralConfig { embedding_dim: dim.unwrap_or(k), kmeans_restarts: restarts.unwrap_or(base.kmeans_restarts), ..base }
}

fn method(m: &MethodArgs, k: Option<usize>, delta: Option<f64>, seed: u64) -> ClusterMethod {
    match m.method.unwrap_or(Method::Spectral) {
        Method::Spectral => {
            ClusterMethod::Spectral(spectral(k.or(m.k).unwrap_or(DEFAULT_K), m.embedding_dim, m.kmeans_restarts, seed))
        }
        Method::Correlation => ClusterMethod::Correlation(CorrelationConfig::new(delta.or(m.delta).unwrap_or(DEFAULT_DELTA))),
    }
}

fn print_top(title: &str, report: &TrustReport, top: Option<usize>) {
    println!("{title}: {} clusters, total trust {:.6}", report.rows.len(), report.total_trust);
    let shown = top.unwrap_or(report.rows.len()).min(report.rows.len());
    if shown > 0 {
        println!("  {:>7} {:>7} {:>9} {:>9} {:>10}", "cluster", "nodes", "inside+", "outside-", "trust");
    }
    for r in &report.rows[..shown] {
        println!(
            "  {:>7} {:>7} {:>9} {:>9} {:>10.6}",
            r.cluster_index, r.num_nodes, r.inside_positive_count, r.outside_negative_count, r.trust
        );
    }
    if shown < report.rows.len() {
        println!("  ... {} more", report.rows.len() - shown);
    }
}

fn ingest(args: IngestArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let out_file = a.common.out.clone().ok_or_else(|| CliError::usage("missing --out"))?;
    let dir = out_file.parent().filter(|p| !p.as_os_str().is_empty()).map(Path::to_path_buf).unwrap_or_else(|| ".".into());
    let stem = out_file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into());
    let name = out_file.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph.json".into());
    let mut out = Output::new("ingest", argv, &a, dir, &format!("{stem}.manifest.json"))?;
    let g = load_input(&mut out, &a.common)?;
    let summary = g.summary();
    let file = GraphFile { manifest: out.manifest_name.clone(), summary: summary.clone(), nodes: g.nodes().to_vec(), edges: g.edges().to_vec() };
    let path = out.path(&name);
    write_json(&path, &file)?;
    println!("{}", serde_json::to_string_pretty(&summary).map_err(CliError::data)?);
    out.finish()
}

#[derive(Serialize)]
struct PredictReport {
    iterations_run: usize,
    converged: bool,
    residual: f64,
    nodes: usize,
    observed_edges: usize,
    predicted_edges: Option<usize>,
}

fn predict(args: PredictArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("predict", argv, &a, &a.common)?;
    let g = load_input(&mut out, &a.common)?.observed_only();
    let scores = fairness_goodness(&g, &fg_config(&a.fg))?;
    out.csv("scores.csv", &tables::score_rows(&scores))?;
    let mut predicted_edges = None;
    if a.densified == Some(true) {
        let mode = densify_mode(&a.densify).unwrap_or(DensifyMode::MissingOnly);
        let dense = densify(&g, &scores, mode)?;
        predicted_edges = Some(dense.edge_count() - g.edge_count());
        out.csv("densified.csv", &tables::edge_rows(dense.edges()))?;
    }
    let report = PredictReport {
        iterations_run: scores.iterations_run,
        converged: scores.converged,
        residual: scores.residual(&g),
        nodes: g.node_count(),
        observed_edges: g.edge_count(),
        predicted_edges,
    };
    if !scores.converged {
        log::warn!("fairness/goodness did not converge in {} iterations", scores.iterations_run);
    }
    println!("scored {} nodes in {} iterations (converged: {})", report.nodes, report.iterations_run, report.converged);
    out.json("report.json", report)?;
    out.finish()
}

#[derive(Serialize)]
struct ClusterReport {
    method: ClusterMethod,
    num_clusters: usize,
    sizes: Vec<usize>,
    disagreements: f64,
    nodes: usize,
    observed_edges: usize,
    clustered_edges: usize,
}

fn cluster(args: ClusterArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("cluster", argv, &a, &a.common)?;
    let seed = a.common.seed.unwrap_or(0);
    out.seeds.insert("clustering".into(), seed);
    let spec = sample(&a.sample)?;
    let g = apply_sample(load_input(&mut out, &a.common)?, &spec).observed_only();
    let m = method(&a.method, None, None, seed);
    let clustered = match densify_mode(&a.densify) {
        Some(mode) => densify(&g, &fairness_goodness(&g, &fg_config(&a.fg))?, mode)?,
        None => g.clone(),
    };
    let p = m.cluster(&clustered)?;
    let report = ClusterReport {
        method: m,
        num_clusters: p.num_clusters(),
        sizes: p.sizes(),
        disagreements: disagreements(&g, &p)?,
        nodes: g.node_count(),
        observed_edges: g.edge_count(),
        clustered_edges: clustered.edge_count(),
    };
    println!("{} clusters, disagreements {}", report.num_clusters, report.disagreements);
    out.csv("partition.csv", &tables::partition_rows(&p))?;
    out.json("report.json", report)?;
    out.finish()
}

fn trust(args: TrustArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("trust", argv, &a, &a.common)?;
    let g = load_input(&mut out, &a.common)?;
    let ppath = a.partition.as_deref().ok_or_else(|| CliError::usage("missing --partition"))?;
    let rows: Vec<tables::PartitionRow> = tables::read(ppath).map_err(|e| CliError::data(format!("{}: {e:#}", ppath.display())))?;
    let p = Partition::from_pairs(rows.into_iter().map(|r| (r.node, r.cluster)))?;
    let report = trust_report(&g, &p)?;
    print_top("trust", &report, a.top);
    out.csv("trust.csv", &tables::trust_rows(&report))?;
    out.json("report.json", report)?;
    out.finish()
}

fn pipeline_config(a: &ResiliencyArgs, seed: u64) -> Result<PipelineConfig> {
    let p = &a.phases;
    let original = method(&a.method, p.k_original, p.delta_original, seed);
    let disrupted = method(
        &a.method,
        p.k_disrupted.or(p.k_original),
        p.delta_disrupted.or(p.delta_original),
        seed + 1,
    );
    let cfg = PipelineConfig { original, disrupted, fg: fg_config(&a.fg), densify: densify_mode(&a.densify), sample: sample(&a.sample)? };
    cfg.validate()?;
    Ok(cfg)
}

fn resiliency(args: ResiliencyArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("resiliency", argv, &a, &a.common)?;
    let seed = a.common.seed.unwrap_or(0);
    let cfg = pipeline_config(&a, seed)?;
    out.seeds.insert("original_clustering".into(), seed);
    out.seeds.insert("disrupted_clustering".into(), seed + 1);
    let g = load_input(&mut out, &a.common)?;
    let report = run_pipeline(&g, &cfg)?;
    print_top("original", &report.original, a.top);
    print_top("disrupted", &report.disrupted, a.top);
    println!("r_minus {:.6}, mae baseline {:.6}", report.r_minus, report.mae_baseline);
    out.csv("resiliency.csv", &[tables::resiliency_row(&report)])?;
    out.csv("trust_original.csv", &tables::trust_rows(&report.original))?;
    out.csv("trust_disrupted.csv", &tables::trust_rows(&report.disrupted))?;
    out.json("report.json", report)?;
    out.finish()
}

fn link_prediction(args: LinkPredictionArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("eval link-prediction", argv, &a, &a.common)?;
    let g = load_input(&mut out, &a.common)?;
    let fg = fg_config(&a.fg);
    let fractions = a.train_frac.clone().unwrap_or_else(|| vec![0.9]);
    let mut evals = Vec::with_capacity(fractions.len());
    for f in fractions {
        let e = eval_link_prediction(&g, f, &fg)?;
        println!(
            "train {:.2}: {} predicted, {} unpredictable, mae {:.6}",
            e.train_fraction, e.num_predicted, e.unpredictable, e.mae
        );
        evals.push(e);
    }
    out.csv("link_prediction.csv", &evals.iter().map(tables::link_prediction_row).collect::<Vec<_>>())?;
    out.json("report.json", evals)?;
    out.finish()
}

fn ablation(args: AblationArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("eval ablation", argv, &a, &a.common)?;
    let seed = a.common.seed.unwrap_or(0);
    out.seeds.insert("clustering".into(), seed);
    let spec = sample(&a.sample)?;
    let g = apply_sample(load_input(&mut out, &a.common)?, &spec);
    let cfg = spectral(a.k.unwrap_or(DEFAULT_K), a.embedding_dim, a.kmeans_restarts, seed);
    let report = eval_positive_only_ablation(&g, &cfg)?;
    print_top("positive edges only", &report.positive_only, a.top);
    print_top("signed", &report.signed, a.top);
    let totals = [
        tables::TotalRow { variant: "positive_only".into(), clusters: report.positive_only.rows.len(), total_trust: report.trust_positive_only },
        tables::TotalRow { variant: "signed".into(), clusters: report.signed.rows.len(), total_trust: report.trust_signed },
    ];
    out.csv("ablation.csv", &totals)?;
    out.csv("trust_positive_only.csv", &tables::trust_rows(&report.positive_only))?;
    out.csv("trust_signed.csv", &tables::trust_rows(&report.signed))?;
    out.json("report.json", report)?;
    out.finish()
}

#[derive(Serialize)]
struct YearwiseReport {
    spearman: Option<f64>,
    series: YearwiseSeries,
}

fn yearwise_cmd(args: YearwiseArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.resiliency.common.config.as_deref())?;
    let r = &a.resiliency;
    let mut out = Output::in_dir("eval yearwise", argv, &a, &r.common)?;
    let seed = r.common.seed.unwrap_or(0);
    let cfg = pipeline_config(r, seed)?;
    out.seeds.insert("original_clustering".into(), seed);
    out.seeds.insert("disrupted_clustering".into(), seed + 1);
    let g = load_input(&mut out, &r.common)?;
    let mode = match a.yearwise_mode.unwrap_or(YearwiseChoice::Cumulative) {
        YearwiseChoice::Cumulative => YearwiseMode::Cumulative,
        YearwiseChoice::Slice => YearwiseMode::Slice,
    };
    let series = yearwise(&g, &cfg, mode)?;
    for e in &series.entries {
        println!("{}: r_minus {:.6}, mae {:.6} ({} nodes)", e.year, e.r_minus, e.mae, e.nodes);
    }
    for s in &series.skipped {
        println!("{}: skipped ({})", s.year, s.reason);
    }
    let spearman = series.spearman();
    match spearman {
        Some(rho) => println!("spearman(r_minus, mae) = {rho:.4}"),
        None => println!("spearman(r_minus, mae) undefined"),
    }
    out.csv("yearwise.csv", &tables::year_rows(&series))?;
    out.json("report.json", YearwiseReport { spearman, series })?;
    out.finish()
}

fn compare(args: CompareArgs, argv: Vec<String>) -> Result<()> {
    let a = config::resolve(args.clone(), args.common.config.as_deref())?;
    let mut out = Output::in_dir("eval compare-methods", argv, &a, &a.common)?;
    let seed = a.common.seed.unwrap_or(0);
    out.seeds.insert("spectral_clustering".into(), seed);
    let spec = sample(&a.sample)?;
    let g = apply_sample(load_input(&mut out, &a.common)?, &spec);
    let s = spectral(a.k.unwrap_or(DEFAULT_K), a.embedding_dim, a.kmeans_restarts, seed);
    let c = CorrelationConfig::new(a.delta.unwrap_or(DEFAULT_DELTA));
    let report = compare_methods(&g, &s, &c, &fg_config(&a.fg), densify_mode(&a.densify))?;
    println!("spectral total trust {:.6} ({} clusters)", report.trust_spectral, report.clusters_spectral);
    println!("correlation total trust {:.6} ({} clusters)", report.trust_correlation, report.clusters_correlation);
    if let Some(flag) = &report.flag {
        log::warn!("{flag}");
    }
    let totals = [
        tables::TotalRow { variant: "spectral".into(), clusters: report.clusters_spectral, total_trust: report.trust_spectral },
        tables::TotalRow { variant: "correlation".into(), clusters: report.clusters_correlation, total_trust: report.trust_correlation },
    ];
    out.csv("comparison.csv", &totals)?;
    out.json("report.json", report)?;
    out.finish()
}
