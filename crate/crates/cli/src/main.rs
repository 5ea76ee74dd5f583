use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use triadnet::dynamics::{self, Normalization, OscillatorParams, Ranking, Recompute};
use triadnet::graph::{self, DirectedGraph};
use triadnet::motifs::{self, ZFlag};
use triadnet::nospam;
use triadnet::stats::VarianceMode;
use triadnet::trgm::{self, DegreeDirection, PatternCounts, PatternDistribution, TrgmSampler, TrgmSpec};
use triadnet::triads::{self, CONNECTED_COUNT, PATTERN_COUNT};
use triadnet::{rng, sts};
use triadnet_cli::{aggregate_signed_month, parse_records, Countries, InputDigest, RunManifest};

#[derive(Parser)]
#[command(name = "triadnet", version, about = "Triad motifs, randomization, triadic random graphs and oscillator dynamics")]
struct Cli {
    /// Worker threads for parallel library calls (TRIADNET_WORKERS wins if set).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the result here instead of stdout; a manifest is written next to it.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Manifest path when writing to stdout.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    error_json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Whole-graph measures as JSON.
    Stats { input: String },
    /// Triad census as CSV (pattern, count).
    Census {
        input: String,
        #[arg(long)]
        connected_only: bool,
    },
    /// Motif Z scores against degree-preserving randomizations.
    Motifs {
        input: String,
        #[command(flatten)]
        ensemble: Ensemble,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Node-specific pattern Z scores.
    Nospam(NospamArgs),
    /// Steiner triple systems.
    Sts {
        #[arg(long, conflicts_with = "validate")]
        order: Option<usize>,
        /// Triple file to check ("-" for stdin).
        #[arg(long)]
        validate: Option<String>,
    },
    /// Triadic random graphs.
    Trgm(TrgmArgs),
    /// Degree-preserving randomization of an edge list.
    Randomize {
        input: String,
        #[arg(long, default_value_t = 100.0)]
        steps_per_edge: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coupling-phase sweep of the noisy oscillator network.
    Dynamics(DynamicsArgs),
    /// Spectral gap under targeted node removal.
    Removal(RemovalArgs),
    /// Complete-link clustering of profile rows from a CSV file.
    Cluster {
        input: String,
        /// Cut into this many clusters; without it the merges are listed.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Pattern tables as JSON.
    Patterns {
        #[arg(long, value_enum, default_value_t = Emit::Table)]
        emit: Emit,
    },
    /// Monthly signed graph from daily sentiment records.
    AggregateSigned {
        input: String,
        /// 1-based 30-day month.
        #[arg(long)]
        month: usize,
        /// One country token per line; tokens outside it are rejected.
        #[arg(long)]
        countries: Option<String>,
    },
}

#[derive(Args, Clone)]
struct Ensemble {
    #[arg(long, default_value_t = nospam::DEFAULT_INSTANCES)]
    instances: usize,
    #[arg(long, default_value_t = nospam::DEFAULT_STEPS_PER_EDGE)]
    steps_per_edge: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Variance::Population)]
    variance: Variance,
}

#[derive(Args)]
struct NospamArgs {
    input: String,
    #[arg(long)]
    signed: bool,
    #[command(flatten)]
    ensemble: Ensemble,
    /// Per-pattern node scores (orbit means) instead of orbit Z scores.
    #[arg(long)]
    mapped: bool,
    #[arg(long)]
    homogeneity: bool,
    #[arg(long)]
    homophily: bool,
    /// Cluster nodes by their profiles into k groups.
    #[arg(long)]
    cluster: Option<usize>,
    /// Histogram of node FFL scores with this bin width.
    #[arg(long)]
    histogram: Option<f64>,
}

#[derive(Args)]
struct TrgmArgs {
    #[arg(long)]
    order: usize,
    /// File with 16 pattern counts summing to n(n-1)/6 ("-" for stdin).
    #[arg(long, group = "spec")]
    counts: Option<String>,
    /// File with 16 pattern probabilities ("-" for stdin).
    #[arg(long, group = "spec")]
    dist: Option<String>,
    /// Pattern probabilities of an Erdős–Rényi graph with arc probability p.
    #[arg(long, group = "spec")]
    er: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the analytic degree distribution instead of a graph.
    #[arg(long)]
    degree_dist: bool,
    #[arg(long, value_enum, default_value_t = Direction::In)]
    direction: Direction,
    /// Sweep this many uniformly drawn pattern counts and emit (density, P, Z) rows.
    #[arg(long, conflicts_with = "spec")]
    sweep: Option<usize>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 10.0)]
    steps_per_edge: f64,
    /// With --sweep: P-to-Z correlations per density bin of this width, as JSON.
    #[arg(long, requires = "sweep")]
    bin_width: Option<f64>,
    /// Bins with fewer samples are skipped.
    #[arg(long, default_value_t = 10)]
    min_per_bin: usize,
}

#[derive(Args)]
struct DynamicsArgs {
    input: String,
    #[arg(long, default_value_t = 64)]
    theta_grid: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 500_000)]
    steps: usize,
    #[arg(long, default_value_t = 2000)]
    transient: usize,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
    omega: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RemovalArgs {
    input: String,
    #[arg(long, value_enum)]
    rank: Rank,
    /// Pattern id for --rank pattern.
    #[arg(long, default_value_t = triads::FFL)]
    pattern: usize,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = RecomputeArg::Once)]
    recompute: RecomputeArg,
    #[arg(long, value_enum, default_value_t = NormArg::Row)]
    normalization: NormArg,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 10.0)]
    steps_per_edge: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy)]
enum Variance {
    Population,
    Sample,
}

#[derive(ValueEnum, Clone, Copy)]
enum Emit {
    Table,
    Signed,
}

#[derive(ValueEnum, Clone, Copy)]
enum Direction {
    In,
    Out,
}

#[derive(ValueEnum, Clone, Copy)]
enum Rank {
    Pattern,
    Degree,
    Pagerank,
    Betweenness,
    Random,
}

#[derive(ValueEnum, Clone, Copy)]
enum RecomputeArg {
    Once,
    Each,
}

#[derive(ValueEnum, Clone, Copy)]
enum NormArg {
    Row,
    Column,
}

impl From<Variance> for VarianceMode {
    fn from(v: Variance) -> Self {
        match v {
            Variance::Population => VarianceMode::Population,
            Variance::Sample => VarianceMode::Sample,
        }
    }
}

/// Inputs read so far, for the manifest.
#[derive(Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, path: &str) -> Result<String> {
        let mut bytes = Vec::new();
        if path == "-" {
            std::io::stdin().read_to_end(&mut bytes).context("reading stdin")?;
        } else {
            bytes = std::fs::read(path).with_context(|| format!("reading {path}"))?;
        }
        self.0.push(InputDigest::of(path, &bytes));
        String::from_utf8(bytes).with_context(|| format!("{path} is not UTF-8"))
    }

    fn graph(&mut self, path: &str) -> Result<graph::LoadedGraph> {
        Ok(graph::load_edge_list(&self.read(path)?)?)
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_header(kind: &str, columns: &[&str]) -> String {
    format!("# triadnet {kind} v1\n{}\n", columns.join(","))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn edge_list(g: &DirectedGraph, labels: Option<&[String]>) -> String {
    let name = |u: usize| labels.map_or_else(|| u.to_string(), |l| l[u].clone());
    let mut s = String::new();
    for (u, v) in g.arcs() {
        writeln!(s, "{} {}", name(u), name(v)).unwrap();
    }
    s
}

fn numbers<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow::anyhow!("{what}: cannot parse {t:?}")))
        .collect()
}

fn sixteen<T: Copy + Default>(v: Vec<T>, what: &str) -> Result<[T; PATTERN_COUNT]> {
    if v.len() != PATTERN_COUNT {
        bail!("{what}: expected {PATTERN_COUNT} values, found {}", v.len());
    }
    let mut out = [T::default(); PATTERN_COUNT];
    out.copy_from_slice(&v);
    Ok(out)
}

fn flag_name(f: ZFlag) -> &'static str {
    match f {
        ZFlag::Ok => "ok",
        ZFlag::DegenerateZero => "zero",
        ZFlag::DegenerateInfinite => "inf",
    }
}

/// Runs one command and returns (output text, seed used).
fn run(cmd: &Command, inputs: &mut Inputs) -> Result<(String, Option<u64>)> {
    Ok(match cmd {
        Command::Stats { input } => {
            let g = inputs.graph(input)?;
            (json(&graph::graph_stats(&g.graph))?, None)
        }
        Command::Census { input, connected_only } => {
            let g = inputs.graph(input)?;
            let c = triads::census(&g.graph, *connected_only);
            let mut s = csv_header("census", &["pattern", "count"]);
            for (i, n) in c.iter().enumerate() {
                if !*connected_only || i >= 3 {
                    writeln!(s, "{},{n}", i + 1)?;
                }
            }
            (s, None)
        }
        Command::Motifs { input, ensemble: e, format } => {
            let g = inputs.graph(input)?;
            let p = motifs::z_profile(&g.graph, e.instances, e.steps_per_edge, e.variance.into(), e.seed)?;
            let sp = motifs::significance_profile(&p).ok();
            let out = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        #[serde(flatten)]
                        profile: &'a motifs::ZProfile,
                        sp: Option<Vec<f64>>,
                    }
                    json(&Out { profile: &p, sp })?
                }
                Format::Csv => {
                    let mut s = csv_header("motifs", &["pattern", "count", "mean", "sigma", "z", "sp", "flag"]);
                    for i in 0..CONNECTED_COUNT {
                        let spv = sp.as_ref().map(|v| v[i]);
                        writeln!(s, "{},{},{},{},{},{},{}", i + 4, p.counts[i], p.mean[i], p.sigma[i], p.z[i], opt(spv), flag_name(p.flags[i]))?;
                    }
                    s
                }
            };
            (out, Some(e.seed))
        }
        Command::Nospam(a) => (nospam_cmd(a, inputs)?, Some(a.ensemble.seed)),
        Command::Sts { order, validate } => (sts_cmd(*order, validate.as_deref(), inputs)?, None),
        Command::Trgm(a) => (trgm_cmd(a, inputs)?, Some(a.seed)),
        Command::Randomize { input, steps_per_edge, seed } => {
            let g = inputs.graph(input)?;
            let (uni, bi) = g.graph.link_counts();
            let steps = triadnet::randomizer::steps_for(uni + bi, *steps_per_edge);
            let r = triadnet::randomizer::randomize_directed(&g.graph, steps, *seed);
            (edge_list(&r, Some(&g.labels)), Some(*seed))
        }
        Command::Dynamics(a) => {
            let g = inputs.graph(&a.input)?;
            let base = OscillatorParams {
                a: a.a,
                omega: a.omega,
                dt: a.dt,
                transient: a.transient,
                steps: a.steps,
                seed: a.seed,
                ..Default::default()
            };
            let r = dynamics::theta_sweep(&g.graph, &base, &dynamics::theta_grid(a.theta_grid), a.repeats)?;
            let mut s = csv_header("dynamics", &["theta", "output", "output_se", "corr", "corr_se"]);
            for i in 0..r.theta.len() {
                writeln!(s, "{},{},{},{},{}", r.theta[i], r.output[i], r.output_se[i], r.correlation[i], r.correlation_se[i])?;
            }
            (s, Some(a.seed))
        }
        Command::Removal(a) => {
            let g = inputs.graph(&a.input)?;
            let ranking = match a.rank {
                Rank::Pattern => Ranking::Pattern {
                    pattern: a.pattern,
                    instances: a.instances,
                    steps_per_edge: a.steps_per_edge,
                    seed: a.seed,
                },
                Rank::Degree => Ranking::Degree,
                Rank::Pagerank => Ranking::PageRank,
                Rank::Betweenness => Ranking::Betweenness,
                Rank::Random => Ranking::Random { seed: a.seed },
            };
            let recompute = match a.recompute {
                RecomputeArg::Once => Recompute::Once,
                RecomputeArg::Each => Recompute::EachStep,
            };
            let norm = match a.normalization {
                NormArg::Row => Normalization::Row,
                NormArg::Column => Normalization::Column,
            };
            let k = a.k_max.unwrap_or(g.graph.node_count());
            let steps = dynamics::removal_experiment(&g.graph, &ranking, k, recompute, norm)?;
            let mut s = csv_header("removal", &["step", "node", "edges_removed_cum", "delta", "core_nodes"]);
            for st in steps {
                let node = st.node.map(|u| g.labels[u].clone()).unwrap_or_default();
                writeln!(s, "{},{node},{},{},{}", st.step, st.edges_removed, st.delta, st.core_nodes)?;
            }
            (s, Some(a.seed))
        }
        Command::Cluster { input, k } => (cluster_cmd(&inputs.read(input)?, *k)?, None),
        Command::Patterns { emit } => {
            let out = match emit {
                Emit::Table => json(triads::table())?,
                Emit::Signed => json(&triads::signed_pattern_table())?,
            };
            (out, None)
        }
        Command::AggregateSigned { input, month, countries } => {
            let records = parse_records(&inputs.read(input)?)?;
            let registry = match countries {
                Some(path) => Countries::from_list(&inputs.read(path)?)?,
                None => Countries::from_records(&records),
            };
            let g = aggregate_signed_month(&records, *month, &registry)?;
            let mut s = String::new();
            for (a, b, sign) in g.edges() {
                writeln!(s, "{} {} {}", registry.labels()[a], registry.labels()[b], sign.value())?;
            }
            (s, None)
        }
    })
}

fn nospam_cmd(a: &NospamArgs, inputs: &mut Inputs) -> Result<String> {
    let e = &a.ensemble;
    let text = inputs.read(&a.input)?;
    let (profiles, labels, signed_graph, directed_graph) = if a.signed {
        let g = graph::load_signed_edge_list(&text)?;
        let p = nospam::nospam_signed(&g.graph, e.instances, e.steps_per_edge, e.variance.into(), e.seed)?;
        (p, g.labels, Some(g.graph), None)
    } else {
        let g = graph::load_edge_list(&text)?;
        let p = nospam::nospam_directed(&g.graph, e.instances, e.steps_per_edge, e.variance.into(), e.seed)?;
        (p, g.labels, None, Some(g.graph))
    };
    if a.homogeneity {
        let whole = profiles.whole.as_ref().context("homogeneity needs a directed graph")?;
        return json(&nospam::homogeneity(&nospam::map_profiles(&profiles)?, whole)?);
    }
    if a.homophily {
        let h = match (&signed_graph, &directed_graph) {
            (Some(g), _) => nospam::homophily_signed(&profiles, g)?,
            (_, Some(g)) => nospam::homophily_directed(&profiles, g)?,
            _ => unreachable!(),
        };
        return json(&serde_json::json!({ "homophily": h }));
    }
    if let Some(w) = a.histogram {
        return json(&nospam::ffl_heterogeneity_histogram(&nospam::map_profiles(&profiles)?, w)?);
    }
    let mapped = if a.mapped || (a.cluster.is_some() && !a.signed) { Some(nospam::map_profiles(&profiles)?) } else { None };
    if let Some(k) = a.cluster {
        let points: Vec<Vec<f64>> = match &mapped {
            Some(m) => m.m.iter().map(|row| row.iter().map(|v| v.unwrap_or(0.0)).collect()).collect(),
            None => profiles.finite_z(),
        };
        let cut = nospam::complete_link(&points)?.cut_count(k)?;
        let mut s = csv_header("nospam-cluster", &["node", "label", "cluster"]);
        for (u, c) in cut.iter().enumerate() {
            writeln!(s, "{u},{},{c}", labels[u])?;
        }
        return Ok(s);
    }
    if let Some(m) = mapped {
        let cols: Vec<String> = (4..=16).map(|id| format!("m{id}")).collect();
        let mut header = vec!["node", "label"];
        header.extend(cols.iter().map(String::as_str));
        let mut s = csv_header("nospam-mapped", &header);
        for (u, row) in m.m.iter().enumerate() {
            let vals: Vec<String> = row.iter().map(|v| opt(*v)).collect();
            writeln!(s, "{u},{},{}", labels[u], vals.join(","))?;
        }
        return Ok(s);
    }
    let cols: Vec<String> = (1..=profiles.width).map(|i| format!("z{i}")).collect();
    let mut header = vec!["node", "label"];
    header.extend(cols.iter().map(String::as_str));
    header.push("degenerate");
    let mut s = csv_header(if a.signed { "nospam-signed" } else { "nospam" }, &header);
    for u in 0..profiles.node_count() {
        let vals: Vec<String> = profiles.z[u].iter().map(|v| v.to_string()).collect();
        let bad: Vec<String> = profiles.flags[u]
            .iter()
            .enumerate()
            .filter(|(_, f)| **f != ZFlag::Ok)
            .map(|(i, f)| format!("{}:{}", i + 1, flag_name(*f)))
            .collect();
        writeln!(s, "{u},{},{},{}", labels[u], vals.join(","), bad.join(" "))?;
    }
    Ok(s)
}

fn sts_cmd(order: Option<usize>, validate: Option<&str>, inputs: &mut Inputs) -> Result<String> {
    if let Some(path) = validate {
        let text = inputs.read(path)?;
        let mut triples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let v: Vec<usize> = numbers(line, &format!("line {}", i + 1))?;
            match v.len() {
                0 => continue,
                3 => triples.push([v[0], v[1], v[2]]),
                k => bail!("line {}: expected 3 labels, found {k}", i + 1),
            }
        }
        let n = triples.iter().flatten().copied().max().unwrap_or(0);
        let report = sts::validate_triples(n, &triples);
        if !report.is_ok() {
            bail!("not a Steiner triple system of order {n}: {}", serde_json::to_string(&report)?);
        }
        return Ok(format!("ok: order {n}, {} triples\n", triples.len()));
    }
    let Some(n) = order else { bail!("give --order N or --validate FILE") };
    let s = sts::sts_construct(n)?;
    let mut out = String::new();
    for t in &s.triples {
        writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
    }
    Ok(out)
}

fn trgm_cmd(a: &TrgmArgs, inputs: &mut Inputs) -> Result<String> {
    if !sts::is_admissible(a.order) {
        return Err(triadnet::Error::Inadmissible { order: a.order, suggestion: sts::nearest_admissible(a.order) }.into());
    }
    if let Some(samples) = a.sweep {
        return trgm_sweep(a, samples);
    }
    let spec = if let Some(path) = &a.counts {
        let counts = sixteen(numbers::<u64>(&inputs.read(path)?, "counts")?, "counts")?;
        TrgmSpec::Counts(PatternCounts::new(a.order, counts)?)
    } else if let Some(path) = &a.dist {
        let p = sixteen(numbers::<f64>(&inputs.read(path)?, "distribution")?, "distribution")?;
        TrgmSpec::Distribution(PatternDistribution::new(p)?)
    } else if let Some(p) = a.er {
        TrgmSpec::Distribution(trgm::er_distribution(p)?)
    } else {
        bail!("give one of --counts, --dist, --er or --sweep");
    };
    if a.degree_dist {
        let d = match &spec {
            TrgmSpec::Counts(c) => c.distribution(),
            TrgmSpec::Distribution(d) => d.clone(),
        };
        let dir = match a.direction {
            Direction::In => DegreeDirection::In,
            Direction::Out => DegreeDirection::Out,
        };
        let mut s = csv_header("degree-dist", &["k", "probability"]);
        for (k, p) in trgm::degree_distribution(&d, a.order, dir)?.iter().enumerate() {
            writeln!(s, "{k},{p}")?;
        }
        return Ok(s);
    }
    Ok(edge_list(&trgm::sample_trgm(a.order, &spec, a.seed)?, None))
}

/// Uniform draws over pattern counts, each sampled once and scored against
/// its own randomizations.
fn trgm_sweep(a: &TrgmArgs, samples: usize) -> Result<String> {
    use rayon::prelude::*;
    let sampler = TrgmSampler::new(a.order)?;
    let rows: Vec<(PatternDistribution, f64, [f64; CONNECTED_COUNT])> = (0..samples)
        .into_par_iter()
        .map(|i| -> triadnet::Result<_> {
            let mut r = rng::stream(a.seed, i as u64);
            let counts = trgm::uniform_simplex_counts_with(a.order, &mut r)?;
            let g = sampler.sample(&TrgmSpec::Counts(counts.clone()), &mut r)?;
            let z = motifs::z_profile(&g, a.instances, a.steps_per_edge, VarianceMode::Population, rng::derive_seed(a.seed, i as u64))?;
            Ok((counts.distribution(), g.density()?, z.finite_z()))
        })
        .collect::<triadnet::Result<_>>()?;
    if let Some(w) = a.bin_width {
        if !(w > 0.0) {
            bail!("bin width must be positive");
        }
        let mut bins: std::collections::BTreeMap<i64, Vec<(PatternDistribution, [f64; CONNECTED_COUNT])>> = Default::default();
        for (d, density, z) in &rows {
            bins.entry((density / w).floor() as i64).or_default().push((d.clone(), *z));
        }
        #[derive(Serialize)]
        struct Bin {
            lower: f64,
            samples: usize,
            correlation: Option<triadnet::stats::CorrelationMatrix>,
        }
        let out: Vec<Bin> = bins
            .into_iter()
            .map(|(b, v)| Bin {
                lower: b as f64 * w,
                samples: v.len(),
                correlation: (v.len() >= a.min_per_bin).then(|| trgm::p_to_z_correlation(&v).ok()).flatten(),
            })
            .collect();
        return json(&out);
    }
    let mut header = vec!["sample".to_string(), "density".to_string()];
    header.extend((1..=PATTERN_COUNT).map(|i| format!("p{i}")));
    header.extend((4..=16).map(|i| format!("z{i}")));
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut s = csv_header("trgm-sweep", &refs);
    for (i, (d, density, z)) in rows.iter().enumerate() {
        let p: Vec<String> = d.probabilities().iter().map(|v| v.to_string()).collect();
        let zs: Vec<String> = z.iter().map(|v| v.to_string()).collect();
        writeln!(s, "{i},{density},{},{}", p.join(","), zs.join(","))?;
    }
    Ok(s)
}

/// Profile rows after one header line; `#` lines are skipped. Labels come
/// from a `label` column, else the first column; `node` and `degenerate`
/// columns (as written by `nospam`) are not coordinates.
fn cluster_cmd(text: &str, k: Option<usize>) -> Result<String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().context("empty profile file")?.split(',').map(str::trim).collect();
    let label_col = header.iter().position(|h| *h == "label").unwrap_or(0);
    let coords: Vec<usize> =
        (0..header.len()).filter(|&c| c != label_col && !matches!(header[c], "node" | "degenerate")).collect();
    let (mut labels, mut points) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != header.len() {
            bail!("row {}: {} fields, header has {}", i + 1, cells.len(), header.len());
        }
        labels.push(cells[label_col].to_string());
        let row: Vec<f64> = coords
            .iter()
            .map(|&c| match cells[c] {
                "" => Ok(0.0),
                v => v.parse().with_context(|| format!("row {}: {v:?} is not a number", i + 1)),
            })
            .collect::<Result<_>>()?;
        points.push(row);
    }
    let d = nospam::complete_link(&points)?;
    if let Some(k) = k {
        let mut s = csv_header("cluster", &["label", "cluster"]);
        for (l, c) in labels.iter().zip(d.cut_count(k)?) {
            writeln!(s, "{l},{c}")?;
        }
        return Ok(s);
    }
    let mut s = csv_header("dendrogram", &["a", "b", "distance", "size"]);
    for m in &d.merges {
        writeln!(s, "{},{},{},{}", m.a, m.b, m.distance, m.size)?;
    }
    Ok(s)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Stats { .. } => "stats",
        Command::Census { .. } => "census",
        Command::Motifs { .. } => "motifs",
        Command::Nospam(_) => "nospam",
        Command::Sts { .. } => "sts",
        Command::Trgm(_) => "trgm",
        Command::Randomize { .. } => "randomize",
        Command::Dynamics(_) => "dynamics",
        Command::Removal(_) => "removal",
        Command::Cluster { .. } => "cluster",
        Command::Patterns { .. } => "patterns",
        Command::AggregateSigned { .. } => "aggregate-signed",
    }
}

fn configure_workers(flag: Option<usize>) -> Result<()> {
    let env = std::env::var("TRIADNET_WORKERS").ok();
    let workers = match env {
        Some(v) => Some(v.trim().parse::<usize>().with_context(|| format!("TRIADNET_WORKERS={v:?} is not a count"))?),
        None => flag,
    };
    if let Some(w) = workers.filter(|&w| w > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().context("setting up worker threads")?;
    }
    Ok(())
}

fn main_inner(cli: &Cli) -> Result<()> {
    configure_workers(cli.workers)?;
    let mut inputs = Inputs::default();
    let (output, seed) = run(&cli.command, &mut inputs)?;
    let args: Vec<String> = std::env::args().skip(1).collect();
    let manifest = RunManifest::new(command_name(&cli.command), args, seed, inputs.0);
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &output).with_context(|| format!("writing {}", path.display()))?;
            std::fs::write(RunManifest::path_for(path), manifest.to_json())?;
        }
        None => {
            std::io::stdout().lock().write_all(output.as_bytes())?;
            if let Some(path) = &cli.manifest {
                std::fs::write(path, manifest.to_json())?;
            }
        }
    }
    Ok(())
}

fn error_kind(e: &anyhow::Error) -> String {
    match e.downcast_ref::<triadnet::Error>() {
        Some(inner) => {
            let dbg = format!("{inner:?}");
            dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
        }
        None => "Error".into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.error_json {
                let v = serde_json::json!({ "error": error_kind(&e), "message": format!("{e:#}") });
                eprintln!("{v}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::FAILURE
        }
    }
}
