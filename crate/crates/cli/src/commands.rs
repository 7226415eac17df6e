use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use rankcat::detect::{detect, Detection, Detector};
use rankcat::eval::{
    nmi, run_mixing_sweep, run_sbm_benchmark, ExperimentReport, SbmBenchConfig, SbmPoint,
    SweepConfig,
};
use rankcat::expectation::{emit_expectation_curve, estimate_alpha_beta, ExpectationCurve};
use rankcat::movielens::{build_rating_similarity, parse_ratings, SubsetSpec};
use rankcat::seed::{derive_seed, stream};
use rankcat::{
    build_similarity_matrix, generate_rankings, io, threshold_graph, GroundTruth, Partition,
    RankingConfig, SimilarityGraph, SimilarityMatrix,
};

use crate::args::*;

/// Files and facts a command produced, for the manifest and the log.
#[derive(Debug, Default)]
pub struct Run {
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub log: String,
}

pub struct Ctx<'a> {
    pub dir: &'a Path,
    pub format: Format,
    run: Run,
}

impl<'a> Ctx<'a> {
    pub fn new(dir: &'a Path, format: Format) -> Self {
        Ctx {
            dir,
            format,
            run: Run::default(),
        }
    }

    pub fn finish(self) -> Run {
        self.run
    }

    fn input(&mut self, path: &Path) {
        self.run.inputs.push(path.to_path_buf());
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.run.outputs.push(PathBuf::from(name));
        self.dir.join(name)
    }

    fn say(&mut self, line: impl AsRef<str>) {
        // a closed stdout (e.g. piped into `head`) must not abort the run
        let _ = writeln!(std::io::stdout(), "{}", line.as_ref());
        self.run.log.push_str(line.as_ref());
        self.run.log.push('\n');
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write_text(name, &(serde_json::to_string_pretty(value)? + "\n"))
    }

    fn write_with(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> rankcat::Result<()>,
    ) -> Result<()> {
        let path = self.path(name);
        let mut w = io::create(&path)?;
        f(&mut w)?;
        w.flush()
            .with_context(|| format!("writing {}", path.display()))
    }

    fn save_graph(&mut self, name: &str, graph: &SimilarityGraph) -> Result<()> {
        let path = self.path(name);
        self.run.outputs.push(PathBuf::from(format!("{name}.json")));
        graph.save(&path)?;
        Ok(())
    }

    fn save_matrix(&mut self, sim: &SimilarityMatrix) -> Result<()> {
        self.write_with("similarity.csv", |w| sim.write_csv(w))
    }
}

fn read_truth(path: &Path) -> Result<GroundTruth> {
    io::read_ground_truth_csv(io::open(path)?)
        .with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<SimilarityGraph> {
    SimilarityGraph::load(path).with_context(|| format!("reading {}", path.display()))
}

fn write_rows(ctx: &mut Ctx, stem: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let text = match ctx.format {
        Format::Csv => {
            let mut s = header.join(",") + "\n";
            for r in rows {
                s += &(r.join(",") + "\n");
            }
            s
        }
        Format::Md => {
            let mut s = format!(
                "| {} |\n|{}\n",
                header.join(" | "),
                "---|".repeat(header.len())
            );
            for r in rows {
                s += &format!("| {} |\n", r.join(" | "));
            }
            s
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(k, v)| {
                            let value = v
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or_else(|| serde_json::Value::String(v.clone()), Into::into);
                            (k.to_string(), value)
                        })
                        .collect()
                })
                .collect();
            serde_json::to_string_pretty(&objects)? + "\n"
        }
    };
    let name = format!("{stem}.{}", ctx.format.extension());
    ctx.write_text(&name, &text)
}

pub fn generate(ctx: &mut Ctx, args: &GenerateArgs) -> Result<()> {
    let m = &args.model;
    ctx.run.seed = Some(m.seed);
    let cfg = RankingConfig::new(m.categories, m.category_size, m.p, m.voters, m.seed)?;
    let (rankings, truth) = generate_rankings(&cfg)?;
    ctx.write_json("config.json", &cfg)?;
    ctx.write_with("rankings.csv", |w| io::write_rankings_csv(&rankings, w))?;
    ctx.write_with("truth.csv", |w| io::write_ground_truth_csv(&truth, w))?;
    ctx.say(format!(
        "generated {} voters over {} items in {} categories",
        rankings.voters(),
        rankings.items(),
        m.categories
    ));
    Ok(())
}

fn build_graph_from(
    ctx: &mut Ctx,
    rankings: &rankcat::RankingMatrix,
    truth: Option<&GroundTruth>,
    threshold: &ThresholdArgs,
) -> Result<SimilarityGraph> {
    let sim = build_similarity_matrix(rankings);
    let epsilon = threshold.strategy().resolve(rankings.items())?;
    let graph = threshold_graph(&sim, epsilon);
    ctx.save_graph("graph.edges", &graph)?;
    if threshold.dump_matrix {
        ctx.save_matrix(&sim)?;
    }
    ctx.say(format!(
        "epsilon {epsilon:.6}: {} edges, edge ratio {:.4}",
        graph.edge_count(),
        graph.edge_ratio()
    ));
    if let Some(truth) = truth {
        let ab = estimate_alpha_beta(&sim, truth, epsilon)?;
        ctx.write_json("alpha_beta.json", &ab)?;
        ctx.say(format!("alpha {:.4} beta {:.4}", ab.alpha, ab.beta));
    }
    Ok(graph)
}

pub fn build_graph(ctx: &mut Ctx, args: &BuildGraphArgs) -> Result<()> {
    ctx.input(&args.rankings);
    let rankings = io::read_rankings_csv(io::open(&args.rankings)?)
        .with_context(|| format!("reading {}", args.rankings.display()))?;
    let truth = match &args.truth {
        Some(p) => {
            ctx.input(p);
            Some(read_truth(p)?)
        }
        None => None,
    };
    build_graph_from(ctx, &rankings, truth.as_ref(), &args.threshold)?;
    Ok(())
}

#[derive(Serialize)]
struct DetectionMeta {
    algo: String,
    seed: u64,
    max_iters: usize,
    communities: usize,
    iterations: usize,
    converged: bool,
    modularity: Option<f64>,
}

fn run_detector(
    ctx: &mut Ctx,
    graph: &SimilarityGraph,
    args: &DetectorArgs,
    seed: u64,
) -> Result<Detection> {
    let detector = args.detector();
    let found = detect(graph, &detector, args.max_iters, seed)?;
    ctx.write_with("partition.csv", |w| {
        io::write_partition_csv(&found.partition, w)
    })?;
    ctx.write_json(
        "detection.json",
        &DetectionMeta {
            algo: detector.label(),
            seed,
            max_iters: args.max_iters,
            communities: found.partition.count(),
            iterations: found.iterations,
            converged: found.converged,
            modularity: found.modularity,
        },
    )?;
    let q = found
        .modularity
        .map_or_else(|| "n/a".to_string(), |q| format!("{q:.4}"));
    ctx.say(format!(
        "{}: {} communities, {} iterations, converged {}, modularity {q}",
        detector.label(),
        found.partition.count(),
        found.iterations,
        found.converged
    ));
    if !found.converged {
        eprintln!(
            "warning: stopped at --max-iters {} without converging",
            args.max_iters
        );
    }
    Ok(found)
}

pub fn detect_cmd(ctx: &mut Ctx, args: &DetectArgs) -> Result<()> {
    ctx.input(&args.graph);
    ctx.run.seed = Some(args.seed);
    let mut graph = load_graph(&args.graph)?;
    if let Some(n) = args.n {
        if n < graph.n() {
            bail!(
                "--n {n} is smaller than the {} vertices in {}",
                graph.n(),
                args.graph.display()
            );
        }
        graph = SimilarityGraph::from_edges(n, graph.edges().to_vec(), graph.source())?;
    }
    run_detector(ctx, &graph, &args.detector, args.seed)?;
    Ok(())
}

fn score(
    ctx: &mut Ctx,
    truth: &GroundTruth,
    found: &Partition,
    modularity: Option<f64>,
) -> Result<f64> {
    let s = nmi(&truth.to_partition(), found)?;
    let q = modularity.map_or_else(String::new, |q| q.to_string());
    write_rows(
        ctx,
        "eval",
        &[
            "nmi",
            "mutual_information",
            "entropy_truth",
            "entropy_found",
            "categories",
            "communities",
            "modularity",
        ],
        &[vec![
            s.value.to_string(),
            s.mutual_information.to_string(),
            s.entropy_a.to_string(),
            s.entropy_b.to_string(),
            truth.categories().to_string(),
            found.count().to_string(),
            q,
        ]],
    )?;
    ctx.say(format!("nmi {:.6}", s.value));
    Ok(s.value)
}

pub fn eval(ctx: &mut Ctx, args: &EvalArgs) -> Result<()> {
    ctx.input(&args.truth);
    ctx.input(&args.partition);
    let truth = read_truth(&args.truth)?;
    let found = io::read_partition_csv(io::open(&args.partition)?)
        .with_context(|| format!("reading {}", args.partition.display()))?;
    let modularity = match &args.graph {
        Some(p) => {
            ctx.input(p);
            let g = load_graph(p)?;
            (g.edge_count() > 0)
                .then(|| rankcat::detect::modularity(&g, &found))
                .transpose()?
        }
        None => None,
    };
    score(ctx, &truth, &found, modularity)?;
    Ok(())
}

fn write_report(ctx: &mut Ctx, report: &ExperimentReport) -> Result<()> {
    ctx.write_with("trials.csv", |w| report.write_trials_csv(w))?;
    ctx.write_with("aggregate.csv", |w| report.write_aggregate_csv(w))?;
    ctx.write_text("table.md", &report.to_markdown())?;
    if ctx.format == Format::Json {
        ctx.write_json("report.json", report)?;
    }
    Ok(())
}

pub fn sweep(ctx: &mut Ctx, args: &SweepArgs) -> Result<()> {
    ctx.run.seed = Some(args.seed);
    let report = run_mixing_sweep(&SweepConfig {
        category_size: args.category_size,
        categories: args.categories,
        mixing: args.p.clone(),
        multipliers: args.multipliers.clone(),
        trials: args.trials,
        seed: args.seed,
        epsilon: ThresholdArgs {
            epsilon: args.epsilon,
            dump_matrix: false,
        }
        .strategy(),
        detector: args.detector.detector(),
        max_iters: args.detector.max_iters,
    })?;
    write_report(ctx, &report)?;
    for row in &report.aggregates {
        ctx.say(format!(
            "{}: mean nmi {:.4} (sd {:.4})",
            row.config, row.mean_nmi, row.sd_nmi
        ));
    }
    Ok(())
}

pub fn bench_sbm(ctx: &mut Ctx, args: &BenchSbmArgs) -> Result<()> {
    ctx.run.seed = Some(args.seed);
    if args.algos.is_empty() {
        bail!("--algos needs at least one algorithm");
    }
    let detectors: Vec<Detector> = args
        .algos
        .iter()
        .map(|&a| args.detector.detector_for(a))
        .collect();
    let grid = args
        .p_in
        .iter()
        .map(|&p_in| SbmPoint {
            communities: args.communities,
            size: args.size,
            p_in,
            p_out: args.p_out,
        })
        .collect();
    let report = run_sbm_benchmark(&SbmBenchConfig {
        grid,
        detectors,
        trials: args.trials,
        seed: args.seed,
        max_iters: args.detector.max_iters,
    })?;
    write_report(ctx, &report)?;
    ctx.say(report.to_markdown().trim_end());
    Ok(())
}

fn curve_text(curve: &ExpectationCurve, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => serde_json::to_string_pretty(curve)? + "\n",
        Format::Md => {
            let mut s = String::from("| p | intra | overall | inter |\n|---|---|---|---|\n");
            for r in &curve.rows {
                writeln!(
                    s,
                    "| {} | {:.4} | {:.4} | {:.4} |",
                    r.p, r.intra, r.overall, r.inter
                )?;
            }
            s
        }
    })
}

pub fn expect(ctx: &mut Ctx, args: &ExpectArgs) -> Result<()> {
    let p_max = args.p_max.unwrap_or(args.category_size);
    let curve = emit_expectation_curve(args.category_size, args.categories, p_max)?;
    let text = curve_text(&curve, ctx.format)?;
    ctx.write_text(&format!("curve.{}", ctx.format.extension()), &text)?;
    ctx.say(text.trim_end());
    match curve.crossing() {
        Some(p) => ctx.say(format!(
            "inter-category distance drops below overall at p = {p}"
        )),
        None => ctx.say(format!("no crossing for p <= {p_max}")),
    }
    Ok(())
}

pub fn ingest(ctx: &mut Ctx, args: &IngestArgs) -> Result<()> {
    for p in [&args.data, &args.items, &args.subset_file] {
        ctx.input(p);
    }
    ctx.run.seed = Some(args.seed);
    let table = parse_ratings(&args.data, &args.items).with_context(|| {
        format!(
            "reading {} and {}",
            args.data.display(),
            args.items.display()
        )
    })?;
    let spec_text = fs::read_to_string(&args.subset_file)
        .with_context(|| format!("reading {}", args.subset_file.display()))?;
    let subset = SubsetSpec::parse(&spec_text).resolve(&table)?;
    ctx.say(format!(
        "{} ratings from {} users; subset of {} titles",
        table.ratings.len(),
        table.users(),
        subset.items.len()
    ));
    let sim = build_rating_similarity(&table, &subset)?;
    if !(0.0..=1.0).contains(&args.epsilon) {
        bail!("--epsilon {} outside [0, 1]", args.epsilon);
    }
    let graph = threshold_graph(&sim, args.epsilon);
    ctx.save_graph("graph.edges", &graph)?;
    if args.dump_matrix {
        ctx.save_matrix(&sim)?;
    }
    ctx.say(format!(
        "epsilon {}: edge ratio {:.3}",
        args.epsilon,
        graph.edge_ratio()
    ));
    let found = run_detector(ctx, &graph, &args.detector, args.seed)?;
    let mut listing = String::new();
    for (k, members) in found.partition.groups().iter().enumerate() {
        let titles: Vec<String> = members
            .iter()
            .map(|&i| match &subset.groups[i] {
                Some(g) => format!("{} [{g}]", subset.titles[i]),
                None => subset.titles[i].clone(),
            })
            .collect();
        writeln!(listing, "Category {}: {}", k + 1, titles.join(", "))?;
    }
    let mut items = String::from("item_id,movie_id,title\n");
    for (k, (id, title)) in subset.items.iter().zip(&subset.titles).enumerate() {
        writeln!(items, "{k},{id},\"{}\"", title.replace('"', "\"\""))?;
    }
    ctx.write_text("items.csv", &items)?;
    ctx.write_text("categories.txt", &listing)?;
    ctx.say(listing.trim_end());
    Ok(())
}

pub fn pipeline(ctx: &mut Ctx, args: &PipelineArgs) -> Result<()> {
    let m = &args.model;
    ctx.run.seed = Some(m.seed);
    let cfg = RankingConfig::new(
        m.categories,
        m.category_size,
        m.p,
        m.voters,
        derive_seed(m.seed, stream::GENERATE, 0),
    )?;
    let (rankings, truth) = generate_rankings(&cfg)?;
    ctx.write_json("config.json", &cfg)?;
    ctx.write_with("rankings.csv", |w| io::write_rankings_csv(&rankings, w))?;
    ctx.write_with("truth.csv", |w| io::write_ground_truth_csv(&truth, w))?;
    let graph = build_graph_from(ctx, &rankings, Some(&truth), &args.threshold)?;
    let found = run_detector(
        ctx,
        &graph,
        &args.detector,
        derive_seed(m.seed, stream::DETECT, 0),
    )?;
    score(ctx, &truth, &found.partition, found.modularity)?;
    Ok(())
}
