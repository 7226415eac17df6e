use serde::Serialize;

use rankcat::detect::{detect, Detector, PropagationMode, WeightFunction};
use rankcat::eval::{nmi, EpsilonStrategy};
use rankcat::expectation::{emit_expectation_curve, estimate_alpha_beta, CurveRow};
use rankcat::seed::{derive_seed, stream};
use rankcat::{
    build_similarity_matrix, generate_rankings, generate_sbm, threshold_graph, GroundTruth,
    RankingConfig, SbmConfig, SimilarityGraph,
};

const MAX_ITERS: usize = 100;
const MAX_ITEMS: usize = 400;

pub struct DetectorSpec<'a> {
    pub algo: &'a str,
    pub weight: &'a str,
    pub mode: &'a str,
    pub sticky_ties: bool,
}

impl DetectorSpec<'_> {
    pub fn parse(&self) -> Result<Detector, String> {
        let mode = match self.mode {
            "sync" => PropagationMode::Sync,
            "async" => PropagationMode::Async,
            other => return Err(format!("unknown mode `{other}`")),
        };
        let weight = match self.weight {
            "linear" => WeightFunction::Linear,
            "exp" => WeightFunction::Exponential,
            "unit" => WeightFunction::Unit,
            other => return Err(format!("unknown weight `{other}`")),
        };
        let sticky_ties = self.sticky_ties;
        match self.algo {
            "cnm" => Ok(Detector::Cnm),
            "lp" => Ok(Detector::Lp { mode, sticky_ties }),
            "wlp" => Ok(Detector::Wlp {
                mode,
                weight,
                sticky_ties,
            }),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub rows: Vec<CurveRow>,
    pub crossing: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct GraphView {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub truth: Vec<usize>,
    pub found: Vec<usize>,
    pub algo: String,
    pub nmi: f64,
    pub modularity: Option<f64>,
    pub communities: usize,
    pub iterations: usize,
    pub converged: bool,
    pub edge_ratio: f64,
    pub epsilon: Option<f64>,
    /// Empirical same- and cross-category edge rates.
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn check_size(n: usize) -> Result<(), String> {
    if n > MAX_ITEMS {
        return Err(format!(
            "{n} items is more than the demo's limit of {MAX_ITEMS}"
        ));
    }
    Ok(())
}

pub fn expectation_curve(category_size: usize, p_max: usize) -> Result<String, String> {
    let curve = emit_expectation_curve(category_size, 2, p_max).map_err(|e| e.to_string())?;
    json(&Curve {
        crossing: curve.crossing(),
        rows: curve.rows,
    })
}

fn view(
    graph: &SimilarityGraph,
    truth: &GroundTruth,
    detector: &Detector,
    seed: u64,
) -> Result<GraphView, String> {
    let found = detect(graph, detector, MAX_ITERS, seed).map_err(|e| e.to_string())?;
    let score = nmi(&truth.to_partition(), &found.partition).map_err(|e| e.to_string())?;
    Ok(GraphView {
        n: graph.n(),
        edges: graph.edges().to_vec(),
        truth: truth.as_slice().to_vec(),
        found: found.partition.as_slice().to_vec(),
        algo: detector.label(),
        nmi: score.value,
        modularity: found.modularity,
        communities: found.partition.count(),
        iterations: found.iterations,
        converged: found.converged,
        edge_ratio: graph.edge_ratio(),
        epsilon: graph.threshold(),
        alpha: None,
        beta: None,
    })
}

pub fn sbm_detection(
    communities: usize,
    size: usize,
    p_in: f64,
    p_out: f64,
    detector: &DetectorSpec,
    seed: u64,
) -> Result<String, String> {
    check_size(communities * size)?;
    let detector = detector.parse()?;
    let config = SbmConfig::new(
        communities,
        size,
        p_in,
        p_out,
        derive_seed(seed, stream::GENERATE, 0),
    );
    let (graph, truth) = generate_sbm(&config).map_err(|e| e.to_string())?;
    json(&view(
        &graph,
        &truth,
        &detector,
        derive_seed(seed, stream::DETECT, 0),
    )?)
}

pub fn ranking_detection(
    categories: usize,
    category_size: usize,
    p: usize,
    voters: usize,
    epsilon: Option<f64>,
    detector: &DetectorSpec,
    seed: u64,
) -> Result<String, String> {
    check_size(categories * category_size)?;
    let detector = detector.parse()?;
    let config = RankingConfig::new(
        categories,
        category_size,
        p,
        voters,
        derive_seed(seed, stream::GENERATE, 0),
    )
    .map_err(|e| e.to_string())?;
    let (rankings, truth) = generate_rankings(&config).map_err(|e| e.to_string())?;
    let sim = build_similarity_matrix(&rankings);
    let eps = epsilon
        .map_or(EpsilonStrategy::ExpectedSimilarity, EpsilonStrategy::Fixed)
        .resolve(rankings.items())
        .map_err(|e| e.to_string())?;
    let graph = threshold_graph(&sim, eps);
    let ab = estimate_alpha_beta(&sim, &truth, eps).map_err(|e| e.to_string())?;
    let mut out = view(
        &graph,
        &truth,
        &detector,
        derive_seed(seed, stream::DETECT, 0),
    )?;
    out.alpha = Some(ab.alpha);
    out.beta = Some(ab.beta);
    json(&out)
}
