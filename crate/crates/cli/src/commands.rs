use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;

use anyhow::{anyhow, Context, Result};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use csd_core::analytics::{
    citation_window, correlation_by_diversity, trend_by_bin, write_correlation_csv, write_trend_csv,
    CorrelationMode, StatKind, TrendReport, TREND_YEARS,
};
use csd_core::corpus::{
    clean, largest_weak_component, parse_corpus, select_group, write_canonical, CleanPolicy,
    CleanReport,
};
use csd_core::diversity::{compute_all, read_diversity_csv, write_diversity_csv};
use csd_core::predictor::{
    assemble_features, split, write_features, FeatureSet, KnnModel, LinearModel, ModelReport,
    RegressionMetrics, SplitSpec, DEFAULT_K,
};
use csd_core::semantic::load_embeddings;
use csd_core::{
    CitationGraph, Corpus, CorrelationReport, DiversityResult, DiversityVariant, NodeId,
};

use crate::args::*;
use crate::config::{DiversitySettings, Input, Resolver, Selection};
use crate::output::{json_bytes, Sink};
use crate::usage;

/// Years of citations counted against diversity in correlations.
const CORRELATION_WINDOW: usize = 3;

fn init_threads(input: &Input) -> Result<()> {
    if let Some(n) = input.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting worker threads")?;
    }
    Ok(())
}

struct Loaded {
    corpus: Corpus,
    cleaning: Option<CleanReport>,
}

fn load(input: &Input) -> Result<Loaded> {
    init_threads(input)?;
    let corpus = parse_corpus(&input.corpus, input.format)
        .with_context(|| format!("reading corpus {}", input.corpus.display()))?;
    let ingest = &corpus.provenance().ingest;
    info!(
        "read {} records ({} malformed entries skipped)",
        corpus.len(),
        ingest.malformed
    );
    if input.cleaning == CleanPolicy::default() {
        return Ok(Loaded {
            corpus,
            cleaning: None,
        });
    }
    let (cleaned, report) = clean(&corpus, &input.cleaning).context("cleaning corpus")?;
    info!("cleaning kept {} of {} records", report.output_records, report.input_records);
    Ok(Loaded {
        corpus: cleaned,
        cleaning: Some(report),
    })
}

fn canonical_bytes(corpus: &Corpus) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_canonical(corpus, &mut buf)?;
    Ok(buf)
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    format: &'static str,
    records: usize,
    dangling_references: usize,
    ingest: &'a csd_core::corpus::IngestReport,
    cleaning: Option<&'a CleanReport>,
}

fn ingest_summary(loaded: &Loaded) -> IngestSummary<'_> {
    let prov = loaded.corpus.provenance();
    IngestSummary {
        format: prov.format.map_or("canonical", |f| f.as_str()),
        records: loaded.corpus.len(),
        dangling_references: loaded.corpus.dangling_references(),
        ingest: &prov.ingest,
        cleaning: loaded.cleaning.as_ref(),
    }
}

pub fn ingest(a: &IngestArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let loaded = load(&input)?;
    let sink = Sink::new(input.out.clone())?;
    sink.primary("corpus.jsonl", &canonical_bytes(&loaded.corpus)?)?;
    let summary = json_bytes(&ingest_summary(&loaded))?;
    if sink.has_dir() {
        sink.secondary("ingest_report.json", &summary)?;
    } else {
        eprint!("{}", String::from_utf8_lossy(&summary));
    }
    Ok(())
}

pub fn component(a: &ComponentArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    if a.edge_list && input.out.is_none() {
        return Err(usage("--edge-list needs --out"));
    }
    let loaded = load(&input)?;
    let comp = largest_weak_component(&loaded.corpus).context("finding largest component")?;
    info!("largest weak component: {} of {} records", comp.len(), loaded.corpus.len());
    let sink = Sink::new(input.out.clone())?;
    sink.primary("component.jsonl", &canonical_bytes(&comp)?)?;
    if a.edge_list {
        let graph = CitationGraph::build(&comp)?;
        let mut buf = Vec::new();
        graph.write_edge_list(&mut buf)?;
        sink.secondary("edges.tsv", &buf)?;
    }
    Ok(())
}

struct Prepared {
    loaded: Loaded,
    graph: CitationGraph,
    results: Vec<DiversityResult>,
    failures: usize,
}

fn targets(graph: &CitationGraph, corpus: &Corpus, sel: &Selection) -> Result<Vec<NodeId>> {
    let ids: Vec<String> = match sel {
        Selection::All => return Ok(graph.nodes().collect()),
        Selection::Ids(ids) => ids.clone(),
        Selection::Group(g) => select_group(corpus, g),
    };
    let mut nodes = ids
        .iter()
        .map(|id| graph.node(id).ok_or_else(|| anyhow!("target {id:?} is not in the corpus")))
        .collect::<Result<Vec<_>>>()?;
    nodes.sort();
    nodes.dedup();
    if nodes.is_empty() {
        return Err(anyhow!("no papers match the selection"));
    }
    Ok(nodes)
}

fn prepare(input: &Input, sel: &Selection, div: &DiversitySettings) -> Result<Prepared> {
    let loaded = load(input)?;
    let graph = CitationGraph::build(&loaded.corpus)?;
    let nodes = targets(&graph, &loaded.corpus, sel)?;
    if let Some(path) = &div.precomputed {
        let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
        let all: Vec<DiversityResult> = read_diversity_csv(BufReader::new(file), &graph)
            .with_context(|| format!("reading {}", path.display()))?;
        let wanted: BTreeSet<NodeId> = nodes.into_iter().collect();
        let results = all.into_iter().filter(|r| wanted.contains(&r.target)).collect();
        return Ok(Prepared {
            loaded,
            graph,
            results,
            failures: 0,
        });
    }
    let table = match &div.embeddings {
        None => None,
        Some(path) => {
            let (table, cov) = load_embeddings(path, &loaded.corpus)
                .with_context(|| format!("reading embeddings {}", path.display()))?;
            if !cov.missing.is_empty() {
                warn!("{} papers have no embedding", cov.missing.len());
            }
            Some(table)
        }
    };
    let outcome = compute_all(&graph, table.as_ref(), &nodes, &div.variants, &div.policy)?;
    for f in outcome.failures.iter().take(5) {
        warn!("paper {}: {}", f.target_id, f.error);
    }
    if !outcome.failures.is_empty() {
        warn!("{} targets failed", outcome.failures.len());
    }
    Ok(Prepared {
        loaded,
        graph,
        results: outcome.results,
        failures: outcome.failures.len(),
    })
}

fn variants_present(results: &[DiversityResult], requested: &[DiversityVariant]) -> Vec<DiversityVariant> {
    requested
        .iter()
        .copied()
        .filter(|&v| results.iter().any(|r| r.get(v).is_some()))
        .collect()
}

pub fn sd(a: &SdArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let sel = r.selection(&a.select)?;
    let div = r.diversity(&a.diversity, None)?;
    let p = prepare(&input, &sel, &div)?;
    let mut buf = Vec::new();
    write_diversity_csv(&p.results, &mut buf)?;
    Sink::new(input.out.clone())?.primary("diversity.csv", &buf)
}

fn correlation_points(p: &Prepared, v: DiversityVariant) -> Result<Vec<(usize, f64)>> {
    let mut pts = Vec::new();
    for res in &p.results {
        let Some(sd) = res.get(v) else { continue };
        if let Some(counts) = citation_window(&p.graph, res.target, CORRELATION_WINDOW)? {
            pts.push((sd, counts.iter().map(|&c| f64::from(c)).sum()));
        }
    }
    Ok(pts)
}

fn correlations(
    p: &Prepared,
    variants: &[DiversityVariant],
    stats: &[StatKind],
) -> Vec<(DiversityVariant, StatKind, CorrelationMode, Result<CorrelationReport>)> {
    let mut out = Vec::new();
    for &v in variants {
        let pts = correlation_points(p, v);
        for &stat in stats {
            for mode in [CorrelationMode::Grouped, CorrelationMode::PerPaper] {
                let rep = match &pts {
                    Ok(pts) => correlation_by_diversity(pts, stat, mode)
                        .map(|r| r.with_variant(v))
                        .map_err(|e| anyhow!("variant {v}: {e}")),
                    Err(e) => Err(anyhow!("variant {v}: {e}")),
                };
                out.push((v, stat, mode, rep));
            }
        }
    }
    out
}

fn stat_list(stat: Option<StatKind>) -> Vec<StatKind> {
    stat.map_or_else(|| StatKind::ALL.to_vec(), |s| vec![s])
}

pub fn correlate(a: &CorrelateArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let sel = r.selection(&a.select)?;
    let div = r.diversity(&a.diversity, Some(&a.precomputed))?;
    let stats = stat_list(r.stat(&a.stat)?);
    let p = prepare(&input, &sel, &div)?;
    let variants = variants_present(&p.results, &div.variants);
    if variants.is_empty() {
        return Err(anyhow!("no diversity values to correlate"));
    }
    let reports = correlations(&p, &variants, &stats)
        .into_iter()
        .map(|(.., rep)| rep)
        .collect::<Result<Vec<_>>>()?;
    let sink = Sink::new(input.out.clone())?;
    let mut csv = Vec::new();
    write_correlation_csv(&reports, &mut csv)?;
    sink.secondary("correlation.csv", &csv)?;
    let summaries: Vec<_> = reports.iter().map(CorrelationReport::summary).collect();
    sink.primary("correlation.json", &json_bytes(&summaries)?)
}

fn trend_report(p: &Prepared, v: DiversityVariant) -> Result<TrendReport<f64>> {
    let mut results = Vec::new();
    let mut series = Vec::new();
    for res in &p.results {
        if let Some(counts) = citation_window(&p.graph, res.target, TREND_YEARS)? {
            results.push(res.clone());
            series.push(counts.iter().map(|&c| f64::from(c)).collect());
        }
    }
    let skipped = p.results.len() - results.len();
    if skipped > 0 {
        info!("{skipped} papers without a year left out of the trends");
    }
    Ok(trend_by_bin(&results, &series, v)?)
}

pub fn trends(a: &TrendsArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let sel = r.selection(&a.select)?;
    let mut div = r.diversity(&a.diversity, Some(&a.precomputed))?;
    let variant = match (a.diversity.variant.as_deref(), div.variants.as_slice()) {
        (Some(_), [v]) => *v,
        (Some(_), _) => return Err(usage("trends takes a single --variant")),
        (None, _) => DiversityVariant::Plain,
    };
    div.variants = vec![variant];
    let p = prepare(&input, &sel, &div)?;
    let report = trend_report(&p, variant)?;
    for bin in csd_core::analytics::DiversityBin::ALL {
        if !report.series.iter().any(|s| s.bin == bin) {
            info!("no papers in the {} diversity bin", bin.as_str());
        }
    }
    let mut buf = Vec::new();
    write_trend_csv(&report, &mut buf)?;
    Sink::new(input.out.clone())?.primary("trends.csv", &buf)
}

struct Fitted {
    set: FeatureSet,
    reports: Vec<ModelReport>,
}

fn fit_models(set: FeatureSet, seed: u64) -> Result<Fitted> {
    let label = set.label();
    let context = || format!("{} horizon {}", label, set.horizon);
    let (train, test) = split(&set.rows, SplitSpec::new(seed)).with_context(context)?;
    let (xtr, ytr) = FeatureSet::design::<f64>(&train);
    let (xte, yte) = FeatureSet::design::<f64>(&test);
    let linear = LinearModel::fit(&xtr, &ytr).with_context(context)?;
    if linear.rank_deficient {
        info!("{}: rank-deficient design, using the minimum-norm fit", context());
    }
    let knn = KnnModel::fit(&xtr, &ytr, DEFAULT_K).with_context(context)?;
    let mut reports = Vec::new();
    for (name, pred) in [("linear", linear.predict(&xte)?), ("knn", knn.predict(&xte)?)] {
        let m = RegressionMetrics::evaluate(&pred, &yte)?;
        reports.push(ModelReport {
            model: name.to_string(),
            horizon: set.horizon,
            variant_or_baseline: label.to_string(),
            r2: m.r_squared,
            mse: m.mse,
            n_train: train.len(),
            n_test: test.len(),
            seed,
        });
    }
    Ok(Fitted { set, reports })
}

fn predictions(p: &Prepared, variants: &[DiversityVariant], horizons: &[usize], seed: u64) -> Vec<Result<Fitted>> {
    let mut jobs: Vec<(Option<DiversityVariant>, usize)> = Vec::new();
    for &h in horizons {
        jobs.push((None, h));
        jobs.extend(variants.iter().map(|&v| (Some(v), h)));
    }
    jobs.par_iter()
        .map(|&(v, h)| {
            let set = assemble_features(&p.loaded.corpus, &p.graph, &p.results, v, h)?;
            fit_models(set, seed)
        })
        .collect()
}

pub fn predict(a: &PredictArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let sel = r.selection(&a.select)?;
    let div = r.diversity(&a.diversity, Some(&a.precomputed))?;
    let horizons = r.horizons(&a.model)?;
    let seed = r.seed(&a.model)?;
    let p = prepare(&input, &sel, &div)?;
    let variants = variants_present(&p.results, &div.variants);
    let fitted = predictions(&p, &variants, &horizons, seed)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let sink = Sink::new(input.out.clone())?;
    let mut reports = Vec::new();
    for f in fitted {
        let mut buf = Vec::new();
        write_features(&f.set, &mut buf)?;
        sink.secondary(&format!("features_{}_h{}.csv", f.set.label(), f.set.horizon), &buf)?;
        reports.extend(f.reports);
    }
    sink.primary("metrics.json", &json_bytes(&reports)?)
}

fn variant_stats(results: &[DiversityResult], v: DiversityVariant) -> Value {
    let vals: Vec<usize> = results.iter().filter_map(|r| r.get(v)).collect();
    if vals.is_empty() {
        return json!({ "variant": v, "n": 0 });
    }
    let mean = vals.iter().sum::<usize>() as f64 / vals.len() as f64;
    json!({
        "variant": v,
        "n": vals.len(),
        "mean": mean,
        "min": vals.iter().min(),
        "max": vals.iter().max(),
    })
}

pub fn report(a: &ReportArgs) -> Result<()> {
    let r = Resolver::new(&a.input)?;
    let input = r.input(&a.input)?;
    let sel = r.selection(&a.select)?;
    let div = r.diversity(&a.diversity, Some(&a.precomputed))?;
    let stats = stat_list(r.stat(&a.stat)?);
    let horizons = r.horizons(&a.model)?;
    let seed = r.seed(&a.model)?;
    let p = prepare(&input, &sel, &div)?;
    let variants = variants_present(&p.results, &div.variants);

    let correlations: Vec<Value> = correlations(&p, &variants, &stats)
        .into_iter()
        .map(|(v, stat, mode, rep)| match rep {
            Ok(rep) => serde_json::to_value(rep.summary()).unwrap_or(Value::Null),
            Err(e) => json!({
                "variant": v, "stat": stat, "mode": mode, "error": format!("{e:#}"),
            }),
        })
        .collect();
    let trends: Vec<Value> = variants
        .iter()
        .map(|&v| match trend_report(&p, v) {
            Ok(t) => json!({
                "variant": v,
                "unbinned": t.unbinned,
                "bins": t.series.iter().map(|s| json!({
                    "bin": s.bin,
                    "n_papers": s.n_papers,
                    "mean_normalized": s.mean_normalized,
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "variant": v, "error": format!("{e:#}") }),
        })
        .collect();
    let mut models = Vec::new();
    for f in predictions(&p, &variants, &horizons, seed) {
        match f {
            Ok(f) => models.extend(f.reports.iter().map(|m| serde_json::to_value(m).unwrap_or(Value::Null))),
            Err(e) => models.push(json!({ "error": format!("{e:#}") })),
        }
    }
    let doc = json!({
        "seed": seed,
        "corpus": {
            "summary": ingest_summary(&p.loaded),
            "nodes": p.graph.node_count(),
            "edges": p.graph.edge_count(),
        },
        "diversity": {
            "targets": p.results.len() + p.failures,
            "evaluated": p.results.len(),
            "failed": p.failures,
            "theta_policy": format!("{:?}/{:?}", div.policy.theta1_rule, div.policy.theta2_rule),
            "theta1": div.policy.theta1_override,
            "theta2": div.policy.theta2_override,
            "variants": variants.iter().map(|&v| variant_stats(&p.results, v)).collect::<Vec<_>>(),
        },
        "correlations": correlations,
        "trends": trends,
        "predictions": models,
    });
    Sink::new(input.out.clone())?.primary("report.json", &json_bytes(&doc)?)
}
