use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use csd_core::analytics::StatKind;
use csd_core::corpus::{CleanPolicy, GroupSpec};
use csd_core::predictor::HORIZONS;
use csd_core::{CorpusFormat, DiversityVariant, ThresholdPolicy, VenueRank};

use crate::args::{DiversityArgs, InputArgs, ModelArgs, PrecomputedArgs, SelectArgs, StatArgs};
use crate::usage;

/// Contents of a `--config` file. Every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub format: Option<String>,
    pub embeddings: Option<PathBuf>,
    pub diversity: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub cleaning: Option<CleanPolicy>,
    pub targets: Option<Vec<String>>,
    pub group: Option<GroupSpec>,
    pub theta_policy: Option<String>,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
    pub variants: Option<Vec<String>>,
    pub stat: Option<String>,
    pub horizons: Option<Vec<usize>>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.corpus, &mut cfg.embeddings, &mut cfg.diversity, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub struct Input {
    pub corpus: PathBuf,
    pub format: CorpusFormat,
    pub cleaning: CleanPolicy,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Selection {
    All,
    Ids(Vec<String>),
    Group(GroupSpec),
}

#[derive(Debug, Clone)]
pub struct DiversitySettings {
    pub embeddings: Option<PathBuf>,
    pub policy: ThresholdPolicy,
    pub variants: Vec<DiversityVariant>,
    pub precomputed: Option<PathBuf>,
}

/// Flags merged over the config file.
pub struct Resolver {
    cfg: RunConfig,
}

impl Resolver {
    pub fn new(input: &InputArgs) -> Result<Self> {
        let cfg = match &input.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(Resolver { cfg })
    }

    pub fn input(&self, a: &InputArgs) -> Result<Input> {
        let corpus = a
            .corpus
            .clone()
            .or_else(|| self.cfg.corpus.clone())
            .ok_or_else(|| usage("--corpus is required"))?;
        let format = match a.format.as_ref().or(self.cfg.format.as_ref()) {
            None => CorpusFormat::Canonical,
            Some(f) => f.parse().map_err(|e| usage(format!("--format: {e}")))?,
        };
        let mut cleaning = self.cfg.cleaning.clone().unwrap_or_default();
        cleaning.require_title |= a.require_title;
        cleaning.require_abstract |= a.require_abstract;
        cleaning.drop_dangling_refs |= a.drop_dangling_refs;
        if let Some(m) = a.min_references {
            cleaning.min_references = m;
        }
        let threads = a.threads.or(self.cfg.threads);
        if threads == Some(0) {
            return Err(usage("--threads must be at least 1"));
        }
        Ok(Input {
            corpus,
            format,
            cleaning,
            out: a.out.clone().or_else(|| self.cfg.out.clone()),
            threads,
        })
    }

    pub fn selection(&self, a: &SelectArgs) -> Result<Selection> {
        if let Some(ids) = a.targets.clone().or_else(|| self.cfg.targets.clone()) {
            return Ok(Selection::Ids(ids));
        }
        let mut group = self.cfg.group.clone().unwrap_or_default();
        if a.year.is_some() {
            group.year = a.year;
        }
        if a.venue.is_some() {
            group.venue = a.venue.clone();
        }
        if let Some(r) = &a.rank {
            let rank: VenueRank = r.parse().map_err(|e| usage(format!("--rank: {e}")))?;
            group.rank = Some(rank);
        }
        Ok(if group.validate().is_ok() {
            Selection::Group(group)
        } else {
            Selection::All
        })
    }

    pub fn diversity(
        &self,
        a: &DiversityArgs,
        pre: Option<&PrecomputedArgs>,
    ) -> Result<DiversitySettings> {
        let embeddings = a.embeddings.clone().or_else(|| self.cfg.embeddings.clone());
        let base = match a.theta_policy.as_ref().or(self.cfg.theta_policy.as_ref()).map(String::as_str) {
            None | Some("dblp") => ThresholdPolicy::dblp(),
            Some("pubmed") => ThresholdPolicy::pubmed(),
            Some(other) => {
                return Err(usage(format!("--theta-policy: expected dblp or pubmed, got {other:?}")))
            }
        };
        let theta1 = a.theta1.or(self.cfg.theta1);
        let theta2 = a.theta2.or(self.cfg.theta2);
        for (name, t) in [("--theta1", theta1), ("--theta2", theta2)] {
            if t.is_some_and(|t| !t.is_finite()) {
                return Err(usage(format!("{name} must be finite")));
            }
        }
        let names = a.variant.clone().or_else(|| self.cfg.variants.clone());
        let variants = match names {
            Some(names) => parse_variants(&names)?,
            None if embeddings.is_some() => DiversityVariant::ALL.to_vec(),
            None => DiversityVariant::ALL
                .into_iter()
                .filter(|v| !v.needs_similarity())
                .collect(),
        };
        let precomputed = pre
            .and_then(|p| p.diversity.clone())
            .or_else(|| self.cfg.diversity.clone());
        if precomputed.is_none() && embeddings.is_none() {
            if let Some(v) = variants.iter().find(|v| v.needs_similarity()) {
                return Err(usage(format!("variant {v} needs --embeddings")));
            }
        }
        Ok(DiversitySettings {
            embeddings,
            policy: base.with_overrides(theta1, theta2),
            variants,
            precomputed,
        })
    }

    /// `None` means both statistics.
    pub fn stat(&self, a: &StatArgs) -> Result<Option<StatKind>> {
        a.stat
            .as_ref()
            .or(self.cfg.stat.as_ref())
            .map(|s| s.parse().map_err(|e| usage(format!("--stat: {e}"))))
            .transpose()
    }

    pub fn horizons(&self, a: &ModelArgs) -> Result<Vec<usize>> {
        let mut hs = a
            .horizon
            .clone()
            .or_else(|| self.cfg.horizons.clone())
            .unwrap_or_else(|| HORIZONS.to_vec());
        if let Some(h) = hs.iter().find(|h| !HORIZONS.contains(h)) {
            return Err(usage(format!("--horizon {h}: expected 1, 5 or 10")));
        }
        hs.sort_unstable();
        hs.dedup();
        Ok(hs)
    }

    pub fn seed(&self, a: &ModelArgs) -> Result<u64> {
        a.seed
            .or(self.cfg.seed)
            .ok_or_else(|| usage("--seed is required"))
    }
}

fn parse_variants(names: &[String]) -> Result<Vec<DiversityVariant>> {
    let mut out = Vec::new();
    for n in names {
        let v: DiversityVariant = n
            .parse()
            .map_err(|e| usage(format!("--variant: {e}")))?;
        if !out.contains(&v) {
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(usage("--variant: no variant given"));
    }
    out.sort();
    Ok(out)
}
