use std::io::{Read, Write};

use crate::graph::CitationGraph;
use crate::scalar::Real;

use super::{DiversityError, DiversityResult, DiversityVariant, VariantCounts};

pub const DIVERSITY_CSV_HEADER: [&str; 10] = [
    "target_id", "n_refs", "sd_r", "sd_c", "sd_ss", "sd_cs", "sd_scs", "sd_css", "theta1", "theta2",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per result; variants that were not evaluated are left empty.
pub fn write_diversity_csv<F: Real, W: Write>(
    results: &[DiversityResult<F>],
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DIVERSITY_CSV_HEADER)?;
    for r in results {
        let mut row = vec![r.target_id.clone(), r.n_refs.to_string()];
        row.extend(DiversityVariant::ALL.iter().map(|&v| opt(r.get(v))));
        row.push(opt(r.theta1));
        row.push(opt(r.theta2));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_diversity_csv`], resolving ids against
/// `graph`. Edge counts are not part of the table and come back empty.
pub fn read_diversity_csv<F: Real, R: Read>(
    input: R,
    graph: &CitationGraph,
) -> Result<Vec<DiversityResult<F>>, DiversityError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| DiversityError::Table(e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != DIVERSITY_CSV_HEADER {
        return Err(DiversityError::Table(format!("unexpected header {:?}", header)));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| DiversityError::Table(e.to_string()))?;
        let bad = |field: &str| DiversityError::Table(format!("line {line}: bad {field}"));
        let target_id = rec[0].to_string();
        let target = graph
            .node(&target_id)
            .ok_or_else(|| DiversityError::Table(format!("line {line}: unknown paper {target_id:?}")))?;
        let n_refs: usize = rec[1].parse().map_err(|_| bad("n_refs"))?;
        let mut counts = VariantCounts::default();
        for (k, v) in DiversityVariant::ALL.into_iter().enumerate() {
            let cell = &rec[2 + k];
            if !cell.is_empty() {
                counts.set(v, cell.parse().map_err(|_| bad(v.column()))?);
            }
        }
        let theta = |cell: &str, name: &str| -> Result<Option<F>, DiversityError> {
            if cell.is_empty() {
                Ok(None)
            } else {
                cell.parse::<f64>()
                    .map(|x| Some(F::from_f64_lossy(x)))
                    .map_err(|_| bad(name))
            }
        };
        out.push(DiversityResult {
            target,
            target_id,
            n_refs,
            counts,
            edge_counts: VariantCounts::default(),
            theta1: theta(&rec[8], "theta1")?,
            theta2: theta(&rec[9], "theta2")?,
        });
    }
    Ok(out)
}
