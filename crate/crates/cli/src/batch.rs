use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use ulrich_core::ulrich::{classify_trichotomy_parallel, reports_to_csv};
use ulrich_core::{Divisor, Error, Surface, UlrichSystem};

use crate::Format;

fn default_outputs() -> Vec<Format> {
    vec![Format::Json]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    surface: String,
    polarization: Vec<i64>,
    r_max: i64,
    bound: i64,
    #[serde(default = "default_outputs")]
    outputs: Vec<Format>,
}

struct Job {
    h: Divisor,
    r_max: i64,
    bound: i64,
    outputs: Vec<Format>,
}

fn validate(i: usize, e: Entry) -> Result<Job> {
    let ctx = || format!("batch entry {i}");
    let s: Surface = e.surface.parse().with_context(ctx)?;
    let h = Divisor::new(s, e.polarization).with_context(ctx)?;
    UlrichSystem::build(s, &h, 1).with_context(ctx)?;
    if e.r_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "r_max must be positive, got {}",
            e.r_max
        )))
        .with_context(ctx);
    }
    if e.bound < 0 {
        return Err(Error::InvalidArgument(format!(
            "bound must be non-negative, got {}",
            e.bound
        )))
        .with_context(ctx);
    }
    if e.outputs.is_empty() {
        return Err(Error::InvalidArgument("outputs must not be empty".into())).with_context(ctx);
    }
    Ok(Job {
        h,
        r_max: e.r_max,
        bound: e.bound,
        outputs: e.outputs,
    })
}

/// Validates every entry, then classifies them in order. Output is grouped
/// by format: one JSON array, one CSV table under a single header, then the
/// text tables, each present only if some entry requested it.
pub(crate) fn run(path: &Path, jobs: usize) -> Result<String> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let entries: Vec<Entry> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("batch file {}: {e}", path.display())))?;
    let work = entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| validate(i, e))
        .collect::<Result<Vec<_>>>()?;

    let mut json = Vec::new();
    let mut csv = Vec::new();
    let mut tables = Vec::new();
    for job in &work {
        let rep = classify_trichotomy_parallel(job.h.surface(), &job.h, job.r_max, job.bound, jobs)?;
        for f in [Format::Json, Format::Csv, Format::Table] {
            if !job.outputs.contains(&f) {
                continue;
            }
            match f {
                Format::Json => json.push(rep.clone()),
                Format::Csv => csv.push(rep.clone()),
                Format::Table => tables.push(rep.to_table()),
            }
        }
    }

    let mut sections = Vec::new();
    if !json.is_empty() {
        let mut s = serde_json::to_string_pretty(&json).map_err(|e| Error::Internal(format!("batch json: {e}")))?;
        s.push('\n');
        sections.push(s);
    }
    if !csv.is_empty() {
        sections.push(reports_to_csv(&csv)?);
    }
    sections.extend(tables);
    Ok(sections.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(json: &str) -> Result<Job> {
        validate(0, serde_json::from_str(json).unwrap())
    }

    #[test]
    fn outputs_default_to_json() {
        let job = entry(r#"{"surface": "p2", "polarization": [1], "r_max": 2, "bound": 3}"#).unwrap();
        assert!(job.outputs == vec![Format::Json]);
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(entry(r#"{"surface": "p2", "polarization": [1], "r_max": 0, "bound": 3}"#).is_err());
        assert!(entry(r#"{"surface": "p2", "polarization": [1], "r_max": 1, "bound": -1}"#).is_err());
        assert!(entry(r#"{"surface": "p2", "polarization": [0], "r_max": 1, "bound": 1}"#).is_err());
        assert!(entry(r#"{"surface": "p2", "polarization": [1], "r_max": 1, "bound": 1, "outputs": []}"#).is_err());
        assert!(serde_json::from_str::<Entry>(
            r#"{"surface": "p2", "polarization": [1], "r_max": 1, "bound": 1, "x": 1}"#
        )
        .is_err());
    }
}
