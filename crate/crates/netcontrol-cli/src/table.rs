//! Aggregated result tables and their CSV form.

use netcontrol::error::{Error, Result};
use std::path::Path;

/// One aggregate row: mean/std of a metric over the (realization, resample)
/// cells that produced data; `skipped` counts cells lost to singular Gramians
/// or timeouts, so samples + skipped = R * S always.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub preset: String,
    pub strategy: String,
    pub m: usize,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
    pub samples: usize,
    pub skipped: usize,
    pub realizations: usize,
    pub resamples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

pub const CSV_HEADER: &str =
    "experiment,preset,strategy,m,metric,mean,std,samples,skipped,realizations,resamples,seed";

impl ResultTable {
    /// Deterministic row order: sorted by every key column.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (&a.experiment, &a.preset, &a.strategy, a.m, &a.metric).cmp(&(
                &b.experiment,
                &b.preset,
                &b.strategy,
                b.m,
                &b.metric,
            ))
        });
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.experiment,
                r.preset,
                r.strategy,
                r.m,
                r.metric,
                r.mean,
                r.std,
                r.samples,
                r.skipped,
                r.realizations,
                r.resamples,
                r.seed
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h == CSV_HEADER => {}
            Some((_, h)) => {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected header '{h}'"),
                })
            }
            None => return Err(Error::Parse { line: 1, msg: "empty file".into() }),
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected 12 fields, found {}", f.len()),
                });
            }
            let parse_err = |what: &str, e: String| Error::Parse {
                line: idx + 1,
                msg: format!("bad {what}: {e}"),
            };
            rows.push(ResultRow {
                experiment: f[0].to_string(),
                preset: f[1].to_string(),
                strategy: f[2].to_string(),
                m: f[3].parse().map_err(|e: std::num::ParseIntError| parse_err("m", e.to_string()))?,
                metric: f[4].to_string(),
                mean: f[5].parse().map_err(|e: std::num::ParseFloatError| parse_err("mean", e.to_string()))?,
                std: f[6].parse().map_err(|e: std::num::ParseFloatError| parse_err("std", e.to_string()))?,
                samples: f[7].parse().map_err(|e: std::num::ParseIntError| parse_err("samples", e.to_string()))?,
                skipped: f[8].parse().map_err(|e: std::num::ParseIntError| parse_err("skipped", e.to_string()))?,
                realizations: f[9].parse().map_err(|e: std::num::ParseIntError| parse_err("realizations", e.to_string()))?,
                resamples: f[10].parse().map_err(|e: std::num::ParseIntError| parse_err("resamples", e.to_string()))?,
                seed: f[11].parse().map_err(|e: std::num::ParseIntError| parse_err("seed", e.to_string()))?,
            });
        }
        Ok(ResultTable { rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(metric: &str, mean: f64) -> ResultRow {
        ResultRow {
            experiment: "fig2".into(),
            preset: "cyan".into(),
            strategy: "random".into(),
            m: 10,
            metric: metric.into(),
            mean,
            std: 0.25,
            samples: 25,
            skipped: 0,
            realizations: 5,
            resamples: 5,
            seed: 42,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::default();
        assert_eq!(t.to_csv(), format!("{CSV_HEADER}\n"));
        let back = ResultTable::from_csv(&t.to_csv()).unwrap();
        assert!(back.rows.is_empty());
    }

    #[test]
    fn round_trip_single_row() {
        let mut t = ResultTable::default();
        t.rows.push(row("lambda_min", 1.2345678901234567e-9));
        let text = t.to_csv();
        let back = ResultTable::from_csv(&text).unwrap();
        assert_eq!(t, back);
        // re-emission is byte identical
        assert_eq!(text, back.to_csv());
    }

    #[test]
    fn large_round_trip_byte_identical() {
        let mut t = ResultTable::default();
        for i in 0..1000 {
            let mut r = row("trace", (i as f64).sqrt() * 1.0e-3 + 1.0 / (i + 1) as f64);
            r.m = i % 37 + 1;
            r.metric = ["lambda_min", "trace", "trace_inv", "cond"][i % 4].into();
            t.rows.push(r);
        }
        t.sort();
        let text = t.to_csv();
        let back = ResultTable::from_csv(&text).unwrap();
        assert_eq!(text, back.to_csv());
    }

    #[test]
    fn nan_means_survive_round_trip() {
        let mut t = ResultTable::default();
        let mut r = row("trace_inv", f64::NAN);
        r.samples = 0;
        r.skipped = 25;
        t.rows.push(r);
        let back = ResultTable::from_csv(&t.to_csv()).unwrap();
        assert!(back.rows[0].mean.is_nan());
        assert_eq!(t.to_csv(), back.to_csv());
    }
}
