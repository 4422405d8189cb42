//! Grid-file ingestion: parse, validate, deduplicate, compact node ids.

use std::collections::BTreeMap;
use std::path::Path;

use netcontrol::error::{Error, Result};
use netcontrol::netgen::edgelist;

/// A parsed grid: node ids compacted to 0..n-1, duplicates merged.
#[derive(Debug, Clone)]
pub struct IngestResult {
    pub n: usize,
    /// Deduplicated directed edges (src, dst, summed weight) in compacted ids.
    pub edges: Vec<(usize, usize, f64)>,
    /// id_map[compacted] = original id.
    pub id_map: Vec<usize>,
    pub duplicate_count: usize,
    /// Counts declared in a header comment, when present.
    pub declared: Option<(usize, usize)>,
}

/// Reads an edge-list file, honoring an optional declaration header of the form
/// `# nodes=N edges=E`. Duplicate (src, dst) pairs are summed with a warning
/// count; node ids are compacted preserving ascending order of the originals.
pub fn ingest_grid(path: &Path) -> Result<IngestResult> {
    let raw = edgelist::read_edge_list(path)?;
    if raw.is_empty() {
        return Err(Error::invalid(format!(
            "{}: no edges found (comments only?)",
            path.display()
        )));
    }
    let declared = read_declared_counts(path)?;

    let mut ids: Vec<usize> = raw.iter().flat_map(|&(s, d, _)| [s, d]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index_of: BTreeMap<usize, usize> =
        ids.iter().enumerate().map(|(i, &orig)| (orig, i)).collect();

    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut duplicate_count = 0usize;
    for &(s, d, w) in &raw {
        let key = (index_of[&s], index_of[&d]);
        match merged.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                duplicate_count += 1;
                *e.get_mut() += w;
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(w);
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> =
        merged.into_iter().map(|((s, d), w)| (s, d, w)).collect();

    let result = IngestResult {
        n: ids.len(),
        edges,
        id_map: ids,
        duplicate_count,
        declared,
    };
    if let Some((dn, de)) = declared {
        if dn != result.n || de != result.edges.len() {
            return Err(Error::invalid(format!(
                "{}: declared nodes={dn} edges={de}, found nodes={} edges={}",
                path.display(),
                result.n,
                result.edges.len()
            )));
        }
    }
    Ok(result)
}

fn read_declared_counts(path: &Path) -> Result<Option<(usize, usize)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    for line in text.lines() {
        let line = line.trim();
        if !line.starts_with('#') {
            break;
        }
        let mut nodes = None;
        let mut edges = None;
        for tok in line.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("nodes=") {
                nodes = v.parse::<usize>().ok();
            }
            if let Some(v) = tok.strip_prefix("edges=") {
                edges = v.parse::<usize>().ok();
            }
        }
        if let (Some(n), Some(e)) = (nodes, edges) {
            return Ok(Some((n, e)));
        }
    }
    Ok(None)
}
