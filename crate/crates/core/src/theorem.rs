//! Instance verification of `dgon(G) >= tw(G)` over a suite of graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::gonality;
use crate::graph::MultiGraph;
use crate::treewidth;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremRow {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub dgon: i64,
    pub tw: usize,
}

impl TheoremRow {
    pub fn gap(&self) -> i64 {
        self.dgon - self.tw as i64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
    /// Ids of rows with `dgon < tw`.
    pub violations: Vec<String>,
    pub gap_histogram: BTreeMap<i64, usize>,
    /// Items whose solvers failed, with the error message.
    pub errors: Vec<(String, String)>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.errors.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "{}, {}, {}, {}, {}, {}", r.id, r.n, r.m, r.dgon, r.tw, r.gap());
        }
        for (id, e) in &self.errors {
            let _ = writeln!(out, "{id}, error: {e}");
        }
        let _ = writeln!(out, "graphs: {}", self.rows.len() + self.errors.len());
        let _ = writeln!(out, "violations: {}", self.violations.len());
        let _ = writeln!(out, "errors: {}", self.errors.len());
        for (gap, count) in &self.gap_histogram {
            let _ = writeln!(out, "gap {gap}: {count}");
        }
        out
    }
}

fn check_one(g: &MultiGraph) -> Result<(i64, usize), String> {
    let dgon = gonality::gonality(g, None).map_err(|e| e.to_string())?.value;
    let (tw, _) = treewidth::treewidth_exact(g, &[]).map_err(|e| e.to_string())?;
    Ok((dgon, tw))
}

/// Computes gonality and treewidth of every graph (in parallel) and collects
/// rows in input order. Solver failures are recorded per item.
pub fn verify_main_theorem(suite: &[(String, MultiGraph)]) -> TheoremReport {
    let results: Vec<_> = suite.par_iter().map(|(_, g)| check_one(g)).collect();
    let mut report = TheoremReport::default();
    for ((id, g), res) in suite.iter().zip(results) {
        match res {
            Ok((dgon, tw)) => {
                let row = TheoremRow { id: id.clone(), n: g.vertex_count(), m: g.edge_count(), dgon, tw };
                if row.gap() < 0 {
                    report.violations.push(id.clone());
                }
                *report.gap_histogram.entry(row.gap()).or_default() += 1;
                report.rows.push(row);
            }
            Err(e) => report.errors.push((id.clone(), e)),
        }
    }
    report
}
