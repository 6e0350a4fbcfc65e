//! Path-complexity metrics over association graphs and a per-stage timing
//! harness for the rewriting pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::UmlModel;
use crate::query::{RewriteOptions, Rewriter, Stage};

/// Simple-path statistics. Lengths count nodes, endpoints included; a journey
/// is an ordered pair of distinct classes joined by at least one path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PathMetrics {
    pub longest_path: usize,
    pub journey_count: usize,
    pub path_count: usize,
    /// Sum of node counts over all paths.
    pub node_total: usize,
    /// Node cap the enumeration ran under.
    pub max_nodes: usize,
}

impl PathMetrics {
    pub fn avg_paths_per_journey(&self) -> f64 {
        ratio(self.path_count, self.journey_count)
    }

    pub fn avg_nodes_per_path(&self) -> f64 {
        ratio(self.node_total, self.path_count)
    }

    pub fn to_text(&self) -> String {
        format!(
            "max nodes             {}\nlongest path          {}\njourneys              {}\npaths                 {}\navg paths per journey {:.4}\navg nodes per path    {:.4}\n",
            self.max_nodes,
            self.longest_path,
            self.journey_count,
            self.path_count,
            self.avg_paths_per_journey(),
            self.avg_nodes_per_path()
        )
    }

    pub fn to_csv(&self) -> String {
        format!(
            "maxNodes,longestPath,journeyCount,pathCount,avgPathsPerJourney,avgNodesPerPath\n{},{},{},{},{:.6},{:.6}\n",
            self.max_nodes,
            self.longest_path,
            self.journey_count,
            self.path_count,
            self.avg_paths_per_journey(),
            self.avg_nodes_per_path()
        )
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Metrics over the class graph of `model`: one edge per source/target pair
/// reached by an own or inherited association.
pub fn path_metrics(model: &UmlModel, max_nodes: usize) -> PathMetrics {
    let names: Vec<&str> = model.classes.iter().map(|c| c.name.as_str()).collect();
    let id: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let adjacency: Vec<Vec<usize>> = names
        .iter()
        .map(|n| {
            let targets: BTreeSet<usize> =
                model.outgoing(n).iter().filter_map(|a| id.get(a.target.as_str()).copied()).collect();
            targets.into_iter().collect()
        })
        .collect();
    graph_path_metrics(&adjacency, max_nodes)
}

/// Metrics over an adjacency list; repeated and self edges are ignored.
pub fn graph_path_metrics(adjacency: &[Vec<usize>], max_nodes: usize) -> PathMetrics {
    let n = adjacency.len();
    let adjacency: Vec<Vec<usize>> = adjacency
        .iter()
        .enumerate()
        .map(|(i, next)| {
            next.iter().copied().filter(|&j| j != i && j < n).collect::<BTreeSet<_>>().into_iter().collect()
        })
        .collect();
    let mut metrics = PathMetrics { max_nodes, ..PathMetrics::default() };
    let mut on_path = vec![false; n];
    for source in 0..n {
        let mut reached = vec![false; n];
        on_path[source] = true;
        walk(&adjacency, source, 1, max_nodes, &mut on_path, &mut reached, &mut metrics);
        on_path[source] = false;
        metrics.journey_count += reached.iter().filter(|r| **r).count();
    }
    metrics
}

fn walk(
    adjacency: &[Vec<usize>],
    node: usize,
    depth: usize,
    max_nodes: usize,
    on_path: &mut [bool],
    reached: &mut [bool],
    metrics: &mut PathMetrics,
) {
    if depth >= max_nodes {
        return;
    }
    for &next in &adjacency[node] {
        if on_path[next] {
            continue;
        }
        let nodes = depth + 1;
        reached[next] = true;
        metrics.path_count += 1;
        metrics.node_total += nodes;
        metrics.longest_path = metrics.longest_path.max(nodes);
        on_path[next] = true;
        walk(adjacency, next, nodes, max_nodes, on_path, reached, metrics);
        on_path[next] = false;
    }
}

/// Mean stage times of one query, in microseconds, in pipeline stage order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRow {
    pub query: String,
    /// Intermediate classes in the first rewritten candidate.
    pub path_length: Option<usize>,
    pub stage_means_us: [f64; 8],
    pub end_to_end_us: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub repetitions: usize,
    pub rows: Vec<TimingRow>,
    /// Per path length: number of queries and stage means over them.
    pub groups: BTreeMap<usize, (usize, [f64; 8])>,
}

fn micros(d: Duration) -> f64 {
    d.as_secs_f64() * 1e6
}

/// Times each query `repetitions` times after one discarded warm-up run.
///
/// A query that fails to rewrite keeps a row carrying the error and is left
/// out of the group means.
pub fn stage_timings(
    queries: &[String],
    rewriter: &Rewriter,
    options: &RewriteOptions,
    repetitions: usize,
) -> TimingReport {
    let repetitions = repetitions.max(1);
    let mut rows = Vec::with_capacity(queries.len());
    let mut timed = Vec::new();
    for query in queries {
        match rewriter.rewrite_timed(query, options) {
            Ok((outputs, _)) => {
                let length = outputs[0].provenance.paths.iter().map(|p| p.steps.len().saturating_sub(1)).sum::<usize>();
                timed.push((rows.len(), query));
                rows.push(TimingRow {
                    query: query.clone(),
                    path_length: Some(length),
                    stage_means_us: [0.0; 8],
                    end_to_end_us: 0.0,
                    error: None,
                });
            }
            Err(e) => rows.push(TimingRow {
                query: query.clone(),
                path_length: None,
                stage_means_us: [0.0; 8],
                end_to_end_us: 0.0,
                error: Some(e.to_string()),
            }),
        }
    }
    // Round-robin over queries so drift in machine load hits every query alike.
    for _ in 0..repetitions {
        for &(row, query) in &timed {
            let start = Instant::now();
            let (_, times) = rewriter.rewrite_timed(query, options).expect("succeeded during warm-up");
            let row = &mut rows[row];
            row.end_to_end_us += micros(start.elapsed());
            for (sum, stage) in row.stage_means_us.iter_mut().zip(Stage::PIPELINE) {
                *sum += micros(times.get(stage));
            }
        }
    }
    let n = repetitions as f64;
    for &(row, _) in &timed {
        let row = &mut rows[row];
        row.stage_means_us = row.stage_means_us.map(|s| s / n);
        row.end_to_end_us /= n;
    }

    let mut groups: BTreeMap<usize, (usize, [f64; 8])> = BTreeMap::new();
    for row in &rows {
        if let Some(len) = row.path_length {
            let (count, sums) = groups.entry(len).or_insert((0, [0.0; 8]));
            *count += 1;
            for (s, v) in sums.iter_mut().zip(row.stage_means_us) {
                *s += v;
            }
        }
    }
    for (count, sums) in groups.values_mut() {
        for s in sums.iter_mut() {
            *s /= *count as f64;
        }
    }
    TimingReport { repetitions, rows, groups }
}

impl TimingReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "repetitions: {}", self.repetitions);
        let _ = write!(out, "{:<6} {:>4}", "query", "path");
        for stage in Stage::PIPELINE {
            let _ = write!(out, " {:>13}", stage.label());
        }
        let _ = writeln!(out, " {:>13}", "total");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{:<6} ", format!("q{}", i + 1));
            match (&row.error, row.path_length) {
                (Some(e), _) => {
                    let _ = writeln!(out, "   - error: {e}");
                }
                (None, len) => {
                    let _ = write!(out, "{:>4}", len.unwrap_or(0));
                    for v in row.stage_means_us {
                        let _ = write!(out, " {v:>13.2}");
                    }
                    let _ = writeln!(out, " {:>13.2}", row.end_to_end_us);
                }
            }
        }
        for (len, (count, means)) in &self.groups {
            let _ = write!(out, "{:<6} {len:>4}", format!("mean{count}"));
            for v in means {
                let _ = write!(out, " {v:>13.2}");
            }
            let _ = writeln!(out);
        }
        out
    }

    /// Long-format CSV: one line per query and stage.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("query,stage,mean_us,pathLength\n");
        for row in &self.rows {
            let Some(len) = row.path_length else { continue };
            for (stage, v) in Stage::PIPELINE.iter().zip(row.stage_means_us) {
                let _ = writeln!(out, "{},{},{:.3},{}", csv_field(&row.query), stage.label(), v, len);
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
