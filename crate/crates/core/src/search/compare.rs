use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{ao_star, best_first_minimax, pns, pns_star, SearchError, SearchOutcome, SearchParams, SearchStatus};
use crate::cost::Cost;
use crate::graph::ImplicitGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    AoStar,
    Pns,
    PnsStar,
    /// Best-first minimax with the given value scale.
    Bfmm(Cost),
}

impl Algorithm {
    /// Scale used when `bfmm` is named without one.
    pub const DEFAULT_SCALE: f64 = 100.0;

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AoStar => "ao-star",
            Algorithm::Pns => "pns",
            Algorithm::PnsStar => "pns-star",
            Algorithm::Bfmm(_) => "bfmm",
        }
    }

    pub fn run<W: ImplicitGraph>(self, world: W, params: &SearchParams) -> Result<SearchOutcome, SearchError> {
        match self {
            Algorithm::AoStar => ao_star(world, params),
            Algorithm::Pns => pns(world, params),
            Algorithm::PnsStar => pns_star(world, params),
            Algorithm::Bfmm(scale) => best_first_minimax(world, scale, params),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    /// `ao-star`, `pns`, `pns-star`, `bfmm` or `bfmm:SCALE`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ao-star" => Ok(Algorithm::AoStar),
            "pns" => Ok(Algorithm::Pns),
            "pns-star" => Ok(Algorithm::PnsStar),
            "bfmm" => Ok(Algorithm::Bfmm(Cost::new(Self::DEFAULT_SCALE).unwrap())),
            _ => match s.strip_prefix("bfmm:") {
                Some(v) => v
                    .parse::<f64>()
                    .ok()
                    .and_then(|x| Cost::new(x).filter(|c| c.is_finite()))
                    .map(Algorithm::Bfmm)
                    .ok_or_else(|| format!("bad bfmm scale `{v}`")),
                None => Err(format!("unknown algorithm `{s}` (expected ao-star, pns, pns-star or bfmm)")),
            },
        }
    }
}

/// One (instance, algorithm) run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub instance: String,
    pub algorithm: String,
    pub status: SearchStatus,
    pub expansions: u64,
    pub nodes_generated: u64,
    pub iterations: u64,
}

pub const CSV_HEADER: &str = "instance,algorithm,status,expansions,nodes_generated,iterations";

/// Runs every algorithm on a fresh world for every instance.
///
/// `factory(i)` must build the world of `instances[i]`; it is called once
/// per run so that stateful worlds start clean. Instances run in parallel;
/// rows come back ordered by instance, then by algorithm.
pub fn compare<W, F>(
    instances: &[String],
    factory: F,
    algorithms: &[Algorithm],
    params: &SearchParams,
) -> Result<Vec<CompareRow>, SearchError>
where
    W: ImplicitGraph,
    F: Fn(usize) -> W + Sync,
{
    let per_instance: Vec<Vec<CompareRow>> = (0..instances.len())
        .into_par_iter()
        .map(|i| {
            algorithms
                .iter()
                .map(|&a| {
                    let out = a.run(factory(i), params)?;
                    Ok(CompareRow {
                        instance: instances[i].clone(),
                        algorithm: a.name().to_string(),
                        status: out.status,
                        expansions: out.stats.expansions,
                        nodes_generated: out.stats.nodes_generated,
                        iterations: out.stats.iterations,
                    })
                })
                .collect::<Result<Vec<_>, SearchError>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

/// Writes rows as CSV with the [`CSV_HEADER`] columns.
pub fn write_csv<Wr: Write>(rows: &[CompareRow], out: Wr) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-algorithm aggregate of a comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub runs: usize,
    pub proved: usize,
    pub mean_expansions: f64,
    pub mean_nodes_generated: f64,
}

/// Aggregates rows per algorithm, in order of first appearance.
pub fn summarize(rows: &[CompareRow]) -> Vec<SummaryRow> {
    let mut out: Vec<SummaryRow> = Vec::new();
    for r in rows {
        let i = match out.iter().position(|s| s.algorithm == r.algorithm) {
            Some(i) => i,
            None => {
                out.push(SummaryRow {
                    algorithm: r.algorithm.clone(),
                    runs: 0,
                    proved: 0,
                    mean_expansions: 0.0,
                    mean_nodes_generated: 0.0,
                });
                out.len() - 1
            }
        };
        let s = &mut out[i];
        s.runs += 1;
        s.proved += usize::from(r.status != SearchStatus::ResourceExhausted);
        s.mean_expansions += r.expansions as f64;
        s.mean_nodes_generated += r.nodes_generated as f64;
    }
    for s in &mut out {
        s.mean_expansions /= s.runs as f64;
        s.mean_nodes_generated /= s.runs as f64;
    }
    out
}

impl fmt::Display for SummaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} {:>6} {:>7} {:>16.2} {:>16.2}",
            self.algorithm, self.runs, self.proved, self.mean_expansions, self.mean_nodes_generated
        )
    }
}

impl SummaryRow {
    pub const HEADER: &'static str = "algorithm    runs  proved  mean_expansions  mean_generated";
}
