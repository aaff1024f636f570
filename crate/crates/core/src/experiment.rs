//! Parameter sweeps over synthetic graphs.
//!
//! Each sweep point (axis value, seed) builds one multi-relational BA graph
//! and runs every requested objective on it. Points run on a rayon pool;
//! rows are sorted afterwards so the output never depends on scheduling.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::entropy::decoded_fraction;
use crate::error::{Error, Result};
use crate::minimize::{minimize, MinimizeConfig, Objective};
use crate::synth::SynthConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Size,
    Relations,
    Sparsity,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Size => "size",
            SweepAxis::Relations => "relations",
            SweepAxis::Sparsity => "sparsity",
        }
    }

    /// Default grid for the axis.
    pub fn default_grid(self) -> Vec<f64> {
        match self {
            SweepAxis::Size => vec![100.0, 200.0, 400.0, 800.0],
            SweepAxis::Relations => vec![1.0, 2.0, 3.0, 4.0],
            SweepAxis::Sparsity => vec![0.96, 0.97, 0.98, 0.99],
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "size" => Ok(SweepAxis::Size),
            "relations" => Ok(SweepAxis::Relations),
            "sparsity" => Ok(SweepAxis::Sparsity),
            other => Err(Error::InvalidConfig(format!("unknown sweep axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    /// Seeds per grid point; seed `i` uses `template.seed + i`.
    pub seeds: usize,
    pub objectives: Vec<Objective>,
    pub template: SynthConfig,
    pub minimize: MinimizeConfig,
    /// Record wall time per row; off gives byte-identical reruns.
    pub timing: bool,
}

impl ExperimentPlan {
    pub fn new(axis: SweepAxis) -> Self {
        Self {
            axis,
            grid: axis.default_grid(),
            seeds: 5,
            objectives: Objective::ALL.to_vec(),
            template: SynthConfig {
                relations: if axis == SweepAxis::Size { 1 } else { 3 },
                nodes: if axis == SweepAxis::Size { 100 } else { 300 },
                ..SynthConfig::default()
            },
            minimize: MinimizeConfig::default(),
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidConfig("empty sweep grid".into()));
        }
        if self.seeds == 0 {
            return Err(Error::InvalidConfig("at least one seed is required".into()));
        }
        if self.objectives.is_empty() {
            return Err(Error::InvalidConfig("no objectives requested".into()));
        }
        for &v in &self.grid {
            self.point_config(v, 0)?;
        }
        self.minimize.validate()
    }

    /// Synthesis config for one sweep point.
    pub fn point_config(&self, value: f64, seed_index: usize) -> Result<SynthConfig> {
        let mut cfg = self.template;
        cfg.seed = self.template.seed.wrapping_add(seed_index as u64);
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::InvalidConfig(format!(
                    "{} value {v} must be a positive integer",
                    self.axis.name()
                )))
            }
        };
        match self.axis {
            SweepAxis::Size => cfg.nodes = as_count(value)?,
            SweepAxis::Relations => cfg.relations = as_count(value)?,
            SweepAxis::Sparsity => cfg.sparsity = Some(value),
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Compact description for report headers.
    pub fn describe(&self) -> String {
        let grid: Vec<String> = self.grid.iter().map(|v| v.to_string()).collect();
        let objectives: Vec<&str> = self.objectives.iter().map(|o| o.name()).collect();
        format!(
            "axis={};grid={};seeds={};objectives={};nodes={};attach={};relations={};sparsity={};seed={};delta={:?};strategy={:?};subgraph={}",
            self.axis.name(),
            grid.join("|"),
            self.seeds,
            objectives.join("|"),
            self.template.nodes,
            self.template.attach,
            self.template.relations,
            self.template.sparsity.map_or("none".to_string(), |s| s.to_string()),
            self.template.seed,
            self.minimize.delta,
            self.minimize.strategy,
            self.minimize.subgraph_size,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub value: f64,
    pub seed: u64,
    pub objective: Objective,
    pub one_dim: f64,
    pub two_dim: f64,
    pub decoded: f64,
    pub merges: usize,
    pub wall_ms: u128,
    /// Set when any stage failed; numeric fields are NaN then.
    pub error: Option<String>,
}

fn run_objective(
    plan: &ExperimentPlan,
    graph: &Result<crate::graph::MultiRelationalGraph>,
    value: f64,
    seed: u64,
    objective: Objective,
) -> ExperimentRow {
    let start = Instant::now();
    let outcome = graph.as_ref().map_err(|e| e.to_string()).and_then(|g| {
        let cfg = MinimizeConfig {
            objective,
            ..plan.minimize
        };
        let m = minimize(g, &cfg).map_err(|e| e.to_string())?;
        let decoded = decoded_fraction(m.one_dim, m.final_objective).map_err(|e| e.to_string())?;
        Ok((m.one_dim, m.final_objective, decoded, m.trace.len()))
    });
    let wall_ms = if plan.timing {
        start.elapsed().as_millis()
    } else {
        0
    };
    match outcome {
        Ok((one_dim, two_dim, decoded, merges)) => ExperimentRow {
            value,
            seed,
            objective,
            one_dim,
            two_dim,
            decoded,
            merges,
            wall_ms,
            error: None,
        },
        Err(e) => ExperimentRow {
            value,
            seed,
            objective,
            one_dim: f64::NAN,
            two_dim: f64::NAN,
            decoded: f64::NAN,
            merges: 0,
            wall_ms,
            error: Some(e),
        },
    }
}

/// Runs every point of the plan; failures are recorded per row.
pub fn run(plan: &ExperimentPlan, threads: Option<usize>) -> Result<Vec<ExperimentRow>> {
    plan.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let points: Vec<(usize, f64, usize)> = plan
        .grid
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| (0..plan.seeds).map(move |s| (i, v, s)))
        .collect();
    let mut rows: Vec<(usize, usize, usize, ExperimentRow)> = pool.install(|| {
        points
            .par_iter()
            .flat_map_iter(|&(i, value, s)| {
                let cfg = plan.point_config(value, s);
                let seed = cfg.as_ref().map_or(0, |c| c.seed);
                let graph = cfg.and_then(|c| c.generate());
                plan.objectives
                    .iter()
                    .enumerate()
                    .map(|(k, &o)| (i, s, k, run_objective(plan, &graph, value, seed, o)))
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    rows.sort_by_key(|&(i, s, k, _)| (i, s, k));
    Ok(rows.into_iter().map(|r| r.3).collect())
}

pub fn format_rows(plan: &ExperimentPlan, rows: &[ExperimentRow]) -> String {
    let mut out = String::from("axis,value,seed,objective,one_dim,two_dim,decoded,merges,wall_ms,error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            plan.axis.name(),
            r.value,
            r.seed,
            r.objective,
            r.one_dim,
            r.two_dim,
            r.decoded,
            r.merges,
            r.wall_ms,
            r.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
        );
    }
    out
}

/// Seed-mean of `field` per (grid value, objective), in grid order.
pub fn seed_means(
    plan: &ExperimentPlan,
    rows: &[ExperimentRow],
    field: impl Fn(&ExperimentRow) -> f64,
) -> Vec<(f64, Objective, f64)> {
    let mut out = Vec::new();
    for &v in &plan.grid {
        for &o in &plan.objectives {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r.value == v && r.objective == o && r.error.is_none())
                .map(&field)
                .collect();
            let mean = if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            };
            out.push((v, o, mean));
        }
    }
    out
}
