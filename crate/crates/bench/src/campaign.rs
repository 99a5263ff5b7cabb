use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ccmsp::doc::format_real;
use ccmsp::oracle::{ccmsp1_optimum, odd_optimum};
use ccmsp::seed::run_seed;
use ccmsp::solver::{run, Algorithm, InitialSolution, StopCriterion};
use ccmsp::{Instance64, StopCriterion64, Variant};
use rayon::prelude::*;

use crate::config::CampaignConfig;
use crate::error::{BenchError, Result};
use crate::table::{write_csv, CsvTable, ResultRow, CSV_DIGITS};

/// Absolute tolerance on target makespans.
const TARGET_TOL: f64 = 1e-9;

/// One strict improvement of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub instance: String,
    pub algorithm: Algorithm,
    pub repetition: u64,
    pub iteration: u64,
    pub fitness: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CampaignOutput {
    /// Ordered by grid point, then algorithm, then repetition.
    pub rows: Vec<ResultRow>,
    /// Empty unless the config asks for trajectories.
    pub trajectories: Vec<TrajectoryRow>,
}

/// Stop rule for a campaign instance: the known optimum for CCMSP1 and odd
/// CCMSP2PLUS instances, the even-case predicate otherwise, each under `cap`.
pub fn resolve_stop(inst: &Instance64, cap: u64) -> Result<StopCriterion64> {
    let inner = match inst.variant() {
        Variant::Ccmsp1 => StopCriterion::target(ccmsp1_optimum(inst)?.0, TARGET_TOL),
        Variant::Ccmsp2Plus if inst.n() % 2 == 1 => {
            StopCriterion::target(odd_optimum(inst)?.0, TARGET_TOL)
        }
        Variant::Ccmsp2Plus => StopCriterion::CovBalanced,
        other => {
            return Err(BenchError::Config(format!(
                "no stop rule for {other} instances"
            )))
        }
    };
    Ok(StopCriterion::capped(inner, cap))
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutput> {
    cfg.validate()?;
    let points = cfg.grid.points()?;
    // every oracle must succeed before the first run starts
    let stops = points
        .iter()
        .map(|p| resolve_stop(&p.instance, cfg.cap))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, Algorithm, u64)> = (0..points.len())
        .flat_map(|p| {
            cfg.algorithms
                .iter()
                .flat_map(move |&alg| (0..cfg.repetitions).map(move |rep| (p, alg, rep)))
        })
        .collect();

    let results = jobs
        .par_iter()
        .map(|&(p, algorithm, repetition)| {
            let point = &points[p];
            let seed = run_seed(cfg.grid.seed, &point.id, repetition);
            let start = Instant::now();
            let rec = run(
                algorithm,
                &point.instance,
                InitialSolution::Random,
                &stops[p],
                seed,
            )?;
            let wall_ms = if cfg.wall_clock {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            let row = ResultRow {
                instance: point.id.clone(),
                variant: point.instance.variant(),
                k: point.k,
                n: point.instance.n(),
                size: point.size,
                c: point.c,
                parity: point.parity,
                algorithm,
                repetition,
                seed,
                cap: cfg.cap,
                iterations: rec.iterations,
                final_fitness: rec.final_fitness,
                stop_reason: rec.stop_reason,
                wall_ms,
            };
            let trace = if cfg.trajectories {
                rec.trajectory
                    .iter()
                    .map(|t| TrajectoryRow {
                        instance: point.id.clone(),
                        algorithm,
                        repetition,
                        iteration: t.iteration,
                        fitness: t.value,
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Ok((row, trace))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = CampaignOutput::default();
    for (row, trace) in results {
        out.rows.push(row);
        out.trajectories.extend(trace);
    }
    Ok(out)
}

/// Writes `results.csv`, the resolved `campaign.conf` and, when recorded,
/// `trajectories.csv` into `dir`. Returns the written paths.
pub fn write_campaign(
    cfg: &CampaignConfig,
    output: &CampaignOutput,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut written = Vec::new();

    let results = dir.join("results.csv");
    write_csv(&results, &CsvTable::from(output.rows.as_slice()))?;
    written.push(results);

    let conf = dir.join("campaign.conf");
    fs::write(&conf, cfg.to_doc().to_string()).map_err(|e| BenchError::io(&conf, e))?;
    written.push(conf);

    if cfg.trajectories {
        let mut t = CsvTable::new(&[
            "instance",
            "algorithm",
            "repetition",
            "iteration",
            "fitness",
        ]);
        for r in &output.trajectories {
            t.push(vec![
                r.instance.clone(),
                r.algorithm.to_string(),
                r.repetition.to_string(),
                r.iteration.to_string(),
                format_real(r.fitness, CSV_DIGITS),
            ]);
        }
        let path = dir.join("trajectories.csv");
        write_csv(&path, &t)?;
        written.push(path);
    }
    Ok(written)
}
