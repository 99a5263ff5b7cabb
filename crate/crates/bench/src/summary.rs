use std::collections::BTreeMap;

use ccmsp::doc::format_real;
use ccmsp::solver::Algorithm;
use ccmsp::suite::Parity;
use ccmsp::Variant;

use crate::error::{BenchError, Result};
use crate::table::{CsvTable, ResultRow, CSV_DIGITS};

/// Aggregates over the repetitions of one algorithm on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub instance: String,
    pub variant: Variant,
    pub k: usize,
    pub n: usize,
    pub size: usize,
    pub c: f64,
    pub parity: Option<Parity>,
    pub algorithm: Algorithm,
    pub runs: u64,
    pub cap: u64,
    /// Censored runs count with the cap.
    pub mean_iterations: f64,
    pub median_iterations: f64,
    pub min_iterations: u64,
    pub max_iterations: u64,
    pub censored: u64,
    pub mean_fitness: f64,
    pub best_fitness: f64,
}

/// One point of an iterations-versus-`log2 k` curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub variant: Variant,
    pub algorithm: Algorithm,
    pub c: f64,
    pub parity: Option<Parity>,
    /// Curve label: `m=<size>` for CCMSP1, `n=<size>k` otherwise.
    pub series: String,
    pub x: f64,
    pub y: f64,
    pub censored: u64,
    pub runs: u64,
}

/// Best makespans of an even instance and its odd companion.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub size: usize,
    pub c: f64,
    pub even: Option<f64>,
    pub odd: Option<f64>,
}

impl CompanionRow {
    pub fn gap(&self) -> Option<f64> {
        Some(self.odd? - self.even?)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub plot: Vec<PlotPoint>,
    pub companions: Vec<CompanionRow>,
}

type Key = (
    Variant,
    usize,
    usize,
    u64,
    Option<Parity>,
    String,
    Algorithm,
);

fn key(r: &ResultRow) -> Key {
    (
        r.variant,
        r.k,
        r.size,
        r.c.to_bits(),
        r.parity,
        r.instance.clone(),
        r.algorithm,
    )
}

/// Aggregates a result table. Rows must come from a single campaign setup:
/// one variant, one cap, one repetition count, no repeated runs.
pub fn summarize(rows: &[ResultRow]) -> Result<Summary> {
    let first = rows
        .first()
        .ok_or_else(|| BenchError::Results("no result rows".into()))?;
    let mixed = |m: String| Err(BenchError::Results(format!("mixed configurations: {m}")));
    if let Some(r) = rows.iter().find(|r| r.cap != first.cap) {
        return mixed(format!("caps {} and {}", first.cap, r.cap));
    }
    if let Some(r) = rows.iter().find(|r| r.variant != first.variant) {
        return mixed(format!("variants {} and {}", first.variant, r.variant));
    }

    let mut groups: BTreeMap<Key, Vec<&ResultRow>> = BTreeMap::new();
    let mut shape: BTreeMap<&str, &ResultRow> = BTreeMap::new();
    for r in rows {
        let seen = shape.entry(&r.instance).or_insert(r);
        if (
            seen.variant,
            seen.k,
            seen.n,
            seen.size,
            seen.c.to_bits(),
            seen.parity,
        ) != (r.variant, r.k, r.n, r.size, r.c.to_bits(), r.parity)
        {
            return mixed(format!(
                "instance `{}` appears with different parameters",
                r.instance
            ));
        }
        groups.entry(key(r)).or_default().push(r);
    }

    let mut out = Summary::default();
    let mut runs = None;
    for group in groups.values() {
        let mut reps: Vec<u64> = group.iter().map(|r| r.repetition).collect();
        reps.sort_unstable();
        if reps.windows(2).any(|w| w[0] == w[1]) {
            return mixed(format!(
                "repeated runs of {} on `{}`",
                group[0].algorithm, group[0].instance
            ));
        }
        if *runs.get_or_insert(group.len()) != group.len() {
            return mixed("groups with different repetition counts".into());
        }
        out.rows.push(aggregate(group));
    }

    out.plot = out
        .rows
        .iter()
        .map(|s| PlotPoint {
            variant: s.variant,
            algorithm: s.algorithm,
            c: s.c,
            parity: s.parity,
            series: match s.variant {
                Variant::Ccmsp1 => format!("m={}", s.size),
                _ => format!("n={}k", s.size),
            },
            x: (s.k as f64).log2(),
            y: s.mean_iterations,
            censored: s.censored,
            runs: s.runs,
        })
        .collect();

    let mut pairs: BTreeMap<(Algorithm, usize, usize, u64), CompanionRow> = BTreeMap::new();
    for s in out.rows.iter().filter(|s| s.variant == Variant::Ccmsp2Plus) {
        let entry = pairs
            .entry((s.algorithm, s.k, s.size, s.c.to_bits()))
            .or_insert(CompanionRow {
                algorithm: s.algorithm,
                k: s.k,
                size: s.size,
                c: s.c,
                even: None,
                odd: None,
            });
        match s.parity {
            Some(Parity::Even) => entry.even = Some(s.best_fitness),
            Some(Parity::Odd) => entry.odd = Some(s.best_fitness),
            None => {}
        }
    }
    out.companions = pairs.into_values().collect();
    Ok(out)
}

fn aggregate(group: &[&ResultRow]) -> SummaryRow {
    let r = group[0];
    let mut its: Vec<u64> = group.iter().map(|r| r.iterations).collect();
    its.sort_unstable();
    let len = its.len();
    let median = if len % 2 == 1 {
        its[len / 2] as f64
    } else {
        (its[len / 2 - 1] + its[len / 2]) as f64 / 2.0
    };
    let count = len as f64;
    SummaryRow {
        instance: r.instance.clone(),
        variant: r.variant,
        k: r.k,
        n: r.n,
        size: r.size,
        c: r.c,
        parity: r.parity,
        algorithm: r.algorithm,
        runs: len as u64,
        cap: r.cap,
        mean_iterations: its.iter().sum::<u64>() as f64 / count,
        median_iterations: median,
        min_iterations: its[0],
        max_iterations: its[len - 1],
        censored: group.iter().filter(|r| r.censored()).count() as u64,
        mean_fitness: group.iter().map(|r| r.final_fitness).sum::<f64>() / count,
        best_fitness: group
            .iter()
            .map(|r| r.final_fitness)
            .fold(f64::INFINITY, f64::min),
    }
}

fn real(x: f64) -> String {
    format_real(x, CSV_DIGITS)
}

fn parity(p: Option<Parity>) -> String {
    p.map(|p| p.to_string()).unwrap_or_default()
}

impl Summary {
    pub fn rows_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "instance",
            "variant",
            "k",
            "n",
            "size",
            "c",
            "parity",
            "algorithm",
            "runs",
            "cap",
            "mean_iterations",
            "median_iterations",
            "min_iterations",
            "max_iterations",
            "censored",
            "mean_fitness",
            "best_fitness",
        ]);
        for s in &self.rows {
            t.push(vec![
                s.instance.clone(),
                s.variant.to_string(),
                s.k.to_string(),
                s.n.to_string(),
                s.size.to_string(),
                real(s.c),
                parity(s.parity),
                s.algorithm.to_string(),
                s.runs.to_string(),
                s.cap.to_string(),
                real(s.mean_iterations),
                real(s.median_iterations),
                s.min_iterations.to_string(),
                s.max_iterations.to_string(),
                s.censored.to_string(),
                real(s.mean_fitness),
                real(s.best_fitness),
            ]);
        }
        t
    }

    pub fn plot_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "variant",
            "algorithm",
            "c",
            "parity",
            "series",
            "x",
            "y",
            "censored",
            "runs",
        ]);
        for p in &self.plot {
            t.push(vec![
                p.variant.to_string(),
                p.algorithm.to_string(),
                real(p.c),
                parity(p.parity),
                p.series.clone(),
                real(p.x),
                real(p.y),
                p.censored.to_string(),
                p.runs.to_string(),
            ]);
        }
        t
    }

    pub fn companions_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "algorithm",
            "k",
            "size",
            "c",
            "n_even",
            "even",
            "odd",
            "gap",
        ]);
        let opt = |x: Option<f64>| x.map(real).unwrap_or_default();
        for r in &self.companions {
            t.push(vec![
                r.algorithm.to_string(),
                r.k.to_string(),
                r.size.to_string(),
                real(r.c),
                (r.k * r.size).to_string(),
                opt(r.even),
                opt(r.odd),
                opt(r.gap()),
            ]);
        }
        t
    }
}
