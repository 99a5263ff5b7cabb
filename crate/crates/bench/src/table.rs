use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ccmsp::doc::format_real;
use ccmsp::solver::{Algorithm, StopReason};
use ccmsp::suite::Parity;
use ccmsp::Variant;
use csv::{ReaderBuilder, Terminator, WriterBuilder};

use crate::error::{BenchError, Result};

/// Significant digits of reals in CSV output.
pub const CSV_DIGITS: usize = 12;

/// One run of one algorithm on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub variant: Variant,
    pub k: usize,
    pub n: usize,
    /// Group size for CCMSP1, jobs per group of the even companion otherwise.
    pub size: usize,
    pub c: f64,
    pub parity: Option<Parity>,
    pub algorithm: Algorithm,
    pub repetition: u64,
    pub seed: u64,
    pub cap: u64,
    pub iterations: u64,
    pub final_fitness: f64,
    pub stop_reason: StopReason,
    /// 0 unless wall-clock recording is switched on.
    pub wall_ms: u64,
}

impl ResultRow {
    pub const HEADER: [&'static str; 15] = [
        "instance",
        "variant",
        "k",
        "n",
        "size",
        "c",
        "parity",
        "algorithm",
        "repetition",
        "seed",
        "cap",
        "iterations",
        "final_fitness",
        "stop_reason",
        "wall_ms",
    ];

    pub fn censored(&self) -> bool {
        self.stop_reason == StopReason::Cap
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.variant.to_string(),
            self.k.to_string(),
            self.n.to_string(),
            self.size.to_string(),
            format_real(self.c, CSV_DIGITS),
            self.parity.map(|p| p.to_string()).unwrap_or_default(),
            self.algorithm.to_string(),
            self.repetition.to_string(),
            self.seed.to_string(),
            self.cap.to_string(),
            self.iterations.to_string(),
            format_real(self.final_fitness, CSV_DIGITS),
            self.stop_reason.to_string(),
            self.wall_ms.to_string(),
        ]
    }

    fn from_record(rec: &csv::StringRecord, line: u64) -> Result<Self> {
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |i: usize, e: String| {
            BenchError::Results(format!(
                "line {line}, column `{}`: bad value `{}`: {e}",
                Self::HEADER[i],
                field(i)
            ))
        };
        macro_rules! parse {
            ($i:expr) => {
                field($i).parse().map_err(|e| bad($i, format!("{e}")))?
            };
        }
        let parity = match field(6) {
            "" => None,
            p => Some(p.parse().map_err(|e| bad(6, format!("{e}")))?),
        };
        Ok(ResultRow {
            instance: field(0).to_string(),
            variant: parse!(1),
            k: parse!(2),
            n: parse!(3),
            size: parse!(4),
            c: parse!(5),
            parity,
            algorithm: parse!(7),
            repetition: parse!(8),
            seed: parse!(9),
            cap: parse!(10),
            iterations: parse!(11),
            final_fitness: parse!(12),
            stop_reason: parse!(13),
            wall_ms: parse!(14),
        })
    }
}

/// A header plus string records, written as comma-separated LF-terminated CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = WriterBuilder::new()
            .terminator(Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| BenchError::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("fields are UTF-8")
    }
}

impl From<&[ResultRow]> for CsvTable {
    fn from(rows: &[ResultRow]) -> Self {
        let mut t = CsvTable::new(&ResultRow::HEADER);
        for r in rows {
            t.push(r.record());
        }
        t
    }
}

pub fn write_csv(path: &Path, table: &CsvTable) -> Result<()> {
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    table.write_to(file)
}

pub fn read_results_from<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut reader = ReaderBuilder::new().from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(ResultRow::HEADER) {
        return Err(BenchError::Results(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader
        .records()
        .enumerate()
        .map(|(i, rec)| ResultRow::from_record(&rec?, i as u64 + 2))
        .collect()
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(|e| BenchError::io(path, e))?;
    read_results_from(file)
}
