use std::path::PathBuf;

use ccmsp::doc::Document;
use ccmsp::solver::Algorithm;
use ccmsp::suite::{GridSpec, Parity};
use ccmsp::Variant;

use crate::error::{BenchError, Result};

pub const DEFAULT_REPETITIONS: u64 = 30;
pub const DEFAULT_CAP: u64 = 100_000;

/// A campaign: one grid, the algorithms to run on it and how often.
///
/// Read from the flat `key = value` format. Recognized keys:
///
/// | key | meaning | default |
/// |---|---|---|
/// | `variant` | `CCMSP1` or `CCMSP2PLUS` | required |
/// | `k` | group counts | 4 8 16 32 64 128 |
/// | `m` | group sizes (CCMSP1) or jobs per group (CCMSP2PLUS) | 10 50 100 200 300 400 |
/// | `c` | covariances | 0.01 0.001 1e-7 (CCMSP1), 1e-7 |
/// | `a`, `d`, `gamma` | job mean, job variance, risk level | 100, 0.01, 0.05 |
/// | `parity` | CCMSP2PLUS companions to run | even odd |
/// | `algorithms` | `RLS`, `EA11` | both (CCMSP1), RLS |
/// | `repetitions` | runs per instance and algorithm | 30 |
/// | `cap` | iteration cap | 100000 |
/// | `seed` | base seed | 0 |
/// | `wall_clock` | record wall-clock ms (breaks byte-identical output) | false |
/// | `trajectories` | write improvement traces | false |
/// | `out` | output directory | `.` |
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub grid: GridSpec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub repetitions: u64,
    pub cap: u64,
    pub wall_clock: bool,
    pub trajectories: bool,
    pub out: PathBuf,
}

const KEYS: [&str; 15] = [
    "variant",
    "k",
    "m",
    "c",
    "a",
    "d",
    "gamma",
    "parity",
    "algorithms",
    "repetitions",
    "cap",
    "seed",
    "wall_clock",
    "trajectories",
    "out",
];

impl CampaignConfig {
    /// Defaults for `variant`.
    pub fn new(variant: Variant) -> Result<Self> {
        let (grid, algorithms) = match variant {
            Variant::Ccmsp1 => (GridSpec::ccmsp1_default(), Algorithm::ALL.to_vec()),
            Variant::Ccmsp2Plus => (GridSpec::ccmsp2plus_default(), vec![Algorithm::Rls]),
            other => {
                return Err(BenchError::Config(format!(
                    "campaigns run CCMSP1 or CCMSP2PLUS grids, not {other}"
                )))
            }
        };
        Ok(CampaignConfig {
            grid,
            algorithms,
            repetitions: DEFAULT_REPETITIONS,
            cap: DEFAULT_CAP,
            wall_clock: false,
            trajectories: false,
            out: PathBuf::from("."),
        })
    }

    pub fn from_doc(doc: &Document) -> Result<Self> {
        if let Some(key) = doc.keys().find(|k| !KEYS.contains(k)) {
            return Err(BenchError::Config(format!("unknown key `{key}`")));
        }
        let mut cfg = Self::new(doc.required("variant")?)?;
        let grid = &mut cfg.grid;
        if let Some(ks) = doc.list("k")? {
            grid.ks = ks;
        }
        if let Some(sizes) = doc.list("m")? {
            grid.sizes = sizes;
        }
        if let Some(cs) = doc.list("c")? {
            grid.cs = cs;
        }
        if let Some(a) = doc.parsed("a")? {
            grid.a = a;
        }
        if let Some(d) = doc.parsed("d")? {
            grid.d = d;
        }
        if let Some(gamma) = doc.parsed("gamma")? {
            grid.gamma = gamma;
        }
        if let Some(seed) = doc.parsed("seed")? {
            grid.seed = seed;
        }
        if let Some(parities) = doc.list::<Parity>("parity")? {
            grid.parities = parities;
        }
        if let Some(algorithms) = doc.list("algorithms")? {
            cfg.algorithms = algorithms;
        }
        if let Some(r) = doc.parsed("repetitions")? {
            cfg.repetitions = r;
        }
        if let Some(cap) = doc.parsed("cap")? {
            cfg.cap = cap;
        }
        if let Some(w) = doc.parsed("wall_clock")? {
            cfg.wall_clock = w;
        }
        if let Some(t) = doc.parsed("trajectories")? {
            cfg.trajectories = t;
        }
        if let Some(out) = doc.get("out") {
            cfg.out = PathBuf::from(out);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_doc(&Document::parse(text)?)
    }

    /// The config as a document; `parse(to_doc().to_string())` gives it back.
    pub fn to_doc(&self) -> Document {
        let g = &self.grid;
        let mut doc = Document::new();
        doc.set("variant", g.variant.as_str());
        doc.set_list("k", &g.ks);
        doc.set_list("m", &g.sizes);
        doc.set_list("c", g.cs.iter().map(|&c| real(c)));
        doc.set("a", real(g.a));
        doc.set("d", real(g.d));
        doc.set("gamma", real(g.gamma));
        if g.variant == Variant::Ccmsp2Plus {
            doc.set_list("parity", &g.parities);
        }
        doc.set_list("algorithms", &self.algorithms);
        doc.set("repetitions", self.repetitions.to_string());
        doc.set("cap", self.cap.to_string());
        doc.set("seed", g.seed.to_string());
        doc.set("wall_clock", self.wall_clock.to_string());
        doc.set("trajectories", self.trajectories.to_string());
        doc.set("out", self.out.display().to_string());
        doc
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        let fail = |m: &str| Err(BenchError::Config(m.to_string()));
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms selected");
        }
        if g.ks.is_empty() || g.sizes.is_empty() || g.cs.is_empty() {
            return fail("k, m and c need at least one value each");
        }
        if g.variant == Variant::Ccmsp2Plus && g.parities.is_empty() {
            return fail("parity needs at least one of even, odd");
        }
        for (name, list) in [
            ("algorithms", dup(&self.algorithms)),
            ("k", dup(&g.ks)),
            ("m", dup(&g.sizes)),
        ] {
            if list {
                return Err(BenchError::Config(format!("duplicate values in `{name}`")));
            }
        }
        Ok(())
    }
}

fn dup<T: PartialEq>(v: &[T]) -> bool {
    v.iter().enumerate().any(|(i, x)| v[..i].contains(x))
}

fn real(x: f64) -> String {
    ccmsp::doc::format_real(x, ccmsp::doc::INSTANCE_DIGITS)
}
