use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ccmsp::doc::{format_real, read_instance, write_instance, Document, INSTANCE_DIGITS};
use ccmsp::oracle::{
    balanced_partition_dp, brute_force_optimum, ccmsp1_optimum, odd_optimum, reduce_partition,
    BRUTE_FORCE_LIMIT,
};
use ccmsp::solver::{run, Algorithm, InitialSolution, StopCriterion};
use ccmsp::{Instance64, Solution, Variant};
use ccmsp_bench::{
    read_results, resolve_stop, run_campaign, summarize, write_campaign, write_csv, CampaignConfig,
    CsvTable, CSV_DIGITS,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "ccmsp",
    version,
    about = "Chance-constrained two-machine scheduling: solvers, oracles and benchmark campaigns"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the instances of a grid and a manifest.
    Gen {
        /// Campaign or grid config file.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one solver once on an instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "rls")]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = ccmsp_bench::DEFAULT_CAP)]
        cap: u64,
        /// `auto`, `cov_balanced`, `cap` or `target=<makespan>`.
        #[arg(long, default_value = "auto")]
        stop: String,
        /// Absolute tolerance for `target=`.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the run summary here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the improvement trace (CSV) here.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Optimum of an instance from a closed form or exhaustive search.
    Exact {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn an equal-cardinality partition question into an instance.
    Reduce {
        /// Multiset elements, e.g. `--values 1 1 2 2`.
        #[arg(long, num_args = 1.., required = true)]
        values: Vec<u64>,
        /// Instance file; the instance goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a campaign and write its CSVs.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        repetitions: Option<u64>,
    },
    /// Aggregate result CSVs into summary, plot and table files.
    Summarize {
        #[arg(long, num_args = 1.., required = true)]
        results: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Closed form when one applies, exhaustive search otherwise.
    Auto,
    Closed,
    Brute,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Gen { config, out, seed } => gen(&config, &out, seed),
        Command::Solve {
            instance,
            algo,
            seed,
            cap,
            stop,
            tol,
            out,
            trajectory,
        } => solve(
            &instance,
            algo,
            seed,
            cap,
            &stop,
            tol,
            out.as_deref(),
            trajectory.as_deref(),
        ),
        Command::Exact {
            instance,
            method,
            out,
        } => exact(&instance, method, out.as_deref()),
        Command::Reduce { values, out } => reduce(&values, out.as_deref()),
        Command::Campaign {
            config,
            out,
            seed,
            cap,
            repetitions,
        } => campaign(&config, out, seed, cap, repetitions),
        Command::Summarize { results, out } => summarize_files(&results, &out),
    }
}

fn load_config(path: &Path) -> Result<CampaignConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CampaignConfig::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance64> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_instance(&text).with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn real(x: f64) -> String {
    format_real(x, INSTANCE_DIGITS)
}

fn gen(config: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let mut cfg = load_config(config)?;
    if let Some(seed) = seed {
        cfg.grid.seed = seed;
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut manifest = CsvTable::new(&[
        "file", "instance", "variant", "k", "n", "size", "c", "parity",
    ]);
    for p in cfg.grid.points()? {
        let file = format!("{}.inst", p.id);
        let path = out.join(&file);
        fs::write(&path, write_instance(&p.instance))
            .with_context(|| format!("writing {}", path.display()))?;
        manifest.push(vec![
            file,
            p.id.clone(),
            p.instance.variant().to_string(),
            p.k.to_string(),
            p.instance.n().to_string(),
            p.size.to_string(),
            format_real(p.c, CSV_DIGITS),
            p.parity.map(|x| x.to_string()).unwrap_or_default(),
        ]);
    }
    write_csv(&out.join("manifest.csv"), &manifest)?;
    eprintln!(
        "{} instances written to {}",
        manifest.rows.len(),
        out.display()
    );
    Ok(())
}

fn parse_stop(spec: &str, inst: &Instance64, cap: u64, tol: f64) -> Result<StopCriterion<f64>> {
    let inner = match spec.trim() {
        "auto" => return Ok(resolve_stop(inst, cap)?),
        "cov_balanced" => StopCriterion::CovBalanced,
        "cap" => return Ok(StopCriterion::IterationCap(cap)),
        other => match other.strip_prefix("target=") {
            Some(v) => StopCriterion::target(v.parse().context("target makespan")?, tol),
            None => bail!("unknown stop rule `{other}`"),
        },
    };
    Ok(StopCriterion::capped(inner, cap))
}

#[allow(clippy::too_many_arguments)]
fn solve(
    instance: &Path,
    algo: Algorithm,
    seed: u64,
    cap: u64,
    stop: &str,
    tol: f64,
    out: Option<&Path>,
    trajectory: Option<&Path>,
) -> Result<()> {
    let inst = load_instance(instance)?;
    let stop = parse_stop(stop, &inst, cap, tol)?;
    let rec = run(algo, &inst, InitialSolution::Random, &stop, seed)?;
    for w in &rec.warnings {
        eprintln!("warning: {w}");
    }
    let mut doc = Document::new();
    doc.set("algorithm", algo.as_str());
    doc.set("seed", seed.to_string());
    doc.set("stop", stop.to_string());
    doc.set("iterations", rec.iterations.to_string());
    doc.set("final_fitness", real(rec.final_fitness));
    doc.set("stop_reason", rec.stop_reason.as_str());
    doc.set("solution", rec.final_solution.to_string());
    emit(out, &doc.to_string())?;

    if let Some(path) = trajectory {
        let mut t = CsvTable::new(&["iteration", "fitness"]);
        for p in &rec.trajectory {
            t.push(vec![
                p.iteration.to_string(),
                format_real(p.value, CSV_DIGITS),
            ]);
        }
        write_csv(path, &t)?;
    }
    Ok(())
}

fn exact(instance: &Path, method: Method, out: Option<&Path>) -> Result<()> {
    let inst = load_instance(instance)?;
    let closed = || -> Option<Result<(f64, Solution), ccmsp::Error>> {
        match inst.variant() {
            Variant::Ccmsp1 => Some(ccmsp1_optimum(&inst)),
            Variant::Ccmsp2Plus if inst.n() % 2 == 1 => Some(odd_optimum(&inst)),
            _ => None,
        }
    };
    let (name, (value, witness)) = match method {
        Method::Closed => match closed() {
            Some(r) => ("closed", r?),
            None => bail!("no closed form for this instance (CCMSP1 or odd CCMSP2PLUS only)"),
        },
        Method::Brute => ("brute", brute_force_optimum(&inst)?),
        Method::Auto => match closed() {
            Some(r) => ("closed", r?),
            None if inst.n() <= BRUTE_FORCE_LIMIT => ("brute", brute_force_optimum(&inst)?),
            None => bail!(
                "no closed form and n = {} exceeds the exhaustive-search limit {}",
                inst.n(),
                BRUTE_FORCE_LIMIT
            ),
        },
    };
    let mut doc = Document::new();
    doc.set("method", name);
    doc.set("value", real(value));
    doc.set("solution", witness.to_string());
    emit(out, &doc.to_string())
}

fn reduce(values: &[u64], out: Option<&Path>) -> Result<()> {
    let red = reduce_partition::<f64>(values)?;
    let doubled_split = balanced_partition_dp(&red.doubled)?;
    let mut info = Document::new();
    info.set_list("values", values);
    info.set("balanced_partition", doubled_split.is_some().to_string());
    if let Some(half) = &doubled_split {
        info.set_list("first_half", half);
    }
    info.set_list("group_of_element", &red.group_of_element);
    info.set("pair_lower_bound", red.pair_lower_bound().to_string());

    let instance = write_instance(&red.instance);
    match out {
        Some(path) => {
            emit(Some(path), &instance)?;
            emit(None, &info.to_string())
        }
        None => {
            let comments: String = info
                .to_string()
                .lines()
                .map(|l| format!("# {l}\n"))
                .collect();
            emit(None, &format!("{instance}{comments}"))
        }
    }
}

fn campaign(
    config: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    cap: Option<u64>,
    repetitions: Option<u64>,
) -> Result<()> {
    let mut cfg = load_config(config)?;
    if let Some(out) = out {
        cfg.out = out;
    }
    if let Some(seed) = seed {
        cfg.grid.seed = seed;
    }
    if let Some(cap) = cap {
        cfg.cap = cap;
    }
    if let Some(r) = repetitions {
        cfg.repetitions = r;
    }
    let output = run_campaign(&cfg)?;
    for path in write_campaign(&cfg, &output, &cfg.out)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn summarize_files(results: &[PathBuf], out: &Path) -> Result<()> {
    let mut rows = Vec::new();
    for path in results {
        rows.extend(read_results(path)?);
    }
    let summary = summarize(&rows)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_csv(&out.join("summary.csv"), &summary.rows_table())?;
    write_csv(&out.join("plot.csv"), &summary.plot_table())?;
    write_csv(&out.join("companions.csv"), &summary.companions_table())?;
    eprintln!("summarized {} runs into {}", rows.len(), out.display());
    Ok(())
}
