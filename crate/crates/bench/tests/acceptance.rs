//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{self, Command};
use std::time::Instant;

use ccmsp::oracle::*;
use ccmsp::solver::Algorithm;
use ccmsp::suite::Parity;
use ccmsp::{
    chance_bound, choose2, fitness, machine_stats, Instance64, LoadState, Machine, Solution,
    Variant,
};
use ccmsp_bench::{run_campaign, summarize, CampaignConfig, ResultRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Check = fn() -> Result<String, String>;

fn main() {
    let checks: [(&str, &str, Check); 9] = [
        (
            "AC1",
            "companion makespans at default parameters",
            ac1_table_corners,
        ),
        (
            "AC2",
            "closed-form optima equal exhaustive search",
            ac2_oracle_equivalence,
        ),
        (
            "AC3",
            "RLS reaches the optimum on small equal-size grids",
            ac3_rls_optimality,
        ),
        (
            "AC4",
            "RLS needs no more iterations than the (1+1) EA",
            ac4_rls_vs_ea,
        ),
        (
            "AC5",
            "even companions censored more often than odd ones",
            ac5_even_odd_gap,
        ),
        (
            "AC6",
            "balanced-partition DP equals subset enumeration",
            ac6_dp,
        ),
        ("AC7", "model invariants", ac7_invariants),
        (
            "AC8",
            "partition reduction decides the partition question",
            ac8_reduction,
        ),
        (
            "AC9",
            "CLI output is byte-identical across reruns",
            ac9_determinism,
        ),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_message(&e))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name} ({secs:.1}s): {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn campaign(text: &str) -> Vec<ResultRow> {
    let cfg = CampaignConfig::parse(text).expect("valid config");
    run_campaign(&cfg).expect("campaign runs").rows
}

fn ac1_table_corners() -> Result<String, String> {
    let rows = campaign("variant = CCMSP2PLUS\nk = 4 8\nm = 10 400\nrepetitions = 30");
    let summary = summarize(&rows).map_err(|e| e.to_string())?;
    let cell = |k: usize, size: usize, parity: Parity| {
        let row = summary
            .companions
            .iter()
            .find(|r| r.k == k && r.size == size)
            .expect("grid point present");
        match parity {
            Parity::Even => row.even.unwrap(),
            Parity::Odd => row.odd.unwrap(),
        }
    };
    // published values and tolerances
    let expected = [
        (4, 10, Parity::Even, 2001.9494, 1e-3),
        (4, 10, Parity::Odd, 2101.9975, 1e-3),
        (8, 10, Parity::Even, 4002.7569, 1e-3),
        (4, 400, Parity::Even, 80012.3464, 5e-2),
    ];
    let mut report = Vec::new();
    for (k, size, parity, want, tol) in expected {
        let got = cell(k, size, parity);
        let line = format!(
            "k={k} n={} {} {got:.4} vs {want}",
            k * size + (parity == Parity::Odd) as usize,
            parity
        );
        ensure((got - want).abs() <= tol, || {
            format!("{line} (tolerance {tol})")
        })?;
        report.push(line);
    }
    Ok(report.join("; "))
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn ac2_oracle_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC2);
    let mut equal = Vec::new();
    while equal.len() < 250 {
        let m = 2 * rng.random_range(1..=3);
        let k = rng.random_range(1..=12 / m);
        let c = [0.0, 1e-7, 1e-3, 1e-2, 0.5, 5.0][rng.random_range(0..6)];
        let inst = Instance64::ccmsp1(
            k,
            m,
            rng.random_range(1.0..200.0),
            rng.random_range(0.0..1.0),
            c,
            rng.random_range(0.01..0.99),
        )
        .unwrap();
        equal.push(inst);
    }
    let mut odd = Vec::new();
    while odd.len() < 250 {
        let k = rng.random_range(1..=5);
        let mut sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..=7)).collect();
        sizes.sort_unstable();
        let n: usize = sizes.iter().sum();
        if n.is_multiple_of(2) || n > 13 {
            continue;
        }
        let c = [0.0, 1e-7, 1e-3, 1e-2][rng.random_range(0..4)];
        if let Ok(inst) = Instance64::uniform(
            Variant::Ccmsp2Plus,
            sizes,
            100.0,
            0.01,
            c,
            rng.random_range(0.01..0.5),
        ) {
            odd.push(inst);
        }
    }
    let mismatches: Vec<String> = equal
        .par_iter()
        .map(|i| (i, ccmsp1_optimum(i).unwrap().0))
        .chain(odd.par_iter().map(|i| (i, odd_optimum(i).unwrap().0)))
        .filter_map(|(inst, closed)| {
            let (brute, _) = brute_force_optimum(inst).unwrap();
            (!rel_close(closed, brute)).then(|| format!("{:?}: {closed} vs {brute}", inst.sizes()))
        })
        .collect();
    ensure(mismatches.is_empty(), || {
        format!("{} mismatches, first {}", mismatches.len(), mismatches[0])
    })?;
    Ok(format!(
        "{} equal-size and {} odd instances agree",
        equal.len(),
        odd.len()
    ))
}

/// (k, m, c bits, algorithm) -> (mean iterations, runs, solved runs)
type GridMeans = BTreeMap<(usize, usize, u64, Algorithm), (f64, usize, usize)>;

fn mean_iterations(rows: &[ResultRow]) -> GridMeans {
    let mut acc: BTreeMap<_, (u64, usize, usize)> = BTreeMap::new();
    for r in rows {
        let e = acc
            .entry((r.k, r.size, r.c.to_bits(), r.algorithm))
            .or_default();
        e.0 += r.iterations;
        e.1 += 1;
        e.2 += (!r.censored()) as usize;
    }
    acc.into_iter()
        .map(|(key, (sum, runs, solved))| (key, (sum as f64 / runs as f64, runs, solved)))
        .collect()
}

fn ac3_rls_optimality() -> Result<String, String> {
    let rows = campaign(
        "variant = CCMSP1\nk = 4 8\nm = 10 50\nalgorithms = RLS\nrepetitions = 30\ncap = 100000",
    );
    let stats = mean_iterations(&rows);
    let mut worst = 30;
    for ((k, m, c, _), (_, runs, solved)) in &stats {
        ensure(*runs == 30 && *solved >= 29, || {
            format!(
                "k={k} m={m} c={}: {solved}/{runs} solved",
                f64::from_bits(*c)
            )
        })?;
        worst = worst.min(*solved);
    }
    let mut ratios = Vec::new();
    for c in [1e-2f64, 1e-3, 1e-7] {
        let small = stats[&(4, 10, c.to_bits(), Algorithm::Rls)].0;
        let large = stats[&(8, 50, c.to_bits(), Algorithm::Rls)].0;
        ensure(small < large, || {
            format!("c={c}: mean {small} (k=4,m=10) >= {large} (k=8,m=50)")
        })?;
        ratios.push(format!("c={c}: {small:.0} < {large:.0}"));
    }
    Ok(format!(
        "at least {worst}/30 solved at every point; {}",
        ratios.join(", ")
    ))
}

fn ac4_rls_vs_ea() -> Result<String, String> {
    let rows = campaign("variant = CCMSP1\nk = 4 8 16\nrepetitions = 30\ncap = 100000");
    let stats = mean_iterations(&rows);
    let mut points = 0;
    let mut tightest = f64::INFINITY;
    for (&(k, m, c, alg), &(rls, _, _)) in &stats {
        if alg != Algorithm::Rls {
            continue;
        }
        let ea = stats[&(k, m, c, Algorithm::Ea)].0;
        ensure(rls <= ea, || {
            format!(
                "k={k} m={m} c={}: RLS {rls:.1} > EA {ea:.1}",
                f64::from_bits(c)
            )
        })?;
        tightest = tightest.min(ea / rls);
        points += 1;
    }
    Ok(format!(
        "{points} grid points, smallest EA/RLS ratio {tightest:.2}"
    ))
}

fn ac5_even_odd_gap() -> Result<String, String> {
    let rows = campaign(
        "variant = CCMSP2PLUS\nk = 8 16 32 64 128\nm = 10\nrepetitions = 30\ncap = 100000",
    );
    let mut censored: BTreeMap<(usize, Parity), (usize, usize)> = BTreeMap::new();
    for r in &rows {
        let e = censored.entry((r.k, r.parity.unwrap())).or_default();
        e.0 += r.censored() as usize;
        e.1 += 1;
    }
    let mut report = Vec::new();
    let mut ok = true;
    for k in [8, 16, 32, 64, 128] {
        let (ce, ne) = censored[&(k, Parity::Even)];
        let (co, no) = censored[&(k, Parity::Odd)];
        let frac_even = ce as f64 / ne as f64;
        let frac_odd = co as f64 / no as f64;
        ok &= frac_even > frac_odd;
        report.push(format!("k={k} even {ce}/{ne} odd {co}/{no}"));
    }
    let report = format!("censored runs: {}", report.join(", "));
    if ok {
        Ok(report)
    } else {
        Err(report)
    }
}

fn has_balanced_split(values: &[u64]) -> bool {
    let n = values.len();
    let total: u64 = values.iter().sum();
    (0u32..1 << n).any(|mask| {
        mask.count_ones() as usize * 2 == n
            && (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| values[i])
                .sum::<u64>()
                * 2
                == total
    })
}

fn ac6_dp() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC6);
    let (mut decided, mut yes, mut refused) = (0, 0, 0);
    // well-formed multisets (even size, even sum) until 10^4 have been decided,
    // malformed ones along the way must be refused
    while decided < 10_000 {
        let len = rng.random_range(0..=12);
        let values: Vec<u64> = (0..len).map(|_| rng.random_range(0..=10)).collect();
        let sum: u64 = values.iter().sum();
        let got = balanced_partition_dp(&values);
        if len % 2 == 1 || sum % 2 == 1 {
            ensure(got.is_err(), || format!("{values:?} should be refused"))?;
            refused += 1;
            continue;
        }
        let got = got.map_err(|e| e.to_string())?;
        let want = has_balanced_split(&values);
        ensure(got.is_some() == want, || {
            format!("{values:?}: dp {} enumeration {want}", got.is_some())
        })?;
        if let Some(idx) = got {
            let s: u64 = idx.iter().map(|&i| values[i]).sum();
            ensure(idx.len() * 2 == len && s * 2 == sum, || {
                format!("{values:?}: bad witness {idx:?}")
            })?;
            yes += 1;
        }
        decided += 1;
    }
    Ok(format!(
        "{decided} decided ({yes} yes), {refused} malformed refused"
    ))
}

fn ac7_invariants() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAC7);

    // probability bound at M stays within gamma exactly when M >= fitness
    let inst =
        Instance64::uniform(Variant::Ccmsp2, vec![2, 5, 9], 100.0, 0.01, 0.01, 0.05).unwrap();
    for _ in 0..1000 {
        let sol = Solution::random(inst.n(), &mut rng);
        let f = fitness(&inst, &sol).unwrap().value;
        for delta in [-0.5, -1e-7, 1e-7, 0.5, 10.0] {
            let m = f + delta;
            let Ok(bounds) = chance_bound(&inst, &sol, m) else {
                continue;
            };
            let within = bounds.iter().all(|&p| p <= inst.gamma());
            ensure(within == (m >= f), || {
                format!("bound/fitness disagree at delta {delta}")
            })?;
        }
    }

    // counters under 10^4 random flips
    let inst = Instance64::new(
        Variant::General,
        vec![3, 4, 7, 10],
        50.0,
        0.3,
        vec![0.1, 0.0, 2.0, 0.01],
        0.1,
    )
    .unwrap();
    let mut sol = Solution::random(inst.n(), &mut rng);
    let mut load = LoadState::new(&inst, &sol).unwrap();
    for step in 0..10_000 {
        let bit = rng.random_range(0..inst.n());
        load.apply_flip(&inst, &mut sol, bit).unwrap();
        if step % 100 == 99 {
            ensure(load == machine_stats(&inst, &sol).unwrap(), || {
                format!("counter drift after {} flips", step + 1)
            })?;
        }
    }

    // equal groups: more jobs means larger surrogate
    let inst = Instance64::ccmsp1(4, 10, 100.0, 0.01, 0.01, 0.05).unwrap();
    for _ in 0..1000 {
        let sol = Solution::random(inst.n(), &mut rng);
        let l = LoadState::new(&inst, &sol).unwrap();
        let (s0, s1): (f64, f64) = (
            l.surrogate(&inst, Machine::M0),
            l.surrogate(&inst, Machine::M1),
        );
        let (n0, n1) = (l.count(Machine::M0), l.count(Machine::M1));
        let ok = match n0.cmp(&n1) {
            std::cmp::Ordering::Greater => s0 > s1,
            std::cmp::Ordering::Less => s1 > s0,
            std::cmp::Ordering::Equal => (s0 - s1).abs() <= 1e-9,
        };
        ensure(ok, || format!("counts {n0}/{n1} but surrogates {s0}/{s1}"))?;
    }

    // extra constraint: fewer jobs on the fuller machine means smaller fitness
    let inst = Instance64::uniform(
        Variant::Ccmsp2Plus,
        vec![2, 3, 8, 12],
        100.0,
        0.01,
        1e-7,
        0.05,
    )
    .unwrap();
    let mut sample = Vec::new();
    for _ in 0..1000 {
        let p: f64 = rng.random();
        let sol = Solution::from_bits((0..inst.n()).map(|_| rng.random_bool(p)).collect());
        let l = LoadState::new(&inst, &sol).unwrap();
        let f = l.fitness(&inst);
        sample.push((l.count(f.argmax), f.value));
    }
    for &(c1, f1) in &sample {
        for &(c2, f2) in &sample {
            ensure(c1 >= c2 || f1 < f2, || {
                format!("fuller counts {c1} < {c2} but fitness {f1} >= {f2}")
            })?;
        }
    }

    // pair counts: even splits minimize, merging maximizes
    for _ in 0..100_000 {
        let x: u64 = rng.random_range(0..100_000);
        let y: u64 = rng.random_range(0..100_000);
        let s = x + y;
        let split = choose2(s / 2) + choose2(s - s / 2);
        let pair = choose2(x) + choose2(y);
        ensure(split <= pair && pair <= choose2(s), || {
            format!("pair-count inequality fails at ({x}, {y})")
        })?;
    }

    // relabeling machines
    let inst = Instance64::new(
        Variant::General,
        vec![1, 4, 6],
        7.0,
        1.5,
        vec![0.4, 3.0, 0.0],
        0.3,
    )
    .unwrap();
    for _ in 0..1000 {
        let sol = Solution::random(inst.n(), &mut rng);
        let a = fitness(&inst, &sol).unwrap().value;
        let b = fitness(&inst, &sol.complement()).unwrap().value;
        ensure(a == b, || format!("complement changes fitness: {a} vs {b}"))?;
    }

    Ok("Chebyshev equivalence, 10^4 flips, count orderings on 10^3 solutions each, 10^5 pair-count samples, complement symmetry".into())
}

fn multisets(len: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(len: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            go(len, v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, max, &mut Vec::new(), &mut out);
    out
}

fn ac8_reduction() -> Result<String, String> {
    let sets: Vec<Vec<u64>> = [2, 4, 6]
        .into_iter()
        .flat_map(|len| multisets(len, 4))
        // n = sum(2e + 1) must stay within exhaustive search
        .filter(|s| s.iter().map(|&e| 2 * e as usize + 1).sum::<usize>() <= BRUTE_FORCE_LIMIT)
        .collect();
    let mut yes = 0;
    for s in &sets {
        let red = reduce_partition::<f64>(s).map_err(|e| e.to_string())?;
        ensure(red.instance.satisfies_extra_constraint(), || {
            format!("{s:?}: extra constraint fails")
        })?;
        let (_, best) = brute_force_optimum(&red.instance).map_err(|e| e.to_string())?;
        let attained = red.attains_lower_bound(&best).unwrap();
        let decision = balanced_partition_dp(&red.doubled).unwrap().is_some();
        ensure(attained == decision, || {
            format!("{s:?}: optimum attains bound {attained}, dp says {decision}")
        })?;
        yes += decision as usize;
    }
    Ok(format!("{} multisets ({yes} yes-instances)", sets.len()))
}

fn ccmsp(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ccmsp"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "`ccmsp {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                files.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn ac9_determinism() -> Result<String, String> {
    let one_session = || -> Result<BTreeMap<String, Vec<u8>>, String> {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let dir = tmp.path();
        std::fs::write(
            dir.join("grid.conf"),
            "variant = CCMSP2PLUS\nk = 4 8\nm = 10\nrepetitions = 3\ncap = 20000\nseed = 5\ntrajectories = true\n",
        )
        .unwrap();
        std::fs::write(
            dir.join("ea.conf"),
            "variant = CCMSP1\nk = 4\nm = 10\nc = 0.01\nrepetitions = 3\nseed = 5\n",
        )
        .unwrap();
        let mut stdout = Vec::new();
        stdout.extend(ccmsp(
            dir,
            &["gen", "--config", "grid.conf", "--out", "inst"],
        )?);
        let inst = "inst/ccmsp2p-k8-n81-c1e-7-odd.inst";
        stdout.extend(ccmsp(
            dir,
            &[
                "solve",
                "--instance",
                inst,
                "--algo",
                "ea11",
                "--seed",
                "7",
                "--trajectory",
                "trace.csv",
                "--out",
                "solve.txt",
            ],
        )?);
        stdout.extend(ccmsp(
            dir,
            &[
                "solve",
                "--instance",
                "inst/ccmsp2p-k8-n80-c1e-7-even.inst",
                "--seed",
                "7",
                "--stop",
                "cov_balanced",
            ],
        )?);
        stdout.extend(ccmsp(dir, &["exact", "--instance", inst])?);
        stdout.extend(ccmsp(
            dir,
            &[
                "reduce",
                "--values",
                "1",
                "1",
                "2",
                "2",
                "--out",
                "reduced.inst",
            ],
        )?);
        stdout.extend(ccmsp(
            dir,
            &["exact", "--instance", "reduced.inst", "--method", "brute"],
        )?);
        stdout.extend(ccmsp(
            dir,
            &["campaign", "--config", "grid.conf", "--out", "runs"],
        )?);
        stdout.extend(ccmsp(
            dir,
            &["campaign", "--config", "ea.conf", "--out", "runs-ea"],
        )?);
        stdout.extend(ccmsp(
            dir,
            &[
                "summarize",
                "--results",
                "runs/results.csv",
                "--out",
                "summary",
            ],
        )?);
        let mut files = snapshot(dir);
        files.insert("<stdout>".into(), stdout);
        Ok(files)
    };
    let a = one_session()?;
    let b = one_session()?;
    let differing: Vec<&String> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
    ensure(a.len() == b.len() && differing.is_empty(), || {
        format!("outputs differ: {differing:?}")
    })?;
    Ok(format!(
        "{} output files identical across two sessions",
        a.len() - 1
    ))
}
