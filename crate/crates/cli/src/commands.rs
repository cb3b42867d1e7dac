use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use mvm::channel::{simulate as run_simulation, ChannelConfig};
use mvm::errprob::{
    solve_snr_at_target, spectral_efficiency, welch_rankin_bound, BerCurve, BoundKind, CurveKind, PairwiseMethod,
    SnrPoint, UnionBound,
};
use mvm::mapping::{anneal_restarts, initial_temperature, AnnealSchedule, BitMapping, PairErrorMatrix};
use mvm::par::Parallelism;
use mvm::shaping::{
    coherence_histogram, contact_graph, knn_edges, optimize, orthogonal_set, random_constellation, sic_povm,
    standard_hypercube, DescentConfig, DistanceMetric, Potential,
};
use mvm::{Constellation, Error};

use crate::failure::{CliResult, Failure};
use crate::manifest::RunManifest;
use crate::{EvalKind, GenKind, Method, PotentialKind};

const MAX_GRID: usize = 100_000;

/// `start:step:stop` (inclusive) or a single value.
pub fn parse_grid(range: &str) -> CliResult<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Failure::usage(format!("bad number '{s}' in SNR range '{range}'")))
    };
    let parts: Vec<&str> = range.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, s, b] => {
            let (a, s, b) = (num(a)?, num(s)?, num(b)?);
            if s.is_nan() || s <= 0.0 || b < a {
                return Err(Failure::usage(format!("SNR range '{range}' needs step > 0 and stop >= start")));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            if count > MAX_GRID {
                return Err(Failure::usage(format!("SNR range '{range}' has more than {MAX_GRID} points")));
            }
            Ok((0..count).map(|i| a + i as f64 * s).collect())
        }
        _ => Err(Failure::usage(format!("SNR range '{range}' is not start:step:stop"))),
    }
}

fn read(path: &Path) -> CliResult<Constellation> {
    Constellation::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn welch_gap(c: &Constellation) -> String {
    match welch_rankin_bound(c.n(), c.m()) {
        Ok(w) => format!("{:.6e}", c.max_coherence() - w),
        Err(_) => "n/a".into(),
    }
}

fn summary(c: &Constellation) -> String {
    let (lo, hi) = if c.m() > 1 {
        (c.min_coherence(), c.max_coherence())
    } else {
        (f64::NAN, f64::NAN)
    };
    format!(
        "N={} M={} min_gamma={lo:.6} max_gamma={hi:.6} welch_gap={}",
        c.n(),
        c.m(),
        welch_gap(c)
    )
}

pub fn gen(kind: GenKind, n: usize, m: Option<usize>, seed: u64, out: &Path, manifest: &mut RunManifest) -> CliResult<()> {
    let c = match kind {
        GenKind::Hypercube => {
            let full = standard_hypercube(n)?;
            match m {
                None => full,
                Some(m) if m >= 2 && m <= full.m() => {
                    let mut sub = Constellation::new(full.vectors()[..m].to_vec())?;
                    sub.metadata = full.metadata.clone();
                    sub.with_meta("subset", m)
                }
                Some(m) => {
                    return Err(Failure::usage(format!("hypercube subset m={m} outside 2..={}", full.m())));
                }
            }
        }
        GenKind::Sic => {
            if m.is_some_and(|m| m != n * n) {
                return Err(Failure::usage(format!("a SIC-POVM in N={n} has M={}", n * n)));
            }
            sic_povm(n, seed)?
        }
        GenKind::Orthogonal => orthogonal_set(n, m.unwrap_or(n))?,
        GenKind::Random => {
            let m = m.ok_or_else(|| Failure::usage("random constellations need --m"))?;
            random_constellation(n, m, seed)?
        }
    };
    c.write(out)?;
    println!("{}", summary(&c));
    manifest.seed(seed).output(out).write()
}

pub struct ShapeArgs {
    pub input: PathBuf,
    pub potential: PotentialKind,
    pub snr_db: Option<f64>,
    pub iters: usize,
    pub step: f64,
    pub grad_tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub trace: Option<PathBuf>,
}

/// Nearest-neighbor edge lengths grouped at 1e-3 resolution.
fn edge_groups(c: &Constellation) -> String {
    let k = 4.min(c.m().saturating_sub(1));
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for (_, _, d) in knn_edges(c, k, DistanceMetric::Stokes) {
        match groups.last_mut() {
            Some((v, count)) if (d - *v).abs() < 1e-3 => *count += 1,
            _ => groups.push((d, 1)),
        }
    }
    groups
        .iter()
        .map(|(d, count)| format!("{count}x{d:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn shape(args: &ShapeArgs, manifest: &mut RunManifest) -> CliResult<()> {
    let c = read(&args.input)?;
    let potential = match (args.potential, args.snr_db) {
        (PotentialKind::Thomson, _) => Potential::CoulombStokes,
        (PotentialKind::UnionBound, Some(db)) => Potential::UnionBound(SnrPoint::from_symbol_db(db, c.bits_per_symbol())?),
        (PotentialKind::UnionBound, None) => return Err(Failure::usage("the union-bound potential needs --snr-db")),
    };
    let cfg = DescentConfig {
        max_iters: args.iters,
        initial_step: args.step,
        grad_tolerance: args.grad_tol,
        seed: args.seed,
        ..Default::default()
    };
    let (shaped, trace) = optimize(&c, &potential, &cfg)?;
    let name = match args.potential {
        PotentialKind::Thomson => "thomson",
        PotentialKind::UnionBound => "union-bound",
    };
    let mut shaped = shaped
        .with_meta("potential", name)
        .with_meta("descent_seed", args.seed)
        .with_meta("descent_iterations", trace.iterations.len())
        .with_meta("descent_converged", trace.converged);
    if let Some(db) = args.snr_db {
        shaped = shaped.with_meta("descent_snr_db", db);
    }
    shaped.write(&args.out)?;
    manifest.seed(args.seed).input(&args.input).output(&args.out);
    if let Some(path) = &args.trace {
        std::fs::write(path, trace.to_csv())?;
        manifest.output(path);
    }
    println!(
        "energy initial={:.12e} final={:.12e} iterations={} converged={} stalled={} grad_norm={:.3e}",
        trace.initial_energy,
        trace.final_energy(),
        trace.iterations.len(),
        trace.converged,
        trace.stalled,
        trace.final_grad_norm
    );
    if shaped.m() > 1 {
        println!("nearest-neighbor edges (Stokes): {}", edge_groups(&shaped));
    }
    println!("{}", summary(&shaped));
    manifest.write()
}

pub fn map(input: &Path, snr_db: f64, restarts: usize, seed: u64, out: &Path, manifest: &mut RunManifest) -> CliResult<()> {
    let c = read(input)?;
    let start = match c.bits() {
        Some(b) => BitMapping::new(b.to_vec())?,
        None => BitMapping::identity(c.m())?,
    };
    if restarts == 0 {
        return Err(Failure::usage("--restarts must be >= 1"));
    }
    let snr = SnrPoint::from_bit_db(snr_db, c.bits_per_symbol())?;
    let t0 = initial_temperature(&c, &snr, 200, seed)?;
    let sched = AnnealSchedule::with_defaults(c.m(), t0, seed);
    let result = anneal_restarts(&c, &snr, &sched, Some(&start), restarts, Parallelism::default())?;
    let mapping = result.mapping.canonical();
    let xi = PairErrorMatrix::new(&c, &snr, Parallelism::default()).xi(mapping.labels());
    let labeled = c
        .with_bits(mapping.into_labels())?
        .with_meta("map_snr_db", snr_db)
        .with_meta("map_seed", seed)
        .with_meta("map_restarts", restarts);
    labeled.write(out)?;
    println!("xi before={:.12e} after={xi:.12e} (bit SNR {snr_db} dB)", result.start_xi);
    manifest.seed(seed).input(input).output(out).write()
}

fn method_of(m: Method) -> PairwiseMethod {
    match m {
        Method::Exact => PairwiseMethod::Exact,
        Method::Auto => PairwiseMethod::Auto,
        Method::Asymp0 => PairwiseMethod::Asymptotic0,
        Method::Asymp1 => PairwiseMethod::Asymptotic1,
        Method::Simple => PairwiseMethod::Simple,
    }
}

fn curve_kind(kind: EvalKind, m: Method) -> CurveKind {
    match (kind, m) {
        (EvalKind::Ser, Method::Exact | Method::Auto) => CurveKind::SymbolUnionBound,
        (EvalKind::Ber, Method::Exact | Method::Auto) => CurveKind::BitUnionBound,
        (_, Method::Asymp0) => CurveKind::Asymptotic0,
        (_, Method::Asymp1) => CurveKind::Asymptotic1,
        (_, Method::Simple) => CurveKind::AsymptoticSimple,
    }
}

pub fn eval(input: &Path, grid: &str, kind: EvalKind, method: Method, out: &Path, manifest: &mut RunManifest) -> CliResult<()> {
    let c = read(input)?;
    let grid = parse_grid(grid)?;
    let bound = match kind {
        EvalKind::Ser => BoundKind::Symbol,
        EvalKind::Ber => BoundKind::Bit,
    };
    if bound == BoundKind::Bit && c.bits().is_none() {
        return Err(Error::MissingLabels.into());
    }
    let ub = UnionBound::new(&c, Parallelism::default());
    let pm = method_of(method);
    let mut points = Vec::with_capacity(grid.len());
    for &db in &grid {
        let snr = ub.snr_at_db(db, bound)?;
        let p = ub.evaluate(&snr, bound, pm)?;
        if !p.is_finite() {
            return Err(Failure::numerical(format!("bound is {p} at {db} dB")));
        }
        points.push((db, p));
    }
    let curve = BerCurve::new(curve_kind(kind, method), points)?;
    if !curve.is_non_increasing() {
        return Err(Failure::numerical("bound curve increases with SNR"));
    }
    std::fs::write(out, curve.to_csv())?;
    let axis = match bound {
        BoundKind::Symbol => "symbol",
        BoundKind::Bit => "bit",
    };
    for target in [1e-4, 1e-9] {
        match solve_snr_at_target(&c, target, bound) {
            Ok(snr) => {
                let db = if bound == BoundKind::Bit { snr.bit_db() } else { snr.symbol_db() };
                println!("{axis} SNR at {target:.0e}: {db:.4} dB");
            }
            Err(Error::TargetUnreachable { .. }) => println!("{axis} SNR at {target:.0e}: unreachable"),
            Err(e) => return Err(e.into()),
        }
    }
    manifest.input(input).output(out).write()
}

pub struct SimulateArgs {
    pub input: PathBuf,
    pub snr_db: String,
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
    pub json: Option<PathBuf>,
    pub early_stop: bool,
    pub random_phase: bool,
}

fn append_rows(path: &Path, curve: &BerCurve) -> CliResult<()> {
    let existing = std::fs::read_to_string(path).unwrap_or_default();
    if existing.trim().is_empty() {
        std::fs::write(path, curve.to_csv())?;
        return Ok(());
    }
    if existing.lines().next().map(str::trim) != Some(BerCurve::csv_header()) {
        return Err(Failure::usage(format!("{} is not a curve CSV", path.display())));
    }
    let mut f = OpenOptions::new().append(true).open(path)?;
    if !existing.ends_with('\n') {
        f.write_all(b"\n")?;
    }
    f.write_all(curve.csv_rows().as_bytes())?;
    Ok(())
}

pub fn simulate(args: &SimulateArgs, manifest: &mut RunManifest) -> CliResult<()> {
    let c = read(&args.input)?;
    let grid = parse_grid(&args.snr_db)?;
    if args.trials == 0 {
        return Err(Failure::usage("--trials must be >= 1"));
    }
    let bits = c.bits().is_some();
    let k = c.bits_per_symbol();
    let mut points = Vec::new();
    let mut records = Vec::new();
    for (i, &db) in grid.iter().enumerate() {
        let snr = if bits {
            SnrPoint::from_bit_db(db, k)?
        } else {
            SnrPoint::from_symbol_db(db, k)?
        };
        let seed = args.seed.wrapping_add(i as u64);
        let mut cfg = ChannelConfig::new(snr, args.trials, seed);
        cfg.count_bits = bits;
        cfg.early_stop = args.early_stop;
        cfg.apply_random_phase = args.random_phase;
        let r = run_simulation(&c, &cfg)?;
        let (value, stderr) = match (r.ber, r.ber_stderr) {
            (Some(p), Some(se)) => (p, se),
            _ => (r.ser, r.ser_stderr),
        };
        println!(
            "{db:>8.3} dB  {}={value:.6e} +/- {stderr:.2e}  ({} trials)",
            if bits { "ber" } else { "ser" },
            r.trials
        );
        points.push((db, value));
        records.push(format!("  {{\"snr_db\": {db}, \"result\": {}}}", r.to_json()));
        manifest.seed(seed);
    }
    let curve = BerCurve::new(CurveKind::MonteCarlo, points)?;
    append_rows(&args.out, &curve)?;
    let json_path = args.json.clone().unwrap_or_else(|| {
        let mut p = args.out.as_os_str().to_owned();
        p.push(".json");
        PathBuf::from(p)
    });
    std::fs::write(&json_path, format!("[\n{}\n]\n", records.join(",\n")))?;
    manifest.input(&args.input).output(&args.out).output(&json_path).write()
}

pub fn inspect(input: &Path, bin_width: f64) -> CliResult<()> {
    let c = read(input)?;
    println!("N = {}", c.n());
    println!("M = {}", c.m());
    println!("eta = {:.6} bit/SDOF", spectral_efficiency(&c));
    println!("labels = {}", if c.bits().is_some() { "present" } else { "absent" });
    if c.m() < 2 {
        return Ok(());
    }
    println!("gamma min = {:.6} max = {:.6}", c.min_coherence(), c.max_coherence());
    println!("welch gap = {}", welch_gap(&c));
    let h = coherence_histogram(&c, DistanceMetric::Stokes, bin_width)?;
    println!(
        "Stokes distance histogram (width {bin_width}, min {:.6}, max {:.6}, mean {:.6}):",
        h.min, h.max, h.mean
    );
    for (edge, count) in h.occupied() {
        println!("  [{edge:.4}, {:.4})  {count}", edge + bin_width);
    }
    let (edges, degrees) = contact_graph(&c, DistanceMetric::Stokes, 1.05);
    let mut by_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &degrees {
        *by_degree.entry(d).or_default() += 1;
    }
    let mean = degrees.iter().sum::<usize>() as f64 / degrees.len() as f64;
    println!(
        "nearest-neighbor graph (within 1.05x min distance): {} edges, mean degree {mean:.3}",
        edges.len()
    );
    for (d, count) in by_degree {
        println!("  degree {d}: {count} vertices");
    }
    Ok(())
}
