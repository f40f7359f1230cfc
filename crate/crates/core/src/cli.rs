//! Command-line front end.
//!
//! Settings come from an optional `key = value` file and from flags; flags
//! win. Every subcommand writes UTF-8 text to `--out` or stdout.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible or oversize
//! problem, 4 failed verification.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::combinatorics::log_count_by_profile;
use crate::ensembles::{CountVector, EnsembleSpec, FrequencyVector, TreeKind};
use crate::error::Error;
use crate::lattice::Lattice;
use crate::ldp::{
    convergence_table, inf_rate_beyond, lattice_log_partition, lln_tail, SweepOptions,
};
use crate::partition::{log_partition_of, DpTable, DEFAULT_LATTICE_CAP};
use crate::rate::{solve_pstar, Tilt};
use crate::rng::stream_rng;
use crate::treegen::{
    chi_of, cycle_lemma_rotation, energy_of, enumerate_labeled_trees, enumerate_plane_trees,
    prufer_decode, prufer_encode, LabeledSampler, PlaneSampler,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

pub const ORACLE_MAX_LABELED: usize = 8;
pub const ORACLE_MAX_PLANE: usize = 10;
const ORACLE_REL_TOL: f64 = 1e-9;
const SAMPLE_CHUNK: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "gibbs-trees",
    version,
    about = "Gibbs ensembles of degree-bounded random trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the frequency minimizer p*, J(p*) and the tilt parameter.
    Pstar(RunArgs),
    /// Draw exact samples and summarize the class frequencies.
    Sample(RunArgs),
    /// Finite-N rates of an l1 ball versus the rate function.
    LdpTable(RunArgs),
    /// Exact tail probabilities around p*.
    Lln(RunArgs),
    /// Compare closed forms against exhaustive enumeration.
    OracleCheck(RunArgs),
}

/// Raw settings; every value is parsed after merging with the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// `labeled` or `plane`.
    #[arg(long)]
    pub kind: Option<String>,
    /// Degree bound D.
    #[arg(long)]
    pub bound: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Energy table c, one value per class, e.g. `0,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Strictly increasing sizes, e.g. `100,200,400`.
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Key-value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Ball center for `ldp-table` (defaults to p*).
    #[arg(long)]
    pub point: Option<String>,
    /// Grid resolution for constrained minimization of I.
    #[arg(long)]
    pub resolution: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Model(Error),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(
                Error::NoFeasibleTree { .. }
                | Error::SizeOverflow { .. }
                | Error::LatticeTooLarge { .. }
                | Error::TooLarge { .. },
            ) => EXIT_INFEASIBLE,
            _ => EXIT_CONFIG,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A serialized tree with the class of each vertex.
type Draw = (String, Vec<usize>);

type CommandFn = fn(&RunConfig, &mut dyn Write) -> CliResult<bool>;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: EnsembleSpec,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub eps: f64,
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub resolution: usize,
    pub point: Option<Vec<f64>>,
}

impl RunConfig {
    /// Sizes from `n_list`, falling back to `n`.
    pub fn sizes(&self) -> CliResult<Vec<usize>> {
        match (&self.n_list, self.n) {
            (Some(list), _) => Ok(list.clone()),
            (None, Some(n)) => Ok(vec![n]),
            (None, None) => Err(config_err("missing `n` or `n_list`")),
        }
    }

    pub fn single_n(&self) -> CliResult<usize> {
        self.n.ok_or_else(|| config_err("missing `n`"))
    }

    fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            workers: self.workers,
            cap: DEFAULT_LATTICE_CAP,
        }
    }
}

const KEYS: &[(&str, &str)] = &[
    ("kind", "kind"),
    ("bound", "bound"),
    ("d", "bound"),
    ("beta", "beta"),
    ("c", "energy"),
    ("energy", "energy"),
    ("n", "n"),
    ("n_list", "n_list"),
    ("n-list", "n_list"),
    ("eps", "eps"),
    ("delta", "delta"),
    ("samples", "samples"),
    ("seed", "seed"),
    ("workers", "workers"),
    ("out", "out"),
    ("resolution", "resolution"),
    ("point", "point"),
];

fn canonical_key(key: &str) -> Option<&'static str> {
    let lower = key.to_ascii_lowercase();
    KEYS.iter().find(|(k, _)| *k == lower).map(|(_, c)| *c)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<HashMap<&'static str, String>> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        let canon = canonical_key(key)
            .ok_or_else(|| config_err(format!("line {}: unknown key `{key}`", lineno + 1)))?;
        map.insert(canon, value.trim().to_string());
    }
    Ok(map)
}

fn parse_scalar<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    v.trim()
        .parse::<T>()
        .map_err(|e| config_err(format!("bad value `{v}` for `{key}`: {e}")))
}

/// Accepts `[a, b]`, `a,b` or `a b`.
pub fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
    let items: Vec<&str> = inner
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(config_err(format!("`{key}` is an empty list")));
    }
    items.iter().map(|s| parse_scalar(key, s)).collect()
}

impl RunArgs {
    fn flag_values(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut push = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                out.push((k, v.clone()));
            }
        };
        push("kind", &self.kind);
        push("bound", &self.bound);
        push("beta", &self.beta);
        push("energy", &self.energy);
        push("n", &self.n);
        push("n_list", &self.n_list);
        push("eps", &self.eps);
        push("delta", &self.delta);
        push("samples", &self.samples);
        push("seed", &self.seed);
        push("workers", &self.workers);
        push("resolution", &self.resolution);
        push("point", &self.point);
        if let Some(out_path) = &self.out {
            out.push(("out", out_path.to_string_lossy().into_owned()));
        }
        out
    }

    /// Merges the config file (if any) with flags and validates the result.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut map = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => HashMap::new(),
        };
        for (k, v) in self.flag_values() {
            map.insert(k, v);
        }
        resolve_map(&map)
    }
}

pub fn resolve_map(map: &HashMap<&'static str, String>) -> CliResult<RunConfig> {
    let get = |k: &str| map.get(k).map(String::as_str);
    let kind: TreeKind = match get("kind") {
        Some(v) => v.parse().map_err(|e: Error| config_err(e.to_string()))?,
        None => return Err(config_err("missing `kind`")),
    };
    let bound: usize = match get("bound") {
        Some(v) => parse_scalar("bound", v)?,
        None => return Err(config_err("missing `bound`")),
    };
    let beta: f64 = get("beta").map_or(Ok(1.0), |v| parse_scalar("beta", v))?;
    if !beta.is_finite() {
        return Err(config_err("`beta` must be finite"));
    }
    let classes = (bound + 1).saturating_sub(kind.first_class());
    let energy: Vec<f64> = match get("energy") {
        Some(v) => parse_list("c", v)?,
        None => vec![0.0; classes],
    };
    let spec =
        EnsembleSpec::new(kind, bound, beta, energy).map_err(|e| config_err(e.to_string()))?;

    let n = get("n")
        .map(|v| parse_scalar::<usize>("n", v))
        .transpose()?;
    let n_list = get("n_list")
        .map(|v| parse_list::<usize>("n_list", v))
        .transpose()?;
    if let Some(list) = &n_list {
        if list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config_err("`n_list` must be strictly increasing"));
        }
    }
    let eps: f64 = get("eps").map_or(Ok(0.05), |v| parse_scalar("eps", v))?;
    let delta: f64 = get("delta").map_or(Ok(0.1), |v| parse_scalar("delta", v))?;
    if !is_positive(eps) || !is_positive(delta) {
        return Err(config_err("`eps` and `delta` must be positive"));
    }
    let samples: usize = get("samples").map_or(Ok(1000), |v| parse_scalar("samples", v))?;
    if samples == 0 {
        return Err(config_err("`samples` must be at least 1"));
    }
    let seed: u64 = get("seed").map_or(Ok(0), |v| parse_scalar("seed", v))?;
    let workers: usize = get("workers").map_or(Ok(1), |v| parse_scalar("workers", v))?;
    if workers == 0 {
        return Err(config_err("`workers` must be at least 1"));
    }
    let resolution: usize =
        get("resolution").map_or(Ok(1000), |v| parse_scalar("resolution", v))?;
    let point = get("point")
        .map(|v| parse_list::<f64>("point", v))
        .transpose()?;
    let out = get("out").map(PathBuf::from);
    Ok(RunConfig {
        spec,
        n,
        n_list,
        eps,
        delta,
        samples,
        seed,
        workers,
        out,
        resolution,
        point,
    })
}

fn is_positive(x: f64) -> bool {
    x > 0.0
}

/// `printf("%.12g")`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| fmt_num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn open_sink(cfg: &RunConfig) -> CliResult<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                config_err(format!("cannot create {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (args, cmd): (&RunArgs, CommandFn) = match &cli.command {
        Command::Pstar(a) => (a, cmd_pstar),
        Command::Sample(a) => (a, cmd_sample),
        Command::LdpTable(a) => (a, cmd_ldp_table),
        Command::Lln(a) => (a, cmd_lln),
        Command::OracleCheck(a) => (a, cmd_oracle_check),
    };
    let outcome = args.resolve().and_then(|cfg| {
        let mut sink = open_sink(&cfg)?;
        let ok = cmd(&cfg, &mut *sink)?;
        sink.flush()?;
        Ok(ok)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            eprintln!("gibbs-trees: {e}");
            e.exit_code()
        }
    }
}

pub fn cmd_pstar(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let ctx = solve_pstar(&cfg.spec)?;
    let spec = ctx.spec();
    writeln!(out, "kind = {}", spec.kind)?;
    writeln!(out, "bound = {}", spec.bound)?;
    writeln!(out, "beta = {}", fmt_num(spec.beta))?;
    writeln!(out, "c = {}", fmt_vec(&spec.energy))?;
    writeln!(out, "first_class = {}", spec.first_class())?;
    writeln!(out, "pstar = {}", fmt_vec(ctx.pstar().as_slice()))?;
    writeln!(out, "j_star = {}", fmt_num(ctx.j_star()))?;
    match ctx.tilt() {
        Tilt::Interior { x } => {
            writeln!(out, "boundary = false")?;
            writeln!(out, "tilt_x = {}", fmt_num(x))?;
        }
        Tilt::Boundary => writeln!(out, "boundary = true")?,
    }
    if let Some(r) = ctx.stationarity_residual() {
        writeln!(out, "stationarity_residual = {}", fmt_num(r))?;
    }
    Ok(true)
}

enum AnySampler {
    Labeled(LabeledSampler),
    Plane(PlaneSampler),
}

impl AnySampler {
    /// Serialized tree and vertex classes of draw `index`.
    fn draw(&self, seed: u64, index: u64) -> CliResult<Draw> {
        let mut rng = stream_rng(seed, index);
        Ok(match self {
            AnySampler::Labeled(s) => {
                let t = s.sample(&mut rng)?;
                (t.to_string(), t.degrees())
            }
            AnySampler::Plane(s) => {
                let t = s.sample(&mut rng)?;
                (t.to_string(), t.child_counts().to_vec())
            }
        })
    }
}

/// Trees first (plane trees one per line, labeled trees as edge blocks
/// separated by blank lines), then a blank line and the frequency summary.
pub fn cmd_sample(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let n = cfg.single_n()?;
    let spec = &cfg.spec;
    let ctx = solve_pstar(spec)?;
    let dp = DpTable::build(spec, n)?;
    let sampler = match spec.kind {
        TreeKind::Labeled => AnySampler::Labeled(LabeledSampler::from_table(dp)?),
        TreeKind::Plane => AnySampler::Plane(PlaneSampler::from_table(dp)?),
    };
    let first = spec.first_class();
    let mut class_totals = vec![0u64; spec.num_classes()];
    let mut start = 0usize;
    while start < cfg.samples {
        let end = (start + SAMPLE_CHUNK * cfg.workers).min(cfg.samples);
        let draws = draw_range(&sampler, cfg.seed, start, end, cfg.workers)?;
        for (i, (text, classes)) in draws.iter().enumerate() {
            if spec.kind == TreeKind::Labeled && start + i > 0 {
                writeln!(out)?;
            }
            out.write_all(text.as_bytes())?;
            for &k in classes {
                class_totals[k - first] += 1;
            }
        }
        start = end;
    }
    let vertices = (cfg.samples * n) as f64;
    let freq: Vec<f64> = class_totals.iter().map(|&c| c as f64 / vertices).collect();
    let empirical = FrequencyVector::new(spec.kind, freq);
    writeln!(out)?;
    writeln!(out, "class,frequency,pstar")?;
    for (i, (k, f)) in empirical.iter().enumerate() {
        writeln!(
            out,
            "{k},{},{}",
            fmt_num(f),
            fmt_num(ctx.pstar().as_slice()[i])
        )?;
    }
    writeln!(out, "l1,{},", fmt_num(empirical.l1_distance(ctx.pstar())))?;
    Ok(true)
}

fn draw_range(
    sampler: &AnySampler,
    seed: u64,
    start: usize,
    end: usize,
    workers: usize,
) -> CliResult<Vec<Draw>> {
    let len = end - start;
    let workers = workers.clamp(1, len.max(1));
    if workers == 1 {
        return (start..end).map(|i| sampler.draw(seed, i as u64)).collect();
    }
    let per = len.div_ceil(workers);
    let parts: Vec<CliResult<Vec<Draw>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = start + w * per;
                let hi = (lo + per).min(end);
                scope.spawn(move || (lo..hi).map(|i| sampler.draw(seed, i as u64)).collect())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });
    let mut all = Vec::with_capacity(len);
    for part in parts {
        all.extend(part?);
    }
    Ok(all)
}

fn center_point(cfg: &RunConfig, pstar: &FrequencyVector) -> CliResult<FrequencyVector> {
    match &cfg.point {
        None => Ok(pstar.clone()),
        Some(p) => {
            if p.len() != cfg.spec.num_classes() {
                return Err(config_err(format!(
                    "`point` needs {} entries, got {}",
                    cfg.spec.num_classes(),
                    p.len()
                )));
            }
            let v = FrequencyVector::new(cfg.spec.kind, p.clone());
            v.check_on_manifold()
                .map_err(|e| config_err(e.to_string()))?;
            Ok(v)
        }
    }
}

pub fn cmd_ldp_table(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let ctx = solve_pstar(&cfg.spec)?;
    let center = center_point(cfg, ctx.pstar())?;
    let rows = convergence_table(&ctx, &cfg.sizes()?, &center, cfg.eps, cfg.sweep_options())?;
    writeln!(out, "N,eps,log_prob,rate,I,gap")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            fmt_num(r.eps),
            fmt_num(r.log_prob),
            fmt_num(r.rate),
            fmt_num(r.rate_function),
            fmt_num(r.gap)
        )?;
    }
    Ok(true)
}

pub fn cmd_lln(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let ctx = solve_pstar(&cfg.spec)?;
    let sizes = cfg.sizes()?;
    let inf_i = inf_rate_beyond(&ctx, cfg.delta, cfg.resolution)?;
    writeln!(out, "N,delta,tail_prob,empirical_rate,inf_I")?;
    for n in sizes {
        let t = lln_tail(&ctx, n, cfg.delta, cfg.sweep_options())?;
        writeln!(
            out,
            "{},{},{},{},{}",
            n,
            fmt_num(cfg.delta),
            fmt_num(t.tail_prob()),
            fmt_num(t.empirical_rate()),
            fmt_num(inf_i)
        )?;
    }
    Ok(true)
}

/// One row of the oracle report.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub suite: &'static str,
    pub n: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

fn rel_dev_log(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        0.0
    } else {
        (a - b).exp_m1().abs()
    }
}

/// Enumerates every tree of size `n` and checks profile counts, the
/// partition function, the lattice sum and the tree codes.
pub fn oracle_rows(spec: &EnsembleSpec, n: usize) -> CliResult<Vec<OracleRow>> {
    let max = match spec.kind {
        TreeKind::Labeled => ORACLE_MAX_LABELED,
        TreeKind::Plane => ORACLE_MAX_PLANE,
    };
    if n > max {
        return Err(Error::TooLarge { n, max }.into());
    }
    if n < spec.kind.min_vertices() {
        return Err(Error::NoFeasibleTree { n }.into());
    }
    let mut by_profile: BTreeMap<CountVector, u64> = BTreeMap::new();
    let mut energies = Vec::new();
    let mut code_failures = 0u64;
    match spec.kind {
        TreeKind::Labeled => {
            for t in enumerate_labeled_trees(n)? {
                let round_trip = prufer_encode(&t).and_then(|c| prufer_decode(n, &c));
                if round_trip.as_ref() != Ok(&t) {
                    code_failures += 1;
                }
                if t.max_degree() <= spec.bound {
                    *by_profile.entry(chi_of(&t, spec)?).or_default() += 1;
                    energies.push(energy_of(&t, spec)?);
                }
            }
        }
        TreeKind::Plane => {
            for t in enumerate_plane_trees(n, spec.bound)? {
                let steps: Vec<i64> = t.child_counts().iter().map(|&c| c as i64 - 1).collect();
                for r in 0..n {
                    let mut word = steps.clone();
                    word.rotate_left(r);
                    let back = cycle_lemma_rotation(&word)?;
                    word.rotate_left(back);
                    if word != steps {
                        code_failures += 1;
                    }
                }
                *by_profile.entry(chi_of(&t, spec)?).or_default() += 1;
                energies.push(energy_of(&t, spec)?);
            }
        }
    }

    let mut count_dev = 0.0f64;
    Lattice::profiles(spec.kind, spec.bound, n).for_each(|m| {
        let profile = CountVector::new(spec.kind, m.to_vec());
        let enumerated = by_profile.get(&profile).copied().unwrap_or(0) as f64;
        count_dev = count_dev.max(rel_dev_log(
            log_count_by_profile(&profile).value(),
            enumerated.ln(),
        ));
    });
    let brute = {
        let logs: Vec<f64> = energies.iter().map(|&h| -spec.beta * h).collect();
        crate::combinatorics::log_sum_exp(&logs)
    };
    let dp = log_partition_of(spec, n)?.value();
    let lattice = lattice_log_partition(spec, n, SweepOptions::default())?;
    let code_suite = match spec.kind {
        TreeKind::Labeled => "prufer_round_trip",
        TreeKind::Plane => "cycle_lemma",
    };
    let row = |suite, dev: f64, tol: f64| OracleRow {
        suite,
        n,
        max_deviation: dev,
        pass: dev <= tol,
    };
    Ok(vec![
        row("profile_counts", count_dev, ORACLE_REL_TOL),
        row("partition_function", rel_dev_log(dp, brute), ORACLE_REL_TOL),
        row("lattice_sum", rel_dev_log(lattice, dp), ORACLE_REL_TOL),
        row(code_suite, code_failures as f64, 0.0),
    ])
}

pub fn cmd_oracle_check(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<bool> {
    let mut rows = Vec::new();
    for n in cfg.sizes()? {
        rows.extend(oracle_rows(&cfg.spec, n)?);
    }
    writeln!(out, "suite,N,max_deviation,status")?;
    for r in &rows {
        let status = if r.pass { "pass" } else { "FAIL" };
        writeln!(
            out,
            "{},{},{},{status}",
            r.suite,
            r.n,
            fmt_num(r.max_deviation)
        )?;
    }
    Ok(rows.iter().all(|r| r.pass))
}
