//! Finite-N checks of the large-deviation principle and the law of large
//! numbers for class frequencies.
//!
//! Probabilities of `ℓ1` balls are exact lattice sums of closed-form profile
//! weights, normalized by the sum over the whole lattice. The coupling pairs
//! `χ/N`, which sits slightly off the manifold, with a nearest lattice point
//! of the manifold.

use rand::Rng;

use crate::combinatorics::{log_factorial, LogSumExp};
use crate::ensembles::{freq_from_counts, CountVector, EnsembleSpec, FrequencyVector, TreeKind};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::partition::{sample_degree_sequence, DpTable, DEFAULT_LATTICE_CAP};
use crate::rate::{for_each_grid_point, RateContext, GRID_CAP};

/// Slack added to radii so that points on the sphere count as inside.
const TIE_TOL: f64 = 1e-12;

/// Parallelism and size limits for lattice sweeps.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub workers: usize,
    pub cap: u128,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: 1,
            cap: DEFAULT_LATTICE_CAP,
        }
    }
}

/// Log of the unnormalized profile weight, with factorial constants hoisted.
struct ProfileWeigher {
    constant: f64,
    log_weights: Vec<f64>,
}

impl ProfileWeigher {
    fn new(spec: &EnsembleSpec, n: usize) -> Self {
        let n64 = n as u64;
        let constant = match spec.kind {
            TreeKind::Labeled => log_factorial(n64 - 2).value() + log_factorial(n64).value(),
            TreeKind::Plane => log_factorial(n64).value() - (n as f64).ln(),
        };
        ProfileWeigher {
            constant,
            log_weights: spec.class_log_weights(),
        }
    }

    fn weigh(&self, m: &[u64]) -> f64 {
        let mut acc = self.constant;
        for (&mk, &lw) in m.iter().zip(&self.log_weights) {
            acc -= log_factorial(mk).value();
            if mk > 0 {
                acc += mk as f64 * lw;
            }
        }
        acc
    }
}

fn l1_to(m: &[u64], n: f64, center: &[f64]) -> f64 {
    m.iter()
        .zip(center)
        .map(|(&mk, &c)| (mk as f64 / n - c).abs())
        .sum()
}

fn check_center(spec: &EnsembleSpec, center: &FrequencyVector) -> Result<()> {
    if center.kind() != spec.kind {
        return Err(Error::KindMismatch {
            expected: spec.kind,
            actual: center.kind(),
        });
    }
    if center.len() != spec.num_classes() {
        return Err(Error::DimensionMismatch {
            expected: spec.num_classes(),
            actual: center.len(),
        });
    }
    Ok(())
}

/// Exact `(ln P(selected), ln Z)` for profiles selected by `inside`.
fn lattice_mass(
    spec: &EnsembleSpec,
    n: usize,
    opts: SweepOptions,
    inside: impl Fn(&[u64]) -> bool + Sync,
) -> Result<(f64, f64)> {
    let spec = spec.clone().validate()?;
    if n < spec.kind.min_vertices() {
        return Err(Error::NoFeasibleTree { n });
    }
    let lattice = Lattice::profiles(spec.kind, spec.bound, n);
    lattice.check_cap(opts.cap)?;
    let weigher = ProfileWeigher::new(&spec, n);
    let parts = lattice.sweep(
        opts.workers,
        || (LogSumExp::new(), LogSumExp::new()),
        |acc, m| {
            let w = weigher.weigh(m);
            acc.1.push(w);
            if inside(m) {
                acc.0.push(w);
            }
        },
    );
    let (mut sel, mut all) = (LogSumExp::new(), LogSumExp::new());
    for (s, a) in &parts {
        sel.merge(s);
        all.merge(a);
    }
    let log_z = all.value();
    if log_z == f64::NEG_INFINITY {
        return Err(Error::NoFeasibleTree { n });
    }
    Ok(((sel.value() - log_z).min(0.0), log_z))
}

/// `ln Z_N` as a sum over the profile lattice.
pub fn lattice_log_partition(spec: &EnsembleSpec, n: usize, opts: SweepOptions) -> Result<f64> {
    Ok(lattice_mass(spec, n, opts, |_| true)?.1)
}

/// `ln P_N(‖χ/N − center‖₁ ≤ eps)`, closed ball.
pub fn log_prob_ball(
    spec: &EnsembleSpec,
    n: usize,
    center: &FrequencyVector,
    eps: f64,
    opts: SweepOptions,
) -> Result<f64> {
    check_center(spec, center)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {eps}"
        )));
    }
    let nf = n as f64;
    let c = center.as_slice();
    Ok(lattice_mass(spec, n, opts, |m| l1_to(m, nf, c) <= eps + TIE_TOL)?.0)
}

/// `−(1/N) ln P_N(ball)`; `+inf` when the ball carries no mass.
pub fn finite_rate(
    spec: &EnsembleSpec,
    n: usize,
    center: &FrequencyVector,
    eps: f64,
    opts: SweepOptions,
) -> Result<f64> {
    let lp = log_prob_ball(spec, n, center, eps, opts)?;
    Ok(rate_from_log_prob(lp, n))
}

fn rate_from_log_prob(lp: f64, n: usize) -> f64 {
    if lp == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        // ln P ≤ 0, so this is ≥ 0 (and never −0)
        0.0 - lp / n as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTableRow {
    pub n: usize,
    pub center: FrequencyVector,
    pub eps: f64,
    pub log_prob: f64,
    /// `r_N = −(1/N) ln P_N(ball)`.
    pub rate: f64,
    /// `I(center)`.
    pub rate_function: f64,
    /// `r_N − I(center)`.
    pub gap: f64,
}

/// Finite rates at `center` along an increasing list of sizes.
pub fn convergence_table(
    ctx: &RateContext,
    ns: &[usize],
    center: &FrequencyVector,
    eps: f64,
    opts: SweepOptions,
) -> Result<Vec<RateTableRow>> {
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "N list must be strictly increasing".into(),
        ));
    }
    let i_value = ctx.rate(center)?;
    ns.iter()
        .map(|&n| {
            let log_prob = log_prob_ball(ctx.spec(), n, center, eps, opts)?;
            let rate = rate_from_log_prob(log_prob, n);
            Ok(RateTableRow {
                n,
                center: center.clone(),
                eps,
                log_prob,
                rate,
                rate_function: i_value,
                gap: rate - i_value,
            })
        })
        .collect()
}

fn grid_resolution_check(resolution: usize) -> Result<()> {
    if resolution < 10 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 10, got {resolution}"
        )));
    }
    Ok(())
}

/// `inf { I(p) : p ∈ M, ‖p − center‖₁ ≤ eps }`, approximated on the grid of
/// spacing `1/resolution`. Each grid point in the ball is pushed toward `p*`
/// up to the sphere, which can only lower `I` because `I` is convex with
/// minimum 0 at `p*`.
pub fn inf_rate_over_ball(
    ctx: &RateContext,
    center: &FrequencyVector,
    eps: f64,
    resolution: usize,
) -> Result<f64> {
    grid_resolution_check(resolution)?;
    check_center(ctx.spec(), center)?;
    let pstar = ctx.pstar().as_slice();
    let c = center.as_slice();
    let dist = |p: &[f64]| -> f64 { p.iter().zip(c).map(|(a, b)| (a - b).abs()).sum() };
    if dist(pstar) <= eps + TIE_TOL {
        return Ok(0.0);
    }
    let lw = ctx.spec().class_log_weights();
    let mut best = f64::INFINITY;
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    if center.is_on_manifold() {
        candidates.push(c.to_vec());
    }
    for_each_grid_point(ctx.spec(), resolution, GRID_CAP, |q| {
        if dist(q) <= eps + TIE_TOL {
            candidates.push(q.to_vec());
        }
    })?;
    let mut buf = vec![0.0; pstar.len()];
    for q in &candidates {
        // largest t with q + t(p* − q) still in the ball
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let t = 0.5 * (lo + hi);
            for ((b, &a), &s) in buf.iter_mut().zip(q).zip(pstar) {
                *b = a + t * (s - a);
            }
            if dist(&buf) <= eps {
                lo = t;
            } else {
                hi = t;
            }
        }
        for ((b, &a), &s) in buf.iter_mut().zip(q).zip(pstar) {
            *b = (a + lo * (s - a)).max(0.0);
        }
        best = best.min(ctx.rate_unchecked(&buf, &lw));
    }
    Ok(best.max(0.0))
}

/// `inf { I(p) : p ∈ M, ‖p − p*‖₁ ≥ delta }`, attained on the sphere. Grid
/// directions from `p*` are rescaled onto the sphere exactly.
pub fn inf_rate_beyond(ctx: &RateContext, delta: f64, resolution: usize) -> Result<f64> {
    grid_resolution_check(resolution)?;
    let pstar = ctx.pstar().as_slice().to_vec();
    let lw = ctx.spec().class_log_weights();
    let mut best = f64::INFINITY;
    let mut buf = vec![0.0; pstar.len()];
    for_each_grid_point(ctx.spec(), resolution, GRID_CAP, |q| {
        let d: f64 = q.iter().zip(&pstar).map(|(a, b)| (a - b).abs()).sum();
        if d >= delta && d > 0.0 {
            let t = delta / d;
            for ((b, &a), &s) in buf.iter_mut().zip(q).zip(&pstar) {
                *b = (s + t * (a - s)).max(0.0);
            }
            best = best.min(ctx.rate_unchecked(&buf, &lw));
        }
    })?;
    Ok(best)
}

/// Result of an exact law-of-large-numbers tail computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub n: usize,
    pub delta: f64,
    /// `ln P_N(‖χ/N − p*‖₁ > delta)`.
    pub log_tail: f64,
}

impl TailRow {
    pub fn tail_prob(&self) -> f64 {
        self.log_tail.exp()
    }

    /// `−(1/N) ln tail`; `+inf` for an empty tail.
    pub fn empirical_rate(&self) -> f64 {
        rate_from_log_prob(self.log_tail, self.n)
    }
}

/// Exact `P_N(‖χ/N − p*‖₁ > delta)`.
pub fn lln_tail(ctx: &RateContext, n: usize, delta: f64, opts: SweepOptions) -> Result<TailRow> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let nf = n as f64;
    let pstar = ctx.pstar().as_slice();
    let (log_tail, _) = lattice_mass(ctx.spec(), n, opts, |m| {
        l1_to(m, nf, pstar) > delta + TIE_TOL
    })?;
    Ok(TailRow { n, delta, log_tail })
}

/// Lattice points `m/N` of the manifold at minimal `ℓ1` distance from
/// `n/N`, returned as numerators `m`.
///
/// The displacement `δ = m − n` has `Σ δ = 0` and `Σ k δ_k` equal to the
/// mean deficit, so the search runs over increasing even `‖δ‖₁` and stops at
/// the first radius with solutions.
pub fn r_set(n: &CountVector, spec: &EnsembleSpec) -> Vec<CountVector> {
    assert_eq!(n.kind(), spec.kind, "kind mismatch");
    let first = spec.first_class();
    let classes = spec.num_classes();
    let shift = spec.kind.mean_shift() as i64;
    let max_half = shift as usize * classes + 2;
    for half in 1..=max_half {
        let mut found: Vec<CountVector> = Vec::new();
        let ups = multisets(classes, half);
        let downs = ups.clone();
        for up in &ups {
            let up_sum: i64 = up.iter().map(|&i| (first + i) as i64).sum();
            for down in &downs {
                let down_sum: i64 = down.iter().map(|&i| (first + i) as i64).sum();
                if up_sum - down_sum != shift || up.iter().any(|i| down.contains(i)) {
                    continue;
                }
                let mut m: Vec<i64> = n.counts().iter().map(|&x| x as i64).collect();
                for &i in up {
                    m[i] += 1;
                }
                for &i in down {
                    m[i] -= 1;
                }
                if m.iter().all(|&x| x >= 0) {
                    let v = CountVector::new(spec.kind, m.into_iter().map(|x| x as u64).collect());
                    if !found.contains(&v) {
                        found.push(v);
                    }
                }
            }
        }
        if !found.is_empty() {
            found.sort();
            return found;
        }
    }
    Vec::new()
}

/// Nondecreasing index lists of length `size` over `0..classes`.
fn multisets(classes: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(
        classes: usize,
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..classes {
            cur.push(i);
            rec(classes, size, i, cur, out);
            cur.pop();
        }
    }
    rec(classes, size, 0, &mut cur, &mut out);
    out
}

/// One draw from the coupling: `x = χ/N` under the Gibbs measure, `y`
/// uniform on the minimal-distance set of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSample {
    pub chi: CountVector,
    pub x: FrequencyVector,
    pub y: FrequencyVector,
    /// Integer numerators of `y`.
    pub y_numerators: CountVector,
    pub distance: f64,
    /// `|R(x)|`.
    pub set_size: usize,
}

pub fn couple_sample<R: Rng + ?Sized>(dp: &DpTable, rng: &mut R) -> Result<CouplingSample> {
    let spec = dp.spec();
    let classes = sample_degree_sequence(dp, rng)?;
    let chi = CountVector::from_classes(spec.kind, spec.bound, &classes);
    let set = r_set(&chi, spec);
    if set.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no manifold lattice point near {chi}"
        )));
    }
    let pick = rng.random_range(0..set.len());
    let x = freq_from_counts(&chi);
    let y_numerators = set[pick].clone();
    let y = freq_from_counts(&y_numerators);
    let distance = x.l1_distance(&y);
    Ok(CouplingSample {
        chi,
        x,
        y,
        y_numerators,
        distance,
        set_size: set.len(),
    })
}

/// The coupling distance every sample must respect: `4/N` for labeled trees
/// with `D = 2`, `2/N` otherwise.
pub fn coupling_distance_bound(spec: &EnsembleSpec, n: usize) -> f64 {
    let units = match (spec.kind, spec.bound) {
        (TreeKind::Labeled, 2) => 4.0,
        _ => 2.0,
    };
    units / n as f64
}
