//! Partition functions, the exact law of the class profile, and exact
//! sampling of class sequences.
//!
//! The Gibbs sum over trees factorizes over vertices once the tree count for
//! a profile is written as a multinomial. With per-class log-weights
//!
//! * labeled: `lw_k = −β c(k) − ln (k−1)!`
//! * plane:   `lw_k = −β c(k)`
//!
//! the forward table `W[i][s] = ln Σ Π_{j≤i} e^{lw_{k_j}}` over class
//! sequences of length `i` with `Σ k_j = s` gives
//! `ln Z_N = W[N][S] + ln (N−2)!` (labeled, `S = 2N−2`) and
//! `ln Z_N = W[N][S] − ln N` (plane, `S = N−1`).

use rand::Rng;

use crate::combinatorics::{log_count_by_profile, log_factorial, log_sum_exp, LogReal};
use crate::ensembles::{is_feasible, CountVector, EnsembleSpec, TreeKind};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Default cap on DP cells (`(N+1)·(S+1)`), about 2 GiB of `f64`.
pub const DEFAULT_MAX_CELLS: u128 = 1 << 28;
/// Default cap on the number of profiles an exact lattice sweep may visit.
pub const DEFAULT_LATTICE_CAP: u128 = 10_000_000;

/// Immutable forward table of log-weights.
#[derive(Debug, Clone)]
pub struct DpTable {
    spec: EnsembleSpec,
    n: usize,
    budget: usize,
    class_lw: Vec<f64>,
    /// Row-major `(n+1) × (budget+1)`.
    w: Vec<f64>,
}

/// Order in which class terms enter each log-sum-exp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassOrder {
    Ascending,
    Descending,
}

fn class_budget(spec: &EnsembleSpec, n: usize) -> Result<usize> {
    match spec.kind.class_budget(n) {
        Some(b) if n >= spec.kind.min_vertices() => Ok(b),
        _ => Err(Error::NoFeasibleTree { n }),
    }
}

/// Runs the forward recurrence, handing each finished row to `on_row`.
fn forward(
    spec: &EnsembleSpec,
    n: usize,
    budget: usize,
    order: ClassOrder,
    mut on_row: impl FnMut(usize, &[f64]),
) {
    let first = spec.first_class();
    let mut classes: Vec<(usize, f64)> = spec
        .classes()
        .map(|k| (k, spec.class_log_weight(k)))
        .collect();
    if order == ClassOrder::Descending {
        classes.reverse();
    }
    let mut prev = vec![f64::NEG_INFINITY; budget + 1];
    prev[0] = 0.0;
    on_row(0, &prev);
    let mut cur = vec![f64::NEG_INFINITY; budget + 1];
    let mut terms = Vec::with_capacity(classes.len());
    for i in 1..=n {
        let lo = (i * first).min(budget + 1);
        let hi = (i * spec.bound).min(budget);
        cur.iter_mut().for_each(|x| *x = f64::NEG_INFINITY);
        for s in lo..=hi {
            terms.clear();
            for &(k, lw) in &classes {
                if k <= s {
                    let p = prev[s - k];
                    if p != f64::NEG_INFINITY {
                        terms.push(p + lw);
                    }
                }
            }
            cur[s] = log_sum_exp(&terms);
        }
        on_row(i, &cur);
        std::mem::swap(&mut prev, &mut cur);
    }
}

impl DpTable {
    /// Builds the table under [`DEFAULT_MAX_CELLS`].
    pub fn build(spec: &EnsembleSpec, n: usize) -> Result<Self> {
        Self::build_with(spec, n, DEFAULT_MAX_CELLS, ClassOrder::Ascending)
    }

    pub fn build_with(
        spec: &EnsembleSpec,
        n: usize,
        max_cells: u128,
        order: ClassOrder,
    ) -> Result<Self> {
        let spec = spec.clone().validate()?;
        let budget = class_budget(&spec, n)?;
        let cells = (n as u128 + 1) * (budget as u128 + 1);
        if cells > max_cells {
            return Err(Error::SizeOverflow {
                cells,
                budget: max_cells,
            });
        }
        let width = budget + 1;
        let mut w = vec![f64::NEG_INFINITY; (n + 1) * width];
        forward(&spec, n, budget, order, |i, row| {
            w[i * width..(i + 1) * width].copy_from_slice(row)
        });
        Ok(DpTable {
            class_lw: spec.class_log_weights(),
            spec,
            n,
            budget,
            w,
        })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `S`: total class sum of a tree on `N` vertices.
    pub fn budget(&self) -> usize {
        self.budget
    }

    /// `W[i][s]`.
    pub fn log_weight(&self, i: usize, s: usize) -> f64 {
        self.w[i * (self.budget + 1) + s]
    }

    /// `W[N][S]`.
    pub fn log_total(&self) -> f64 {
        self.log_weight(self.n, self.budget)
    }
}

fn finish_log_partition(kind: TreeKind, n: usize, log_total: f64) -> Result<LogReal> {
    if log_total == f64::NEG_INFINITY {
        return Err(Error::NoFeasibleTree { n });
    }
    Ok(LogReal::from_log(match kind {
        TreeKind::Labeled => log_total + log_factorial(n as u64 - 2).value(),
        TreeKind::Plane => log_total - (n as f64).ln(),
    }))
}

pub fn build_dp(spec: &EnsembleSpec, n: usize) -> Result<DpTable> {
    DpTable::build(spec, n)
}

/// `ln Z_N` from a built table.
pub fn log_partition(dp: &DpTable) -> Result<LogReal> {
    finish_log_partition(dp.spec.kind, dp.n, dp.log_total())
}

/// `ln Z_N` in `O(S)` memory, without keeping the table.
pub fn log_partition_of(spec: &EnsembleSpec, n: usize) -> Result<LogReal> {
    let spec = spec.clone().validate()?;
    let budget = class_budget(&spec, n)?;
    let mut last = f64::NEG_INFINITY;
    forward(&spec, n, budget, ClassOrder::Ascending, |i, row| {
        if i == n {
            last = row[budget];
        }
    });
    finish_log_partition(spec.kind, n, last)
}

/// `ln Σ_{T : χ(T) = n} e^{−βH(T)}`; `-inf` for infeasible profiles.
pub fn log_profile_weight(spec: &EnsembleSpec, n: &CountVector) -> f64 {
    if !is_feasible(n, spec) {
        return f64::NEG_INFINITY;
    }
    let energy: f64 = n
        .iter()
        .map(|(k, nk)| nk as f64 * spec.energy_of_class(k))
        .sum();
    log_count_by_profile(n).value() - spec.beta * energy
}

/// The Gibbs measure on trees of size `N`, reduced to what is needed for
/// profile probabilities.
#[derive(Debug, Clone)]
pub struct GibbsLaw {
    spec: EnsembleSpec,
    n: usize,
    log_z: f64,
}

impl GibbsLaw {
    pub fn new(spec: &EnsembleSpec, n: usize) -> Result<Self> {
        let log_z = log_partition_of(spec, n)?.value();
        Ok(GibbsLaw {
            spec: spec.clone(),
            n,
            log_z,
        })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    /// `ln P_N{χ = n}`.
    pub fn log_prob(&self, n: &CountVector) -> f64 {
        if n.total() != self.n as u64 {
            return f64::NEG_INFINITY;
        }
        log_profile_weight(&self.spec, n) - self.log_z
    }

    /// Feasible profiles of size `N`.
    pub fn lattice(&self) -> Lattice {
        Lattice::profiles(self.spec.kind, self.spec.bound, self.n)
    }
}

/// `ln P_N{χ/N = n/N}`.
pub fn log_prob_profile(spec: &EnsembleSpec, n: usize, profile: &CountVector) -> Result<LogReal> {
    let law = GibbsLaw::new(spec, n)?;
    Ok(LogReal::from_log(law.log_prob(profile)))
}

/// Every feasible profile with its exact log-probability.
#[derive(Debug, Clone)]
pub struct ChiLaw {
    pub n: usize,
    pub entries: Vec<(CountVector, f64)>,
}

impl ChiLaw {
    /// `ln Σ P`, which is 0 up to rounding.
    pub fn log_total(&self) -> f64 {
        let lps: Vec<f64> = self.entries.iter().map(|(_, lp)| *lp).collect();
        log_sum_exp(&lps)
    }

    pub fn prob_of(&self, n: &CountVector) -> f64 {
        self.entries
            .iter()
            .find(|(m, _)| m == n)
            .map_or(0.0, |(_, lp)| lp.exp())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn exact_chi_law(spec: &EnsembleSpec, n: usize) -> Result<ChiLaw> {
    exact_chi_law_capped(spec, n, DEFAULT_LATTICE_CAP)
}

pub fn exact_chi_law_capped(spec: &EnsembleSpec, n: usize, cap: u128) -> Result<ChiLaw> {
    let law = GibbsLaw::new(spec, n)?;
    let lattice = law.lattice();
    lattice.check_cap(cap)?;
    let mut entries = Vec::new();
    lattice.for_each(|m| {
        let profile = CountVector::new(spec.kind, m.to_vec());
        let lp = law.log_prob(&profile);
        entries.push((profile, lp));
    });
    Ok(ChiLaw { n, entries })
}

/// Draws one class per vertex, `d_1..d_N`, with probability proportional to
/// `Π_i e^{lw_{d_i}}` subject to `Σ d_i = S`, by walking the table backwards.
pub fn sample_degree_sequence<R: Rng + ?Sized>(dp: &DpTable, rng: &mut R) -> Result<Vec<usize>> {
    if dp.log_total() == f64::NEG_INFINITY {
        return Err(Error::NoFeasibleTree { n: dp.n });
    }
    let first = dp.spec.first_class();
    let mut seq = vec![0usize; dp.n];
    let mut s = dp.budget;
    for i in (1..=dp.n).rev() {
        let here = dp.log_weight(i, s);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        for (offset, &lw) in dp.class_lw.iter().enumerate() {
            let k = first + offset;
            if k > s {
                break;
            }
            let prev = dp.log_weight(i - 1, s - k);
            if prev == f64::NEG_INFINITY {
                continue;
            }
            chosen = Some(k);
            acc += (prev + lw - here).exp();
            if u < acc {
                break;
            }
        }
        // rounding can leave acc a hair below 1; the last viable class absorbs it
        let k = chosen.expect("a finite cell has a finite predecessor");
        seq[i - 1] = k;
        s -= k;
    }
    debug_assert_eq!(s, 0);
    Ok(seq)
}
