//! The rate function `I = J − J(p*)` on the constraint manifold and its
//! minimizer.
//!
//! `J(p) = −h(p) + βE(p) + G(p)` for labeled trees and `J = −h + βE` for
//! plane trees, which in both cases equals `Σ_k p_k (ln p_k − lw_k)` with the
//! per-class log-weights used by the partition DP. Stationarity under the two
//! linear constraints forces `p_k ∝ e^{lw_k} x^k`, so `p*` is found by a 1-D
//! root search on the tilt `x`.

use rand::Rng;

use crate::combinatorics::log_factorial;
use crate::ensembles::{EnsembleSpec, FrequencyVector, TreeKind};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Cap on grid points visited by [`grid_minimize_j`].
pub const GRID_CAP: u128 = 50_000_000;

const MEAN_TOL: f64 = 1e-12;
const BOUNDARY_TOL: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

/// `x ln x` with `0 ln 0 = 0`.
fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `h(p) = −Σ p_k ln p_k`.
pub fn entropy(p: &FrequencyVector) -> f64 {
    -p.as_slice().iter().map(|&x| xlogx(x)).sum::<f64>()
}

/// `E(p) = Σ p_k c(k)`.
pub fn energy_mean(p: &FrequencyVector, energy: &[f64]) -> f64 {
    assert_eq!(p.len(), energy.len(), "dimension mismatch");
    p.as_slice().iter().zip(energy).map(|(a, b)| a * b).sum()
}

/// `G(p) = Σ p_k ln((k−1)!)`; labeled trees only.
pub fn g_term(p: &FrequencyVector) -> Result<f64> {
    if p.kind() != TreeKind::Labeled {
        return Err(Error::KindMismatch {
            expected: TreeKind::Labeled,
            actual: p.kind(),
        });
    }
    Ok(p.iter()
        .map(|(k, x)| x * log_factorial(k as u64 - 1).value())
        .sum())
}

fn check_shape(p: &FrequencyVector, spec: &EnsembleSpec) -> Result<()> {
    if p.kind() != spec.kind {
        return Err(Error::KindMismatch {
            expected: spec.kind,
            actual: p.kind(),
        });
    }
    if p.len() != spec.num_classes() {
        return Err(Error::DimensionMismatch {
            expected: spec.num_classes(),
            actual: p.len(),
        });
    }
    Ok(())
}

/// `Σ p_k (ln p_k − lw_k)` for any nonnegative vector of the right shape.
fn j_raw(p: &[f64], log_weights: &[f64]) -> f64 {
    p.iter()
        .zip(log_weights)
        .map(|(&x, &lw)| xlogx(x) - x * lw)
        .sum()
}

/// `J(p)` for `p` on the manifold.
pub fn j_value(p: &FrequencyVector, spec: &EnsembleSpec) -> Result<f64> {
    check_shape(p, spec)?;
    p.check_on_manifold()?;
    Ok(j_raw(p.as_slice(), &spec.class_log_weights()))
}

/// The same quantity assembled from its named parts, `−h + βE (+ G)`.
pub fn j_from_parts(p: &FrequencyVector, spec: &EnsembleSpec) -> Result<f64> {
    check_shape(p, spec)?;
    let g = match spec.kind {
        TreeKind::Labeled => g_term(p)?,
        TreeKind::Plane => 0.0,
    };
    Ok(-entropy(p) + spec.beta * energy_mean(p, &spec.energy) + g)
}

/// Exponential tilt at `ln x = t`, normalized with a max shift.
fn tilt_at(log_weights: &[f64], first: usize, t: f64) -> Vec<f64> {
    let logits: Vec<f64> = log_weights
        .iter()
        .enumerate()
        .map(|(i, &lw)| lw + (first + i) as f64 * t)
        .collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= z);
    p
}

/// Mean and variance of the class under the tilt at `ln x = t`.
fn tilt_moments(log_weights: &[f64], first: usize, t: f64) -> (f64, f64) {
    let p = tilt_at(log_weights, first, t);
    let mean: f64 = p
        .iter()
        .enumerate()
        .map(|(i, &x)| (first + i) as f64 * x)
        .sum();
    let var: f64 = p
        .iter()
        .enumerate()
        .map(|(i, &x)| ((first + i) as f64 - mean).powi(2) * x)
        .sum();
    (mean, var)
}

/// `p_k(x) ∝ w_k x^k`, normalized.
pub fn tilt_frequencies(x: f64, spec: &EnsembleSpec) -> FrequencyVector {
    assert!(x > 0.0, "tilt must be positive");
    FrequencyVector::new(
        spec.kind,
        tilt_at(&spec.class_log_weights(), spec.first_class(), x.ln()),
    )
}

/// Mean class `Σ k p_k(x)`; strictly increasing in `x`.
pub fn tilt_mean(x: f64, spec: &EnsembleSpec) -> f64 {
    assert!(x > 0.0, "tilt must be positive");
    tilt_moments(&spec.class_log_weights(), spec.first_class(), x.ln()).0
}

/// Where the minimizer sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tilt {
    /// Interior minimizer `p* = p(x*)`.
    Interior { x: f64 },
    /// The manifold degenerates to an extreme point and the tilt family
    /// never reaches it.
    Boundary,
}

/// `p*`, `J(p*)` and how they were obtained.
#[derive(Debug, Clone)]
pub struct RateContext {
    spec: EnsembleSpec,
    pstar: FrequencyVector,
    j_star: f64,
    tilt: Tilt,
}

impl RateContext {
    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn pstar(&self) -> &FrequencyVector {
        &self.pstar
    }

    pub fn j_star(&self) -> f64 {
        self.j_star
    }

    pub fn tilt(&self) -> Tilt {
        self.tilt
    }

    pub fn is_boundary(&self) -> bool {
        self.tilt == Tilt::Boundary
    }

    /// Largest deviation of `ln p*_k − lw_k` from its least-squares affine
    /// fit in `k`. Zero at an exact stationary point; `None` on the boundary.
    pub fn stationarity_residual(&self) -> Option<f64> {
        if self.is_boundary() {
            return None;
        }
        let lw = self.spec.class_log_weights();
        let pts: Vec<(f64, f64)> = self
            .pstar
            .iter()
            .zip(&lw)
            .map(|((k, x), &w)| (k as f64, x.ln() - w))
            .collect();
        let n = pts.len() as f64;
        let mk = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ma = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mk).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mk) * (p.1 - ma)).sum();
        let slope = sxy / sxx;
        Some(
            pts.iter()
                .map(|&(k, a)| (a - (ma + slope * (k - mk))).abs())
                .fold(0.0, f64::max),
        )
    }

    /// `I(p) = J(p) − J(p*)`.
    pub fn rate(&self, p: &FrequencyVector) -> Result<f64> {
        Ok(j_value(p, &self.spec)? - self.j_star)
    }

    /// `I` at a nonnegative vector assumed to be on the manifold.
    pub(crate) fn rate_unchecked(&self, p: &[f64], log_weights: &[f64]) -> f64 {
        j_raw(p, log_weights) - self.j_star
    }
}

fn point_mass(spec: &EnsembleSpec, class: usize) -> FrequencyVector {
    let mut p = vec![0.0; spec.num_classes()];
    p[class - spec.first_class()] = 1.0;
    FrequencyVector::new(spec.kind, p)
}

/// Minimizes `J` over the manifold via the exponential tilt.
pub fn solve_pstar(spec: &EnsembleSpec) -> Result<RateContext> {
    let spec = spec.clone().validate()?;
    let lw = spec.class_log_weights();
    let first = spec.first_class();
    let target = spec.kind.mean_target() as f64;
    let (inf, sup) = (first as f64, spec.bound as f64);

    let boundary = |class: usize| {
        let pstar = point_mass(&spec, class);
        let j_star = j_raw(pstar.as_slice(), &lw);
        RateContext {
            spec: spec.clone(),
            pstar,
            j_star,
            tilt: Tilt::Boundary,
        }
    };
    if target >= sup - BOUNDARY_TOL {
        return Ok(boundary(spec.bound));
    }
    if target <= inf + BOUNDARY_TOL {
        return Ok(boundary(first));
    }

    let mean = |t: f64| tilt_moments(&lw, first, t).0;
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    while mean(lo) > target && lo > -1e12 {
        lo *= 2.0;
    }
    while mean(hi) < target && hi < 1e12 {
        hi *= 2.0;
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        t = 0.5 * (lo + hi);
        let m = mean(t);
        if (m - target).abs() <= MEAN_TOL || t == lo || t == hi {
            break;
        }
        if m < target {
            lo = t;
        } else {
            hi = t;
        }
    }
    // Newton polish; d mean / d ln x is the class variance
    for _ in 0..3 {
        let (m, var) = tilt_moments(&lw, first, t);
        if var <= 0.0 || (m - target).abs() < 1e-15 {
            break;
        }
        let next = t - (m - target) / var;
        if (mean(next) - target).abs() < (m - target).abs() {
            t = next;
        } else {
            break;
        }
    }
    let pstar = FrequencyVector::new(spec.kind, tilt_at(&lw, first, t));
    let j_star = j_raw(pstar.as_slice(), &lw);
    Ok(RateContext {
        spec,
        pstar,
        j_star,
        tilt: Tilt::Interior { x: t.exp() },
    })
}

/// `I(p)`.
pub fn rate_value(p: &FrequencyVector, ctx: &RateContext) -> Result<f64> {
    ctx.rate(p)
}

/// Free coordinates are the classes `first+2 ..= D`; the two lowest classes
/// are determined by the constraints.
pub fn from_free_coords(spec: &EnsembleSpec, free: &[f64]) -> FrequencyVector {
    let first = spec.first_class();
    assert_eq!(
        free.len() + 2,
        spec.num_classes().max(2),
        "free coordinate count"
    );
    let slack = (spec.kind.mean_target() - first) as f64;
    let second = slack
        - free
            .iter()
            .enumerate()
            .map(|(i, &q)| (i + 2) as f64 * q)
            .sum::<f64>();
    let lowest = 1.0 - second - free.iter().sum::<f64>();
    let mut p = Vec::with_capacity(spec.num_classes());
    p.push(lowest);
    p.push(second);
    p.extend_from_slice(free);
    FrequencyVector::new(spec.kind, p)
}

/// Gradient of `J` with respect to the free coordinates.
pub fn j_gradient_free(p: &FrequencyVector, spec: &EnsembleSpec) -> Result<Vec<f64>> {
    check_shape(p, spec)?;
    let lw = spec.class_log_weights();
    let phi: Vec<f64> = p
        .as_slice()
        .iter()
        .zip(&lw)
        .map(|(&x, &w)| x.ln() + 1.0 - w)
        .collect();
    Ok((2..phi.len())
        .map(|i| phi[i] - i as f64 * phi[1] + (i as f64 - 1.0) * phi[0])
        .collect())
}

/// Extreme points of the manifold: a point mass at the target class (when
/// it is a class) and every two-class mixture straddling the target.
pub fn manifold_vertices(spec: &EnsembleSpec) -> Vec<FrequencyVector> {
    let tau = spec.kind.mean_target();
    let first = spec.first_class();
    let mut out = Vec::new();
    if spec.classes().contains(&tau) {
        out.push(point_mass(spec, tau));
    }
    for j in first..tau {
        for k in (tau + 1)..=spec.bound {
            let mut p = vec![0.0; spec.num_classes()];
            let span = (k - j) as f64;
            p[j - first] = (k - tau) as f64 / span;
            p[k - first] = (tau - j) as f64 / span;
            out.push(FrequencyVector::new(spec.kind, p));
        }
    }
    out
}

/// `argmin_{p ∈ M} E(p)`; the minimum of a linear function is attained at a
/// vertex.
pub fn energy_minimizer(spec: &EnsembleSpec) -> FrequencyVector {
    manifold_vertices(spec)
        .into_iter()
        .min_by(|a, b| energy_mean(a, &spec.energy).total_cmp(&energy_mean(b, &spec.energy)))
        .expect("manifold is nonempty")
}

/// Random point of the manifold: a Dirichlet(1) mixture of its vertices.
pub fn random_manifold_point<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> FrequencyVector {
    let vertices = manifold_vertices(spec);
    let weights: Vec<f64> = vertices
        .iter()
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    let mut p = vec![0.0; spec.num_classes()];
    for (v, w) in vertices.iter().zip(&weights) {
        for (acc, x) in p.iter_mut().zip(v.as_slice()) {
            *acc += w / total * x;
        }
    }
    FrequencyVector::new(spec.kind, p)
}

/// Visits every grid point `m/R` of the manifold.
pub fn for_each_grid_point(
    spec: &EnsembleSpec,
    resolution: usize,
    cap: u128,
    mut visit: impl FnMut(&[f64]),
) -> Result<()> {
    let lattice = Lattice::manifold_grid(spec.kind, spec.bound, resolution);
    lattice.check_cap(cap)?;
    let r = resolution as f64;
    let mut p = vec![0.0; spec.num_classes()];
    lattice.for_each(|m| {
        for (x, &mk) in p.iter_mut().zip(m) {
            *x = mk as f64 / r;
        }
        visit(&p);
    });
    Ok(())
}

/// Brute-force oracle: the grid point of spacing `1/resolution` with the
/// smallest `J`.
pub fn grid_minimize_j(spec: &EnsembleSpec, resolution: usize) -> Result<FrequencyVector> {
    let spec = spec.clone().validate()?;
    if spec.bound > 5 {
        return Err(Error::TooLarge {
            n: spec.bound,
            max: 5,
        });
    }
    let lw = spec.class_log_weights();
    let r = resolution as f64;
    // x ln x at x = m/R, tabulated
    let table: Vec<f64> = (0..=resolution).map(|m| xlogx(m as f64 / r)).collect();
    let lattice = Lattice::manifold_grid(spec.kind, spec.bound, resolution);
    lattice.check_cap(GRID_CAP)?;
    let mut best: Option<(f64, Vec<u64>)> = None;
    lattice.for_each(|m| {
        let j: f64 = m
            .iter()
            .zip(&lw)
            .map(|(&mk, &w)| table[mk as usize] - mk as f64 / r * w)
            .sum();
        if best.as_ref().is_none_or(|(b, _)| j < *b) {
            best = Some((j, m.to_vec()));
        }
    });
    let (_, m) = best.expect("grid on the manifold is nonempty");
    Ok(FrequencyVector::new(
        spec.kind,
        m.iter().map(|&x| x as f64 / r).collect(),
    ))
}
