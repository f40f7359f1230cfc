//! Ensemble descriptions and the vectors that live on them.
//!
//! Labeled trees index classes by vertex degree `1..=D`; plane trees index
//! them by child count `0..=D`. Every vector carries its [`TreeKind`] so the
//! two conventions cannot be mixed silently.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::combinatorics::log_factorial;
use crate::error::{Error, Result};

/// Absolute tolerance for membership in the constraint manifold.
pub const MANIFOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeKind {
    /// Labeled trees on `1..=N`, classified by vertex degree.
    Labeled,
    /// Plane (ordered, rooted) trees, classified by number of children.
    Plane,
}

impl TreeKind {
    /// Smallest class index: degree 1 or child count 0.
    pub fn first_class(self) -> usize {
        match self {
            TreeKind::Labeled => 1,
            TreeKind::Plane => 0,
        }
    }

    pub fn min_bound(self) -> usize {
        match self {
            TreeKind::Labeled => 2,
            TreeKind::Plane => 1,
        }
    }

    /// Mean class of a point on the manifold: 2 for degrees, 1 for child counts.
    pub fn mean_target(self) -> usize {
        match self {
            TreeKind::Labeled => 2,
            TreeKind::Plane => 1,
        }
    }

    /// Deficit of the finite-N mean: `Σ k χ_k = mean_target·N − shift`.
    pub fn mean_shift(self) -> usize {
        match self {
            TreeKind::Labeled => 2,
            TreeKind::Plane => 1,
        }
    }

    /// Total class budget `Σ k χ_k` of a tree on `n` vertices, if any tree exists.
    pub fn class_budget(self, n: usize) -> Option<usize> {
        (n * self.mean_target()).checked_sub(self.mean_shift())
    }

    /// Smallest vertex count for which the ensemble is nonempty.
    pub fn min_vertices(self) -> usize {
        match self {
            TreeKind::Labeled => 2,
            TreeKind::Plane => 1,
        }
    }
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeKind::Labeled => "labeled",
            TreeKind::Plane => "plane",
        })
    }
}

impl FromStr for TreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "labeled" | "labelled" => Ok(TreeKind::Labeled),
            "plane" | "ordered" => Ok(TreeKind::Plane),
            other => Err(Error::Parse(format!("unknown tree kind `{other}`"))),
        }
    }
}

/// A Gibbs ensemble: tree kind, bound `D`, inverse temperature and the
/// per-class energy table `c(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub kind: TreeKind,
    pub bound: usize,
    pub beta: f64,
    /// `energy[i]` is `c(first_class + i)`.
    pub energy: Vec<f64>,
}

impl EnsembleSpec {
    /// Builds and validates a spec.
    pub fn new(kind: TreeKind, bound: usize, beta: f64, energy: Vec<f64>) -> Result<Self> {
        validate_spec(EnsembleSpec {
            kind,
            bound,
            beta,
            energy,
        })
    }

    /// Spec with all energies zero.
    pub fn uniform(kind: TreeKind, bound: usize) -> Result<Self> {
        let len = bound + 1 - kind.first_class().min(bound + 1);
        Self::new(kind, bound, 0.0, vec![0.0; len])
    }

    /// Returns the spec if valid; used at module entry points.
    pub fn validate(self) -> Result<Self> {
        validate_spec(self)
    }

    pub fn first_class(&self) -> usize {
        self.kind.first_class()
    }

    pub fn classes(&self) -> RangeInclusive<usize> {
        self.first_class()..=self.bound
    }

    pub fn num_classes(&self) -> usize {
        self.bound + 1 - self.first_class()
    }

    /// `c(k)`.
    pub fn energy_of_class(&self, class: usize) -> f64 {
        self.energy[class - self.first_class()]
    }

    /// Log of the per-vertex weight `e^{-βc(k)}`, divided by `(k−1)!` for
    /// labeled trees.
    pub fn class_log_weight(&self, class: usize) -> f64 {
        let tilt = -self.beta * self.energy_of_class(class);
        match self.kind {
            TreeKind::Labeled => tilt - log_factorial(class as u64 - 1).value(),
            TreeKind::Plane => tilt,
        }
    }

    pub fn class_log_weights(&self) -> Vec<f64> {
        self.classes().map(|k| self.class_log_weight(k)).collect()
    }
}

/// Checks the bound and the energy table; returns the spec unchanged.
pub fn validate_spec(spec: EnsembleSpec) -> Result<EnsembleSpec> {
    let min = spec.kind.min_bound();
    if spec.bound < min {
        return Err(Error::BoundTooSmall {
            kind: spec.kind,
            bound: spec.bound,
            min,
        });
    }
    let expected = spec.num_classes();
    if spec.energy.len() != expected {
        return Err(Error::BadEnergyTable(format!(
            "{} trees with D = {} need {} entries, got {}",
            spec.kind,
            spec.bound,
            expected,
            spec.energy.len()
        )));
    }
    if let Some(i) = spec.energy.iter().position(|c| !c.is_finite()) {
        return Err(Error::BadEnergyTable(format!(
            "entry for class {} is not finite",
            spec.first_class() + i
        )));
    }
    if !spec.beta.is_finite() {
        return Err(Error::BadEnergyTable("beta is not finite".into()));
    }
    Ok(spec)
}

/// Integer vertex counts per class (`χ` or `n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountVector {
    kind: TreeKind,
    counts: Vec<u64>,
}

impl CountVector {
    /// `counts[i]` is the number of vertices in class `kind.first_class() + i`.
    pub fn new(kind: TreeKind, counts: Vec<u64>) -> Self {
        CountVector { kind, counts }
    }

    pub fn labeled(counts: Vec<u64>) -> Self {
        Self::new(TreeKind::Labeled, counts)
    }

    pub fn plane(counts: Vec<u64>) -> Self {
        Self::new(TreeKind::Plane, counts)
    }

    /// Tallies a sequence of classes into a vector with `D` as the top class.
    pub fn from_classes(kind: TreeKind, bound: usize, classes: &[usize]) -> Self {
        let first = kind.first_class();
        let mut counts = vec![0u64; bound + 1 - first];
        for &k in classes {
            counts[k - first] += 1;
        }
        CountVector { kind, counts }
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Largest class index representable.
    pub fn top_class(&self) -> usize {
        self.kind.first_class() + self.counts.len() - 1
    }

    pub fn get(&self, class: usize) -> u64 {
        class
            .checked_sub(self.kind.first_class())
            .and_then(|i| self.counts.get(i).copied())
            .unwrap_or(0)
    }

    /// `N = Σ_k n_k`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `Σ_k k·n_k`.
    pub fn class_sum(&self) -> u64 {
        let first = self.kind.first_class() as u64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &n)| (first + i as u64) * n)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        let first = self.kind.first_class();
        self.counts
            .iter()
            .enumerate()
            .map(move |(i, &n)| (first + i, n))
    }
}

impl fmt::Display for CountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

/// True iff `n` is the class profile of some tree in the ensemble.
pub fn is_feasible(n: &CountVector, spec: &EnsembleSpec) -> bool {
    if n.kind != spec.kind || n.counts.len() != spec.num_classes() {
        return false;
    }
    let total = n.total() as usize;
    match spec.kind.class_budget(total) {
        Some(budget) => total >= spec.kind.min_vertices() && n.class_sum() == budget as u64,
        None => false,
    }
}

/// Real vector indexed by class, e.g. `χ/N` or a point of the manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector {
    kind: TreeKind,
    p: Vec<f64>,
}

impl FrequencyVector {
    pub fn new(kind: TreeKind, p: Vec<f64>) -> Self {
        FrequencyVector { kind, p }
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, class: usize) -> f64 {
        class
            .checked_sub(self.kind.first_class())
            .and_then(|i| self.p.get(i).copied())
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let first = self.kind.first_class();
        self.p.iter().enumerate().map(move |(i, &x)| (first + i, x))
    }

    /// `Σ_k k·p_k`.
    pub fn mean_class(&self) -> f64 {
        self.iter().map(|(k, x)| k as f64 * x).sum()
    }

    pub fn l1_distance(&self, other: &FrequencyVector) -> f64 {
        assert_eq!(self.p.len(), other.p.len(), "dimension mismatch");
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// Residuals of the two linear constraints defining the manifold.
    pub fn manifold_residuals(&self) -> (f64, f64) {
        let sum: f64 = self.p.iter().sum();
        (
            sum - 1.0,
            self.mean_class() - self.kind.mean_target() as f64,
        )
    }

    pub fn is_on_manifold(&self) -> bool {
        let (s, m) = self.manifold_residuals();
        self.p
            .iter()
            .all(|&x| (-MANIFOLD_TOL..=1.0 + MANIFOLD_TOL).contains(&x))
            && s.abs() <= MANIFOLD_TOL
            && m.abs() <= MANIFOLD_TOL
    }

    pub fn check_on_manifold(&self) -> Result<()> {
        if self.is_on_manifold() {
            Ok(())
        } else {
            let (sum_residual, mean_residual) = self.manifold_residuals();
            Err(Error::OffManifold {
                sum_residual,
                mean_residual,
            })
        }
    }
}

/// `n / N`. Generally off the manifold: the finite-N mean falls short of the
/// target by `shift/N`.
pub fn freq_from_counts(n: &CountVector) -> FrequencyVector {
    let total = n.total() as f64;
    assert!(total > 0.0, "empty count vector");
    FrequencyVector {
        kind: n.kind,
        p: n.counts.iter().map(|&c| c as f64 / total).collect(),
    }
}
