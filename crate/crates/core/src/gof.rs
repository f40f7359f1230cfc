//! Pearson chi-square goodness-of-fit, used to check samplers against
//! exact laws.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Bins whose expected count falls below this are pooled together.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Tests `observed` counts against category probabilities `probs`.
///
/// Probabilities are renormalized; categories with expected count below
/// [`MIN_EXPECTED`] are merged into a single pooled bin.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> ChiSquareTest {
    assert_eq!(observed.len(), probs.len(), "bin count mismatch");
    if observed.iter().zip(probs).any(|(&o, &p)| o > 0 && p <= 0.0) {
        return ChiSquareTest {
            statistic: f64::INFINITY,
            dof: observed.len().saturating_sub(1),
            p_value: 0.0,
        };
    }
    let draws: u64 = observed.iter().sum();
    let mass: f64 = probs.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::with_capacity(observed.len());
    let mut pooled = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = draws as f64 * p / mass;
        if e < MIN_EXPECTED {
            pooled.0 += o as f64;
            pooled.1 += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    if pooled.1 > 0.0 || pooled.0 > 0.0 {
        if pooled.1 >= MIN_EXPECTED || bins.is_empty() {
            bins.push(pooled);
        } else {
            // fold a thin pooled bin into the smallest regular bin
            let (i, _) = bins
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .expect("nonempty");
            bins[i].0 += pooled.0;
            bins[i].1 += pooled.1;
        }
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| {
            if e > 0.0 {
                (o - e).powi(2) / e
            } else if o > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        if statistic.is_finite() {
            1.0
        } else {
            0.0
        }
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive dof");
        dist.sf(statistic)
    };
    ChiSquareTest {
        statistic,
        dof,
        p_value,
    }
}
