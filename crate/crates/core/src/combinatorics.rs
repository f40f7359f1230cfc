//! Log-domain counting: factorials, multinomials and the closed-form tree
//! counts by degree sequence or class profile.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::OnceLock;

use crate::ensembles::{CountVector, TreeKind};
use crate::error::{Error, Result};

/// Natural logarithm of a nonnegative real. `-inf` encodes zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct LogReal(f64);

impl LogReal {
    pub const ZERO: LogReal = LogReal(f64::NEG_INFINITY);
    pub const ONE: LogReal = LogReal(0.0);

    pub fn from_log(logval: f64) -> Self {
        LogReal(logval)
    }

    pub fn from_value(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        LogReal(x.ln())
    }

    /// The stored logarithm.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl Add for LogReal {
    type Output = LogReal;

    fn add(self, rhs: LogReal) -> LogReal {
        LogReal(log_add_exp(self.0, rhs.0))
    }
}

impl Mul for LogReal {
    type Output = LogReal;

    fn mul(self, rhs: LogReal) -> LogReal {
        if self.is_zero() || rhs.is_zero() {
            LogReal::ZERO
        } else {
            LogReal(self.0 + rhs.0)
        }
    }
}

impl std::iter::Sum for LogReal {
    fn sum<I: Iterator<Item = LogReal>>(iter: I) -> LogReal {
        let mut acc = LogSumExp::new();
        for x in iter {
            acc.push(x.0);
        }
        LogReal(acc.value())
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Max-shifted `ln Σ e^{x_i}`; `-inf` for an empty or all-zero input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// Streaming log-sum-exp that rescales when a larger term arrives.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        LogSumExp {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled += (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn merge(&mut self, other: &LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max <= self.max {
            self.scaled += other.scaled * (other.max - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - other.max).exp() + other.scaled;
            self.max = other.max;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

const TABLE_LEN: usize = 1 << 17;

fn factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Neumaier-compensated running sum of ln k.
        let mut table = Vec::with_capacity(TABLE_LEN);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        table.push(0.0);
        for k in 1..TABLE_LEN {
            let term = (k as f64).ln();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            table.push(sum + comp);
        }
        table
    })
}

/// Stirling series for `ln m!`, accurate to rounding once `m` is large.
fn stirling_log_factorial(m: f64) -> f64 {
    let inv = 1.0 / m;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    m * m.ln() - m + 0.5 * (2.0 * std::f64::consts::PI * m).ln() + series
}

/// `ln(m!)`. Table-backed below 2^17, Stirling series above.
pub fn log_factorial(m: u64) -> LogReal {
    let table = factorial_table();
    match table.get(m as usize) {
        Some(&v) => LogReal(v),
        None => LogReal(stirling_log_factorial(m as f64)),
    }
}

/// `ln C(N; n_1, …, n_D)`.
pub fn log_multinomial(total: u64, counts: &[u64]) -> Result<LogReal> {
    let actual: u64 = counts.iter().sum();
    if actual != total {
        return Err(Error::SumMismatch {
            expected: total,
            actual,
        });
    }
    let denom: f64 = counts.iter().map(|&n| log_factorial(n).value()).sum();
    Ok(LogReal(log_factorial(total).value() - denom))
}

/// Log of the number of labeled trees on `1..=N` whose vertex `i` has degree
/// `degrees[i-1]`: the multinomial `(N−2; d_1−1, …, d_N−1)`, or zero when the
/// degrees do not sum to `2N−2`.
pub fn log_labeled_count_by_degrees(degrees: &[usize]) -> LogReal {
    let n = degrees.len();
    if n < 2 || degrees.contains(&0) || degrees.iter().sum::<usize>() != 2 * n - 2 {
        return LogReal::ZERO;
    }
    let denom: f64 = degrees
        .iter()
        .map(|&d| log_factorial(d as u64 - 1).value())
        .sum();
    LogReal(log_factorial(n as u64 - 2).value() - denom)
}

/// Log of the number of labeled trees with degree profile `n`:
/// `(N−2)! / Π_k ((k−1)!)^{n_k} · C(N, n)`.
pub fn log_labeled_count_by_profile(n: &CountVector) -> LogReal {
    assert_eq!(n.kind(), TreeKind::Labeled, "labeled profile expected");
    let total = n.total();
    if total < 2 || n.class_sum() != 2 * total - 2 {
        return LogReal::ZERO;
    }
    let degree_factor: f64 = n
        .iter()
        .map(|(k, nk)| nk as f64 * log_factorial(k as u64 - 1).value())
        .sum();
    let multinomial = log_multinomial(total, n.counts()).expect("total is the sum");
    LogReal(log_factorial(total - 2).value() - degree_factor + multinomial.value())
}

/// Log of the number of plane trees with child-count profile `n`:
/// `(1/N) · C(N; n_0, n_1, …)`, or zero unless `Σ k n_k = N−1`.
pub fn log_plane_count_by_profile(n: &CountVector) -> LogReal {
    assert_eq!(n.kind(), TreeKind::Plane, "plane profile expected");
    let total = n.total();
    if total == 0 || n.class_sum() + 1 != total {
        return LogReal::ZERO;
    }
    let multinomial = log_multinomial(total, n.counts()).expect("total is the sum");
    LogReal(multinomial.value() - (total as f64).ln())
}

/// Dispatches on the vector's kind.
pub fn log_count_by_profile(n: &CountVector) -> LogReal {
    match n.kind() {
        TreeKind::Labeled => log_labeled_count_by_profile(n),
        TreeKind::Plane => log_plane_count_by_profile(n),
    }
}
