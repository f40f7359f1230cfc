//! Integer points of `{m ≥ 0 : Σ m_k = total, Σ k m_k = class_sum}`.
//!
//! The two lowest classes are solved from the constraints; the remaining
//! "free" classes are swept depth first. Feasible tree profiles and the
//! `1/R` grid on the manifold are both lattices of this form.

use std::thread;

use crate::ensembles::TreeKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    first: usize,
    top: usize,
    total: u64,
    class_sum: u64,
    empty: bool,
}

impl Lattice {
    pub fn new(kind: TreeKind, bound: usize, total: u64, class_sum: u64) -> Self {
        let first = kind.first_class();
        assert!(bound >= first, "bound below first class");
        Lattice {
            first,
            top: bound,
            total,
            class_sum,
            empty: false,
        }
    }

    /// Profiles of trees on `n` vertices. Empty when no tree exists.
    pub fn profiles(kind: TreeKind, bound: usize, n: usize) -> Self {
        match kind.class_budget(n) {
            Some(budget) if n >= kind.min_vertices() => {
                Self::new(kind, bound, n as u64, budget as u64)
            }
            _ => Lattice {
                empty: true,
                ..Self::new(kind, bound, n as u64, 0)
            },
        }
    }

    /// Points `m/R` of the manifold: `Σ m = R`, `Σ k m = target·R`.
    pub fn manifold_grid(kind: TreeKind, bound: usize, resolution: usize) -> Self {
        let r = resolution as u64;
        Self::new(kind, bound, r, kind.mean_target() as u64 * r)
    }

    pub fn dimension(&self) -> usize {
        self.top + 1 - self.first
    }

    /// Slack `B = Σ (k − first) m_k`, if nonnegative.
    fn slack(&self) -> Option<u64> {
        if self.empty {
            return None;
        }
        self.class_sum.checked_sub(self.first as u64 * self.total)
    }

    fn free_classes(&self) -> std::ops::RangeInclusive<usize> {
        (self.first + 2)..=self.top
    }

    /// Upper bound on the number of points: the count of free tuples with
    /// `Σ (k − first) m_k ≤ B`.
    pub fn size_bound(&self) -> u128 {
        let Some(b) = self.slack() else { return 0 };
        if self.top == self.first {
            return u128::from(b == 0);
        }
        let b = b as usize;
        // ways[s] = number of free tuples with weighted sum exactly s
        let mut ways = vec![0u128; b + 1];
        ways[0] = 1;
        for k in self.free_classes() {
            let w = k - self.first;
            for s in w..=b {
                ways[s] = ways[s].saturating_add(ways[s - w]);
            }
        }
        ways.iter().fold(0u128, |a, &x| a.saturating_add(x))
    }

    pub fn check_cap(&self, cap: u128) -> Result<()> {
        let size = self.size_bound();
        if size > cap {
            Err(Error::LatticeTooLarge { size, cap })
        } else {
            Ok(())
        }
    }

    /// Visits every point in lexicographic order of the free coordinates.
    pub fn for_each(&self, mut visit: impl FnMut(&[u64])) {
        let Some(b) = self.slack() else { return };
        let mut counts = vec![0u64; self.dimension()];
        if self.top == self.first {
            if b == 0 {
                counts[0] = self.total;
                visit(&counts);
            }
            return;
        }
        self.descend(2, b, 0, &mut counts, &mut visit);
    }

    fn descend(
        &self,
        idx: usize,
        remaining: u64,
        used: u64,
        counts: &mut [u64],
        visit: &mut impl FnMut(&[u64]),
    ) {
        if idx == counts.len() {
            // second class absorbs the slack, first class the rest
            let second = remaining;
            if let Some(first) = self.total.checked_sub(second + used) {
                counts[0] = first;
                counts[1] = second;
                visit(counts);
            }
            return;
        }
        let weight = idx as u64;
        let mut m = 0u64;
        loop {
            counts[idx] = m;
            self.descend(idx + 1, remaining - m * weight, used + m, counts, visit);
            if remaining < (m + 1) * weight {
                break;
            }
            m += 1;
        }
        counts[idx] = 0;
    }

    /// Parallel sweep partitioned by the leading free coordinate.
    ///
    /// Returns one accumulator per value of that coordinate, in increasing
    /// order, so that an in-order merge is independent of `workers`.
    pub fn sweep<A, I, V>(&self, workers: usize, init: I, visit: V) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &[u64]) + Sync,
    {
        let Some(b) = self.slack() else {
            return Vec::new();
        };
        if self.dimension() <= 2 {
            let mut acc = init();
            self.for_each(|m| visit(&mut acc, m));
            return vec![acc];
        }
        let weight = 2u64;
        let leading: Vec<u64> = (0..=b / weight).collect();
        let workers = workers.clamp(1, leading.len());
        let run_slice = |lead: u64| {
            let mut acc = init();
            let mut counts = vec![0u64; self.dimension()];
            counts[2] = lead;
            self.descend(
                3,
                b - lead * weight,
                lead,
                &mut counts,
                &mut |m: &[u64]| visit(&mut acc, m),
            );
            (lead, acc)
        };
        let mut parts: Vec<(u64, A)> = if workers == 1 {
            leading.iter().map(|&l| run_slice(l)).collect()
        } else {
            thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let run_slice = &run_slice;
                        let leading = &leading;
                        scope.spawn(move || {
                            leading
                                .iter()
                                .skip(w)
                                .step_by(workers)
                                .map(|&l| run_slice(l))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("lattice worker panicked"))
                    .collect()
            })
        };
        parts.sort_by_key(|(lead, _)| *lead);
        parts.into_iter().map(|(_, acc)| acc).collect()
    }
}
