use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::GibbsTree;
use crate::ensembles::{EnsembleSpec, TreeKind};
use crate::error::{Error, Result};
use crate::partition::{sample_degree_sequence, DpTable};

/// Largest `N` supported by [`enumerate_plane_trees`].
pub const MAX_ENUMERATED_PLANE: usize = 12;

/// A plane tree as its preorder child-count sequence.
///
/// Valid sequences are Łukasiewicz words: with steps `c_i − 1`, every proper
/// prefix sums to at least 0 and the whole word sums to −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    child_counts: Vec<usize>,
}

fn is_lukasiewicz(counts: &[usize]) -> bool {
    let mut height: i64 = 1;
    for (i, &c) in counts.iter().enumerate() {
        height += c as i64 - 1;
        let last = i + 1 == counts.len();
        if (last && height != 0) || (!last && height < 1) {
            return false;
        }
    }
    !counts.is_empty()
}

impl PlaneTree {
    pub fn from_child_counts(child_counts: Vec<usize>) -> Result<Self> {
        if !is_lukasiewicz(&child_counts) {
            return Err(Error::NotATree(format!(
                "{child_counts:?} is not a preorder child-count sequence"
            )));
        }
        Ok(PlaneTree { child_counts })
    }

    pub fn n(&self) -> usize {
        self.child_counts.len()
    }

    pub fn child_counts(&self) -> &[usize] {
        &self.child_counts
    }

    pub fn max_children(&self) -> usize {
        self.child_counts.iter().copied().max().unwrap_or(0)
    }

    /// Parent of each vertex in preorder (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.n()];
        // open slots as (vertex, remaining children)
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for (v, &c) in self.child_counts.iter().enumerate() {
            if let Some(top) = stack.last_mut() {
                parents[v] = Some(top.0);
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if c > 0 {
                stack.push((v, c));
            }
        }
        parents
    }
}

impl GibbsTree for PlaneTree {
    const KIND: TreeKind = TreeKind::Plane;

    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn vertex_classes(&self) -> Vec<usize> {
        self.child_counts.clone()
    }
}

/// Fixture form: space-separated child counts on one newline-terminated line.
impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.child_counts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        writeln!(f)
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad child count `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_child_counts(counts)
    }
}

/// Index `r` such that `steps[r..] ++ steps[..r]` is a Łukasiewicz word.
///
/// For a word summing to −1 exactly one rotation qualifies: it starts just
/// after the first position where the prefix sum reaches its minimum.
pub fn cycle_lemma_rotation(steps: &[i64]) -> Result<usize> {
    let total: i64 = steps.iter().sum();
    if steps.is_empty() || total != -1 {
        return Err(Error::BadStepSum(total));
    }
    let mut prefix = 0i64;
    let (mut min, mut argmin) = (0i64, 0usize);
    for (j, &s) in steps.iter().enumerate() {
        prefix += s;
        if prefix < min {
            min = prefix;
            argmin = j + 1;
        }
    }
    Ok(argmin % steps.len())
}

/// Exact sampler for the plane Gibbs measure on trees of a fixed size.
///
/// A child-count sequence is drawn from the DP and shuffled; the unique
/// valid rotation of its step word is read as a preorder traversal. Each
/// tree corresponds to exactly `N` rotations, which is the `1/N` in the
/// plane-tree count.
#[derive(Debug, Clone)]
pub struct PlaneSampler {
    dp: DpTable,
}

impl PlaneSampler {
    pub fn new(spec: &EnsembleSpec, n: usize) -> Result<Self> {
        if spec.kind != TreeKind::Plane {
            return Err(Error::KindMismatch {
                expected: TreeKind::Plane,
                actual: spec.kind,
            });
        }
        Ok(PlaneSampler {
            dp: DpTable::build(spec, n)?,
        })
    }

    pub fn from_table(dp: DpTable) -> Result<Self> {
        if dp.spec().kind != TreeKind::Plane {
            return Err(Error::KindMismatch {
                expected: TreeKind::Plane,
                actual: dp.spec().kind,
            });
        }
        Ok(PlaneSampler { dp })
    }

    pub fn table(&self) -> &DpTable {
        &self.dp
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PlaneTree> {
        let mut classes = sample_degree_sequence(&self.dp, rng)?;
        classes.shuffle(rng);
        let steps: Vec<i64> = classes.iter().map(|&c| c as i64 - 1).collect();
        let r = cycle_lemma_rotation(&steps)?;
        classes.rotate_left(r);
        Ok(PlaneTree {
            child_counts: classes,
        })
    }
}

pub fn sample_plane_tree<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    n: usize,
    rng: &mut R,
) -> Result<PlaneTree> {
    PlaneSampler::new(spec, n)?.sample(rng)
}

/// Every plane tree on `n` vertices with at most `bound` children per
/// vertex, in lexicographic order of the child-count sequence.
pub fn enumerate_plane_trees(n: usize, bound: usize) -> Result<Vec<PlaneTree>> {
    if n > MAX_ENUMERATED_PLANE {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATED_PLANE,
        });
    }
    if n == 0 {
        return Err(Error::NotATree("0 vertices".into()));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    extend_words(n, bound, 1, &mut word, &mut out);
    Ok(out)
}

/// `open` counts the slots still waiting for a subtree.
fn extend_words(
    n: usize,
    bound: usize,
    open: usize,
    word: &mut Vec<usize>,
    out: &mut Vec<PlaneTree>,
) {
    let placed = word.len();
    let remaining_after = n - placed - 1;
    for c in 0..=bound {
        let next_open = open - 1 + c;
        let ok = if remaining_after == 0 {
            next_open == 0
        } else {
            next_open >= 1 && next_open <= remaining_after
        };
        if !ok {
            continue;
        }
        word.push(c);
        if remaining_after == 0 {
            out.push(PlaneTree {
                child_counts: word.clone(),
            });
        } else {
            extend_words(n, bound, next_open, word, out);
        }
        word.pop();
    }
}
