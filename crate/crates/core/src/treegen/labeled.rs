use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::GibbsTree;
use crate::ensembles::{EnsembleSpec, TreeKind};
use crate::error::{Error, Result};
use crate::partition::{sample_degree_sequence, DpTable};

/// Largest `N` for which all `N^{N−2}` labeled trees are enumerated.
pub const MAX_ENUMERATED_LABELED: usize = 8;

/// A labeled tree on `1..=N`. Edges are stored as `(u, v)` with `u < v`,
/// sorted, so equal trees compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl LabeledTree {
    /// Validates that `edges` span a tree on `1..=n`.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::NotATree(format!("{n} vertices")));
        }
        if edges.len() != n - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {} vertices",
                edges.len(),
                n
            )));
        }
        let mut dsu = Dsu::new(n);
        for &(u, v) in &edges {
            for x in [u, v] {
                if !(1..=n).contains(&x) {
                    return Err(Error::BadLabel { label: x, n });
                }
            }
            if !dsu.union(u - 1, v - 1) {
                return Err(Error::NotATree(format!("edge {u}-{v} closes a cycle")));
            }
        }
        Ok(Self::normalized(n, edges))
    }

    fn normalized(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        LabeledTree { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `degrees()[v-1]` is the degree of vertex `v`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u - 1] += 1;
            deg[v - 1] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }
}

impl GibbsTree for LabeledTree {
    const KIND: TreeKind = TreeKind::Labeled;

    fn vertex_count(&self) -> usize {
        self.n
    }

    fn vertex_classes(&self) -> Vec<usize> {
        self.degrees()
    }
}

/// Fixture form: one `u v` line per edge, sorted, newline-terminated.
impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for LabeledTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for line in s.lines().filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split_whitespace().map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad label `{t}`: {e}")))
            });
            match (parts.next(), parts.next(), parts.next()) {
                (Some(u), Some(v), None) => edges.push((u?, v?)),
                _ => return Err(Error::Parse(format!("bad edge line `{line}`"))),
            }
        }
        Self::from_edges(edges.len() + 1, edges)
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Decodes a Prüfer code over labels `1..=n`. Vertex `v` ends up with degree
/// one more than its multiplicity in the code.
pub fn prufer_decode(n: usize, code: &[usize]) -> Result<LabeledTree> {
    if n < 2 {
        return Err(Error::NotATree(format!("{n} vertices")));
    }
    if code.len() != n - 2 {
        return Err(Error::BadCodeLength {
            n,
            expected: n - 2,
            actual: code.len(),
        });
    }
    if let Some(&label) = code.iter().find(|&&v| !(1..=n).contains(&v)) {
        return Err(Error::BadLabel { label, n });
    }
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v - 1] += 1;
    }
    let mut ptr = degree.iter().position(|&d| d == 1).expect("a leaf exists");
    let mut leaf = ptr;
    let mut edges = Vec::with_capacity(n - 1);
    for &v in code {
        let v = v - 1;
        edges.push((leaf + 1, v + 1));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf + 1, n));
    Ok(LabeledTree::normalized(n, edges))
}

/// Inverse of [`prufer_decode`].
pub fn prufer_encode(tree: &LabeledTree) -> Result<Vec<usize>> {
    // re-validate: trees built via `normalized` skip the check
    let tree = LabeledTree::from_edges(tree.n, tree.edges.clone())?;
    let n = tree.n;
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &tree.edges {
        adj[u - 1].push(v - 1);
        adj[v - 1].push(u - 1);
    }
    // parents with the tree rooted at vertex n
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![n - 1];
    parent[n - 1] = n - 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut ptr = degree.iter().position(|&d| d == 1).expect("a leaf exists");
    let mut leaf = ptr;
    let mut code = Vec::with_capacity(n.saturating_sub(2));
    for _ in 0..n.saturating_sub(2) {
        let next = parent[leaf];
        code.push(next + 1);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    Ok(code)
}

/// Exact sampler for the labeled Gibbs measure on trees of a fixed size.
///
/// A degree sequence is drawn from the DP, the word holding vertex `i`
/// exactly `d_i − 1` times is shuffled, and the result is decoded as a Prüfer
/// code. Given the degrees every tree is equally likely, which is exactly
/// what the uniform shuffle produces.
#[derive(Debug, Clone)]
pub struct LabeledSampler {
    dp: DpTable,
}

impl LabeledSampler {
    pub fn new(spec: &EnsembleSpec, n: usize) -> Result<Self> {
        if spec.kind != TreeKind::Labeled {
            return Err(Error::KindMismatch {
                expected: TreeKind::Labeled,
                actual: spec.kind,
            });
        }
        Ok(LabeledSampler {
            dp: DpTable::build(spec, n)?,
        })
    }

    pub fn from_table(dp: DpTable) -> Result<Self> {
        if dp.spec().kind != TreeKind::Labeled {
            return Err(Error::KindMismatch {
                expected: TreeKind::Labeled,
                actual: dp.spec().kind,
            });
        }
        Ok(LabeledSampler { dp })
    }

    pub fn table(&self) -> &DpTable {
        &self.dp
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LabeledTree> {
        let degrees = sample_degree_sequence(&self.dp, rng)?;
        let n = degrees.len();
        let mut word = Vec::with_capacity(n.saturating_sub(2));
        for (v, &d) in degrees.iter().enumerate() {
            word.extend(std::iter::repeat_n(v + 1, d - 1));
        }
        word.shuffle(rng);
        prufer_decode(n, &word)
    }
}

pub fn sample_labeled_tree<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    n: usize,
    rng: &mut R,
) -> Result<LabeledTree> {
    LabeledSampler::new(spec, n)?.sample(rng)
}

/// Every labeled tree on `1..=n`, once each, in Prüfer-code order.
pub fn enumerate_labeled_trees(n: usize) -> Result<impl Iterator<Item = LabeledTree>> {
    if n > MAX_ENUMERATED_LABELED {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATED_LABELED,
        });
    }
    if n < 2 {
        return Err(Error::NotATree(format!("{n} vertices")));
    }
    let len = n - 2;
    let mut code = vec![1usize; len];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let tree = prufer_decode(n, &code).expect("codes are in range");
        // odometer, last digit fastest
        done = true;
        for digit in code.iter_mut().rev() {
            if *digit < n {
                *digit += 1;
                done = false;
                break;
            }
            *digit = 1;
        }
        Some(tree)
    }))
}
