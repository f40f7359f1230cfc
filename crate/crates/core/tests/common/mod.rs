//! Brute-force oracles shared by the integration tests.
//!
//! Labeled trees are found by testing every `(N−1)`-subset of the edges of
//! `K_N` for connectivity; plane trees are built recursively as a root with
//! an ordered forest of subtrees. Neither path touches Prüfer codes or
//! Łukasiewicz words.

#![allow(dead_code)]

use gibbs_trees::{EnsembleSpec, TreeKind};

/// Sorted edge lists `(u, v)` with `u < v`, labels `1..=n`.
pub fn brute_labeled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    let all: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(n - 1);
    choose(&all, 0, n - 1, &mut chosen, &mut |edges: &[(
        usize,
        usize,
    )]| {
        if connected(n, edges) {
            out.push(edges.to_vec());
        }
    });
    out
}

fn choose(
    all: &[(usize, usize)],
    start: usize,
    k: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    let need = k - chosen.len();
    for i in start..(all.len() + 1).saturating_sub(need) {
        chosen.push(all[i]);
        choose(all, i + 1, k, chosen, visit);
        chosen.pop();
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n + 1];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

pub fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u - 1] += 1;
        d[v - 1] += 1;
    }
    d
}

/// Preorder child-count sequences of all plane trees with `n` vertices.
pub fn brute_plane_trees(n: usize) -> Vec<Vec<usize>> {
    let mut memo: Vec<Vec<Vec<usize>>> = Vec::new();
    for size in 0..=n {
        let trees = if size == 0 {
            Vec::new()
        } else {
            forests(size - 1, &memo)
                .into_iter()
                .map(|(roots, body)| {
                    let mut t = vec![roots];
                    t.extend(body);
                    t
                })
                .collect()
        };
        memo.push(trees);
    }
    memo.pop().unwrap_or_default()
}

/// Ordered forests on `size` vertices as (number of trees, concatenated
/// preorders).
fn forests(size: usize, trees_by_size: &[Vec<Vec<usize>>]) -> Vec<(usize, Vec<usize>)> {
    if size == 0 {
        return vec![(0, Vec::new())];
    }
    let mut out = Vec::new();
    for first in 1..=size {
        for head in &trees_by_size[first] {
            for (count, rest) in forests(size - first, trees_by_size) {
                let mut body = head.clone();
                body.extend(rest);
                out.push((count + 1, body));
            }
        }
    }
    out
}

/// Classes of each vertex of a brute-force tree.
pub fn labeled_classes(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    degrees(n, edges)
}

/// `e^{−βH}` for a tree given by its vertex classes, or `None` when some
/// class exceeds the bound.
pub fn gibbs_weight(spec: &EnsembleSpec, classes: &[usize]) -> Option<f64> {
    if classes.iter().any(|&k| k > spec.bound) {
        return None;
    }
    let first = match spec.kind {
        TreeKind::Labeled => 1,
        TreeKind::Plane => 0,
    };
    let h: f64 = classes.iter().map(|&k| spec.energy[k - first]).sum();
    Some((-spec.beta * h).exp())
}

/// All trees of the ensemble as (vertex classes, Gibbs weight).
pub fn weighted_trees(spec: &EnsembleSpec, n: usize) -> Vec<(Vec<usize>, f64)> {
    let classes: Vec<Vec<usize>> = match spec.kind {
        TreeKind::Labeled => brute_labeled_trees(n)
            .iter()
            .map(|e| labeled_classes(n, e))
            .collect(),
        TreeKind::Plane => brute_plane_trees(n),
    };
    classes
        .into_iter()
        .filter_map(|c| gibbs_weight(spec, &c).map(|w| (c, w)))
        .collect()
}

pub fn brute_log_z(spec: &EnsembleSpec, n: usize) -> f64 {
    weighted_trees(spec, n)
        .iter()
        .map(|(_, w)| w)
        .sum::<f64>()
        .ln()
}

/// Profile vector indexed from the first class.
pub fn profile(spec: &EnsembleSpec, classes: &[usize]) -> Vec<u64> {
    let first = match spec.kind {
        TreeKind::Labeled => 1,
        TreeKind::Plane => 0,
    };
    let mut p = vec![0u64; spec.bound + 1 - first];
    for &k in classes {
        p[k - first] += 1;
    }
    p
}

pub fn catalan(m: u64) -> u64 {
    (0..m).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}
