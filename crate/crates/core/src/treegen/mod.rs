//! Concrete trees: exact Gibbs samplers, codes, enumerators and per-tree
//! statistics.
//!
//! Labeled trees are edge lists over `1..=N`. Plane trees are stored as
//! their preorder child-count sequence, which is all the class statistics
//! need.

mod labeled;
mod plane;

pub use labeled::{
    enumerate_labeled_trees, prufer_decode, prufer_encode, sample_labeled_tree, LabeledSampler,
    LabeledTree, MAX_ENUMERATED_LABELED,
};
pub use plane::{
    cycle_lemma_rotation, enumerate_plane_trees, sample_plane_tree, PlaneSampler, PlaneTree,
    MAX_ENUMERATED_PLANE,
};

use crate::ensembles::{CountVector, EnsembleSpec, TreeKind};
use crate::error::{Error, Result};

/// A tree whose vertices each fall into one class.
pub trait GibbsTree {
    const KIND: TreeKind;

    fn vertex_count(&self) -> usize;

    /// Class of every vertex: degree (labeled) or child count (plane).
    fn vertex_classes(&self) -> Vec<usize>;
}

fn check_kind<T: GibbsTree>(spec: &EnsembleSpec) -> Result<()> {
    if spec.kind != T::KIND {
        return Err(Error::KindMismatch {
            expected: spec.kind,
            actual: T::KIND,
        });
    }
    Ok(())
}

/// `χ(T)`.
pub fn chi_of<T: GibbsTree>(tree: &T, spec: &EnsembleSpec) -> Result<CountVector> {
    check_kind::<T>(spec)?;
    let classes = tree.vertex_classes();
    if let Some(&class) = classes.iter().find(|&&k| k > spec.bound) {
        return Err(Error::DegreeBoundExceeded {
            class,
            bound: spec.bound,
        });
    }
    Ok(CountVector::from_classes(spec.kind, spec.bound, &classes))
}

/// `H(T) = Σ_k c(k) χ_k(T)`.
pub fn energy_of<T: GibbsTree>(tree: &T, spec: &EnsembleSpec) -> Result<f64> {
    let chi = chi_of(tree, spec)?;
    Ok(chi
        .iter()
        .map(|(k, n)| n as f64 * spec.energy_of_class(k))
        .sum())
}
