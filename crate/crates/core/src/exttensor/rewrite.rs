//! Rewrite steps between representations of the same tensor.
//!
//! Scalar transfer replaces `k_α(x)` by `k_β(x)`. Splitting replaces a point
//! `p` by `{p[α := q] : q ∈ Q}` for a finite `Q ⊆ V_α` with `⊕Q = p_α`;
//! `Q = ∅` is allowed when `p_α = 0`, which deletes `p`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::space::{PointSet, TensorSpace};
use crate::error::{Error, Result};

/// Largest `|{u ≼ p_α}|` for which splittings are enumerated.
const MAX_SPLIT_BASE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteStep {
    /// Replace `k_from(x)` by `k_to(x)`; `k` is a carrier index.
    Transfer { x: usize, k: usize, from: usize, to: usize },
    /// Replace `point` by its splitting along `slot` into element positions
    /// `parts`.
    Split { point: usize, slot: usize, parts: Vec<u32> },
}

impl RewriteStep {
    /// Applies the step. Returns `None` when the point to be replaced is
    /// absent or the step is malformed.
    pub fn apply(&self, space: &TensorSpace, set: &PointSet) -> Option<PointSet> {
        let mut out = set.clone();
        match self {
            RewriteStep::Transfer { x, k, from, to } => {
                let src = space.scale_at(*x, *k, *from);
                if !out.remove(src) {
                    return None;
                }
                out.insert(space.scale_at(*x, *k, *to));
            }
            RewriteStep::Split { point, slot, parts } => {
                let ops = space.ops(*slot);
                let target = space.component(*point, *slot) as u32;
                let sup = parts.iter().fold(ops.zero, |acc, &q| ops.join(acc, q));
                if sup != target || !out.remove(*point) {
                    return None;
                }
                for &q in parts {
                    out.insert(space.with_component(*point, *slot, q as usize));
                }
            }
        }
        Some(out)
    }
}

/// Every `Q ⊆ V_α` with `⊕Q = v`, as sorted position lists.
pub fn splittings(space: &TensorSpace, slot: usize, v: u32) -> Result<Vec<Vec<u32>>> {
    let ops = space.ops(slot);
    let base = &ops.below[v as usize];
    if base.len() > MAX_SPLIT_BASE {
        return Err(Error::Overflow(format!(
            "{} elements below a split point",
            base.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << base.len()) {
        let parts: Vec<u32> = (0..base.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| base[i])
            .collect();
        let sup = parts.iter().fold(ops.zero, |acc, &q| ops.join(acc, q));
        if sup == v {
            out.push(parts);
        }
    }
    Ok(out)
}

/// Every single rewrite step applicable to `set`.
pub fn steps(space: &TensorSpace, set: &PointSet) -> Result<Vec<RewriteStep>> {
    let mut out = Vec::new();
    let slots = space.arity();
    for k in 0..space.carrier().len() {
        for x in 0..space.size() {
            for from in 0..slots {
                if !set.contains(space.scale_at(x, k, from)) {
                    continue;
                }
                for to in (0..slots).filter(|&t| t != from) {
                    if space.scale_at(x, k, to) != space.scale_at(x, k, from) {
                        out.push(RewriteStep::Transfer { x, k, from, to });
                    }
                }
            }
        }
    }
    for point in set.iter() {
        for slot in 0..slots {
            let v = space.component(point, slot) as u32;
            for parts in splittings(space, slot, v)? {
                if parts != [v] {
                    out.push(RewriteStep::Split { point, slot, parts });
                }
            }
        }
    }
    Ok(out)
}

/// A uniformly chosen applicable step, if any.
pub fn random_step<R: Rng>(space: &TensorSpace, set: &PointSet, rng: &mut R) -> Result<Option<RewriteStep>> {
    Ok(steps(space, set)?.choose(rng).cloned())
}

/// Class labels of every subset of `V` (indexed by bitmask) under the
/// equivalence generated by single rewrite steps. Requires `|V| ≤ 16`.
pub fn reachability_classes(space: &TensorSpace) -> Result<Vec<usize>> {
    let n = small_universe(space)?;
    let mut parent: Vec<usize> = (0..1usize << n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for mask in 0..1u64 << n {
        let set = PointSet::from_mask(n, mask);
        for step in steps(space, &set)? {
            let next = step.apply(space, &set).expect("generated steps apply");
            let (a, b) = (
                find(&mut parent, mask as usize),
                find(&mut parent, next.to_mask().expect("small") as usize),
            );
            parent[a.max(b)] = a.min(b);
        }
    }
    Ok((0..parent.len()).map(|i| find(&mut parent, i)).collect())
}

/// Class labels of every subset of `V` under equality of τ-hulls, in the
/// same labeling convention as [`reachability_classes`] (the least mask in
/// each class).
pub fn tau_classes(space: &TensorSpace) -> Result<Vec<usize>> {
    let n = small_universe(space)?;
    let mut first: std::collections::HashMap<PointSet, usize> = Default::default();
    Ok((0..1u64 << n)
        .map(|mask| {
            let h = space.hull(&PointSet::from_mask(n, mask));
            *first.entry(h).or_insert(mask as usize)
        })
        .collect())
}

fn small_universe(space: &TensorSpace) -> Result<usize> {
    let n = space.size();
    if n > 16 {
        return Err(Error::Overflow(format!("{n} points is too many for subset enumeration")));
    }
    Ok(n)
}
