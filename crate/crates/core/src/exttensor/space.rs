//! Products of finite semimodules, their subsets, and the τ-hull.
//!
//! A point of `V = V_1 × … × V_m` is encoded by the positions of its
//! components in their factors, flattened row-major with the first factor
//! most significant. Point ids therefore enumerate `V` in lexicographic
//! order of carrier indices.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::module::{require_finite, FinSemimodule, OpTables, Tuple};
use crate::error::{Error, Result};
use crate::semiring::{Elem, Semiring};

/// Largest product the engine will enumerate.
pub const MAX_POINTS: usize = 1 << 20;

/// Largest number of tensors [`TensorSpace::enumerate_tensors`] will list.
pub const MAX_TENSORS: usize = 1 << 16;

/// `(x_1, …, x_m)` with `x_α ∈ V_α`.
pub type ProductPoint = Vec<Tuple>;

/// A subset of a finite universe `0..universe`, as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    universe: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in ids {
            s.insert(i);
        }
        s
    }

    /// The subset whose members are the set bits of `mask` (`universe ≤ 64`).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64, "mask sets are limited to 64 points");
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.words[0] = if universe == 64 { mask } else { mask & ((1 << universe) - 1) };
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns whether `i` was newly inserted.
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "point {i} outside a universe of {}", self.universe);
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn remove(&mut self, i: usize) -> bool {
        if i >= self.universe {
            return false;
        }
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let present = self.words[w] & b != 0;
        self.words[w] &= !b;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The members as a bitmask, when `universe ≤ 64`.
    pub fn to_mask(&self) -> Option<u64> {
        (self.universe <= 64).then(|| self.words.first().copied().unwrap_or(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    wi * 64 + b
                })
            })
        })
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn union_with(&mut self, other: &PointSet) {
        assert_eq!(self.universe, other.universe, "sets over different universes");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The closure rules of a complete representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `k_α(x) ∈ X` implies `k_β(x) ∈ X` for every slot β.
    ScalarTransfer,
    /// The sup of a nonempty fiber intersection is in `X`.
    FiberSup,
    /// Fiber intersections are downward closed.
    Downward,
}

impl Rule {
    /// The iteration order used by [`TensorSpace::hull`].
    pub const DEFAULT_ORDER: [Rule; 3] = [Rule::Downward, Rule::FiberSup, Rule::ScalarTransfer];
}

#[derive(Debug)]
struct SpaceInner {
    semiring: Semiring,
    carrier: Vec<Elem>,
    factors: Vec<FinSemimodule>,
    ops: Vec<OpTables>,
    /// `strides[α]` is the id step of slot α.
    strides: Vec<usize>,
    total: usize,
    zero: usize,
}

/// `V = V_1 × … × V_m` over a finite commutative semiring.
#[derive(Debug, Clone)]
pub struct TensorSpace(Arc<SpaceInner>);

impl PartialEq for TensorSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.factors == other.0.factors
    }
}

impl Eq for TensorSpace {}

impl TensorSpace {
    pub fn new(factors: Vec<FinSemimodule>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::Shape("a product needs at least one factor".into()))?;
        let semiring = first.semiring().clone();
        let carrier = require_finite(&semiring)?;
        if !semiring.is_commutative() {
            return Err(Error::Unsupported(
                "extensional engine requires commutative multiplication".into(),
            ));
        }
        for f in &factors {
            crate::freemod::same_semiring(&semiring, f.semiring())?;
        }
        let ops = factors
            .iter()
            .enumerate()
            .map(|(a, f)| {
                f.op_tables().map_err(|e| match e {
                    Error::InvalidModule(m) => Error::InvalidModule(format!("factor {}: {m}", a + 1)),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut strides = vec![0; factors.len()];
        let mut total = 1usize;
        for a in (0..factors.len()).rev() {
            strides[a] = total;
            total = total
                .checked_mul(ops[a].len)
                .filter(|&t| t <= MAX_POINTS)
                .ok_or_else(|| Error::Overflow(format!("product over {MAX_POINTS} points")))?;
        }
        let zero = ops
            .iter()
            .zip(&strides)
            .map(|(o, s)| o.zero as usize * s)
            .sum();
        Ok(Self(Arc::new(SpaceInner {
            semiring,
            carrier,
            factors,
            ops,
            strides,
            total,
            zero,
        })))
    }

    pub fn semiring(&self) -> &Semiring {
        &self.0.semiring
    }

    pub fn factors(&self) -> &[FinSemimodule] {
        &self.0.factors
    }

    pub fn arity(&self) -> usize {
        self.0.factors.len()
    }

    /// `|V|`.
    pub fn size(&self) -> usize {
        self.0.total
    }

    pub fn zero_id(&self) -> usize {
        self.0.zero
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.0.total)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::from_ids(self.0.total, 0..self.0.total)
    }

    /// Position of the component in slot `a`.
    pub fn component(&self, id: usize, a: usize) -> usize {
        id / self.0.strides[a] % self.0.ops[a].len
    }

    pub fn with_component(&self, id: usize, a: usize, v: usize) -> usize {
        let s = self.0.strides[a];
        id - self.component(id, a) * s + v * s
    }

    /// `k_α(x)`: the point with slot `a` scaled by the carrier element at
    /// index `k`.
    pub fn scale_at(&self, id: usize, k: usize, a: usize) -> usize {
        let v = self.0.ops[a].scale(k, self.component(id, a) as u32) as usize;
        self.with_component(id, a, v)
    }

    pub fn point_id(&self, p: &[Tuple]) -> Result<usize> {
        if p.len() != self.arity() {
            return Err(Error::Shape(format!(
                "point with {} components in a product of {} factors",
                p.len(),
                self.arity()
            )));
        }
        let mut id = 0;
        for (a, (t, f)) in p.iter().zip(&self.0.factors).enumerate() {
            let pos = f.position(t).ok_or_else(|| Error::Domain {
                elem: f.format_tuple(t),
                semiring: format!("factor {}", a + 1),
            })?;
            id += pos * self.0.strides[a];
        }
        Ok(id)
    }

    pub fn point(&self, id: usize) -> ProductPoint {
        self.0
            .factors
            .iter()
            .enumerate()
            .map(|(a, f)| f.elements()[self.component(id, a)].clone())
            .collect()
    }

    pub fn format_point(&self, id: usize) -> String {
        let parts: Vec<String> = self
            .point(id)
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&e| self.0.semiring.format_elem(e))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        parts.join(" ; ")
    }

    pub fn set_of(&self, points: &[ProductPoint]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for p in points {
            s.insert(self.point_id(p)?);
        }
        Ok(s)
    }

    /// Points through `id` that are free in slot `a`, in slot order.
    pub fn fiber(&self, a: usize, id: usize) -> Result<Vec<usize>> {
        if a >= self.arity() {
            return Err(Error::Shape(format!(
                "slot {a} out of range for {} factors",
                self.arity()
            )));
        }
        let base = self.with_component(id, a, 0);
        Ok((0..self.0.ops[a].len)
            .map(|v| base + v * self.0.strides[a])
            .collect())
    }

    /// Applies one rule to every point of `set` once; returns whether the
    /// set grew.
    pub fn apply_rule(&self, rule: Rule, set: &mut PointSet) -> bool {
        let before = set.len();
        match rule {
            Rule::Downward => {
                let members: Vec<usize> = set.iter().collect();
                for p in members {
                    for (a, ops) in self.0.ops.iter().enumerate() {
                        for &u in &ops.below[self.component(p, a)] {
                            set.insert(self.with_component(p, a, u as usize));
                        }
                    }
                }
            }
            Rule::FiberSup => {
                for (a, ops) in self.0.ops.iter().enumerate() {
                    let s = self.0.strides[a];
                    for base in (0..self.0.total).filter(|&id| self.component(id, a) == 0) {
                        let mut sup = None;
                        for v in 0..ops.len {
                            if set.contains(base + v * s) {
                                let v = v as u32;
                                sup = Some(sup.map_or(v, |acc| ops.join(acc, v)));
                            }
                        }
                        if let Some(v) = sup {
                            set.insert(base + v as usize * s);
                        }
                    }
                }
            }
            Rule::ScalarTransfer => {
                let slots = self.arity();
                let mut images = Vec::with_capacity(slots);
                for k in 0..self.0.carrier.len() {
                    for x in 0..self.0.total {
                        images.clear();
                        images.extend((0..slots).map(|a| self.scale_at(x, k, a)));
                        if images.iter().any(|&i| set.contains(i)) {
                            for &i in &images {
                                set.insert(i);
                            }
                        }
                    }
                }
            }
        }
        set.len() != before
    }

    /// The τ-hull of `seed`: the least complete representation containing
    /// `seed` and `0_V`.
    pub fn hull(&self, seed: &PointSet) -> PointSet {
        self.hull_with_order(seed, &Rule::DEFAULT_ORDER)
    }

    /// The τ-hull computed by applying `order` round-robin until stable.
    pub fn hull_with_order(&self, seed: &PointSet, order: &[Rule]) -> PointSet {
        let mut set = seed.clone();
        set.insert(self.0.zero);
        loop {
            let mut grew = false;
            for &rule in order {
                grew |= self.apply_rule(rule, &mut set);
            }
            if !grew {
                return set;
            }
        }
    }

    /// The first closure property `set` violates, with a point it is
    /// missing. `None` means `set` is a complete representation.
    pub fn tensor_violation(&self, set: &PointSet) -> Option<(&'static str, usize)> {
        if !set.contains(self.0.zero) {
            return Some(("contains_zero", self.0.zero));
        }
        for (rule, name) in [
            (Rule::ScalarTransfer, "scalar_transfer"),
            (Rule::FiberSup, "fiber_sup"),
            (Rule::Downward, "fiber_downward"),
        ] {
            let mut grown = set.clone();
            if self.apply_rule(rule, &mut grown) {
                let missing = grown.iter().find(|&i| !set.contains(i)).expect("grew");
                return Some((name, missing));
            }
        }
        None
    }

    pub fn is_tensor(&self, set: &PointSet) -> bool {
        self.tensor_violation(set).is_none()
    }

    /// `π(x) = {x}^τ`.
    pub fn pi(&self, id: usize) -> PointSet {
        self.hull(&PointSet::from_ids(self.0.total, [id]))
    }

    /// `k ⊙ X = (k_α(X))^τ`; `k` is a carrier index.
    pub fn scalar_set(&self, k: usize, set: &PointSet, a: usize) -> PointSet {
        let image = PointSet::from_ids(self.0.total, set.iter().map(|p| self.scale_at(p, k, a)));
        self.hull(&image)
    }

    /// Every tensor of the space, each as a canonical point set, starting
    /// from `{0_V}^τ` and closing under `T ↦ (T ∪ {x})^τ`. Every tensor is
    /// reached because `T = ⊕_{x ∈ T} π(x)`.
    pub fn enumerate_tensors(&self) -> Result<Vec<PointSet>> {
        let start = self.hull(&self.empty_set());
        let mut seen: HashSet<PointSet> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(t) = queue.pop_front() {
            for x in 0..self.0.total {
                if t.contains(x) {
                    continue;
                }
                let mut seed = t.clone();
                seed.insert(x);
                let next = self.hull(&seed);
                if !seen.contains(&next) {
                    if seen.len() >= MAX_TENSORS {
                        return Err(Error::Overflow(format!("over {MAX_TENSORS} tensors")));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
            out.push(t);
        }
        out.sort();
        Ok(out)
    }

    pub fn carrier_index(&self, k: Elem) -> Result<usize> {
        self.0.semiring.check(k)?;
        Ok(self
            .0
            .carrier
            .iter()
            .position(|&c| c == k)
            .expect("checked"))
    }

    pub fn carrier(&self) -> &[Elem] {
        &self.0.carrier
    }

    pub(crate) fn ops(&self, a: usize) -> &OpTables {
        &self.0.ops[a]
    }

    pub(crate) fn same_space(&self, other: &TensorSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Shape("tensors over different factor lists".into()))
        }
    }
}

/// A subset of a product, with a flag recording whether it equals its own
/// τ-hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtTensor {
    space: TensorSpace,
    points: PointSet,
    canonical: bool,
}

impl ExtTensor {
    /// A possibly non-canonical representation.
    pub fn representation(space: &TensorSpace, points: PointSet) -> Result<Self> {
        if points.universe() != space.size() {
            return Err(Error::Shape("point set over a different product".into()));
        }
        let canonical = space.hull(&points) == points;
        Ok(Self {
            space: space.clone(),
            points,
            canonical,
        })
    }

    pub(crate) fn canonical_unchecked(space: &TensorSpace, points: PointSet) -> Self {
        Self {
            space: space.clone(),
            points,
            canonical: true,
        }
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[Tuple]) -> Result<bool> {
        Ok(self.points.contains(self.space.point_id(p)?))
    }

    /// Points in lexicographic order of carrier indices.
    pub fn point_list(&self) -> Vec<ProductPoint> {
        self.points.iter().map(|i| self.space.point(i)).collect()
    }

    /// The canonical form.
    pub fn canonical(&self) -> ExtTensor {
        if self.canonical {
            self.clone()
        } else {
            Self::canonical_unchecked(&self.space, self.space.hull(&self.points))
        }
    }

    /// Checks `0_V` membership and the three closure properties directly.
    pub fn is_tensor(&self) -> bool {
        self.space.is_tensor(&self.points)
    }

    pub fn tensor_add(&self, other: &ExtTensor) -> Result<ExtTensor> {
        self.space.same_space(&other.space)?;
        Ok(Self::canonical_unchecked(
            &self.space,
            self.space.hull(&self.points.union(&other.points)),
        ))
    }

    /// `k ⊙ X` computed through slot `a`.
    pub fn tensor_scalar(&self, k: Elem, a: usize) -> Result<ExtTensor> {
        if a >= self.space.arity() {
            return Err(Error::Shape(format!(
                "slot {a} out of range for {} factors",
                self.space.arity()
            )));
        }
        let k = self.space.carrier_index(k)?;
        Ok(Self::canonical_unchecked(
            &self.space,
            self.space.scalar_set(k, &self.points, a),
        ))
    }

    /// Equality of τ-hulls.
    pub fn tensors_equal(&self, other: &ExtTensor) -> Result<bool> {
        self.space.same_space(&other.space)?;
        Ok(self.canonical().points == other.canonical().points)
    }

    /// Whether every point lies in `π(x)`.
    pub fn bounded_by(&self, x: &[Tuple]) -> Result<bool> {
        let id = self.space.point_id(x)?;
        Ok(self.points.is_subset(&self.space.pi(id)))
    }
}

impl TensorSpace {
    /// `tau_hull(X)`.
    pub fn tau_hull(&self, points: &[ProductPoint]) -> Result<ExtTensor> {
        let seed = self.set_of(points)?;
        Ok(ExtTensor::canonical_unchecked(self, self.hull(&seed)))
    }

    /// `π(x)` as a tensor.
    pub fn canonical_pi(&self, x: &[Tuple]) -> Result<ExtTensor> {
        let id = self.point_id(x)?;
        Ok(ExtTensor::canonical_unchecked(self, self.pi(id)))
    }

    pub fn zero_tensor(&self) -> ExtTensor {
        ExtTensor::canonical_unchecked(self, self.hull(&self.empty_set()))
    }
}
