//! Tensor products of free semimodules.
//!
//! ℬ(X1, K) ⊗ … ⊗ ℬ(Xn, K) is represented directly as ℬ(X1 × … × Xn, K):
//! the pure tensor `φ1 ⊗ … ⊗ φn` is the function
//! `(x1, …, xn) ↦ φ1(x1) ⊙ … ⊙ φn(xn)`. Formal sums of pure tensors
//! ([`PureSum`]) convert to and from this representation. The
//! extensional construction in [`crate::exttensor`] is tied to this one by a
//! cross-isomorphism.
//!
//! Direct sums of free modules are realized on the disjoint union of index
//! sets: ℬ(X ⊔ Y, K) = ℬ(X, K) × ℬ(Y, K).

use crate::error::{Error, Result};
use crate::freemod::{same_semiring, FreeVector, IndexSet, Label};
use crate::kernelop::Kernel;
use crate::semiring::{Elem, Semiring};

/// An element of the tensor product of free modules over `factors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorKernel {
    factors: Vec<IndexSet>,
    coeffs: FreeVector,
}

impl TensorKernel {
    pub fn new(factors: Vec<IndexSet>, coeffs: FreeVector) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Shape("a tensor needs at least one factor".into()));
        }
        if coeffs.index() != &IndexSet::product_all(&factors) {
            return Err(Error::IndexMismatch(
                "coefficients are not indexed by the product of the factors".into(),
            ));
        }
        Ok(Self { factors, coeffs })
    }

    pub fn zero(factors: Vec<IndexSet>, semiring: Semiring) -> Result<Self> {
        let index = IndexSet::product_all(&factors);
        Self::new(factors, FreeVector::zero(index, semiring))
    }

    pub fn factors(&self) -> &[IndexSet] {
        &self.factors
    }

    pub fn coeffs(&self) -> &FreeVector {
        &self.coeffs
    }

    pub fn semiring(&self) -> &Semiring {
        self.coeffs.semiring()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &TensorKernel) -> Result<TensorKernel> {
        Ok(Self {
            factors: self.factors.clone(),
            coeffs: self.coeffs.add(&other.coeffs)?,
        })
    }

    pub fn scale(&self, c: Elem) -> Result<TensorKernel> {
        Ok(Self {
            factors: self.factors.clone(),
            coeffs: self.coeffs.scale(c)?,
        })
    }

    /// One term per product label, in product order.
    pub fn to_pure_sum(&self) -> PureSum {
        let shape: Vec<usize> = self.factors.iter().map(IndexSet::len).collect();
        let terms = self
            .coeffs
            .coeffs()
            .iter()
            .enumerate()
            .map(|(pos, &c)| {
                let positions = unflatten(pos, &shape);
                let labels = positions
                    .iter()
                    .zip(&self.factors)
                    .map(|(&p, f)| f.label(p).clone())
                    .collect();
                (labels, c)
            })
            .collect();
        PureSum { terms }
    }

    /// ⊕-accumulates the terms; repeated labels add idempotently.
    pub fn from_pure_sum(sum: &PureSum, factors: Vec<IndexSet>, semiring: Semiring) -> Result<Self> {
        let mut t = Self::zero(factors, semiring)?;
        let k = t.semiring().clone();
        let shape: Vec<usize> = t.factors.iter().map(IndexSet::len).collect();
        let mut coeffs = t.coeffs.coeffs().to_vec();
        for (labels, c) in &sum.terms {
            k.check(*c)?;
            if labels.len() != t.factors.len() {
                return Err(Error::Shape(format!(
                    "term with {} labels for {} factors",
                    labels.len(),
                    t.factors.len()
                )));
            }
            let positions = labels
                .iter()
                .zip(&t.factors)
                .map(|(l, f)| f.require(l))
                .collect::<Result<Vec<_>>>()?;
            let pos = flatten(&positions, &shape);
            coeffs[pos] = k.join(coeffs[pos], *c);
        }
        t.coeffs = FreeVector::from_parts_unchecked(t.coeffs.index().clone(), k, coeffs);
        Ok(t)
    }

    /// Re-reads the coefficients as a vector on the last factor per row of
    /// the remaining factors (used for the kernel-file layout).
    pub fn as_kernel(&self) -> Kernel {
        let (init, last) = self.factors.split_at(self.factors.len() - 1);
        let rows = if init.is_empty() {
            IndexSet::from_names(&["*"]).unwrap()
        } else {
            IndexSet::product_all(init)
        };
        Kernel::new(
            rows,
            last[0].clone(),
            self.semiring().clone(),
            self.coeffs.coeffs().to_vec(),
        )
        .expect("row-major product order matches the kernel layout")
    }
}

fn unflatten(mut pos: usize, shape: &[usize]) -> Vec<usize> {
    let mut out = vec![0; shape.len()];
    for (o, &n) in out.iter_mut().zip(shape).rev() {
        *o = pos % n;
        pos /= n;
    }
    out
}

fn flatten(positions: &[usize], shape: &[usize]) -> usize {
    positions.iter().zip(shape).fold(0, |acc, (&p, &n)| acc * n + p)
}

/// Pure tensor `φ1 ⊗ … ⊗ φn`.
pub fn outer(vectors: &[&FreeVector]) -> Result<TensorKernel> {
    let (first, rest) = vectors
        .split_first()
        .ok_or_else(|| Error::Shape("outer product of no vectors".into()))?;
    let k = first.semiring().clone();
    for v in rest {
        same_semiring(&k, v.semiring())?;
    }
    let mut coeffs = first.coeffs().to_vec();
    for v in rest {
        let mut next = Vec::with_capacity(coeffs.len() * v.len());
        for &a in &coeffs {
            for &b in v.coeffs() {
                next.push(k.times(a, b)?);
            }
        }
        coeffs = next;
    }
    let factors: Vec<IndexSet> = vectors.iter().map(|v| v.index().clone()).collect();
    let index = IndexSet::product_all(&factors);
    Ok(TensorKernel {
        factors,
        coeffs: FreeVector::from_parts_unchecked(index, k, coeffs),
    })
}

/// A formal sum `⊕ c ⊙ δ_{x1} ⊗ … ⊗ δ_{xn}`. Duplicate label tuples are
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PureSum {
    pub terms: Vec<(Vec<Label>, Elem)>,
}

impl PureSum {
    /// Merges duplicates by `⊕`, drops zero terms, and sorts by label.
    pub fn normalized(&self, semiring: &Semiring) -> PureSum {
        let mut merged: std::collections::BTreeMap<Vec<Label>, Elem> = Default::default();
        for (labels, c) in &self.terms {
            let e = merged.entry(labels.clone()).or_insert(semiring.zero());
            *e = semiring.join(*e, *c);
        }
        PureSum {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != semiring.zero())
                .collect(),
        }
    }
}

/// A polylinear map on free modules, given by its values on delta tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorPolyMap {
    factors: Vec<IndexSet>,
    codomain: IndexSet,
    semiring: Semiring,
    table: Vec<FreeVector>,
}

impl GeneratorPolyMap {
    /// `table` lists the image of `δ_{x1} ⊗ … ⊗ δ_{xn}` for every tuple in
    /// row-major product order.
    pub fn new(factors: Vec<IndexSet>, codomain: IndexSet, semiring: Semiring, table: Vec<FreeVector>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Shape("a polylinear map needs at least one factor".into()));
        }
        let expected: usize = factors.iter().map(IndexSet::len).product();
        if table.len() != expected {
            return Err(Error::Shape(format!(
                "incomplete table: {} of {expected} generator tuples",
                table.len()
            )));
        }
        for w in &table {
            same_semiring(&semiring, w.semiring())?;
            if w.index() != &codomain {
                return Err(Error::IndexMismatch("table value outside the codomain".into()));
            }
        }
        Ok(Self {
            factors,
            codomain,
            semiring,
            table,
        })
    }

    pub fn factors(&self) -> &[IndexSet] {
        &self.factors
    }

    pub fn codomain(&self) -> &IndexSet {
        &self.codomain
    }

    /// The linear map on the tensor product through which this map factors:
    /// `M((x1, …, xn), w) = table(x1, …, xn)(w)`.
    pub fn factorize(&self) -> Kernel {
        let rows = IndexSet::product_all(&self.factors);
        let entries = self
            .table
            .iter()
            .flat_map(|w| w.coeffs().iter().copied())
            .collect();
        Kernel::new(rows, self.codomain.clone(), self.semiring.clone(), entries)
            .expect("table shape checked at construction")
    }

    /// Polylinear extension:
    /// `f(φ1, …, φn) = sup over tuples of φ1(x1) ⊙ … ⊙ φn(xn) ⊙ table(x1, …, xn)`.
    pub fn eval(&self, args: &[&FreeVector]) -> Result<FreeVector> {
        if args.len() != self.factors.len() {
            return Err(Error::Shape(format!(
                "{} arguments for {} factors",
                args.len(),
                self.factors.len()
            )));
        }
        for (a, f) in args.iter().zip(&self.factors) {
            same_semiring(&self.semiring, a.semiring())?;
            if a.index() != f {
                return Err(Error::IndexMismatch("argument over the wrong index set".into()));
            }
        }
        let k = &self.semiring;
        let shape: Vec<usize> = self.factors.iter().map(IndexSet::len).collect();
        let mut acc = FreeVector::zero(self.codomain.clone(), k.clone());
        for (pos, value) in self.table.iter().enumerate() {
            let tuple = unflatten(pos, &shape);
            let mut weight = k.one();
            for (a, &x) in args.iter().zip(&tuple) {
                weight = k.times(weight, a.at(x))?;
            }
            if weight != k.zero() {
                acc = acc.add(&value.scale(weight)?)?;
            }
        }
        Ok(acc)
    }
}

/// Which structural isomorphism of tensor products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoKind {
    /// `X × Y ≅ Y × X`.
    Comm,
    /// `(X × Y) × Z ≅ X × (Y × Z)`.
    Assoc,
    /// `(X ⊔ Y) × Z ≅ (X × Z) ⊔ (Y × Z)`.
    Distr,
}

/// A relabeling bijection between two index sets, acting on vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexIso {
    source: IndexSet,
    target: IndexSet,
    /// `forward[i]` is the target position of source position `i`.
    forward: Vec<usize>,
}

impl IndexIso {
    fn from_label_map(source: IndexSet, target: IndexSet, map: impl Fn(&Label) -> Label) -> Result<Self> {
        let forward = source
            .labels()
            .iter()
            .map(|l| target.require(&map(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            source,
            target,
            forward,
        })
    }

    pub fn source(&self) -> &IndexSet {
        &self.source
    }

    pub fn target(&self) -> &IndexSet {
        &self.target
    }

    pub fn inverse(&self) -> IndexIso {
        let mut back = vec![0; self.forward.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            back[j] = i;
        }
        IndexIso {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: back,
        }
    }

    pub fn forward(&self, v: &FreeVector) -> Result<FreeVector> {
        if v.index() != &self.source {
            return Err(Error::IndexMismatch("vector is not over the iso's source".into()));
        }
        let mut coeffs = vec![v.semiring().zero(); self.target.len()];
        for (i, &j) in self.forward.iter().enumerate() {
            coeffs[j] = v.at(i);
        }
        Ok(FreeVector::from_parts_unchecked(
            self.target.clone(),
            v.semiring().clone(),
            coeffs,
        ))
    }

    pub fn backward(&self, v: &FreeVector) -> Result<FreeVector> {
        self.inverse().forward(v)
    }
}

/// Builds the isomorphism of the given kind. `Comm` takes `[X, Y]`;
/// `Assoc` and `Distr` take `[X, Y, Z]`.
pub fn structural_iso(kind: IsoKind, shapes: &[IndexSet]) -> Result<IndexIso> {
    let arity = if kind == IsoKind::Comm { 2 } else { 3 };
    if shapes.len() != arity {
        return Err(Error::Shape(format!("{kind:?} takes {arity} index sets, got {}", shapes.len())));
    }
    let unpair = |l: &Label| match l {
        Label::Pair(a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!("product labels are pairs"),
    };
    match kind {
        IsoKind::Comm => {
            let (x, y) = (&shapes[0], &shapes[1]);
            IndexIso::from_label_map(IndexSet::product(x, y), IndexSet::product(y, x), |l| {
                let (a, b) = unpair(l);
                Label::pair(b, a)
            })
        }
        IsoKind::Assoc => {
            let (x, y, z) = (&shapes[0], &shapes[1], &shapes[2]);
            let left = IndexSet::product(&IndexSet::product(x, y), z);
            let right = IndexSet::product(x, &IndexSet::product(y, z));
            IndexIso::from_label_map(left, right, |l| {
                let (xy, c) = unpair(l);
                let (a, b) = unpair(&xy);
                Label::pair(a, Label::pair(b, c))
            })
        }
        IsoKind::Distr => {
            let (x, y, z) = (&shapes[0], &shapes[1], &shapes[2]);
            let left = IndexSet::product(&IndexSet::disjoint_union(&[x.clone(), y.clone()]), z);
            let right = IndexSet::disjoint_union(&[IndexSet::product(x, z), IndexSet::product(y, z)]);
            IndexIso::from_label_map(left, right, |l| {
                let (tagged, c) = unpair(l);
                match tagged {
                    Label::Tag(t, a) => Label::tag(t, Label::pair(*a, c)),
                    _ => unreachable!("disjoint-union labels are tagged"),
                }
            })
        }
    }
}

/// Embeds `v ∈ ℬ(X_α)` into ℬ(X_1 ⊔ … ⊔ X_n): `v` on block α, 0 elsewhere.
pub fn dsum_inject(blocks: &[IndexSet], alpha: usize, v: &FreeVector) -> Result<FreeVector> {
    let offset = block_offset(blocks, alpha)?;
    if v.index() != &blocks[alpha] {
        return Err(Error::IndexMismatch(format!("vector is not over block {alpha}")));
    }
    let mut out = FreeVector::zero(IndexSet::disjoint_union(blocks), v.semiring().clone());
    let mut coeffs = out.coeffs().to_vec();
    coeffs[offset..offset + v.len()].copy_from_slice(v.coeffs());
    out = FreeVector::from_parts_unchecked(out.index().clone(), v.semiring().clone(), coeffs);
    Ok(out)
}

/// Restricts `u ∈ ℬ(X_1 ⊔ … ⊔ X_n)` to block α.
pub fn dsum_project(blocks: &[IndexSet], alpha: usize, u: &FreeVector) -> Result<FreeVector> {
    let offset = block_offset(blocks, alpha)?;
    if u.index() != &IndexSet::disjoint_union(blocks) {
        return Err(Error::IndexMismatch("vector is not over the direct sum".into()));
    }
    let n = blocks[alpha].len();
    Ok(FreeVector::from_parts_unchecked(
        blocks[alpha].clone(),
        u.semiring().clone(),
        u.coeffs()[offset..offset + n].to_vec(),
    ))
}

fn block_offset(blocks: &[IndexSet], alpha: usize) -> Result<usize> {
    if alpha >= blocks.len() {
        return Err(Error::Shape(format!(
            "block {alpha} out of range for {} blocks",
            blocks.len()
        )));
    }
    Ok(blocks[..alpha].iter().map(IndexSet::len).sum())
}

/// Kernel of the injection `i_α`.
pub fn injection_kernel(blocks: &[IndexSet], alpha: usize, semiring: &Semiring) -> Result<Kernel> {
    let offset = block_offset(blocks, alpha)?;
    let target = IndexSet::disjoint_union(blocks);
    let mut m = Kernel::zero(blocks[alpha].clone(), target.clone(), semiring.clone());
    let mut entries = m.entries().to_vec();
    for i in 0..blocks[alpha].len() {
        entries[i * target.len() + offset + i] = semiring.one();
    }
    m = Kernel::new(blocks[alpha].clone(), target, semiring.clone(), entries)?;
    Ok(m)
}

/// Kernel of the projection `p_α`.
pub fn projection_kernel(blocks: &[IndexSet], alpha: usize, semiring: &Semiring) -> Result<Kernel> {
    let inj = injection_kernel(blocks, alpha, semiring)?;
    let (r, c) = (inj.rows().len(), inj.cols().len());
    let entries = (0..c)
        .flat_map(|y| (0..r).map(move |x| (x, y)))
        .map(|(x, y)| inj.get(x, y))
        .collect();
    Kernel::new(inj.cols().clone(), inj.rows().clone(), semiring.clone(), entries)
}

/// Direct product of maps `f_α: X → Y_α`: the map `X → ⊔ Y_α` with
/// `p_α ∘ f = f_α`.
pub fn map_direct_product(maps: &[Kernel]) -> Result<Kernel> {
    let first = maps
        .first()
        .ok_or_else(|| Error::Shape("direct product of no maps".into()))?;
    let k = first.semiring();
    let domain = first.rows();
    for m in maps {
        same_semiring(k, m.semiring())?;
        if m.rows() != domain {
            return Err(Error::IndexMismatch("direct product needs a common domain".into()));
        }
    }
    let blocks: Vec<IndexSet> = maps.iter().map(|m| m.cols().clone()).collect();
    let target = IndexSet::disjoint_union(&blocks);
    let mut entries = Vec::with_capacity(domain.len() * target.len());
    for x in 0..domain.len() {
        for m in maps {
            entries.extend_from_slice(m.row(x).coeffs());
        }
    }
    Kernel::new(domain.clone(), target, k.clone(), entries)
}

/// Direct sum of maps `f_α: X_α → Y`: the map `⊔ X_α → Y` sending
/// `{x_α}` to `⊕_α f_α(x_α)`, so that `f ∘ i_α = f_α`.
pub fn map_direct_sum(maps: &[Kernel]) -> Result<Kernel> {
    let first = maps
        .first()
        .ok_or_else(|| Error::Shape("direct sum of no maps".into()))?;
    let k = first.semiring();
    let codomain = first.cols();
    for m in maps {
        same_semiring(k, m.semiring())?;
        if m.cols() != codomain {
            return Err(Error::IndexMismatch("direct sum needs a common codomain".into()));
        }
    }
    let blocks: Vec<IndexSet> = maps.iter().map(|m| m.rows().clone()).collect();
    let source = IndexSet::disjoint_union(&blocks);
    let entries = maps
        .iter()
        .flat_map(|m| m.entries().iter().copied())
        .collect();
    Kernel::new(source, codomain.clone(), k.clone(), entries)
}
