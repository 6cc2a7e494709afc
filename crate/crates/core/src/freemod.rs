//! Free semimodules ℬ(X, K) over a finite index set X.
//!
//! With X finite every map X → K is bounded, so ℬ(X, K) is simply K^X with
//! pointwise operations. Linear functionals on ℬ(X, K) are stored by their
//! coefficient tables: the functional with table `a` sends `φ` to
//! `sup_x a(x) ⊙ φ(x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semiring::{Elem, Semiring};

/// An index label. Products and direct sums build structured labels so that
/// the structural isomorphisms are plain relabelings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Name(String),
    Pair(Box<Label>, Box<Label>),
    /// Block `tag` of a direct sum.
    Tag(usize, Box<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Self {
        Label::Name(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn tag(t: usize, l: Label) -> Self {
        Label::Tag(t, Box::new(l))
    }

    /// Right-nested tuple `(l1, (l2, (…, ln)))`; a single label is returned as is.
    pub fn tuple(labels: &[Label]) -> Self {
        match labels {
            [] => panic!("empty label tuple"),
            [one] => one.clone(),
            [first, rest @ ..] => Label::pair(first.clone(), Label::tuple(rest)),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Name(s) => f.write_str(s),
            Label::Pair(a, b) => write!(f, "{a}|{b}"),
            Label::Tag(t, l) => write!(f, "{t}:{l}"),
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::name(s)
    }
}

#[derive(Debug)]
struct IndexInner {
    labels: Vec<Label>,
    position: HashMap<Label, usize>,
}

/// A finite, ordered set of distinct labels. Cheap to clone.
#[derive(Debug, Clone)]
pub struct IndexSet(Arc<IndexInner>);

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for IndexSet {}

impl IndexSet {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut position = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if position.insert(l.clone(), i).is_some() {
                return Err(Error::IndexMismatch(format!("duplicate label `{l}`")));
            }
        }
        Ok(IndexSet(Arc::new(IndexInner { labels, position })))
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names.iter().map(|s| Label::name(s.as_ref())).collect())
    }

    /// Labels `0, 1, …, n-1`.
    pub fn range(n: usize) -> Self {
        Self::new((0..n).map(|i| Label::name(i.to_string())).collect()).unwrap()
    }

    /// The empty index set; ℬ(∅, K) is the zero module.
    pub fn empty() -> Self {
        Self::new(Vec::new()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.0.labels[i]
    }

    pub fn position(&self, l: &Label) -> Option<usize> {
        self.0.position.get(l).copied()
    }

    pub fn require(&self, l: &Label) -> Result<usize> {
        self.position(l)
            .ok_or_else(|| Error::UnknownLabel(l.to_string()))
    }

    /// `X × Y` with labels `(x, y)` in row-major order (x outer).
    pub fn product(x: &IndexSet, y: &IndexSet) -> IndexSet {
        let mut labels = Vec::with_capacity(x.len() * y.len());
        for a in x.labels() {
            for b in y.labels() {
                labels.push(Label::pair(a.clone(), b.clone()));
            }
        }
        IndexSet::new(labels).unwrap()
    }

    /// Right-nested product `X1 × (X2 × (… × Xn))`; the order of positions is
    /// row-major in `(x1, …, xn)`.
    pub fn product_all(factors: &[IndexSet]) -> IndexSet {
        match factors {
            [] => panic!("product of no factors"),
            [one] => one.clone(),
            [first, rest @ ..] => IndexSet::product(first, &IndexSet::product_all(rest)),
        }
    }

    /// `X1 ⊔ … ⊔ Xn` with labels tagged by block number.
    pub fn disjoint_union(blocks: &[IndexSet]) -> IndexSet {
        let labels = blocks
            .iter()
            .enumerate()
            .flat_map(|(t, b)| b.labels().iter().map(move |l| Label::tag(t, l.clone())))
            .collect();
        IndexSet::new(labels).unwrap()
    }
}

/// An element of ℬ(X, K). Also the coefficient table of a functional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeVector {
    index: IndexSet,
    semiring: Semiring,
    coeffs: Vec<Elem>,
}

pub(crate) fn same_semiring(a: &Semiring, b: &Semiring) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SemiringMismatch {
            left: a.name(),
            right: b.name(),
        })
    }
}

impl FreeVector {
    pub fn new(index: IndexSet, semiring: Semiring, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != index.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for {} labels",
                coeffs.len(),
                index.len()
            )));
        }
        for &c in &coeffs {
            semiring.check(c)?;
        }
        Ok(Self {
            index,
            semiring,
            coeffs,
        })
    }

    pub(crate) fn from_parts_unchecked(index: IndexSet, semiring: Semiring, coeffs: Vec<Elem>) -> Self {
        debug_assert_eq!(index.len(), coeffs.len());
        Self {
            index,
            semiring,
            coeffs,
        }
    }

    pub fn zero(index: IndexSet, semiring: Semiring) -> Self {
        let coeffs = vec![semiring.zero(); index.len()];
        Self {
            index,
            semiring,
            coeffs,
        }
    }

    /// `δ_x`: 1 at `x`, 0 elsewhere.
    pub fn delta(index: IndexSet, x: &Label, semiring: Semiring) -> Result<Self> {
        let pos = index.require(x)?;
        Ok(Self::delta_at(index, pos, semiring))
    }

    pub fn delta_at(index: IndexSet, pos: usize, semiring: Semiring) -> Self {
        let mut v = Self::zero(index, semiring);
        v.coeffs[pos] = v.semiring.one();
        v
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, x: &Label) -> Result<Elem> {
        Ok(self.coeffs[self.index.require(x)?])
    }

    pub fn at(&self, pos: usize) -> Elem {
        self.coeffs[pos]
    }

    pub fn is_zero(&self) -> bool {
        let z = self.semiring.zero();
        self.coeffs.iter().all(|&c| c == z)
    }

    fn compatible(&self, other: &FreeVector) -> Result<()> {
        same_semiring(&self.semiring, &other.semiring)?;
        if self.index != other.index {
            return Err(Error::IndexMismatch(format!(
                "vectors over {} and {} labels with different index sets",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Pointwise `⊕`.
    pub fn add(&self, other: &FreeVector) -> Result<FreeVector> {
        self.compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.semiring.join(a, b))
            .collect();
        Ok(Self::from_parts_unchecked(self.index.clone(), self.semiring.clone(), coeffs))
    }

    /// Pointwise `c ⊙ v(x)`.
    pub fn scale(&self, c: Elem) -> Result<FreeVector> {
        let k = &self.semiring;
        k.check(c)?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&v| k.times(c, v))
            .collect::<Result<_>>()?;
        Ok(Self::from_parts_unchecked(self.index.clone(), k.clone(), coeffs))
    }

    /// Pointwise supremum of a finite family; `sup ∅` is the zero vector.
    pub fn sup<'a, I>(index: &IndexSet, semiring: &Semiring, family: I) -> Result<FreeVector>
    where
        I: IntoIterator<Item = &'a FreeVector>,
    {
        let mut acc = FreeVector::zero(index.clone(), semiring.clone());
        for v in family {
            acc = acc.add(v)?;
        }
        Ok(acc)
    }

    /// Evaluates the functional with coefficient table `self` at `phi`:
    /// `sup_x self(x) ⊙ phi(x)`.
    pub fn pair(&self, phi: &FreeVector) -> Result<Elem> {
        self.compatible(phi)?;
        let k = &self.semiring;
        self.coeffs
            .iter()
            .zip(&phi.coeffs)
            .try_fold(k.zero(), |acc, (&a, &p)| Ok(k.join(acc, k.times(a, p)?)))
    }

    /// The terms `v(x) ⊙ δ_x` whose supremum is `v`.
    pub fn generator_terms(&self) -> Vec<FreeVector> {
        (0..self.len())
            .map(|i| {
                let mut d = FreeVector::zero(self.index.clone(), self.semiring.clone());
                d.coeffs[i] = self.coeffs[i];
                d
            })
            .collect()
    }

    /// Every vector of ℬ(X, K) for a finite semiring, in lexicographic order
    /// of carrier indices.
    pub fn enumerate_all(index: &IndexSet, semiring: &Semiring) -> Result<Vec<FreeVector>> {
        let els = semiring
            .elements()
            .ok_or_else(|| Error::Unsupported(format!("{} is infinite", semiring.name())))?;
        let n = index.len();
        let total = els.len().checked_pow(n as u32).filter(|&t| t <= 1 << 24).ok_or_else(|| {
            Error::Unsupported(format!("|K|^{n} vectors is too many to enumerate"))
        })?;
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            let coeffs = digits.iter().map(|&d| els[d]).collect();
            out.push(Self::from_parts_unchecked(index.clone(), semiring.clone(), coeffs));
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < els.len() {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    pub fn format_values(&self) -> String {
        self.coeffs
            .iter()
            .map(|&c| self.semiring.format_elem(c))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Free-function form of [`FreeVector::pair`].
pub fn functional_apply(a: &FreeVector, phi: &FreeVector) -> Result<Elem> {
    a.pair(phi)
}
