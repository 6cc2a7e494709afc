//! Finite semimodules given as explicit subsets of K^n.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::semiring::{Elem, Semiring};

pub type Tuple = Vec<Elem>;

/// Largest element count the explicit representation will build.
pub const MAX_ELEMENTS: usize = 1 << 16;

pub(crate) fn require_finite(k: &Semiring) -> Result<Vec<Elem>> {
    k.elements().ok_or_else(|| {
        Error::Unsupported("extensional engine requires finite semiring".into())
    })
}

/// A finite subset of K^n, intended to be a sub-semimodule. Construction
/// only checks carrier membership and arity; [`FinSemimodule::validate`]
/// checks the closure properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSemimodule {
    semiring: Semiring,
    dim: usize,
    /// Sorted by carrier-index sequence, no duplicates.
    elements: Vec<Tuple>,
}

impl FinSemimodule {
    pub fn new(semiring: Semiring, dim: usize, elements: Vec<Tuple>) -> Result<Self> {
        require_finite(&semiring)?;
        let mut set = BTreeSet::new();
        for t in elements {
            if t.len() != dim {
                return Err(Error::Shape(format!(
                    "tuple of length {} in a module of dimension {dim}",
                    t.len()
                )));
            }
            for &e in &t {
                semiring.check(e)?;
            }
            set.insert(t);
        }
        if set.len() > MAX_ELEMENTS {
            return Err(Error::Overflow(format!("module with {} elements", set.len())));
        }
        Ok(Self {
            semiring,
            dim,
            elements: set.into_iter().collect(),
        })
    }

    /// K^n.
    pub fn full_cube(semiring: Semiring, dim: usize) -> Result<Self> {
        let carrier = require_finite(&semiring)?;
        let count = carrier
            .len()
            .checked_pow(dim as u32)
            .filter(|&c| c <= MAX_ELEMENTS)
            .ok_or_else(|| Error::Overflow(format!("{}^{dim} tuples", carrier.len())))?;
        let mut elements = Vec::with_capacity(count);
        let mut digits = vec![0usize; dim];
        for _ in 0..count {
            elements.push(digits.iter().map(|&d| carrier[d]).collect());
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < carrier.len() {
                    break;
                }
                *d = 0;
            }
        }
        Ok(Self {
            semiring,
            dim,
            elements,
        })
    }

    /// The least sub-semimodule containing `generators`:
    /// all finite combinations `⊕ k_i ⊙ g_i`.
    pub fn span(semiring: Semiring, dim: usize, generators: &[Tuple]) -> Result<Self> {
        let carrier = require_finite(&semiring)?;
        let zero = vec![semiring.zero(); dim];
        let mut acc: BTreeSet<Tuple> = BTreeSet::from([zero]);
        for g in generators {
            if g.len() != dim {
                return Err(Error::Shape(format!(
                    "generator of length {} in dimension {dim}",
                    g.len()
                )));
            }
            for &e in g {
                semiring.check(e)?;
            }
            let multiples: Vec<Tuple> = carrier
                .iter()
                .map(|&k| scale_tuple(&semiring, k, g))
                .collect();
            let mut next = BTreeSet::new();
            for s in &acc {
                for m in &multiples {
                    next.insert(join_tuple(&semiring, s, m));
                }
            }
            if next.len() > MAX_ELEMENTS {
                return Err(Error::Overflow(format!("span with over {MAX_ELEMENTS} elements")));
            }
            acc = next;
        }
        Ok(Self {
            semiring,
            dim,
            elements: acc.into_iter().collect(),
        })
    }

    /// `{(c, …, c) : c ∈ K}` in K^n.
    pub fn diagonal(semiring: Semiring, dim: usize) -> Result<Self> {
        let carrier = require_finite(&semiring)?;
        let elements = carrier.iter().map(|&c| vec![c; dim]).collect();
        Self::new(semiring, dim, elements)
    }

    /// The product `A × B` embedded in K^(m+n) by concatenation.
    pub fn product(a: &FinSemimodule, b: &FinSemimodule) -> Result<Self> {
        crate::freemod::same_semiring(&a.semiring, &b.semiring)?;
        let count = a.len() * b.len();
        if count > MAX_ELEMENTS {
            return Err(Error::Overflow(format!("product with {count} elements")));
        }
        let mut elements = Vec::with_capacity(count);
        for x in &a.elements {
            for y in &b.elements {
                elements.push(x.iter().chain(y).copied().collect());
            }
        }
        Self::new(a.semiring.clone(), a.dim + b.dim, elements)
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Tuple] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, t: &[Elem]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.as_slice().cmp(t)).ok()
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.position(t).is_some()
    }

    pub fn zero(&self) -> Tuple {
        vec![self.semiring.zero(); self.dim]
    }

    pub fn join(&self, a: &[Elem], b: &[Elem]) -> Tuple {
        join_tuple(&self.semiring, a, b)
    }

    pub fn scale(&self, k: Elem, a: &[Elem]) -> Tuple {
        scale_tuple(&self.semiring, k, a)
    }

    /// `a ≼ b` componentwise.
    pub fn leq(&self, a: &[Elem], b: &[Elem]) -> bool {
        self.join(a, b) == b
    }

    /// `{u ∈ M : u ≼ w}`.
    pub fn lower_set(&self, w: &[Elem]) -> Result<Vec<Tuple>> {
        if !self.contains(w) {
            return Err(Error::Domain {
                elem: self.format_tuple(w),
                semiring: format!("module over {}", self.semiring.name()),
            });
        }
        Ok(self
            .elements
            .iter()
            .filter(|u| self.leq(u, w))
            .cloned()
            .collect())
    }

    /// The sup of all elements. It is the top when the module is ⊕-closed.
    pub fn top(&self) -> Tuple {
        self.elements
            .iter()
            .fold(self.zero(), |acc, e| self.join(&acc, e))
    }

    pub fn format_tuple(&self, t: &[Elem]) -> String {
        format_tuple(&self.semiring, t)
    }

    /// Checks membership of 0, ⊕-closure, scalar closure and the semimodule
    /// axioms on the given elements.
    pub fn validate(&self) -> ValidationReport {
        let k = &self.semiring;
        let carrier = k.elements().expect("finite by construction");
        let els = &self.elements;
        let fmt = |t: &[Elem]| self.format_tuple(t);
        let fk = |e: Elem| k.format_elem(e);
        let mut report = ValidationReport::new(format!(
            "module over {} dim {} ({} elements)",
            k.name(),
            self.dim,
            els.len()
        ));

        let zero = self.zero();
        report.record(
            "contains_zero",
            (!self.contains(&zero)).then(|| format!("missing {}", fmt(&zero))),
        );

        let mut add_closed = None;
        'add: for a in els {
            for b in els {
                let s = self.join(a, b);
                if !self.contains(&s) {
                    add_closed = Some(format!("a={} b={} a+b={}", fmt(a), fmt(b), fmt(&s)));
                    break 'add;
                }
            }
        }
        report.record("add_closed", add_closed);

        let mut scalar_closed = None;
        'scalar: for &c in &carrier {
            for a in els {
                let s = self.scale(c, a);
                if !self.contains(&s) {
                    scalar_closed = Some(format!("k={} x={} kx={}", fk(c), fmt(a), fmt(&s)));
                    break 'scalar;
                }
            }
        }
        report.record("scalar_closed", scalar_closed);

        let unit = els
            .iter()
            .find(|a| self.scale(k.one(), a) != **a)
            .map(|a| format!("x={}", fmt(a)));
        report.record("scalar_unit", unit);

        let annihilate = els
            .iter()
            .find(|a| self.scale(k.zero(), a) != zero)
            .map(|a| format!("x={}", fmt(a)));
        report.record("scalar_zero", annihilate);

        let mut assoc = None;
        let mut distr_scalars = None;
        'pairs: for &c in &carrier {
            for &d in &carrier {
                for a in els {
                    let cd = k.times(c, d).expect("finite");
                    if assoc.is_none() && self.scale(c, &self.scale(d, a)) != self.scale(cd, a) {
                        assoc = Some(format!("k={} l={} x={}", fk(c), fk(d), fmt(a)));
                    }
                    let lhs = self.scale(k.join(c, d), a);
                    let rhs = self.join(&self.scale(c, a), &self.scale(d, a));
                    if distr_scalars.is_none() && lhs != rhs {
                        distr_scalars = Some(format!("k={} l={} x={}", fk(c), fk(d), fmt(a)));
                    }
                    if assoc.is_some() && distr_scalars.is_some() {
                        break 'pairs;
                    }
                }
            }
        }
        report.record("scalar_associative", assoc);
        report.record("scalar_distributes_over_scalar_sum", distr_scalars);

        let mut distr_vectors = None;
        'vec: for &c in &carrier {
            for a in els {
                for b in els {
                    let lhs = self.scale(c, &self.join(a, b));
                    let rhs = self.join(&self.scale(c, a), &self.scale(c, b));
                    if lhs != rhs {
                        distr_vectors = Some(format!("k={} x={} y={}", fk(c), fmt(a), fmt(b)));
                        break 'vec;
                    }
                }
            }
        }
        report.record("scalar_distributes_over_vector_sum", distr_vectors);
        report
    }

    /// Index tables for the operations, used by the closure engine. Requires
    /// a module that passes validation.
    pub(crate) fn op_tables(&self) -> Result<OpTables> {
        let report = self.validate();
        if let Some(c) = report.failures().next() {
            let w = match &c.outcome {
                crate::report::Outcome::Fail(w) => w.as_str(),
                _ => "",
            };
            return Err(Error::InvalidModule(format!("{} fails: {w}", c.name)));
        }
        let carrier = self.semiring.elements().expect("finite");
        let index: HashMap<&Tuple, u32> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, t)| (t, i as u32))
            .collect();
        let m = self.len();
        let mut join = vec![0u32; m * m];
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate() {
                join[i * m + j] = index[&self.join(a, b)];
            }
        }
        let mut scale = vec![0u32; carrier.len() * m];
        for (c, &k) in carrier.iter().enumerate() {
            for (i, a) in self.elements.iter().enumerate() {
                scale[c * m + i] = index[&self.scale(k, a)];
            }
        }
        let zero = index[&self.zero()];
        let below = (0..m)
            .map(|w| {
                (0..m as u32)
                    .filter(|&u| join[u as usize * m + w] == w as u32)
                    .collect()
            })
            .collect();
        Ok(OpTables {
            len: m,
            join,
            scale,
            zero,
            below,
        })
    }
}

/// Element operations of a validated module, by element position.
#[derive(Debug, Clone)]
pub(crate) struct OpTables {
    pub len: usize,
    /// `join[a * len + b]`.
    pub join: Vec<u32>,
    /// `scale[k * len + a]`, `k` a carrier index.
    pub scale: Vec<u32>,
    pub zero: u32,
    /// `below[w]` lists every `u ≼ w`.
    pub below: Vec<Vec<u32>>,
}

impl OpTables {
    pub fn join(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize * self.len + b as usize]
    }

    pub fn scale(&self, k: usize, a: u32) -> u32 {
        self.scale[k * self.len + a as usize]
    }
}

pub fn join_tuple(k: &Semiring, a: &[Elem], b: &[Elem]) -> Tuple {
    a.iter().zip(b).map(|(&x, &y)| k.join(x, y)).collect()
}

pub fn scale_tuple(k: &Semiring, c: Elem, a: &[Elem]) -> Tuple {
    a.iter()
        .map(|&x| k.times(c, x).expect("finite carriers do not overflow"))
        .collect()
}

pub fn format_tuple(k: &Semiring, t: &[Elem]) -> String {
    let parts: Vec<String> = t.iter().map(|&e| k.format_elem(e)).collect();
    format!("({})", parts.join(","))
}
