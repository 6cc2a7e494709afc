//! Linear operators ℬ(X, K) → ℬ(Y, K) represented by kernels.
//!
//! Entry `(x, y)` of a [`Kernel`] is the weight of input coordinate `x` in
//! output coordinate `y`:
//!
//! ```text
//! (M φ)(y) = sup_x M(x, y) ⊙ φ(x)
//! ```
//!
//! so rows are inputs and columns are outputs, and composition reads left to
//! right: `M.then(N)` is "first M, then N".
//!
//! Every such operator is a finite sup of rank-one operators
//! `φ ↦ a(φ) ⊙ v`; [`Kernel::nuclear_decompose`] produces the row
//! decomposition `{(δ_x, row_x)}`. For finite X this covers all kernels, so
//! every operator here is nuclear and no predicate for it is exposed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::freemod::{same_semiring, FreeVector, IndexSet};
use crate::semiring::{Elem, Semiring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    rows: IndexSet,
    cols: IndexSet,
    semiring: Semiring,
    entries: Vec<Elem>,
}

/// A rank-one operator `φ ↦ functional(φ) ⊙ vector`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneTerm {
    pub functional: FreeVector,
    pub vector: FreeVector,
}

impl RankOneTerm {
    pub fn to_kernel(&self) -> Result<Kernel> {
        Kernel::rank_one(&self.functional, &self.vector)
    }
}

impl Kernel {
    /// Entries row-major: `entries[x * |Y| + y]`.
    pub fn new(rows: IndexSet, cols: IndexSet, semiring: Semiring, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != rows.len() * cols.len() {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} kernel",
                entries.len(),
                rows.len(),
                cols.len()
            )));
        }
        for &e in &entries {
            semiring.check(e)?;
        }
        Ok(Self {
            rows,
            cols,
            semiring,
            entries,
        })
    }

    pub fn from_rows(rows: IndexSet, cols: IndexSet, semiring: Semiring, data: Vec<Vec<Elem>>) -> Result<Self> {
        if data.len() != rows.len() || data.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Shape(format!(
                "row data does not match a {}x{} kernel",
                rows.len(),
                cols.len()
            )));
        }
        Self::new(rows, cols, semiring, data.into_iter().flatten().collect())
    }

    pub fn zero(rows: IndexSet, cols: IndexSet, semiring: Semiring) -> Self {
        let entries = vec![semiring.zero(); rows.len() * cols.len()];
        Self {
            rows,
            cols,
            semiring,
            entries,
        }
    }

    pub fn identity(index: IndexSet, semiring: Semiring) -> Self {
        let n = index.len();
        let mut k = Self::zero(index.clone(), index, semiring);
        for i in 0..n {
            k.entries[i * n + i] = k.semiring.one();
        }
        k
    }

    pub fn rows(&self) -> &IndexSet {
        &self.rows
    }

    pub fn cols(&self) -> &IndexSet {
        &self.cols
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, x: usize, y: usize) -> Elem {
        self.entries[x * self.cols.len() + y]
    }

    /// Row `x` as a vector on Y; equals `apply(δ_x)`.
    pub fn row(&self, x: usize) -> FreeVector {
        let n = self.cols.len();
        FreeVector::from_parts_unchecked(
            self.cols.clone(),
            self.semiring.clone(),
            self.entries[x * n..(x + 1) * n].to_vec(),
        )
    }

    /// Column `y` as a functional on X (the coefficient table of `φ ↦ (Mφ)(y)`).
    pub fn column(&self, y: usize) -> FreeVector {
        let coeffs = (0..self.rows.len()).map(|x| self.get(x, y)).collect();
        FreeVector::from_parts_unchecked(self.rows.clone(), self.semiring.clone(), coeffs)
    }

    fn same_shape(&self, other: &Kernel) -> Result<()> {
        same_semiring(&self.semiring, &other.semiring)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} kernel vs {}x{} kernel",
                self.rows.len(),
                self.cols.len(),
                other.rows.len(),
                other.cols.len()
            )));
        }
        Ok(())
    }

    /// `ψ(y) = sup_x M(x, y) ⊙ φ(x)`.
    pub fn apply(&self, phi: &FreeVector) -> Result<FreeVector> {
        same_semiring(&self.semiring, phi.semiring())?;
        if phi.index() != &self.rows {
            return Err(Error::IndexMismatch(
                "vector index differs from the kernel's row labels".into(),
            ));
        }
        let k = &self.semiring;
        let mut out = vec![k.zero(); self.cols.len()];
        for (x, &p) in phi.coeffs().iter().enumerate() {
            if p == k.zero() {
                continue;
            }
            for (y, slot) in out.iter_mut().enumerate() {
                *slot = k.join(*slot, k.times(self.get(x, y), p)?);
            }
        }
        Ok(FreeVector::from_parts_unchecked(self.cols.clone(), k.clone(), out))
    }

    /// `(M;N)(x, z) = sup_y M(x, y) ⊙ N(y, z)`: apply `self`, then `next`.
    pub fn then(&self, next: &Kernel) -> Result<Kernel> {
        same_semiring(&self.semiring, &next.semiring)?;
        if self.cols != next.rows {
            return Err(Error::IndexMismatch(format!(
                "cannot compose: {} outputs into {} inputs",
                self.cols.len(),
                next.rows.len()
            )));
        }
        let k = &self.semiring;
        let (nx, ny, nz) = (self.rows.len(), self.cols.len(), next.cols.len());
        let mut entries = vec![k.zero(); nx * nz];
        for x in 0..nx {
            for y in 0..ny {
                let m = self.get(x, y);
                if m == k.zero() {
                    continue;
                }
                for z in 0..nz {
                    let e = &mut entries[x * nz + z];
                    *e = k.join(*e, k.times(m, next.get(y, z))?);
                }
            }
        }
        Ok(Kernel {
            rows: self.rows.clone(),
            cols: next.cols.clone(),
            semiring: k.clone(),
            entries,
        })
    }

    /// Kernel of `φ ↦ a(φ) ⊙ v`, with entries `a(x) ⊙ v(y)`.
    pub fn rank_one(a: &FreeVector, v: &FreeVector) -> Result<Kernel> {
        same_semiring(a.semiring(), v.semiring())?;
        let k = a.semiring();
        let mut entries = Vec::with_capacity(a.len() * v.len());
        for &ax in a.coeffs() {
            for &vy in v.coeffs() {
                entries.push(k.times(ax, vy)?);
            }
        }
        Ok(Kernel {
            rows: a.index().clone(),
            cols: v.index().clone(),
            semiring: k.clone(),
            entries,
        })
    }

    /// `{(δ_x, row_x)}`: the sup of the corresponding rank-one kernels is `self`.
    pub fn nuclear_decompose(&self) -> Vec<RankOneTerm> {
        (0..self.rows.len())
            .map(|x| RankOneTerm {
                functional: FreeVector::delta_at(self.rows.clone(), x, self.semiring.clone()),
                vector: self.row(x),
            })
            .collect()
    }

    /// Entrywise sup; the zero kernel for an empty family.
    pub fn sup<'a, I>(rows: &IndexSet, cols: &IndexSet, semiring: &Semiring, family: I) -> Result<Kernel>
    where
        I: IntoIterator<Item = &'a Kernel>,
    {
        let mut acc = Kernel::zero(rows.clone(), cols.clone(), semiring.clone());
        for m in family {
            acc = acc.add(m)?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Kernel) -> Result<Kernel> {
        self.same_shape(other)?;
        let k = &self.semiring;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| k.join(a, b))
            .collect();
        Ok(Kernel {
            entries,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: Elem) -> Result<Kernel> {
        let k = &self.semiring;
        k.check(c)?;
        let entries = self
            .entries
            .iter()
            .map(|&e| k.times(c, e))
            .collect::<Result<_>>()?;
        Ok(Kernel {
            entries,
            ..self.clone()
        })
    }

    /// Kronecker product: `((x1, x2), (y1, y2)) ↦ M(x1, y1) ⊙ N(x2, y2)`.
    pub fn kron(&self, other: &Kernel) -> Result<Kernel> {
        same_semiring(&self.semiring, &other.semiring)?;
        let k = &self.semiring;
        let rows = IndexSet::product(&self.rows, &other.rows);
        let cols = IndexSet::product(&self.cols, &other.cols);
        let (n1, n2) = (self.cols.len(), other.cols.len());
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for x1 in 0..self.rows.len() {
            for x2 in 0..other.rows.len() {
                for y1 in 0..n1 {
                    for y2 in 0..n2 {
                        entries.push(k.times(self.get(x1, y1), other.get(x2, y2))?);
                    }
                }
            }
        }
        Ok(Kernel {
            rows,
            cols,
            semiring: k.clone(),
            entries,
        })
    }

    /// Every kernel X → Y over a finite semiring.
    pub fn enumerate_all(rows: &IndexSet, cols: &IndexSet, semiring: &Semiring) -> Result<Vec<Kernel>> {
        let flat = IndexSet::range(rows.len() * cols.len());
        Ok(FreeVector::enumerate_all(&flat, semiring)?
            .into_iter()
            .map(|v| Kernel {
                rows: rows.clone(),
                cols: cols.clone(),
                semiring: semiring.clone(),
                entries: v.coeffs().to_vec(),
            })
            .collect())
    }
}

/// Free-function form of [`Kernel::then`].
pub fn compose(m: &Kernel, n: &Kernel) -> Result<Kernel> {
    m.then(n)
}

/// Samples `f` on the deltas of X: `M(x, y) = f(δ_x)(y)`. Never fails on
/// a nonlinear `f`; see [`certify`].
pub fn extract<F>(domain: &IndexSet, codomain: &IndexSet, semiring: &Semiring, mut f: F) -> Result<Kernel>
where
    F: FnMut(&FreeVector) -> Result<FreeVector>,
{
    let mut entries = Vec::with_capacity(domain.len() * codomain.len());
    for x in 0..domain.len() {
        let image = f(&FreeVector::delta_at(domain.clone(), x, semiring.clone()))?;
        same_semiring(semiring, image.semiring())?;
        if image.index() != codomain {
            return Err(Error::IndexMismatch(format!(
                "map returned a vector over {} labels, expected {}",
                image.len(),
                codomain.len()
            )));
        }
        entries.extend_from_slice(image.coeffs());
    }
    Kernel::new(domain.clone(), codomain.clone(), semiring.clone(), entries)
}

/// Re-applies `m` to every test input and returns the first one where it
/// disagrees with `f`. A witness means `f` is not linear.
pub fn certify<F>(m: &Kernel, mut f: F, tests: &[FreeVector]) -> Result<Option<FreeVector>>
where
    F: FnMut(&FreeVector) -> Result<FreeVector>,
{
    for phi in tests {
        if m.apply(phi)? != f(phi)? {
            return Ok(Some(phi.clone()));
        }
    }
    Ok(None)
}

/// A map on all of ℬ(X, K) (K finite) given extensionally.
#[derive(Debug, Clone)]
pub struct TableMap {
    domain: IndexSet,
    codomain: IndexSet,
    semiring: Semiring,
    images: HashMap<Vec<Elem>, FreeVector>,
}

impl TableMap {
    pub fn new(
        domain: IndexSet,
        codomain: IndexSet,
        semiring: Semiring,
        pairs: impl IntoIterator<Item = (FreeVector, FreeVector)>,
    ) -> Result<Self> {
        let mut images = HashMap::new();
        for (x, y) in pairs {
            if x.index() != &domain || y.index() != &codomain {
                return Err(Error::IndexMismatch("table entry over the wrong index set".into()));
            }
            images.insert(x.coeffs().to_vec(), y);
        }
        let expected = FreeVector::enumerate_all(&domain, &semiring)?.len();
        if images.len() != expected {
            return Err(Error::Shape(format!(
                "table has {} entries, ℬ(X, K) has {expected} vectors",
                images.len()
            )));
        }
        Ok(Self {
            domain,
            codomain,
            semiring,
            images,
        })
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn codomain(&self) -> &IndexSet {
        &self.codomain
    }

    pub fn eval(&self, phi: &FreeVector) -> Result<FreeVector> {
        self.images
            .get(phi.coeffs())
            .cloned()
            .ok_or_else(|| Error::IndexMismatch("input not in the table's domain".into()))
    }

    /// Exhaustive linearity check: `f(0) = 0`, `f(φ ⊕ ψ) = f(φ) ⊕ f(ψ)` and
    /// `f(c ⊙ φ) = c ⊙ f(φ)`. Returns a description of the first violation.
    pub fn linearity_violation(&self) -> Result<Option<String>> {
        let all = FreeVector::enumerate_all(&self.domain, &self.semiring)?;
        let zero = FreeVector::zero(self.domain.clone(), self.semiring.clone());
        if !self.eval(&zero)?.is_zero() {
            return Ok(Some("f(0) != 0".into()));
        }
        for phi in &all {
            let f_phi = self.eval(phi)?;
            for psi in &all {
                if self.eval(&phi.add(psi)?)? != f_phi.add(&self.eval(psi)?)? {
                    return Ok(Some(format!(
                        "f({} + {}) != f(..) + f(..)",
                        phi.format_values(),
                        psi.format_values()
                    )));
                }
            }
            for c in self.semiring.elements().unwrap() {
                if self.eval(&phi.scale(c)?)? != f_phi.scale(c)? {
                    return Ok(Some(format!(
                        "f({} * {}) != {} * f(..)",
                        self.semiring.format_elem(c),
                        phi.format_values(),
                        self.semiring.format_elem(c)
                    )));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::Label;

    const NEG: f64 = f64::NEG_INFINITY;

    fn ix(names: &[&str]) -> IndexSet {
        IndexSet::from_names(names).unwrap()
    }

    fn rmax_kernel(rows: &IndexSet, cols: &IndexSet, data: &[&[f64]]) -> Kernel {
        Kernel::from_rows(
            rows.clone(),
            cols.clone(),
            Semiring::Rmax,
            data.iter()
                .map(|r| r.iter().map(|&v| Elem::real(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn rmax_vec(index: &IndexSet, vals: &[f64]) -> FreeVector {
        FreeVector::new(
            index.clone(),
            Semiring::Rmax,
            vals.iter().map(|&v| Elem::real(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = ix(&["x1", "x2"]);
        let y = ix(&["y1", "y2"]);
        let m = rmax_kernel(&x, &y, &[&[1.0, 2.0], &[3.0, 4.0]]);
        // y1: max(1+0, 3+0) = 3; y2: max(2+0, 4+0) = 4
        assert_eq!(m.apply(&rmax_vec(&x, &[0.0, 0.0])).unwrap(), rmax_vec(&y, &[3.0, 4.0]));
        let phi = rmax_vec(&x, &[-2.0, 5.0]);
        assert_eq!(Kernel::identity(x.clone(), Semiring::Rmax).apply(&phi).unwrap(), phi);
        let d = FreeVector::delta(x.clone(), &Label::name("x2"), Semiring::Rmax).unwrap();
        assert_eq!(m.apply(&d).unwrap(), m.row(1));
        assert!(matches!(m.apply(&rmax_vec(&y, &[0.0, 0.0])), Err(Error::IndexMismatch(_))));
    }

    #[test]
    fn extract_recovers_kernel() {
        let x = ix(&["a", "b", "c"]);
        let y = ix(&["p", "q"]);
        let m = rmax_kernel(&x, &y, &[&[1.0, NEG], &[0.5, 2.0], &[NEG, NEG]]);
        let got = extract(&x, &y, &Semiring::Rmax, |phi| m.apply(phi)).unwrap();
        assert_eq!(got, m);
        let id = extract(&x, &x, &Semiring::Rmax, |phi| Ok(phi.clone())).unwrap();
        assert_eq!(id, Kernel::identity(x, Semiring::Rmax));
    }

    #[test]
    fn certify_flags_nonlinear_map() {
        // boolean, |X| = |Y| = 2: swap coordinates except on the top vector
        let k = Semiring::Boolean;
        let x = ix(&["a", "b"]);
        let all = FreeVector::enumerate_all(&x, &k).unwrap();
        let f = |phi: &FreeVector| -> Result<FreeVector> {
            let c = phi.coeffs();
            let out = if c == [Elem::Idx(1), Elem::Idx(1)] {
                vec![Elem::Idx(0), Elem::Idx(1)]
            } else {
                vec![c[1], c[0]]
            };
            FreeVector::new(phi.index().clone(), Semiring::Boolean, out)
        };
        let m = extract(&x, &x, &k, f).unwrap();
        let witness = certify(&m, f, &all).unwrap();
        assert_eq!(witness.unwrap().coeffs(), &[Elem::Idx(1), Elem::Idx(1)]);
    }

    #[test]
    fn compose_examples() {
        let x = ix(&["a", "b"]);
        let m = rmax_kernel(&x, &x, &[&[1.0, 2.0], &[NEG, 0.0]]);
        assert_eq!(compose(&m, &Kernel::identity(x.clone(), Semiring::Rmax)).unwrap(), m);
        assert_eq!(Kernel::identity(x.clone(), Semiring::Rmax).then(&m).unwrap(), m);
        let one = ix(&["o"]);
        let a = rmax_kernel(&one, &one, &[&[1.5]]);
        let b = rmax_kernel(&one, &one, &[&[-4.0]]);
        assert_eq!(a.then(&b).unwrap(), rmax_kernel(&one, &one, &[&[-2.5]]));
        assert!(matches!(m.then(&a), Err(Error::IndexMismatch(_))));
    }

    #[test]
    fn rank_one_examples() {
        let x = ix(&["a", "b"]);
        let y = ix(&["c", "d"]);
        let v = rmax_vec(&y, &[3.0, -1.0]);
        let d = FreeVector::delta(x.clone(), &Label::name("a"), Semiring::Rmax).unwrap();
        let k = Kernel::rank_one(&d, &v).unwrap();
        assert_eq!(k.row(0), v);
        assert!(k.row(1).is_zero());

        let b = Semiring::Boolean;
        let a = FreeVector::new(x.clone(), b.clone(), vec![Elem::Idx(1), Elem::Idx(0)]).unwrap();
        let w = FreeVector::new(y.clone(), b.clone(), vec![Elem::Idx(0), Elem::Idx(1)]).unwrap();
        let k = Kernel::rank_one(&a, &w).unwrap();
        assert_eq!(
            k.entries(),
            &[Elem::Idx(0), Elem::Idx(1), Elem::Idx(0), Elem::Idx(0)]
        );
    }

    #[test]
    fn nuclear_decomposition_examples() {
        let x = ix(&["a", "b"]);
        let id = Kernel::identity(x.clone(), Semiring::Rmax);
        let terms = id.nuclear_decompose();
        assert_eq!(terms.len(), 2);
        for (i, t) in terms.iter().enumerate() {
            let d = FreeVector::delta_at(x.clone(), i, Semiring::Rmax);
            assert_eq!(t.functional, d);
            assert_eq!(t.vector, d);
        }
        let single = rmax_kernel(&ix(&["o"]), &ix(&["p", "q", "r"]), &[&[1.0, 2.0, 3.0]]);
        assert_eq!(single.nuclear_decompose().len(), 1);
    }

    #[test]
    fn kron_examples() {
        let one = ix(&["o"]);
        let a = rmax_kernel(&one, &one, &[&[2.0]]);
        let b = rmax_kernel(&one, &one, &[&[5.0]]);
        assert_eq!(a.kron(&b).unwrap().entries(), &[Elem::real(7.0)]);
        let x = ix(&["a", "b"]);
        let y = ix(&["c", "d", "e"]);
        let k = Semiring::Rmax;
        assert_eq!(
            Kernel::identity(x.clone(), k.clone())
                .kron(&Kernel::identity(y.clone(), k.clone()))
                .unwrap(),
            Kernel::identity(IndexSet::product(&x, &y), k)
        );
    }

    #[test]
    fn kernel_sup_examples() {
        let x = ix(&["a", "b"]);
        let k = Semiring::Boolean;
        let z = Kernel::sup(&x, &x, &k, []).unwrap();
        assert_eq!(z, Kernel::zero(x.clone(), x.clone(), k.clone()));
        let i = Kernel::identity(x.clone(), k.clone());
        assert_eq!(Kernel::sup(&x, &x, &k, [&i]).unwrap(), i);
        let e = |v: [u32; 4]| {
            Kernel::new(x.clone(), x.clone(), k.clone(), v.iter().map(|&i| Elem::Idx(i)).collect())
                .unwrap()
        };
        assert_eq!(
            Kernel::sup(&x, &x, &k, [&e([1, 0, 0, 0]), &e([0, 1, 0, 1])]).unwrap(),
            e([1, 1, 0, 1])
        );
    }

    #[test]
    fn table_map_linearity() {
        let k = Semiring::Boolean;
        let x = ix(&["a", "b"]);
        let all = FreeVector::enumerate_all(&x, &k).unwrap();
        let m = Kernel::new(
            x.clone(),
            x.clone(),
            k.clone(),
            [0, 1, 1, 1].iter().map(|&i| Elem::Idx(i)).collect(),
        )
        .unwrap();
        let linear = TableMap::new(
            x.clone(),
            x.clone(),
            k.clone(),
            all.iter().map(|p| (p.clone(), m.apply(p).unwrap())),
        )
        .unwrap();
        assert_eq!(linear.linearity_violation().unwrap(), None);
        let constant = TableMap::new(
            x.clone(),
            x.clone(),
            k.clone(),
            all.iter().map(|p| (p.clone(), all[3].clone())),
        )
        .unwrap();
        assert!(constant.linearity_violation().unwrap().is_some());
    }
}
