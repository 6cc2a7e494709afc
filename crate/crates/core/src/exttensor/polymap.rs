//! Table-encoded polylinear maps `V_1 × … × V_m → W` and their
//! factorization through the tensor product.

use super::module::{FinSemimodule, OpTables, Tuple};
use super::space::{ExtTensor, PointSet, ProductPoint, TensorSpace};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// A total map on the points of a product, with values in a finite
/// semimodule.
#[derive(Debug, Clone)]
pub struct PolyMapTable {
    space: TensorSpace,
    codomain: FinSemimodule,
    cod: OpTables,
    /// Codomain position of `f(x)`, by point id.
    table: Vec<u32>,
}

impl PartialEq for PolyMapTable {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.codomain == other.codomain && self.table == other.table
    }
}

impl Eq for PolyMapTable {}

impl PolyMapTable {
    /// `values[i]` is the image of the point with id `i`.
    pub fn new(space: &TensorSpace, codomain: FinSemimodule, values: &[Tuple]) -> Result<Self> {
        crate::freemod::same_semiring(space.semiring(), codomain.semiring())?;
        if values.len() != space.size() {
            return Err(Error::Shape(format!(
                "table with {} values for {} points",
                values.len(),
                space.size()
            )));
        }
        let cod = codomain.op_tables()?;
        let table = values
            .iter()
            .map(|w| {
                codomain
                    .position(w)
                    .map(|p| p as u32)
                    .ok_or_else(|| Error::Domain {
                        elem: codomain.format_tuple(w),
                        semiring: "codomain".into(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space: space.clone(),
            codomain,
            cod,
            table,
        })
    }

    pub fn from_fn<F>(space: &TensorSpace, codomain: FinSemimodule, mut f: F) -> Result<Self>
    where
        F: FnMut(&ProductPoint) -> Tuple,
    {
        let values: Vec<Tuple> = (0..space.size()).map(|i| f(&space.point(i))).collect();
        Self::new(space, codomain, &values)
    }

    /// The polylinear extension of values on unit-vector tuples. Every
    /// factor must be a full cube `K^{n_α}`; `basis` lists the image of
    /// `(e_{i_1}, …, e_{i_m})` in row-major order of `(i_1, …, i_m)`, and
    /// `f(x) = ⊕_i x_{1,i_1} ⊙ … ⊙ x_{m,i_m} ⊙ basis_i`.
    pub fn from_basis_values(space: &TensorSpace, codomain: FinSemimodule, basis: &[Tuple]) -> Result<Self> {
        let dims = cube_dims(space)?;
        let expected: usize = dims.iter().product();
        if basis.len() != expected {
            return Err(Error::Shape(format!(
                "{} basis values for {expected} unit tuples",
                basis.len()
            )));
        }
        for w in basis {
            if !codomain.contains(w) {
                return Err(Error::Domain {
                    elem: codomain.format_tuple(w),
                    semiring: "codomain".into(),
                });
            }
        }
        let k = space.semiring().clone();
        let cod = codomain.clone();
        Self::from_fn(space, codomain, |x| {
            let mut acc = cod.zero();
            for (i, w) in basis.iter().enumerate() {
                let mut rest = i;
                let mut weight = k.one();
                for (a, &n) in dims.iter().enumerate().rev() {
                    let coord = x[a][rest % n];
                    rest /= n;
                    weight = k.times(weight, coord).expect("finite");
                }
                acc = cod.join(&acc, &cod.scale(weight, w));
            }
            acc
        })
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn codomain(&self) -> &FinSemimodule {
        &self.codomain
    }

    pub fn eval(&self, x: &[Tuple]) -> Result<Tuple> {
        Ok(self.value(self.eval_id(self.space.point_id(x)?)))
    }

    pub(crate) fn eval_id(&self, id: usize) -> u32 {
        self.table[id]
    }

    pub(crate) fn value(&self, w: u32) -> Tuple {
        self.codomain.elements()[w as usize].clone()
    }

    /// Codomain positions in point-id order.
    pub fn table_positions(&self) -> &[u32] {
        &self.table
    }

    /// Checks, slot by slot and for every fixing of the other slots, that
    /// the induced map preserves 0, pairwise ⊕, and scalars.
    pub fn validate(&self) -> ValidationReport {
        let s = &self.space;
        let mut report = ValidationReport::new(format!(
            "polymap {} factors into dim {}",
            s.arity(),
            self.codomain.dim()
        ));
        let witness = |a: usize, x: usize, what: String| {
            format!("slot={} x=[{}] {what}", a + 1, s.format_point(x))
        };
        let mut zero = None;
        let mut additive = None;
        let mut homogeneous = None;
        for a in 0..s.arity() {
            let ops = s.ops(a);
            let fmt_v = |v: usize| s.factors()[a].format_tuple(&s.factors()[a].elements()[v]);
            for x in 0..s.size() {
                let xa = s.component(x, a) as u32;
                if zero.is_none() && xa == ops.zero && self.table[x] != self.cod.zero {
                    zero = Some(witness(a, x, "f(x)≠0".into()));
                }
                if additive.is_none() {
                    for v in 0..ops.len {
                        let y = s.with_component(x, a, v);
                        let sum = s.with_component(x, a, ops.join(xa, v as u32) as usize);
                        if self.table[sum] != self.cod.join(self.table[x], self.table[y]) {
                            additive = Some(witness(a, x, format!("v={}", fmt_v(v))));
                            break;
                        }
                    }
                }
                if homogeneous.is_none() {
                    for (k, &c) in s.carrier().iter().enumerate() {
                        let kx = s.scale_at(x, k, a);
                        if self.table[kx] != self.cod.scale(k, self.table[x]) {
                            homogeneous = Some(witness(a, x, format!("k={}", s.semiring().format_elem(c))));
                            break;
                        }
                    }
                }
            }
        }
        report.record("zero_preserving", zero);
        report.record("additive", additive);
        report.record("homogeneous", homogeneous);
        report
    }

    /// `⊕ f(X)` as a codomain position.
    pub(crate) fn sup_over(&self, set: &PointSet) -> u32 {
        set.iter()
            .fold(self.cod.zero, |acc, i| self.cod.join(acc, self.table[i]))
    }

    /// `f_⊗(t) = ⊕ f(t)`.
    pub fn factorize_ext(&self, t: &ExtTensor) -> Result<Tuple> {
        self.space.same_space(t.space())?;
        Ok(self.value(self.sup_over(t.points())))
    }

    /// `⊕ f(X)` over an arbitrary subset.
    pub fn sup_of(&self, set: &PointSet) -> Tuple {
        self.value(self.sup_over(set))
    }

    /// `f⁻¹(Low(w))`.
    pub fn preimage_of_lower(&self, w: &[crate::semiring::Elem]) -> Result<PointSet> {
        let low = self.codomain.lower_set(w)?;
        let allowed: Vec<bool> = self
            .codomain
            .elements()
            .iter()
            .map(|u| low.contains(u))
            .collect();
        Ok(PointSet::from_ids(
            self.space.size(),
            (0..self.space.size()).filter(|&i| allowed[self.table[i] as usize]),
        ))
    }

    /// Level sets `f⁻¹(w)` for every codomain position `w`.
    pub fn level_sets(&self) -> Vec<PointSet> {
        let mut out = vec![self.space.empty_set(); self.codomain.len()];
        for (i, &w) in self.table.iter().enumerate() {
            out[w as usize].insert(i);
        }
        out
    }

    pub(crate) fn cod_ops(&self) -> &OpTables {
        &self.cod
    }
}

/// The cube dimensions `n_α` when every factor is `K^{n_α}`.
pub fn cube_dims(space: &TensorSpace) -> Result<Vec<usize>> {
    space
        .factors()
        .iter()
        .enumerate()
        .map(|(a, f)| {
            let cube = FinSemimodule::full_cube(f.semiring().clone(), f.dim())?;
            if &cube == f {
                Ok(f.dim())
            } else {
                Err(Error::Unsupported(format!("factor {} is not a full cube", a + 1)))
            }
        })
        .collect()
}
