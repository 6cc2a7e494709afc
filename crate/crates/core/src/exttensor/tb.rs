//! The tensor semimodule `T_b(V)` as an explicit finite structure, and
//! enumeration of linear maps out of it.

use std::collections::HashMap;

use super::polymap::PolyMapTable;
use super::space::{PointSet, TensorSpace};
use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// All tensors of a space with their operation tables.
#[derive(Debug, Clone)]
pub struct TensorModule {
    space: TensorSpace,
    tensors: Vec<PointSet>,
    /// `add[a * n + b]`.
    add: Vec<usize>,
    /// `scale[k * n + a]`, computed through slot 0.
    scale: Vec<usize>,
    zero: usize,
    /// `pi[x]`: the position of `π(x)`.
    pi: Vec<usize>,
}

impl TensorModule {
    pub fn new(space: &TensorSpace) -> Result<Self> {
        let tensors = space.enumerate_tensors()?;
        let index: HashMap<&PointSet, usize> =
            tensors.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let n = tensors.len();
        let mut add = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let s = index[&space.hull(&tensors[a].union(&tensors[b]))];
                add[a * n + b] = s;
                add[b * n + a] = s;
            }
        }
        let mut scale = Vec::with_capacity(space.carrier().len() * n);
        for k in 0..space.carrier().len() {
            for t in &tensors {
                scale.push(index[&space.scalar_set(k, t, 0)]);
            }
        }
        let zero = index[&space.hull(&space.empty_set())];
        let pi = (0..space.size()).map(|x| index[&space.pi(x)]).collect();
        Ok(Self {
            space: space.clone(),
            tensors,
            add,
            scale,
            zero,
            pi,
        })
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn tensors(&self) -> &[PointSet] {
        &self.tensors
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.len() + b]
    }

    /// `k ⊙ t` for the carrier index `k`.
    pub fn scale(&self, k: usize, t: usize) -> usize {
        self.scale[k * self.len() + t]
    }

    pub fn pi(&self, x: usize) -> usize {
        self.pi[x]
    }

    pub fn position(&self, t: &PointSet) -> Option<usize> {
        self.tensors.binary_search(t).ok()
    }

    /// Semimodule axioms of `T_b(V)` checked exhaustively, plus
    /// independence of the scalar action from the slot used.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let kn = self.space.carrier().len();
        let k = self.space.semiring();
        let carrier = self.space.carrier();
        let kidx = |e| carrier.iter().position(|&c| c == e).expect("carrier");
        let mut report = ValidationReport::new(format!("tensor semimodule with {n} tensors"));

        let find = |pred: &dyn Fn(usize, usize) -> bool| {
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| !pred(a, b))
                .map(|(a, b)| format!("a=T{a} b=T{b}"))
        };
        report.record("add_idempotent", find(&|a, _| self.add(a, a) == a));
        report.record("add_commutative", find(&|a, b| self.add(a, b) == self.add(b, a)));
        let assoc = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| self.add(self.add(a, b), c) != self.add(a, self.add(b, c)))
            .map(|(a, b, c)| format!("a=T{a} b=T{b} c=T{c}"));
        report.record("add_associative", assoc);
        report.record(
            "zero_neutral",
            (0..n).find(|&a| self.add(a, self.zero) != a).map(|a| format!("a=T{a}")),
        );
        report.record(
            "scalar_unit",
            (0..n).find(|&a| self.scale(kidx(k.one()), a) != a).map(|a| format!("a=T{a}")),
        );
        report.record(
            "scalar_zero",
            (0..n)
                .find(|&a| self.scale(kidx(k.zero()), a) != self.zero)
                .map(|a| format!("a=T{a}")),
        );
        let mut scalar_assoc = None;
        let mut scalar_sum = None;
        for c in 0..kn {
            for d in 0..kn {
                let cd = kidx(k.times(carrier[c], carrier[d]).expect("finite"));
                let c_plus_d = kidx(k.join(carrier[c], carrier[d]));
                for a in 0..n {
                    if scalar_assoc.is_none() && self.scale(c, self.scale(d, a)) != self.scale(cd, a) {
                        scalar_assoc = Some(format!("k=#{c} l=#{d} a=T{a}"));
                    }
                    if scalar_sum.is_none()
                        && self.scale(c_plus_d, a) != self.add(self.scale(c, a), self.scale(d, a))
                    {
                        scalar_sum = Some(format!("k=#{c} l=#{d} a=T{a}"));
                    }
                }
            }
        }
        report.record("scalar_associative", scalar_assoc);
        report.record("scalar_distributes_over_scalar_sum", scalar_sum);
        let mut vector_sum = None;
        'v: for c in 0..kn {
            for a in 0..n {
                for b in 0..n {
                    if self.scale(c, self.add(a, b)) != self.add(self.scale(c, a), self.scale(c, b)) {
                        vector_sum = Some(format!("k=#{c} a=T{a} b=T{b}"));
                        break 'v;
                    }
                }
            }
        }
        report.record("scalar_distributes_over_tensor_sum", vector_sum);
        let mut slot_free = None;
        'slot: for c in 0..kn {
            for (i, t) in self.tensors.iter().enumerate() {
                for a in 1..self.space.arity() {
                    if self.position(&self.space.scalar_set(c, t, a)) != Some(self.scale(c, i)) {
                        slot_free = Some(format!("k=#{c} a=T{i} slot={}", a + 1));
                        break 'slot;
                    }
                }
            }
        }
        report.record("scalar_slot_independent", slot_free);
        report
    }

    /// `f_⊗` on every tensor, as codomain positions.
    pub fn factorize_table(&self, f: &PolyMapTable) -> Result<Vec<u32>> {
        self.space.same_space(f.space())?;
        Ok(self.tensors.iter().map(|t| f.sup_over(t)).collect())
    }

    /// Every assignment `g: T_b(V) → W` that is linear (preserves 0,
    /// binary sums, and scalars) and satisfies `g(π(x)) = f(x)`, found by
    /// backtracking over candidate values. Stops after `cap` solutions.
    pub fn linear_factorizations(&self, f: &PolyMapTable, cap: usize) -> Result<Vec<Vec<u32>>> {
        self.space.same_space(f.space())?;
        let cod = f.cod_ops();
        let n = self.len();
        let mut forced: Vec<Option<u32>> = vec![None; n];
        forced[self.zero] = Some(cod.zero);
        for x in 0..self.space.size() {
            let t = self.pi(x);
            let v = f.eval_id(x);
            match forced[t] {
                Some(w) if w != v => return Ok(Vec::new()),
                _ => forced[t] = Some(v),
            }
        }

        // constraints grouped by the largest tensor position they mention
        let mut sums: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for a in 0..n {
            for b in a..n {
                let c = self.add(a, b);
                sums[a.max(b).max(c)].push((a, b, c));
            }
        }
        let mut scalars: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for k in 0..self.space.carrier().len() {
            for a in 0..n {
                let c = self.scale(k, a);
                scalars[a.max(c)].push((k, a, c));
            }
        }

        struct Search<'a> {
            n: usize,
            width: u32,
            forced: &'a [Option<u32>],
            sums: &'a [Vec<(usize, usize, usize)>],
            scalars: &'a [Vec<(usize, usize, usize)>],
            cod: &'a super::module::OpTables,
            cap: usize,
            g: Vec<u32>,
            out: Vec<Vec<u32>>,
        }
        impl Search<'_> {
            fn consistent(&self, i: usize) -> bool {
                self.sums[i]
                    .iter()
                    .all(|&(a, b, c)| self.cod.join(self.g[a], self.g[b]) == self.g[c])
                    && self.scalars[i]
                        .iter()
                        .all(|&(k, a, c)| self.cod.scale(k, self.g[a]) == self.g[c])
            }
            fn run(&mut self, i: usize) {
                if self.out.len() >= self.cap {
                    return;
                }
                if i == self.n {
                    self.out.push(self.g.clone());
                    return;
                }
                let candidates: Vec<u32> = match self.forced[i] {
                    Some(w) => vec![w],
                    None => (0..self.width).collect(),
                };
                for w in candidates {
                    self.g[i] = w;
                    if self.consistent(i) {
                        self.run(i + 1);
                    }
                }
            }
        }
        if cap == 0 {
            return Err(Error::Shape("cap must be positive".into()));
        }
        let mut search = Search {
            n,
            width: cod.len as u32,
            forced: &forced,
            sums: &sums,
            scalars: &scalars,
            cod,
            cap,
            g: vec![0; n],
            out: Vec::new(),
        };
        search.run(0);
        Ok(search.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exttensor::module::{FinSemimodule, Tuple};
    use crate::semiring::{Elem, Semiring};

    fn t(bits: &[u32]) -> Tuple {
        bits.iter().map(|&i| Elem::Idx(i)).collect()
    }

    fn cubes(k: &Semiring, dims: &[usize]) -> TensorSpace {
        TensorSpace::new(
            dims.iter()
                .map(|&d| FinSemimodule::full_cube(k.clone(), d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn axioms_hold_on_small_products() {
        for (k, dims) in [
            (Semiring::Boolean, vec![2, 1]),
            (Semiring::Boolean, vec![2, 2]),
            (Semiring::Chain(3), vec![1, 1]),
        ] {
            let m = TensorModule::new(&cubes(&k, &dims)).unwrap();
            let r = m.validate();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn factorization_is_unique() {
        let k = Semiring::Boolean;
        let s = cubes(&k, &[2, 1]);
        let m = TensorModule::new(&s).unwrap();
        let w = FinSemimodule::full_cube(k, 2).unwrap();
        let f = PolyMapTable::from_basis_values(&s, w, &[t(&[1, 0]), t(&[1, 1])]).unwrap();
        let sols = m.linear_factorizations(&f, 8).unwrap();
        assert_eq!(sols, vec![m.factorize_table(&f).unwrap()]);
    }

    #[test]
    fn zero_map_factors_through_zero() {
        let k = Semiring::Boolean;
        let s = cubes(&k, &[1, 1]);
        let m = TensorModule::new(&s).unwrap();
        let w = FinSemimodule::full_cube(k, 1).unwrap();
        let f = PolyMapTable::from_basis_values(&s, w, &[t(&[0])]).unwrap();
        let sols = m.linear_factorizations(&f, 8).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].iter().all(|&v| v == 0));
    }
}
