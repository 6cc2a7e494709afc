//! The map from extensional tensors over full cubes `K^{n_α}` to the free
//! kernel form: `T ↦ ⊕_{x ∈ T} x_1 ⊗ … ⊗ x_m`, with `K^n` read as
//! `ℬ({0, …, n−1}, K)`.

use std::collections::HashMap;

use super::polymap::cube_dims;
use super::space::{ExtTensor, PointSet, TensorSpace};
use super::tb::TensorModule;
use crate::error::{Error, Result};
use crate::freemod::{FreeVector, IndexSet};
use crate::freetensor::{outer, TensorKernel};
use crate::report::ValidationReport;
use crate::semiring::Elem;

fn factor_indices(space: &TensorSpace) -> Result<Vec<IndexSet>> {
    Ok(cube_dims(space)?.into_iter().map(IndexSet::range).collect())
}

fn outer_of_point(space: &TensorSpace, indices: &[IndexSet], id: usize) -> Result<TensorKernel> {
    let vectors = space
        .point(id)
        .into_iter()
        .zip(indices)
        .map(|(t, ix)| FreeVector::new(ix.clone(), space.semiring().clone(), t))
        .collect::<Result<Vec<_>>>()?;
    outer(&vectors.iter().collect::<Vec<_>>())
}

fn sup_of_outers(space: &TensorSpace, indices: &[IndexSet], set: &PointSet) -> Result<TensorKernel> {
    let mut acc = TensorKernel::zero(indices.to_vec(), space.semiring().clone())?;
    for id in set.iter() {
        acc = acc.add(&outer_of_point(space, indices, id)?)?;
    }
    Ok(acc)
}

/// `T ↦ ⊕ outer(points(T))`. Every factor must be a full cube.
pub fn to_tensor_kernel(t: &ExtTensor) -> Result<TensorKernel> {
    let indices = factor_indices(t.space())?;
    sup_of_outers(t.space(), &indices, t.points())
}

/// The inverse direction: `⊕_{(i_1, …, i_m)} c ⊙ π(e_{i_1}, …, e_{i_m})`.
pub fn from_tensor_kernel(space: &TensorSpace, tk: &TensorKernel) -> Result<ExtTensor> {
    let indices = factor_indices(space)?;
    if tk.factors() != indices.as_slice() {
        return Err(Error::IndexMismatch(
            "tensor kernel factors do not match the cube dimensions".into(),
        ));
    }
    let k = space.semiring();
    let dims: Vec<usize> = indices.iter().map(IndexSet::len).collect();
    let mut seed = space.empty_set();
    for (pos, &c) in tk.coeffs().coeffs().iter().enumerate() {
        if c == k.zero() {
            continue;
        }
        let mut rest = pos;
        let mut units: Vec<Vec<_>> = vec![Vec::new(); dims.len()];
        for (a, &n) in dims.iter().enumerate().rev() {
            let i = rest % n;
            rest /= n;
            let mut e = vec![k.zero(); n];
            e[i] = if a == 0 { c } else { k.one() };
            units[a] = e;
        }
        seed.insert(space.point_id(&units)?);
    }
    Ok(ExtTensor::canonical_unchecked(space, space.hull(&seed)))
}

/// Checks exhaustively that the map to the free form is a bijection from
/// `T_b(V)` onto `ℬ(X_1 × … × X_m, K)`, is linear, sends `π(x)` to the pure
/// tensor of `x`, and is inverted by [`from_tensor_kernel`].
pub fn cross_isomorphism_report(space: &TensorSpace) -> Result<ValidationReport> {
    let indices = factor_indices(space)?;
    let module = TensorModule::new(space)?;
    let images = module
        .tensors()
        .iter()
        .map(|t| sup_of_outers(space, &indices, t))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ValidationReport::new(format!(
        "cross isomorphism over {} with cube dims {:?}",
        space.semiring().name(),
        indices.iter().map(IndexSet::len).collect::<Vec<_>>()
    ));

    let mut seen: HashMap<&[Elem], usize> = HashMap::new();
    let mut injective = None;
    for (i, img) in images.iter().enumerate() {
        if let Some(j) = seen.insert(img.coeffs().coeffs(), i) {
            injective = Some(format!("T{j} and T{i} share an image"));
            break;
        }
    }
    report.record("injective", injective);

    let product = IndexSet::product_all(&indices);
    let free_count = FreeVector::enumerate_all(&product, space.semiring())?.len();
    report.record(
        "surjective",
        (images.len() != free_count).then(|| format!("{} tensors for {free_count} free elements", images.len())),
    );

    let n = module.len();
    let mut additive = None;
    'add: for a in 0..n {
        for b in a..n {
            if images[module.add(a, b)] != images[a].add(&images[b])? {
                additive = Some(format!("a=T{a} b=T{b}"));
                break 'add;
            }
        }
    }
    report.record("additive", additive);

    let mut homogeneous = None;
    'scale: for (k, &c) in space.carrier().iter().enumerate() {
        for a in 0..n {
            if images[module.scale(k, a)] != images[a].scale(c)? {
                homogeneous = Some(format!("k={} a=T{a}", space.semiring().format_elem(c)));
                break 'scale;
            }
        }
    }
    report.record("homogeneous", homogeneous);

    let mut pi_pure = None;
    for x in 0..space.size() {
        if images[module.pi(x)] != outer_of_point(space, &indices, x)? {
            pi_pure = Some(format!("x=[{}]", space.format_point(x)));
            break;
        }
    }
    report.record("pi_is_pure_tensor", pi_pure);

    let mut round_trip = None;
    for (i, img) in images.iter().enumerate() {
        if from_tensor_kernel(space, img)?.points() != &module.tensors()[i] {
            round_trip = Some(format!("a=T{i}"));
            break;
        }
    }
    report.record("inverse_round_trip", round_trip);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exttensor::module::FinSemimodule;
    use crate::semiring::Semiring;

    fn cubes(k: &Semiring, dims: &[usize]) -> TensorSpace {
        TensorSpace::new(
            dims.iter()
                .map(|&d| FinSemimodule::full_cube(k.clone(), d).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cross_isomorphism_on_small_cubes() {
        for dims in [[1, 1], [2, 1], [1, 2]] {
            let r = cross_isomorphism_report(&cubes(&Semiring::Boolean, &dims)).unwrap();
            assert!(r.passed(), "{r}");
        }
        let r = cross_isomorphism_report(&cubes(&Semiring::Chain(3), &[1, 1])).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn pure_point_maps_to_outer() {
        let s = cubes(&Semiring::Boolean, &[2, 1]);
        let x = vec![vec![Elem::Idx(1), Elem::Idx(0)], vec![Elem::Idx(1)]];
        let tk = to_tensor_kernel(&s.canonical_pi(&x).unwrap()).unwrap();
        assert_eq!(tk.coeffs().coeffs(), &[Elem::Idx(1), Elem::Idx(0)]);
    }

    #[test]
    fn non_cube_rejected() {
        let d = FinSemimodule::diagonal(Semiring::Boolean, 2).unwrap();
        let s = TensorSpace::new(vec![d]).unwrap();
        assert!(matches!(to_tensor_kernel(&s.zero_tensor()), Err(Error::Unsupported(_))));
    }
}
