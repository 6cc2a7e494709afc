//! The library τ-hull against the brute-force oracle in `common`.

mod common;

use std::collections::BTreeSet;

use common::{subset, tuple, Factor, Oracle};
use idem::exttensor::TensorModule;

fn small_spaces() -> Vec<Oracle> {
    let chain_module = Factor::explicit(&[&[0, 0], &[1, 0], &[1, 1]]);
    vec![
        Oracle::new(2, vec![Factor::cube(2, 1), Factor::cube(2, 1)]),
        Oracle::new(2, vec![Factor::cube(2, 1), chain_module.clone()]),
        Oracle::new(2, vec![Factor::cube(2, 2), Factor::cube(2, 1)]),
        Oracle::new(2, vec![Factor::cube(2, 1), Factor::cube(2, 1), Factor::cube(2, 1)]),
        Oracle::new(2, vec![chain_module.clone(), chain_module]),
        Oracle::new(3, vec![Factor::cube(3, 1), Factor::cube(3, 1)]),
    ]
}

#[test]
fn hull_matches_oracle_on_every_subset() {
    for o in small_spaces() {
        let space = o.library_space();
        let tensors = o.all_tensors();
        let pts = o.points();
        for mask in 0..1u64 << pts.len() {
            let seed = subset(&pts, mask);
            let expected = o.to_library(&space, &o.hull(&tensors, &seed));
            let got = space.hull(&o.to_library(&space, &seed));
            assert_eq!(got, expected, "{:?} mask {mask:#x}", o.factors);
        }
    }
}

#[test]
fn is_tensor_matches_oracle_on_every_subset() {
    for o in small_spaces() {
        let space = o.library_space();
        let pts = o.points();
        for mask in 0..1u64 << pts.len() {
            let seed = subset(&pts, mask);
            assert_eq!(
                space.is_tensor(&o.to_library(&space, &seed)),
                o.is_tensor(&seed),
                "{:?} mask {mask:#x}",
                o.factors
            );
        }
    }
}

#[test]
fn tensor_enumeration_matches_oracle() {
    for o in small_spaces() {
        let space = o.library_space();
        let mut expected: Vec<_> = o.all_tensors().iter().map(|t| o.to_library(&space, t)).collect();
        expected.sort();
        assert_eq!(space.enumerate_tensors().unwrap(), expected, "{:?}", o.factors);
    }
}

#[test]
fn bounded_tensor_counts_are_frozen() {
    // oracle-computed, then frozen
    let cases = [((1, 1), 2), ((2, 1), 4), ((2, 2), 16)];
    for ((d1, d2), count) in cases {
        let o = Oracle::new(2, vec![Factor::cube(2, d1), Factor::cube(2, d2)]);
        assert_eq!(o.bounded_tensors().len(), count, "oracle K^{d1} x K^{d2}");
        let tb = TensorModule::new(&o.library_space()).unwrap();
        assert_eq!(tb.len(), count, "library K^{d1} x K^{d2}");
    }
}

#[test]
fn two_cube_hulls_are_frozen() {
    let o = Oracle::new(2, vec![Factor::cube(2, 2), Factor::cube(2, 2)]);
    let space = o.library_space();
    let tensors = o.all_tensors();

    // every point with a zero factor, since x ⊗ 0 = 0
    let empty = o.hull(&tensors, &BTreeSet::new());
    assert_eq!(empty.len(), 7);
    assert_eq!(space.zero_tensor().len(), 7);

    // (1,0) ⊗ (0,1)
    let seed = BTreeSet::from([vec![2, 1]]);
    let hull = o.hull(&tensors, &seed);
    assert_eq!(hull.len(), 8);
    let got = space.tau_hull(&[vec![tuple(&[1, 0]), tuple(&[0, 1])]]).unwrap();
    assert_eq!(got.points(), &o.to_library(&space, &hull));
}

#[test]
fn two_cube_singletons_and_pairs_match_oracle() {
    let o = Oracle::new(2, vec![Factor::cube(2, 2), Factor::cube(2, 2)]);
    let space = o.library_space();
    let tensors = o.all_tensors();
    let pts = o.points();
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let seed = BTreeSet::from([pts[i].clone(), pts[j].clone()]);
            let expected = o.to_library(&space, &o.hull(&tensors, &seed));
            assert_eq!(space.hull(&o.to_library(&space, &seed)), expected, "{seed:?}");
        }
    }
}
