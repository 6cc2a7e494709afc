//! Instance generators and the stored table catalog.

use rand::Rng;

use crate::freemod::{FreeVector, IndexSet};
use crate::kernelop::Kernel;
use crate::semiring::{Elem, FiniteTable, Semiring};

/// An `rmax` element: `−∞` with probability 1/8, otherwise a half-integer
/// in `[−5, 5]` (exact in binary).
pub fn rmax_elem<R: Rng>(rng: &mut R) -> Elem {
    if rng.gen_ratio(1, 8) {
        Elem::NEG_INF
    } else {
        Elem::real(rng.gen_range(-10i32..=10) as f64 / 2.0)
    }
}

/// A uniformly random element of a finite semiring, or an `rmax`-style
/// element for the real kinds.
pub fn elem<R: Rng>(rng: &mut R, k: &Semiring) -> Elem {
    match k.size() {
        Some(n) => Elem::Idx(rng.gen_range(0..n as u32)),
        None => {
            let e = rmax_elem(rng);
            match k {
                Semiring::Rmin if e == Elem::NEG_INF => Elem::POS_INF,
                _ => e,
            }
        }
    }
}

pub fn vector<R: Rng>(rng: &mut R, index: &IndexSet, k: &Semiring) -> FreeVector {
    let coeffs = (0..index.len()).map(|_| elem(rng, k)).collect();
    FreeVector::new(index.clone(), k.clone(), coeffs).expect("generated in carrier")
}

pub fn kernel<R: Rng>(rng: &mut R, rows: &IndexSet, cols: &IndexSet, k: &Semiring) -> Kernel {
    let entries = (0..rows.len() * cols.len()).map(|_| elem(rng, k)).collect();
    Kernel::new(rows.clone(), cols.clone(), k.clone(), entries).expect("generated in carrier")
}

/// Index set `{name0, …, name(n−1)}`.
pub fn index(name: &str, n: usize) -> IndexSet {
    let labels: Vec<String> = (0..n).map(|i| format!("{name}{i}")).collect();
    IndexSet::from_names(&labels).expect("distinct")
}

fn table(name: &str, labels: &[&str], add: &[&[usize]], mul: &[&[usize]], zero: usize, one: usize) -> Semiring {
    let rows = |t: &[&[usize]]| t.iter().map(|r| r.to_vec()).collect();
    Semiring::table(
        FiniteTable::new(
            labels.iter().map(|s| s.to_string()).collect(),
            rows(add),
            rows(mul),
            zero,
            one,
        )
        .expect("catalog tables are well-shaped")
        .with_name(name),
    )
}

/// Three valid finite tables: a relabeled 3-chain, the four-element
/// Boolean lattice with ⊙ = meet, and max-plus truncated at 2.
pub fn stored_tables() -> Vec<Semiring> {
    vec![
        table(
            "c3",
            &["lo", "mid", "hi"],
            &[&[0, 1, 2], &[1, 1, 2], &[2, 2, 2]],
            &[&[0, 0, 0], &[0, 1, 1], &[0, 1, 2]],
            0,
            2,
        ),
        table(
            "diamond",
            &["0", "a", "b", "1"],
            &[&[0, 1, 2, 3], &[1, 1, 3, 3], &[2, 3, 2, 3], &[3, 3, 3, 3]],
            &[&[0, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 2, 2], &[0, 1, 2, 3]],
            0,
            3,
        ),
        table(
            "trop2",
            &["z", "e", "p", "t"],
            &[&[0, 1, 2, 3], &[1, 1, 2, 3], &[2, 2, 2, 3], &[3, 3, 3, 3]],
            &[&[0, 0, 0, 0], &[0, 1, 2, 3], &[0, 2, 3, 3], &[0, 3, 3, 3]],
            0,
            1,
        ),
    ]
}

/// The 3-chain with `mid ⊕ mid = hi`.
pub fn broken_idempotent() -> Semiring {
    table(
        "bad_idem",
        &["lo", "mid", "hi"],
        &[&[0, 1, 2], &[1, 2, 2], &[2, 2, 2]],
        &[&[0, 0, 0], &[0, 1, 1], &[0, 1, 2]],
        0,
        2,
    )
}

/// The non-distributive lattice M3 with ⊙ = meet.
pub fn broken_distributive() -> Semiring {
    table(
        "m3",
        &["0", "a", "b", "c", "1"],
        &[
            &[0, 1, 2, 3, 4],
            &[1, 1, 4, 4, 4],
            &[2, 4, 2, 4, 4],
            &[3, 4, 4, 3, 4],
            &[4, 4, 4, 4, 4],
        ],
        &[
            &[0, 0, 0, 0, 0],
            &[0, 1, 0, 0, 1],
            &[0, 0, 2, 0, 2],
            &[0, 0, 0, 3, 3],
            &[0, 1, 2, 3, 4],
        ],
        0,
        4,
    )
}

/// The finite semirings exercised exhaustively by default.
pub fn finite_kinds() -> Vec<Semiring> {
    vec![Semiring::Boolean, Semiring::Chain(3)]
}
