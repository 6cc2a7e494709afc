//! Concrete values: computed by the float oracle in `common` or by hand
//! from the definitions, then frozen.

mod common;

use common::{mp_apply, mp_dot, mp_then};
use idem::exttensor::FinSemimodule;
use idem::freemod::{functional_apply, FreeVector, IndexSet, Label};
use idem::freetensor::{map_direct_sum, outer, GeneratorPolyMap};
use idem::harness::gen;
use idem::kernelop::{compose, Kernel};
use idem::report::Outcome;
use idem::semiring::{Elem, Semiring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ix(names: &[&str]) -> IndexSet {
    IndexSet::from_names(names).unwrap()
}

fn rvec(index: &IndexSet, vals: &[f64]) -> FreeVector {
    FreeVector::new(index.clone(), Semiring::Rmax, vals.iter().map(|&v| Elem::real(v)).collect()).unwrap()
}

fn rker(rows: &IndexSet, cols: &IndexSet, vals: &[Vec<f64>]) -> Kernel {
    let data = vals.iter().map(|r| r.iter().map(|&v| Elem::real(v)).collect()).collect();
    Kernel::from_rows(rows.clone(), cols.clone(), Semiring::Rmax, data).unwrap()
}

fn reals(v: &FreeVector) -> Vec<f64> {
    v.coeffs().iter().map(|e| e.as_real().unwrap()).collect()
}

fn kernel_reals(m: &Kernel) -> Vec<Vec<f64>> {
    (0..m.rows().len()).map(|x| reals(&m.row(x))).collect()
}

/// Half-integers in `[−5, 5]` with an occasional `−∞`.
fn draw(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_ratio(1, 8) {
                        f64::NEG_INFINITY
                    } else {
                        rng.gen_range(-10i32..=10) as f64 / 2.0
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn functional_pairing() {
    let x = ix(&["x0", "x1"]);
    let a = rvec(&x, &[1.0, 2.0]);
    let phi = rvec(&x, &[0.0, 0.0]);
    assert_eq!(mp_dot(&[1.0, 2.0], &[0.0, 0.0]), 2.0);
    assert_eq!(functional_apply(&a, &phi).unwrap(), Elem::real(2.0));
}

#[test]
fn kernel_application() {
    let (x, y) = (ix(&["x0", "x1"]), ix(&["y0", "y1"]));
    let raw = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
    let m = rker(&x, &y, &raw);
    assert_eq!(mp_apply(&raw, &[0.0, 0.0]), vec![3.0, 4.0]);
    assert_eq!(reals(&m.apply(&rvec(&x, &[0.0, 0.0])).unwrap()), vec![3.0, 4.0]);
    assert_eq!(reals(&m.apply(&rvec(&x, &[2.0, -1.0])).unwrap()), vec![3.0, 4.0]);
    assert_eq!(reals(&m.apply(&rvec(&x, &[5.0, f64::NEG_INFINITY])).unwrap()), vec![6.0, 7.0]);
}

#[test]
fn outer_product_and_pure_sum() {
    let (x, y) = (ix(&["x0", "x1"]), ix(&["y0", "y1"]));
    let t = outer(&[&rvec(&x, &[0.0, 1.0]), &rvec(&y, &[2.0, 3.0])]).unwrap();
    assert_eq!(reals(t.coeffs()), vec![2.0, 3.0, 3.0, 4.0]);
    let terms: Vec<(String, f64)> = t
        .to_pure_sum()
        .terms
        .iter()
        .map(|(ls, c)| {
            let names: Vec<String> = ls.iter().map(Label::to_string).collect();
            (names.join(","), c.as_real().unwrap())
        })
        .collect();
    let expected = [("x0,y0", 2.0), ("x0,y1", 3.0), ("x1,y0", 3.0), ("x1,y1", 4.0)];
    assert_eq!(terms, expected.map(|(l, c)| (l.to_string(), c)).to_vec());
}

#[test]
fn composition_of_fixed_kernels() {
    let (x, y, z) = (ix(&["x0", "x1"]), ix(&["y0", "y1"]), ix(&["z0"]));
    let m = rker(&x, &y, &[vec![1.0, 2.0], vec![3.0, 4.0]]);
    let n = rker(&y, &z, &[vec![0.0], vec![-1.0]]);
    assert_eq!(kernel_reals(&compose(&m, &n).unwrap()), vec![vec![1.0], vec![3.0]]);
}

#[test]
fn composition_matches_float_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let (p, q, r) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (a, b) = (draw(&mut rng, p, q), draw(&mut rng, q, r));
        let (xp, xq, xr) = (gen::index("p", p), gen::index("q", q), gen::index("r", r));
        let got = rker(&xp, &xq, &a).then(&rker(&xq, &xr, &b)).unwrap();
        assert_eq!(kernel_reals(&got), mp_then(&a, &b));
    }
}

#[test]
fn rank_one_entries() {
    let (x, y) = (ix(&["x0", "x1"]), ix(&["y0", "y1", "y2"]));
    let k = Kernel::rank_one(&rvec(&x, &[1.0, f64::NEG_INFINITY]), &rvec(&y, &[0.0, 2.0, -3.0])).unwrap();
    let ninf = f64::NEG_INFINITY;
    assert_eq!(kernel_reals(&k), vec![vec![1.0, 3.0, -2.0], vec![ninf, ninf, ninf]]);
}

#[test]
fn nuclear_terms_of_a_3x3_kernel() {
    let x = ix(&["x0", "x1", "x2"]);
    let raw = vec![vec![0.0, 1.0, 2.0], vec![-1.0, f64::NEG_INFINITY, 4.5], vec![3.0, 3.0, 3.0]];
    let m = rker(&x, &x, &raw);
    let terms = m.nuclear_decompose();
    assert_eq!(terms.len(), 3);
    let mut parts = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        let mut delta = vec![f64::NEG_INFINITY; 3];
        delta[i] = 0.0;
        assert_eq!(reals(&t.functional), delta);
        assert_eq!(reals(&t.vector), raw[i]);
        parts.push(t.to_kernel().unwrap());
    }
    assert_eq!(Kernel::sup(m.rows(), m.cols(), m.semiring(), &parts).unwrap(), m);
}

#[test]
fn kron_matches_outer_of_kernels() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..100 {
        let (p, q, r, s) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (a, b) = (draw(&mut rng, p, q), draw(&mut rng, r, s));
        let k = rker(&gen::index("p", p), &gen::index("q", q), &a)
            .kron(&rker(&gen::index("r", r), &gen::index("s", s), &b))
            .unwrap();
        for x in 0..p {
            for x2 in 0..r {
                for y in 0..q {
                    for y2 in 0..s {
                        let got = k.get(x * r + x2, y * s + y2).as_real().unwrap();
                        assert_eq!(got, a[x][y] + b[x2][y2]);
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_kron_value() {
    let a = rker(&ix(&["p"]), &ix(&["q"]), &[vec![1.5]]);
    let b = rker(&ix(&["r"]), &ix(&["s"]), &[vec![2.0]]);
    let k = a.kron(&b).unwrap();
    assert_eq!(k.rows().label(0).to_string(), "p|r");
    assert_eq!(k.cols().label(0).to_string(), "q|s");
    assert_eq!(k.get(0, 0), Elem::real(3.5));
}

#[test]
fn boolean_factorization_by_brute_force() {
    // every table B^{2x2} -> B^1 agrees with its factorization on all argument pairs
    let b = Semiring::Boolean;
    let (x, y, w) = (ix(&["x0", "x1"]), ix(&["y0", "y1"]), ix(&["w"]));
    let args_x = FreeVector::enumerate_all(&x, &b).unwrap();
    let args_y = FreeVector::enumerate_all(&y, &b).unwrap();
    for mask in 0u32..16 {
        let table: Vec<FreeVector> = (0..4)
            .map(|i| FreeVector::new(w.clone(), b.clone(), vec![Elem::Idx(mask >> i & 1)]).unwrap())
            .collect();
        let f = GeneratorPolyMap::new(vec![x.clone(), y.clone()], w.clone(), b.clone(), table).unwrap();
        let m = f.factorize();
        for p in &args_x {
            for q in &args_y {
                // f(p, q) = ⋁_{i,j} p_i ∧ q_j ∧ table(i, j)
                let mut want = 0;
                for i in 0..2 {
                    for j in 0..2 {
                        want |= p.at(i).as_index().unwrap() as u32
                            & q.at(j).as_index().unwrap() as u32
                            & (mask >> (2 * i + j) & 1);
                    }
                }
                let direct = f.eval(&[p, q]).unwrap();
                let through = m.apply(outer(&[p, q]).unwrap().coeffs()).unwrap();
                assert_eq!(direct.at(0), Elem::Idx(want), "mask {mask}");
                assert_eq!(through, direct, "mask {mask}");
            }
        }
    }
}

#[test]
fn direct_sum_of_rank_one_kernels() {
    let (x1, x2, y) = (ix(&["a"]), ix(&["b", "c"]), ix(&["y0", "y1"]));
    let f1 = Kernel::rank_one(&rvec(&x1, &[1.0]), &rvec(&y, &[0.0, 2.0])).unwrap();
    let f2 = Kernel::rank_one(&rvec(&x2, &[0.0, -1.0]), &rvec(&y, &[3.0, 1.0])).unwrap();
    let s = map_direct_sum(&[f1, f2]).unwrap();
    let labels: Vec<String> = s.rows().labels().iter().map(Label::to_string).collect();
    assert_eq!(labels, ["0:a", "1:b", "1:c"]);
    assert_eq!(kernel_reals(&s), vec![vec![1.0, 3.0], vec![3.0, 1.0], vec![2.0, 0.0]]);
    // all three inputs at 0 give the sup of the rows
    assert_eq!(reals(&s.apply(&rvec(s.rows(), &[0.0, 0.0, 0.0])).unwrap()), vec![3.0, 3.0]);
}

#[test]
fn m3_distributivity_witness() {
    let m3 = gen::broken_distributive();
    let (a, b, c) = (Elem::Idx(1), Elem::Idx(2), Elem::Idx(3));
    // a ∧ (b ∨ c) = a ∧ 1 = a, but (a ∧ b) ∨ (a ∧ c) = 0
    assert_eq!(m3.times(a, m3.join(b, c)).unwrap(), a);
    assert_eq!(m3.join(m3.times(a, b).unwrap(), m3.times(a, c).unwrap()), Elem::Idx(0));
    assert!(matches!(m3.validate().get("left_distributive"), Some(Outcome::Fail(_))));
}

#[test]
fn diagonal_modules() {
    for n in 2..=4u32 {
        let k = Semiring::Chain(n);
        let d = FinSemimodule::diagonal(k.clone(), 3).unwrap();
        assert_eq!(d.len(), n as usize);
        assert!(d.validate().passed());
        assert_eq!(d.top(), vec![Elem::Idx(n - 1); 3]);
    }
}

#[test]
fn extended_reals() {
    let k = Semiring::RmaxTop;
    // 0 ⊙ (+∞) = 0
    assert_eq!(k.times(Elem::NEG_INF, Elem::POS_INF).unwrap(), Elem::NEG_INF);
    assert_eq!(k.times(Elem::real(2.0), Elem::POS_INF).unwrap(), Elem::POS_INF);
    assert_eq!(k.top(), Some(Elem::POS_INF));
    assert_eq!(Semiring::Rmax.sup(&[]).unwrap(), Elem::NEG_INF);
    assert_eq!(Semiring::Rmax.top(), None);
    assert_eq!(Semiring::Rmax.complete_top().unwrap(), Semiring::RmaxTop);
    assert!(Semiring::Rmin.complete_top().is_err());
    assert_eq!(Semiring::Chain(4).complete_top().unwrap(), Semiring::Chain(4));
}
