//! Suites for tensor products of free semimodules.

use rand::Rng;

use super::gen;
use super::{Checker, Suite};
use crate::error::Result;
use crate::freemod::{FreeVector, IndexSet, Label};
use crate::freetensor::{
    dsum_inject, dsum_project, injection_kernel, map_direct_product, map_direct_sum, outer, projection_kernel,
    structural_iso, GeneratorPolyMap, IsoKind, PureSum, TensorKernel,
};
use crate::kernelop::Kernel;
use crate::semiring::{Elem, Semiring};

const RANDOM_CASES: usize = 1000;

fn all_vectors(x: &IndexSet, k: &Semiring) -> Result<Vec<FreeVector>> {
    FreeVector::enumerate_all(x, k)
}

fn tensor(factors: &[IndexSet], coeffs: FreeVector) -> Result<TensorKernel> {
    TensorKernel::new(factors.to_vec(), coeffs)
}

fn random_tensor(c: &mut Checker, factors: &[IndexSet], k: &Semiring) -> Result<TensorKernel> {
    let v = gen::vector(c.rng, &IndexSet::product_all(factors), k);
    tensor(factors, v)
}

/// A pure sum with repeated labels, in arbitrary order.
fn random_pure_sum(c: &mut Checker, factors: &[IndexSet], k: &Semiring) -> PureSum {
    let n = c.rng.gen_range(0..12);
    let terms = (0..n)
        .map(|_| {
            let labels = factors
                .iter()
                .map(|f| f.label(c.rng.gen_range(0..f.len())).clone())
                .collect();
            (labels, gen::elem(c.rng, k))
        })
        .collect();
    PureSum { terms }
}

fn dims_up_to(c: &mut Checker, n: usize, max: usize) -> Vec<IndexSet> {
    (0..n)
        .map(|i| gen::index(&format!("{}", (b'x' + i as u8) as char), c.rng.gen_range(1..=max)))
        .collect()
}

pub(super) fn freetensor(s: &mut Suite) {
    let cap = s.size(2);
    s.property("outer_polylinear", |c| {
        let check = |c: &mut Checker, p: &FreeVector, q: &FreeVector, r: &FreeVector, e: Elem| -> Result<()> {
            let lhs = outer(&[&p.add(q)?, r])?;
            let rhs = outer(&[p, r])?.add(&outer(&[q, r])?)?;
            c.case(lhs == rhs, || format!("slot 1 sup at p={} q={}", p.format_values(), q.format_values()));
            let lhs = outer(&[r, &p.add(q)?])?;
            let rhs = outer(&[r, p])?.add(&outer(&[r, q])?)?;
            c.case(lhs == rhs, || format!("slot 2 sup at p={} q={}", p.format_values(), q.format_values()));
            let scaled = outer(&[p, r])?.scale(e)?;
            let ok = outer(&[&p.scale(e)?, r])? == scaled && outer(&[p, &r.scale(e)?])? == scaled;
            c.case(ok, || format!("scalar {e} at p={} r={}", p.format_values(), r.format_values()));
            Ok(())
        };
        for k in gen::finite_kinds() {
            let (x, y) = (gen::index("x", cap), gen::index("y", cap));
            let xs = all_vectors(&x, &k)?;
            let ys = all_vectors(&y, &k)?;
            let els = k.elements().unwrap();
            for p in &xs {
                for q in &xs {
                    for r in &ys {
                        for &e in &els {
                            check(c, p, q, r, e)?;
                        }
                    }
                }
            }
        }
        let k = Semiring::Rmax;
        for _ in 0..RANDOM_CASES {
            let x = gen::index("x", c.rng.gen_range(1..=4));
            let (p, q, r) = (gen::vector(c.rng, &x, &k), gen::vector(c.rng, &x, &k), gen::vector(c.rng, &x, &k));
            let e = gen::elem(c.rng, &k);
            check(c, &p, &q, &r, e)?;
        }
        Ok(())
    });
    s.property("outer_of_deltas", |c| {
        for k in gen::finite_kinds().into_iter().chain([Semiring::Rmax]) {
            let f = [gen::index("x", 2), gen::index("y", 3), gen::index("z", 2)];
            let product = IndexSet::product_all(&f);
            for (pos, l) in product.labels().iter().enumerate() {
                let parts = unnest(l, f.len());
                let deltas = parts
                    .iter()
                    .zip(&f)
                    .map(|(p, ix)| FreeVector::delta(ix.clone(), p, k.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let t = outer(&deltas.iter().collect::<Vec<_>>())?;
                let expected = FreeVector::delta_at(product.clone(), pos, k.clone());
                c.case(*t.coeffs() == expected, || format!("{} over {}", l, k.name()));
            }
        }
        Ok(())
    });
    s.property("factorize_generators", |c| {
        let k = Semiring::Boolean;
        let (x, y, w) = (gen::index("x", 2), gen::index("y", 2), gen::index("w", 2));
        let xs = all_vectors(&x, &k)?;
        let ys = all_vectors(&y, &k)?;
        for _ in 0..64 {
            let table: Vec<FreeVector> = (0..4).map(|_| gen::vector(c.rng, &w, &k)).collect();
            let f = GeneratorPolyMap::new(vec![x.clone(), y.clone()], w.clone(), k.clone(), table.clone())?;
            let m = f.factorize();
            for p in &xs {
                for q in &ys {
                    // sup over (i, j) of p(i) ⊙ q(j) ⊙ table(i, j)
                    let mut brute = vec![k.zero(); w.len()];
                    for i in 0..2 {
                        for j in 0..2 {
                            let weight = k.times(p.at(i), q.at(j))?;
                            for (b, &t) in brute.iter_mut().zip(table[i * 2 + j].coeffs()) {
                                *b = k.join(*b, k.times(weight, t)?);
                            }
                        }
                    }
                    let got = m.apply(outer(&[p, q])?.coeffs())?;
                    c.case(got.coeffs() == brute.as_slice() && f.eval(&[p, q])? == got, || {
                        format!("p={} q={}", p.format_values(), q.format_values())
                    });
                }
            }
        }
        Ok(())
    });
    s.property("outer_factorizes_to_identity", |c| {
        for k in gen::finite_kinds().into_iter().chain([Semiring::Rmax]) {
            let f = vec![gen::index("x", 2), gen::index("y", 2)];
            let product = IndexSet::product_all(&f);
            let table = (0..product.len())
                .map(|i| FreeVector::delta_at(product.clone(), i, k.clone()))
                .collect();
            let m = GeneratorPolyMap::new(f, product.clone(), k.clone(), table)?.factorize();
            c.case(m == Kernel::identity(product, k.clone()), || k.name());
        }
        Ok(())
    });
    s.property("generators_determine_kernel", |c| {
        for _ in 0..RANDOM_CASES / 4 {
            let f = dims_up_to(c, 2, 3);
            let rows = IndexSet::product_all(&f);
            let cols = gen::index("w", c.rng.gen_range(1..=3));
            let m = gen::kernel(c.rng, &rows, &cols, &Semiring::Rmax);
            let images = (0..rows.len())
                .map(|i| m.apply(&FreeVector::delta_at(rows.clone(), i, Semiring::Rmax)))
                .collect::<Result<Vec<_>>>()?;
            let back = GeneratorPolyMap::new(f, cols.clone(), Semiring::Rmax, images)?.factorize();
            c.case(back == m, || format!("{}x{}", rows.len(), cols.len()));
        }
        Ok(())
    });
    s.property("generator_density", |c| {
        for _ in 0..RANDOM_CASES / 2 {
            let arity = c.rng.gen_range(1..=3);
            let f = dims_up_to(c, arity, 3);
            let k = Semiring::Rmax;
            let t = random_tensor(c, &f, &k)?;
            let mut acc = TensorKernel::zero(f.clone(), k.clone())?;
            for (labels, e) in &t.to_pure_sum().terms {
                let deltas = labels
                    .iter()
                    .zip(&f)
                    .map(|(l, ix)| FreeVector::delta(ix.clone(), l, k.clone()))
                    .collect::<Result<Vec<_>>>()?;
                acc = acc.add(&outer(&deltas.iter().collect::<Vec<_>>())?.scale(*e)?)?;
            }
            c.case(acc == t, || t.coeffs().format_values());
        }
        Ok(())
    });
}

/// Splits a right-nested product label into its `n` components.
fn unnest(l: &Label, n: usize) -> Vec<Label> {
    let mut out = Vec::with_capacity(n);
    let mut cur = l.clone();
    for _ in 1..n {
        match cur {
            Label::Pair(a, b) => {
                out.push(*a);
                cur = *b;
            }
            other => {
                out.push(other.clone());
                cur = other;
            }
        }
    }
    out.push(cur);
    out
}

pub(super) fn prop5(s: &mut Suite) {
    let ij = |c: &mut Checker, t: &TensorKernel| -> Result<()> {
        let back = TensorKernel::from_pure_sum(&t.to_pure_sum(), t.factors().to_vec(), t.semiring().clone())?;
        c.case(back == *t, || t.coeffs().format_values());
        Ok(())
    };
    let ji = |c: &mut Checker, sum: &PureSum, f: &[IndexSet], k: &Semiring| -> Result<()> {
        let t = TensorKernel::from_pure_sum(sum, f.to_vec(), k.clone())?;
        c.case(t.to_pure_sum().normalized(k) == sum.normalized(k), || format!("{} terms", sum.terms.len()));
        Ok(())
    };
    let boolean = [gen::index("x", 2), gen::index("y", 2)];
    let k = Semiring::Boolean;
    s.property("ij_identity", |c| {
        for v in all_vectors(&IndexSet::product_all(&boolean), &k)? {
            ij(c, &tensor(&boolean, v)?)?;
        }
        for _ in 0..RANDOM_CASES {
            let f = dims_up_to(c, 2, 4);
            let t = random_tensor(c, &f, &Semiring::Rmax)?;
            ij(c, &t)?;
        }
        Ok(())
    });
    s.property("ji_identity", |c| {
        // every pair of normalized sums, concatenated, covers repeated labels
        let sums: Vec<PureSum> = all_vectors(&IndexSet::product_all(&boolean), &k)?
            .into_iter()
            .map(|v| Ok(tensor(&boolean, v)?.to_pure_sum()))
            .collect::<Result<_>>()?;
        for a in &sums {
            for b in &sums {
                let mut terms = a.terms.clone();
                terms.extend(b.terms.iter().rev().cloned());
                ji(c, &PureSum { terms }, &boolean, &k)?;
            }
        }
        for _ in 0..RANDOM_CASES {
            let f = dims_up_to(c, 2, 4);
            let sum = random_pure_sum(c, &f, &Semiring::Rmax);
            ji(c, &sum, &f, &Semiring::Rmax)?;
        }
        Ok(())
    });
}

pub(super) fn prop2(s: &mut Suite) {
    let k = Semiring::Boolean;
    let cap = s.size(2);
    let mut pairs = Vec::new();
    for a in 1..=cap {
        for b in 1..=cap {
            pairs.push([gen::index("a", a), gen::index("b", b)]);
        }
    }
    s.property("project_inject", |c| {
        for blocks in &pairs {
            for alpha in 0..2 {
                let zero = FreeVector::zero(blocks[1 - alpha].clone(), k.clone());
                for v in all_vectors(&blocks[alpha], &k)? {
                    let u = dsum_inject(blocks, alpha, &v)?;
                    let ok = dsum_project(blocks, alpha, &u)? == v && dsum_project(blocks, 1 - alpha, &u)? == zero;
                    c.case(ok, || format!("alpha={alpha} v={}", v.format_values()));
                }
                let ident = injection_kernel(blocks, alpha, &k)?.then(&projection_kernel(blocks, alpha, &k)?)?;
                c.case(ident == Kernel::identity(blocks[alpha].clone(), k.clone()), || {
                    format!("p_{alpha} i_{alpha} != id")
                });
                let cross = injection_kernel(blocks, alpha, &k)?.then(&projection_kernel(blocks, 1 - alpha, &k)?)?;
                c.case(cross == Kernel::zero(blocks[alpha].clone(), blocks[1 - alpha].clone(), k.clone()), || {
                    format!("p_{} i_{alpha} != 0", 1 - alpha)
                });
            }
        }
        Ok(())
    });
    s.property("product_factorization", |c| {
        for x_dim in 1..=cap {
            let x = gen::index("x", x_dim);
            for blocks in &pairs {
                let projections = [projection_kernel(blocks, 0, &k)?, projection_kernel(blocks, 1, &k)?];
                let f0s = Kernel::enumerate_all(&x, &blocks[0], &k)?;
                let f1s = Kernel::enumerate_all(&x, &blocks[1], &k)?;
                for f0 in &f0s {
                    for f1 in &f1s {
                        let f = map_direct_product(&[f0.clone(), f1.clone()])?;
                        let ok = f.then(&projections[0])? == *f0 && f.then(&projections[1])? == *f1;
                        c.case(ok, || "p_a f != f_a".into());
                    }
                }
                // every map into the product is the product of its components
                let target = IndexSet::disjoint_union(blocks);
                for g in Kernel::enumerate_all(&x, &target, &k)? {
                    let rebuilt = map_direct_product(&[g.then(&projections[0])?, g.then(&projections[1])?])?;
                    c.case(rebuilt == g, || "g != (p_a g)".into());
                }
            }
        }
        Ok(())
    });
    s.property("sum_factorization", |c| {
        for y_dim in 1..=cap {
            let y = gen::index("y", y_dim);
            for blocks in &pairs {
                let injections = [injection_kernel(blocks, 0, &k)?, injection_kernel(blocks, 1, &k)?];
                let u_all = all_vectors(&IndexSet::disjoint_union(blocks), &k)?;
                for f0 in Kernel::enumerate_all(&blocks[0], &y, &k)? {
                    for f1 in Kernel::enumerate_all(&blocks[1], &y, &k)? {
                        let f = map_direct_sum(&[f0.clone(), f1.clone()])?;
                        let ok = injections[0].then(&f)? == f0 && injections[1].then(&f)? == f1;
                        c.case(ok, || "f i_a != f_a".into());
                        for u in &u_all {
                            // f({x_a}) = f_0(x_0) ⊕ f_1(x_1)
                            let expected = f0
                                .apply(&dsum_project(blocks, 0, u)?)?
                                .add(&f1.apply(&dsum_project(blocks, 1, u)?)?)?;
                            c.case(f.apply(u)? == expected, || format!("u={}", u.format_values()));
                        }
                    }
                }
                let source = IndexSet::disjoint_union(blocks);
                for g in Kernel::enumerate_all(&source, &y, &k)? {
                    let rebuilt = map_direct_sum(&[injections[0].then(&g)?, injections[1].then(&g)?])?;
                    c.case(rebuilt == g, || "g != sum of g i_a".into());
                }
            }
        }
        Ok(())
    });
}

/// Shapes and their structural isomorphism.
fn iso_shapes(kind: IsoKind, dims: &[usize]) -> Vec<IndexSet> {
    let names = ["x", "y", "z"];
    let n = if kind == IsoKind::Comm { 2 } else { 3 };
    (0..n).map(|i| gen::index(names[i], dims[i])).collect()
}

fn check_iso(c: &mut Checker, kind: IsoKind, shapes: &[IndexSet], vs: &[FreeVector], ws: &[FreeVector], scalars: &[Elem]) -> Result<()> {
    let iso = structural_iso(kind, shapes)?;
    let dims: Vec<usize> = shapes.iter().map(IndexSet::len).collect();
    for v in vs {
        let f = iso.forward(v)?;
        c.case(iso.backward(&f)? == *v, || format!("{kind:?} {dims:?} backward(forward) at {}", v.format_values()));
    }
    for w in ws {
        c.case(iso.forward(&iso.backward(w)?)? == *w, || {
            format!("{kind:?} {dims:?} forward(backward) at {}", w.format_values())
        });
    }
    for (maps, inputs) in [(&iso, vs), (&iso.inverse(), ws)] {
        for (i, u) in inputs.iter().enumerate() {
            let fu = maps.forward(u)?;
            for v in &inputs[i..] {
                c.case(maps.forward(&u.add(v)?)? == fu.add(&maps.forward(v)?)?, || {
                    format!("{kind:?} {dims:?} not additive at {} {}", u.format_values(), v.format_values())
                });
            }
            for &e in scalars {
                c.case(maps.forward(&u.scale(e)?)? == fu.scale(e)?, || {
                    format!("{kind:?} {dims:?} not homogeneous at {e}")
                });
            }
        }
    }
    Ok(())
}

pub(super) fn theorem3(s: &mut Suite) {
    let kinds = [IsoKind::Comm, IsoKind::Assoc, IsoKind::Distr];
    s.property("round_trip_and_linear", |c| {
        let k = Semiring::Boolean;
        let els = k.elements().unwrap();
        for kind in kinds {
            // smallest shapes: every dimension 1 or 2 with at most 4 coordinates
            for code in 0..8usize {
                let dims: Vec<usize> = (0..3).map(|i| 1 + (code >> i & 1)).collect();
                let shapes = iso_shapes(kind, &dims);
                let iso = structural_iso(kind, &shapes)?;
                if iso.source().len() > 4 || (kind == IsoKind::Comm && code >= 4) {
                    continue;
                }
                let vs = all_vectors(iso.source(), &k)?;
                let ws = all_vectors(iso.target(), &k)?;
                check_iso(c, kind, &shapes, &vs, &ws, &els)?;
            }
        }
        let k = Semiring::Rmax;
        for i in 0..RANDOM_CASES {
            let kind = kinds[i % 3];
            let dims: Vec<usize> = (0..3).map(|_| c.rng.gen_range(1..=3)).collect();
            let shapes = iso_shapes(kind, &dims);
            let iso = structural_iso(kind, &shapes)?;
            let vs: Vec<FreeVector> = (0..2).map(|_| gen::vector(c.rng, iso.source(), &k)).collect();
            let ws: Vec<FreeVector> = (0..2).map(|_| gen::vector(c.rng, iso.target(), &k)).collect();
            let e = gen::elem(c.rng, &k);
            check_iso(c, kind, &shapes, &vs, &ws, &[e])?;
        }
        Ok(())
    });
    s.property("comm_swaps_outer", |c| {
        for _ in 0..RANDOM_CASES / 4 {
            let f = dims_up_to(c, 2, 3);
            let k = Semiring::Rmax;
            let (p, q) = (gen::vector(c.rng, &f[0], &k), gen::vector(c.rng, &f[1], &k));
            let iso = structural_iso(IsoKind::Comm, &f)?;
            let swapped = iso.forward(outer(&[&p, &q])?.coeffs())?;
            c.case(swapped == *outer(&[&q, &p])?.coeffs(), || {
                format!("p={} q={}", p.format_values(), q.format_values())
            });
        }
        Ok(())
    });
    s.property("assoc_reassociates_outer", |c| {
        for _ in 0..RANDOM_CASES / 4 {
            let f = dims_up_to(c, 3, 3);
            let k = Semiring::Rmax;
            let v: Vec<FreeVector> = f.iter().map(|ix| gen::vector(c.rng, ix, &k)).collect();
            let iso = structural_iso(IsoKind::Assoc, &f)?;
            let left = outer(&[outer(&[&v[0], &v[1]])?.coeffs(), &v[2]])?;
            let right = outer(&[&v[0], outer(&[&v[1], &v[2]])?.coeffs()])?;
            c.case(iso.forward(left.coeffs())? == *right.coeffs(), || {
                format!("dims {:?}", f.iter().map(IndexSet::len).collect::<Vec<_>>())
            });
        }
        Ok(())
    });
    s.property("distr_splits_outer", |c| {
        for _ in 0..RANDOM_CASES / 4 {
            let f = dims_up_to(c, 3, 3);
            let k = Semiring::Rmax;
            let (p, q, r) = (
                gen::vector(c.rng, &f[0], &k),
                gen::vector(c.rng, &f[1], &k),
                gen::vector(c.rng, &f[2], &k),
            );
            let blocks = [f[0].clone(), f[1].clone()];
            let pq = dsum_inject(&blocks, 0, &p)?.add(&dsum_inject(&blocks, 1, &q)?)?;
            let iso = structural_iso(IsoKind::Distr, &f)?;
            let got = iso.forward(outer(&[&pq, &r])?.coeffs())?;
            let split = [
                IndexSet::product(&f[0], &f[2]),
                IndexSet::product(&f[1], &f[2]),
            ];
            let expected = dsum_inject(&split, 0, outer(&[&p, &r])?.coeffs())?
                .add(&dsum_inject(&split, 1, outer(&[&q, &r])?.coeffs())?)?;
            c.case(got == expected, || format!("p={} q={} r={}", p.format_values(), q.format_values(), r.format_values()));
        }
        Ok(())
    });
}
