//! Suites for semirings, free semimodules and kernels.

use rand::Rng;

use super::gen;
use super::{Checker, Suite};
use crate::error::Result;
use crate::freemod::{functional_apply, FreeVector, IndexSet};
use crate::kernelop::{certify, extract, Kernel, TableMap};
use crate::report::Outcome;
use crate::semiring::{Elem, Semiring};

const REAL_CASES: usize = 300;

fn first_failure(r: &crate::report::ValidationReport) -> String {
    r.failures()
        .next()
        .map(|c| match &c.outcome {
            Outcome::Fail(w) => format!("{} {}", c.name, w),
            _ => c.name.clone(),
        })
        .unwrap_or_default()
}

/// The finite targets and the real targets of a suite.
fn targets(s: &Suite, finite_default: Vec<Semiring>) -> (Vec<Semiring>, Vec<Semiring>) {
    match &s.cfg.semiring {
        Some(k) if k.is_finite() => (vec![k.clone()], vec![]),
        Some(k) => (vec![], vec![k.clone()]),
        None => (finite_default, vec![Semiring::Rmax, Semiring::RmaxTop, Semiring::Rmin]),
    }
}

/// Sample elements: the whole carrier, or random draws for the reals.
fn samples(c: &mut Checker, k: &Semiring, n: usize) -> Vec<Elem> {
    k.elements()
        .unwrap_or_else(|| (0..n).map(|_| gen::elem(c.rng, k)).collect())
}

pub(super) fn semiring(s: &mut Suite) {
    let mut finite_default = vec![Semiring::Boolean];
    finite_default.extend((2..=5).map(Semiring::Chain));
    finite_default.extend(gen::stored_tables());
    let (finite, real) = targets(s, finite_default);
    let all: Vec<Semiring> = finite.iter().chain(&real).cloned().collect();

    s.property("axioms_exhaustive", |c| {
        for k in &finite {
            let r = k.validate();
            c.case(r.passed(), || format!("{}: {}", k.name(), first_failure(&r)));
        }
        Ok(())
    });
    if s.cfg.semiring.is_none() {
        s.property("broken_tables_rejected", |c| {
            for (k, axiom) in [
                (gen::broken_idempotent(), "add_idempotent"),
                (gen::broken_distributive(), "left_distributive"),
            ] {
                let r = k.validate();
                c.case(matches!(r.get(axiom), Some(Outcome::Fail(_))), || {
                    format!("{} passed {axiom}", k.name())
                });
            }
            Ok(())
        });
    }
    s.property("axioms_sampled", |c| {
        for k in &real {
            for _ in 0..REAL_CASES {
                let (a, b, d) = (gen::elem(c.rng, k), gen::elem(c.rng, k), gen::elem(c.rng, k));
                let ok = k.join(a, b) == k.join(b, a)
                    && k.join(k.join(a, b), d) == k.join(a, k.join(b, d))
                    && k.join(a, a) == a
                    && k.times(k.times(a, b)?, d)? == k.times(a, k.times(b, d)?)?
                    && k.times(a, k.join(b, d))? == k.join(k.times(a, b)?, k.times(a, d)?)
                    && k.times(k.join(b, d), a)? == k.join(k.times(b, a)?, k.times(d, a)?);
                c.case(ok, || format!("{}: a={a} b={b} c={d}", k.name()));
            }
        }
        Ok(())
    });
    s.property("order_is_partial", |c| {
        for k in &all {
            let els = samples(c, k, 12);
            for &a in &els {
                c.case(k.leq(a, a)?, || format!("{}: not reflexive at {a}", k.name()));
                for &b in &els {
                    let sup2 = k.sup(&[a, b])?;
                    c.case(k.add(a, b)? == sup2, || format!("{}: a+b != sup at {a},{b}", k.name()));
                    if k.leq(a, b)? && k.leq(b, a)? {
                        c.case(a == b, || format!("{}: not antisymmetric at {a},{b}", k.name()));
                    }
                    for &d in &els {
                        if k.leq(a, b)? && k.leq(b, d)? {
                            c.case(k.leq(a, d)?, || format!("{}: not transitive at {a},{b},{d}", k.name()));
                        }
                    }
                }
            }
        }
        Ok(())
    });
    s.property("sup_of_union", |c| {
        for k in &all {
            let subsets: Vec<Vec<Elem>> = match k.elements() {
                Some(els) if els.len() <= 5 => (0u32..1 << els.len())
                    .map(|m| (0..els.len()).filter(|i| m >> i & 1 == 1).map(|i| els[i]).collect())
                    .collect(),
                _ => (0..40)
                    .map(|_| {
                        let n = c.rng.gen_range(0..4);
                        (0..n).map(|_| gen::elem(c.rng, k)).collect()
                    })
                    .collect(),
            };
            for a in &subsets {
                for b in &subsets {
                    let union: Vec<Elem> = a.iter().chain(b).copied().collect();
                    let (sa, sb) = (k.sup(a)?, k.sup(b)?);
                    c.case(k.sup(&union)? == k.join(sa, sb), || {
                        format!("{}: sup(S∪T) at S={a:?} T={b:?}", k.name())
                    });
                    if b.iter().all(|e| a.contains(e)) {
                        c.case(k.leq(sb, sa)?, || format!("{}: sup not monotone", k.name()));
                    }
                }
            }
        }
        Ok(())
    });
    s.property("complete_top", |c| {
        for k in &all {
            let Ok(t) = k.complete_top() else {
                continue;
            };
            let top = t.top();
            c.case(top.is_some(), || format!("{} completion has no top", k.name()));
            if t.is_finite() {
                let r = t.validate();
                c.case(r.passed(), || format!("{}: {}", t.name(), first_failure(&r)));
            }
            if let Some(top) = top {
                for e in samples(c, &t, 12) {
                    c.case(t.leq(e, top)?, || format!("{}: {e} above top", t.name()));
                }
            }
        }
        Ok(())
    });
}


/// All vectors for finite kinds, or `count` random ones.
fn vectors(c: &mut Checker, x: &IndexSet, k: &Semiring, count: usize) -> Result<Vec<FreeVector>> {
    if k.is_finite() {
        FreeVector::enumerate_all(x, k)
    } else {
        Ok((0..count).map(|_| gen::vector(c.rng, x, k)).collect())
    }
}

pub(super) fn freemod(s: &mut Suite) {
    let (finite, real) = targets(s, gen::finite_kinds());
    let n_max = s.size(3);
    let mut cases: Vec<(Semiring, IndexSet)> = Vec::new();
    for k in &finite {
        for n in 1..=n_max {
            cases.push((k.clone(), gen::index("x", n)));
        }
    }
    for k in &real {
        cases.push((k.clone(), gen::index("x", 4)));
    }
    let scalars = |c: &mut Checker, k: &Semiring| samples(c, k, 6);

    s.property("module_laws", |c| {
        for (k, x) in &cases {
            let vs = vectors(c, x, k, 12)?;
            let ks = scalars(c, k);
            for u in &vs {
                c.case(u.add(u)? == *u, || format!("idempotent at {}", u.format_values()));
                for v in &vs {
                    c.case(u.add(v)? == v.add(u)?, || "commutative".into());
                    for w in &vs {
                        c.case(u.add(v)?.add(w)? == u.add(&v.add(w)?)?, || {
                            format!("associative at {} {} {}", u.format_values(), v.format_values(), w.format_values())
                        });
                    }
                    for &a in &ks {
                        c.case(u.add(v)?.scale(a)? == u.scale(a)?.add(&v.scale(a)?)?, || {
                            format!("k(u+v) at k={a}")
                        });
                    }
                }
                for &a in &ks {
                    for &b in &ks {
                        c.case(u.scale(b)?.scale(a)? == u.scale(k.times(a, b)?)?, || {
                            format!("(ab)u at a={a} b={b}")
                        });
                        c.case(u.scale(k.join(a, b))? == u.scale(a)?.add(&u.scale(b)?)?, || {
                            format!("(a+b)u at a={a} b={b}")
                        });
                    }
                }
            }
        }
        Ok(())
    });
    s.property("functional_linear", |c| {
        for (k, x) in &cases {
            let vs = vectors(c, x, k, 10)?;
            let ks = scalars(c, k);
            let zero = FreeVector::zero(x.clone(), k.clone());
            for a in &vs {
                c.case(functional_apply(a, &zero)? == k.zero(), || "F(0) != 0".into());
                for p in &vs {
                    let fp = functional_apply(a, p)?;
                    for q in &vs {
                        c.case(functional_apply(a, &p.add(q)?)? == k.join(fp, functional_apply(a, q)?), || {
                            format!("F(p+q) at a={} p={} q={}", a.format_values(), p.format_values(), q.format_values())
                        });
                    }
                    for &e in &ks {
                        c.case(functional_apply(a, &p.scale(e)?)? == k.times(e, fp)?, || {
                            format!("F(kp) at k={e}")
                        });
                    }
                }
            }
        }
        Ok(())
    });
    s.property("functional_on_delta", |c| {
        for (k, x) in &cases {
            for a in vectors(c, x, k, 20)? {
                for i in 0..x.len() {
                    let d = FreeVector::delta_at(x.clone(), i, k.clone());
                    c.case(functional_apply(&a, &d)? == a.at(i), || {
                        format!("F(delta_{}) at a={}", x.label(i), a.format_values())
                    });
                }
            }
        }
        Ok(())
    });
    s.property("generator_expansion", |c| {
        for (k, x) in &cases {
            for v in vectors(c, x, k, 50)? {
                let terms = (0..x.len())
                    .map(|i| FreeVector::delta_at(x.clone(), i, k.clone()).scale(v.at(i)))
                    .collect::<Result<Vec<_>>>()?;
                c.case(FreeVector::sup(x, k, &terms)? == v, || v.format_values());
            }
        }
        Ok(())
    });
}

/// All kernels when the family is small, otherwise random ones.
fn kernels(c: &mut Checker, x: &IndexSet, y: &IndexSet, k: &Semiring, count: usize) -> Result<Vec<Kernel>> {
    let total = k
        .size()
        .and_then(|n| n.checked_pow((x.len() * y.len()) as u32));
    match total {
        Some(t) if t <= 512 => Kernel::enumerate_all(x, y, k),
        _ => Ok((0..count).map(|_| gen::kernel(c.rng, x, y, k)).collect()),
    }
}

pub(super) fn kernelop(s: &mut Suite) {
    let (finite, real) = targets(s, gen::finite_kinds());
    let n_max = s.size(3);
    let mut shapes: Vec<(Semiring, IndexSet, IndexSet)> = Vec::new();
    for k in finite.iter().chain(&real) {
        for n in 1..=n_max {
            for m in 1..=n_max {
                shapes.push((k.clone(), gen::index("x", n), gen::index("y", m)));
            }
        }
    }

    s.property("apply_linear", |c| {
        for (k, x, y) in &shapes {
            let ms = kernels(c, x, y, k, 40)?;
            let vs = vectors(c, x, k, 8)?;
            let ks = samples(c, k, 4);
            for m in &ms {
                c.case(m.apply(&FreeVector::zero(x.clone(), k.clone()))?.is_zero(), || "M(0) != 0".into());
                for p in &vs {
                    let mp = m.apply(p)?;
                    for q in &vs {
                        c.case(m.apply(&p.add(q)?)? == mp.add(&m.apply(q)?)?, || {
                            format!("M(p+q) at p={} q={}", p.format_values(), q.format_values())
                        });
                    }
                    for &e in &ks {
                        c.case(m.apply(&p.scale(e)?)? == mp.scale(e)?, || format!("M(kp) at k={e}"));
                    }
                }
            }
        }
        Ok(())
    });
    s.property("extract_round_trip", |c| {
        for (k, x, y) in &shapes {
            for m in kernels(c, x, y, k, 60)? {
                let back = extract(x, y, k, |p| m.apply(p))?;
                c.case(back == m, || format!("{}x{} kernel over {}", x.len(), y.len(), k.name()));
            }
        }
        Ok(())
    });
    s.property("identity_is_unit", |c| {
        for (k, x, y) in &shapes {
            for m in kernels(c, x, y, k, 30)? {
                let ok = Kernel::identity(x.clone(), k.clone()).then(&m)? == m
                    && m.then(&Kernel::identity(y.clone(), k.clone()))? == m;
                c.case(ok, || format!("{}x{} over {}", x.len(), y.len(), k.name()));
            }
        }
        Ok(())
    });
    let ks: Vec<Semiring> = finite.iter().chain(&real).cloned().collect();
    s.property("compose_associative", |c| {
        for k in &ks {
            for _ in 0..REAL_CASES {
                let d: Vec<usize> = (0..4).map(|_| c.rng.gen_range(1..=3)).collect();
                let ix: Vec<IndexSet> = d.iter().enumerate().map(|(i, &n)| gen::index(&format!("i{i}_"), n)).collect();
                let m = gen::kernel(c.rng, &ix[0], &ix[1], k);
                let n = gen::kernel(c.rng, &ix[1], &ix[2], k);
                let p = gen::kernel(c.rng, &ix[2], &ix[3], k);
                c.case(m.then(&n)?.then(&p)? == m.then(&n.then(&p)?)?, || format!("dims {d:?} over {}", k.name()));
            }
        }
        Ok(())
    });
    s.property("kron_functorial", |c| {
        for k in &ks {
            for _ in 0..REAL_CASES / 3 {
                let d: Vec<usize> = (0..6).map(|_| c.rng.gen_range(1..=2)).collect();
                let ix: Vec<IndexSet> = d.iter().enumerate().map(|(i, &n)| gen::index(&format!("i{i}_"), n)).collect();
                let m = gen::kernel(c.rng, &ix[0], &ix[1], k);
                let m2 = gen::kernel(c.rng, &ix[1], &ix[2], k);
                let n = gen::kernel(c.rng, &ix[3], &ix[4], k);
                let n2 = gen::kernel(c.rng, &ix[4], &ix[5], k);
                let lhs = m.then(&m2)?.kron(&n.then(&n2)?)?;
                let rhs = m.kron(&n)?.then(&m2.kron(&n2)?)?;
                c.case(lhs == rhs, || format!("dims {d:?} over {}", k.name()));
            }
        }
        Ok(())
    });
    nuclear_property(s, &finite, &real, n_max.min(2));
}

fn nuclear_property(s: &mut Suite, finite: &[Semiring], real: &[Semiring], exhaustive_max: usize) {
    s.property("nuclear_recompose", |c| {
        let check = |c: &mut Checker, m: &Kernel| -> Result<()> {
            let terms = m
                .nuclear_decompose()
                .iter()
                .map(|t| t.to_kernel())
                .collect::<Result<Vec<_>>>()?;
            let back = Kernel::sup(m.rows(), m.cols(), m.semiring(), &terms)?;
            c.case(back == *m, || {
                format!("{}x{} over {}", m.rows().len(), m.cols().len(), m.semiring().name())
            });
            Ok(())
        };
        for k in finite {
            for n in 1..=exhaustive_max {
                for m in 1..=exhaustive_max {
                    for kern in Kernel::enumerate_all(&gen::index("x", n), &gen::index("y", m), k)? {
                        check(c, &kern)?;
                    }
                }
            }
        }
        for k in real {
            for _ in 0..1000 {
                let (n, m) = (c.rng.gen_range(1..=5), c.rng.gen_range(1..=5));
                let kern = gen::kernel(c.rng, &gen::index("x", n), &gen::index("y", m), k);
                check(c, &kern)?;
            }
        }
        Ok(())
    });
}

pub(super) fn prop6(s: &mut Suite) {
    nuclear_property(s, &[Semiring::Boolean], &[Semiring::Rmax], 2);
    s.property("rank_one_entries", |c| {
        for _ in 0..REAL_CASES {
            let (n, m) = (c.rng.gen_range(1..=4), c.rng.gen_range(1..=4));
            let (x, y) = (gen::index("x", n), gen::index("y", m));
            let a = gen::vector(c.rng, &x, &Semiring::Rmax);
            let v = gen::vector(c.rng, &y, &Semiring::Rmax);
            let r = Kernel::rank_one(&a, &v)?;
            let p = gen::vector(c.rng, &x, &Semiring::Rmax);
            // φ ↦ a(φ) ⊙ v
            let expected = v.scale(functional_apply(&a, &p)?)?;
            c.case(r.apply(&p)? == expected, || {
                format!("a={} v={} p={}", a.format_values(), v.format_values(), p.format_values())
            });
        }
        Ok(())
    });
}

/// Every map ℬ(X, K) → ℬ(Y, K) as a table, in mixed-radix order.
fn all_table_maps(x: &IndexSet, y: &IndexSet, k: &Semiring, mut visit: impl FnMut(TableMap) -> Result<()>) -> Result<()> {
    let inputs = FreeVector::enumerate_all(x, k)?;
    let outputs = FreeVector::enumerate_all(y, k)?;
    let mut digits = vec![0usize; inputs.len()];
    loop {
        let pairs = inputs
            .iter()
            .zip(&digits)
            .map(|(i, &d)| (i.clone(), outputs[d].clone()));
        visit(TableMap::new(x.clone(), y.clone(), k.clone(), pairs)?)?;
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < outputs.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

pub(super) fn kernel_theorem(s: &mut Suite) {
    let cap = s.size(2);
    let mut shapes: Vec<(Semiring, usize, usize)> = Vec::new();
    for n in 1..=cap {
        for m in 1..=2 {
            shapes.push((Semiring::Boolean, n, m));
        }
    }
    for n in 1..=cap {
        // chain(3) at |X| = 2 runs |Y| = 1 only: a map into K^2 is a pair
        // of maps into K, each linear iff the pair is.
        let m_max = if n == 1 { 2 } else { 1 };
        for m in 1..=m_max {
            shapes.push((Semiring::Chain(3), n, m));
        }
    }
    let mut certified_counts = Vec::new();
    s.property("certified_maps_reproduced", |c| {
        for (k, n, m) in &shapes {
            let (x, y) = (gen::index("x", *n), gen::index("y", *m));
            let inputs = FreeVector::enumerate_all(&x, k)?;
            let mut certified = 0usize;
            all_table_maps(&x, &y, k, |f| {
                if f.linearity_violation()?.is_none() {
                    certified += 1;
                    let kern = extract(&x, &y, k, |p| f.eval(p))?;
                    let w = certify(&kern, |p| f.eval(p), &inputs)?;
                    c.case(w.is_none(), || {
                        format!("{} |X|={n} |Y|={m} at {}", k.name(), w.as_ref().unwrap().format_values())
                    });
                }
                Ok(())
            })?;
            certified_counts.push((k.clone(), *n, *m, certified));
        }
        Ok(())
    });
    s.property("linear_maps_match_kernels", |c| {
        for (k, n, m, count) in &certified_counts {
            let kernels = k.size().unwrap().pow((n * m) as u32);
            c.case(*count == kernels, || {
                format!("{} |X|={n} |Y|={m}: {count} linear maps, {kernels} kernels", k.name())
            });
        }
        Ok(())
    });
    s.property("nonlinear_maps_refuted", |c| {
        // a map that fails certification differs from its extracted kernel
        let (k, x, y) = (Semiring::Boolean, gen::index("x", cap), gen::index("y", 1));
        let inputs = FreeVector::enumerate_all(&x, &k)?;
        all_table_maps(&x, &y, &k, |f| {
            if f.linearity_violation()?.is_some() {
                let kern = extract(&x, &y, &k, |p| f.eval(p))?;
                let w = certify(&kern, |p| f.eval(p), &inputs)?;
                c.case(w.is_some(), || "nonlinear map reproduced by its kernel".into());
            }
            Ok(())
        })
    });
}
