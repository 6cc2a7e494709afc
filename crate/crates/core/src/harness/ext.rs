//! Suites for the extensional tensor engine.

use rand::Rng;

use super::Suite;
use crate::error::Result;
use crate::exttensor::{
    cross_isomorphism_report, reachability_classes, tau_classes, ExtTensor, FinSemimodule, PointSet, PolyMapTable,
    RewriteStep, Rule, TensorModule, TensorSpace, Tuple,
};
use crate::report::{Outcome, ValidationReport};
use crate::semiring::{Elem, Semiring};

const B: Semiring = Semiring::Boolean;

fn cube(k: &Semiring, n: usize) -> FinSemimodule {
    FinSemimodule::full_cube(k.clone(), n).expect("small cube")
}

/// The three-element boolean module `{(0,0), (1,0), (1,1)}`.
fn chain_module() -> FinSemimodule {
    let one = Elem::Idx(1);
    let zero = Elem::Idx(0);
    FinSemimodule::span(B, 2, &[vec![one, zero], vec![one, one]]).expect("span")
}

fn space(factors: Vec<FinSemimodule>) -> Result<TensorSpace> {
    TensorSpace::new(factors)
}

fn cube_space(k: &Semiring, dims: &[usize]) -> Result<TensorSpace> {
    space(dims.iter().map(|&n| cube(k, n)).collect())
}

fn describe(s: &TensorSpace) -> String {
    let sizes: Vec<String> = s.factors().iter().map(|f| f.len().to_string()).collect();
    format!("{} [{}]", s.semiring().name(), sizes.join("x"))
}

fn first_failure(r: &ValidationReport) -> String {
    r.failures()
        .next()
        .map(|c| match &c.outcome {
            Outcome::Fail(w) => format!("{} {}", c.name, w),
            _ => c.name.clone(),
        })
        .unwrap_or_default()
}

fn mask_set(s: &TensorSpace, mask: u64) -> PointSet {
    PointSet::from_mask(s.size(), mask)
}

/// `hull(X)` for every subset `X` of a small space, indexed by mask. Uses
/// `hull(Y ∪ {p}) = hull(hull(Y) ∪ {p})`.
fn all_hulls(s: &TensorSpace) -> Vec<u64> {
    let n = s.size();
    let mut out = vec![0u64; 1 << n];
    out[0] = s.hull(&s.empty_set()).to_mask().expect("small");
    for mask in 1u64..1 << n {
        let top = 63 - mask.leading_zeros() as u64;
        let rest = out[(mask & !(1 << top)) as usize];
        out[mask as usize] = if rest >> top & 1 == 1 {
            rest
        } else {
            s.hull(&mask_set(s, rest | 1 << top)).to_mask().expect("small")
        };
    }
    out
}

pub(super) fn exttensor(s: &mut Suite) {
    s.property("module_examples", |c| {
        let r = cube(&Semiring::Chain(2), 3).validate();
        c.case(r.passed(), || format!("chain(2) cube: {}", first_failure(&r)));
        let (o, l) = (Elem::Idx(0), Elem::Idx(1));
        let broken = FinSemimodule::new(B, 2, vec![vec![o, o], vec![l, o], vec![o, l]])?.validate();
        c.case(matches!(broken.get("add_closed"), Some(Outcome::Fail(_))), || {
            "{0, e1, e2} accepted".into()
        });
        let mut kinds = vec![B, Semiring::Chain(3), Semiring::Chain(4)];
        kinds.extend(super::gen::stored_tables());
        for k in kinds {
            for n in 1..=3 {
                let r = FinSemimodule::diagonal(k.clone(), n)?.validate();
                c.case(r.passed(), || format!("diagonal {} n={n}: {}", k.name(), first_failure(&r)));
            }
        }
        Ok(())
    });
    s.property("fibers", |c| {
        let sp = space(vec![cube(&B, 2), chain_module()])?;
        for a in 0..2 {
            let mut cover = sp.empty_set();
            for id in 0..sp.size() {
                let f = sp.fiber(a, id)?;
                c.case(f.len() == sp.factors()[a].len() && f.contains(&id), || {
                    format!("slot {a} fiber through [{}]", sp.format_point(id))
                });
                let set = PointSet::from_ids(sp.size(), f.iter().copied());
                // the fiber through any of its members is the same set
                let other = sp.fiber(a, f[0])?;
                c.case(other == f, || "fiber depends on the chosen member".into());
                cover.union_with(&set);
            }
            c.case(cover == sp.full_set(), || format!("slot {a} fibers miss points"));
        }
        Ok(())
    });
    s.property("lower_sets", |c| {
        let k3 = cube(&Semiring::Chain(3), 2);
        c.case(k3.lower_set(&k3.zero())? == vec![k3.zero()], || "Low(0) != {0}".into());
        c.case(k3.lower_set(&k3.top())?.len() == k3.len(), || "Low(top) != module".into());
        let b2 = cube(&B, 2);
        let (o, l) = (Elem::Idx(0), Elem::Idx(1));
        c.case(b2.lower_set(&[l, o])? == vec![vec![o, o], vec![l, o]], || "Low((1,0))".into());
        Ok(())
    });
    s.property("bounded_by_top", |c| {
        for sp in [cube_space(&B, &[2, 1])?, space(vec![chain_module(), cube(&B, 1)])?] {
            let top: Vec<Tuple> = sp.factors().iter().map(FinSemimodule::top).collect();
            for t in sp.enumerate_tensors()? {
                let t = ExtTensor::representation(&sp, t)?;
                c.case(t.bounded_by(&top)?, || format!("{} not bounded by top", describe(&sp)));
            }
        }
        Ok(())
    });
    s.property("rewrite_identities", |c| {
        let sp = cube_space(&B, &[2, 2])?;
        let n = sp.size();
        let zero = sp.zero_id();
        for x in 0..n {
            let single = ExtTensor::representation(&sp, PointSet::from_ids(n, [x]))?;
            let with_zero = ExtTensor::representation(&sp, PointSet::from_ids(n, [x, zero]))?;
            c.case(single.tensors_equal(&with_zero)?, || "X != X ∪ {0}".into());
            for k in 0..sp.carrier().len() {
                let a = ExtTensor::representation(&sp, PointSet::from_ids(n, [sp.scale_at(x, k, 0)]))?;
                let b = ExtTensor::representation(&sp, PointSet::from_ids(n, [sp.scale_at(x, k, 1)]))?;
                c.case(a.tensors_equal(&b)?, || format!("k_1(x) != k_2(x) at [{}]", sp.format_point(x)));
            }
            for v in 0..sp.factors()[0].len() {
                // (x ⊕ x', y) against {(x, y), (x', y)}
                let x2 = sp.with_component(x, 0, v);
                let joined = sp.with_component(x, 0, sp.ops(0).join(sp.component(x, 0) as u32, v as u32) as usize);
                let lhs = ExtTensor::representation(&sp, PointSet::from_ids(n, [joined]))?;
                let rhs = ExtTensor::representation(&sp, PointSet::from_ids(n, [x, x2]))?;
                c.case(lhs.tensors_equal(&rhs)?, || format!("fiber sup at [{}]", sp.format_point(x)));
            }
        }
        Ok(())
    });
    s.property("tensor_operations", |c| {
        for sp in [cube_space(&B, &[2, 2])?, cube_space(&Semiring::Chain(3), &[1, 1])?] {
            let one = sp.semiring().one();
            for _ in 0..40 {
                let ids: Vec<usize> = (0..3).map(|_| c.rng.gen_range(0..sp.size())).collect();
                let t = ExtTensor::representation(&sp, PointSet::from_ids(sp.size(), ids))?.canonical();
                c.case(t.tensor_add(&t)? == t && t.tensor_scalar(one, 0)? == t, || {
                    format!("{}: X+X or 1X", describe(&sp))
                });
                for &k in sp.carrier() {
                    c.case(t.tensor_scalar(k, 0)? == t.tensor_scalar(k, 1)?, || {
                        format!("{}: slot dependence at k={k}", describe(&sp))
                    });
                }
            }
        }
        Ok(())
    });
}

/// Spaces for the closure checks, with their point counts.
fn closure_spaces() -> Result<Vec<TensorSpace>> {
    Ok(vec![
        cube_space(&B, &[1, 1])?,
        space(vec![cube(&B, 1), chain_module()])?,
        cube_space(&B, &[2, 1])?,
        cube_space(&B, &[1, 1, 1])?,
        space(vec![chain_module(), chain_module()])?,
        cube_space(&Semiring::Chain(3), &[1, 1])?,
    ])
}

pub(super) fn closure(s: &mut Suite) {
    s.property("closure_operator", |c| {
        for sp in &closure_spaces()? {
            let n = sp.size();
            let hulls: Vec<PointSet> = (0..1u64 << n).map(|m| sp.hull(&mask_set(sp, m))).collect();
            for (m, h) in hulls.iter().enumerate() {
                let x = mask_set(sp, m as u64);
                c.case(x.is_subset(h), || format!("{}: not extensive at mask {m:#x}", describe(sp)));
                c.case(sp.hull(h) == *h, || format!("{}: not idempotent at mask {m:#x}", describe(sp)));
                c.case(sp.is_tensor(h), || format!("{}: hull of {m:#x} is not a tensor", describe(sp)));
                // every superset Y of X, as X | sub for sub ⊆ complement
                let comp = !(m as u64) & ((1u64 << n) - 1);
                let mut sub = comp;
                loop {
                    let y = m as u64 | sub;
                    c.case(h.is_subset(&hulls[y as usize]), || {
                        format!("{}: not monotone at {m:#x} ⊆ {y:#x}", describe(sp))
                    });
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & comp;
                }
            }
        }
        Ok(())
    });
    s.property("closure_minimal", |c| {
        for sp in closure_spaces()?.iter().filter(|sp| sp.size() <= 6) {
            let n = sp.size();
            // the intersection of all canonical supersets, by brute force
            let canonical: Vec<u64> = (0..1u64 << n).filter(|&m| sp.is_tensor(&mask_set(sp, m))).collect();
            for m in 0..1u64 << n {
                let meet = canonical
                    .iter()
                    .filter(|&&t| t & m == m)
                    .fold((1u64 << n) - 1, |acc, &t| acc & t);
                c.case(sp.hull(&mask_set(sp, m)).to_mask() == Some(meet), || {
                    format!("{}: hull({m:#x}) is not the meet {meet:#x}", describe(sp))
                });
            }
        }
        Ok(())
    });
    s.property("rule_order_independent", |c| {
        let orders = [
            [Rule::Downward, Rule::FiberSup, Rule::ScalarTransfer],
            [Rule::ScalarTransfer, Rule::FiberSup, Rule::Downward],
            [Rule::FiberSup, Rule::ScalarTransfer, Rule::Downward],
        ];
        for sp in &closure_spaces()? {
            for m in 0..1u64 << sp.size() {
                let x = mask_set(sp, m);
                let first = sp.hull_with_order(&x, &orders[0]);
                for o in &orders[1..] {
                    c.case(sp.hull_with_order(&x, o) == first, || format!("{}: order {o:?} at {m:#x}", describe(sp)));
                }
            }
        }
        Ok(())
    });
}

pub(super) fn prop1(s: &mut Suite) {
    s.property("product_is_semimodule", |c| {
        let c3 = Semiring::Chain(3);
        let families: Vec<Vec<FinSemimodule>> = vec![
            vec![cube(&B, 1), cube(&B, 2), chain_module(), FinSemimodule::diagonal(B, 2)?],
            vec![cube(&c3, 1), FinSemimodule::diagonal(c3.clone(), 2)?],
        ];
        for fam in &families {
            for a in fam {
                for b in fam {
                    let p = FinSemimodule::product(a, b)?;
                    let r = p.validate();
                    c.case(r.passed(), || first_failure(&r));
                    // every subset has its sup in the product
                    if p.len() <= 12 {
                        for m in 0u32..1 << p.len() {
                            let sup = (0..p.len())
                                .filter(|i| m >> i & 1 == 1)
                                .fold(p.zero(), |acc, i| p.join(&acc, &p.elements()[i]));
                            c.case(p.contains(&sup), || format!("sup of subset {m:#x} missing"));
                        }
                    }
                }
            }
        }
        Ok(())
    });
}

pub(super) fn prop3(s: &mut Suite) {
    s.property("rewrite_preserves_tau", |c| {
        let spaces = [
            cube_space(&B, &[1, 1])?,
            cube_space(&B, &[2, 1])?,
            cube_space(&B, &[2, 2])?,
            space(vec![chain_module(), cube(&B, 1)])?,
            cube_space(&B, &[1, 1, 1])?,
        ];
        let mut done = 0;
        while done < 500 {
            let sp = &spaces[c.rng.gen_range(0..spaces.len())];
            let count = c.rng.gen_range(1..=4);
            let set = PointSet::from_ids(sp.size(), (0..count).map(|_| c.rng.gen_range(0..sp.size())));
            let Some(step) = crate::exttensor::rewrite::random_step(sp, &set, c.rng)? else {
                continue;
            };
            done += 1;
            let next = step.apply(sp, &set).expect("generated steps apply");
            c.case(sp.hull(&next) == sp.hull(&set), || {
                format!("{}: {} on {:?}", describe(sp), step_name(&step), set.iter().collect::<Vec<_>>())
            });
        }
        Ok(())
    });
    s.property("reachability_is_tau_equality", |c| {
        let sp = cube_space(&B, &[1, 1])?;
        let reach = reachability_classes(&sp)?;
        let tau = tau_classes(&sp)?;
        for (m, (r, t)) in reach.iter().zip(&tau).enumerate() {
            c.case(r == t, || format!("mask {m:#x}: reachable class {r:#x}, tau class {t:#x}"));
        }
        Ok(())
    });
}

fn step_name(step: &RewriteStep) -> String {
    match step {
        RewriteStep::Transfer { x, k, from, to } => format!("transfer x={x} k={k} {from}->{to}"),
        RewriteStep::Split { point, slot, parts } => format!("split point={point} slot={slot} parts={parts:?}"),
    }
}

pub(super) fn prop4(s: &mut Suite) {
    s.property("tensor_module_laws", |c| {
        let c3 = Semiring::Chain(3);
        let spaces = vec![
            cube_space(&B, &[1, 1])?,
            cube_space(&B, &[2, 1])?,
            cube_space(&B, &[2, 2])?,
            space(vec![chain_module(), cube(&B, 1)])?,
            cube_space(&c3, &[1, 1])?,
            cube_space(&c3, &[2, 1])?,
        ];
        for sp in &spaces {
            let r = TensorModule::new(sp)?.validate();
            c.case(r.passed(), || format!("{}: {}", describe(sp), first_failure(&r)));
        }
        Ok(())
    });
}

/// Every polylinear-extension table on boolean cubes of the given shapes,
/// into `K^1` and `K^2`.
fn cube_maps(shapes: &[Vec<usize>]) -> Result<Vec<PolyMapTable>> {
    let mut out = Vec::new();
    for dims in shapes {
        let sp = cube_space(&B, dims)?;
        let units: usize = dims.iter().product();
        for w_dim in 1..=2 {
            let w = cube(&B, w_dim);
            let values = w.elements().to_vec();
            let total = values.len().pow(units as u32);
            for code in 0..total {
                let mut rest = code;
                let basis: Vec<Tuple> = (0..units)
                    .map(|_| {
                        let v = values[rest % values.len()].clone();
                        rest /= values.len();
                        v
                    })
                    .collect();
                out.push(PolyMapTable::from_basis_values(&sp, w.clone(), &basis)?);
            }
        }
    }
    Ok(out)
}

fn cube_shapes(cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 1..=cap {
        for b in 1..=cap {
            out.push(vec![a, b]);
        }
    }
    out
}

pub(super) fn theorem1(s: &mut Suite) {
    let shapes = cube_shapes(s.size(2));
    s.property("factorization_linear_unique", |c| {
        let maps = cube_maps(&shapes)?;
        let mut last_space: Option<(TensorSpace, TensorModule)> = None;
        for f in &maps {
            let r = f.validate();
            c.case(r.passed(), || format!("table not polylinear: {}", first_failure(&r)));
            if last_space.as_ref().is_none_or(|(sp, _)| sp != f.space()) {
                last_space = Some((f.space().clone(), TensorModule::new(f.space())?));
            }
            let (sp, module) = last_space.as_ref().unwrap();
            let g = module.factorize_table(f)?;
            let cod = f.cod_ops();
            let n = module.len();
            let mut linear = None;
            'lin: for a in 0..n {
                for b in a..n {
                    if g[module.add(a, b)] != cod.join(g[a], g[b]) {
                        linear = Some(format!("sum of T{a} and T{b}"));
                        break 'lin;
                    }
                }
                for k in 0..sp.carrier().len() {
                    if g[module.scale(k, a)] != cod.scale(k, g[a]) {
                        linear = Some(format!("scalar {k} on T{a}"));
                        break 'lin;
                    }
                }
            }
            c.case(g[module.zero()] == cod.zero && linear.is_none(), || {
                format!("{}: {}", describe(sp), linear.clone().unwrap_or("g(0) != 0".into()))
            });
            for x in 0..sp.size() {
                c.case(g[module.pi(x)] == f.eval_id(x), || {
                    format!("{}: f(pi(x)) != f(x) at [{}]", describe(sp), sp.format_point(x))
                });
            }
            let all = module.linear_factorizations(f, 2)?;
            c.case(all == vec![g.clone()], || {
                format!("{}: {} linear factorizations", describe(sp), all.len())
            });
        }
        Ok(())
    });
    s.property("factorize_ext_examples", |c| {
        for f in cube_maps(&shapes[..1])? {
            let sp = f.space();
            c.case(f.factorize_ext(&sp.zero_tensor())? == f.codomain().zero(), || "f(0) != 0".into());
            for x in 0..sp.size() {
                let pi = sp.canonical_pi(&sp.point(x))?;
                c.case(f.factorize_ext(&pi)? == f.eval(&sp.point(x))?, || format!("pi at [{}]", sp.format_point(x)));
            }
        }
        Ok(())
    });
}

pub(super) fn theorem2(s: &mut Suite) {
    let cap = s.size(2);
    s.property("free_extensional_isomorphism", |c| {
        let mut spaces: Vec<TensorSpace> = cube_shapes(cap)
            .iter()
            .map(|d| cube_space(&B, d))
            .collect::<Result<_>>()?;
        spaces.push(cube_space(&Semiring::Chain(3), &[1, 1])?);
        for sp in &spaces {
            let r = cross_isomorphism_report(sp)?;
            c.case(r.passed(), || format!("{}: {}", describe(sp), first_failure(&r)));
        }
        Ok(())
    });
}

pub(super) fn lemma1(s: &mut Suite) {
    let shapes = cube_shapes(s.size(2));
    s.property("preimage_of_lower_is_tensor", |c| {
        for f in cube_maps(&shapes)? {
            for w in f.codomain().elements() {
                let pre = f.preimage_of_lower(w)?;
                c.case(f.space().is_tensor(&pre), || {
                    format!("{}: w=({})", describe(f.space()), f.codomain().format_tuple(w))
                });
            }
        }
        Ok(())
    });
}

pub(super) fn lemma2(s: &mut Suite) {
    let shapes = cube_shapes(s.size(2));
    s.property("sup_over_hull", |c| {
        let maps = cube_maps(&shapes)?;
        let mut hulls: Option<(TensorSpace, Vec<u64>)> = None;
        for f in &maps {
            let sp = f.space();
            if hulls.as_ref().is_none_or(|(h, _)| h != sp) {
                hulls = Some((sp.clone(), all_hulls(sp)));
            }
            let h = &hulls.as_ref().unwrap().1;
            let cod = f.cod_ops();
            // sup[X] = sup[X without its top point] ⊕ f(top point)
            let mut sup = vec![cod.zero; h.len()];
            for m in 1..h.len() {
                let top = 63 - (m as u64).leading_zeros() as usize;
                sup[m] = cod.join(sup[m & !(1 << top)], f.eval_id(top));
            }
            for (m, &hm) in h.iter().enumerate() {
                c.case(sup[m] == sup[hm as usize], || {
                    format!("{}: mask {m:#x}", describe(sp))
                });
            }
        }
        Ok(())
    });
}
