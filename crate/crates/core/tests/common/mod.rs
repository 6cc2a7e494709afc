//! Brute-force oracle for the extensional engine, written against the
//! definitions and sharing no code with the library.
//!
//! Scalars are chain levels `0..n` with ⊕ = max and ⊙ = min. A factor is an
//! explicit list of level tuples; a product point is one element index per
//! factor.

#![allow(dead_code)]

pub mod golden;

use std::collections::BTreeSet;

use idem::exttensor::{FinSemimodule, PointSet, TensorSpace};
use idem::semiring::{Elem, Semiring};

#[derive(Debug, Clone)]
pub struct Factor {
    pub elems: Vec<Vec<u8>>,
}

impl Factor {
    /// All of `{0..levels}^dim`.
    pub fn cube(levels: u8, dim: usize) -> Self {
        let mut elems = vec![vec![]];
        for _ in 0..dim {
            elems = elems
                .into_iter()
                .flat_map(|t| {
                    (0..levels).map(move |v| {
                        let mut t = t.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        Self { elems }
    }

    pub fn explicit(elems: &[&[u8]]) -> Self {
        Self { elems: elems.iter().map(|t| t.to_vec()).collect() }
    }

    fn find(&self, t: &[u8]) -> usize {
        self.elems
            .iter()
            .position(|e| e == t)
            .unwrap_or_else(|| panic!("{t:?} is not an element"))
    }

    fn zero(&self) -> usize {
        self.find(&vec![0; self.elems[0].len()])
    }

    fn scale(&self, k: u8, i: usize) -> usize {
        let t: Vec<u8> = self.elems[i].iter().map(|&v| v.min(k)).collect();
        self.find(&t)
    }

    fn join(&self, i: usize, j: usize) -> usize {
        let t: Vec<u8> = self.elems[i].iter().zip(&self.elems[j]).map(|(&a, &b)| a.max(b)).collect();
        self.find(&t)
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        self.elems[i].iter().zip(&self.elems[j]).all(|(a, b)| a <= b)
    }
}

/// A finite product of factors over the chain with `levels` elements.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub levels: u8,
    pub factors: Vec<Factor>,
}

pub type Point = Vec<usize>;

impl Oracle {
    pub fn new(levels: u8, factors: Vec<Factor>) -> Self {
        Self { levels, factors }
    }

    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![vec![]];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|p: Point| {
                    (0..f.elems.len()).map(move |i| {
                        let mut p = p.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn zero(&self) -> Point {
        self.factors.iter().map(Factor::zero).collect()
    }

    fn scale_at(&self, p: &Point, k: u8, a: usize) -> Point {
        let mut q = p.clone();
        q[a] = self.factors[a].scale(k, p[a]);
        q
    }

    /// The defining closure conditions of a complete representation.
    pub fn is_tensor(&self, set: &BTreeSet<Point>) -> bool {
        if !set.contains(&self.zero()) {
            return false;
        }
        let pts = self.points();
        let m = self.factors.len();
        // scalar transfer between slots, every k including 0
        for k in 0..self.levels {
            for x in &pts {
                let images: Vec<Point> = (0..m).map(|a| self.scale_at(x, k, a)).collect();
                let hit = images.iter().any(|p| set.contains(p));
                if hit && !images.iter().all(|p| set.contains(p)) {
                    return false;
                }
            }
        }
        for a in 0..m {
            for x in &pts {
                // the fiber through x free in slot a
                let members: Vec<usize> = (0..self.factors[a].elems.len())
                    .filter(|&v| {
                        let mut q = x.clone();
                        q[a] = v;
                        set.contains(&q)
                    })
                    .collect();
                if let Some(&first) = members.first() {
                    let sup = members.iter().fold(first, |acc, &v| self.factors[a].join(acc, v));
                    let mut q = x.clone();
                    q[a] = sup;
                    if !set.contains(&q) {
                        return false;
                    }
                }
            }
        }
        for p in set {
            for a in 0..m {
                for u in 0..self.factors[a].elems.len() {
                    if self.factors[a].leq(u, p[a]) {
                        let mut q = p.clone();
                        q[a] = u;
                        if !set.contains(&q) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Every tensor, by testing all subsets. Needs `|V| ≤ 16`.
    pub fn all_tensors(&self) -> Vec<BTreeSet<Point>> {
        let pts = self.points();
        assert!(pts.len() <= 16, "oracle enumerates 2^|V| subsets");
        (0u32..1 << pts.len())
            .map(|mask| subset(&pts, mask as u64))
            .filter(|s| self.is_tensor(s))
            .collect()
    }

    /// The intersection of every tensor containing `seed`.
    pub fn hull(&self, tensors: &[BTreeSet<Point>], seed: &BTreeSet<Point>) -> BTreeSet<Point> {
        let mut out: Option<BTreeSet<Point>> = None;
        for t in tensors.iter().filter(|t| seed.is_subset(t)) {
            out = Some(match out {
                None => t.clone(),
                Some(acc) => acc.intersection(t).cloned().collect(),
            });
        }
        out.expect("V itself is a tensor")
    }

    /// Tensors contained in the hull of the top point.
    pub fn bounded_tensors(&self) -> Vec<BTreeSet<Point>> {
        let tensors = self.all_tensors();
        let top: Point = self.factors.iter().map(|f| f.elems.len() - 1).collect();
        let bound = self.hull(&tensors, &BTreeSet::from([top]));
        tensors.into_iter().filter(|t| t.is_subset(&bound)).collect()
    }

    /// The matching library space.
    pub fn library_space(&self) -> TensorSpace {
        let k = Semiring::Chain(self.levels as u32);
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let elems = f.elems.iter().map(|t| tuple(t)).collect();
                FinSemimodule::new(k.clone(), f.elems[0].len(), elems).expect("valid factor")
            })
            .collect();
        TensorSpace::new(factors).expect("valid space")
    }

    pub fn to_library(&self, space: &TensorSpace, set: &BTreeSet<Point>) -> PointSet {
        let ids = set.iter().map(|p| {
            let pp: Vec<Vec<Elem>> = p.iter().zip(&self.factors).map(|(&i, f)| tuple(&f.elems[i])).collect();
            space.point_id(&pp).expect("point of the space")
        });
        PointSet::from_ids(space.size(), ids)
    }
}

pub fn tuple(t: &[u8]) -> Vec<Elem> {
    t.iter().map(|&v| Elem::Idx(v as u32)).collect()
}

/// The points selected by the bits of `mask`.
pub fn subset(pts: &[Point], mask: u64) -> BTreeSet<Point> {
    pts.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect()
}

/// max-plus evaluation on plain floats, `f64::NEG_INFINITY` as zero.
pub fn mp_dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x + y).fold(f64::NEG_INFINITY, f64::max)
}

/// `(φ M)(y) = max_x M[x][y] + φ(x)`.
pub fn mp_apply(m: &[Vec<f64>], phi: &[f64]) -> Vec<f64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|y| (0..m.len()).map(|x| m[x][y] + phi[x]).fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

/// The kernel of "apply `a`, then `b`".
pub fn mp_then(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter().map(|row| mp_apply(b, row)).collect()
}
