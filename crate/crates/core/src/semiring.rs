//! Idempotent semirings.
//!
//! A semiring here is always idempotent (`a ⊕ a = a`), has a unit `1` and a
//! zero `0 ≠ 1`, and induces the standard order `a ≼ b ⇔ a ⊕ b = b` in which
//! `⊕` is the binary supremum. All carriers in this crate are either finite
//! or one of the extended-real families, and every set we take sups over is
//! finite, so generalized (infinite) distributivity reduces to the binary
//! laws and is never checked separately.
//!
//! Builtin kinds:
//!
//! | kind       | carrier            | ⊕   | ⊙   | 0    | 1     |
//! |------------|--------------------|-----|-----|------|-------|
//! | `boolean`  | {0, 1}             | max | min | 0    | 1     |
//! | `chain:n`  | {0, …, n−1}        | max | min | 0    | n−1   |
//! | `rmax`     | ℝ ∪ {−∞}           | max | +   | −∞   | 0     |
//! | `rmax_top` | ℝ ∪ {−∞, +∞}       | max | +   | −∞   | 0     |
//! | `rmin`     | ℝ ∪ {+∞}           | min | +   | +∞   | 0     |
//!
//! plus user-supplied finite tables ([`FiniteTable`]).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::{Outcome, ValidationReport};

/// A semiring element: a carrier index for finite kinds, an extended real
/// for the real families.
///
/// Reals are stored normalized (`-0.0` becomes `0.0`, never NaN), so
/// equality is bitwise.
#[derive(Clone, Copy, Debug)]
pub enum Elem {
    Idx(u32),
    Real(f64),
}

impl Elem {
    pub const NEG_INF: Elem = Elem::Real(f64::NEG_INFINITY);
    pub const POS_INF: Elem = Elem::Real(f64::INFINITY);

    pub fn real(x: f64) -> Elem {
        assert!(!x.is_nan(), "NaN is not a semiring element");
        // adding +0.0 maps -0.0 to +0.0 and leaves everything else alone
        Elem::Real(x + 0.0)
    }

    pub fn as_real(self) -> Option<f64> {
        match self {
            Elem::Real(x) => Some(x),
            Elem::Idx(_) => None,
        }
    }

    pub fn as_index(self) -> Option<usize> {
        match self {
            Elem::Idx(i) => Some(i as usize),
            Elem::Real(_) => None,
        }
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Elem::Idx(a), Elem::Idx(b)) => a == b,
            (Elem::Real(a), Elem::Real(b)) => a.to_bits() == b.to_bits(),
            _ => false,
        }
    }
}

impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Elem::Idx(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Elem::Real(x) => {
                1u8.hash(state);
                x.to_bits().hash(state);
            }
        }
    }
}

/// Storage order only (indices before reals, reals numerically); this is not
/// the semiring's standard order.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elem::Idx(a), Elem::Idx(b)) => a.cmp(b),
            (Elem::Real(a), Elem::Real(b)) => a.total_cmp(b),
            (Elem::Idx(_), Elem::Real(_)) => Ordering::Less,
            (Elem::Real(_), Elem::Idx(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Idx(i) => write!(f, "#{i}"),
            Elem::Real(x) => write!(f, "{}", format_real(*x)),
        }
    }
}

fn format_real(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "+inf".to_string()
    } else {
        format!("{x}")
    }
}

/// A user-defined finite semiring given by Cayley tables over labelled
/// elements. Construction only checks shape; use
/// [`Semiring::validate`] to check the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    name: String,
    labels: Vec<String>,
    add: Vec<u32>,
    mul: Vec<u32>,
    zero: u32,
    one: u32,
}

impl FiniteTable {
    /// Tables are given row-major: `add[a][b] = a ⊕ b`.
    pub fn new(
        labels: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTable("no elements".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidTable(format!("duplicate label `{l}`")));
            }
        }
        let flatten = |rows: Vec<Vec<usize>>, what: &str| -> Result<Vec<u32>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidTable(format!("{what} table must be {n}x{n}")));
            }
            let flat: Vec<u32> = rows.into_iter().flatten().map(|v| v as u32).collect();
            if flat.iter().any(|&v| v as usize >= n) {
                return Err(Error::InvalidTable(format!("{what} table entry out of range")));
            }
            Ok(flat)
        };
        let add = flatten(add, "add")?;
        let mul = flatten(mul, "mul")?;
        if zero >= n || one >= n {
            return Err(Error::InvalidTable("zero/one out of range".into()));
        }
        Ok(Self {
            name: "table".to_string(),
            labels,
            add,
            mul,
            zero: zero as u32,
            one: one as u32,
        })
    }

    /// Builds the table of a builtin finite semiring (same carrier indices).
    pub fn from_semiring(k: &Semiring) -> Result<Self> {
        let n = k
            .size()
            .ok_or_else(|| Error::Unsupported(format!("{} has no finite table", k.name())))?;
        let mut add = vec![vec![0; n]; n];
        let mut mul = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let (ea, eb) = (Elem::Idx(a as u32), Elem::Idx(b as u32));
                add[a][b] = k.join(ea, eb).as_index().unwrap();
                mul[a][b] = k.times(ea, eb)?.as_index().unwrap();
            }
        }
        let labels = (0..n).map(|i| k.format_elem(Elem::Idx(i as u32))).collect();
        let mut t = Self::new(
            labels,
            add,
            mul,
            k.zero().as_index().unwrap(),
            k.one().as_index().unwrap(),
        )?;
        t.name = k.name();
        Ok(t)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.len() + b as usize]
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.len() + b as usize]
    }
}

/// Completeness class of a semiring as an ordered set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    /// Every bounded subset has a sup, but there is no top element.
    Bounded,
    /// Every subset has a sup (a top element exists).
    Algebraic,
}

/// A concrete idempotent semiring. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semiring {
    Boolean,
    Chain(u32),
    Rmax,
    RmaxTop,
    Rmin,
    Table(Arc<FiniteTable>),
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Semiring {
    pub fn table(t: FiniteTable) -> Self {
        Semiring::Table(Arc::new(t))
    }

    /// Parses a builtin name: `boolean`, `chain:<n>`, `rmax`, `rmax_top`, `rmin`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "boolean" => Some(Semiring::Boolean),
            "rmax" => Some(Semiring::Rmax),
            "rmax_top" => Some(Semiring::RmaxTop),
            "rmin" => Some(Semiring::Rmin),
            _ => {
                let n: u32 = name.strip_prefix("chain:")?.parse().ok()?;
                (n >= 1).then_some(Semiring::Chain(n))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Semiring::Boolean => "boolean".into(),
            Semiring::Chain(n) => format!("chain:{n}"),
            Semiring::Rmax => "rmax".into(),
            Semiring::RmaxTop => "rmax_top".into(),
            Semiring::Rmin => "rmin".into(),
            Semiring::Table(t) => t.name.clone(),
        }
    }

    /// Carrier size for finite kinds.
    pub fn size(&self) -> Option<usize> {
        match self {
            Semiring::Boolean => Some(2),
            Semiring::Chain(n) => Some(*n as usize),
            Semiring::Table(t) => Some(t.len()),
            Semiring::Rmax | Semiring::RmaxTop | Semiring::Rmin => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// All carrier elements of a finite kind, in index order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        self.size()
            .map(|n| (0..n as u32).map(Elem::Idx).collect())
    }

    fn chain_len(&self) -> Option<u32> {
        match self {
            Semiring::Boolean => Some(2),
            Semiring::Chain(n) => Some(*n),
            _ => None,
        }
    }

    pub fn contains(&self, e: Elem) -> bool {
        match (self, e) {
            (Semiring::Rmax, Elem::Real(x)) => x != f64::INFINITY,
            (Semiring::RmaxTop, Elem::Real(_)) => true,
            (Semiring::Rmin, Elem::Real(x)) => x != f64::NEG_INFINITY,
            (k, Elem::Idx(i)) => k.size().is_some_and(|n| (i as usize) < n),
            _ => false,
        }
    }

    pub fn check(&self, e: Elem) -> Result<Elem> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(Error::Domain {
                elem: e.to_string(),
                semiring: self.name(),
            })
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Semiring::Boolean | Semiring::Chain(_) => Elem::Idx(0),
            Semiring::Rmax | Semiring::RmaxTop => Elem::NEG_INF,
            Semiring::Rmin => Elem::POS_INF,
            Semiring::Table(t) => Elem::Idx(t.zero),
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            Semiring::Boolean => Elem::Idx(1),
            Semiring::Chain(n) => Elem::Idx(n - 1),
            Semiring::Rmax | Semiring::RmaxTop | Semiring::Rmin => Elem::Real(0.0),
            Semiring::Table(t) => Elem::Idx(t.one),
        }
    }

    /// Greatest element in the standard order, if one exists.
    pub fn top(&self) -> Option<Elem> {
        match self {
            Semiring::Boolean | Semiring::Chain(_) => Some(Elem::Idx(self.chain_len()? - 1)),
            Semiring::RmaxTop => Some(Elem::POS_INF),
            Semiring::Rmax | Semiring::Rmin => None,
            Semiring::Table(_) => {
                let all = self.elements()?;
                let s = all.iter().fold(self.zero(), |acc, &e| self.join(acc, e));
                all.iter().all(|&e| self.join(e, s) == s).then_some(s)
            }
        }
    }

    pub fn completeness(&self) -> Completeness {
        if self.top().is_some() {
            Completeness::Algebraic
        } else {
            Completeness::Bounded
        }
    }

    /// `a ⊕ b` without membership checks. Callers must pass carrier elements.
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        match (self, a, b) {
            (Semiring::Table(t), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(t.add_idx(x, y)),
            (_, Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(x.max(y)),
            (Semiring::Rmin, Elem::Real(x), Elem::Real(y)) => Elem::Real(x.min(y)),
            (_, Elem::Real(x), Elem::Real(y)) => Elem::Real(x.max(y)),
            _ => panic!("join of mixed element kinds {a} and {b}"),
        }
    }

    /// `a ⊙ b` without membership checks; fails only when a finite real sum
    /// overflows.
    pub fn times(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(match (self, a, b) {
            (Semiring::Table(t), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(t.mul_idx(x, y)),
            (_, Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(x.min(y)),
            (Semiring::Rmin, Elem::Real(x), Elem::Real(y)) => {
                if x == f64::INFINITY || y == f64::INFINITY {
                    Elem::POS_INF
                } else {
                    finite_sum(x, y)?
                }
            }
            (_, Elem::Real(x), Elem::Real(y)) => {
                // 0 = −∞ absorbs first: 0 ⊙ (+∞) = 0 in rmax_top.
                if x == f64::NEG_INFINITY || y == f64::NEG_INFINITY {
                    Elem::NEG_INF
                } else if x == f64::INFINITY || y == f64::INFINITY {
                    Elem::POS_INF
                } else {
                    finite_sum(x, y)?
                }
            }
            _ => panic!("product of mixed element kinds {a} and {b}"),
        })
    }

    pub fn add(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.join(self.check(a)?, self.check(b)?))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Result<Elem> {
        self.times(self.check(a)?, self.check(b)?)
    }

    /// Standard order: `a ≼ b ⇔ a ⊕ b = b`.
    pub fn leq(&self, a: Elem, b: Elem) -> Result<bool> {
        Ok(self.add(a, b)? == b)
    }

    /// Least upper bound of a finite set; `sup ∅ = 0`.
    pub fn sup(&self, s: &[Elem]) -> Result<Elem> {
        s.iter()
            .try_fold(self.zero(), |acc, &e| Ok(self.join(acc, self.check(e)?)))
    }

    /// Greatest lower bound of a nonempty finite set.
    pub fn meet(&self, s: &[Elem]) -> Result<Elem> {
        if s.is_empty() {
            return Err(Error::EmptyMeet);
        }
        for &e in s {
            self.check(e)?;
        }
        match self {
            Semiring::Table(_) => {
                let lower: Vec<Elem> = self
                    .elements()
                    .unwrap()
                    .into_iter()
                    .filter(|&l| s.iter().all(|&x| self.join(l, x) == x))
                    .collect();
                lower
                    .iter()
                    .copied()
                    .find(|&g| lower.iter().all(|&l| self.join(l, g) == g))
                    .ok_or_else(|| {
                        Error::InvalidTable("standard order has no greatest lower bound".into())
                    })
            }
            Semiring::Rmin => Ok(*s.iter().max().unwrap()),
            _ => Ok(*s.iter().min().unwrap()),
        }
    }

    /// Whether `⊙` is commutative. Tensor products require it.
    pub fn is_commutative(&self) -> bool {
        match self {
            Semiring::Table(t) => {
                let n = t.len() as u32;
                (0..n).all(|a| (0..n).all(|b| t.mul_idx(a, b) == t.mul_idx(b, a)))
            }
            _ => true,
        }
    }

    pub fn parse_elem(&self, token: &str) -> Result<Elem> {
        let bad = || Error::Domain {
            elem: token.to_string(),
            semiring: self.name(),
        };
        let e = match self {
            Semiring::Table(t) => {
                let i = t.labels.iter().position(|l| l == token).ok_or_else(bad)?;
                Elem::Idx(i as u32)
            }
            Semiring::Boolean | Semiring::Chain(_) => {
                Elem::Idx(token.parse::<u32>().map_err(|_| bad())?)
            }
            _ => Elem::real(parse_real(token).ok_or_else(bad)?),
        };
        self.check(e)
    }

    pub fn format_elem(&self, e: Elem) -> String {
        match (self, e) {
            (Semiring::Table(t), Elem::Idx(i)) if (i as usize) < t.len() => {
                t.labels[i as usize].clone()
            }
            (_, Elem::Idx(i)) => i.to_string(),
            (_, Elem::Real(x)) => format_real(x),
        }
    }

    /// Adjoins a top element when none exists. `rmax` becomes `rmax_top`;
    /// finite semirings always have a top and are returned unchanged.
    ///
    /// `rmin` is rejected: its missing top would be `−∞`, which no builtin
    /// kind models.
    pub fn complete_top(&self) -> Result<Semiring> {
        match self {
            Semiring::Rmax => Ok(Semiring::RmaxTop),
            Semiring::Rmin => Err(Error::Unsupported(
                "top completion of rmin is not a builtin kind".into(),
            )),
            k => {
                if k.top().is_some() {
                    Ok(k.clone())
                } else {
                    Err(Error::InvalidTable(
                        "finite table without a top is not a join-semilattice".into(),
                    ))
                }
            }
        }
    }

    /// Checks every semiring axiom exhaustively for finite kinds. The real
    /// families are reported as assumed.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!("semiring {}", self.name()));
        let Some(els) = self.elements() else {
            for name in AXIOMS {
                report.push(*name, Outcome::Assumed);
            }
            return report;
        };
        let fmt = |e: Elem| self.format_elem(e);
        let add = |a, b| self.join(a, b);
        // finite kinds never overflow
        let mul = |a, b| self.times(a, b).unwrap();
        let (zero, one) = (self.zero(), self.one());

        let find1 = |pred: &dyn Fn(Elem) -> bool| -> Option<String> {
            els.iter()
                .find(|&&a| !pred(a))
                .map(|&a| format!("a={}", fmt(a)))
        };
        let find2 = |pred: &dyn Fn(Elem, Elem) -> bool| -> Option<String> {
            for &a in &els {
                for &b in &els {
                    if !pred(a, b) {
                        return Some(format!("a={} b={}", fmt(a), fmt(b)));
                    }
                }
            }
            None
        };
        let find3 = |names: [&str; 3], pred: &dyn Fn(Elem, Elem, Elem) -> bool| -> Option<String> {
            for &a in &els {
                for &b in &els {
                    for &c in &els {
                        if !pred(a, b, c) {
                            return Some(format!(
                                "{}={} {}={} {}={}",
                                names[0],
                                fmt(a),
                                names[1],
                                fmt(b),
                                names[2],
                                fmt(c)
                            ));
                        }
                    }
                }
            }
            None
        };

        report.record("add_idempotent", find1(&|a| add(a, a) == a));
        report.record("add_commutative", find2(&|a, b| add(a, b) == add(b, a)));
        report.record(
            "add_associative",
            find3(["a", "b", "c"], &|a, b, c| add(add(a, b), c) == add(a, add(b, c))),
        );
        report.record(
            "mul_associative",
            find3(["a", "b", "c"], &|a, b, c| mul(mul(a, b), c) == mul(a, mul(b, c))),
        );
        report.record(
            "left_distributive",
            find3(["k", "x", "y"], &|k, x, y| {
                mul(k, add(x, y)) == add(mul(k, x), mul(k, y))
            }),
        );
        report.record(
            "right_distributive",
            find3(["k", "x", "y"], &|k, x, y| {
                mul(add(x, y), k) == add(mul(x, k), mul(y, k))
            }),
        );
        report.record(
            "zero_neutral",
            find1(&|a| add(a, zero) == a && add(zero, a) == a),
        );
        report.record(
            "zero_absorbing",
            find1(&|a| mul(a, zero) == zero && mul(zero, a) == zero),
        );
        report.record("one_neutral", find1(&|a| mul(a, one) == a && mul(one, a) == a));
        report.record(
            "zero_ne_one",
            (zero == one).then(|| format!("0=1={}", fmt(zero))),
        );
        report
    }
}

/// Axiom names in report order.
pub const AXIOMS: &[&str] = &[
    "add_idempotent",
    "add_commutative",
    "add_associative",
    "mul_associative",
    "left_distributive",
    "right_distributive",
    "zero_neutral",
    "zero_absorbing",
    "one_neutral",
    "zero_ne_one",
];

fn finite_sum(x: f64, y: f64) -> Result<Elem> {
    let s = x + y;
    if s.is_finite() {
        Ok(Elem::real(s))
    } else {
        Err(Error::Overflow(format!("{} + {}", format_real(x), format_real(y))))
    }
}

/// Decimal literals plus the tokens `-inf`, `+inf` (and `inf`).
pub fn parse_real(token: &str) -> Option<f64> {
    match token {
        "-inf" => Some(f64::NEG_INFINITY),
        "+inf" | "inf" => Some(f64::INFINITY),
        _ => {
            let ok = !token.is_empty()
                && token
                    .chars()
                    .all(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '.' | 'e' | 'E'));
            let x: f64 = token.parse().ok().filter(|_| ok)?;
            x.is_finite().then_some(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Elem {
        Elem::real(x)
    }

    fn chain3_table() -> FiniteTable {
        FiniteTable::from_semiring(&Semiring::Chain(3)).unwrap()
    }

    #[test]
    fn rmax_basic_ops() {
        let k = Semiring::Rmax;
        assert_eq!(k.add(r(3.0), r(5.0)).unwrap(), r(5.0));
        assert_eq!(k.add(r(7.5), Elem::NEG_INF).unwrap(), r(7.5));
        assert_eq!(k.mul(r(3.0), r(5.0)).unwrap(), r(8.0));
        assert!(k.leq(Elem::NEG_INF, r(-1e300)).unwrap());
        assert!(k.leq(r(3.0), r(5.0)).unwrap());
        assert!(!k.leq(r(5.0), r(3.0)).unwrap());
        assert_eq!(k.sup(&[]).unwrap(), Elem::NEG_INF);
        assert_eq!(k.sup(&[r(1.0), r(4.0), r(2.0)]).unwrap(), r(4.0));
        assert_eq!(k.meet(&[r(1.0), r(4.0), r(2.0)]).unwrap(), r(1.0));
    }

    #[test]
    fn rmax_rejects_top() {
        let k = Semiring::Rmax;
        assert!(matches!(k.add(Elem::POS_INF, r(1.0)), Err(Error::Domain { .. })));
        assert!(k.parse_elem("+inf").is_err());
        assert!(Semiring::RmaxTop.parse_elem("+inf").is_ok());
    }

    #[test]
    fn rmax_top_infinities() {
        let k = Semiring::RmaxTop;
        assert_eq!(k.mul(Elem::NEG_INF, Elem::POS_INF).unwrap(), Elem::NEG_INF);
        assert_eq!(k.mul(Elem::POS_INF, Elem::NEG_INF).unwrap(), Elem::NEG_INF);
        assert_eq!(k.mul(r(2.0), Elem::POS_INF).unwrap(), Elem::POS_INF);
        assert_eq!(k.add(r(2.0), Elem::POS_INF).unwrap(), Elem::POS_INF);
        assert_eq!(k.top(), Some(Elem::POS_INF));
    }

    #[test]
    fn real_overflow_is_an_error() {
        let k = Semiring::Rmax;
        assert!(matches!(
            k.mul(r(f64::MAX), r(f64::MAX)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn negative_zero_normalizes() {
        assert_eq!(r(-0.0), r(0.0));
        assert_eq!(Semiring::Rmax.parse_elem("-0").unwrap(), Semiring::Rmax.one());
    }

    #[test]
    fn rmin_order_is_reversed() {
        let k = Semiring::Rmin;
        assert_eq!(k.add(r(3.0), r(5.0)).unwrap(), r(3.0));
        assert!(k.leq(r(5.0), r(3.0)).unwrap());
        assert!(k.leq(Elem::POS_INF, r(0.0)).unwrap());
        assert_eq!(k.sup(&[]).unwrap(), Elem::POS_INF);
        assert_eq!(k.meet(&[r(1.0), r(4.0)]).unwrap(), r(4.0));
        assert!(k.parse_elem("-inf").is_err());
    }

    #[test]
    fn boolean_and_chain() {
        let b = Semiring::Boolean;
        assert_eq!(b.add(Elem::Idx(1), Elem::Idx(1)).unwrap(), Elem::Idx(1));
        assert_eq!(b.sup(&[Elem::Idx(0), Elem::Idx(1)]).unwrap(), Elem::Idx(1));
        assert_eq!(b.meet(&[Elem::Idx(0), Elem::Idx(1)]).unwrap(), Elem::Idx(0));
        let c = Semiring::Chain(3);
        assert!(!c.leq(Elem::Idx(2), Elem::Idx(1)).unwrap());
        assert_eq!(c.meet(&[Elem::Idx(2)]).unwrap(), Elem::Idx(2));
        assert!(matches!(c.add(Elem::Idx(3), Elem::Idx(0)), Err(Error::Domain { .. })));
        assert!(matches!(c.meet(&[]), Err(Error::EmptyMeet)));
    }

    #[test]
    fn builtin_names_round_trip() {
        for k in [
            Semiring::Boolean,
            Semiring::Chain(4),
            Semiring::Rmax,
            Semiring::RmaxTop,
            Semiring::Rmin,
        ] {
            assert_eq!(Semiring::builtin(&k.name()), Some(k));
        }
        assert_eq!(Semiring::builtin("chain:0"), None);
        assert_eq!(Semiring::builtin("tropical"), None);
    }

    #[test]
    fn finite_kinds_validate() {
        for k in [
            Semiring::Boolean,
            Semiring::Chain(2),
            Semiring::Chain(3),
            Semiring::Chain(5),
            Semiring::table(chain3_table()),
        ] {
            let rep = k.validate();
            assert!(rep.passed(), "{rep}");
            assert_eq!(rep.checks.len(), AXIOMS.len());
        }
    }

    #[test]
    fn chain_one_fails_zero_ne_one() {
        let rep = Semiring::Chain(1).validate();
        assert!(matches!(rep.get("zero_ne_one"), Some(Outcome::Fail(_))));
    }

    #[test]
    fn reals_reported_as_assumed() {
        let rep = Semiring::Rmax.validate();
        assert!(rep.passed());
        assert!(rep.checks.iter().all(|c| c.outcome == Outcome::Assumed));
    }

    #[test]
    fn broken_idempotency_has_witness() {
        // a ⊕ a = b for the middle element
        let t = FiniteTable::new(
            vec!["z".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]],
            0,
            1,
        )
        .unwrap();
        let rep = Semiring::table(t).validate();
        assert_eq!(rep.get("add_idempotent"), Some(&Outcome::Fail("a=a".into())));
    }

    #[test]
    fn broken_distributivity_matches_exhaustive_scan() {
        // chain(3) with one multiplication entry altered: m ⊙ t = m → z
        let mut mul = vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]];
        mul[1][2] = 0;
        let t = FiniteTable::new(
            vec!["z".into(), "m".into(), "t".into()],
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]],
            mul.clone(),
            0,
            2,
        )
        .unwrap();
        let k = Semiring::table(t);
        let rep = k.validate();
        // independent scan for the first failing (k, x, y) in index order
        let add = |a: usize, b: usize| a.max(b);
        let mut expected = None;
        'scan: for a in 0..3 {
            for x in 0..3 {
                for y in 0..3 {
                    if mul[a][add(x, y)] != add(mul[a][x], mul[a][y]) {
                        expected = Some((a, x, y));
                        break 'scan;
                    }
                }
            }
        }
        let (a, x, y) = expected.expect("table should break left distributivity");
        let names = ["z", "m", "t"];
        assert_eq!(
            rep.get("left_distributive"),
            Some(&Outcome::Fail(format!("k={} x={} y={}", names[a], names[x], names[y])))
        );
        assert!(!rep.passed());
    }

    #[test]
    fn complete_top_cases() {
        assert_eq!(Semiring::Rmax.complete_top().unwrap(), Semiring::RmaxTop);
        assert_eq!(Semiring::RmaxTop.complete_top().unwrap(), Semiring::RmaxTop);
        assert_eq!(Semiring::Chain(4).complete_top().unwrap(), Semiring::Chain(4));
        assert!(Semiring::Rmin.complete_top().is_err());
        let t = Semiring::table(chain3_table());
        assert_eq!(t.complete_top().unwrap(), t);
        assert_eq!(t.top(), Some(Elem::Idx(2)));
    }

    #[test]
    fn parse_real_tokens() {
        assert_eq!(parse_real("-inf"), Some(f64::NEG_INFINITY));
        assert_eq!(parse_real("+inf"), Some(f64::INFINITY));
        assert_eq!(parse_real("2.5"), Some(2.5));
        assert_eq!(parse_real("-3"), Some(-3.0));
        assert_eq!(parse_real("nan"), None);
        assert_eq!(parse_real("0x10"), None);
        assert_eq!(parse_real(""), None);
    }
}
