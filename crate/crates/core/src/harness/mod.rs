//! Property suites behind `idem check`.
//!
//! Each suite is a list of named properties. A property runs a number of
//! cases and records the first counterexample. Randomized cases draw from a
//! ChaCha8 stream seeded from [`Config::seed`], so output is reproducible.
//! [`Config::size`] caps the dimension of exhaustively enumerated instances;
//! each suite clamps it to a bound it can finish quickly.

mod algebra;
mod ext;
mod free;
pub mod gen;

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::semiring::Semiring;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SIZE: usize = 2;

/// Suite names, in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "semiring",
    "freemod",
    "kernelop",
    "freetensor",
    "exttensor",
    "closure",
    "prop1",
    "prop2",
    "prop3",
    "prop4",
    "prop5",
    "prop6",
    "kernel-theorem",
    "theorem1",
    "theorem2",
    "theorem3",
    "lemma1",
    "lemma2",
];

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub size: usize,
    /// Restricts the `semiring`, `freemod` and `kernelop` suites to one
    /// semiring.
    pub semiring: Option<Semiring>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            size: DEFAULT_SIZE,
            semiring: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: String,
    pub cases: u64,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.witness.is_none())
    }

    pub fn get(&self, name: &str) -> Option<&PropertyOutcome> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// `<name> pass cases=<n>` or `<name> fail <witness>` per property.
    pub fn render_lines(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for p in &self.properties {
            match &p.witness {
                None => writeln!(out, "{} pass cases={}", p.name, p.cases),
                Some(w) => writeln!(out, "{} fail {}", p.name, w),
            }
            .expect("string write");
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.suite);
        for p in &self.properties {
            match &p.witness {
                None => writeln!(out, "  ok      {} ({} cases)", p.name, p.cases),
                Some(w) => writeln!(out, "  FAILED  {}: {}", p.name, w),
            }
            .expect("string write");
        }
        out
    }
}

/// Per-property case counter that keeps the first counterexample.
pub(crate) struct Checker<'a> {
    pub rng: &'a mut ChaCha8Rng,
    cases: u64,
    witness: Option<String>,
}

impl Checker<'_> {
    /// Counts one case; returns whether it held.
    pub fn case(&mut self, ok: bool, witness: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
        ok
    }
}

pub(crate) struct Suite {
    name: String,
    pub cfg: Config,
    rng: ChaCha8Rng,
    properties: Vec<PropertyOutcome>,
}

impl Suite {
    fn new(name: &str, cfg: &Config) -> Self {
        Self {
            name: name.to_string(),
            cfg: cfg.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            properties: Vec::new(),
        }
    }

    /// Runs one property. An error counts as a failure with the error as
    /// witness.
    pub fn property<F>(&mut self, name: &str, f: F)
    where
        F: FnOnce(&mut Checker) -> Result<()>,
    {
        let mut c = Checker {
            rng: &mut self.rng,
            cases: 0,
            witness: None,
        };
        if let Err(e) = f(&mut c) {
            if c.witness.is_none() {
                c.witness = Some(format!("error: {e}"));
            }
        }
        self.properties.push(PropertyOutcome {
            name: name.to_string(),
            cases: c.cases,
            witness: c.witness,
        });
    }

    /// `cfg.size` clamped to `1..=max`.
    pub fn size(&self, max: usize) -> usize {
        self.cfg.size.clamp(1, max)
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            suite: self.name,
            properties: self.properties,
        }
    }
}

/// Runs a suite by name. `all` runs every suite in [`SUITES`] order.
pub fn run(name: &str, cfg: &Config) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &Config) -> Result<SuiteReport> {
    let mut s = Suite::new(name, cfg);
    match name {
        "semiring" => algebra::semiring(&mut s),
        "freemod" => algebra::freemod(&mut s),
        "kernelop" => algebra::kernelop(&mut s),
        "kernel-theorem" => algebra::kernel_theorem(&mut s),
        "prop6" => algebra::prop6(&mut s),
        "freetensor" => free::freetensor(&mut s),
        "prop2" => free::prop2(&mut s),
        "prop5" => free::prop5(&mut s),
        "theorem3" => free::theorem3(&mut s),
        "exttensor" => ext::exttensor(&mut s),
        "closure" => ext::closure(&mut s),
        "prop1" => ext::prop1(&mut s),
        "prop3" => ext::prop3(&mut s),
        "prop4" => ext::prop4(&mut s),
        "theorem1" => ext::theorem1(&mut s),
        "theorem2" => ext::theorem2(&mut s),
        "lemma1" => ext::lemma1(&mut s),
        "lemma2" => ext::lemma2(&mut s),
        other => return Err(Error::Unsupported(format!("unknown suite `{other}`"))),
    }
    Ok(s.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_report() {
        let cfg = Config::default();
        assert_eq!(run("prop6", &cfg).unwrap(), run("prop6", &cfg).unwrap());
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run("nope", &Config::default()).is_err());
    }

    #[test]
    fn size_is_clamped() {
        let s = Suite::new("x", &Config { size: 0, ..Config::default() });
        assert_eq!(s.size(3), 1);
        let s = Suite::new("x", &Config { size: 9, ..Config::default() });
        assert_eq!(s.size(3), 3);
    }
}
