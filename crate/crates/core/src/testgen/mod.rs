//! Test sets from SSAs, the test generation driver, and CTS checks.

mod extract;
mod pct;
mod verify;

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::Circuit;
use crate::cnf::Bits;
use crate::error::{Error, Result};

pub use extract::{complete_partial_tests, diversify, extract_tests, gen_tests, GenTestsConfig};
pub use pct::{gen_pct, PctConfig, PctOutcome, VarChoice, DEFAULT_TRIES};
pub use verify::{redundancy_aware_verify, verify_cts, CtsVerdict, RedundancyAwareVerdict};

/// A test: one value per primary input, in declaration order.
pub type Test = Bits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestKind {
    /// Extracted from an SSA of the full formula `F_N ∧ z`.
    Cts,
    /// From an SSA of a projection whose variables include every input.
    Ctsa,
    /// From an SSA of a projection missing some input.
    Ctsaa,
    Random,
}

impl TestKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TestKind::Cts => "CTS",
            TestKind::Ctsa => "CTSA",
            TestKind::Ctsaa => "CTSAA",
            TestKind::Random => "RANDOM",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CTS" => Ok(TestKind::Cts),
            "CTSA" => Ok(TestKind::Ctsa),
            "CTSAA" => Ok(TestKind::Ctsaa),
            "RANDOM" => Ok(TestKind::Random),
            _ => Err(Error::Format {
                line: 1,
                message: format!("unknown test kind `{s}`"),
            }),
        }
    }
}

/// Ordered, duplicate-free tests with their provenance.
#[derive(Clone, Debug)]
pub struct TestSet {
    pub circuit: String,
    pub num_inputs: usize,
    pub kind: TestKind,
    pub seed: u64,
    /// Free-form `key=value` parameters, kept in insertion order.
    pub params: Vec<(String, String)>,
    tests: Vec<Test>,
    seen: HashSet<Test>,
}

impl PartialEq for TestSet {
    fn eq(&self, other: &Self) -> bool {
        self.circuit == other.circuit
            && self.num_inputs == other.num_inputs
            && self.kind == other.kind
            && self.seed == other.seed
            && self.params == other.params
            && self.tests == other.tests
    }
}

impl Eq for TestSet {}

impl TestSet {
    pub fn new(circuit: impl Into<String>, num_inputs: usize, kind: TestKind, seed: u64) -> Self {
        TestSet {
            circuit: circuit.into(),
            num_inputs,
            kind,
            seed,
            params: Vec::new(),
            tests: Vec::new(),
            seen: HashSet::new(),
        }
    }

    pub fn for_circuit(n: &Circuit, kind: TestKind, seed: u64) -> Self {
        Self::new(n.name(), n.num_inputs(), kind, seed)
    }

    pub fn with_param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// Appends `t` unless already present; returns whether it was new.
    pub fn push(&mut self, t: Test) -> Result<bool> {
        if t.len() != self.num_inputs {
            return Err(Error::DomainMismatch);
        }
        if !self.seen.insert(t.clone()) {
            return Ok(false);
        }
        self.tests.push(t);
        Ok(true)
    }

    pub fn extend(&mut self, tests: impl IntoIterator<Item = Test>) -> Result<()> {
        for t in tests {
            self.push(t)?;
        }
        Ok(())
    }

    pub fn tests(&self) -> &[Test] {
        &self.tests
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    pub fn contains(&self, t: &Test) -> bool {
        self.seen.contains(t)
    }

    pub fn to_text(&self) -> String {
        let name: String = self
            .circuit
            .chars()
            .map(|c| if c.is_whitespace() { '_' } else { c })
            .collect();
        let name = if name.is_empty() { "circuit".to_string() } else { name };
        let mut out = format!("tests {name} {} {} {}\n", self.num_inputs, self.kind, self.seed);
        for (k, v) in &self.params {
            writeln!(out, "# {k}={v}").unwrap();
        }
        for t in &self.tests {
            writeln!(out, "{t}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TestSet> {
        let bad = |line: usize, message: String| Error::Format { line, message };
        let mut set: Option<TestSet> = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let Some(s) = set.as_mut() else {
                let w: Vec<&str> = t.split_whitespace().collect();
                let ["tests", name, nx, kind, seed] = w.as_slice() else {
                    return Err(bad(lineno, "expected `tests <circuit> <inputs> <kind> <seed>`".into()));
                };
                let nx = nx.parse().map_err(|_| bad(lineno, format!("bad input count `{nx}`")))?;
                let kind = kind
                    .parse::<TestKind>()
                    .map_err(|_| bad(lineno, format!("unknown kind `{kind}`")))?;
                let seed = seed.parse().map_err(|_| bad(lineno, format!("bad seed `{seed}`")))?;
                set = Some(TestSet::new(*name, nx, kind, seed));
                continue;
            };
            if let Some(rest) = t.strip_prefix('#') {
                if let Some((k, v)) = rest.trim().split_once('=') {
                    s.params.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let b: Bits = t.parse().map_err(|_| bad(lineno, format!("bad test `{t}`")))?;
            if b.len() != s.num_inputs {
                return Err(bad(
                    lineno,
                    format!("test has {} bits, expected {}", b.len(), s.num_inputs),
                ));
            }
            s.push(b)?;
        }
        set.ok_or_else(|| bad(1, "missing header line".into()))
    }
}

/// `count` uniformly drawn tests; duplicates are dropped when `dedup`,
/// otherwise redrawn until `count` distinct tests exist or the input space
/// is exhausted.
pub fn random_tests(n: &Circuit, count: usize, seed: u64, dedup: bool) -> TestSet {
    let nx = n.num_inputs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = TestSet::for_circuit(n, TestKind::Random, seed).with_param("count", count);
    let space = if nx >= 63 { u64::MAX } else { 1u64 << nx };
    let mut draws = 0;
    while draws < count && (set.len() as u64) < space {
        let bits: Vec<bool> = (0..nx).map(|_| rng.gen()).collect();
        let fresh = set.push(Bits::from_bools(&bits)).expect("width matches");
        if dedup || fresh {
            draws += 1;
        }
    }
    set
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub tests: Vec<Test>,
    /// Output value under each test.
    pub outputs: Vec<bool>,
    /// Indices of tests with output 1.
    pub hits: Vec<usize>,
}

impl RunReport {
    pub fn hit_rate(&self) -> f64 {
        if self.tests.is_empty() {
            0.0
        } else {
            self.hits.len() as f64 / self.tests.len() as f64
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, &z) in self.tests.iter().zip(&self.outputs) {
            writeln!(out, "test {t} z={}", z as u8).unwrap();
        }
        writeln!(out, "tests={}", self.tests.len()).unwrap();
        writeln!(out, "hits={}", self.hits.len()).unwrap();
        writeln!(out, "hit_rate={:.6}", self.hit_rate()).unwrap();
        out
    }
}

/// Simulates every test. `jobs > 1` spreads the simulation over threads;
/// the report is the same for any `jobs`.
pub fn run_tests(n: &Circuit, t: &TestSet, jobs: usize) -> Result<RunReport> {
    if t.num_inputs != n.num_inputs() {
        return Err(Error::DomainMismatch);
    }
    let outputs: Vec<bool> = if jobs > 1 {
        with_pool(jobs, || t.tests().par_iter().map(|x| n.eval(x)).collect())
    } else {
        t.tests().iter().map(|x| n.eval(x)).collect()
    };
    let hits = outputs.iter().enumerate().filter(|(_, &z)| z).map(|(i, _)| i).collect();
    Ok(RunReport {
        tests: t.tests().to_vec(),
        outputs,
        hits,
    })
}

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
