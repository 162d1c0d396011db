//! Verification suites: golden vectors, worked traces, exactness and error
//! bounds against the high-precision oracle, circuit/recurrence equivalence,
//! block checks, reversibility, radix extensions and qubit scaling.
//!
//! Sweeps run through [`map_cases`], which uses rayon when the `parallel`
//! feature is on and [`Execution::Parallel`] is requested. Results are
//! collected in input order, so reports do not depend on scheduling.

mod bounds;
mod circuits;
mod golden;

pub use bounds::{group1_exact, group2_bounds, radix};
pub use circuits::{blocks, equivalence, equivalence_sweep, reversibility, scaling, REFERENCE_COUNTS};
pub use golden::{parse_golden, table2, worked_traces, GoldenKind, GoldenRow, GOLDEN_FIXTURE};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fbe::Function;
use crate::synth::SynthConfig;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Maps `f` over `items`, in parallel when possible. Output order matches input order.
pub fn map_cases<T, R, F>(execution: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if execution == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = execution;
    items.iter().map(f).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Table2,
    WorkedTraces,
    Group1Exact,
    Group2Bounds,
    Equivalence,
    Blocks,
    Reversibility,
    Radix,
    Scaling,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Table2,
        Suite::WorkedTraces,
        Suite::Group1Exact,
        Suite::Group2Bounds,
        Suite::Equivalence,
        Suite::Blocks,
        Suite::Reversibility,
        Suite::Radix,
        Suite::Scaling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Table2 => "table2",
            Suite::WorkedTraces => "worked-traces",
            Suite::Group1Exact => "group1-exact",
            Suite::Group2Bounds => "group2-bounds",
            Suite::Equivalence => "equivalence",
            Suite::Blocks => "blocks",
            Suite::Reversibility => "reversibility",
            Suite::Radix => "radix",
            Suite::Scaling => "scaling",
        }
    }

    /// Wall-time budget for the whole suite.
    pub fn budget(self) -> Duration {
        let secs = match self {
            Suite::Table2 => 10,
            Suite::WorkedTraces => 5,
            Suite::Group1Exact | Suite::Group2Bounds | Suite::Blocks => 120,
            Suite::Equivalence => 300,
            Suite::Reversibility => 60,
            Suite::Radix => 30,
            Suite::Scaling => 60,
        };
        Duration::from_secs(secs)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub execution: Execution,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            execution: Execution::Parallel,
            seed: 0x5eed_fbe0,
        }
    }
}

impl VerifyOptions {
    /// A generator for one named stream, independent of the other streams.
    pub(crate) fn rng(&self, stream: &str) -> ChaCha8Rng {
        let tag = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
        ChaCha8Rng::seed_from_u64(self.seed ^ tag)
    }
}

/// One named pass/fail item of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub suite: Suite,
    /// What was checked, e.g. `log2 m=8`.
    pub subject: String,
    pub function: Option<Function>,
    pub config: Option<SynthConfig>,
    pub cases: usize,
    pub exact_matches: usize,
    pub max_error: Option<f64>,
    pub bound: Option<f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(suite: Suite, subject: impl Into<String>) -> Self {
        VerificationReport {
            suite,
            subject: subject.into(),
            function: None,
            config: None,
            cases: 0,
            exact_matches: 0,
            max_error: None,
            bound: None,
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn with_function(mut self, function: Function) -> Self {
        self.function = Some(function);
        self
    }

    pub fn with_config(mut self, config: SynthConfig) -> Self {
        self.function = Some(config.function);
        self.config = Some(config);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn observe_error(&mut self, error: f64) {
        self.max_error = Some(self.max_error.map_or(error, |e| e.max(error)));
    }

    /// All checks green and the observed error within the bound.
    pub fn passed(&self) -> bool {
        let within = match (self.max_error, self.bound) {
            (Some(e), Some(b)) => e <= b,
            _ => true,
        };
        within && self.checks.iter().all(|c| c.passed)
    }

    /// Multi-line summary; wall time is printed only when `timing` is set.
    pub fn render(&self, timing: bool) -> String {
        let mut out = format!(
            "[{}] {} {}: {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.subject,
            summary_line(self)
        );
        if timing && !self.elapsed.is_zero() {
            out.push_str(&format!(" ({:.3}s)", self.elapsed.as_secs_f64()));
        }
        for c in &self.checks {
            out.push_str(&format!(
                "\n    {} {}: {}",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("\n    note: {n}"));
        }
        out
    }
}

fn summary_line(r: &VerificationReport) -> String {
    let mut parts = vec![format!("{}/{} exact", r.exact_matches, r.cases)];
    if let Some(c) = &r.config {
        parts.push(format!("n={} m={} policy={}", c.n, c.m, c.policy));
    }
    if let Some(e) = r.max_error {
        parts.push(format!("max error {e:.3e}"));
    }
    if let Some(b) = r.bound {
        parts.push(format!("bound {b:.3e}"));
    }
    parts.join(", ")
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Reports of one suite and its total wall time.
#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub suite: Suite,
    pub reports: Vec<VerificationReport>,
    pub elapsed: Duration,
}

impl SuiteRun {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed < self.suite.budget()
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteRun> {
    let start = Instant::now();
    let mut reports = match suite {
        Suite::Table2 => vec![table2(opts)?],
        Suite::WorkedTraces => vec![worked_traces()?],
        Suite::Group1Exact => group1_exact(opts)?,
        Suite::Group2Bounds => group2_bounds(opts)?,
        Suite::Equivalence => equivalence(opts)?,
        Suite::Blocks => blocks(opts)?,
        Suite::Reversibility => reversibility(opts)?,
        Suite::Radix => vec![radix(opts)?],
        Suite::Scaling => vec![scaling()?],
    };
    let elapsed = start.elapsed();
    if let [only] = reports.as_mut_slice() {
        only.elapsed = elapsed;
    }
    Ok(SuiteRun {
        suite,
        reports,
        elapsed,
    })
}

/// Up to `limit` entries of `items`, comma-separated, for failure details.
pub(crate) fn sample<T: fmt::Display>(items: &[T], limit: usize) -> String {
    let mut s = items
        .iter()
        .take(limit)
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    if items.len() > limit {
        s.push_str(&format!(", ... ({} total)", items.len()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn map_cases_keeps_order() {
        let items: Vec<u32> = (0..1000).collect();
        let par = map_cases(Execution::Parallel, &items, |x| x * 3);
        let seq = map_cases(Execution::Sequential, &items, |x| x * 3);
        assert_eq!(par, seq);
        assert_eq!(par[999], 2997);
    }

    #[test]
    fn report_passes_only_within_bound() {
        let mut r = VerificationReport::new(Suite::Group2Bounds, "x");
        r.bound = Some(1.0);
        r.observe_error(0.5);
        assert!(r.passed());
        r.observe_error(2.0);
        assert!(!r.passed());
        r.max_error = None;
        r.check("a", false, "");
        assert!(!r.passed());
    }

    #[test]
    fn streams_are_independent_and_stable() {
        use rand::Rng;
        let o = VerifyOptions::default();
        let a: u64 = o.rng("a").gen();
        assert_eq!(a, o.rng("a").gen::<u64>());
        assert_ne!(a, o.rng("b").gen::<u64>());
    }
}
