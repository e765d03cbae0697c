//! Randomized law checking for information-loss functionals.
//!
//! Each check draws independent trials from a [`GeneratorConfig`]. Trial `k`
//! gets its own random stream derived from `(seed, k)`, so reports are the
//! same whether trials run in parallel or not. Weights and scalars are
//! generated as exact rationals; only entropies are floating point.
//!
//! Passing a check is evidence, not proof. In particular
//! [`estimate_constant`] is a falsification probe for the uniqueness half of
//! the characterization: it recovers the constant from one probe map and
//! then tries to find a map where the functional disagrees with that
//! multiple of the entropy drop.

mod functional;
mod generate;
mod laws;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use functional::{EntropyThreshold, FnFunctional, MapFunctional, SquaredLoss, ZeroFunctional};
pub use generate::{Generator, MeasureKind};
pub use laws::{
    check_additivity, check_alpha_continuity, check_bijection_invariance,
    check_conditional_equivalence, check_continuity, check_convex_linearity,
    check_faddeev_equation, check_functoriality, check_homogeneity, check_phi_additivity,
    check_reconstruction, check_strong_additivity, check_uniform_closed_form, estimate_constant,
    ConstantEstimate, CONTINUITY_LIMIT, CONTINUITY_SCHEDULE, CONTINUITY_SLACK,
};

/// Absolute tolerance for identities evaluated in double precision.
pub const ABSOLUTE_TOLERANCE: f64 = 1e-12;
/// Relative tolerance used by the additivity and homogeneity checks.
pub const RELATIVE_TOLERANCE: f64 = 1e-10;
/// Tolerance of the constant-recovery probe.
pub const PROBE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("{0} must be at least 1")]
    ZeroBound(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub max_points: usize,
    pub denominator_bound: u32,
    pub trials: usize,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(
        max_points: usize,
        denominator_bound: u32,
        trials: usize,
        seed: u64,
    ) -> Result<Self, HarnessError> {
        if max_points == 0 {
            return Err(HarnessError::ZeroBound("max_points"));
        }
        if denominator_bound == 0 {
            return Err(HarnessError::ZeroBound("denominator_bound"));
        }
        if trials == 0 {
            return Err(HarnessError::ZeroBound("trials"));
        }
        Ok(GeneratorConfig {
            max_points,
            denominator_bound,
            trials,
            seed,
        })
    }

    pub fn with_trials(self, trials: usize) -> Self {
        GeneratorConfig { trials, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self }
    }

    /// The random stream of trial `trial`.
    pub fn rng_for(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        rng
    }
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_points: 8,
            denominator_bound: 1000,
            trials: 1000,
            seed: 0,
        }
    }
}

/// Outcome of one law check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    #[serde(rename = "law")]
    pub law_name: String,
    #[serde(rename = "trials")]
    pub trials_run: usize,
    #[serde(rename = "max_deviation")]
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_tolerance: Option<f64>,
    pub passed: bool,
    /// Inputs of the first failing trial, as a document in the text format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl LawReport {
    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: {} trials, max deviation {:.3e} (tolerance {:.0e}{})",
            if self.passed { "PASS" } else { "FAIL" },
            self.law_name,
            self.trials_run,
            self.max_abs_deviation,
            self.tolerance,
            match self.relative_tolerance {
                Some(r) => format!(", relative {r:.0e}"),
                None => String::new(),
            }
        )
    }
}

/// What one trial observed. `allowed` is the bound `deviation` must not
/// exceed; `witness` is only filled in when asked for.
pub(crate) struct Trial {
    pub deviation: f64,
    pub allowed: f64,
    pub witness: Option<String>,
}

impl Trial {
    // NaN never compares, so it counts as a failure.
    fn failed(&self) -> bool {
        !matches!(
            self.deviation.partial_cmp(&self.allowed),
            Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
        )
    }
}

/// Runs `trials` independent trials. `body(rng, trial, want_witness)` must be
/// a pure function of its arguments; the first failing trial is re-run with
/// `want_witness = true` to serialize its inputs.
pub(crate) fn run_trials<F>(
    law: impl Into<String>,
    trials: usize,
    tolerance: f64,
    relative_tolerance: Option<f64>,
    config: &GeneratorConfig,
    body: F,
) -> LawReport
where
    F: Fn(&mut ChaCha8Rng, usize, bool) -> Trial + Sync,
{
    let results: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let t = body(&mut config.rng_for(k), k, false);
            (t.deviation, t.failed())
        })
        .collect();
    let mut max_dev: f64 = 0.0;
    for &(d, _) in &results {
        max_dev = if d.is_nan() {
            f64::INFINITY
        } else {
            max_dev.max(d)
        };
    }
    let first_failure = results.iter().position(|&(_, failed)| failed);
    let counterexample = first_failure.map(|k| {
        let t = body(&mut config.rng_for(k), k, true);
        let mut text = format!("# trial {k}, deviation {:e}\n", t.deviation);
        text.push_str(&t.witness.unwrap_or_default());
        text
    });
    LawReport {
        law_name: law.into(),
        trials_run: trials,
        max_abs_deviation: max_dev,
        tolerance,
        relative_tolerance,
        passed: first_failure.is_none(),
        counterexample,
    }
}
