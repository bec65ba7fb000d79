//! Monte Carlo SNR sweeps with CI-targeted stopping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{bler_asymptotic, bler_exact};
use crate::block_code::{make_bch, LinearBlockCode};
use crate::error::{Error, Result};
use crate::phy::ChannelParams;
use crate::schemes::{run_trial, SchemeKind, TrialOutcome};
use crate::sources::CorrelationModel;

use super::config::SweepConfig;
use super::rng::{point_key, trial_rng_from_key};
use super::stats::{mean_interval, wilson_interval};

pub const CONFIDENCE: f64 = 0.95;

/// Trials run between two checks of the stopping rule.
pub const BATCH_TRIALS: u64 = 10_000;

/// One row of sweep output. Simulation columns are empty for analytic-only rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub scheme: SchemeKind,
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub bler_sim: Option<f64>,
    pub bler_ci_low: Option<f64>,
    pub bler_ci_high: Option<f64>,
    pub bler_exact: f64,
    pub bler_asym: f64,
    pub throughput: Option<f64>,
    pub throughput_ci_low: Option<f64>,
    pub throughput_ci_high: Option<f64>,
}

/// Order-independent accumulator of trial outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    /// Exchanges where T2 failed to recover c1.
    pub failures_1to2: u64,
    pub failures_2to1: u64,
    /// Correctly recovered blocks, summed over both directions.
    pub successes: u64,
    pub successes_sq: u64,
    pub symbols: u64,
}

impl Tally {
    pub fn record(&mut self, outcome: &TrialOutcome) {
        let s = outcome.successes() as u64;
        self.trials += 1;
        self.failures_1to2 += !outcome.ok_1to2 as u64;
        self.failures_2to1 += !outcome.ok_2to1 as u64;
        self.successes += s;
        self.successes_sq += s * s;
        self.symbols += outcome.symbols() as u64;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.failures_1to2 += other.failures_1to2;
        self.failures_2to1 += other.failures_2to1;
        self.successes += other.successes;
        self.successes_sq += other.successes_sq;
        self.symbols += other.symbols;
        self
    }

    pub fn bler(&self) -> f64 {
        self.failures_1to2 as f64 / self.trials as f64
    }

    pub fn bler_interval(&self) -> (f64, f64) {
        wilson_interval(self.failures_1to2, self.trials, CONFIDENCE)
    }

    /// Blocks delivered per time slot of `n` symbol intervals.
    pub fn throughput(&self, n: usize) -> f64 {
        self.successes as f64 * n as f64 / self.symbols as f64
    }

    /// Interval from the per-exchange success count; every exchange of one
    /// scheme uses the same number of symbols.
    pub fn throughput_interval(&self, n: usize) -> (f64, f64) {
        let per_trial_symbols = self.symbols as f64 / self.trials as f64;
        let scale = n as f64 / per_trial_symbols;
        let (lo, hi) = mean_interval(
            self.successes as f64,
            self.successes_sq as f64,
            self.trials,
            CONFIDENCE,
        );
        ((lo * scale).max(0.0), (hi * scale).min(2.0 * scale))
    }
}

/// Correctly decoded blocks (both directions) per time slot of `n` symbols.
pub fn measure_throughput(outcomes: &[TrialOutcome], n: usize) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Empty("no trial outcomes"));
    }
    let successes: u32 = outcomes.iter().map(TrialOutcome::successes).sum();
    let symbols: usize = outcomes.iter().map(TrialOutcome::symbols).sum();
    Ok(successes as f64 / (symbols as f64 / n as f64))
}

/// Runs trials `start..end` of one point, in parallel, and tallies them.
fn run_batch(
    kind: SchemeKind,
    code: &LinearBlockCode,
    model: &CorrelationModel,
    params: &ChannelParams,
    key: [u8; 32],
    start: u64,
    end: u64,
) -> Result<Tally> {
    (start..end)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng_from_key(key, i);
            let (c1, c2) = model.generate_pair(&mut rng);
            run_trial(kind, code, params, (&c1, &c2), &mut rng)
        })
        .try_fold(Tally::default, |mut tally, outcome| {
            tally.record(&outcome?);
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

fn target_met(tally: &Tally, config: &SweepConfig) -> bool {
    if tally.trials < config.min_trials || tally.failures_1to2 == 0 {
        return false;
    }
    let (lo, hi) = tally.bler_interval();
    (hi - lo) / 2.0 <= config.target_relative_ci * tally.bler()
}

/// Simulates one SNR point until the CI target or the trial cap is reached.
pub fn simulate_point(
    config: &SweepConfig,
    code: &LinearBlockCode,
    point_index: usize,
    snr_db: f64,
) -> Result<Tally> {
    let params = ChannelParams::from_snr_db(snr_db)?;
    let model = CorrelationModel::new(code.n(), code.t())?;
    let key = point_key(config.master_seed, point_index as u64);
    let mut tally = Tally::default();
    while tally.trials < config.max_trials {
        let end = (tally.trials + BATCH_TRIALS).min(config.max_trials);
        let batch = run_batch(config.scheme, code, &model, &params, key, tally.trials, end)?;
        tally = tally.merge(batch);
        if target_met(&tally, config) {
            break;
        }
    }
    Ok(tally)
}

fn analytic_values(scheme: SchemeKind, snr_db: f64, n: usize, k: usize) -> Result<(f64, f64)> {
    let params = ChannelParams::from_snr_db(snr_db)?;
    Ok((
        bler_exact(scheme, &params, n, k),
        bler_asymptotic(scheme, &params, n, k),
    ))
}

pub fn point_from_tally(
    scheme: SchemeKind,
    snr_db: f64,
    n: usize,
    k: usize,
    tally: &Tally,
) -> Result<SweepPoint> {
    let (exact, asym) = analytic_values(scheme, snr_db, n, k)?;
    let (lo, hi) = tally.bler_interval();
    let (t_lo, t_hi) = tally.throughput_interval(n);
    Ok(SweepPoint {
        snr_db,
        scheme,
        n,
        k,
        trials: tally.trials,
        bler_sim: Some(tally.bler()),
        bler_ci_low: Some(lo),
        bler_ci_high: Some(hi),
        bler_exact: exact,
        bler_asym: asym,
        throughput: Some(tally.throughput(n)),
        throughput_ci_low: Some(t_lo),
        throughput_ci_high: Some(t_hi),
    })
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepPoint>> {
    run_sweep_with_progress(config, |_| {})
}

/// Like [`run_sweep`], calling `progress` after each finished point.
pub fn run_sweep_with_progress(
    config: &SweepConfig,
    mut progress: impl FnMut(&SweepPoint) + Send,
) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    let code = make_bch(config.code.n, config.code.k)?;
    with_pool(config.workers, || {
        config
            .snr_db_grid
            .iter()
            .enumerate()
            .map(|(i, &snr_db)| {
                let tally = simulate_point(config, &code, i, snr_db)?;
                let point = point_from_tally(config.scheme, snr_db, code.n(), code.k(), &tally)?;
                progress(&point);
                Ok(point)
            })
            .collect()
    })?
}

/// Closed-form curves only; simulation columns are left empty.
pub fn analytic_points(
    scheme: SchemeKind,
    n: usize,
    k: usize,
    grid: &[f64],
) -> Result<Vec<SweepPoint>> {
    make_bch(n, k)?;
    grid.iter()
        .map(|&snr_db| {
            let (exact, asym) = analytic_values(scheme, snr_db, n, k)?;
            Ok(SweepPoint {
                snr_db,
                scheme,
                n,
                k,
                trials: 0,
                bler_sim: None,
                bler_ci_low: None,
                bler_ci_high: None,
                bler_exact: exact,
                bler_asym: asym,
                throughput: None,
                throughput_ci_low: None,
                throughput_ci_high: None,
            })
        })
        .collect()
}
