//! Reproducible sampling study of the penalty of removing every
//! non-essential ordering.
//!
//! Determinism contract: sample `i` draws its dimensions from an
//! independent ChaCha8 substream (`set_stream(i)` on the configured seed),
//! samples are evaluated in parallel but collected in index order, and all
//! serialisation is fixed-format. Two runs with the same config produce
//! byte-identical output regardless of the worker count.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{cost_of_triplets, Cost};
use crate::error::{ChainError, Result};
use crate::instance::Instance;
use crate::ordering::TripletSet;
use crate::penalty::{decimal_places, PenaltyReport};
use crate::solvers::{dp_solve, fan_out};

/// Number of fixed-width histogram bins over `[0, 1)`.
pub const HISTOGRAM_BINS: usize = 100;

/// Configuration of one sampling run.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub samples: u64,
    /// Inclusive bounds of the uniform dimension distribution.
    pub dim_min: u64,
    pub dim_max: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the default rayon pool.
    pub workers: usize,
}

impl ExperimentConfig {
    /// A config with the study's default dimension range `[1, 1000]`.
    pub fn new(n: usize, samples: u64, seed: u64) -> Self {
        ExperimentConfig {
            n,
            samples,
            dim_min: 1,
            dim_max: 1000,
            seed,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(ChainError::InvalidConfig(format!(
                "chain length must be at least 2, got {}",
                self.n
            )));
        }
        if self.samples == 0 {
            return Err(ChainError::InvalidConfig(
                "samples must be at least 1".into(),
            ));
        }
        if self.dim_min == 0 || self.dim_min > self.dim_max {
            return Err(ChainError::InvalidConfig(format!(
                "dimension bounds must satisfy 1 <= min <= max, got [{}, {}]",
                self.dim_min, self.dim_max
            )));
        }
        Ok(())
    }
}

/// One evaluated sample.
#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub sample_index: u64,
    pub dims: Vec<u64>,
    pub optimal_cost: Cost,
    pub best_essential_cost: Cost,
    pub best_essential_h: usize,
    /// Cost of the fan-out ordering at the smallest dimension, `T(E_{n,m})`.
    pub fan_out_min_cost: Cost,
    pub penalty: BigRational,
}

/// Aggregate statistics of one run. Quantiles use the nearest-rank method
/// over the non-zero penalties and are absent when every penalty is zero.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub dim_min: u64,
    pub dim_max: u64,
    pub fraction_nonzero: f64,
    pub mean_nonzero_penalty: Option<f64>,
    pub p50: Option<f64>,
    pub p90: Option<f64>,
    pub p99: Option<f64>,
    pub max: Option<f64>,
    /// Counts of the non-zero penalties in 100 bins of width 0.01.
    pub histogram: Vec<u64>,
}

/// Draws uniformly from `[lo, hi]` by rejection over the top-of-range
/// remainder, so no modulo bias.
fn uniform_u64(rng: &mut impl RngCore, lo: u64, hi: u64) -> u64 {
    let span = hi - lo + 1;
    let remainder = (u64::MAX % span + 1) % span;
    loop {
        let x = rng.next_u64();
        if remainder == 0 || x <= u64::MAX - remainder {
            return lo + x % span;
        }
    }
}

/// Triplet sets of the fan-out orderings `E_{n,0}..E_{n,n}`, extracted once
/// per run so the per-sample work is pure cost evaluation.
fn fan_out_triplets(n: usize) -> Vec<TripletSet> {
    (0..=n)
        .map(|h| fan_out(n, h).expect("h in range").triplets())
        .collect()
}

fn sample_one(cfg: &ExperimentConfig, fan_outs: &[TripletSet], index: u64) -> SampleRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let dims: Vec<u64> = (0..=cfg.n)
        .map(|_| uniform_u64(&mut rng, cfg.dim_min, cfg.dim_max))
        .collect();
    let inst = Instance::from_u64s(&dims).expect("sampled dimensions are positive");
    // Evaluate the whole fan-out family; scanning h ascending with a strict
    // comparison reproduces best_essential's smallest-h tie-breaking.
    let mut best_cost: Option<Cost> = None;
    let mut best_h = 0;
    for (h, triplets) in fan_outs.iter().enumerate() {
        let cost = cost_of_triplets(inst.dims(), triplets);
        if best_cost.as_ref().is_none_or(|c| cost < *c) {
            best_cost = Some(cost);
            best_h = h;
        }
    }
    // The non-essential-removal penalty: best essential vs. overall optimum.
    let report = PenaltyReport::from_costs(
        dp_solve(&inst).cost,
        best_cost.expect("the fan-out family is never empty"),
        "all non-essential orderings".into(),
    );
    SampleRecord {
        sample_index: index,
        dims,
        fan_out_min_cost: cost_of_triplets(inst.dims(), &fan_outs[inst.min_index()]),
        optimal_cost: report.optimal_cost,
        best_essential_cost: report.restricted_cost,
        best_essential_h: best_h,
        penalty: report.penalty,
    }
}

/// Runs the sampling study: draws `samples` instances with dimensions
/// uniform in `[dim_min, dim_max]`, records the non-essential-removal
/// penalty of each, and aggregates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<SampleRecord>, ExperimentSummary)> {
    cfg.validate()?;
    let fan_outs = fan_out_triplets(cfg.n);
    let evaluate = || {
        (0..cfg.samples)
            .into_par_iter()
            .map(|index| sample_one(cfg, &fan_outs, index))
            .collect::<Vec<_>>()
    };
    let records = if cfg.workers == 0 {
        evaluate()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| ChainError::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(evaluate)
    };
    let summary = summarize(cfg, &records)?;
    Ok((records, summary))
}

/// Aggregates per-sample records into an [`ExperimentSummary`].
pub fn summarize(cfg: &ExperimentConfig, records: &[SampleRecord]) -> Result<ExperimentSummary> {
    if records.is_empty() {
        return Err(ChainError::InvalidConfig(
            "cannot summarise an empty record set".into(),
        ));
    }
    let mut nonzero: Vec<&BigRational> = records
        .iter()
        .filter(|r| !r.penalty.is_zero())
        .map(|r| &r.penalty)
        .collect();
    nonzero.sort();

    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    for p in &nonzero {
        // penalty < 1 by the approximation bound, so the bin index fits.
        let bin = (p.numer() * BigInt::from(HISTOGRAM_BINS)) / p.denom();
        histogram[bin.to_usize().expect("penalty lies in [0, 1)")] += 1;
    }

    let quantile = |q_num: u64, q_den: u64| -> Option<f64> {
        if nonzero.is_empty() {
            return None;
        }
        let count = nonzero.len() as u64;
        let rank = (count * q_num).div_ceil(q_den).max(1);
        nonzero[(rank - 1) as usize].to_f64()
    };

    // Summing the penalties as exact rationals would accumulate an enormous
    // common denominator; the summary reports floats, so sum in f64 over the
    // sorted values (fixed order keeps the result deterministic).
    let mean = if nonzero.is_empty() {
        None
    } else {
        let sum: f64 = nonzero
            .iter()
            .map(|p| p.to_f64().expect("penalty converts to f64"))
            .sum();
        Some(sum / nonzero.len() as f64)
    };

    Ok(ExperimentSummary {
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        dim_min: cfg.dim_min,
        dim_max: cfg.dim_max,
        fraction_nonzero: nonzero.len() as f64 / records.len() as f64,
        mean_nonzero_penalty: mean,
        p50: quantile(50, 100),
        p90: quantile(90, 100),
        p99: quantile(99, 100),
        max: nonzero.last().and_then(|p| p.to_f64()),
        histogram,
    })
}

/// Writes the per-sample CSV: one fixed header, one row per sample in index
/// order, dimensions semicolon-joined, penalties as six-place decimals.
pub fn write_records_csv<W: Write>(mut out: W, n: usize, records: &[SampleRecord]) -> Result<()> {
    out.write_all(b"n,sample_index,dims,t_opt,t_best_essential,best_essential_h,penalty\n")?;
    for r in records {
        let dims = r
            .dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            n,
            r.sample_index,
            dims,
            r.optimal_cost,
            r.best_essential_cost,
            r.best_essential_h,
            decimal_places(&r.penalty, 6)
        )?;
    }
    Ok(())
}

/// Writes the summary as pretty-printed JSON with a trailing newline.
pub fn write_summary_json<W: Write>(mut out: W, summary: &ExperimentSummary) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summary)
        .map_err(|e| ChainError::InvalidConfig(format!("serialising summary: {e}")))?;
    out.write_all(b"\n")?;
    Ok(())
}
