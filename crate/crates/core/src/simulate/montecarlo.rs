//! Monte Carlo rounds of the protocol: pick a probe time uniformly, measure
//! the position, score whether it is positive.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{marginal_density, position_grid};
use crate::error::{Error, Result};
use crate::numerics::grid::RealGrid;
use crate::protocol::QuantumState;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub seed: u64,
    pub n_rounds: u64,
    pub p3_hat: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct McOptions {
    /// Worker threads; None uses the global pool.
    pub workers: Option<usize>,
}

/// Inverse-CDF sampler of a gridded density, uniform within each cell.
#[derive(Debug, Clone)]
pub struct DensitySampler {
    points: Vec<f64>,
    cdf: Vec<f64>,
}

impl DensitySampler {
    pub fn new(density: &RealGrid) -> Result<Self> {
        let (x, y) = (density.points(), density.values());
        if x.len() < 2 {
            return Err(Error::InvalidParameter(
                "density grid needs at least two points".into(),
            ));
        }
        let mut cdf = Vec::with_capacity(x.len());
        cdf.push(0.0);
        for i in 1..x.len() {
            let cell = 0.5 * (y[i - 1] + y[i]) * (x[i] - x[i - 1]);
            cdf.push(cdf[i - 1] + cell.max(0.0));
        }
        let total = *cdf.last().expect("non-empty");
        if !(total > 0.0) {
            return Err(Error::GridCoverage { mass: total });
        }
        cdf.iter_mut().for_each(|c| *c /= total);
        Ok(Self {
            points: x.to_vec(),
            cdf,
        })
    }

    /// Position with CDF value u ∈ [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        let i = self
            .cdf
            .partition_point(|&c| c <= u)
            .clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (x0, x1) = (self.points[i - 1], self.points[i]);
        if c1 > c0 {
            x0 + (u - c0) / (c1 - c0) * (x1 - x0)
        } else {
            x0
        }
    }

    /// The sampler's own CDF at q (piecewise linear).
    pub fn cdf(&self, q: f64) -> f64 {
        let i = self.points.partition_point(|&p| p <= q);
        if i == 0 {
            return 0.0;
        }
        if i >= self.points.len() {
            return 1.0;
        }
        let (x0, x1) = (self.points[i - 1], self.points[i]);
        self.cdf[i - 1] + (q - x0) / (x1 - x0) * (self.cdf[i] - self.cdf[i - 1])
    }
}

/// One measurement round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub round: u64,
    pub probe: usize,
    pub position: f64,
    pub score: f64,
}

/// Samplers for the three probing times.
pub struct ProtocolSampler {
    samplers: [DensitySampler; 3],
    seed: u64,
}

impl ProtocolSampler {
    pub fn new(state: &QuantumState, tau: f64, seed: u64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "probing ratio must be positive, got {tau}"
            )));
        }
        let grid = position_grid(state, tau)?;
        let build = |k| DensitySampler::new(&marginal_density(state, k, tau, &grid)?);
        Ok(Self {
            samplers: [build(0)?, build(1)?, build(2)?],
            seed,
        })
    }

    /// Round r is driven by its own ChaCha stream, so results do not depend
    /// on how rounds are scheduled.
    pub fn round(&self, r: u64) -> Round {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(r);
        let probe = rng.gen_range(0..3usize);
        let position = self.samplers[probe].quantile(rng.gen::<f64>());
        let score = if position > 0.0 {
            1.0
        } else if position < 0.0 {
            0.0
        } else {
            0.5
        };
        Round {
            round: r,
            probe,
            position,
            score,
        }
    }

    // Scores are multiples of 1/2: count half-units exactly.
    fn half_units(&self, range: std::ops::Range<u64>) -> (u64, u64) {
        range.fold((0, 0), |(s, s2), r| {
            let h = (2.0 * self.round(r).score) as u64;
            (s + h, s2 + h * h)
        })
    }
}

pub fn run_protocol(
    state: &QuantumState,
    tau: f64,
    n_rounds: u64,
    seed: u64,
) -> Result<McEstimate> {
    run_protocol_with(state, tau, n_rounds, seed, McOptions::default())
}

pub fn run_protocol_with(
    state: &QuantumState,
    tau: f64,
    n_rounds: u64,
    seed: u64,
    opts: McOptions,
) -> Result<McEstimate> {
    if n_rounds == 0 {
        return Err(Error::InvalidParameter(
            "number of rounds must be positive".into(),
        ));
    }
    let sampler = ProtocolSampler::new(state, tau, seed)?;
    let chunks = n_rounds.div_ceil(CHUNK);
    let tally = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| sampler.half_units(c * CHUNK..((c + 1) * CHUNK).min(n_rounds)))
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (s, s2) = match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?
            .install(tally),
        None => tally(),
    };
    let n = n_rounds as f64;
    let mean = s as f64 / (2.0 * n);
    let second = s2 as f64 / (4.0 * n);
    let var = if n_rounds > 1 {
        (second - mean * mean).max(0.0) * n / (n - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        seed,
        n_rounds,
        p3_hat: mean,
        stderr: (var / n).sqrt(),
    })
}

/// Per-round CSV (round, probe, position, score) for the first `n_rounds`.
pub fn write_rounds_csv<W: Write>(
    out: W,
    state: &QuantumState,
    tau: f64,
    n_rounds: u64,
    seed: u64,
) -> Result<()> {
    let sampler = ProtocolSampler::new(state, tau, seed)?;
    let mut w = csv::Writer::from_writer(out);
    for r in 0..n_rounds {
        w.serialize(sampler.round(r))
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
