//! Seeded Poisson sampling and Monte-Carlo estimation of degenerate
//! factorial moments.
//!
//! Sampling is CDF inversion with the pmf recurrence
//! `p(i+1) = p(i)·rate/(i+1)`, deterministic for a given seed. The
//! integrand `(mX+r)_{n,λ}` is evaluated in exact rational arithmetic per
//! sample (the alternating-sign product would cancel catastrophically in
//! floating point) and converted to a double once per distinct sample
//! value; only the mean/standard-error accumulation itself runs in
//! floating point, as a single-pass Welford update.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::dowling::deg_r_dowling_poly;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::stirling::{deg_bell_poly, deg_falling_eval, DegParams};

/// Inversion-loop rates stay desk scale.
pub const MAX_RATE: f64 = 100.0;

/// Largest moment order the default tolerance budget supports.
pub const MAX_MOMENT_ORDER: usize = 6;

/// Sampling plan: Poisson rate, RNG seed, and sample count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonSpec {
    pub rate: f64,
    pub seed: u64,
    pub n_samples: usize,
}

impl PoissonSpec {
    pub fn new(rate: f64, seed: u64, n_samples: usize) -> Result<PoissonSpec> {
        if !(rate > 0.0 && rate <= MAX_RATE && rate.is_finite()) {
            return Err(Error::RateOutOfRange(rate, MAX_RATE));
        }
        if n_samples < 1 {
            return Err(Error::InvalidParams("n_samples must be >= 1".into()));
        }
        Ok(PoissonSpec { rate, seed, n_samples })
    }
}

/// Infinite stream of Poisson draws. Substream `shard` of a seed is an
/// independent, deterministic stream; shard 0 is the default sequential
/// stream.
pub struct PoissonSampler {
    rng: ChaCha12Rng,
    rate: f64,
    p0: f64,
}

impl PoissonSampler {
    pub fn stream(spec: &PoissonSpec, shard: u64) -> PoissonSampler {
        let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
        rng.set_stream(shard);
        PoissonSampler { rng, rate: spec.rate, p0: (-spec.rate).exp() }
    }

    /// One draw by walking the CDF; the guard on `p > 0` bounds the walk
    /// when accumulated rounding leaves `u` above the saturated CDF.
    pub fn draw(&mut self) -> u64 {
        let u: f64 = self.rng.gen::<f64>();
        let mut k = 0u64;
        let mut p = self.p0;
        let mut acc = p;
        while u > acc && p > 0.0 {
            k += 1;
            p *= self.rate / (k as f64);
            acc += p;
        }
        k
    }
}

impl Iterator for PoissonSampler {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.draw())
    }
}

/// The spec's samples as a vector, from substream `shard`.
pub fn poisson_sample(spec: &PoissonSpec, shard: u64) -> Vec<u64> {
    PoissonSampler::stream(spec, shard).take(spec.n_samples).collect()
}

/// Single-pass mean/variance accumulator (Welford), with a merge rule so
/// sharded runs combine to the sequential result up to floating-point
/// reassociation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = (self.n + other.n) as f64;
        let d = other.mean - self.mean;
        self.m2 += other.m2 + d * d * (self.n as f64) * (other.n as f64) / n;
        self.mean += d * (other.n as f64) / n;
        self.n += other.n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation over sqrt(n); zero for constant data or
    /// fewer than two samples.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// A Monte-Carlo moment estimate next to its exact target.
#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Closed form evaluated at the rational α, converted once.
    pub target_exact: f64,
}

impl McEstimate {
    pub fn abs_error(&self) -> f64 {
        (self.mean - self.target_exact).abs()
    }

    /// The statistical acceptance rule `|mean - target| <= k·SE`; with a
    /// zero standard error this demands exact equality.
    pub fn within(&self, k_sigma: f64) -> bool {
        self.abs_error() <= k_sigma * self.std_error
    }
}

fn check_rate(spec: &PoissonSpec, expected: f64) -> Result<()> {
    if (spec.rate - expected).abs() > 1e-9 * expected.max(1.0) {
        return Err(Error::RateMismatch { spec: spec.rate, expected });
    }
    Ok(())
}

/// Per-sample-value cache of the exact integrand: Poisson draws repeat
/// heavily at desk-scale rates, so each distinct value is evaluated in
/// rational arithmetic once and converted once.
struct IntegrandCache<F: Fn(u64) -> Rat> {
    values: Vec<Option<f64>>,
    f: F,
}

impl<F: Fn(u64) -> Rat> IntegrandCache<F> {
    fn new(f: F) -> Self {
        IntegrandCache { values: Vec::new(), f }
    }

    fn get(&mut self, x: u64) -> f64 {
        let i = x as usize;
        if i >= self.values.len() {
            self.values.resize(i + 1, None);
        }
        *self.values[i].get_or_insert_with(|| (self.f)(x).to_f64())
    }
}

fn run_estimate(
    spec: &PoissonSpec,
    target: Rat,
    integrand: impl Fn(u64) -> Rat,
) -> McEstimate {
    let mut cache = IntegrandCache::new(integrand);
    let mut acc = Accumulator::default();
    let mut sampler = PoissonSampler::stream(spec, 0);
    for _ in 0..spec.n_samples {
        let x = sampler.draw();
        acc.push(cache.get(x));
    }
    McEstimate {
        mean: acc.mean(),
        std_error: acc.std_error(),
        n_samples: spec.n_samples,
        seed: spec.seed,
        target_exact: target.to_f64(),
    }
}

/// Estimates `E[(mX+r)_{n,λ}]` for `X ~ Poi(α/m)` and compares against the
/// exact `D⁽ʳ⁾_{m,λ}(n,α)`. The spec's rate must equal `α/m`.
pub fn estimate_deg_moment(
    params: &DegParams,
    n: usize,
    alpha: &Rat,
    spec: &PoissonSpec,
) -> Result<McEstimate> {
    if n > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge(n, MAX_MOMENT_ORDER));
    }
    check_rate(spec, (alpha.checked_div(&params.m_rat())?).to_f64())?;
    let target = deg_r_dowling_poly(params, n).eval(alpha);
    let m = params.m_rat();
    let r = params.r_rat();
    let lam = params.lambda().clone();
    Ok(run_estimate(spec, target, move |x| {
        let arg = &m * &Rat::from_int(x as i64) + &r;
        deg_falling_eval(&arg, n, &lam)
    }))
}

/// Estimates the raw moment `E[X^n]` for `X ~ Poi(α)` against `φ_n(α)`,
/// or the degenerate variant `E[(X)_{n,μ}]` against `φ_{n,μ}(α)` when a
/// step `μ` is supplied.
pub fn estimate_raw_moment(
    n: usize,
    alpha: &Rat,
    mu: Option<&Rat>,
    spec: &PoissonSpec,
) -> Result<McEstimate> {
    if n > MAX_MOMENT_ORDER {
        return Err(Error::MomentOrderTooLarge(n, MAX_MOMENT_ORDER));
    }
    check_rate(spec, alpha.to_f64())?;
    let step = mu.cloned().unwrap_or_else(Rat::zero);
    let target = deg_bell_poly(n, &step).eval(alpha);
    Ok(run_estimate(spec, target, move |x| {
        deg_falling_eval(&Rat::from_int(x as i64), n, &step)
    }))
}
