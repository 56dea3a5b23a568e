//! Fisher information carried by binary channels and the van Dam channel,
//! the three-regime classification, and the sample-mean estimator of θ.
//!
//! Sources follow `P(x = −1) = (1 + θ)/2`, so a channel of correlation `ρ`
//! produces `P(y = −1) = (1 + ρθ)/2` and the decoded spins have mean `−ρθ`.

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::BernoulliSource;
use crate::error::{domain, Error, Result};
use crate::rng;
use crate::stats::{compensated_sum, Moments};
use crate::vandam::{Engine, ProtocolRunner, VanDamConfig};

/// Half-width of the band around `2(cc′)² = 1` classified as randomness.
pub const REGIME_EPSILON: f64 = 1e-12;
/// Minimum number of runs for [`empirical_fisher`].
pub const MIN_FISHER_RUNS: usize = 1000;
/// Minimum number of trials for [`clt_suite`].
pub const MIN_CLT_TRIALS: usize = 1000;
/// `|mean|` of the standardized statistic accepted as normal.
pub const CLT_MEAN_BAND: f64 = 0.05;
/// Accepted variance range of the standardized statistic.
pub const CLT_VARIANCE_BAND: (f64, f64) = (0.9, 1.1);
/// `|skewness|` of the standardized statistic accepted as normal.
pub const CLT_SKEWNESS_BAND: f64 = 0.1;

const CLT_STREAM_DOMAIN: u64 = 0x434c_5400_0000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherQuery {
    c_minus: f64,
    c_plus: f64,
    theta: f64,
    m: f64,
}

impl FisherQuery {
    pub fn new(c_minus: f64, c_plus: f64, theta: f64, m: u64) -> Result<Self> {
        if !(c_minus.abs() <= 1.0) || !(c_plus.abs() <= 1.0) {
            return Err(domain(format!("channel correlations must lie in [-1, 1], got {c_minus}, {c_plus}")));
        }
        if !(theta.abs() < 1.0) {
            return Err(domain(format!("theta must lie in (-1, 1), got {theta}")));
        }
        Ok(Self { c_minus, c_plus, theta, m: m as f64 })
    }
}

/// Fisher information about θ in `m` outputs of a binary channel with
/// correlations `c_{−1}`, `c_1`.
///
/// A zero average correlation makes the output law independent of θ, so the
/// information is zero even where the denominator also vanishes.
pub fn fisher_binary(q: &FisherQuery) -> Result<f64> {
    if q.c_minus == q.c_plus {
        return fisher_symmetric(q.c_minus, q.theta, q.m as u64);
    }
    let avg = 0.5 * (q.c_minus + q.c_plus);
    if avg == 0.0 {
        return Ok(0.0);
    }
    let shift = 0.5 * (1.0 + q.theta) * q.c_minus - 0.5 * (1.0 - q.theta) * q.c_plus;
    let denom = 1.0 - shift * shift;
    if !(denom > 0.0) {
        return Err(Error::Singular(format!("1 - {shift}^2 = {denom}")));
    }
    Ok(q.m * avg * avg / denom)
}

/// `m c² / (1 − c²θ²)`.
pub fn fisher_symmetric(c: f64, theta: f64, m: u64) -> Result<f64> {
    let denom = 1.0 - c * c * theta * theta;
    if !(denom > 0.0) {
        return Err(Error::Singular(format!("|c theta| = {} >= 1", (c * theta).abs())));
    }
    Ok(m as f64 * c * c / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Signaling,
    Randomness,
    NoSignaling,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Signaling => "signaling",
            Regime::Randomness => "randomness",
            Regime::NoSignaling => "no-signaling",
        }
    }

    /// Limit of the van Dam Fisher information as `n → ∞`.
    pub fn limit(self) -> LimitValue {
        match self {
            Regime::Signaling => LimitValue::Infinite,
            Regime::Randomness => LimitValue::One,
            Regime::NoSignaling => LimitValue::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitValue {
    Zero,
    One,
    Infinite,
}

impl LimitValue {
    pub fn as_f64(self) -> f64 {
        match self {
            LimitValue::Zero => 0.0,
            LimitValue::One => 1.0,
            LimitValue::Infinite => f64::INFINITY,
        }
    }
}

pub fn classify_regime(c: f64, c_prime: f64) -> Result<Regime> {
    if !(c.abs() <= 1.0) || !(c_prime.abs() <= 1.0) {
        return Err(domain(format!("correlations must lie in [-1, 1], got {c}, {c_prime}")));
    }
    classify_regime_squared((c * c_prime).powi(2))
}

/// Classification from `s = (c c′)²`, which can express the boundary `s = 1/2` exactly.
pub fn classify_regime_squared(s: f64) -> Result<Regime> {
    if !(0.0..=1.0).contains(&s) {
        return Err(domain(format!("squared correlation must lie in [0, 1], got {s}")));
    }
    let gap = 2.0 * s - 1.0;
    Ok(if gap > REGIME_EPSILON {
        Regime::Signaling
    } else if gap.abs() <= REGIME_EPSILON {
        Regime::Randomness
    } else {
        Regime::NoSignaling
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherReport {
    pub value: f64,
    pub regime: Regime,
    pub limit_value: LimitValue,
}

/// Fisher information Bob holds after decoding all `2^n` bits:
/// `[2(cc′)²]^n / (1 − (cc′)^{2n} θ²)`.
pub fn fisher_vandam(c: f64, c_prime: f64, theta: f64, n: u32) -> Result<FisherReport> {
    if !(c.abs() <= 1.0) || !(c_prime.abs() <= 1.0) {
        return Err(domain(format!("correlations must lie in [-1, 1], got {c}, {c_prime}")));
    }
    fisher_vandam_squared((c * c_prime).powi(2), theta, n)
}

/// [`fisher_vandam`] parameterized by `s = (c c′)²`.
pub fn fisher_vandam_squared(s: f64, theta: f64, n: u32) -> Result<FisherReport> {
    let regime = classify_regime_squared(s)?;
    if !(theta.abs() < 1.0) {
        return Err(domain(format!("theta must lie in (-1, 1), got {theta}")));
    }
    let n = n as i32;
    let denom = 1.0 - s.powi(n) * theta * theta;
    if !(denom > 0.0) {
        return Err(Error::Singular(format!("1 - s^n theta^2 = {denom}")));
    }
    Ok(FisherReport { value: (2.0 * s).powi(n) / denom, regime, limit_value: regime.limit() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MleResult {
    pub theta_bar: f64,
    /// `sqrt(ℐ(θ)) (θ̄ − θ)`, when the true θ is known.
    pub standardized: Option<f64>,
    /// Cramér–Rao bound `1/ℐ(θ)` at the true θ if given, else at θ̄ when defined.
    pub variance_bound: Option<f64>,
}

/// `θ̄ = −mean(ŷ) / (cc′)^n` from Bob's `2^n` decoded spins.
pub fn mle_theta(decoded: &[i8], c: f64, c_prime: f64, n: u32, theta_true: Option<f64>) -> Result<MleResult> {
    if n >= usize::BITS || decoded.len() != 1usize << n {
        return Err(domain(format!("expected 2^{n} decoded spins, got {}", decoded.len())));
    }
    if decoded.iter().any(|&y| y != 1 && y != -1) {
        return Err(domain("decoded values must be ±1"));
    }
    let sum: i64 = decoded.iter().map(|&y| y as i64).sum();
    let theta_bar = theta_from_mean(sum as f64 / decoded.len() as f64, c, c_prime, n)?;
    let fisher_at = |t: f64| fisher_vandam(c, c_prime, t, n).ok().map(|r| r.value);
    let (standardized, variance_bound) = match theta_true {
        Some(t) => {
            let info = fisher_at(t).ok_or_else(|| domain(format!("theta must lie in (-1, 1), got {t}")))?;
            (Some(info.sqrt() * (theta_bar - t)), Some(1.0 / info))
        }
        None => (None, fisher_at(theta_bar).map(|i| 1.0 / i)),
    };
    Ok(MleResult { theta_bar, standardized, variance_bound })
}

/// `θ̄ = −mean / (cc′)^n` for a given mean decoded spin.
pub fn theta_from_mean(mean_spin: f64, c: f64, c_prime: f64, n: u32) -> Result<f64> {
    let rho = (c * c_prime).powi(n as i32);
    if rho == 0.0 {
        return Err(Error::Undefined("(c c')^n = 0".into()));
    }
    Ok(-mean_spin / rho)
}

/// `sqrt([2(cc′)²]^n / (1 − (cc′)^{2n} θ²)) · (θ̄ − θ)`.
pub fn standardized_statistic(theta_bar: f64, theta: f64, c: f64, c_prime: f64, n: u32) -> Result<f64> {
    Ok(fisher_vandam(c, c_prime, theta, n)?.value.sqrt() * (theta_bar - theta))
}

/// Log-likelihood of a run with `minus` spins at −1 and `plus` at +1 through a
/// symmetric channel of correlation `rho`.
fn log_likelihood(minus: f64, plus: f64, rho: f64, theta: f64) -> f64 {
    minus * (0.5 * (1.0 + rho * theta)).ln() + plus * (0.5 * (1.0 - rho * theta)).ln()
}

fn score(minus: f64, plus: f64, rho: f64, theta: f64) -> f64 {
    rho * (minus / (1.0 + rho * theta) - plus / (1.0 - rho * theta))
}

fn spin_counts(run: &[i8]) -> (f64, f64) {
    let minus = run.iter().filter(|&&y| y < 0).count();
    (minus as f64, (run.len() - minus) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalFisher {
    /// Sample variance of the score across runs.
    pub fisher: f64,
    pub score_mean: f64,
    pub score_std_error: f64,
    pub runs: usize,
}

fn check_runs<S: AsRef<[i8]>>(runs: &[S], theta: f64, rho: f64) -> Result<()> {
    if runs.len() < MIN_FISHER_RUNS {
        return Err(Error::InsufficientSample { needed: MIN_FISHER_RUNS, got: runs.len() });
    }
    if !(theta.abs() < 1.0) {
        return Err(domain(format!("theta must lie in (-1, 1), got {theta}")));
    }
    if !(rho.abs() <= 1.0) {
        return Err(domain(format!("|rho| must be at most 1, got {rho}")));
    }
    Ok(())
}

/// Score-variance estimate of the Fisher information per run, with the
/// decoded law `P(y = −1) = (1 + (cc′)^n θ)/2`. `n = 0` treats each run as
/// direct draws from the source.
pub fn empirical_fisher<S: AsRef<[i8]>>(
    runs: &[S],
    theta: f64,
    c: f64,
    c_prime: f64,
    n: u32,
) -> Result<EmpiricalFisher> {
    let rho = (c * c_prime).powi(n as i32);
    check_runs(runs, theta, rho)?;
    let scores: Vec<f64> = runs
        .iter()
        .map(|r| {
            let (minus, plus) = spin_counts(r.as_ref());
            score(minus, plus, rho, theta)
        })
        .collect();
    let m = Moments::of(&scores);
    Ok(EmpiricalFisher { fisher: m.variance, score_mean: m.mean, score_std_error: m.std_error(), runs: runs.len() })
}

/// `−∂²ℒ̄/∂θ²` by central differences of the mean log-likelihood across runs.
pub fn curvature_fisher<S: AsRef<[i8]>>(
    runs: &[S],
    theta: f64,
    c: f64,
    c_prime: f64,
    n: u32,
    step: f64,
) -> Result<f64> {
    let rho = (c * c_prime).powi(n as i32);
    check_runs(runs, theta, rho)?;
    if !(step > 0.0) || !((theta.abs() + step) * rho.abs() < 1.0) {
        return Err(domain(format!("step {step} leaves the likelihood's domain at theta = {theta}")));
    }
    let total = runs.len() as f64;
    let counts: Vec<(f64, f64)> = runs.iter().map(|r| spin_counts(r.as_ref())).collect();
    let minus = compensated_sum(counts.iter().map(|c| c.0)) / total;
    let plus = compensated_sum(counts.iter().map(|c| c.1)) / total;
    let ll = |t: f64| log_likelihood(minus, plus, rho, t);
    Ok(-(ll(theta + step) - 2.0 * ll(theta) + ll(theta - step)) / (step * step))
}

/// Runs the protocol in all-addresses mode `runs` times and returns each
/// run's decoded spins. Trial `k` draws from stream `(seed, domain, k)`.
pub fn simulate_decoded_runs(
    cfg: VanDamConfig,
    theta: f64,
    runs: usize,
    engine: Engine,
    seed: u64,
    stream_domain: u64,
) -> Result<Vec<Vec<i8>>> {
    let src = BernoulliSource::new(theta)?;
    let runner = ProtocolRunner::new(cfg, engine)?;
    (0..runs)
        .into_par_iter()
        .map_init(
            || runner.clone(),
            |runner, k| {
                let mut rng = rng::stream(seed, stream_domain, k as u64);
                let mut out = Vec::with_capacity(cfg.width());
                runner.decode_all_spins(&src, &mut rng, &mut out)?;
                Ok(out)
            },
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CltReport {
    pub trials: usize,
    /// Moments of the standardized statistic.
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub theta_bar_mean: f64,
    pub theta_bar_std_error: f64,
    pub theta_bar_variance: f64,
    /// Closed-form Fisher information `ℐ(θ)`.
    pub fisher: f64,
    /// `Var(θ̄) · ℐ(θ)`; one when the estimator attains the Cramér–Rao bound.
    pub crb_ratio: f64,
    pub normal: bool,
}

/// Whether moments fall in the bands accepted as standard normal.
pub fn clt_verdict(mean: f64, variance: f64, skewness: f64) -> bool {
    mean.abs() <= CLT_MEAN_BAND
        && (CLT_VARIANCE_BAND.0..=CLT_VARIANCE_BAND.1).contains(&variance)
        && skewness.abs() <= CLT_SKEWNESS_BAND
}

/// Repeats the full protocol `trials` times, estimating θ from each trial's
/// `2^n` decoded bits, and summarizes the standardized estimator.
pub fn clt_suite(trials: usize, cfg: VanDamConfig, theta: f64, engine: Engine, seed: u64) -> Result<CltReport> {
    if trials < MIN_CLT_TRIALS {
        return Err(Error::InsufficientSample { needed: MIN_CLT_TRIALS, got: trials });
    }
    let (c, c_prime, n) = (cfg.c(), cfg.c_prime(), cfg.n());
    let fisher = fisher_vandam(c, c_prime, theta, n)?.value;
    let src = BernoulliSource::new(theta)?;
    let runner = ProtocolRunner::new(cfg, engine)?;
    let estimates: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(
            || (runner.clone(), Vec::with_capacity(cfg.width())),
            |(runner, buf), k| {
                let mut rng = rng::stream(seed, CLT_STREAM_DOMAIN | n as u64, k as u64);
                buf.clear();
                runner.decode_all_spins(&src, &mut rng, buf)?;
                Ok(mle_theta(buf, c, c_prime, n, None)?.theta_bar)
            },
        )
        .collect::<Result<_>>()?;
    Ok(summarize_clt(&estimates, theta, fisher))
}

/// Moments of `sqrt(fisher) (θ̄ − θ)` over the given estimates.
pub fn summarize_clt(estimates: &[f64], theta: f64, fisher: f64) -> CltReport {
    let scale = fisher.sqrt();
    let standardized: Vec<f64> = estimates.iter().map(|t| scale * (t - theta)).collect();
    let z = Moments::of(&standardized);
    let t = Moments::of(estimates);
    CltReport {
        trials: estimates.len(),
        mean: z.mean,
        variance: z.variance,
        skewness: z.skewness,
        theta_bar_mean: t.mean,
        theta_bar_std_error: t.std_error(),
        theta_bar_variance: t.variance,
        fisher,
        crb_ratio: t.variance * fisher,
        normal: clt_verdict(z.mean, z.variance, z.skewness),
    }
}
