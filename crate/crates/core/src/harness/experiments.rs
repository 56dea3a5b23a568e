//! One function per experiment. Column orders:
//!
//! - `chsh-verify`: c, chsh_exact, chsh_empirical, std_error, z_score, no_signaling_deviation, samples, seed
//! - `protocol-sweep`: n, c, c_prime, theta, trials, successes, success_rate, expected, std_error, z_score, engine, seed
//! - `fisher-curve`: n, c, c_prime, theta, fisher_closed, fisher_empirical, regime, trials, seed
//! - `disconnect`: n, c, c_prime, theta, trials, corr_xz, expected_corr, std_error, z_score, chi_square, independent, fisher_closed, engine, seed
//! - `clt`: n, c, c_prime, theta, trials, mean, variance, skewness, theta_bar_mean, theta_bar_variance, fisher_closed, crb_ratio, normal, engine, seed
//! - `regimes`: c, c_squared, c_prime, theta, n, fisher_closed, regime, limit_value

use rand::Rng;
use rayon::prelude::*;

use crate::bits::spin;
use crate::channel::{independence_statistic, BernoulliSource, PairedSamples, MIN_INDEPENDENCE_SAMPLE};
use crate::inference::{clt_suite, empirical_fisher, fisher_vandam_squared, simulate_decoded_runs, LimitValue, MIN_FISHER_RUNS};
use crate::nsbox::{chsh_correlation, make_isotropic_box, no_signaling_check, sample_box, BoxInput};
use crate::rng::{self, StreamRng};
use crate::vandam::{Address, ProtocolRunner, ProtocolTranscript, RunOutcome, VanDamConfig};

use super::config::{engine_name, CorrelationSpec, Experiment, ExperimentConfig};
use super::table::{emit_table, Cell, ResultTable};
use super::HarnessError;

/// Largest `trials · 2^n` decoded bits spent on an empirical Fisher estimate.
pub const FISHER_CURVE_BUDGET: u64 = 1 << 27;

const CHSH_DOMAIN: u64 = 1 << 40;
const SWEEP_DOMAIN: u64 = 2 << 40;
const FISHER_DOMAIN: u64 = 3 << 40;
const DISCONNECT_DOMAIN: u64 = 4 << 40;

/// Runs the configured experiment, writes the table to `cfg.out` when set,
/// and returns it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    let table = build_table(cfg)?;
    if let Some(path) = &cfg.out {
        emit_table(&table, cfg.format, Some(path))?;
    }
    Ok(table)
}

fn build_table(cfg: &ExperimentConfig) -> Result<ResultTable, HarnessError> {
    cfg.validate()?;
    let mut metadata = cfg.echo();
    metadata.push(("streams".into(), "chacha8 key=(seed, experiment|n) stream=trial".into()));
    match cfg.experiment {
        Experiment::ChshVerify => chsh_verify(cfg, metadata),
        Experiment::ProtocolSweep => protocol_sweep(cfg, metadata),
        Experiment::FisherCurve => fisher_curve(cfg, metadata),
        Experiment::Disconnect => disconnect(cfg, metadata),
        Experiment::Clt => clt(cfg, metadata),
        Experiment::Regimes => regimes(cfg, metadata),
    }
}

fn correlation(cfg: &ExperimentConfig) -> CorrelationSpec {
    cfg.c.expect("validated: experiment has a correlation")
}

fn levels(cfg: &ExperimentConfig) -> impl Iterator<Item = u32> {
    cfg.n_min..=cfg.n_max
}

fn z_score(observed: f64, expected: f64, std_error: f64) -> f64 {
    let d = observed - expected;
    if std_error > 0.0 {
        d / std_error
    } else if d == 0.0 {
        0.0
    } else {
        d.signum() * f64::INFINITY
    }
}

fn chsh_verify(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let mut table = ResultTable::new(
        &["c", "chsh_exact", "chsh_empirical", "std_error", "z_score", "no_signaling_deviation", "samples", "seed"],
        metadata,
    );
    let grid = match cfg.c {
        Some(c) => vec![c],
        None => vec![
            CorrelationSpec::Direct(-1.0),
            CorrelationSpec::Direct(-0.5),
            CorrelationSpec::Direct(0.0),
            CorrelationSpec::Direct(0.5),
            CorrelationSpec::Squared(0.5),
            CorrelationSpec::Direct(1.0),
        ],
    };
    for (k, coupling) in grid.into_iter().enumerate() {
        let c = coupling.value();
        let ns_box = make_isotropic_box(c)?;
        let exact = chsh_correlation(&ns_box);
        let deviation = no_signaling_check(&ns_box, 0.0)?.max_deviation;
        let est = estimate_chsh(c, cfg.trials, &mut rng::stream(cfg.seed, CHSH_DOMAIN | k as u64, 0))?;
        table.push(vec![
            c.into(),
            exact.into(),
            est.value.into(),
            est.std_error.into(),
            z_score(est.value, c, est.std_error).into(),
            deviation.into(),
            cfg.trials.into(),
            cfg.seed.into(),
        ]);
    }
    Ok(table)
}

/// Sampled CHSH correlation and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Draws `samples` outcomes from the isotropic box, cycling the four inputs,
/// and combines the four sampled `E[ÂB̂|a,b]`. The standard error is the
/// sampling error implied by the box, `sqrt(Σ (1 − c²)/N_ab) / 4`.
pub fn estimate_chsh(c: f64, samples: u64, rng: &mut StreamRng) -> crate::Result<ChshEstimate> {
    let ns_box = make_isotropic_box(c)?;
    let inputs = BoxInput::all();
    let mut sums = [0i64; 4];
    let mut counts = [0u64; 4];
    for k in 0..samples {
        let s = (k % 4) as usize;
        let o = sample_box(&ns_box, inputs[s], rng);
        sums[s] += o.product() as i64;
        counts[s] += 1;
    }
    let mut value = 0.0;
    let mut var = 0.0;
    for s in 0..4 {
        if counts[s] == 0 {
            return Ok(ChshEstimate { value: f64::NAN, std_error: f64::NAN });
        }
        let e = sums[s] as f64 / counts[s] as f64;
        value += if s == 3 { -e } else { e };
        var += (1.0 - c * c) / counts[s] as f64;
    }
    Ok(ChshEstimate { value: value / 4.0, std_error: var.sqrt() / 4.0 })
}

/// One protocol run per trial at a uniformly drawn address, in trial order.
pub fn sweep_outcomes(
    vd: VanDamConfig,
    theta: f64,
    trials: u64,
    engine: crate::vandam::Engine,
    seed: u64,
    domain: u64,
) -> crate::Result<Vec<RunOutcome>> {
    let src = BernoulliSource::new(theta)?;
    let runner = ProtocolRunner::new(vd, engine)?;
    let n = vd.n();
    (0..trials)
        .into_par_iter()
        .map_init(
            || runner.clone(),
            |runner, k| {
                let mut rng = rng::stream(seed, domain | n as u64, k);
                let addr = Address::new(rng.gen_range(0..1u64 << n), n)?;
                runner.sample_outcome(&src, addr, &mut rng)
            },
        )
        .collect()
}

fn protocol_sweep(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let coupling = correlation(cfg);
    let mut table = ResultTable::new(
        &[
            "n", "c", "c_prime", "theta", "trials", "successes", "success_rate", "expected", "std_error", "z_score",
            "engine", "seed",
        ],
        metadata,
    );
    for n in levels(cfg) {
        let vd = VanDamConfig::new(n, coupling.value(), cfg.c_prime)?;
        let engine = ProtocolRunner::new(vd, cfg.engine)?.engine();
        let outcomes = sweep_outcomes(vd, cfg.theta, cfg.trials, engine, cfg.seed, SWEEP_DOMAIN)?;
        let successes = outcomes.iter().filter(|o| o.decoded == o.target_bit).count() as u64;
        let rho = (coupling.squared() * cfg.c_prime * cfg.c_prime).sqrt().powi(n as i32)
            * (coupling.value() * cfg.c_prime).signum().powi(n as i32);
        let expected = 0.5 * (1.0 + rho);
        let rate = if cfg.trials > 0 { successes as f64 / cfg.trials as f64 } else { f64::NAN };
        let se = (expected * (1.0 - expected) / cfg.trials as f64).sqrt();
        table.push(vec![
            n.into(),
            coupling.value().into(),
            cfg.c_prime.into(),
            cfg.theta.into(),
            cfg.trials.into(),
            successes.into(),
            rate.into(),
            expected.into(),
            se.into(),
            z_score(rate, expected, se).into(),
            engine_name(engine).into(),
            cfg.seed.into(),
        ]);
    }
    Ok(table)
}

fn fisher_curve(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let coupling = correlation(cfg);
    let s = coupling.squared() * cfg.c_prime * cfg.c_prime;
    let mut table = ResultTable::new(
        &["n", "c", "c_prime", "theta", "fisher_closed", "fisher_empirical", "regime", "trials", "seed"],
        metadata,
    );
    for n in levels(cfg) {
        let closed = fisher_vandam_squared(s, cfg.theta, n)?;
        let affordable = n < 63 && cfg.trials.checked_mul(1u64 << n).is_some_and(|w| w <= FISHER_CURVE_BUDGET);
        let empirical = if cfg.trials >= MIN_FISHER_RUNS as u64 && affordable {
            let vd = VanDamConfig::new(n, coupling.value(), cfg.c_prime)?;
            let runs = simulate_decoded_runs(vd, cfg.theta, cfg.trials as usize, cfg.engine, cfg.seed, FISHER_DOMAIN | n as u64)?;
            empirical_fisher(&runs, cfg.theta, coupling.value(), cfg.c_prime, n)?.fisher
        } else {
            f64::NAN
        };
        table.push(vec![
            n.into(),
            coupling.value().into(),
            cfg.c_prime.into(),
            cfg.theta.into(),
            closed.value.into(),
            empirical.into(),
            closed.regime.label().into(),
            cfg.trials.into(),
            cfg.seed.into(),
        ]);
    }
    Ok(table)
}

fn disconnect(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let coupling = correlation(cfg);
    let s = coupling.squared() * cfg.c_prime * cfg.c_prime;
    let mut table = ResultTable::new(
        &[
            "n", "c", "c_prime", "theta", "trials", "corr_xz", "expected_corr", "std_error", "z_score", "chi_square",
            "independent", "fisher_closed", "engine", "seed",
        ],
        metadata,
    );
    for n in levels(cfg) {
        let vd = VanDamConfig::new(n, coupling.value(), cfg.c_prime)?;
        let engine = ProtocolRunner::new(vd, cfg.engine)?.engine();
        let outcomes = sweep_outcomes(vd, cfg.theta, cfg.trials, engine, cfg.seed, DISCONNECT_DOMAIN)?;
        let xs: Vec<i8> = outcomes.iter().map(|o| spin(o.target_bit)).collect();
        let ys: Vec<i8> = outcomes.iter().map(|o| spin(o.decoded)).collect();
        let samples = PairedSamples::new(xs, ys)?;
        let corr = if samples.is_empty() { f64::NAN } else { crate::channel::empirical_correlation(&samples)? };
        let expected = vd.effective_correlation();
        let se = ((1.0 - expected * expected) / cfg.trials as f64).sqrt();
        let (chi, independent) = if samples.len() >= MIN_INDEPENDENCE_SAMPLE {
            let r = independence_statistic(&samples)?;
            (Cell::from(r.chi_square), Cell::from(r.threshold_pass))
        } else {
            (Cell::from(f64::NAN), Cell::from(""))
        };
        table.push(vec![
            n.into(),
            coupling.value().into(),
            cfg.c_prime.into(),
            cfg.theta.into(),
            cfg.trials.into(),
            corr.into(),
            expected.into(),
            se.into(),
            z_score(corr, expected, se).into(),
            chi,
            independent,
            fisher_vandam_squared(s, cfg.theta, n)?.value.into(),
            engine_name(engine).into(),
            cfg.seed.into(),
        ]);
    }
    Ok(table)
}

fn clt(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let coupling = correlation(cfg);
    let mut table = ResultTable::new(
        &[
            "n", "c", "c_prime", "theta", "trials", "mean", "variance", "skewness", "theta_bar_mean",
            "theta_bar_variance", "fisher_closed", "crb_ratio", "normal", "engine", "seed",
        ],
        metadata,
    );
    for n in levels(cfg) {
        let vd = VanDamConfig::new(n, coupling.value(), cfg.c_prime)?;
        let engine = ProtocolRunner::new(vd, cfg.engine)?.engine();
        let r = clt_suite(cfg.trials as usize, vd, cfg.theta, engine, cfg.seed)?;
        table.push(vec![
            n.into(),
            coupling.value().into(),
            cfg.c_prime.into(),
            cfg.theta.into(),
            cfg.trials.into(),
            r.mean.into(),
            r.variance.into(),
            r.skewness.into(),
            r.theta_bar_mean.into(),
            r.theta_bar_variance.into(),
            r.fisher.into(),
            r.crb_ratio.into(),
            r.normal.into(),
            engine_name(engine).into(),
            cfg.seed.into(),
        ]);
    }
    Ok(table)
}

fn limit_label(l: LimitValue) -> &'static str {
    match l {
        LimitValue::Zero => "0",
        LimitValue::One => "1",
        LimitValue::Infinite => "inf",
    }
}

fn regimes(cfg: &ExperimentConfig, metadata: Vec<(String, String)>) -> Result<ResultTable, HarnessError> {
    let mut table = ResultTable::new(
        &["c", "c_squared", "c_prime", "theta", "n", "fisher_closed", "regime", "limit_value"],
        metadata,
    );
    let grid: Vec<CorrelationSpec> = match cfg.c {
        Some(c) => vec![c],
        None => {
            let mut g: Vec<CorrelationSpec> = (0..=20).map(|k| CorrelationSpec::Direct(k as f64 / 20.0)).collect();
            g.push(CorrelationSpec::Squared(0.5));
            g
        }
    };
    for coupling in grid {
        let s = coupling.squared() * cfg.c_prime * cfg.c_prime;
        for n in levels(cfg) {
            let r = fisher_vandam_squared(s, cfg.theta, n)?;
            table.push(vec![
                coupling.value().into(),
                coupling.squared().into(),
                cfg.c_prime.into(),
                cfg.theta.into(),
                n.into(),
                r.value.into(),
                r.regime.label().into(),
                limit_label(r.limit_value).into(),
            ]);
        }
    }
    Ok(table)
}

/// Flat transcript records: n, c, c_prime, address, x_bits, x_target, wire_bit, received_bit, decoded.
pub fn transcript_table(transcripts: &[ProtocolTranscript], metadata: Vec<(String, String)>) -> ResultTable {
    let mut table = ResultTable::new(
        &["n", "c", "c_prime", "address", "x_bits", "x_target", "wire_bit", "received_bit", "decoded"],
        metadata,
    );
    let bit = |b: bool| Cell::Int(b as i64);
    for t in transcripts {
        table.push(vec![
            t.n.into(),
            t.c.into(),
            t.c_prime.into(),
            t.address.into(),
            Cell::Text(t.alice_bit_string()),
            bit(t.target_bit),
            bit(t.wire_bit),
            bit(t.received_bit),
            bit(t.decoded),
        ]);
    }
    table
}
