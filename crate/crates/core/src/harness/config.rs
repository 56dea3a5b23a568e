use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::vandam::{Engine, MAX_LEVELS};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Exact and sampled CHSH correlation of isotropic boxes.
    ChshVerify,
    /// Decoding success rate of the protocol for each n.
    ProtocolSweep,
    /// Closed-form and score-variance Fisher information for each n.
    FisherCurve,
    /// Input/output correlation and independence through a noisy link.
    Disconnect,
    /// Moments of the standardized estimator and the Cramér–Rao ratio.
    Clt,
    /// Regime classification and closed-form Fisher information over c.
    Regimes,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ChshVerify => "chsh-verify",
            Experiment::ProtocolSweep => "protocol-sweep",
            Experiment::FisherCurve => "fisher-curve",
            Experiment::Disconnect => "disconnect",
            Experiment::Clt => "clt",
            Experiment::Regimes => "regimes",
        }
    }

    /// Whether the experiment needs a Bell–CHSH correlation supplied.
    fn needs_c(self) -> bool {
        !matches!(self, Experiment::ChshVerify | Experiment::Regimes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Auto,
    Full,
    Path,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Auto => Engine::Auto,
            EngineArg::Full => Engine::FullTree,
            EngineArg::Path => Engine::PathSampled,
        }
    }
}

pub fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Auto => "auto",
        Engine::FullTree => "full",
        Engine::PathSampled => "path",
    }
}

/// Bell–CHSH correlation as supplied: directly, or by its square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum CorrelationSpec {
    Direct(f64),
    Squared(f64),
}

impl CorrelationSpec {
    pub fn value(self) -> f64 {
        match self {
            CorrelationSpec::Direct(c) => c,
            CorrelationSpec::Squared(s) => s.sqrt(),
        }
    }

    pub fn squared(self) -> f64 {
        match self {
            CorrelationSpec::Direct(c) => c * c,
            CorrelationSpec::Squared(s) => s,
        }
    }
}

/// Command line of `nonlocal-lab`.
#[derive(Debug, Clone, Parser)]
#[command(name = "nonlocal-lab", version, about = "NS-box, van Dam channel and Fisher information experiments")]
pub struct Cli {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Bell–CHSH correlation of every box pair.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "c2")]
    pub c: Option<f64>,
    /// The square of the Bell–CHSH correlation (c = +sqrt).
    #[arg(long)]
    pub c2: Option<f64>,
    /// Base correlation of each classical link; the link chain has n copies.
    #[arg(long = "c-prime", default_value_t = 1.0, allow_hyphen_values = true)]
    pub c_prime: f64,
    /// Source parameter, P(x = -1) = (1 + theta)/2.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long = "n-min", default_value_t = 1)]
    pub n_min: u32,
    #[arg(long = "n-max", default_value_t = 8)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// How protocol runs realize the box tree.
    #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
    pub engine: EngineArg,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub c: Option<CorrelationSpec>,
    pub c_prime: f64,
    pub theta: f64,
    pub n_min: u32,
    pub n_max: u32,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub engine: Engine,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            c: None,
            c_prime: 1.0,
            theta: 0.0,
            n_min: 1,
            n_max: 8,
            trials: 1000,
            seed: 0,
            format: Format::Csv,
            out: None,
            engine: Engine::Auto,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, HarnessError> {
        let c = match (cli.c, cli.c2) {
            (Some(c), _) => Some(CorrelationSpec::Direct(c)),
            (None, Some(s)) => Some(CorrelationSpec::Squared(s)),
            (None, None) => None,
        };
        let out = cli.out.filter(|p| p.as_os_str() != "-");
        let cfg = Self {
            experiment: cli.experiment,
            c,
            c_prime: cli.c_prime,
            theta: cli.theta,
            n_min: cli.n_min,
            n_max: cli.n_max,
            trials: cli.trials,
            seed: cli.seed,
            format: cli.format,
            out,
            engine: cli.engine.into(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let usage = |m: String| Err(HarnessError::Usage(m));
        match self.c {
            Some(CorrelationSpec::Direct(c)) if !(c.abs() <= 1.0) => return usage(format!("--c must lie in [-1, 1], got {c}")),
            Some(CorrelationSpec::Squared(s)) if !(0.0..=1.0).contains(&s) => {
                return usage(format!("--c2 must lie in [0, 1], got {s}"))
            }
            None if self.experiment.needs_c() => {
                return usage(format!("{} needs --c or --c2", self.experiment.name()))
            }
            _ => {}
        }
        if !(self.c_prime.abs() <= 1.0) {
            return usage(format!("--c-prime must lie in [-1, 1], got {}", self.c_prime));
        }
        if !(self.theta.abs() < 1.0) {
            return usage(format!("--theta must lie in (-1, 1), got {}", self.theta));
        }
        if self.n_min == 0 || self.n_min > self.n_max || self.n_max > MAX_LEVELS {
            return usage(format!(
                "need 1 <= n-min <= n-max <= {MAX_LEVELS}, got {}..{}",
                self.n_min, self.n_max
            ));
        }
        Ok(())
    }

    /// Every field that determines the output, as ordered key/value pairs.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut m = vec![("experiment".to_string(), self.experiment.name().to_string())];
        match self.c {
            Some(CorrelationSpec::Direct(c)) => m.push(("c".into(), format!("{c:?}"))),
            Some(CorrelationSpec::Squared(s)) => m.push(("c2".into(), format!("{s:?}"))),
            None => {}
        }
        m.push(("c_prime".into(), format!("{:?}", self.c_prime)));
        m.push(("theta".into(), format!("{:?}", self.theta)));
        m.push(("n_min".into(), self.n_min.to_string()));
        m.push(("n_max".into(), self.n_max.to_string()));
        m.push(("trials".into(), self.trials.to_string()));
        m.push(("seed".into(), self.seed.to_string()));
        m.push(("format".into(), self.format.to_string()));
        m.push(("engine".into(), engine_name(self.engine).into()));
        m.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
        m
    }

    /// The command-line arguments that reproduce this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.experiment.name().to_string()];
        match self.c {
            Some(CorrelationSpec::Direct(c)) => args.extend(["--c".into(), format!("{c:?}")]),
            Some(CorrelationSpec::Squared(s)) => args.extend(["--c2".into(), format!("{s:?}")]),
            None => {}
        }
        args.extend([
            "--c-prime".into(),
            format!("{:?}", self.c_prime),
            "--theta".into(),
            format!("{:?}", self.theta),
            "--n-min".into(),
            self.n_min.to_string(),
            "--n-max".into(),
            self.n_max.to_string(),
            "--trials".into(),
            self.trials.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            "--format".into(),
            self.format.to_string(),
            "--engine".into(),
            engine_name(self.engine).into(),
        ]);
        args
    }
}
