//! ±1-valued sources and symmetric binary channels.

use rand::Rng;

use crate::error::{domain, Error, Result};

/// 99% quantile of the chi-square distribution with one degree of freedom.
pub const CHI2_1DOF_99: f64 = 6.634_896_601_021_214;

/// Minimum sample size accepted by [`independence_statistic`].
pub const MIN_INDEPENDENCE_SAMPLE: usize = 100;

/// A ±1 source with `P(x = −1) = (1 + θ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliSource {
    theta: f64,
}

impl BernoulliSource {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&theta) {
            return Err(domain(format!("theta must lie in [-1, 1], got {theta}")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn p_minus(&self) -> f64 {
        0.5 * (1.0 + self.theta)
    }

    /// One draw as a bit: `true` is the spin −1.
    #[inline]
    pub fn sample_bit<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.gen::<f64>() < self.p_minus()
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i8 {
        if self.sample_bit(rng) {
            -1
        } else {
            1
        }
    }
}

pub fn draw_source<R: Rng + ?Sized>(src: &BernoulliSource, m: usize, rng: &mut R) -> Result<Vec<i8>> {
    if m == 0 {
        return Err(domain("sample count must be at least 1"));
    }
    Ok((0..m).map(|_| src.sample(rng)).collect())
}

/// Memoryless channel on ±1 whose output equals its input with probability `(1 + ρ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricBinaryChannel {
    rho: f64,
}

impl SymmetricBinaryChannel {
    pub const PERFECT: SymmetricBinaryChannel = SymmetricBinaryChannel { rho: 1.0 };

    pub fn new(rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(domain(format!("channel correlation must lie in [-1, 1], got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn agreement(&self) -> f64 {
        0.5 * (1.0 + self.rho)
    }

    /// Whether this transmission flips its input.
    #[inline]
    pub fn flips<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        if self.rho == 1.0 {
            false
        } else if self.rho == -1.0 {
            true
        } else {
            rng.gen::<f64>() >= self.agreement()
        }
    }
}

#[inline]
pub fn transmit<R: Rng + ?Sized>(ch: &SymmetricBinaryChannel, x: i8, rng: &mut R) -> i8 {
    if ch.flips(rng) {
        -x
    } else {
        x
    }
}

/// Series composition; correlations multiply.
pub fn concatenate(first: &SymmetricBinaryChannel, second: &SymmetricBinaryChannel) -> SymmetricBinaryChannel {
    SymmetricBinaryChannel { rho: first.rho * second.rho }
}

/// `k` physical copies of one channel in series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelChain {
    link: SymmetricBinaryChannel,
    copies: u32,
}

impl ChannelChain {
    pub fn new(link: SymmetricBinaryChannel, copies: u32) -> Self {
        Self { link, copies }
    }

    /// The single channel equivalent to the chain.
    pub fn collapsed(&self) -> SymmetricBinaryChannel {
        (0..self.copies).fold(SymmetricBinaryChannel::PERFECT, |acc, _| concatenate(&acc, &self.link))
    }

    /// Sends a bit through every copy in turn.
    #[inline]
    pub fn send_bit<R: Rng + ?Sized>(&self, bit: bool, rng: &mut R) -> bool {
        let mut out = bit;
        for _ in 0..self.copies {
            out ^= self.link.flips(rng);
        }
        out
    }

    pub fn transmit<R: Rng + ?Sized>(&self, x: i8, rng: &mut R) -> i8 {
        (0..self.copies).fold(x, |v, _| transmit(&self.link, v, rng))
    }
}

/// Matched ±1 input/output sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSamples {
    inputs: Vec<i8>,
    outputs: Vec<i8>,
}

impl PairedSamples {
    pub fn new(inputs: Vec<i8>, outputs: Vec<i8>) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(domain(format!(
                "length mismatch: {} inputs, {} outputs",
                inputs.len(),
                outputs.len()
            )));
        }
        if inputs.iter().chain(&outputs).any(|&v| v != 1 && v != -1) {
            return Err(domain("samples must be ±1"));
        }
        Ok(Self { inputs, outputs })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[i8] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[i8] {
        &self.outputs
    }

    /// Counts indexed `[input is −1][output is −1]`.
    pub fn contingency(&self) -> [[u64; 2]; 2] {
        let mut t = [[0u64; 2]; 2];
        for (&x, &y) in self.inputs.iter().zip(&self.outputs) {
            t[(x < 0) as usize][(y < 0) as usize] += 1;
        }
        t
    }
}

/// `(1/m) Σ xᵢ yᵢ`.
pub fn empirical_correlation(s: &PairedSamples) -> Result<f64> {
    if s.is_empty() {
        return Err(domain("empty sample"));
    }
    let sum: i64 = s.inputs.iter().zip(&s.outputs).map(|(&x, &y)| (x * y) as i64).sum();
    Ok(sum as f64 / s.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceReport {
    pub abs_correlation: f64,
    pub chi_square: f64,
    /// `chi_square` is below the 99% critical value for one degree of freedom.
    pub threshold_pass: bool,
}

/// Pearson chi-square on the 2×2 input/output contingency table.
///
/// A table with an empty row or column carries no evidence of dependence and
/// scores zero.
pub fn independence_statistic(s: &PairedSamples) -> Result<IndependenceReport> {
    if s.len() < MIN_INDEPENDENCE_SAMPLE {
        return Err(Error::InsufficientSample { needed: MIN_INDEPENDENCE_SAMPLE, got: s.len() });
    }
    let chi_square = chi_square_2x2(&s.contingency());
    let abs_correlation = empirical_correlation(s)?.abs();
    Ok(IndependenceReport { abs_correlation, chi_square, threshold_pass: chi_square < CHI2_1DOF_99 })
}

pub fn chi_square_2x2(t: &[[u64; 2]; 2]) -> f64 {
    let total = (t[0][0] + t[0][1] + t[1][0] + t[1][1]) as f64;
    let rows = [(t[0][0] + t[0][1]) as f64, (t[1][0] + t[1][1]) as f64];
    let cols = [(t[0][0] + t[1][0]) as f64, (t[0][1] + t[1][1]) as f64];
    if rows.contains(&0.0) || cols.contains(&0.0) {
        return 0.0;
    }
    let mut chi = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let expected = rows[i] * cols[j] / total;
            let d = t[i][j] as f64 - expected;
            chi += d * d / expected;
        }
    }
    chi
}
