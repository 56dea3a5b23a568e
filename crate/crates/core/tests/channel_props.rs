use nonlocal_lab::channel::{
    concatenate, draw_source, empirical_correlation, independence_statistic, transmit, BernoulliSource, ChannelChain,
    PairedSamples, SymmetricBinaryChannel,
};
use nonlocal_lab::rng::stream;
use proptest::prelude::*;
use rand::Rng;

const N: usize = 1_000_000;

fn binomial_sigma(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn channels_are_symmetric() {
    for (k, rho) in [-0.9, 0.0, 0.9].into_iter().enumerate() {
        let ch = SymmetricBinaryChannel::new(rho).unwrap();
        let mut rng = stream(21, 0, k as u64);
        let mut agree = [0usize; 2];
        for t in 0..N {
            let x = if t % 2 == 0 { 1 } else { -1 };
            agree[t % 2] += (transmit(&ch, x, &mut rng) == x) as usize;
        }
        let half = N / 2;
        let (fp, fm) = (agree[0] as f64 / half as f64, agree[1] as f64 / half as f64);
        let p = (1.0 + rho) / 2.0;
        let sigma_diff = (2.0 * p * (1.0 - p) / half as f64).sqrt();
        if sigma_diff == 0.0 {
            assert_eq!(fp, fm);
        } else {
            assert!((fp - fm).abs() <= 4.0 * sigma_diff, "rho = {rho}: {fp} vs {fm}");
        }
        assert!((fp - p).abs() <= 4.0 * binomial_sigma(p, half));
    }
}

#[test]
fn half_correlated_channel_agrees_three_quarters() {
    let ch = SymmetricBinaryChannel::new(0.5).unwrap();
    let mut rng = stream(22, 0, 0);
    let agree = (0..N).filter(|_| transmit(&ch, 1, &mut rng) == 1).count();
    let f = agree as f64 / N as f64;
    assert!((f - 0.75).abs() <= 4.0 * binomial_sigma(0.75, N), "{f}");
}

#[test]
fn physical_concatenation_multiplies_correlations() {
    let (c1, c2) = (SymmetricBinaryChannel::new(0.8).unwrap(), SymmetricBinaryChannel::new(-0.6).unwrap());
    assert!((concatenate(&c1, &c2).rho() - (-0.48)).abs() <= 1e-15);
    let mut rng = stream(23, 0, 0);
    let xs: Vec<i8> = (0..N).map(|_| if rng.gen() { 1 } else { -1 }).collect();
    let ys: Vec<i8> = xs.iter().map(|&x| transmit(&c2, transmit(&c1, x, &mut rng), &mut rng)).collect();
    let r = empirical_correlation(&PairedSamples::new(xs, ys).unwrap()).unwrap();
    let sigma = ((1.0 - 0.48f64.powi(2)) / N as f64).sqrt();
    assert!((r + 0.48).abs() <= 4.0 * sigma, "{r}");
}

proptest! {
    #[test]
    fn concatenation_rule(r1 in -1.0f64..=1.0, r2 in -1.0f64..=1.0, n in 1u32..=12) {
        let a = SymmetricBinaryChannel::new(r1).unwrap();
        let b = SymmetricBinaryChannel::new(r2).unwrap();
        prop_assert_eq!(concatenate(&SymmetricBinaryChannel::PERFECT, &a).rho(), r1);
        prop_assert!((concatenate(&a, &b).rho() - r1 * r2).abs() <= 1e-15);
        let chain = ChannelChain::new(a, n).collapsed().rho();
        prop_assert!((chain - r1.powi(n as i32)).abs() <= 1e-14);
    }
}

#[test]
fn source_through_channel_law() {
    for (k, (theta, rho)) in [(0.4, 0.6), (-0.7, 0.9), (0.3, -0.5)].into_iter().enumerate() {
        let src = BernoulliSource::new(theta).unwrap();
        let ch = SymmetricBinaryChannel::new(rho).unwrap();
        let mut rng = stream(24, 0, k as u64);
        let xs = draw_source(&src, N, &mut rng).unwrap();
        let minus = xs.iter().filter(|&&x| transmit(&ch, x, &mut rng) == -1).count();
        let p = (1.0 + rho * theta) / 2.0;
        let f = minus as f64 / N as f64;
        assert!((f - p).abs() <= 4.0 * binomial_sigma(p, N), "theta = {theta}, rho = {rho}: {f} vs {p}");
    }
}

/// `N` transmissions of a fair source through `copies` links of correlation 0.9.
fn chain_samples(copies: u32, seed: u64) -> PairedSamples {
    let chain = ChannelChain::new(SymmetricBinaryChannel::new(0.9).unwrap(), copies);
    let src = BernoulliSource::new(0.0).unwrap();
    let mut rng = stream(seed, 0, 0);
    let xs = draw_source(&src, N, &mut rng).unwrap();
    let zs = xs.iter().map(|&x| chain.transmit(x, &mut rng)).collect();
    PairedSamples::new(xs, zs).unwrap()
}

#[test]
fn long_chain_disconnects() {
    let s = chain_samples(40, 25);
    let r = empirical_correlation(&s).unwrap();
    assert!(r.abs() < 0.02, "|E[xz]| = {r}");
    // P(z = x) approaches 1/2 as (1 + 0.9^40)/2 ≈ 0.5074.
    let agree = s.inputs().iter().zip(s.outputs()).filter(|(x, z)| x == z).count() as f64 / N as f64;
    let p = (1.0 + 0.9f64.powi(40)) / 2.0;
    assert!((agree - p).abs() <= 4.0 * binomial_sigma(p, N), "{agree} vs {p}");
}

#[test]
fn very_long_chain_is_indistinguishable_from_half() {
    let s = chain_samples(80, 26);
    let agree = s.inputs().iter().zip(s.outputs()).filter(|(x, z)| x == z).count() as f64 / N as f64;
    assert!((agree - 0.5).abs() <= 4.0 * binomial_sigma(0.5, N), "{agree}");
}

#[test]
fn independence_test_is_calibrated() {
    let m = 100_000;
    let zero = SymmetricBinaryChannel::new(0.0).unwrap();
    let src = BernoulliSource::new(0.0).unwrap();
    let (mut independent_passes, mut channel_passes) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = stream(27, 0, seed);
        let xs = draw_source(&src, m, &mut rng).unwrap();
        let ys = draw_source(&src, m, &mut rng).unwrap();
        let zs = xs.iter().map(|&x| transmit(&zero, x, &mut rng)).collect();
        independent_passes += independence_statistic(&PairedSamples::new(xs.clone(), ys).unwrap()).unwrap().threshold_pass as u32;
        channel_passes += independence_statistic(&PairedSamples::new(xs, zs).unwrap()).unwrap().threshold_pass as u32;
    }
    assert!(independent_passes >= 95, "{independent_passes}/100");
    assert!(channel_passes >= 95, "{channel_passes}/100");
}

#[test]
fn independence_test_rejects_copies() {
    let mut rng = stream(28, 0, 0);
    let xs = draw_source(&BernoulliSource::new(0.0).unwrap(), 1000, &mut rng).unwrap();
    let r = independence_statistic(&PairedSamples::new(xs.clone(), xs).unwrap()).unwrap();
    assert!(!r.threshold_pass);
    assert_eq!(r.abs_correlation, 1.0);
}

#[test]
fn source_extremes_and_fair_mean() {
    let mut rng = stream(29, 0, 0);
    assert!(draw_source(&BernoulliSource::new(1.0).unwrap(), 500, &mut rng).unwrap().iter().all(|&x| x == -1));
    assert!(draw_source(&BernoulliSource::new(-1.0).unwrap(), 500, &mut rng).unwrap().iter().all(|&x| x == 1));
    let m = 40_000;
    let xs = draw_source(&BernoulliSource::new(0.0).unwrap(), m, &mut rng).unwrap();
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / m as f64;
    assert!(mean.abs() <= 4.0 / (m as f64).sqrt());
}
