//! Order-fixed, compensated accumulation of sample moments.

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `m3 / m2^{3/2}` with population central moments.
    pub skewness: f64,
}

impl Moments {
    pub fn of(values: &[f64]) -> Moments {
        let count = values.len();
        if count == 0 {
            return Moments { count, mean: f64::NAN, variance: f64::NAN, skewness: f64::NAN };
        }
        let n = count as f64;
        let mean = compensated_sum(values.iter().copied()) / n;
        let m2 = compensated_sum(values.iter().map(|v| (v - mean).powi(2))) / n;
        let m3 = compensated_sum(values.iter().map(|v| (v - mean).powi(3))) / n;
        let variance = if count > 1 { m2 * n / (n - 1.0) } else { f64::NAN };
        let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
        Moments { count, mean, variance, skewness }
    }

    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}
