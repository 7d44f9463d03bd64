//! Empirical statistics over 1D sample lists: Kolmogorov-Smirnov distance
//! and order-statistic quantiles.

use crate::error::{Error, Result};

/// Two-sided KS statistic `D_N = sup |F_emp - F_ref|` over the sorted
/// sample points.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], reference_cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = reference_cdf(x);
        let lo = (f - i as f64 / n).abs();
        let hi = ((i + 1) as f64 / n - f).abs();
        d = d.max(lo).max(hi);
    }
    Ok(d)
}

/// KS 95% critical value `1.36 / sqrt(N)`.
pub fn ks_critical_95(n: usize) -> f64 {
    1.36 / (n as f64).sqrt()
}

/// Order-statistic quantile with linear interpolation between adjacent
/// order statistics.
pub fn empirical_quantile(samples: &[f64], q: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::QuantileOutOfRange(q));
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let h = q * (xs.len() - 1) as f64;
    let i = h.floor() as usize;
    if i + 1 >= xs.len() {
        return Ok(xs[xs.len() - 1]);
    }
    let frac = h - i as f64;
    Ok(xs[i] + frac * (xs[i + 1] - xs[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_cdf(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    #[test]
    fn ks_single_point() {
        let d = ks_statistic(&[0.5], uniform_cdf).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_two_points() {
        // Step gaps enumerate to 0.25 for {0.25, 0.75} against U[0,1].
        let d = ks_statistic(&[0.25, 0.75], uniform_cdf).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_empty_errors() {
        assert!(ks_statistic(&[], uniform_cdf).is_err());
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(empirical_quantile(&[1.0, 2.0, 3.0], 0.5).unwrap(), 2.0);
        assert_eq!(empirical_quantile(&[0.0, 1.0], 0.5).unwrap(), 0.5);
        assert!(empirical_quantile(&[1.0], 1.5).is_err());
        assert!(empirical_quantile(&[], 0.5).is_err());
    }

    #[test]
    fn uniform_generator_median() {
        use crate::rng::{CounterRng, RngStream};
        let mut r = CounterRng::from_seed(11);
        let xs: Vec<f64> = (0..100_000).map(|_| r.next_f64()).collect();
        let med = empirical_quantile(&xs, 0.5).unwrap();
        assert!((med - 0.5).abs() < 0.01, "median {med}");
    }

    #[test]
    fn uniform_generator_ks_calibration() {
        use crate::rng::{CounterRng, RngStream};
        let mut r = CounterRng::from_seed(5);
        let xs: Vec<f64> = (0..100_000).map(|_| r.next_f64()).collect();
        let d = ks_statistic(&xs, uniform_cdf).unwrap();
        assert!(d < ks_critical_95(xs.len()), "D = {d}");
    }
}
