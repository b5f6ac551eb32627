//! One- and two-sample Kolmogorov–Smirnov tests with the asymptotic
//! Kolmogorov distribution for p-values.

use crate::{Error, Result};

/// Statistic and asymptotic p-value.
#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Survival function of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{j≥1} (-1)^{j-1} e^{-2 j² λ²}`.
fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 1e-8 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let t = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += sign * t;
        if t < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test of `samples` against the continuous CDF `cdf`.
/// Uses Stephens' small-sample correction for the asymptotic p-value.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    if samples.len() < 20 {
        return Err(Error::InvalidInput("ks_test needs at least 20 samples".into()));
    }
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let u = cdf(x);
        d = d.max((u - i as f64 / n).abs()).max(((i + 1) as f64 / n - u).abs());
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf(lambda),
    })
}

/// Two-sample KS test; asymptotic p-value with effective sample size
/// `n m / (n + m)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.len() < 20 || b.len() < 20 {
        return Err(Error::InvalidInput("ks_two_sample needs at least 20 samples".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n as f64 * m as f64) / (n as f64 + m as f64);
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{standard_normal_cdf, RngStream};
    use rand::Rng;

    #[test]
    fn uniform_null() {
        let mut rng = RngStream::new(5, 0).rng();
        let xs: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let r = ks_test(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(r.p_value > 0.01, "p={}", r.p_value);
    }

    #[test]
    fn uniform_against_normal_rejected() {
        let mut rng = RngStream::new(5, 1).rng();
        let xs: Vec<f64> = (0..1000).map(|_| rng.gen::<f64>()).collect();
        let r = ks_test(&xs, standard_normal_cdf).unwrap();
        assert!(r.p_value < 1e-6, "p={}", r.p_value);
    }

    #[test]
    fn three_point_fixture_statistic() {
        // ECDF of {0.1, 0.2, 0.9} vs Uniform[0,1]: max gap is at x=0.2
        // where F_n jumps to 2/3 while F = 0.2  ->  D = 2/3 - 0.2
        let xs: Vec<f64> = vec![0.1, 0.2, 0.9]
            .into_iter()
            .cycle()
            .take(21)
            .collect();
        let r = ks_test(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((r.statistic - (2.0 / 3.0 - 0.2)).abs() < 1e-12);
    }

    #[test]
    fn two_sample_null() {
        let mut rng = RngStream::new(5, 2).rng();
        let xs: Vec<f64> = (0..1500).map(|_| rng.gen::<f64>()).collect();
        let ys: Vec<f64> = (0..1500).map(|_| rng.gen::<f64>()).collect();
        let r = ks_two_sample(&xs, &ys).unwrap();
        assert!(r.p_value > 0.01);
    }
}
