//! Binned jackknife and integrated autocorrelation time.

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Jackknife {
    /// Full-sample estimate.
    pub value: f64,
    pub error: f64,
    /// Leave-one-bin-out estimates.
    pub samples: Vec<f64>,
}

/// Split `n` items into `bins` contiguous groups (the tail goes to the last bins).
fn bin_ranges(n: usize, bins: usize) -> Vec<(usize, usize)> {
    (0..bins).map(|b| (b * n / bins, (b + 1) * n / bins)).collect()
}

/// Jackknife a statistic of per-configuration vectors. `stat` maps the mean
/// vector of a subsample to a scalar; each returned sample leaves out one bin.
pub fn jackknife_vec<F>(data: &[Vec<f64>], bins: usize, stat: F) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64]) -> f64,
{
    let n = data.len();
    if n < bins || bins < 2 {
        return Err(Error::TooFewConfigs { configs: n, bins });
    }
    let width = data[0].len();
    let ranges = bin_ranges(n, bins);
    let mut bin_sums = vec![vec![0.0; width]; bins];
    for (b, &(lo, hi)) in ranges.iter().enumerate() {
        for row in &data[lo..hi] {
            for (acc, v) in bin_sums[b].iter_mut().zip(row) {
                *acc += v;
            }
        }
    }
    let mut total = vec![0.0; width];
    for s in &bin_sums {
        for (t, v) in total.iter_mut().zip(s) {
            *t += v;
        }
    }
    let full: Vec<f64> = total.iter().map(|t| t / n as f64).collect();
    let samples = ranges
        .iter()
        .zip(&bin_sums)
        .map(|(&(lo, hi), s)| {
            let count = (n - (hi - lo)) as f64;
            let mean: Vec<f64> = total.iter().zip(s).map(|(t, v)| (t - v) / count).collect();
            stat(&mean)
        })
        .collect();
    Ok((stat(&full), samples))
}

/// Jackknife standard error from leave-one-bin-out samples.
pub fn jackknife_error(samples: &[f64]) -> f64 {
    let k = samples.len() as f64;
    if samples.len() < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / k;
    ((k - 1.0) / k * samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>()).sqrt()
}

/// Jackknife mean and error of a scalar series.
pub fn jackknife_mean(series: &[f64], bins: usize) -> Result<Jackknife> {
    let rows: Vec<Vec<f64>> = series.iter().map(|&v| vec![v]).collect();
    let (value, samples) = jackknife_vec(&rows, bins, |m| m[0])?;
    Ok(Jackknife { value, error: jackknife_error(&samples), samples })
}

/// Integrated autocorrelation time with automatic windowing (window `W` is the
/// first lag with `W >= c·τ_int(W)`, c = 6).
pub fn integrated_autocorrelation(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return 0.5;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    if var == 0.0 {
        return 0.5;
    }
    let mut tau = 0.5;
    for lag in 1..n / 2 {
        let c: f64 = (0..n - lag).map(|i| (series[i] - mean) * (series[i + lag] - mean)).sum::<f64>()
            / ((n - lag) as f64 * var);
        tau += c;
        if lag as f64 >= 6.0 * tau {
            break;
        }
    }
    tau.max(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jackknife_mean_of_iid_matches_naive_error() {
        let mut state = 7u64;
        let data: Vec<f64> = (0..1000)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 40) as f64
            })
            .collect();
        let jk = jackknife_mean(&data, 20).unwrap();
        let mean = data.iter().sum::<f64>() / 1000.0;
        assert!((jk.value - mean).abs() < 1e-12);
        let sd = (data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 999.0).sqrt();
        assert!((jk.error / (sd / 1000f64.sqrt()) - 1.0).abs() < 0.5);
    }

    #[test]
    fn too_few_configs() {
        assert!(matches!(
            jackknife_mean(&[1.0; 5], 20),
            Err(Error::TooFewConfigs { configs: 5, bins: 20 })
        ));
    }

    #[test]
    fn autocorrelation_of_ar1() {
        // AR(1) with rho = 0.8 has tau_int = (1 + rho) / (2 (1 - rho)) = 4.5
        let mut x = 0.0;
        let mut state = 12345u64;
        let mut series = Vec::new();
        for _ in 0..200_000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = ((state >> 11) as f64) / (1u64 << 53) as f64 - 0.5;
            x = 0.8 * x + u;
            series.push(x);
        }
        let tau = integrated_autocorrelation(&series);
        assert!((tau - 4.5).abs() < 0.4, "{tau}");
    }
}
