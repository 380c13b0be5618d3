use crate::error::{Error, Result};
use crate::exec::{default_workers, for_each_chunk};
use crate::student::normal_pdf;

/// Kernel contributions beyond this many bandwidths are below 1e-16 and skipped.
const KERNEL_REACH: f64 = 8.6;

/// Silverman's rule `0.9 min(sd, IQR/1.34) m^(-1/5)`, floored at
/// `1e-6 * range`. A constant sample has zero range; the floor then becomes
/// `1e-6 * max(|value|, 1)`, giving a narrow spike at the value.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / m;
    let sd = if sorted.len() > 1 {
        (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
    } else {
        0.0
    };
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let rule = 0.9 * spread * m.powf(-0.2);
    let range = sorted[sorted.len() - 1] - sorted[0];
    let floor = if range > 0.0 {
        1e-6 * range
    } else {
        1e-6 * sorted[0].abs().max(1.0)
    };
    Ok(rule.max(floor))
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Gaussian-kernel density estimate evaluated at each grid point.
pub fn empirical_density(samples: &[f64], grid: &[f64], bandwidth: f64) -> Result<Vec<f64>> {
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::InvalidBandwidth(bandwidth));
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let norm = 1.0 / (sorted.len() as f64 * bandwidth);
    let reach = KERNEL_REACH * bandwidth;

    let mut out = grid.to_vec();
    for_each_chunk(&mut out, 16, default_workers(), |_, chunk| {
        for slot in chunk.iter_mut() {
            let x = *slot;
            let lo = sorted.partition_point(|&s| s < x - reach);
            let hi = sorted.partition_point(|&s| s <= x + reach);
            let mut acc = 0.0;
            for &s in &sorted[lo..hi] {
                acc += normal_pdf((x - s) / bandwidth);
            }
            *slot = acc * norm;
        }
    });
    Ok(out)
}
