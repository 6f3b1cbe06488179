use crate::traces::TracePoint;
use mq_core::C64;
use rustfft::FftPlanner;

/// Outcome of a spectral peak search on a time trace.
#[derive(Debug, Clone, PartialEq)]
pub enum OscillationResult {
    /// Dominant nonzero-frequency peak and its spectral amplitude.
    Peak { frequency: f64, amplitude: f64, bin_width: f64 },
    /// No peak above the noise floor; not an error.
    NoOscillation,
}

/// Locate the dominant nonzero-frequency peak of the windowed spectrum of a
/// trace. The mean is subtracted, a Hann window applied, and the transform
/// zero-padded 8× for peak interpolation; a peak must exceed 5× the median
/// spectral magnitude to count.
pub fn oscillation_frequency(trace: &[TracePoint], t_start: f64) -> OscillationResult {
    let samples: Vec<(f64, f64)> = trace
        .iter()
        .filter(|p| p.t >= t_start)
        .map(|p| (p.t, p.value))
        .collect();
    if samples.len() < 16 {
        return OscillationResult::NoOscillation;
    }
    let n = samples.len();
    let dt = (samples[n - 1].0 - samples[0].0) / (n - 1) as f64;
    let mean = samples.iter().map(|s| s.1).sum::<f64>() / n as f64;

    let padded = (8 * n).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); padded];
    for (k, &(_, v)) in samples.iter().enumerate() {
        let hann = 0.5
            * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos());
        buf[k] = C64::new((v - mean) * hann, 0.0);
    }
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);

    let dw = 2.0 * std::f64::consts::PI / (padded as f64 * dt);
    let half = padded / 2;
    let mags: Vec<f64> = (0..half).map(|k| buf[k].norm()).collect();
    // skip the DC/window pedestal: start above the Hann main lobe (~4 bins
    // of the unpadded transform = 4·8 padded bins)
    let k_min = (32 * padded / (8 * n)).max(4);

    let (mut k_peak, mut peak) = (0usize, 0.0f64);
    for k in k_min..half - 1 {
        if mags[k] > peak {
            peak = mags[k];
            k_peak = k;
        }
    }
    let mut sorted = mags[k_min..].to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    // absolute floor guards against pure rounding noise on flat traces
    let max_dev = samples.iter().map(|s| (s.1 - mean).abs()).fold(0.0, f64::max);
    let floor = 1e-9 * n as f64 * (mean.abs() + max_dev);
    if k_peak == 0 || peak < 5.0 * median || peak <= floor {
        return OscillationResult::NoOscillation;
    }
    // parabolic refinement on log-magnitudes
    let (ym, y0, yp) = (mags[k_peak - 1].ln(), mags[k_peak].ln(), mags[k_peak + 1].ln());
    let denom = ym - 2.0 * y0 + yp;
    let shift = if denom.abs() > 1e-300 { (0.5 * (ym - yp) / denom).clamp(-0.5, 0.5) } else { 0.0 };
    OscillationResult::Peak {
        frequency: (k_peak as f64 + shift) * dw,
        amplitude: peak,
        // resolution of the *unpadded* window
        bin_width: 2.0 * std::f64::consts::PI / (n as f64 * dt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f0: f64, n: usize, dt: f64) -> Vec<TracePoint> {
        (0..n)
            .map(|k| {
                let t = k as f64 * dt;
                TracePoint { t, value: -0.03 + 0.002 * (f0 * t).cos(), truncated: false }
            })
            .collect()
    }

    #[test]
    fn synthetic_cosine_peak_within_one_bin() {
        let trace = synthetic(0.9, 2400, 0.05);
        match oscillation_frequency(&trace, 0.0) {
            OscillationResult::Peak { frequency, bin_width, .. } => {
                assert!(
                    (frequency - 0.9).abs() < bin_width,
                    "peak {frequency} vs 0.9 (bin {bin_width})"
                );
            }
            other => panic!("expected a peak, got {other:?}"),
        }
    }

    #[test]
    fn flat_trace_reports_no_oscillation() {
        let trace: Vec<TracePoint> = (0..512)
            .map(|k| TracePoint { t: k as f64 * 0.05, value: -0.031, truncated: false })
            .collect();
        assert_eq!(oscillation_frequency(&trace, 0.0), OscillationResult::NoOscillation);
    }
}
