use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralLine {
    /// Period in the sampled variable.
    pub period: f64,
    /// Cosine amplitude of the component.
    pub amplitude: f64,
}

/// One-sided amplitude spectrum of `samples` taken uniformly over a window
/// of length `window` (exclusive of the right end). The mean is dropped.
pub fn amplitude_spectrum(samples: &[f64], window: f64) -> Vec<SpectralLine> {
    let n = samples.len();
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&y| Complex::new(y, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (1..n.div_ceil(2))
        .map(|f| SpectralLine {
            period: window / f as f64,
            amplitude: 2.0 * buf[f].norm() / n as f64,
        })
        .collect()
}

/// Local maxima of the spectrum, strongest first.
pub fn spectral_peaks(samples: &[f64], window: f64) -> Vec<SpectralLine> {
    let s = amplitude_spectrum(samples, window);
    let mut peaks: Vec<SpectralLine> = (0..s.len())
        .filter(|&i| {
            let left = if i > 0 { s[i - 1].amplitude } else { 0.0 };
            let right = s.get(i + 1).map_or(0.0, |l| l.amplitude);
            s[i].amplitude > left && s[i].amplitude >= right
        })
        .map(|i| s[i])
        .collect();
    peaks.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    peaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_two_tones() {
        let n = 240;
        let window = 6.0;
        let ys: Vec<f64> = (0..n)
            .map(|i| {
                let x = window * i as f64 / n as f64;
                0.7 * (2.0 * std::f64::consts::PI * x / 0.5).cos()
                    + 0.3 * (2.0 * std::f64::consts::PI * x / 2.0).sin()
                    + 4.0
            })
            .collect();
        let peaks = spectral_peaks(&ys, window);
        assert!((peaks[0].period - 0.5).abs() < 1e-12);
        assert!((peaks[0].amplitude - 0.7).abs() < 1e-12);
        assert!((peaks[1].period - 2.0).abs() < 1e-12);
        assert!((peaks[1].amplitude - 0.3).abs() < 1e-12);
    }
}
