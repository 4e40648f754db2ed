use crate::FitError;
use rustfft::{num_complex::Complex, FftPlanner};

/// Dominant bin must exceed the median spectrum magnitude by this factor to
/// count as a real oscillation.
const DOMINANCE_FACTOR: f64 = 10.0;
/// Below this |correlation| between abscissa and ordinate the data is treated
/// as structureless rather than as a monotone trend.
const TREND_MIN_CORRELATION: f64 = 0.3;

pub enum FrequencySeed {
    /// Dominant spectral component at this frequency (Hz, given time in s).
    Oscillation(f64),
    /// No dominant bin, but the data has a monotone trend: treat as a
    /// zero-frequency (pure envelope) signal.
    Trend,
}

/// Hann-windowed FFT estimate of the dominant frequency on a near-uniform
/// grid, refined by two-bin interpolation. The input must be sorted by time.
pub fn seed_frequency(t: &[f64], y: &[f64]) -> Result<FrequencySeed, FitError> {
    let spectrum = hann_spectrum(t, y)?;
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    match dominant_bin(&spectrum) {
        // A monotone envelope also loads the lowest bins; below ~1.5 periods
        // over the whole span the correlation test wins over the FFT.
        Some(k)
            if refine_bin(&spectrum, k) < 1.6
                && correlation(t, y).abs() >= TREND_MIN_CORRELATION =>
        {
            Ok(FrequencySeed::Trend)
        }
        Some(k) => Ok(FrequencySeed::Oscillation(refine_bin(&spectrum, k) / (t.len() as f64 * dt))),
        None => {
            if correlation(t, y).abs() >= TREND_MIN_CORRELATION {
                Ok(FrequencySeed::Trend)
            } else {
                Err(FitError::Seeding(
                    "no dominant frequency component and no monotone trend".into(),
                ))
            }
        }
    }
}

/// The two strongest separated spectral components, strongest first. Returns
/// one frequency when the second component is not resolvable.
pub fn seed_two_frequencies(t: &[f64], y: &[f64]) -> Result<Vec<f64>, FitError> {
    let spectrum = hann_spectrum(t, y)?;
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    let to_hz = 1.0 / (t.len() as f64 * dt);
    let k1 = dominant_bin(&spectrum)
        .ok_or_else(|| FitError::Seeding("no dominant frequency component".into()))?;
    let med = median(&spectrum[1..]);
    let mut second: Option<usize> = None;
    for k in 2..spectrum.len() - 1 {
        // Separated local maximum clear of both the noise floor and the
        // dominant peak's skirt.
        if (k as i64 - k1 as i64).abs() < 3 {
            continue;
        }
        if spectrum[k] > spectrum[k - 1]
            && spectrum[k] >= spectrum[k + 1]
            && spectrum[k] > 3.0 * med
            && second.map_or(true, |s| spectrum[k] > spectrum[s])
        {
            second = Some(k);
        }
    }
    let mut freqs = vec![refine_bin(&spectrum, k1) * to_hz];
    if let Some(k2) = second {
        freqs.push(refine_bin(&spectrum, k2) * to_hz);
    }
    Ok(freqs)
}

/// Indices of the `n` tallest strict local maxima, tallest first.
pub fn seed_local_maxima(y: &[f64], n: usize) -> Result<Vec<usize>, FitError> {
    let mut peaks: Vec<usize> = (1..y.len() - 1)
        .filter(|&k| y[k] > y[k - 1] && y[k] >= y[k + 1])
        .collect();
    peaks.sort_by(|&a, &b| y[b].total_cmp(&y[a]));
    if peaks.len() < n {
        return Err(FitError::Seeding(format!(
            "found {} local maxima, need {n} distinct peaks",
            peaks.len()
        )));
    }
    Ok(peaks[..n].to_vec())
}

/// Magnitudes of the positive-frequency bins (index 0 = DC) of the
/// mean-removed, Hann-windowed signal.
fn hann_spectrum(t: &[f64], y: &[f64]) -> Result<Vec<f64>, FitError> {
    let n = y.len();
    if n < 4 {
        return Err(FitError::NotEnoughData { needed: 4, got: n });
    }
    if t[t.len() - 1] <= t[0] {
        return Err(FitError::Seeding("abscissa has zero span".into()));
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex<f64>> = y
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let w = 0.5 * (1.0 - (std::f64::consts::TAU * k as f64 / (n - 1) as f64).cos());
            Complex::new((v - mean) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    Ok(buf[..n / 2 + 1].iter().map(|c| c.norm()).collect())
}

fn dominant_bin(spectrum: &[f64]) -> Option<usize> {
    let (k, &peak) = spectrum[1..]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i + 1, v))?;
    if peak > DOMINANCE_FACTOR * median(&spectrum[1..]) {
        Some(k)
    } else {
        None
    }
}

/// Two-bin interpolation for a Hann window: with r the magnitude ratio of the
/// larger neighbor to the peak bin, the fractional offset is (2r - 1)/(r + 1).
fn refine_bin(spectrum: &[f64], k: usize) -> f64 {
    let left = if k > 1 { spectrum[k - 1] } else { 0.0 };
    let right = if k + 1 < spectrum.len() { spectrum[k + 1] } else { 0.0 };
    let (neighbor, sign) = if right >= left { (right, 1.0) } else { (left, -1.0) };
    if spectrum[k] <= 0.0 {
        return k as f64;
    }
    let r = neighbor / spectrum[k];
    k as f64 + sign * (2.0 * r - 1.0) / (r + 1.0)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    if s.is_empty() {
        0.0
    } else {
        s[s.len() / 2]
    }
}

fn correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx).powi(2);
        syy += (yi - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
