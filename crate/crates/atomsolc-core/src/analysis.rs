//! Derived analyses on top of the transfer-matrix core: passband spectra in
//! polar (φ, θ) coordinates and their widths, Mandel-Q photon statistics,
//! and the Fourier-domain weak-coupling prediction.
//!
//! The passband view fixes the torque angle θ to a branch line and scans
//! the pulse area φ, which turns the emission map into a filter spectrum
//! with unit-height peaks at φ = (2q−1)π. The Mandel-Q analysis converts
//! the n-dependence of the emission probability into a photon-statistics
//! indicator Q = s/(D_cav − s) with s = ∂P_em/∂n. The Fourier analysis
//! expands the square-wave coupling in harmonics of the full interaction
//! window and predicts the weak-coupling emission lineshape from |𝒢⁽ˢ⁾|².

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Error;
use crate::params::ReducedParams;
use crate::transfer::emission_direct;

/// |D_cav − slope| below this is treated as the pole of the Q formula and
/// reported as a signed infinity marker instead of a huge float.
const Q_SINGULARITY_EPS: f64 = 1e-12;

/// A sample on the δN/2π comb farther than this from the nearest integer
/// is flagged: the Fourier prediction is then an off-comb extrapolation.
const COMB_TOLERANCE: f64 = 1e-9;

/// Emission spectrum along a branch line: θ fixed by the branch index p,
/// the pulse area φ scanned from 0 to `phi_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassbandSpectrum {
    /// Number of segments the filter is poled into.
    pub n_segments: u32,
    /// Branch-line index, 1…N.
    pub p: u32,
    /// Torque angle θ = (p−½)π/N fixed along the scan.
    pub theta: f64,
    /// Sampled φ values, uniform and inclusive of 0 and `phi_max`.
    pub phi_axis: Vec<f64>,
    /// P_em(φ sin θ, φ cos θ) per sample, each in [0, 1].
    pub values: Vec<f64>,
}

/// One evaluation of the Mandel-Q formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelQPoint {
    /// Mean photon number the derivative is taken at.
    pub n: f64,
    /// Dimensionless detuning δ.
    pub delta: f64,
    /// Central-difference estimate of ∂P_em/∂n.
    pub slope: f64,
    /// Q = slope/(D_cav − slope); ±∞ marks the pole |D_cav − slope| < 1e-12.
    pub q_value: f64,
}

/// Fourier coefficients 𝒢⁽ˡ⁾ of the square-wave coupling over the full
/// interaction window [0, Nτ], in units of g₀.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    /// Number of segments of the underlying square wave.
    pub n_segments: u32,
    /// 𝒢⁽ˡ⁾ for every |l| ≤ l_max, keyed by the harmonic index l.
    pub coefficients: BTreeMap<i64, Complex64>,
}

impl FourierCoefficients {
    /// The coefficient at harmonic `l`, if within the computed range.
    pub fn coefficient(&self, l: i64) -> Option<Complex64> {
        self.coefficients.get(&l).copied()
    }

    /// Σ|𝒢⁽ˡ⁾|² over the stored range; tends to 1 (= g₀²) as the range
    /// grows.
    pub fn partial_power(&self) -> f64 {
        self.coefficients.values().map(|g| g.norm_sqr()).sum()
    }
}

/// The weak-coupling lineshape prediction next to the exact emission
/// probability, both rescaled to a unit maximum for shape comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakCouplingPrediction {
    /// Number of segments.
    pub n_segments: u32,
    /// Coupling strength the exact curve is evaluated at.
    pub eta: f64,
    /// The δ values (radians) supplied by the caller.
    pub delta_axis: Vec<f64>,
    /// Normalized |𝒢⁽ˢ⁾|² with s = round(Nδ/2π), unit maximum.
    pub predicted: Vec<f64>,
    /// Normalized exact P_em(δ), unit maximum.
    pub exact: Vec<f64>,
    /// The harmonic index s each δ was rounded to.
    pub fourier_index: Vec<i64>,
    /// True where Nδ/2π was not an integer to 1e-9, i.e. the prediction is
    /// read off the comb rather than evaluated at a native harmonic.
    pub off_comb: Vec<bool>,
    /// Set when η ≥ 1: the first-order expansion behind the prediction is
    /// not trustworthy there (callers should warn, computation proceeds).
    pub strong_coupling: bool,
}

impl WeakCouplingPrediction {
    /// Pearson correlation between the predicted and exact shapes.
    pub fn correlation(&self) -> f64 {
        pearson_correlation(&self.predicted, &self.exact)
    }
}

/// Emission spectrum along branch line `p`: θ = (p−½)π/N, with φ sampled
/// uniformly on [0, `phi_max`] at `samples` points, each evaluated by the
/// sequential matrix product.
///
/// # Errors
/// [`Error::InvalidParameter`] unless 1 ≤ p ≤ N, samples ≥ 2 and
/// phi_max > 0.
pub fn passband(
    n_segments: u32,
    p: u32,
    phi_max: f64,
    samples: usize,
) -> Result<PassbandSpectrum, Error> {
    if n_segments < 1 || p < 1 || p > n_segments {
        return Err(Error::InvalidParameter(format!(
            "branch index p must satisfy 1 <= p <= N, got p={p}, N={n_segments}"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if !phi_max.is_finite() || phi_max <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "phi_max must be positive and finite, got {phi_max}"
        )));
    }
    let theta = (p as f64 - 0.5) * PI / n_segments as f64;
    let mut phi_axis = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let phi = if i == samples - 1 { phi_max } else { phi_max * t };
        let r = ReducedParams::from_polar(phi, theta, n_segments)?;
        phi_axis.push(phi);
        values.push(emission_direct(&r));
    }
    Ok(PassbandSpectrum {
        n_segments,
        p,
        theta,
        phi_axis,
        values,
    })
}

/// Full width at half maximum of the passband peak nearest `center_phi`.
///
/// The peak must be a local maximum with value ≥ 0.999 within one sample of
/// `center_phi`; the two half-maximum crossings are then located by linear
/// interpolation between the bracketing samples on each side.
///
/// # Errors
/// [`Error::PeakNotFound`] when no qualifying peak exists near
/// `center_phi`, or when a half-maximum crossing lies outside the sampled
/// range.
pub fn passband_fwhm(s: &PassbandSpectrum, center_phi: f64) -> Result<f64, Error> {
    let len = s.values.len();
    if len < 3 {
        return Err(Error::PeakNotFound(
            "spectrum too short to bracket a peak".into(),
        ));
    }
    let nearest = s
        .phi_axis
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (**a - center_phi)
                .abs()
                .total_cmp(&(**b - center_phi).abs())
        })
        .map(|(i, _)| i)
        .expect("spectrum is nonempty");

    let lo = nearest.saturating_sub(1);
    let hi = (nearest + 1).min(len - 1);
    let peak = (lo..=hi)
        .filter(|&j| {
            let v = s.values[j];
            v >= 0.999
                && (j == 0 || v >= s.values[j - 1])
                && (j == len - 1 || v >= s.values[j + 1])
        })
        .max_by(|&a, &b| s.values[a].total_cmp(&s.values[b]));
    let Some(peak) = peak else {
        return Err(Error::PeakNotFound(format!(
            "no local maximum >= 0.999 within one sample of phi = {center_phi}"
        )));
    };

    let half = 0.5 * s.values[peak];
    let crossing = |from: usize, step_down: bool| -> Option<f64> {
        // Walk away from the peak until the value drops below half, then
        // interpolate the crossing inside the bracketing pair.
        let mut i = from;
        loop {
            if s.values[i] < half {
                let (inner, outer) = if step_down { (i + 1, i) } else { (i - 1, i) };
                let (v_in, v_out) = (s.values[inner], s.values[outer]);
                let (p_in, p_out) = (s.phi_axis[inner], s.phi_axis[outer]);
                return Some(p_in + (half - v_in) * (p_out - p_in) / (v_out - v_in));
            }
            if step_down {
                if i == 0 {
                    return None;
                }
                i -= 1;
            } else {
                if i == len - 1 {
                    return None;
                }
                i += 1;
            }
        }
    };
    let left = crossing(peak, true).ok_or_else(|| {
        Error::PeakNotFound("left half-maximum crossing outside the sampled range".into())
    })?;
    let right = crossing(peak, false).ok_or_else(|| {
        Error::PeakNotFound("right half-maximum crossing outside the sampled range".into())
    })?;
    Ok(right - left)
}

/// Emission probability as a function of the mean photon number, with the
/// vacuum coupling η₀ fixed: η = √n·η₀.
///
/// # Panics
/// If `n` is negative or not finite.
pub fn emission_vs_n(n_segments: u32, eta0: f64, delta: f64, n: f64) -> f64 {
    assert!(n >= 0.0 && n.is_finite(), "photon number must be >= 0");
    let r = ReducedParams::new(n.sqrt() * eta0, delta, n_segments)
        .expect("finite eta/delta always reduce");
    emission_direct(&r)
}

/// The Q algebra on its own: Q = slope/(D_cav − slope), with the pole
/// |D_cav − slope| < 1e-12 encoded as a signed infinity marker (downstream
/// plotting must mask it).
pub fn q_from_slope(slope: f64, d_cav: f64) -> f64 {
    let denom = d_cav - slope;
    if denom.abs() < Q_SINGULARITY_EPS {
        f64::INFINITY.copysign(if slope == 0.0 { 1.0 } else { slope })
    } else {
        slope / denom
    }
}

/// Default central-difference step for ∂P_em/∂n: max(10⁻³·n, 10⁻³).
///
/// Halving this step moves Q by well under 1% at the map's operating
/// points (checked in the tests), so the discretization does not limit the
/// analysis.
pub fn default_derivative_step(n: f64) -> f64 {
    (1e-3 * n).max(1e-3)
}

/// Mandel Q at one (n, δ) point: the slope ∂P_em/∂n is estimated by the
/// central difference [P(n+dn) − P(n−dn)]/(2·dn) through [`emission_vs_n`],
/// then pushed through [`q_from_slope`].
///
/// # Panics
/// Unless n > dn > 0 and d_cav > 0.
pub fn mandel_q(
    n_segments: u32,
    eta0: f64,
    d_cav: f64,
    n: f64,
    delta: f64,
    dn: f64,
) -> MandelQPoint {
    assert!(dn > 0.0, "derivative step must be positive");
    assert!(n > dn, "need n > dn so the stencil stays at positive n");
    assert!(d_cav > 0.0, "cavity D parameter must be positive");
    let upper = emission_vs_n(n_segments, eta0, delta, n + dn);
    let lower = emission_vs_n(n_segments, eta0, delta, n - dn);
    let slope = (upper - lower) / (2.0 * dn);
    MandelQPoint {
        n,
        delta,
        slope,
        q_value: q_from_slope(slope, d_cav),
    }
}

/// Closed-form Fourier coefficient 𝒢⁽ˡ⁾ = (1/Nτ)∫₀^{Nτ} g(t)·e^{i2πlt/Nτ}dt
/// of the N-segment square wave g(t) = ±g₀, in units of g₀.
///
/// For odd N: 𝒢⁽⁰⁾ = 1/N, 𝒢⁽ˡ⁾ = tan(πl/N)/(πl), and exactly 0 at nonzero
/// multiples of N. For even N: 𝒢⁽⁰⁾ = 0 and the only surviving harmonics
/// are odd multiples of N/2, where 𝒢⁽ˡ⁾ = i·N/(πl).
fn fourier_coefficient(n_segments: u32, l: i64) -> Complex64 {
    let nf = f64::from(n_segments);
    if n_segments % 2 == 1 {
        if l == 0 {
            return Complex64::new(1.0 / nf, 0.0);
        }
        if l % i64::from(n_segments) == 0 {
            // The square wave has no power at nonzero multiples of N; the
            // tan form would return rounding noise there.
            return Complex64::new(0.0, 0.0);
        }
        let lf = l as f64;
        Complex64::new((PI * lf / nf).tan() / (PI * lf), 0.0)
    } else {
        let half = i64::from(n_segments / 2);
        if l != 0 && l % half == 0 && (l / half) % 2 != 0 {
            Complex64::new(0.0, nf / (PI * l as f64))
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// All Fourier coefficients 𝒢⁽ˡ⁾ for |l| ≤ `l_max` (closed form, analytic
/// per segment — no quadrature).
///
/// # Panics
/// If `n_segments` is zero or `l_max` < 1.
pub fn fourier_coefficients(n_segments: u32, l_max: u32) -> FourierCoefficients {
    assert!(n_segments >= 1, "need at least one segment");
    assert!(l_max >= 1, "harmonic range must include l = 1");
    let bound = i64::from(l_max);
    let coefficients = (-bound..=bound)
        .map(|l| (l, fourier_coefficient(n_segments, l)))
        .collect();
    FourierCoefficients {
        n_segments,
        coefficients,
    }
}

/// First-order weak-coupling prediction of the emission lineshape over a
/// detuning axis (δ in radians): each δ is rounded to the nearest harmonic
/// s = round(Nδ/2π), the shape |𝒢⁽ˢ⁾|² is rescaled to a unit maximum, and
/// the exact P_em(δ) — equally rescaled — rides along for comparison.
/// Samples off the harmonic comb are flagged, and η ≥ 1 sets the
/// strong-coupling flag (the expansion still runs, the caller decides how
/// loudly to warn).
///
/// # Panics
/// If `n_segments` is zero or the axis is empty.
pub fn weak_coupling_prediction(
    n_segments: u32,
    eta: f64,
    delta_axis: &[f64],
) -> WeakCouplingPrediction {
    assert!(n_segments >= 1, "need at least one segment");
    assert!(!delta_axis.is_empty(), "detuning axis must be nonempty");
    let nf = f64::from(n_segments);
    let mut predicted = Vec::with_capacity(delta_axis.len());
    let mut exact = Vec::with_capacity(delta_axis.len());
    let mut fourier_index = Vec::with_capacity(delta_axis.len());
    let mut off_comb = Vec::with_capacity(delta_axis.len());
    for &delta in delta_axis {
        let s_real = nf * delta / (2.0 * PI);
        let s = s_real.round() as i64;
        fourier_index.push(s);
        off_comb.push((s_real - s as f64).abs() > COMB_TOLERANCE);
        predicted.push(fourier_coefficient(n_segments, s).norm_sqr());
        let r = ReducedParams::new(eta, delta, n_segments)
            .expect("finite eta/delta always reduce");
        exact.push(emission_direct(&r));
    }
    normalize_to_unit_max(&mut predicted);
    normalize_to_unit_max(&mut exact);
    WeakCouplingPrediction {
        n_segments,
        eta,
        delta_axis: delta_axis.to_vec(),
        predicted,
        exact,
        fourier_index,
        off_comb,
        strong_coupling: eta.abs() >= 1.0,
    }
}

fn normalize_to_unit_max(values: &mut [f64]) {
    let max = values.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        for v in values.iter_mut() {
            *v /= max;
        }
    }
}

/// Pearson correlation coefficient between two equally long samples.
///
/// # Panics
/// If the slices differ in length or hold fewer than 2 samples.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "correlation needs paired samples");
    assert!(a.len() >= 2, "correlation needs at least 2 samples");
    let len = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / len;
    let mean_b = b.iter().sum::<f64>() / len;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    cov / (var_a * var_b).sqrt()
}
