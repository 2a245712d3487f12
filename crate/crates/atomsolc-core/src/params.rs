//! Parameter types and the conversions between physical quantities and the
//! dimensionless variables used by every formula in the crate.
//!
//! A run is fully specified by three dimensionless numbers:
//!
//! * `eta` — the Rabi precession angle per segment, η = 2√n·g₀·τ,
//! * `delta` — the detuning–segment-time product, δ = Δτ,
//! * `n_segments` — the number N of equal segments; the coupling constant is
//!   +g₀ on odd segments and −g₀ on even ones.
//!
//! The polar form φ = √(η² + δ²), θ = atan2(η, δ) describes the same point:
//! φ is the net precession angle accumulated per segment and θ the
//! inclination of the torque vector from the detuning axis.

use num_complex::Complex64;

use crate::error::Error;

/// Raw physical inputs in consistent angular-frequency/time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Atom-cavity coupling constant g₀ (angular frequency). Its sign is
    /// absorbed into the poling convention, so any real value is accepted.
    pub g0: f64,
    /// Duration τ of one segment (must be positive).
    pub tau: f64,
    /// Mean photon number n of the cavity mode, treated as a continuous
    /// real in the semiclassical regime (no integer quantization).
    pub n: f64,
    /// Cavity–atom detuning Δ (angular frequency).
    pub delta_freq: f64,
}

/// The dimensionless parameter set consumed by all downstream formulas.
///
/// `eta` is stored canonically non-negative: the emission probability
/// depends on η only through η², so negative inputs are normalized to |η|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    eta: f64,
    delta: f64,
    n_segments: u32,
}

impl ReducedParams {
    /// Builds a parameter set, normalizing `eta` to its absolute value.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] if `n_segments` is zero or either value
    /// is non-finite.
    pub fn new(eta: f64, delta: f64, n_segments: u32) -> Result<Self, Error> {
        if n_segments < 1 {
            return Err(Error::InvalidParameter(
                "n_segments must be at least 1".into(),
            ));
        }
        if !eta.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta and delta must be finite, got eta={eta}, delta={delta}"
            )));
        }
        Ok(Self {
            eta: eta.abs(),
            delta,
            n_segments,
        })
    }

    /// Builds a parameter set from the polar pair (φ, θ) via
    /// η = φ·sin θ, δ = φ·cos θ.
    pub fn from_polar(phi: f64, theta: f64, n_segments: u32) -> Result<Self, Error> {
        Self::new(phi * theta.sin(), phi * theta.cos(), n_segments)
    }

    /// Rabi precession angle per segment, η ≥ 0.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Dimensionless detuning δ = Δτ (signed).
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of segments N.
    pub fn n_segments(&self) -> u32 {
        self.n_segments
    }

    /// Net precession angle per segment, φ = √(η² + δ²).
    pub fn phi(&self) -> f64 {
        self.eta.hypot(self.delta)
    }
}

/// Polar form of the dimensionless parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarParams {
    /// Net precession angle per segment, φ ≥ 0.
    pub phi: f64,
    /// Torque inclination θ = atan2(η, δ) ∈ \[0, π\] for canonical η ≥ 0;
    /// defined as 0 at the degenerate origin φ = 0.
    pub theta: f64,
}

impl PolarParams {
    /// Inverse map back to the Cartesian pair (η, δ).
    pub fn to_eta_delta(&self) -> (f64, f64) {
        (self.phi * self.theta.sin(), self.phi * self.theta.cos())
    }
}

/// Converts physical inputs into the dimensionless set for `n_segments`
/// segments: η = 2√n·g₀·τ (normalized non-negative), δ = Δ·τ.
///
/// # Errors
/// [`Error::InvalidParameter`] for non-positive `tau`, negative `n`, or
/// `n_segments` < 1.
pub fn reduce(p: &PhysicalParams, n_segments: u32) -> Result<ReducedParams, Error> {
    if p.tau <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tau must be positive, got {}",
            p.tau
        )));
    }
    if p.n < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be non-negative, got {}",
            p.n
        )));
    }
    ReducedParams::new(2.0 * p.n.sqrt() * p.g0 * p.tau, p.delta_freq * p.tau, n_segments)
}

/// Converts the Cartesian pair into polar form. At the degenerate origin
/// φ = 0 the angle is defined as 0; every consumer of θ guards that point
/// by returning the identity evolution.
pub fn to_polar(r: &ReducedParams) -> PolarParams {
    let phi = r.phi();
    let theta = if phi == 0.0 {
        0.0
    } else {
        r.eta().atan2(r.delta())
    };
    PolarParams { phi, theta }
}

/// Two-component state (c_e, c_g): probability amplitudes of the excited
/// and ground state. Unit norm is preserved by every evolution in the crate
/// to within floating-point drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2 {
    /// Excited-state amplitude.
    pub c_e: Complex64,
    /// Ground-state amplitude.
    pub c_g: Complex64,
}

impl State2 {
    /// The atom enters the cavity excited: (c_e, c_g) = (1, 0).
    pub const EXCITED: State2 = State2 {
        c_e: Complex64::new(1.0, 0.0),
        c_g: Complex64::new(0.0, 0.0),
    };

    /// |c_e|² + |c_g|².
    pub fn norm_sqr(&self) -> f64 {
        self.c_e.norm_sqr() + self.c_g.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn reduce_substitutes_definitions() {
        let r = reduce(
            &PhysicalParams {
                g0: 1.0,
                tau: 1.0,
                n: 1.0,
                delta_freq: 0.0,
            },
            1,
        )
        .unwrap();
        assert_eq!(r.eta(), 2.0);
        assert_eq!(r.delta(), 0.0);
        assert_eq!(r.n_segments(), 1);
    }

    #[test]
    fn reduce_detuning_is_delta_times_tau() {
        let r = reduce(
            &PhysicalParams {
                g0: 0.5,
                tau: PI,
                n: 4.0,
                delta_freq: 1.0 / PI, // so that δ = Δτ = 1
            },
            2,
        )
        .unwrap();
        assert_abs_diff_eq!(r.delta(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.eta(), 2.0 * 2.0 * 0.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn reduce_reproduces_reference_pulse_area() {
        // g₀ = 0.12, τ = 1, n = 1 gives the η₀ = 2g₀τ = 0.24 working point
        // used in the photon-statistics maps.
        let r = reduce(
            &PhysicalParams {
                g0: 0.12,
                tau: 1.0,
                n: 1.0,
                delta_freq: 0.0,
            },
            8,
        )
        .unwrap();
        assert_abs_diff_eq!(r.eta(), 0.24, epsilon = 1e-15);
    }

    #[test]
    fn reduce_rejects_bad_inputs() {
        let p = PhysicalParams {
            g0: 1.0,
            tau: 0.0,
            n: 1.0,
            delta_freq: 0.0,
        };
        assert!(matches!(reduce(&p, 1), Err(Error::InvalidParameter(_))));
        let p = PhysicalParams { tau: 1.0, ..p };
        assert!(matches!(reduce(&p, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn eta_is_normalized_non_negative() {
        let r = ReducedParams::new(-1.5, 0.3, 4).unwrap();
        assert_eq!(r.eta(), 1.5);
    }

    #[test]
    fn polar_on_resonance_axis() {
        let r = ReducedParams::new(1.0, 0.0, 1).unwrap();
        let p = to_polar(&r);
        assert_abs_diff_eq!(p.phi, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.theta, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_on_zero_coupling_axis() {
        let r = ReducedParams::new(0.0, PI, 1).unwrap();
        let p = to_polar(&r);
        assert_abs_diff_eq!(p.phi, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(p.theta, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_round_trips_a_branch_point() {
        let r =
            ReducedParams::new(PI * (PI / 10.0).sin(), PI * (PI / 10.0).cos(), 5).unwrap();
        let p = to_polar(&r);
        assert_abs_diff_eq!(p.phi, PI, epsilon = 1e-12);
        assert_abs_diff_eq!(p.theta, PI / 10.0, epsilon = 1e-12);
        let (eta, delta) = p.to_eta_delta();
        assert_abs_diff_eq!(eta, r.eta(), epsilon = 1e-12);
        assert_abs_diff_eq!(delta, r.delta(), epsilon = 1e-12);
    }

    #[test]
    fn theta_is_zero_at_the_origin() {
        let r = ReducedParams::new(0.0, 0.0, 3).unwrap();
        assert_eq!(to_polar(&r).theta, 0.0);
    }

    #[test]
    fn reduce_is_homogeneous_in_g0_and_n() {
        // Scaling g₀ by s and n by 1/s² leaves η unchanged.
        let base = PhysicalParams {
            g0: 0.7,
            tau: 1.3,
            n: 9.0,
            delta_freq: 0.2,
        };
        let scaled = PhysicalParams {
            g0: 0.7 * 4.0,
            n: 9.0 / 16.0,
            ..base
        };
        let a = reduce(&base, 3).unwrap();
        let b = reduce(&scaled, 3).unwrap();
        assert_eq!(a.eta(), b.eta());
    }
}
