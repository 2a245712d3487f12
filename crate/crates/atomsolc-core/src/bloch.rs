//! Bloch-sphere dynamics: the ODE oracle, the reflection model on branch
//! circles, and the quasi-phase-matching locator.
//!
//! The two-level amplitudes map to a real unit vector R whose coherent
//! evolution is a precession Ṙ = R × Ω around the piecewise-constant torque
//! Ω⁽ᵐ⁾ = ((−1)^{m+1}η, 0, δ). Integrating that equation with a fixed-step
//! RK4 scheme gives an oracle for the emission probability that shares no
//! code with the transfer-matrix product, which is what makes the
//! cross-validation in the test suite meaningful.
//!
//! On the circles φ = (2q−1)π each segment reflects the Bloch vector about
//! the torque direction, and the N-segment evolution collapses to the
//! closed map (x, z) = ((−1)^{N+1}·sin 2Nθ, cos 2Nθ); complete emission
//! (z = −1) then requires the torque angle θ = (p−½)π/N, which is where the
//! quasi-phase-matching points come from.

use serde::Serialize;

use crate::params::{ReducedParams, State2};

/// Real 3-vector R = (2·Re(c_e c_g*), −2·Im(c_e c_g*), |c_e|² − |c_g|²);
/// unit length for normalized states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// North pole: the excited atom with no photon.
    pub const NORTH: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Euclidean length (1 for pure states, up to integrator drift).
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// The torque (drive) vector Ω a segment precesses R around; y is always 0
/// and x carries the poling sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorqueVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One integration sample: time, Bloch vector, the 1-based segment the time
/// falls in (boundaries belong to the segment they close), and the signed
/// norm drift |R| − 1 accumulated by the integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub r: BlochVector,
    pub segment: u32,
    pub norm_drift: f64,
}

/// A sampled Bloch trajectory over [0, Nτ], one sample per RK4 step plus
/// the initial condition; times are strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

/// A quasi-phase-matching point: branch line p crossing branch circle q,
/// where the emission probability reaches 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseMatchPoint {
    /// Branch-line index, 1…N.
    pub p: u32,
    /// Branch-circle index, ≥ 1 (circle radius φ = (2q−1)π).
    pub q: u32,
    /// Torque angle θ = (p−½)π/N.
    pub theta: f64,
    /// Optimal detuning δ = ±(2q−1)π·cos θ (both signs are enumerated).
    pub delta_opt: f64,
    /// Coupling η = (2q−1)π·sin θ at the point (always ≥ 0).
    pub eta_opt: f64,
}

/// Maps a two-level state to its Bloch vector.
pub fn bloch_from_state(s: &State2) -> BlochVector {
    let coherence = s.c_e * s.c_g.conj();
    BlochVector {
        x: 2.0 * coherence.re,
        y: -2.0 * coherence.im,
        z: s.c_e.norm_sqr() - s.c_g.norm_sqr(),
    }
}

/// The torque vector of the (1-based) segment `m`: x = (−1)^{m+1}·η, z = δ.
///
/// # Panics
/// If `m` is zero.
pub fn torque_vector(m: u32, r: &ReducedParams) -> TorqueVector {
    assert!(m >= 1, "segment index is 1-based");
    let pole_sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    TorqueVector {
        x: pole_sign * r.eta(),
        y: 0.0,
        z: r.delta(),
    }
}

fn cross(r: &BlochVector, omega: &TorqueVector) -> BlochVector {
    BlochVector {
        x: r.y * omega.z - r.z * omega.y,
        y: r.z * omega.x - r.x * omega.z,
        z: r.x * omega.y - r.y * omega.x,
    }
}

fn axpy(r: &BlochVector, a: f64, d: &BlochVector) -> BlochVector {
    BlochVector {
        x: r.x + a * d.x,
        y: r.y + a * d.y,
        z: r.z + a * d.z,
    }
}

/// One classical RK4 step of Ṙ = R × Ω with constant Ω.
fn rk4_step(r: &BlochVector, omega: &TorqueVector, h: f64) -> BlochVector {
    let k1 = cross(r, omega);
    let k2 = cross(&axpy(r, 0.5 * h, &k1), omega);
    let k3 = cross(&axpy(r, 0.5 * h, &k2), omega);
    let k4 = cross(&axpy(r, h, &k3), omega);
    BlochVector {
        x: r.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        y: r.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        z: r.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
    }
}

fn integrate(r: &ReducedParams, steps_per_segment: u32, renormalize: bool) -> Trajectory {
    assert!(
        steps_per_segment >= 16,
        "fewer than 16 steps per segment would not resolve the precession"
    );
    let steps = steps_per_segment as u64;
    let h = 1.0 / steps_per_segment as f64;
    let mut samples = Vec::with_capacity((u64::from(r.n_segments()) * steps + 1) as usize);
    let mut state = BlochVector::NORTH;
    samples.push(TrajectorySample {
        t: 0.0,
        r: state,
        segment: 1,
        norm_drift: 0.0,
    });
    for m in 1..=r.n_segments() {
        // The torque is constant inside a segment and flips exactly at the
        // boundary; steps never straddle it.
        let omega = torque_vector(m, r);
        for i in 1..=steps {
            state = rk4_step(&state, &omega, h);
            let norm = state.norm();
            if renormalize {
                state.x /= norm;
                state.y /= norm;
                state.z /= norm;
            }
            let global_step = u64::from(m - 1) * steps + i;
            samples.push(TrajectorySample {
                t: global_step as f64 * h,
                r: state,
                segment: m,
                norm_drift: norm - 1.0,
            });
        }
    }
    Trajectory { samples }
}

/// Integrates Ṙ = R × Ω over all N segments from the north pole
/// (excited atom), with `steps_per_segment` fixed RK4 steps per segment
/// aligned to the poling boundaries. Norm drift is recorded per sample and
/// deliberately left uncorrected so convergence checks see the raw scheme;
/// see [`integrate_trajectory_renormalized`] for the corrected variant.
///
/// # Panics
/// If `steps_per_segment` < 16.
pub fn integrate_trajectory(r: &ReducedParams, steps_per_segment: u32) -> Trajectory {
    integrate(r, steps_per_segment, false)
}

/// Like [`integrate_trajectory`], but rescales R onto the unit sphere after
/// every step, for long trajectories where the accumulated drift would
/// otherwise become visible. Each sample's `norm_drift` still records the
/// pre-correction drift of its step.
///
/// # Panics
/// If `steps_per_segment` < 16.
pub fn integrate_trajectory_renormalized(
    r: &ReducedParams,
    steps_per_segment: u32,
) -> Trajectory {
    integrate(r, steps_per_segment, true)
}

/// Emission probability read off the trajectory endpoint: (1 − z)/2,
/// clamped to [0, 1] against integrator drift.
///
/// # Panics
/// If the trajectory has no samples.
pub fn emission_from_trajectory(trajectory: &Trajectory) -> f64 {
    let last = trajectory
        .samples
        .last()
        .expect("emission needs at least one trajectory sample");
    (0.5 * (1.0 - last.r.z)).clamp(0.0, 1.0)
}

/// Final (x, z) of the reflection model: on the branch circles
/// φ = (2q−1)π each segment is a point reflection about the torque
/// direction, and N of them compose to
/// (x, z) = ((−1)^{N+1}·sin 2Nθ, cos 2Nθ). The model is meaningless off
/// the branch circles; callers are responsible for that context.
pub fn reflection_model_final(n_segments: u32, theta: f64) -> (f64, f64) {
    let angle = 2.0 * n_segments as f64 * theta;
    let sign = if n_segments.is_multiple_of(2) { -1.0 } else { 1.0 };
    (sign * angle.sin(), angle.cos())
}

/// All quasi-phase-matching points for p = 1…N, q = 1…`q_max`, both signs
/// of the optimal detuning δ = ±(2q−1)π·cos((p−½)π/N), ordered by
/// (q, p, sign) with the negative sign first. The emission probability is
/// exactly 1 at every returned point.
///
/// # Panics
/// If `n_segments` or `q_max` is zero.
pub fn phase_match_points(n_segments: u32, q_max: u32) -> Vec<PhaseMatchPoint> {
    assert!(n_segments >= 1, "need at least one segment");
    assert!(q_max >= 1, "need at least one branch circle");
    let mut points = Vec::with_capacity((n_segments * q_max * 2) as usize);
    for q in 1..=q_max {
        let radius = (2.0 * q as f64 - 1.0) * std::f64::consts::PI;
        for p in 1..=n_segments {
            let theta = (p as f64 - 0.5) * std::f64::consts::PI / n_segments as f64;
            let eta_opt = radius * theta.sin();
            for sign in [-1.0, 1.0] {
                points.push(PhaseMatchPoint {
                    p,
                    q,
                    theta,
                    delta_opt: sign * radius * theta.cos(),
                    eta_opt,
                });
            }
        }
    }
    points
}
