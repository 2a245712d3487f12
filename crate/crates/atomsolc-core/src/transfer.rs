//! Transfer-matrix evaluation of the photoemission probability.
//!
//! One segment of duration τ evolves the amplitudes (c_e, c_g) by a 2×2
//! unitary unimodular matrix U⁽ᵐ⁾ whose off-diagonal sign tracks the poling
//! of the coupling constant. Two consecutive segments form the unit cell
//! T⁽ᵏ⁾ = U⁽²ᵏ⁾U⁽²ᵏ⁻¹⁾; stripping the cell's common phase factors leaves a
//! k-independent matrix 𝒯 whose powers follow the Chebyshev identity for
//! unimodular matrices. That identity yields closed forms for the emission
//! probability after N segments, evaluated here alongside the strict
//! sequential product.
//!
//! The sequential product ([`emission_direct`]) is the ground truth: the
//! closed forms ([`emission_closed`]) and the tabulated polynomials
//! ([`table_polynomial`]) are validated against it, not vice versa.

use num_complex::Complex64;

use crate::error::Error;
use crate::params::{ReducedParams, State2};

/// Threshold on |sin ξ| below which the quotient sin(kξ)/sin ξ loses too
/// many digits (its error scales as k·ε/sin ξ) and the Chebyshev-polynomial
/// recurrence takes over.
const DEGENERATE_SIN_XI: f64 = 1e-3;

/// Orders up to this always use the recurrence: it is exact to ~k·ε there
/// regardless of ξ, and the O(k) cost is negligible. The O(1) quotient is
/// only worth its conditioning tradeoff for large k.
const RECURRENCE_MAX_ORDER: i64 = 64;

/// Slack allowed before a closed-form probability outside [0, 1] is treated
/// as an internal-consistency failure rather than floating-point noise.
const PROBABILITY_SLACK: f64 = 1e-9;

/// A 2×2 complex matrix; every constructor in this module produces a
/// unitary matrix with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub u11: Complex64,
    pub u12: Complex64,
    pub u21: Complex64,
    pub u22: Complex64,
}

impl Unitary2 {
    /// The identity evolution.
    pub const IDENTITY: Unitary2 = Unitary2 {
        u11: Complex64::new(1.0, 0.0),
        u12: Complex64::new(0.0, 0.0),
        u21: Complex64::new(0.0, 0.0),
        u22: Complex64::new(1.0, 0.0),
    };

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        Unitary2 {
            u11: self.u11 * rhs.u11 + self.u12 * rhs.u21,
            u12: self.u11 * rhs.u12 + self.u12 * rhs.u22,
            u21: self.u21 * rhs.u11 + self.u22 * rhs.u21,
            u22: self.u21 * rhs.u12 + self.u22 * rhs.u22,
        }
    }

    /// Applies the matrix to a state vector.
    pub fn apply(&self, s: &State2) -> State2 {
        State2 {
            c_e: self.u11 * s.c_e + self.u12 * s.c_g,
            c_g: self.u21 * s.c_e + self.u22 * s.c_g,
        }
    }

    /// Determinant (1 for every matrix built here, up to rounding).
    pub fn det(&self) -> Complex64 {
        self.u11 * self.u22 - self.u12 * self.u21
    }
}

/// The Chebyshev angle ξ of the phase-stripped unit cell, defined through
/// cos ξ = 1 − (2δ²/φ²)·sin²(φ/2), together with its sine and a flag marking
/// the near-degenerate regime |sin ξ| < 1e-3 where the quotient form of
/// sin(kξ)/sin ξ must not be used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellAngle {
    xi: f64,
    cos_xi: f64,
    sin_xi: f64,
    near_degenerate: bool,
}

impl CellAngle {
    /// The angle ξ ∈ [0, π].
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// cos ξ, clamped into [−1, 1] at construction.
    pub fn cos_xi(&self) -> f64 {
        self.cos_xi
    }

    /// sin ξ ≥ 0.
    pub fn sin_xi(&self) -> f64 {
        self.sin_xi
    }

    /// True when |sin ξ| < 1e-3 (ξ near 0 or π, e.g. everywhere on the
    /// δ = 0 axis).
    pub fn is_near_degenerate(&self) -> bool {
        self.near_degenerate
    }
}

/// The single-segment propagator U⁽ᵐ⁾ for the (1-based) segment index `m`:
///
/// ```text
/// u11 = (cos(φ/2) − i(δ/φ)sin(φ/2))·e^{iδ/2}
/// u12 = (−1)^m·i·(η/φ)·sin(φ/2)·e^{i(m−1/2)δ}
/// u21 = −u12*,  u22 = u11*
/// ```
///
/// At φ = 0 there is no evolution and the identity is returned. The m
/// dependence sits only in the off-diagonal poling sign and phase; the
/// Hamiltonians of different segments do not commute, so products must keep
/// the segment order.
///
/// # Panics
/// If `m` is zero (segments are numbered from 1).
pub fn segment_unitary(m: u32, r: &ReducedParams) -> Unitary2 {
    assert!(m >= 1, "segment index is 1-based");
    let phi = r.phi();
    if phi == 0.0 {
        return Unitary2::IDENTITY;
    }
    let (sin_half, cos_half) = (0.5 * phi).sin_cos();
    let pole_sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let u11 = Complex64::new(cos_half, -r.delta() / phi * sin_half)
        * Complex64::from_polar(1.0, 0.5 * r.delta());
    let u12 = Complex64::new(0.0, pole_sign * r.eta() / phi * sin_half)
        * Complex64::from_polar(1.0, (m as f64 - 0.5) * r.delta());
    Unitary2 {
        u11,
        u12,
        u21: -u12.conj(),
        u22: u11.conj(),
    }
}

/// The two-segment unit cell T⁽ᵏ⁾ = U⁽²ᵏ⁾·U⁽²ᵏ⁻¹⁾ for the (1-based) cell
/// index `k`, built as the explicit product of the two half-cells.
///
/// # Panics
/// If `k` is zero.
pub fn unit_cell(k: u32, r: &ReducedParams) -> Unitary2 {
    assert!(k >= 1, "cell index is 1-based");
    segment_unitary(2 * k, r).mul(&segment_unitary(2 * k - 1, r))
}

/// The phase-stripped unit cell 𝒯, independent of the cell index:
///
/// ```text
/// 𝒯11 = 1 − (2δ²/φ²)·sin²(φ/2) − i(δ/φ)·sin φ
/// 𝒯12 = −(2ηδ/φ²)·sin²(φ/2)
/// 𝒯21 = −𝒯12*,  𝒯22 = 𝒯11*
/// ```
///
/// Its entries coincide with T⁽ᵏ⁾ in modulus for every k; only the dropped
/// common phase factors differ, and those never reach |c_g|.
pub fn reduced_cell(r: &ReducedParams) -> Unitary2 {
    let phi = r.phi();
    if phi == 0.0 {
        return Unitary2::IDENTITY;
    }
    let sin_half_sq = (0.5 * phi).sin().powi(2);
    let t11 = Complex64::new(
        1.0 - 2.0 * (r.delta() / phi).powi(2) * sin_half_sq,
        -r.delta() / phi * phi.sin(),
    );
    let t12 = Complex64::new(-2.0 * r.eta() * r.delta() / (phi * phi) * sin_half_sq, 0.0);
    Unitary2 {
        u11: t11,
        u12: t12,
        u21: -t12.conj(),
        u22: t11.conj(),
    }
}

/// The Chebyshev angle of the phase-stripped cell.
///
/// cos ξ equals half the trace of 𝒯 and is clamped into [−1, 1] before the
/// arccosine to absorb 1-ulp overshoots.
///
/// # Errors
/// [`Error::DegenerateParameters`] at φ = 0, where the cell is the identity
/// and ξ is undefined; callers must use the identity evolution there.
pub fn cell_angle(r: &ReducedParams) -> Result<CellAngle, Error> {
    let phi = r.phi();
    if phi == 0.0 {
        return Err(Error::DegenerateParameters(
            "cell angle undefined at phi = 0".into(),
        ));
    }
    let cos_xi = (1.0 - 2.0 * (r.delta() / phi).powi(2) * (0.5 * phi).sin().powi(2))
        .clamp(-1.0, 1.0);
    let xi = cos_xi.acos();
    let sin_xi = xi.sin();
    Ok(CellAngle {
        xi,
        cos_xi,
        sin_xi,
        near_degenerate: sin_xi.abs() < DEGENERATE_SIN_XI,
    })
}

/// The ratio sin(kξ)/sin ξ appearing in k-th powers of the unit cell.
///
/// Away from the degeneracy it is evaluated as the literal quotient; when
/// the angle is flagged near-degenerate (ξ → 0 or π) the equivalent
/// Chebyshev polynomial U_{k−1}(cos ξ) is evaluated by its recurrence, which
/// stays accurate where the quotient loses ~6 digits. The k = 0 value is 0.
pub fn chebyshev_ratio(k: u32, angle: &CellAngle) -> f64 {
    chebyshev_ratio_signed(i64::from(k), angle)
}

/// Extension of [`chebyshev_ratio`] to k = −1 (value −1), needed by the
/// odd-N closed form.
fn chebyshev_ratio_signed(k: i64, angle: &CellAngle) -> f64 {
    debug_assert!(k >= -1);
    match k {
        -1 => -1.0,
        0 => 0.0,
        _ if k <= RECURRENCE_MAX_ORDER || angle.near_degenerate => {
            // U_{k−1}(cos ξ) via U_{j+1} = 2·cos ξ·U_j − U_{j−1}.
            let x = angle.cos_xi;
            let mut prev = 0.0; // U_{−1}
            let mut cur = 1.0; // U_0
            for _ in 1..k {
                (prev, cur) = (cur, 2.0 * x * cur - prev);
            }
            cur
        }
        _ => (k as f64 * angle.xi).sin() / angle.sin_xi,
    }
}

/// The k-th power of the phase-stripped cell, 𝒯^k, via the Chebyshev
/// identity: 𝒯^k = 𝒯·R_k − I·R_{k−1} with R_j = sin(jξ)/sin ξ.
pub fn reduced_cell_power(r: &ReducedParams, k: u32) -> Unitary2 {
    if k == 0 || r.phi() == 0.0 {
        return Unitary2::IDENTITY;
    }
    let cell = reduced_cell(r);
    let angle = cell_angle(r).expect("phi > 0 was just checked");
    let r_k = chebyshev_ratio_signed(i64::from(k), &angle);
    let r_km1 = chebyshev_ratio_signed(i64::from(k) - 1, &angle);
    Unitary2 {
        u11: cell.u11 * r_k - r_km1,
        u12: cell.u12 * r_k,
        u21: cell.u21 * r_k,
        u22: cell.u22 * r_k - r_km1,
    }
}

/// Applies the full segment product U⁽ᴺ⁾···U⁽²⁾U⁽¹⁾ to `initial`, strictly
/// in segment order (the per-segment Hamiltonians do not commute).
pub fn evolve_sequential(r: &ReducedParams, initial: &State2) -> State2 {
    let mut state = *initial;
    for m in 1..=r.n_segments() {
        state = segment_unitary(m, r).apply(&state);
    }
    state
}

/// Photoemission probability P_em = |c_g|² after all N segments, starting
/// from the excited atom. This sequential-product evaluation is the
/// reference implementation for the whole crate.
pub fn emission_direct(r: &ReducedParams) -> f64 {
    evolve_sequential(r, &State2::EXCITED)
        .c_g
        .norm_sqr()
        .clamp(0.0, 1.0)
}

/// Closed-form P_em from the Chebyshev identity, with R_j = sin(jξ)/sin ξ
/// and x = (δ²/φ²)·sin²(φ/2):
///
/// * even N = 2k:  P = (4η²δ²/φ⁴)·sin⁴(φ/2)·R_k²
/// * odd N = 2k+1: P = (η²/φ²)·sin²(φ/2)·\[(1 − 4x)·R_k − R_{k−1}\]²
///
/// The bracket's 4x term carries δ²/φ² — dimensionless, like every other
/// appearance of the detuning in the cell. Replacing it with the
/// superficially similar δ²/φ breaks agreement with the sequential product
/// by orders of magnitude (see `odd_bracket_requires_delta_sq_over_phi_sq`
/// in the tests, which pins the failing term).
///
/// # Errors
/// [`Error::InternalConsistency`] if the evaluated expression leaves
/// [0, 1] by more than 1e-9; small overshoots within that slack are
/// clamped.
pub fn emission_closed(r: &ReducedParams) -> Result<f64, Error> {
    let phi = r.phi();
    if phi == 0.0 {
        return Ok(0.0);
    }
    let sin_half_sq = (0.5 * phi).sin().powi(2);
    let p1 = (r.eta() / phi).powi(2) * sin_half_sq;
    let x = (r.delta() / phi).powi(2) * sin_half_sq;
    let angle = cell_angle(r)?;
    let n = r.n_segments();
    let k = i64::from(n / 2);
    let value = if n.is_multiple_of(2) {
        let r_k = chebyshev_ratio_signed(k, &angle);
        4.0 * p1 * x * r_k * r_k
    } else {
        let r_k = chebyshev_ratio_signed(k, &angle);
        let r_km1 = chebyshev_ratio_signed(k - 1, &angle);
        let bracket = (1.0 - 4.0 * x) * r_k - r_km1;
        p1 * bracket * bracket
    };
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
        return Err(Error::InternalConsistency(format!(
            "closed-form emission {value} outside [0, 1] at eta={}, delta={}, N={}",
            r.eta(),
            r.delta(),
            n
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// The explicitly tabulated emission polynomials for N = 1..=8, written in
/// terms of P⁽¹⁾ = (η²/φ²)sin²(φ/2), P⁽²⁾ = (4η²δ²/φ⁴)sin⁴(φ/2) and
/// x = (δ²/φ²)sin²(φ/2):
///
/// | N | P_em                            |
/// |---|---------------------------------|
/// | 1 | P⁽¹⁾                            |
/// | 2 | P⁽²⁾                            |
/// | 3 | P⁽¹⁾(1 − 4x)²                   |
/// | 4 | P⁽²⁾(2 − 4x)²                   |
/// | 5 | P⁽¹⁾(1 − 12x + 16x²)²           |
/// | 6 | P⁽²⁾(3 − 16x + 16x²)²           |
/// | 7 | P⁽¹⁾(1 − 24x + 80x² − 64x³)²    |
/// | 8 | P⁽²⁾(4 − 40x + 96x² − 64x³)²    |
///
/// # Errors
/// [`Error::Unsupported`] outside N = 1..=8 (the table is hard-coded, not
/// derived symbolically at runtime).
pub fn table_polynomial(n_segments: u32, r: &ReducedParams) -> Result<f64, Error> {
    if !(1..=8).contains(&n_segments) {
        return Err(Error::Unsupported(format!(
            "tabulated polynomials exist for N = 1..=8, got N={n_segments}"
        )));
    }
    let phi = r.phi();
    if phi == 0.0 {
        return Ok(0.0);
    }
    let sin_half_sq = (0.5 * phi).sin().powi(2);
    let p1 = (r.eta() / phi).powi(2) * sin_half_sq;
    let x = (r.delta() / phi).powi(2) * sin_half_sq;
    let p2 = 4.0 * p1 * x;
    let value = match n_segments {
        1 => p1,
        2 => p2,
        3 => p1 * (1.0 - 4.0 * x).powi(2),
        4 => p2 * (2.0 - 4.0 * x).powi(2),
        5 => p1 * (1.0 - 12.0 * x + 16.0 * x * x).powi(2),
        6 => p2 * (3.0 - 16.0 * x + 16.0 * x * x).powi(2),
        7 => p1 * (1.0 - (24.0 - (80.0 - 64.0 * x) * x) * x).powi(2),
        8 => p2 * (4.0 - (40.0 - (96.0 - 64.0 * x) * x) * x).powi(2),
        _ => unreachable!(),
    };
    Ok(value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn params(eta: f64, delta: f64, n: u32) -> ReducedParams {
        ReducedParams::new(eta, delta, n).unwrap()
    }

    fn entry_norm(a: &Unitary2, b: &Unitary2) -> f64 {
        (a.u11 - b.u11)
            .norm()
            .max((a.u12 - b.u12).norm())
            .max((a.u21 - b.u21).norm())
            .max((a.u22 - b.u22).norm())
    }

    #[test]
    fn resonant_pi_pulse_segment() {
        let u = segment_unitary(1, &params(PI, 0.0, 1));
        assert_abs_diff_eq!(u.u11.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((u.u12 - Complex64::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_coupling_segment_is_pure_phase() {
        // η = 0, δ = 2π: a full detuning revolution, identity in effect.
        let u = segment_unitary(1, &params(0.0, 2.0 * PI, 1));
        assert_abs_diff_eq!((u.u11 - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(u.u12, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn consecutive_segments_differ_by_pole_sign_and_phase() {
        // u12 ratio between m = 2 and m = 1 is −e^{iδ}.
        let r = params(1.0, 0.7, 2);
        let u1 = segment_unitary(1, &r);
        let u2 = segment_unitary(2, &r);
        let ratio = u2.u12 / u1.u12;
        let expected = -Complex64::from_polar(1.0, 0.7);
        assert_abs_diff_eq!((ratio - expected).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn segment_at_origin_is_identity() {
        let u = segment_unitary(3, &params(0.0, 0.0, 4));
        assert_eq!(entry_norm(&u, &Unitary2::IDENTITY), 0.0);
    }

    #[test]
    fn unit_cell_on_resonance_cancels() {
        // δ = 0: the two oppositely poled half-cells undo each other.
        let t = unit_cell(1, &params(1.7, 0.0, 2));
        assert!(entry_norm(&t, &Unitary2::IDENTITY) < 1e-15);
        assert_eq!(t.u12, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn unit_cell_matches_its_closed_form() {
        let r = params(1.0, 1.0, 2);
        for k in [1u32, 2, 5] {
            let t = unit_cell(k, &r);
            let phi = r.phi();
            let s2 = (0.5 * phi).sin().powi(2);
            let t11 = Complex64::new(
                1.0 - 2.0 * (r.delta() / phi).powi(2) * s2,
                -r.delta() / phi * phi.sin(),
            ) * Complex64::from_polar(1.0, r.delta());
            let t12 = Complex64::new(-2.0 * r.eta() * r.delta() / (phi * phi) * s2, 0.0)
                * Complex64::from_polar(1.0, -r.delta())
                * Complex64::from_polar(1.0, 2.0 * k as f64 * r.delta());
            assert_abs_diff_eq!((t.u11 - t11).norm(), 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!((t.u12 - t12).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cell_index_enters_only_as_off_diagonal_phase() {
        let r = params(2.3, 1.1, 2);
        let t1 = unit_cell(1, &r);
        let t3 = unit_cell(3, &r);
        assert_abs_diff_eq!((t1.u11 - t3.u11).norm(), 0.0, epsilon = 1e-12);
        let phase = Complex64::from_polar(1.0, 4.0 * r.delta());
        assert_abs_diff_eq!((t3.u12 - t1.u12 * phase).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn reduced_cell_limits() {
        assert_eq!(
            entry_norm(&reduced_cell(&params(1.3, 0.0, 2)), &Unitary2::IDENTITY),
            0.0
        );
        // η = 0: pure phase e^{−iδ} on the diagonal, no transfer.
        let t = reduced_cell(&params(0.0, 0.8, 2));
        assert_abs_diff_eq!(
            (t.u11 - Complex64::from_polar(1.0, -0.8)).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_eq!(t.u12, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn reduced_cell_matches_unit_cell_in_modulus() {
        let r = params(1.0, 1.0, 2);
        let stripped = reduced_cell(&r);
        for k in 1..=4 {
            let full = unit_cell(k, &r);
            assert_abs_diff_eq!(stripped.u11.norm(), full.u11.norm(), epsilon = 1e-12);
            assert_abs_diff_eq!(stripped.u12.norm(), full.u12.norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn cell_angle_frozen_values() {
        // δ = 0: cos ξ = 1, flagged degenerate.
        let a = cell_angle(&params(2.0, 0.0, 2)).unwrap();
        assert_eq!(a.cos_xi(), 1.0);
        assert!(a.is_near_degenerate());

        // φ = π, θ = π/10: cos ξ = 1 − 2cos²(π/10).
        let a = cell_angle(&ReducedParams::from_polar(PI, PI / 10.0, 2).unwrap()).unwrap();
        assert_abs_diff_eq!(a.cos_xi(), -0.8090169943749475, epsilon = 1e-12);

        // η = 0: cos ξ = cos δ.
        let a = cell_angle(&params(0.0, 1.234, 2)).unwrap();
        assert_abs_diff_eq!(a.cos_xi(), 1.234f64.cos(), epsilon = 1e-12);

        assert!(matches!(
            cell_angle(&params(0.0, 0.0, 2)),
            Err(Error::DegenerateParameters(_))
        ));
    }

    #[test]
    fn chebyshev_ratio_small_orders() {
        let a = cell_angle(&params(1.0, 1.0, 2)).unwrap();
        assert_abs_diff_eq!(chebyshev_ratio(1, &a), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chebyshev_ratio(2, &a), 2.0 * a.cos_xi(), epsilon = 1e-12);
        assert_eq!(chebyshev_ratio(0, &a), 0.0);
    }

    #[test]
    fn chebyshev_ratio_degenerate_limit() {
        // ξ → 0 (δ = 0): sin(kξ)/sin ξ → k.
        let a = cell_angle(&params(1.0, 0.0, 2)).unwrap();
        assert!(a.is_near_degenerate());
        assert_abs_diff_eq!(chebyshev_ratio(5, &a), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn chebyshev_ratio_matches_quotient_in_regular_regime() {
        let a = cell_angle(&params(1.7, 2.4, 2)).unwrap();
        assert!(!a.is_near_degenerate());
        for k in 1..=9u32 {
            let quotient = (k as f64 * a.xi()).sin() / a.sin_xi();
            assert_abs_diff_eq!(chebyshev_ratio(k, &a), quotient, epsilon = 1e-12);
        }
    }

    #[test]
    fn reduced_cell_power_matches_repeated_multiplication() {
        for &(eta, delta) in &[(1.0, 1.0), (0.4, 2.9), (3.3, 0.01), (2.0, -1.2)] {
            let r = params(eta, delta, 2);
            let cell = reduced_cell(&r);
            let mut accum = Unitary2::IDENTITY;
            for k in 0..=8u32 {
                let powered = reduced_cell_power(&r, k);
                assert!(
                    entry_norm(&powered, &accum) < 1e-12,
                    "k={k}, eta={eta}, delta={delta}"
                );
                accum = cell.mul(&accum);
            }
        }
    }

    #[test]
    fn sequential_pi_pulse_fully_transfers() {
        let out = evolve_sequential(&params(PI, 0.0, 1), &State2::EXCITED);
        assert_abs_diff_eq!(out.c_g.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn even_n_on_resonance_is_quenched() {
        for eta in [0.3, 1.0, 2.5, 9.99] {
            // A single cell from the excited state cancels exactly; longer
            // chains re-enter each cell with a rounded amplitude, leaving
            // at most ~1 ulp of residue per cell.
            let out = evolve_sequential(&params(eta, 0.0, 2), &State2::EXCITED);
            assert_eq!(out.c_g.norm_sqr(), 0.0);
            assert!(emission_direct(&params(eta, 0.0, 16)) < 1e-28);
        }
    }

    #[test]
    fn odd_n_on_resonance_matches_single_segment() {
        for eta in [0.4f64, 1.7, 3.9] {
            let expect = (0.5 * eta).sin().powi(2);
            for n in [3u32, 5, 7] {
                assert_abs_diff_eq!(
                    emission_direct(&params(eta, 0.0, n)),
                    expect,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_product_at_spot_points() {
        for &(eta, delta, n) in &[
            (1.3, 0.9, 4u32),
            (2.0, 1.0, 2),
            (0.7, -2.2, 7),
            (3.1, 0.4, 13),
            (1.0, 1.0, 16),
        ] {
            let r = params(eta, delta, n);
            assert_abs_diff_eq!(
                emission_closed(&r).unwrap(),
                emission_direct(&r),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn closed_form_hits_unity_at_a_matched_point() {
        // N = 5, θ = π/10, φ = π: complete emission.
        let r = ReducedParams::from_polar(PI, PI / 10.0, 5).unwrap();
        assert_abs_diff_eq!(emission_closed(&r).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(emission_direct(&r), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn closed_form_is_zero_at_origin() {
        assert_eq!(emission_closed(&params(0.0, 0.0, 6)).unwrap(), 0.0);
    }

    #[test]
    fn odd_bracket_requires_delta_sq_over_phi_sq() {
        // The odd-N closed form multiplies R_k by 1 − 4(δ²/φ²)sin²(φ/2).
        // This test documents why: the variant with δ²/φ (one power of φ
        // missing, a plausible mis-transcription) is not even a
        // probability — it blows up with the detuning — while the
        // implemented form tracks the sequential product to 1e-12
        // everywhere on the same grid.
        let mut worst_wrong: f64 = 0.0;
        let mut worst_right: f64 = 0.0;
        for n in [3u32, 5, 7] {
            let k = n / 2;
            for i in 1..=12 {
                for j in 1..=18 {
                    let r = params(0.33 * i as f64, 0.5 * j as f64, n);
                    let phi = r.phi();
                    let s2 = (0.5 * phi).sin().powi(2);
                    let angle = cell_angle(&r).unwrap();
                    let r_k = chebyshev_ratio(k, &angle);
                    let r_km1 = chebyshev_ratio_signed(i64::from(k) - 1, &angle);
                    let p1 = (r.eta() / phi).powi(2) * s2;

                    let bad = (1.0 - 4.0 * r.delta().powi(2) / phi * s2) * r_k - r_km1;
                    let wrong = p1 * bad * bad;
                    let reference = emission_direct(&r);
                    worst_wrong = worst_wrong.max((wrong - reference).abs());
                    worst_right =
                        worst_right.max((emission_closed(&r).unwrap() - reference).abs());
                }
            }
        }
        assert!(
            worst_wrong > 10.0,
            "mis-scaled bracket should be grossly wrong, got max |Δ| = {worst_wrong}"
        );
        assert!(
            worst_right < 1e-12,
            "implemented form drifted from the product oracle: {worst_right}"
        );
    }

    #[test]
    fn table_rows_agree_with_product() {
        let pts = [(2.0, 1.0), (1.1, -0.6), (0.33, 2.8), (2.0, 1.5), (3.7, 3.1)];
        for n in 1..=8u32 {
            for &(eta, delta) in &pts {
                let r = params(eta, delta, n);
                assert_abs_diff_eq!(
                    table_polynomial(n, &r).unwrap(),
                    emission_direct(&r),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn table_rejects_out_of_range_n() {
        let r = params(1.0, 1.0, 9);
        assert!(matches!(
            table_polynomial(9, &r),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            table_polynomial(0, &r),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn constructed_matrices_are_unitary_unimodular() {
        for &(eta, delta) in &[(0.5, 0.5), (2.0, -3.0), (4.0, 0.0), (0.0, 1.0)] {
            let r = params(eta, delta, 2);
            for u in [
                segment_unitary(1, &r),
                segment_unitary(2, &r),
                unit_cell(1, &r),
                reduced_cell(&r),
                reduced_cell_power(&r, 5),
            ] {
                assert_abs_diff_eq!((u.det() - 1.0).norm(), 0.0, epsilon = 1e-12);
                let norm_row = u.u11.norm_sqr() + u.u12.norm_sqr();
                assert_abs_diff_eq!(norm_row, 1.0, epsilon = 1e-12);
                let ortho = u.u11 * u.u21.conj() + u.u12 * u.u22.conj();
                assert_abs_diff_eq!(ortho.norm(), 0.0, epsilon = 1e-12);
            }
        }
    }
}
