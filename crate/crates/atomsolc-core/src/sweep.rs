//! Data-parallel grid engine for the emission and Mandel-Q maps, plus the
//! branch-line/branch-circle overlay geometry.
//!
//! Grids are row-major with the y axis outer and the x axis inner, and all
//! scans are deterministic: work is partitioned by rows into disjoint
//! slices of one preallocated buffer and assembled by index, so the values
//! are bit-identical no matter how many worker threads rayon schedules.
//! Detuning axes are always expressed in units of π (axis name
//! `delta_over_pi`); η and n axes are raw.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::analysis::{default_derivative_step, mandel_q};
use crate::error::Error;
use crate::params::ReducedParams;
use crate::transfer::emission_direct;

/// Canonical axis name for detunings in units of π.
pub const AXIS_DELTA_OVER_PI: &str = "delta_over_pi";
/// Canonical axis name for the raw coupling η.
pub const AXIS_ETA: &str = "eta";
/// Canonical axis name for the mean photon number.
pub const AXIS_N: &str = "n";

/// A uniformly sampled closed interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    /// Axis label; grids use the canonical names above.
    pub name: String,
    /// First sample (inclusive).
    pub min: f64,
    /// Last sample (inclusive).
    pub max: f64,
    /// Number of samples, ≥ 2.
    pub count: usize,
}

impl AxisSpec {
    /// A validated axis.
    ///
    /// # Errors
    /// [`Error::InvalidParameter`] unless min < max (both finite) and
    /// count ≥ 2.
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Result<AxisSpec, Error> {
        let axis = AxisSpec {
            name: name.to_owned(),
            min,
            max,
            count,
        };
        axis.validate()?;
        Ok(axis)
    }

    /// Re-checks the invariants (useful after deserialization).
    pub fn validate(&self) -> Result<(), Error> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::InvalidParameter(format!(
                "axis '{}' needs finite min < max, got [{}, {}]",
                self.name, self.min, self.max
            )));
        }
        if self.count < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis '{}' needs at least 2 samples, got {}",
                self.name, self.count
            )));
        }
        Ok(())
    }

    /// Spacing between consecutive samples.
    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    /// The i-th sample. Endpoints are returned exactly; interior samples
    /// use the integer-weighted average (min·(count−1−i) + max·i)/(count−1),
    /// which makes a symmetric axis (min = −max) mirror bitwise —
    /// downstream parity checks rely on that.
    pub fn value_at(&self, i: usize) -> f64 {
        assert!(i < self.count, "sample index out of range");
        if i == 0 {
            self.min
        } else if i == self.count - 1 {
            self.max
        } else {
            let last = (self.count - 1) as f64;
            (self.min * (last - i as f64) + self.max * i as f64) / last
        }
    }

    /// All samples in order.
    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value_at(i)).collect()
    }
}

/// What a grid's values mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Photoemission probability, each value in [0, 1].
    Emission,
    /// Mandel Q; may contain ±∞ markers at the formula's pole.
    MandelQ,
}

/// Physical parameters a grid was computed with, as applicable to its
/// quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    /// Number of poled segments.
    pub n_segments: u32,
    /// Vacuum coupling η₀ (Mandel-Q grids only).
    pub eta0: Option<f64>,
    /// Cavity parameter D_cav (Mandel-Q grids only).
    pub d_cav: Option<f64>,
}

/// A scalar field sampled on the outer product of two axes, row-major with
/// y outer and x inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid {
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    /// x.count × y.count values; index (ix, iy) lives at iy·x.count + ix.
    pub values: Vec<f64>,
    pub quantity: Quantity,
    pub meta: GridMeta,
}

impl ScalarGrid {
    /// Flat index of grid node (ix, iy).
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.x_axis.count && iy < self.y_axis.count);
        iy * self.x_axis.count + ix
    }

    /// Value at grid node (ix, iy).
    pub fn value_at(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.index(ix, iy)]
    }
}

/// One branch line clipped to a grid viewport, in grid coordinates
/// (x = δ/π, y = η).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchLine {
    /// Branch-line index, 1…N.
    pub p: u32,
    /// Angle θ = (p−½)π/N from the +δ axis.
    pub theta: f64,
    /// Clipped segment start, [δ/π, η].
    pub start: [f64; 2],
    /// Clipped segment end, [δ/π, η].
    pub end: [f64; 2],
}

/// One branch circle (its radius is in raw (δ, η) coordinates; on a
/// (δ/π, η) viewport it renders as a half-ellipse).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchCircle {
    /// Branch-circle index, ≥ 1.
    pub q: u32,
    /// Radius φ = (2q−1)π.
    pub radius: f64,
}

/// Overlay geometry for an emission map: the branch lines and circles
/// whose intersections are the quasi-phase-matching points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchGeometry {
    pub n_segments: u32,
    /// Lines that intersect the viewport at all (fully outside ones are
    /// dropped).
    pub lines: Vec<BranchLine>,
    pub circles: Vec<BranchCircle>,
}

impl BranchGeometry {
    /// All line×circle intersection points as (p, q, δ/π, η), whether or
    /// not they fall inside the viewport the lines were clipped to. Every
    /// quasi-phase-matching point appears here: the +δ point of branch p
    /// on line p, its −δ mirror on line N+1−p.
    pub fn intersections(&self) -> Vec<(u32, u32, f64, f64)> {
        let mut out = Vec::with_capacity(self.lines.len() * self.circles.len());
        for line in &self.lines {
            let (sin, cos) = line.theta.sin_cos();
            for circle in &self.circles {
                out.push((
                    line.p,
                    circle.q,
                    circle.radius * cos / PI,
                    circle.radius * sin,
                ));
            }
        }
        out
    }
}

/// Default emission-map axes: δ/π ∈ [−4, 4] and η ∈ [0, 4π], 501×501 —
/// wide enough to contain the q ≤ 2 branch structure.
pub fn default_emission_axes() -> (AxisSpec, AxisSpec) {
    (
        AxisSpec::new(AXIS_DELTA_OVER_PI, -4.0, 4.0, 501).expect("static axis is valid"),
        AxisSpec::new(AXIS_ETA, 0.0, 4.0 * PI, 501).expect("static axis is valid"),
    )
}

/// Default Mandel-Q axes: n ∈ [1, 1000] and δ/π ∈ [−4, 4], 401×401.
pub fn default_mandel_axes() -> (AxisSpec, AxisSpec) {
    (
        AxisSpec::new(AXIS_N, 1.0, 1000.0, 401).expect("static axis is valid"),
        AxisSpec::new(AXIS_DELTA_OVER_PI, -4.0, 4.0, 401).expect("static axis is valid"),
    )
}

/// Default vacuum coupling η₀ for Mandel-Q maps.
pub const DEFAULT_ETA0: f64 = 0.24;
/// Default cavity parameter D_cav for Mandel-Q maps.
pub const DEFAULT_D_CAV: f64 = 0.0038;

/// Emission-probability map over (δ/π, η): x = `delta_axis` (π units),
/// y = `eta_axis` (raw), every node evaluated by the sequential matrix
/// product. Rows are computed in parallel into disjoint slices, so the
/// result is independent of thread count.
///
/// # Errors
/// [`Error::InvalidParameter`] for invalid axes or N < 1.
pub fn scan_emission(
    n_segments: u32,
    delta_axis: AxisSpec,
    eta_axis: AxisSpec,
) -> Result<ScalarGrid, Error> {
    delta_axis.validate()?;
    eta_axis.validate()?;
    if n_segments < 1 {
        return Err(Error::InvalidParameter(
            "need at least one segment".into(),
        ));
    }
    let nx = delta_axis.count;
    let deltas: Vec<f64> = delta_axis.values().iter().map(|x| PI * x).collect();
    let etas = eta_axis.values();
    let mut values = vec![0.0; nx * eta_axis.count];
    values
        .par_chunks_mut(nx)
        .zip(etas.par_iter())
        .for_each(|(row, &eta)| {
            for (slot, &delta) in row.iter_mut().zip(&deltas) {
                let r = ReducedParams::new(eta, delta, n_segments)
                    .expect("finite axis values always reduce");
                *slot = emission_direct(&r);
            }
        });
    Ok(ScalarGrid {
        x_axis: delta_axis,
        y_axis: eta_axis,
        values,
        quantity: Quantity::Emission,
        meta: GridMeta {
            n_segments,
            eta0: None,
            d_cav: None,
        },
    })
}

/// Mandel-Q map over (n, δ/π): x = `n_axis`, y = `delta_axis` (π units),
/// every node evaluated by [`mandel_q`] with the default derivative step
/// max(10⁻³·n, 10⁻³). Pole markers (±∞) are preserved in the values.
///
/// # Errors
/// [`Error::InvalidParameter`] for invalid axes, N < 1, d_cav ≤ 0, or an
/// n axis that reaches below the derivative stencil (min ≤ dn).
pub fn scan_mandel_q(
    n_segments: u32,
    eta0: f64,
    d_cav: f64,
    n_axis: AxisSpec,
    delta_axis: AxisSpec,
) -> Result<ScalarGrid, Error> {
    n_axis.validate()?;
    delta_axis.validate()?;
    if n_segments < 1 {
        return Err(Error::InvalidParameter(
            "need at least one segment".into(),
        ));
    }
    if d_cav.is_nan() || d_cav <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "d_cav must be positive, got {d_cav}"
        )));
    }
    if n_axis.min <= default_derivative_step(n_axis.min) {
        return Err(Error::InvalidParameter(format!(
            "n axis must start above the derivative step, got min = {}",
            n_axis.min
        )));
    }
    let nx = n_axis.count;
    let photon_numbers = n_axis.values();
    let deltas: Vec<f64> = delta_axis.values().iter().map(|x| PI * x).collect();
    let mut values = vec![0.0; nx * delta_axis.count];
    values
        .par_chunks_mut(nx)
        .zip(deltas.par_iter())
        .for_each(|(row, &delta)| {
            for (slot, &n) in row.iter_mut().zip(&photon_numbers) {
                let dn = default_derivative_step(n);
                *slot = mandel_q(n_segments, eta0, d_cav, n, delta, dn).q_value;
            }
        });
    Ok(ScalarGrid {
        x_axis: n_axis,
        y_axis: delta_axis,
        values,
        quantity: Quantity::MandelQ,
        meta: GridMeta {
            n_segments,
            eta0: Some(eta0),
            d_cav: Some(d_cav),
        },
    })
}

/// Branch lines (clipped to the viewport spanned by the axes) and branch
/// circles for overlaying on an emission map. The viewport is
/// `delta_axis` in π units by `eta_axis` raw, matching [`scan_emission`].
///
/// # Errors
/// [`Error::InvalidParameter`] for invalid axes, N < 1, or q_max < 1.
pub fn branch_geometry(
    n_segments: u32,
    q_max: u32,
    delta_axis: &AxisSpec,
    eta_axis: &AxisSpec,
) -> Result<BranchGeometry, Error> {
    delta_axis.validate()?;
    eta_axis.validate()?;
    if n_segments < 1 {
        return Err(Error::InvalidParameter(
            "need at least one segment".into(),
        ));
    }
    if q_max < 1 {
        return Err(Error::InvalidParameter(
            "need at least one branch circle".into(),
        ));
    }
    let (d_lo, d_hi) = (PI * delta_axis.min, PI * delta_axis.max);
    let (e_lo, e_hi) = (eta_axis.min, eta_axis.max);
    let mut lines = Vec::with_capacity(n_segments as usize);
    for p in 1..=n_segments {
        let theta = (p as f64 - 0.5) * PI / n_segments as f64;
        let (sin, cos) = theta.sin_cos();
        // Clip the ray (φ·cos θ, φ·sin θ), φ ≥ 0, to the raw-coordinate
        // box by the slab method; IEEE division handles the near-vertical
        // line (cos θ → ±0) without a special case.
        let mut lo = 0.0f64;
        let mut hi = f64::INFINITY;
        for (dir, b_lo, b_hi) in [(cos, d_lo, d_hi), (sin, e_lo, e_hi)] {
            let (a, b) = (b_lo / dir, b_hi / dir);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        if lo < hi {
            lines.push(BranchLine {
                p,
                theta,
                start: [lo * cos / PI, lo * sin],
                end: [hi * cos / PI, hi * sin],
            });
        }
    }
    let circles = (1..=q_max)
        .map(|q| BranchCircle {
            q,
            radius: (2.0 * q as f64 - 1.0) * PI,
        })
        .collect();
    Ok(BranchGeometry {
        n_segments,
        lines,
        circles,
    })
}
