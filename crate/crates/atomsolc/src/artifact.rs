//! Artifact headers and renderers.
//!
//! Every file the tool writes starts with a single metadata line holding all
//! parameters needed to recompute the file from scratch. Rendering is a pure
//! function of that header, so validation is simply: parse the header,
//! recompute, compare bytes. Floats are written with Rust's shortest
//! round-trip formatting, which preserves every bit through a parse.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use atomsolc_core::analysis::{fourier_coefficients, passband, weak_coupling_prediction};
use atomsolc_core::bloch::{
    emission_from_trajectory, integrate_trajectory, integrate_trajectory_renormalized,
    phase_match_points,
};
use atomsolc_core::sweep::{scan_emission, scan_mandel_q, AxisSpec, Quantity, ScalarGrid};
use atomsolc_core::ReducedParams;

use crate::error::CliError;

/// Value of the `tool` metadata field; validation refuses files that carry
/// someone else's name.
pub const TOOL_NAME: &str = "atomsolc";

/// Human-readable record of how Mandel-Q derivatives are taken, echoed into
/// grid metadata so the artifact documents its own numerics.
pub const DN_POLICY: &str = "central difference, dn = max(1e-3*n, 1e-3)";

/// The metadata line at the top of every artifact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileHeader {
    pub tool: String,
    #[serde(flatten)]
    pub kind: HeaderKind,
}

impl FileHeader {
    pub fn new(kind: HeaderKind) -> FileHeader {
        FileHeader {
            tool: TOOL_NAME.to_string(),
            kind,
        }
    }
}

/// One variant per artifact layout. Fields marked "derived" are recomputed
/// canonically when the file is rendered, so hand-edits to them are caught
/// by validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case")]
pub enum HeaderKind {
    /// Scalar field sampled over two axes, row-major with y outer.
    Grid {
        quantity: Quantity,
        n_segments: u32,
        x_axis: AxisSpec,
        y_axis: AxisSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta0: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d_cav: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dn_policy: Option<String>,
    },
    /// Bloch-vector time series at one parameter point.
    Trajectory {
        n_segments: u32,
        eta: f64,
        delta: f64,
        /// Derived: δ/π, for reading the header without a calculator.
        delta_over_pi: f64,
        steps_per_segment: u32,
        renormalized: bool,
    },
    /// Emission spectrum along a branch line.
    Passband {
        n_segments: u32,
        p: u32,
        /// Derived: θ = (p−½)π/N.
        theta: f64,
        phi_max_over_pi: f64,
        samples: usize,
    },
    /// Fourier coefficients of the ±1 poling function.
    Fourier { n_segments: u32, l_max: u32 },
    /// Weak-coupling lineshape prediction vs. the exact emission.
    Prediction {
        n_segments: u32,
        eta: f64,
        delta_axis: AxisSpec,
    },
    /// Quasi-phase-matching points.
    Phasematch { n_segments: u32, q_max: u32 },
}

/// A fully rendered artifact: the file body plus the key figures a caller
/// wants in the one-line summary.
pub struct Rendered {
    pub bytes: Vec<u8>,
    pub summary: Map<String, Value>,
}

fn header_line(out: &mut String, header: &FileHeader) {
    out.push_str("# ");
    out.push_str(&serde_json::to_string(header).expect("metadata header serializes"));
    out.push('\n');
}

fn finite_min_max(values: &[f64]) -> (Option<f64>, Option<f64>, usize) {
    let mut min = None;
    let mut max = None;
    let mut nonfinite = 0usize;
    for &v in values {
        if !v.is_finite() {
            nonfinite += 1;
            continue;
        }
        min = Some(min.map_or(v, |m: f64| m.min(v)));
        max = Some(max.map_or(v, |m: f64| m.max(v)));
    }
    (min, max, nonfinite)
}

fn grid_bytes(header: &FileHeader, grid: &ScalarGrid) -> Vec<u8> {
    let nx = grid.x_axis.count;
    let ny = grid.y_axis.count;
    let mut out = String::with_capacity(24 * nx * ny + 256);
    header_line(&mut out, header);
    out.push_str("x,y,value\n");
    for iy in 0..ny {
        let y = grid.y_axis.value_at(iy);
        for ix in 0..nx {
            let x = grid.x_axis.value_at(ix);
            writeln!(out, "{x},{y},{}", grid.value_at(ix, iy)).unwrap();
        }
    }
    out.into_bytes()
}

/// Compute and serialize the CSV artifact described by `kind`.
pub fn render_csv(kind: &HeaderKind) -> Result<Rendered, CliError> {
    match kind {
        HeaderKind::Grid {
            quantity: Quantity::Emission,
            n_segments,
            x_axis,
            y_axis,
            ..
        } => {
            let grid = scan_emission(*n_segments, x_axis.clone(), y_axis.clone())?;
            let header = FileHeader::new(HeaderKind::Grid {
                quantity: Quantity::Emission,
                n_segments: *n_segments,
                x_axis: grid.x_axis.clone(),
                y_axis: grid.y_axis.clone(),
                eta0: None,
                d_cav: None,
                dn_policy: None,
            });
            let bytes = grid_bytes(&header, &grid);
            let (min, max, _) = finite_min_max(&grid.values);
            let mut summary = Map::new();
            summary.insert("rows".into(), Value::from(grid.values.len()));
            summary.insert("value_min".into(), Value::from(min.unwrap_or(f64::NAN)));
            summary.insert("value_max".into(), Value::from(max.unwrap_or(f64::NAN)));
            Ok(Rendered { bytes, summary })
        }
        HeaderKind::Grid {
            quantity: Quantity::MandelQ,
            n_segments,
            x_axis,
            y_axis,
            eta0,
            d_cav,
            ..
        } => {
            let (Some(eta0), Some(d_cav)) = (*eta0, *d_cav) else {
                return Err(CliError::Config(
                    "a mandel_q grid needs both eta0 and d_cav".into(),
                ));
            };
            let grid = scan_mandel_q(*n_segments, eta0, d_cav, x_axis.clone(), y_axis.clone())?;
            let header = FileHeader::new(HeaderKind::Grid {
                quantity: Quantity::MandelQ,
                n_segments: *n_segments,
                x_axis: grid.x_axis.clone(),
                y_axis: grid.y_axis.clone(),
                eta0: Some(eta0),
                d_cav: Some(d_cav),
                dn_policy: Some(DN_POLICY.to_string()),
            });
            let bytes = grid_bytes(&header, &grid);
            let (min, max, nonfinite) = finite_min_max(&grid.values);
            // The most interesting node: the deepest Q that is still inside
            // the physically admissible sub-Poissonian band [-1, 0).
            let mut stable_min: Option<(f64, usize, usize)> = None;
            for iy in 0..grid.y_axis.count {
                for ix in 0..grid.x_axis.count {
                    let q = grid.value_at(ix, iy);
                    if q.is_finite()
                        && (-1.0..0.0).contains(&q)
                        && stable_min.is_none_or(|(best, _, _)| q < best)
                    {
                        stable_min = Some((q, ix, iy));
                    }
                }
            }
            let mut summary = Map::new();
            summary.insert("rows".into(), Value::from(grid.values.len()));
            summary.insert("finite_min".into(), Value::from(min.unwrap_or(f64::NAN)));
            summary.insert("finite_max".into(), Value::from(max.unwrap_or(f64::NAN)));
            summary.insert("nonfinite".into(), Value::from(nonfinite));
            if let Some((q, ix, iy)) = stable_min {
                summary.insert("sub_poissonian_min".into(), Value::from(q));
                summary.insert(
                    "sub_poissonian_min_n".into(),
                    Value::from(grid.x_axis.value_at(ix)),
                );
                summary.insert(
                    "sub_poissonian_min_delta_over_pi".into(),
                    Value::from(grid.y_axis.value_at(iy)),
                );
            }
            Ok(Rendered { bytes, summary })
        }
        HeaderKind::Trajectory {
            n_segments,
            eta,
            delta,
            steps_per_segment,
            renormalized,
            ..
        } => {
            if *steps_per_segment < 16 {
                return Err(CliError::Config(format!(
                    "steps per segment must be at least 16, got {steps_per_segment}"
                )));
            }
            let r = ReducedParams::new(*eta, *delta, *n_segments)?;
            let traj = if *renormalized {
                integrate_trajectory_renormalized(&r, *steps_per_segment)
            } else {
                integrate_trajectory(&r, *steps_per_segment)
            };
            let header = FileHeader::new(HeaderKind::Trajectory {
                n_segments: *n_segments,
                eta: r.eta(),
                delta: r.delta(),
                delta_over_pi: r.delta() / PI,
                steps_per_segment: *steps_per_segment,
                renormalized: *renormalized,
            });
            let mut out = String::with_capacity(64 * traj.samples.len() + 256);
            header_line(&mut out, &header);
            out.push_str("t,segment,x,y,z,norm_drift\n");
            for s in &traj.samples {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    s.t, s.segment, s.r.x, s.r.y, s.r.z, s.norm_drift
                )
                .unwrap();
            }
            let last = traj.samples.last().expect("trajectory is never empty");
            let worst_drift = traj
                .samples
                .iter()
                .map(|s| s.norm_drift.abs())
                .fold(0.0, f64::max);
            let mut summary = Map::new();
            summary.insert("samples".into(), Value::from(traj.samples.len()));
            summary.insert("final_z".into(), Value::from(last.r.z));
            summary.insert(
                "emission".into(),
                Value::from(emission_from_trajectory(&traj)),
            );
            summary.insert("max_norm_drift".into(), Value::from(worst_drift));
            Ok(Rendered {
                bytes: out.into_bytes(),
                summary,
            })
        }
        HeaderKind::Passband {
            n_segments,
            p,
            phi_max_over_pi,
            samples,
            ..
        } => {
            let s = passband(*n_segments, *p, phi_max_over_pi * PI, *samples)?;
            let header = FileHeader::new(HeaderKind::Passband {
                n_segments: *n_segments,
                p: *p,
                theta: s.theta,
                phi_max_over_pi: *phi_max_over_pi,
                samples: *samples,
            });
            let mut out = String::with_capacity(32 * s.values.len() + 256);
            header_line(&mut out, &header);
            out.push_str("phi_over_pi,value\n");
            for (phi, v) in s.phi_axis.iter().zip(&s.values) {
                writeln!(out, "{},{v}", phi / PI).unwrap();
            }
            let (peak_i, peak) = s
                .values
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("spectrum is never empty");
            let mut summary = Map::new();
            summary.insert("samples".into(), Value::from(s.values.len()));
            summary.insert("peak_value".into(), Value::from(*peak));
            summary.insert(
                "peak_phi_over_pi".into(),
                Value::from(s.phi_axis[peak_i] / PI),
            );
            Ok(Rendered {
                bytes: out.into_bytes(),
                summary,
            })
        }
        HeaderKind::Fourier { n_segments, l_max } => {
            if *n_segments < 1 || *l_max < 1 {
                return Err(CliError::Config(format!(
                    "fourier needs n_segments >= 1 and l_max >= 1, got N={n_segments}, l_max={l_max}"
                )));
            }
            let c = fourier_coefficients(*n_segments, *l_max);
            let header = FileHeader::new(kind.clone());
            let mut out = String::with_capacity(32 * c.coefficients.len() + 256);
            header_line(&mut out, &header);
            out.push_str("l,re,im\n");
            for (l, g) in &c.coefficients {
                writeln!(out, "{l},{},{}", g.re, g.im).unwrap();
            }
            let mut summary = Map::new();
            summary.insert("coefficients".into(), Value::from(c.coefficients.len()));
            summary.insert("partial_power".into(), Value::from(c.partial_power()));
            Ok(Rendered {
                bytes: out.into_bytes(),
                summary,
            })
        }
        HeaderKind::Prediction {
            n_segments,
            eta,
            delta_axis,
        } => {
            if *n_segments < 1 {
                return Err(CliError::Config("need at least one segment".into()));
            }
            delta_axis.validate()?;
            let raw: Vec<f64> = delta_axis.values().iter().map(|v| v * PI).collect();
            let w = weak_coupling_prediction(*n_segments, *eta, &raw);
            let header = FileHeader::new(kind.clone());
            let mut out = String::with_capacity(48 * raw.len() + 256);
            header_line(&mut out, &header);
            out.push_str("delta_over_pi,predicted,exact,fourier_index,off_comb\n");
            for i in 0..raw.len() {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    delta_axis.value_at(i),
                    w.predicted[i],
                    w.exact[i],
                    w.fourier_index[i],
                    u8::from(w.off_comb[i]),
                )
                .unwrap();
            }
            let mut summary = Map::new();
            summary.insert("samples".into(), Value::from(raw.len()));
            summary.insert("correlation".into(), Value::from(w.correlation()));
            summary.insert("strong_coupling".into(), Value::from(w.strong_coupling));
            Ok(Rendered {
                bytes: out.into_bytes(),
                summary,
            })
        }
        HeaderKind::Phasematch { n_segments, q_max } => {
            let points = checked_phase_match_points(*n_segments, *q_max)?;
            let header = FileHeader::new(kind.clone());
            let mut out = String::with_capacity(64 * points.len() + 256);
            header_line(&mut out, &header);
            out.push_str("p,q,theta,delta_opt_over_pi,eta_opt\n");
            for pt in &points {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    pt.p,
                    pt.q,
                    pt.theta,
                    pt.delta_opt / PI,
                    pt.eta_opt
                )
                .unwrap();
            }
            let mut summary = Map::new();
            summary.insert("count".into(), Value::from(points.len()));
            Ok(Rendered {
                bytes: out.into_bytes(),
                summary,
            })
        }
    }
}

/// The phasematch artifact in its JSON layout: one line, self-describing,
/// doubling as the stdout summary when no output path is given.
pub fn render_phasematch_json(n_segments: u32, q_max: u32) -> Result<Rendered, CliError> {
    #[derive(Serialize)]
    struct JsonPoint {
        p: u32,
        q: u32,
        theta: f64,
        delta_opt_over_pi: f64,
        eta_opt: f64,
    }
    #[derive(Serialize)]
    struct JsonFile<'a> {
        tool: &'a str,
        format: &'a str,
        n_segments: u32,
        q_max: u32,
        points: Vec<JsonPoint>,
    }

    let points: Vec<JsonPoint> = checked_phase_match_points(n_segments, q_max)?
        .into_iter()
        .map(|pt| JsonPoint {
            p: pt.p,
            q: pt.q,
            theta: pt.theta,
            delta_opt_over_pi: pt.delta_opt / PI,
            eta_opt: pt.eta_opt,
        })
        .collect();
    let count = points.len();
    let file = JsonFile {
        tool: TOOL_NAME,
        format: "phasematch",
        n_segments,
        q_max,
        points,
    };
    let mut bytes = serde_json::to_vec(&file).expect("phasematch artifact serializes");
    bytes.push(b'\n');
    let mut summary = Map::new();
    summary.insert("count".into(), Value::from(count));
    Ok(Rendered { bytes, summary })
}

fn checked_phase_match_points(
    n_segments: u32,
    q_max: u32,
) -> Result<Vec<atomsolc_core::bloch::PhaseMatchPoint>, CliError> {
    if n_segments < 1 || q_max < 1 {
        return Err(CliError::Config(format!(
            "phasematch needs n_segments >= 1 and q_max >= 1, got N={n_segments}, q_max={q_max}"
        )));
    }
    Ok(phase_match_points(n_segments, q_max))
}
