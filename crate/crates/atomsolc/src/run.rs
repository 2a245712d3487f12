//! Subcommand dispatch: resolve arguments into an artifact header, render,
//! write atomically, and print a one-line JSON summary to stdout. Stdout
//! carries nothing else; diagnostics go to stderr via the error path.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use atomsolc_core::analysis::{passband, passband_fwhm};
use atomsolc_core::sweep::{AxisSpec, Quantity, AXIS_DELTA_OVER_PI, AXIS_ETA, AXIS_N};
use atomsolc_core::ReducedParams;

use crate::artifact::{render_csv, render_phasematch_json, FileHeader, HeaderKind, TOOL_NAME};
use crate::config::{
    Cli, Command, FourierArgs, MandelqArgs, MapArgs, OutputFormat, PassbandArgs, PhasematchArgs,
    TrajectoryArgs,
};
use crate::error::CliError;
use crate::{io, plot};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ATOMSOLC_OUT_DIR";

pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    if let Some(path) = &cli.validate {
        if cli.command.is_some() {
            return Err(CliError::Config(
                "--validate replaces a subcommand; give one or the other".into(),
            ));
        }
        return validate_file(path);
    }
    let out_dir = out_dir(&cli);
    let Some(command) = cli.command else {
        return Err(CliError::Config(
            "a subcommand (or --validate FILE) is required; see --help".into(),
        ));
    };
    match command {
        Command::Map(a) => map(a, &out_dir),
        Command::Trajectory(a) => trajectory(a, &out_dir),
        Command::Passband(a) => passband_cmd(a, &out_dir),
        Command::Mandelq(a) => mandelq(a, &out_dir),
        Command::Fourier(a) => fourier(a, &out_dir),
        Command::Phasematch(a) => phasematch(a, &out_dir),
    }
}

fn configure_threads(k: usize) -> Result<(), CliError> {
    if k == 0 {
        return Ok(()); // rayon sizes its default pool to the core count
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure {k} worker threads: {e}")))
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn resolve(out_dir: &Path, out: &Path) -> PathBuf {
    if out.is_absolute() {
        out.to_path_buf()
    } else {
        out_dir.join(out)
    }
}

/// Write the artifact (and optional plot script), then print the summary.
fn finish(
    command: &str,
    kind: &HeaderKind,
    dest: &Path,
    want_plot: bool,
    extra: Map<String, Value>,
) -> Result<(), CliError> {
    let rendered = render_csv(kind)?;
    io::write_atomic(dest, &rendered.bytes)?;
    let mut summary = rendered.summary;
    for (key, value) in extra {
        summary.insert(key, value);
    }
    summary.insert("command".into(), Value::from(command));
    summary.insert("out".into(), Value::from(dest.display().to_string()));
    if want_plot {
        let csv_name = dest
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let script = plot::script_for(kind, &csv_name);
        let script_path = dest.with_extension("gnuplot");
        io::write_atomic(&script_path, script.as_bytes())?;
        summary.insert(
            "plot".into(),
            Value::from(script_path.display().to_string()),
        );
    }
    println!("{}", Value::Object(summary));
    Ok(())
}

fn map(a: MapArgs, out_dir: &Path) -> Result<(), CliError> {
    let kind = HeaderKind::Grid {
        quantity: Quantity::Emission,
        n_segments: a.n_segments,
        x_axis: AxisSpec::new(AXIS_DELTA_OVER_PI, a.delta_min, a.delta_max, a.delta_count)?,
        y_axis: AxisSpec::new(AXIS_ETA, a.eta_min, a.eta_max, a.eta_count)?,
        eta0: None,
        d_cav: None,
        dn_policy: None,
    };
    finish("map", &kind, &resolve(out_dir, &a.out), a.plot, Map::new())
}

fn trajectory(a: TrajectoryArgs, out_dir: &Path) -> Result<(), CliError> {
    let r = match (a.eta, a.delta_over_pi, a.p, a.q) {
        (Some(eta), Some(delta_over_pi), None, None) => {
            ReducedParams::new(eta, delta_over_pi * PI, a.n_segments)?
        }
        (None, None, Some(p), Some(q)) => {
            if p < 1 || p > a.n_segments || q < 1 {
                return Err(CliError::Config(format!(
                    "need 1 <= p <= N and q >= 1, got p={p}, q={q}, N={}",
                    a.n_segments
                )));
            }
            let theta = (f64::from(p) - 0.5) * PI / f64::from(a.n_segments);
            let phi = (2.0 * f64::from(q) - 1.0) * PI;
            ReducedParams::from_polar(phi, theta, a.n_segments)?
        }
        _ => {
            return Err(CliError::Config(
                "give either --eta with --delta-over-pi, or --p with --q".into(),
            ))
        }
    };
    let kind = HeaderKind::Trajectory {
        n_segments: a.n_segments,
        eta: r.eta(),
        delta: r.delta(),
        delta_over_pi: r.delta() / PI,
        steps_per_segment: a.steps,
        renormalized: a.renormalize,
    };
    finish(
        "trajectory",
        &kind,
        &resolve(out_dir, &a.out),
        a.plot,
        Map::new(),
    )
}

fn passband_cmd(a: PassbandArgs, out_dir: &Path) -> Result<(), CliError> {
    let kind = HeaderKind::Passband {
        n_segments: a.n_segments,
        p: a.p,
        theta: 0.0, // derived; the renderer fills in the canonical value
        phi_max_over_pi: a.phi_max_over_pi,
        samples: a.samples,
    };
    let mut extra = Map::new();
    if let Some(center_over_pi) = a.fwhm_center_over_pi {
        // Recomputing the spectrum here is far cheaper than threading the
        // intermediate result out of the renderer.
        let s = passband(a.n_segments, a.p, a.phi_max_over_pi * PI, a.samples)?;
        let fwhm = passband_fwhm(&s, center_over_pi * PI)?;
        extra.insert("fwhm".into(), Value::from(fwhm));
        extra.insert("fwhm_over_pi".into(), Value::from(fwhm / PI));
        extra.insert(
            "fwhm_center_over_pi".into(),
            Value::from(center_over_pi),
        );
    }
    finish(
        "passband",
        &kind,
        &resolve(out_dir, &a.out),
        a.plot,
        extra,
    )
}

fn mandelq(a: MandelqArgs, out_dir: &Path) -> Result<(), CliError> {
    let kind = HeaderKind::Grid {
        quantity: Quantity::MandelQ,
        n_segments: a.n_segments,
        x_axis: AxisSpec::new(AXIS_N, a.n_min, a.n_max, a.n_count)?,
        y_axis: AxisSpec::new(AXIS_DELTA_OVER_PI, a.delta_min, a.delta_max, a.delta_count)?,
        eta0: Some(a.eta0),
        d_cav: Some(a.d_cav),
        dn_policy: None, // derived; the renderer records the policy string
    };
    finish(
        "mandelq",
        &kind,
        &resolve(out_dir, &a.out),
        a.plot,
        Map::new(),
    )
}

fn fourier(a: FourierArgs, out_dir: &Path) -> Result<(), CliError> {
    let kind = HeaderKind::Fourier {
        n_segments: a.n_segments,
        l_max: a.l_max,
    };
    let dest = resolve(out_dir, &a.out);
    let mut extra = Map::new();
    if let Some(eta) = a.predict_eta {
        let prediction = HeaderKind::Prediction {
            n_segments: a.n_segments,
            eta,
            delta_axis: AxisSpec::new(
                AXIS_DELTA_OVER_PI,
                a.predict_delta_min,
                a.predict_delta_max,
                a.predict_delta_count,
            )?,
        };
        let rendered = render_csv(&prediction)?;
        let stem = dest
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let pred_dest = dest.with_file_name(format!("{stem}_prediction.csv"));
        io::write_atomic(&pred_dest, &rendered.bytes)?;
        if a.plot {
            let csv_name = pred_dest
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            let script_path = pred_dest.with_extension("gnuplot");
            io::write_atomic(
                &script_path,
                plot::script_for(&prediction, &csv_name).as_bytes(),
            )?;
        }
        for (key, value) in rendered.summary {
            extra.insert(format!("prediction_{key}"), value);
        }
        extra.insert(
            "prediction_out".into(),
            Value::from(pred_dest.display().to_string()),
        );
    }
    finish("fourier", &kind, &dest, a.plot, extra)
}

fn phasematch(a: PhasematchArgs, out_dir: &Path) -> Result<(), CliError> {
    match a.format {
        OutputFormat::Csv => {
            let Some(out) = &a.out else {
                return Err(CliError::Config(
                    "--format csv needs --out (use --format json for stdout output)".into(),
                ));
            };
            let kind = HeaderKind::Phasematch {
                n_segments: a.n_segments,
                q_max: a.q_max,
            };
            finish("phasematch", &kind, &resolve(out_dir, out), a.plot, Map::new())
        }
        OutputFormat::Json => {
            if a.plot {
                return Err(CliError::Config(
                    "--plot requires --format csv (nothing plots a JSON list)".into(),
                ));
            }
            let rendered = render_phasematch_json(a.n_segments, a.q_max)?;
            match &a.out {
                Some(out) => {
                    let dest = resolve(out_dir, out);
                    io::write_atomic(&dest, &rendered.bytes)?;
                    let mut summary = rendered.summary;
                    summary.insert("command".into(), Value::from("phasematch"));
                    summary.insert("out".into(), Value::from(dest.display().to_string()));
                    println!("{}", Value::Object(summary));
                }
                None => {
                    // The one-line artifact is its own summary.
                    print!("{}", String::from_utf8_lossy(&rendered.bytes));
                }
            }
            Ok(())
        }
    }
}

/// Re-read an artifact, recompute it from its own metadata, and require the
/// file to be byte-identical to the fresh result.
fn validate_file(path: &Path) -> Result<(), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::Internal("artifact is not valid UTF-8".into()))?;
    let first = text.lines().next().unwrap_or("");

    let expected = if let Some(json) = first.strip_prefix("# ") {
        let header: FileHeader = serde_json::from_str(json)
            .map_err(|e| CliError::Internal(format!("metadata line does not parse: {e}")))?;
        check_tool(&header)?;
        render_csv(&header.kind)
            .map_err(|e| CliError::Internal(format!("cannot recompute artifact: {e}")))?
    } else if first.starts_with('{') {
        let header: FileHeader = serde_json::from_str(first)
            .map_err(|e| CliError::Internal(format!("JSON artifact does not parse: {e}")))?;
        check_tool(&header)?;
        let HeaderKind::Phasematch { n_segments, q_max } = header.kind else {
            return Err(CliError::Internal(
                "only phasematch artifacts use the JSON layout".into(),
            ));
        };
        render_phasematch_json(n_segments, q_max)
            .map_err(|e| CliError::Internal(format!("cannot recompute artifact: {e}")))?
    } else {
        return Err(CliError::Internal(
            "unrecognized artifact: expected a '# {…}' metadata line or a JSON object".into(),
        ));
    };

    if expected.bytes != bytes {
        let at = expected
            .bytes
            .iter()
            .zip(&bytes)
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| expected.bytes.len().min(bytes.len()));
        return Err(CliError::Internal(format!(
            "{} diverges from a fresh recomputation at byte offset {at}",
            path.display()
        )));
    }

    let mut summary = Map::new();
    summary.insert("command".into(), Value::from("validate"));
    summary.insert("file".into(), Value::from(path.display().to_string()));
    summary.insert("bytes".into(), Value::from(bytes.len()));
    summary.insert("status".into(), Value::from("ok"));
    println!("{}", Value::Object(summary));
    Ok(())
}

fn check_tool(header: &FileHeader) -> Result<(), CliError> {
    if header.tool != TOOL_NAME {
        return Err(CliError::Internal(format!(
            "artifact was written by '{}', not {TOOL_NAME}",
            header.tool
        )));
    }
    Ok(())
}
