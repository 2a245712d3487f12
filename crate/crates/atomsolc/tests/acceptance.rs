//! Acceptance suite: one test per shipping criterion, each printing a
//! single pass/fail line with the measured numbers (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::f64::consts::PI;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use atomsolc_core::analysis::{passband, passband_fwhm, weak_coupling_prediction};
use atomsolc_core::bloch::{
    emission_from_trajectory, integrate_trajectory, phase_match_points,
};
use atomsolc_core::sweep::{
    default_mandel_axes, scan_emission, scan_mandel_q, AxisSpec, AXIS_DELTA_OVER_PI, AXIS_ETA,
    DEFAULT_D_CAV, DEFAULT_ETA0,
};
use atomsolc_core::transfer::{
    emission_closed, emission_direct, reduced_cell_power, table_polynomial, unit_cell, Unitary2,
};
use atomsolc_core::{ReducedParams, State2};

fn report(tag: &str, pass: bool, details: &str) {
    println!("{tag}: {} — {details}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{tag}: {details}");
}

/// The shared map grid: δ/π ∈ [−4, 4] on 101 nodes, η ∈ (0, 4π] on 101
/// nodes (zero excluded so every point is a genuine interaction).
fn map_grid() -> (Vec<f64>, Vec<f64>) {
    let deltas: Vec<f64> = AxisSpec::new(AXIS_DELTA_OVER_PI, -4.0, 4.0, 101)
        .unwrap()
        .values()
        .iter()
        .map(|v| v * PI)
        .collect();
    let etas: Vec<f64> = (1..=101).map(|j| j as f64 * 4.0 * PI / 101.0).collect();
    (deltas, etas)
}

#[test]
fn criterion_01_closed_form_matches_product_oracle() {
    let start = Instant::now();
    let (deltas, etas) = map_grid();
    let mut worst = 0.0f64;
    for n in 1..=16u32 {
        for &eta in &etas {
            for &delta in &deltas {
                let r = ReducedParams::new(eta, delta, n).unwrap();
                let diff = (emission_closed(&r).unwrap() - emission_direct(&r)).abs();
                worst = worst.max(diff);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 01 (closed form vs product oracle)",
        worst < 1e-10 && elapsed < 10.0,
        &format!("max |closed − direct| = {worst:.3e} over N=1..16 on 101×101 (tol 1e-10), {elapsed:.2} s single-threaded (budget 10 s)"),
    );
}

#[test]
fn criterion_02_tabulated_polynomials_match_oracle() {
    let (deltas, etas) = map_grid();
    let mut worst = 0.0f64;
    for n in 1..=8u32 {
        for &eta in &etas {
            for &delta in &deltas {
                let r = ReducedParams::new(eta, delta, n).unwrap();
                let diff = (table_polynomial(n, &r).unwrap() - emission_direct(&r)).abs();
                worst = worst.max(diff);
            }
        }
    }
    report(
        "criterion 02 (tabulated per-N polynomials)",
        worst < 1e-10,
        &format!("max |table − direct| = {worst:.3e} over N=1..8 on 101×101 (tol 1e-10); odd-N bracket term pinned by transfer::tests::odd_bracket_requires_delta_sq_over_phi_sq, see README numerical notes"),
    );
}

#[test]
fn criterion_03_quasi_phase_matching_points_emit_fully() {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for n in 1..=12u32 {
        for pt in phase_match_points(n, 3) {
            let r = ReducedParams::new(pt.eta_opt, pt.delta_opt, n).unwrap();
            worst = worst.max((emission_direct(&r) - 1.0).abs());
            count += 1;
        }
    }
    report(
        "criterion 03 (quasi-phase matching)",
        worst < 1e-9,
        &format!("max |P_em − 1| = {worst:.3e} over {count} matched points, N ≤ 12, q ≤ 3 (tol 1e-9)"),
    );
}

#[test]
fn criterion_04_resonant_quenching_and_odd_equivalence() {
    let etas: Vec<f64> = (1..=100).map(|i| i as f64 * 4.0 * PI / 100.0).collect();
    let mut worst_even = 0.0f64;
    let mut worst_odd = 0.0f64;
    for &eta in &etas {
        for n in (2..=16u32).step_by(2) {
            let r = ReducedParams::new(eta, 0.0, n).unwrap();
            worst_even = worst_even.max(emission_direct(&r));
        }
        for n in (1..=15u32).step_by(2) {
            let r = ReducedParams::new(eta, 0.0, n).unwrap();
            let rabi = (0.5 * eta).sin().powi(2);
            worst_odd = worst_odd.max((emission_direct(&r) - rabi).abs());
        }
    }
    report(
        "criterion 04 (resonant even-N quenching, odd-N equivalence)",
        worst_even < 1e-12 && worst_odd < 1e-12,
        &format!("max even-N P_em = {worst_even:.3e}, max odd-N |P_em − sin²(η/2)| = {worst_odd:.3e} at δ=0 over 100 η values (tol 1e-12)"),
    );
}

#[test]
fn criterion_05_ode_oracle_and_convergence_order() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0de0_54ac);
    let points: Vec<ReducedParams> = (0..50)
        .map(|_| {
            let phi = rng.gen_range(0.01..=4.0 * PI);
            let theta = rng.gen_range(0.0..PI);
            let n = rng.gen_range(1..=8u32);
            ReducedParams::from_polar(phi, theta, n).unwrap()
        })
        .collect();
    let max_err = |steps: u32| -> f64 {
        points
            .iter()
            .map(|r| {
                let traj = integrate_trajectory(r, steps);
                (emission_from_trajectory(&traj) - emission_direct(r)).abs()
            })
            .fold(0.0, f64::max)
    };
    let coarse = max_err(500);
    let fine = max_err(1000);
    let ratio = coarse / fine;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 05 (RK4 oracle and order)",
        fine < 1e-6 && ratio >= 12.0 && elapsed < 5.0,
        &format!("max |ODE − matrix| = {fine:.3e} at 1000 steps/segment over 50 random points (tol 1e-6); halving h scales the error ×{ratio:.1} (need ≥ 12); {elapsed:.2} s (budget 5 s)"),
    );
}

#[test]
fn criterion_06_segment_phases_cancel_from_moduli() {
    let mut rng = StdRng::seed_from_u64(0x9a5e_0f17);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let k = rng.gen_range(1..=8u32);
        let eta = rng.gen_range(1e-6..12.0);
        let delta = rng.gen_range(-12.0..12.0);
        let r = ReducedParams::new(eta, delta, 2 * k).unwrap();
        let mut product = Unitary2::IDENTITY;
        for j in 1..=k {
            product = unit_cell(j, &r).mul(&product);
        }
        let power = reduced_cell_power(&r, k);
        worst = worst.max((product.u21.norm() - power.u21.norm()).abs());
    }
    report(
        "criterion 06 (phase invariance of |c_g|)",
        worst < 1e-12,
        &format!("max ||T-product| − |T̂^k|| = {worst:.3e} over 10⁴ random points (tol 1e-12)"),
    );
}

#[test]
fn criterion_07_passband_narrows_with_n_and_p() {
    let fwhm = |n: u32, p: u32| -> f64 {
        let s = passband(n, p, 2.0 * PI, 4001).unwrap();
        passband_fwhm(&s, PI).unwrap()
    };
    let widths: Vec<f64> = [2u32, 4, 6, 8].iter().map(|&n| fwhm(n, 1)).collect();
    let narrowing = widths.windows(2).all(|w| w[1] < w[0]);
    let w81 = fwhm(8, 1);
    let side = [2u32, 3, 4].map(|p| fwhm(8, p));
    let central_narrowest = side.iter().all(|&w| w81 < w);
    report(
        "criterion 07 (passband narrowing)",
        narrowing && central_narrowest,
        &format!("q=1, p=1 FWHM over N=2,4,6,8: {widths:.4?} (strictly decreasing: {narrowing}); N=8 p=1 width {w81:.4} vs p=2..4 {side:.4?} (central narrowest: {central_narrowest})"),
    );
}

#[test]
fn criterion_08_mandel_q_map_minimum_sits_on_first_branch() {
    let start = Instant::now();
    let n_segments = 8u32;
    let (n_axis, delta_axis) = default_mandel_axes();
    let grid = scan_mandel_q(
        n_segments,
        DEFAULT_ETA0,
        DEFAULT_D_CAV,
        n_axis.clone(),
        delta_axis.clone(),
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    // Deepest Q inside the physically admissible sub-Poissonian band
    // [−1, 0). Outside it the finite-difference slope is dominated by the
    // pole of Q = s/(D − s), not by photon statistics; the raw minimum is
    // reported alongside for transparency.
    let mut stable: Option<(f64, usize, usize)> = None;
    let mut raw_min = f64::INFINITY;
    for iy in 0..grid.y_axis.count {
        for ix in 0..grid.x_axis.count {
            let q = grid.value_at(ix, iy);
            if q.is_finite() {
                raw_min = raw_min.min(q);
            }
            if q.is_finite()
                && (-1.0..0.0).contains(&q)
                && stable.is_none_or(|(best, _, _)| q < best)
            {
                stable = Some((q, ix, iy));
            }
        }
    }
    let (q_min, ix, iy) = stable.expect("the map has sub-Poissonian nodes");
    let n_star = grid.x_axis.value_at(ix);
    let dpi_star = grid.y_axis.value_at(iy);

    // Cell-normalized distance from the minimum to the q=1 branch pieces
    // mapped into (n, δ/π) coordinates via η = η₀√n.
    let (cell_n, cell_d) = (n_axis.step(), delta_axis.step());
    let dist = |n: f64, dpi: f64| -> f64 {
        let a = (n - n_star) / cell_n;
        let b = (dpi - dpi_star) / cell_d;
        (a * a + b * b).sqrt()
    };
    let mut nearest = f64::INFINITY;
    // Circle q=1: η² + δ² = π² ⇒ n(δ) = (π² − δ²)/η₀².
    for i in 0..=200_000 {
        let delta = -PI + i as f64 * (2.0 * PI / 200_000.0);
        let n = (PI * PI - delta * delta) / (DEFAULT_ETA0 * DEFAULT_ETA0);
        if (n_axis.min..=n_axis.max).contains(&n) {
            nearest = nearest.min(dist(n, delta / PI));
        }
    }
    // Lines p ∈ {1, N}: θ fixed ⇒ δ(n) = η₀√n / tan θ.
    for p in [1u32, n_segments] {
        let theta = (f64::from(p) - 0.5) * PI / f64::from(n_segments);
        for i in 0..=200_000 {
            let n = n_axis.min + i as f64 * (n_axis.max - n_axis.min) / 200_000.0;
            let delta = DEFAULT_ETA0 * n.sqrt() / theta.tan();
            if (delta / PI).abs() <= delta_axis.max {
                nearest = nearest.min(dist(n, delta / PI));
            }
        }
    }
    // Angular sector: the minimum must sit on the first or last branch
    // line's side of the fan, not on some interior p.
    let theta_star = (DEFAULT_ETA0 * n_star.sqrt()).atan2(dpi_star * PI);
    let sector = [1u32, n_segments]
        .iter()
        .map(|&p| (theta_star - (f64::from(p) - 0.5) * PI / f64::from(n_segments)).abs())
        .fold(f64::INFINITY, f64::min);
    let in_sector = sector <= PI / (2.0 * f64::from(n_segments));

    report(
        "criterion 08 (Mandel-Q map minimum)",
        q_min < -0.8 && nearest <= 2.0 && in_sector && elapsed < 60.0,
        &format!("deepest sub-Poissonian Q = {q_min:.4} at (n = {n_star}, δ/π = {dpi_star}) (need < −0.8), {nearest:.2} cells from the q=1 branch (need ≤ 2), torque angle within the p ∈ {{1, 8}} sector: {in_sector}; raw finite min {raw_min:.1} (pole-dominated, excluded); {elapsed:.1} s (budget 60 s)"),
    );
}

#[test]
fn criterion_09_weak_coupling_lineshape() {
    let n_segments = 16u32;
    let axis = AxisSpec::new(AXIS_DELTA_OVER_PI, -3.0, 3.0, 241).unwrap();
    let deltas: Vec<f64> = axis.values().iter().map(|v| v * PI).collect();
    let w = weak_coupling_prediction(n_segments, 0.1, &deltas);
    let corr = w.correlation();

    let peak = |sign: f64| -> f64 {
        let mut best = (0.0f64, 0.0f64); // (value, δ/π)
        for (i, &d) in deltas.iter().enumerate() {
            if d * sign > 0.0 && w.exact[i] > best.0 {
                best = (w.exact[i], d / PI);
            }
        }
        best.1
    };
    let (pos, neg) = (peak(1.0), peak(-1.0));
    let peaks_ok = (pos - 1.0).abs() <= 0.15 && (neg + 1.0).abs() <= 0.15;
    report(
        "criterion 09 (weak-coupling Fourier lineshape)",
        peaks_ok && corr > 0.9,
        &format!("η = 0.1, N = 16: exact P_em peaks at δ/π = {pos:.3} and {neg:.3} (need within ±0.15 of ±1); correlation with |G(s)|² = {corr:.4} (need > 0.9)"),
    );
}

#[test]
fn criterion_10_sweeps_are_deterministic_across_thread_counts() {
    let render = |grid: &atomsolc_core::sweep::ScalarGrid| -> Vec<u8> {
        let mut out = String::new();
        out.push_str("x,y,value\n");
        for iy in 0..grid.y_axis.count {
            for ix in 0..grid.x_axis.count {
                out.push_str(&format!(
                    "{},{},{}\n",
                    grid.x_axis.value_at(ix),
                    grid.y_axis.value_at(iy),
                    grid.value_at(ix, iy)
                ));
            }
        }
        out.into_bytes()
    };
    let delta = AxisSpec::new(AXIS_DELTA_OVER_PI, -4.0, 4.0, 501).unwrap();
    let eta = AxisSpec::new(AXIS_ETA, 0.0, 4.0 * PI, 501).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| scan_emission(5, delta.clone(), eta.clone()).unwrap());
    let auto = scan_emission(5, delta, eta).unwrap();
    let identical = render(&single) == render(&auto);
    report(
        "criterion 10 (determinism across worker counts)",
        identical,
        &format!("501×501 emission sweep, 1 worker vs auto workers: CSV bodies byte-identical = {identical} ({} nodes)", auto.values.len()),
    );
}

/// Not a numbered criterion: the slow-amplitude product and the lab-frame
/// Bloch integration must tell the same physical story for a fresh state.
#[test]
fn cross_check_trajectory_emission_statistics() {
    let r = ReducedParams::from_polar(PI, PI / 10.0, 5).unwrap();
    let traj = integrate_trajectory(&r, 1000);
    let from_ode = emission_from_trajectory(&traj);
    let after = atomsolc_core::transfer::evolve_sequential(&r, &State2::EXCITED);
    let from_product = after.c_g.norm_sqr();
    assert!((from_ode - from_product).abs() < 1e-6);
}
