//! Standalone gnuplot scripts for the CSV artifacts. The tool never shells
//! out to a plotter; each script references its CSV by bare file name, so
//! `gnuplot <script>` works from the directory both files live in.

use atomsolc_core::sweep::Quantity;

use crate::artifact::HeaderKind;

/// The gnuplot commands rendering `csv_name` for the given artifact kind.
pub fn script_for(kind: &HeaderKind, csv_name: &str) -> String {
    let png_name = match csv_name.rsplit_once('.') {
        Some((stem, _)) => format!("{stem}.png"),
        None => format!("{csv_name}.png"),
    };
    let mut s = String::new();
    s.push_str(&format!(
        "# Renders {csv_name} to {png_name}; run this file with gnuplot from\n\
         # the directory the CSV lives in.\n\
         set terminal pngcairo size 900,700\n\
         set output '{png_name}'\n\
         set datafile separator comma\n\
         set key autotitle columnhead\n",
    ));
    match kind {
        HeaderKind::Grid {
            quantity,
            n_segments,
            x_axis,
            y_axis,
            ..
        } => {
            let (title, cbrange) = match quantity {
                Quantity::Emission => ("photoemission probability", "[0:1]"),
                Quantity::MandelQ => ("Mandel Q", "[-1:1]"),
            };
            s.push_str(&format!(
                "set title '{title}, N = {n_segments}'\n\
                 set xlabel '{x}'\n\
                 set ylabel '{y}'\n\
                 set cbrange {cbrange}\n\
                 plot '{csv_name}' using 1:2:3 with image notitle\n",
                x = x_axis.name,
                y = y_axis.name,
            ));
        }
        HeaderKind::Trajectory { n_segments, .. } => {
            s.push_str(&format!(
                "set title 'Bloch trajectory, N = {n_segments}'\n\
                 set xlabel 't / tau'\n\
                 set yrange [-1.05:1.05]\n\
                 plot '{csv_name}' using 1:3 with lines title 'x', \\\n\
                      '' using 1:4 with lines title 'y', \\\n\
                      '' using 1:5 with lines title 'z'\n",
            ));
        }
        HeaderKind::Passband { n_segments, p, .. } => {
            s.push_str(&format!(
                "set title 'Passband, N = {n_segments}, p = {p}'\n\
                 set xlabel 'phi / pi'\n\
                 set ylabel 'emission probability'\n\
                 set yrange [0:1.05]\n\
                 plot '{csv_name}' using 1:2 with lines notitle\n",
            ));
        }
        HeaderKind::Fourier { n_segments, .. } => {
            s.push_str(&format!(
                "set title 'Poling spectrum |G(l)|, N = {n_segments}'\n\
                 set xlabel 'harmonic index l'\n\
                 set ylabel '|G|'\n\
                 plot '{csv_name}' using 1:(sqrt($2**2 + $3**2)) with impulses notitle\n",
            ));
        }
        HeaderKind::Prediction { n_segments, eta, .. } => {
            s.push_str(&format!(
                "set title 'Weak-coupling lineshape, N = {n_segments}, eta = {eta}'\n\
                 set xlabel 'delta / pi'\n\
                 set ylabel 'normalized emission'\n\
                 plot '{csv_name}' using 1:2 with lines title 'predicted', \\\n\
                      '' using 1:3 with lines title 'exact'\n",
            ));
        }
        HeaderKind::Phasematch { n_segments, .. } => {
            s.push_str(&format!(
                "set title 'Quasi-phase-matching points, N = {n_segments}'\n\
                 set xlabel 'delta / pi'\n\
                 set ylabel 'eta'\n\
                 plot '{csv_name}' using 4:5 with points pt 7 notitle\n",
            ));
        }
    }
    s
}
