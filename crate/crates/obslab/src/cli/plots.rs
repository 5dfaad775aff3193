//! Standalone gnuplot scripts rendering the benchmark panel sets from the
//! exported CSVs. The tool never renders images itself.

use std::fmt::Write as _;

use crate::simkit::SimTrace;

fn col(trace: &SimTrace, name: &str) -> usize {
    // gnuplot columns are 1-based.
    trace.column_index(name).map(|i| i + 1).unwrap_or(0)
}

/// Panel script for a single simulation trace.
pub fn simulate_plot_script(trace: &SimTrace, csv_name: &str) -> String {
    let t = col(trace, "t");
    let x1 = col(trace, "x1");
    let yd0 = col(trace, "yd0");
    let u = col(trace, "u");
    let f_true = col(trace, "f_true");
    let f_hat = col(trace, "f_hat");
    let has_estimates = !trace.xhat.is_empty();
    let panels: usize = if has_estimates { 5 } else { 3 };

    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot panel script generated by obslab");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set terminal pngcairo size 1400,{}", 350 * panels.div_ceil(2));
    let _ = writeln!(s, "set output 'panels.png'");
    let _ = writeln!(s, "set multiplot layout {},2", panels.div_ceil(2));
    let _ = writeln!(s, "set key right top");
    let _ = writeln!(s, "set xlabel 't [s]'");

    let _ = writeln!(s, "set title 'position tracking'");
    let _ = writeln!(
        s,
        "plot '{csv_name}' using {t}:{x1} with lines title 'x1', \\\n     '' using {t}:{yd0} with lines title 'y_d'"
    );
    let _ = writeln!(s, "set title 'control input'");
    let _ = writeln!(s, "plot '{csv_name}' using {t}:{u} with lines title 'u'");
    let _ = writeln!(s, "set title 'uncertainty approximation'");
    let _ = writeln!(
        s,
        "plot '{csv_name}' using {t}:{f_true} with lines title 'f', \\\n     '' using {t}:{f_hat} with lines title 'f estimate'"
    );
    if has_estimates {
        let x2 = col(trace, "x2");
        let xhat1 = col(trace, "xhat1");
        let xhat2 = col(trace, "xhat2");
        let _ = writeln!(s, "set title 'position estimation'");
        let _ = writeln!(
            s,
            "plot '{csv_name}' using {t}:{x1} with lines title 'x1', \\\n     '' using {t}:{xhat1} with lines title 'x1 estimate'"
        );
        let _ = writeln!(s, "set title 'velocity estimation'");
        let _ = writeln!(
            s,
            "plot '{csv_name}' using {t}:{x2} with lines title 'x2', \\\n     '' using {t}:{xhat2} with lines title 'x2 estimate'"
        );
    }
    let _ = writeln!(s, "unset multiplot");
    s
}

/// Side-by-side tracking comparison across presets; each trace lives in its
/// own subdirectory next to the script.
pub fn compare_plot_script(entries: &[(String, SimTrace)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot comparison script generated by obslab");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set terminal pngcairo size 1400,700");
    let _ = writeln!(s, "set output 'compare.png'");
    let _ = writeln!(s, "set multiplot layout 1,2");
    let _ = writeln!(s, "set xlabel 't [s]'");

    let _ = writeln!(s, "set title 'position tracking error'");
    let mut first = true;
    let mut plot = String::from("plot ");
    for (name, trace) in entries {
        let t = col(trace, "t");
        let e1 = col(trace, "e1");
        if !first {
            plot.push_str(", \\\n     ");
        }
        let _ = write!(plot, "'{name}/trace.csv' using {t}:{e1} with lines title '{name}'");
        first = false;
    }
    let _ = writeln!(s, "{plot}");

    let _ = writeln!(s, "set title 'uncertainty approximation error'");
    let mut first = true;
    let mut plot = String::from("plot ");
    for (name, trace) in entries {
        let t = col(trace, "t");
        let f_true = col(trace, "f_true");
        let f_hat = col(trace, "f_hat");
        if !first {
            plot.push_str(", \\\n     ");
        }
        let _ = write!(
            plot,
            "'{name}/trace.csv' using {t}:(column({f_hat})-column({f_true})) with lines title '{name}'"
        );
        first = false;
    }
    let _ = writeln!(s, "{plot}");
    let _ = writeln!(s, "unset multiplot");
    s
}
