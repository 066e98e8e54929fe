//! Deterministic report and plot-data rendering.
//!
//! A report is plain text: `#` header lines carrying the source label and
//! the resolved config hash, a column header, then one tab-separated record
//! per verdict sorted by (position, direction). Nothing time- or
//! host-dependent is written, so identical invocations produce byte-identical
//! files and two reports are comparable exactly when their config hashes
//! agree. Floats use shortest round-trip formatting.

use std::fmt::Write as _;

use wfscope::{canonical_sort, DecayFit, MicrolocalVerdict, Mode, ShellStats, SobolevTail};

fn join(coords: &[f64]) -> String {
    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

/// One record per verdict: point, direction, mode, verdict, estimate
/// (fitted exponent in smooth mode, tail verdict in Sobolev mode), residual,
/// flags, window id, then a free-text note (the reason when inconclusive).
pub fn render_report(source: &str, hash: &str, verdicts: &[MicrolocalVerdict]) -> String {
    let mut rows = verdicts.to_vec();
    canonical_sort(&mut rows);
    let mut out = String::new();
    out.push_str("# wfscope report v1\n");
    let _ = writeln!(out, "# source: {source}");
    let _ = writeln!(out, "# config: {hash}");
    out.push_str("point\tdirection\tmode\tverdict\testimate\tresidual\tflags\twindow\tnote\n");
    for v in &rows {
        let estimate = match v.mode {
            Mode::Smooth => opt(&v.n_hat),
            Mode::Sobolev(_) => opt(&v.tail),
        };
        let mut flags = Vec::new();
        if v.floor_hit == Some(true) {
            flags.push("floor".to_string());
        }
        if let Some(k) = v.shells_used {
            flags.push(format!("shells={k}"));
        }
        let flags = if flags.is_empty() { "-".to_string() } else { flags.join(",") };
        let note = match &v.reason {
            Some(r) => r.replace(['\t', '\n'], " "),
            None => "-".into(),
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            join(&v.point.x),
            join(&v.point.direction),
            v.mode,
            v.verdict,
            estimate,
            opt(&v.residual),
            flags,
            v.window_id,
            note,
        );
    }
    out
}

/// Shell-decay plot data: one CSV row per shell with the fit abscissa
/// R_j^mid, log M_j (natural log of the shell sup, clamped away from zero),
/// and the fitted line log M = intercept - n_hat * log(1 + R). Empty shells
/// and unavailable fits render as nan.
pub fn decay_plot_csv(stats: &ShellStats, fit: &DecayFit) -> String {
    let mut out = String::from("shell_radius,log_m,fit_line\n");
    for j in 0..stats.partition.count() {
        let r = stats.mids[j];
        let log_m = if stats.counts[j] == 0 {
            f64::NAN
        } else {
            stats.sups[j].max(1e-300).ln()
        };
        let line = if fit.n_hat.is_finite() {
            fit.intercept - fit.n_hat * (1.0 + r).ln()
        } else {
            f64::NAN
        };
        let _ = writeln!(out, "{r},{log_m},{line}");
    }
    out
}

/// Sobolev tail plot data: one CSV row per shell with the shell's outer
/// radius R_J and the cumulative weighted sum S_J (sup over K).
pub fn sobolev_plot_csv(tail: &SobolevTail) -> String {
    let mut out = String::from("shell_top,cumulative_sum\n");
    for (j, s) in tail.sups.iter().enumerate() {
        let _ = writeln!(out, "{},{}", tail.partition.upper(j), s);
    }
    out
}
