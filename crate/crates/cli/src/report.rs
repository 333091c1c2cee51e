//! Report rendering: a machine-readable CSV and a human-readable table.
//!
//! Both formats start with the same `# key: value` echo of the fully
//! resolved run configuration, so a result file is self-describing and a
//! rerun can be checked against it. Nothing time-of-day dependent goes
//! into the echo; only the time_sec column varies between identical runs.

use std::fmt::Write;

use crate::experiment::EvalReport;

pub const CSV_HEADER: &str =
    "type,dim,size_bytes,time_sec,top1,top5,top10,mean_comparisons,mean_density";

/// Resolved run configuration, echoed at the top of every report.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new() -> Self {
        let mut config = RunConfig { entries: Vec::new() };
        config.push("version", format!("bitgram {}", bitgram_core::VERSION));
        config
    }

    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_owned(), value.to_string()));
    }

    pub(crate) fn echo(&self, out: &mut String) {
        for (key, value) in &self.entries {
            writeln!(out, "# {key}: {value}").unwrap();
        }
    }
}

pub fn render_csv(config: &RunConfig, report: &EvalReport) -> String {
    let mut out = String::new();
    config.echo(&mut out);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{:.6},{:.4},{:.4},{:.4},{:.1},{:.4}",
            row.label,
            row.dim,
            row.size_bytes,
            row.score_sec,
            row.top1,
            row.top5,
            row.top10,
            row.mean_comparisons,
            row.mean_density,
        )
        .unwrap();
    }
    out
}

/// Aligned table with percentages. Carries one extra column over the
/// CSV: vectorization seconds, kept separate so scoring times stay
/// comparable across methods.
pub fn render_table(config: &RunConfig, report: &EvalReport) -> String {
    let mut out = String::new();
    config.echo(&mut out);

    let header = [
        "type",
        "dim",
        "bytes/vec",
        "vec_s",
        "score_s",
        "top-1",
        "top-5",
        "top-10",
        "cmp/case",
        "density",
    ];
    let mut grid: Vec<[String; 10]> = vec![header.map(str::to_owned)];
    for row in &report.rows {
        let density = if row.mean_density == 0.0 {
            "-".to_owned()
        } else {
            format!("{:.4}", row.mean_density)
        };
        grid.push([
            row.label.clone(),
            row.dim.to_string(),
            row.size_bytes.to_string(),
            format!("{:.3}", row.vectorize_sec),
            format!("{:.3}", row.score_sec),
            format!("{:.1}%", row.top1 * 100.0),
            format!("{:.1}%", row.top5 * 100.0),
            format!("{:.1}%", row.top10 * 100.0),
            format!("{:.1}", row.mean_comparisons),
            density,
        ]);
    }

    let mut widths = [0usize; 10];
    for row in &grid {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in &grid {
        let mut line = String::new();
        for (i, (cell, width)) in row.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                // Label column is left-aligned, numbers right-aligned.
                write!(line, "{cell:<width$}").unwrap();
            } else {
                write!(line, "{cell:>width$}").unwrap();
            }
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}
