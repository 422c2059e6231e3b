//! Summary rows and deterministic CSV emission.
//!
//! Floats are printed with 17 significant digits in scientific notation so
//! a value survives a round trip through the CSV bit-exactly, and rows are
//! written in construction order: identical runs produce identical bytes.

use std::path::Path;

use crate::CliError;

/// Comparison a summary row applies to its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    /// Pass when `value <= threshold`.
    Le,
    /// Pass when `value >= threshold`.
    Ge,
    /// Informational value, no pass/fail.
    Info,
}

/// One line of a scenario summary; `equation` is the tag of the relation
/// the row verifies (`A8`, `P5`, `S9`, ...).
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub equation: &'static str,
    pub check: String,
    pub value: f64,
    pub cmp: Cmp,
    pub threshold: f64,
    pub note: &'static str,
}

impl SummaryRow {
    pub fn le(
        equation: &'static str,
        check: impl Into<String>,
        value: f64,
        threshold: f64,
    ) -> Self {
        SummaryRow {
            equation,
            check: check.into(),
            value,
            cmp: Cmp::Le,
            threshold,
            note: "",
        }
    }

    pub fn ge(
        equation: &'static str,
        check: impl Into<String>,
        value: f64,
        threshold: f64,
    ) -> Self {
        SummaryRow {
            equation,
            check: check.into(),
            value,
            cmp: Cmp::Ge,
            threshold,
            note: "",
        }
    }

    pub fn info(equation: &'static str, check: impl Into<String>, value: f64) -> Self {
        SummaryRow {
            equation,
            check: check.into(),
            value,
            cmp: Cmp::Info,
            threshold: 0.0,
            note: "",
        }
    }

    pub fn with_note(mut self, note: &'static str) -> Self {
        self.note = note;
        self
    }

    pub fn passed(&self) -> bool {
        match self.cmp {
            Cmp::Le => self.value <= self.threshold,
            Cmp::Ge => self.value >= self.threshold,
            Cmp::Info => true,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.cmp {
            Cmp::Info => "info",
            _ if self.passed() => "pass",
            _ => "fail",
        }
    }
}

/// 17 significant digits, scientific notation: lossless for f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn open_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file = std::fs::File::create(path)?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<(), CliError> {
    let mut w = open_writer(path)?;
    w.write_record([
        "equation",
        "check",
        "value",
        "cmp",
        "threshold",
        "status",
        "note",
    ])
    .map_err(|e| CliError::Parse(format!("csv: {e}")))?;
    for row in rows {
        let (cmp, threshold) = match row.cmp {
            Cmp::Le => ("le", format_float(row.threshold)),
            Cmp::Ge => ("ge", format_float(row.threshold)),
            Cmp::Info => ("", String::new()),
        };
        w.write_record([
            row.equation,
            row.check.as_str(),
            &format_float(row.value),
            cmp,
            &threshold,
            row.status(),
            row.note,
        ])
        .map_err(|e| CliError::Parse(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Write a generic table with a header and float rows.
pub fn write_table(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), CliError> {
    let mut w = open_writer(path)?;
    w.write_record(header)
        .map_err(|e| CliError::Parse(format!("csv: {e}")))?;
    for row in rows {
        let fields: Vec<String> = row.into_iter().map(format_float).collect();
        w.write_record(&fields)
            .map_err(|e| CliError::Parse(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable summary line for stdout.
pub fn render_row(row: &SummaryRow) -> String {
    match row.cmp {
        Cmp::Info => format!(
            "  info  [{:>4}] {} = {:.6e}{}",
            row.equation,
            row.check,
            row.value,
            if row.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", row.note)
            },
        ),
        Cmp::Le => format!(
            "  {}  [{:>4}] {} = {:.6e} (<= {:.1e}){}",
            if row.passed() { "PASS" } else { "FAIL" },
            row.equation,
            row.check,
            row.value,
            row.threshold,
            if row.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", row.note)
            },
        ),
        Cmp::Ge => format!(
            "  {}  [{:>4}] {} = {:.6e} (>= {:.1e}){}",
            if row.passed() { "PASS" } else { "FAIL" },
            row.equation,
            row.check,
            row.value,
            row.threshold,
            if row.note.is_empty() {
                String::new()
            } else {
                format!("  [{}]", row.note)
            },
        ),
    }
}
