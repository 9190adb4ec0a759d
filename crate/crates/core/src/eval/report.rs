//! Report rendering: accuracy printed
//! to one decimal, precision/recall/F1 as whole percents, Undefined as "-".

use super::{
    compute_metrics, ConfusionMatrix, EvalError, MetricsReport, RobustnessCell, RobustnessMatrix,
    RobustnessRow,
};
use crate::attacks::AttackKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "csv" => Some(ReportFormat::Csv),
            "markdown" | "md" => Some(ReportFormat::Markdown),
            _ => None,
        }
    }
}

/// One line of the clean-performance table.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceRow {
    pub feature_model: String,
    pub classifier: String,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
}

fn round_half_up(value: f64, decimals: u32) -> f64 {
    let factor = 10f64.powi(decimals as i32);
    (value * factor + 0.5).floor() / factor
}

/// Whole-percent cell: `0.904 -> "90"`, Undefined -> "-".
fn pct0(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{:.0}", round_half_up(v * 100.0, 0)),
        None => "-".to_string(),
    }
}

/// One-decimal percent cell: `0.9327 -> "93.3"`.
fn pct1(value: f64) -> String {
    format!("{:.1}", round_half_up(v100(value), 1))
}

fn v100(value: f64) -> f64 {
    value * 100.0
}

const PERFORMANCE_HEADER: &str = "feature_model,classifier,precision,recall,f1,accuracy,tp,fp,tn,fn";
const ROBUSTNESS_HEADER: &str = "feature_model,classifier,attack,accuracy,f1,tp,fp,tn,fn";

pub fn render_performance(rows: &[PerformanceRow], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(PERFORMANCE_HEADER);
            out.push('\n');
            for row in rows {
                let cm = &row.confusion;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    row.feature_model,
                    row.classifier,
                    pct0(row.metrics.precision),
                    pct0(row.metrics.recall),
                    pct0(row.metrics.f1),
                    pct1(row.metrics.accuracy),
                    cm.true_positives,
                    cm.false_positives,
                    cm.true_negatives,
                    cm.false_negatives,
                ));
            }
            out
        }
        ReportFormat::Markdown => {
            let mut out =
                String::from("| Feature Model | Classifier | PR | RE | F1 | ACC |\n|---|---|---|---|---|---|\n");
            for row in rows {
                let accuracy = format!("{}%", pct1(row.metrics.accuracy));
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} |\n",
                    row.feature_model,
                    row.classifier,
                    pct_cell0(row.metrics.precision),
                    pct_cell0(row.metrics.recall),
                    pct_cell0(row.metrics.f1),
                    accuracy,
                ));
            }
            out
        }
    }
}

fn pct_cell0(value: Option<f64>) -> String {
    match value {
        Some(_) => format!("{}%", pct0(value)),
        None => "-".to_string(),
    }
}

/// Render a robustness matrix. CSV emits one row per (model, column) with
/// the confusion counts; Markdown lays columns out in the canonical order
/// (Actual, Paraphrasing, EDA, Homograph, Spacing, Charswap, Hybrid).
pub fn render_robustness(matrix: &RobustnessMatrix, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => {
            let mut out = String::from(ROBUSTNESS_HEADER);
            out.push('\n');
            for row in &matrix.rows {
                push_robustness_csv_row(&mut out, row, "actual", &row.actual);
                for (kind, cell) in &row.attacks {
                    push_robustness_csv_row(&mut out, row, kind.as_str(), cell);
                }
            }
            out
        }
        ReportFormat::Markdown => {
            let mut kinds: Vec<AttackKind> = AttackKind::REPORT_ORDER
                .into_iter()
                .filter(|k| matrix.attack_order.contains(k))
                .collect();
            kinds.dedup();
            let mut out = String::from("| Feature Model | Classifier | Actual ACC | Actual F1 |");
            for kind in &kinds {
                out.push_str(&format!(
                    " {} ACC | {} F1 |",
                    kind.column_name(),
                    kind.column_name()
                ));
            }
            out.push('\n');
            out.push_str(&"|---".repeat(2 + 2 * (kinds.len() + 1)));
            out.push_str("|\n");
            for row in &matrix.rows {
                out.push_str(&format!(
                    "| {} | {} | {}% | {} |",
                    row.feature_model,
                    row.classifier,
                    pct1(row.actual.accuracy),
                    pct_cell0(row.actual.f1),
                ));
                for kind in &kinds {
                    match row.attacks.iter().find(|(k, _)| k == kind) {
                        Some((_, cell)) => out.push_str(&format!(
                            " {}% | {} |",
                            pct1(cell.accuracy),
                            pct_cell0(cell.f1)
                        )),
                        None => out.push_str(" - | - |"),
                    }
                }
                out.push('\n');
            }
            out
        }
    }
}

fn push_robustness_csv_row(out: &mut String, row: &RobustnessRow, attack: &str, cell: &RobustnessCell) {
    let cm = &cell.confusion;
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        row.feature_model,
        row.classifier,
        attack,
        pct1(cell.accuracy),
        pct0(cell.f1),
        cm.true_positives,
        cm.false_positives,
        cm.true_negatives,
        cm.false_negatives,
    ));
}

fn parse_counts(fields: &[&str], path_hint: &str) -> Result<ConfusionMatrix, EvalError> {
    let parse = |s: &str| -> Result<usize, EvalError> {
        s.trim()
            .parse()
            .map_err(|_| EvalError::Report(format!("{path_hint}: invalid count {s:?}")))
    };
    Ok(ConfusionMatrix::new(
        parse(fields[0])?,
        parse(fields[1])?,
        parse(fields[2])?,
        parse(fields[3])?,
    ))
}

/// Parse a performance CSV produced by [`render_performance`]; metrics are
/// recomputed exactly from the stored confusion counts.
pub fn parse_performance_csv(text: &str) -> Result<Vec<PerformanceRow>, EvalError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == PERFORMANCE_HEADER => {}
        other => {
            return Err(EvalError::Report(format!(
                "expected performance header, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(EvalError::Report(format!(
                "line {}: expected 10 fields, found {}",
                i + 2,
                fields.len()
            )));
        }
        let confusion = parse_counts(&fields[6..10], &format!("line {}", i + 2))?;
        rows.push(PerformanceRow {
            feature_model: fields[0].to_string(),
            classifier: fields[1].to_string(),
            metrics: compute_metrics(&confusion)?,
            confusion,
        });
    }
    Ok(rows)
}

/// Parse a robustness CSV produced by [`render_robustness`]. Every model must
/// carry an `actual` row before its attack rows.
pub fn parse_robustness_csv(text: &str) -> Result<RobustnessMatrix, EvalError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == ROBUSTNESS_HEADER => {}
        other => {
            return Err(EvalError::Report(format!(
                "expected robustness header, found {other:?}"
            )))
        }
    }
    let mut rows: Vec<RobustnessRow> = Vec::new();
    let mut attack_order: Vec<AttackKind> = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(EvalError::Report(format!(
                "line {}: expected 9 fields, found {}",
                i + 2,
                fields.len()
            )));
        }
        let cm = parse_counts(&fields[5..9], &format!("line {}", i + 2))?;
        let metrics = compute_metrics(&cm)?;
        let cell = RobustnessCell {
            accuracy: metrics.accuracy,
            f1: metrics.f1,
            confusion: cm,
        };
        let key = (fields[0].to_string(), fields[1].to_string());
        if fields[2] == "actual" {
            rows.push(RobustnessRow {
                feature_model: key.0,
                classifier: key.1,
                actual: cell,
                attacks: Vec::new(),
            });
        } else {
            let kind = AttackKind::parse(fields[2]).ok_or_else(|| {
                EvalError::Report(format!("line {}: unknown attack {:?}", i + 2, fields[2]))
            })?;
            let row = rows
                .iter_mut()
                .rev()
                .find(|r| r.feature_model == key.0 && r.classifier == key.1)
                .ok_or_else(|| {
                    EvalError::Report(format!(
                        "line {}: attack row without a preceding actual row",
                        i + 2
                    ))
                })?;
            row.attacks.push((kind, cell));
            if !attack_order.contains(&kind) {
                attack_order.push(kind);
            }
        }
    }
    Ok(RobustnessMatrix { rows, attack_order })
}
