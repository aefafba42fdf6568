use std::fmt::Write as _;

use serde::Serialize;

use cowhealth::metrics::sweep::{SweepMetrics, SweepRow, SWEEP_CSV_HEADER};

use super::finish;
use super::sweep::accuracy_plot;
use crate::args::ReportArgs;
use crate::error::{check_all, CliError, CliResult};
use crate::output::{read_bytes, sha256_hex, Meta, Outputs};

#[derive(Serialize)]
struct ReportConfig {
    sweep_sha256: String,
    percent: u32,
}

/// Reads a sweep CSV back into rows; infeasible rows keep an `Err` outcome.
fn parse_sweep(bytes: &[u8]) -> Result<Vec<SweepRow>, String> {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(SWEEP_CSV_HEADER) {
        return Err(format!("header must be {}", SWEEP_CSV_HEADER.join(",")));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let line = i + 2;
        let number = |k: usize| record[k].parse::<f64>().map_err(|_| format!("line {line}: bad value {:?}", &record[k]));
        let fraction = number(0)?;
        let percent = (fraction * 100.0).round();
        if !(1.0..=99.0).contains(&percent) {
            return Err(format!("line {line}: fraction {fraction} out of range"));
        }
        let outcome = if &record[2] == "infeasible" {
            Err("infeasible".to_string())
        } else {
            Ok(SweepMetrics {
                accuracy: number(2)?,
                precision: number(3)?,
                recall: number(4)?,
                f1: number(5)?,
                roc_auc: if &record[6] == "NA" { None } else { Some(number(6)?) },
            })
        };
        rows.push(SweepRow { percent: percent as u32, model: record[1].to_string(), outcome });
    }
    Ok(rows)
}

pub fn run(a: ReportArgs) -> CliResult<Vec<String>> {
    if !(1..=99).contains(&a.percent) {
        check_all(vec![format!("percent must lie in 1..=99, got {}", a.percent)])?;
    }
    let bytes = read_bytes(&a.sweep, "sweep table")?;
    let rows = parse_sweep(&bytes).map_err(|e| CliError::data("sweep table", e))?;
    let mut models: Vec<&str> = Vec::new();
    for r in &rows {
        if !models.contains(&r.model.as_str()) {
            models.push(&r.model);
        }
    }
    let at: Vec<&SweepRow> = rows.iter().filter(|r| r.percent == a.percent).collect();
    if at.is_empty() {
        return Err(CliError::data("sweep table", format!("no rows at {}%", a.percent)));
    }

    let config = ReportConfig { sweep_sha256: sha256_hex(&bytes), percent: a.percent };
    let meta = Meta::new("report", &config);
    let mut md = format!("<!-- {} -->\n\n", meta.svg_comment());
    let _ = writeln!(md, "## Classifiers trained on {}% of the data\n", a.percent);
    md.push_str("| model | accuracy | precision | recall | F1 | ROC AUC | best accuracy (at %) |\n");
    md.push_str("|---|---|---|---|---|---|---|\n");
    let mut ranked: Vec<(&str, Option<&SweepMetrics>)> =
        models.iter().map(|&m| (m, at.iter().find(|r| r.model == m).and_then(|r| r.outcome.as_ref().ok()))).collect();
    ranked.sort_by(|x, y| {
        let acc = |o: Option<&SweepMetrics>| o.map_or(f64::NEG_INFINITY, |m| m.accuracy);
        acc(y.1).total_cmp(&acc(x.1))
    });
    for (model, metrics) in &ranked {
        let best = rows
            .iter()
            .filter(|r| r.model == *model)
            .filter_map(|r| r.outcome.as_ref().ok().map(|o| (o.accuracy, r.percent)))
            .fold(None, |acc: Option<(f64, u32)>, x| match acc {
                Some(b) if b.0 >= x.0 => Some(b),
                _ => Some(x),
            });
        let best = best.map_or_else(|| "n/a".to_string(), |(acc, p)| format!("{acc:.4} ({p})"));
        match metrics {
            Some(m) => {
                let auc = m.roc_auc.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
                let _ = writeln!(
                    md,
                    "| {model} | {:.4} | {:.4} | {:.4} | {:.4} | {auc} | {best} |",
                    m.accuracy, m.precision, m.recall, m.f1
                );
            }
            None => {
                let _ = writeln!(md, "| {model} | infeasible | | | | | {best} |");
            }
        }
    }

    let mut outputs = Outputs::default();
    outputs.add(&a.out, md.into_bytes());
    if let Some(path) = &a.plot_out {
        outputs.add(path, accuracy_plot(&rows, &models, &meta.svg_comment()).into_bytes());
    }
    let lines = match ranked.first() {
        Some((m, Some(x))) => vec![format!("highest accuracy at {}%: {m} ({:.4})", a.percent, x.accuracy)],
        _ => Vec::new(),
    };
    finish(lines, outputs)
}
