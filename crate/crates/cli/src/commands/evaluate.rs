use serde::Serialize;

use cowhealth::herd::DiseaseLabel;
use cowhealth::metrics::{evaluate, EvalReport};

use super::{csv_bytes, finish, load_dataset, Split};
use crate::args::{EvaluateArgs, Subset};
use crate::error::{check_all, CliError, CliResult};
use crate::model_file::ModelFile;
use crate::output::{read_bytes, sha256_hex, Meta, Outputs};
use crate::svg::{self, Chart, Series};

#[derive(Serialize)]
struct EvaluateConfig {
    model_sha256: String,
    data_sha256: String,
    on: Subset,
    split: Split,
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"))
}

pub fn run(a: EvaluateArgs) -> CliResult<Vec<String>> {
    let model_bytes = read_bytes(&a.model, "model file")?;
    let model = ModelFile::from_bytes(&model_bytes)?;
    let recorded = Split { train_fraction: model.provenance.train_fraction, seed: model.provenance.split_seed };
    let split = Split {
        train_fraction: match a.split.train_fraction {
            Some(1.0) => None,
            Some(f) => Some(f),
            None => recorded.train_fraction,
        },
        seed: a.split.split_seed.unwrap_or(recorded.seed),
    };
    check_all(split.violations())?;
    if a.on == Subset::Test && split.train_fraction.is_none() {
        return Err(CliError::usage("no held-out rows: the split uses every row for training; pass --on all or --train-fraction"));
    }

    let loaded = load_dataset(&a.data)?;
    let subset = match a.on {
        Subset::All => loaded.data.clone(),
        Subset::Train => split.apply(&loaded.data)?.0,
        Subset::Test => split.apply(&loaded.data)?.1,
    };
    let report = evaluate(model.model.classifier(), &subset).map_err(|e| CliError::data("evaluation", e))?;

    let config = EvaluateConfig { model_sha256: sha256_hex(&model_bytes), data_sha256: loaded.sha256, on: a.on, split };
    let meta = Meta::new("evaluate", &config);
    let mut outputs = Outputs::default();
    let kind = model.kind.as_str();
    outputs.add_with_meta(&a.out, metrics_csv(kind, split.train_fraction.unwrap_or(1.0), &report)?, &meta);
    if let Some(path) = &a.confusion_out {
        outputs.add_with_meta(path, confusion_csv(&report)?, &meta);
    }
    if let Some(dir) = &a.roc_out {
        let comment = meta.svg_comment();
        outputs.add_with_meta(dir.join("roc.csv"), roc_csv(kind, &report)?, &meta);
        let mut overlay = Vec::new();
        for label in DiseaseLabel::ALL {
            let mut chart = roc_chart(&format!("ROC {kind}: {}", label.name()), &comment);
            if let Some(curve) = &report.roc_curves[label.index()] {
                let series = Series { name: format!("{} (AUC {:.3})", label.name(), curve.auc()), points: curve.points.clone() };
                chart.series.push(series.clone());
                overlay.push(series);
            }
            outputs.add(dir.join(format!("roc_{}.svg", label.name())), svg::render(&chart).into_bytes());
        }
        let mut chart = roc_chart(&format!("ROC {kind}: all classes"), &comment);
        chart.series = overlay;
        outputs.add(dir.join("overlay.svg"), svg::render(&chart).into_bytes());
    }

    let lines = vec![format!(
        "{kind} on {} rows: accuracy {:.4}, weighted F1 {:.4}, weighted AUC {}",
        subset.len(),
        report.accuracy,
        report.f1_weighted,
        opt(report.roc_auc_weighted)
    )];
    finish(lines, outputs)
}

fn roc_chart(title: &str, comment: &str) -> Chart {
    let mut chart = Chart::new(title, "false positive rate", "true positive rate", (0.0, 1.0), (0.0, 1.0));
    chart.diagonal = true;
    chart.comment = Some(comment.to_string());
    chart
}

/// Weighted summary row first, then one row per class.
fn metrics_csv(kind: &str, fraction: f64, r: &EvalReport) -> CliResult<Vec<u8>> {
    let header: Vec<String> =
        ["fraction", "model", "scope", "support", "accuracy", "precision", "recall", "f1", "roc_auc"].map(String::from).to_vec();
    let fraction = format!("{fraction:.2}");
    let mut rows = vec![vec![
        fraction.clone(),
        kind.to_string(),
        "weighted".to_string(),
        r.confusion.total().to_string(),
        format!("{:.6}", r.accuracy),
        format!("{:.6}", r.precision_weighted),
        format!("{:.6}", r.recall_weighted),
        format!("{:.6}", r.f1_weighted),
        opt(r.roc_auc_weighted),
    ]];
    for (label, c) in DiseaseLabel::ALL.iter().zip(&r.per_class) {
        rows.push(vec![
            fraction.clone(),
            kind.to_string(),
            label.name().to_string(),
            c.support.to_string(),
            "NA".to_string(),
            format!("{:.6}", c.precision),
            format!("{:.6}", c.recall),
            format!("{:.6}", c.f1),
            opt(c.auc),
        ]);
    }
    csv_bytes(&header, &rows)
}

/// Rows are true classes, columns predicted classes.
fn confusion_csv(r: &EvalReport) -> CliResult<Vec<u8>> {
    let mut header = vec!["truth".to_string()];
    header.extend(DiseaseLabel::ALL.iter().map(|l| l.name().to_string()));
    let rows: Vec<Vec<String>> = DiseaseLabel::ALL
        .iter()
        .map(|t| {
            let mut row = vec![t.name().to_string()];
            row.extend(DiseaseLabel::ALL.iter().map(|p| r.confusion.get(t.index(), p.index()).to_string()));
            row
        })
        .collect();
    csv_bytes(&header, &rows)
}

fn roc_csv(kind: &str, r: &EvalReport) -> CliResult<Vec<u8>> {
    let header: Vec<String> = ["model", "class", "fpr", "tpr"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for (label, curve) in DiseaseLabel::ALL.iter().zip(&r.roc_curves) {
        for &(fpr, tpr) in curve.iter().flat_map(|c| &c.points) {
            rows.push(vec![kind.to_string(), label.name().to_string(), format!("{fpr:.6}"), format!("{tpr:.6}")]);
        }
    }
    csv_bytes(&header, &rows)
}
