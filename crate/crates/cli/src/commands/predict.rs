use serde::Serialize;

use cowhealth::herd::DiseaseLabel;

use super::{csv_bytes, finish, load_dataset, num};
use crate::args::PredictArgs;
use crate::error::{CliError, CliResult};
use crate::model_file::ModelFile;
use crate::output::{read_bytes, sha256_hex, Meta, Outputs};

#[derive(Serialize)]
struct PredictConfig {
    model_sha256: String,
    data_sha256: String,
}

pub fn run(a: PredictArgs) -> CliResult<Vec<String>> {
    let model_bytes = read_bytes(&a.model, "model file")?;
    let model = ModelFile::from_bytes(&model_bytes)?;
    let loaded = load_dataset(&a.data)?;
    let classifier = model.model.classifier();
    let scores = classifier.score_matrix(&loaded.data.feature_rows()).map_err(|e| CliError::data("prediction", e))?;

    let mut header = vec!["row".to_string(), "label".to_string(), "predicted".to_string()];
    header.extend(DiseaseLabel::ALL.iter().map(|l| format!("score_{}", l.name())));
    let rows: Vec<Vec<String>> = loaded
        .data
        .iter()
        .zip(&scores)
        .enumerate()
        .map(|(i, (example, s))| {
            let predicted = DiseaseLabel::from_index(cowhealth::classifier::argmax(s)).expect("class index");
            let mut r = vec![i.to_string(), example.label.name().to_string(), predicted.name().to_string()];
            r.extend(s.iter().map(|&v| num(v)));
            r
        })
        .collect();
    let correct = rows.iter().filter(|r| r[1] == r[2]).count();

    let config = PredictConfig { model_sha256: sha256_hex(&model_bytes), data_sha256: loaded.sha256 };
    let mut outputs = Outputs::default();
    outputs.add_with_meta(&a.out, csv_bytes(&header, &rows)?, &Meta::new("predict", &config));
    finish(vec![format!("{} predictions, {correct} match the label column", rows.len())], outputs)
}
