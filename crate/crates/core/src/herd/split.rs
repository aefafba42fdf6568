use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::error::HerdError;
use super::label::{DiseaseLabel, NUM_CLASSES};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        Self { train_fraction, seed, stratified: true }
    }
}

/// Per-group train count: nearest integer, at least one, leaving at least one for test.
pub fn train_count(fraction: f64, group_size: usize) -> usize {
    let rounded = (fraction * group_size as f64).round() as usize;
    rounded.clamp(1, group_size.saturating_sub(1).max(1))
}

/// Partitions `data` into `(train, test)`. Both halves keep the input row order.
pub fn stratified_split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset), HerdError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(HerdError::BadFraction(spec.train_fraction));
    }
    if data.is_empty() {
        return Err(HerdError::Empty);
    }
    let mut in_train = vec![false; data.len()];

    if spec.stratified {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); NUM_CLASSES];
        for (i, example) in data.iter().enumerate() {
            groups[example.label.index()].push(i);
        }
        for (class, members) in groups.iter_mut().enumerate() {
            if members.is_empty() {
                continue;
            }
            if members.len() < 2 {
                let label = DiseaseLabel::from_index(class).expect("class index in range");
                return Err(HerdError::ClassTooSmall { label, count: members.len() });
            }
            let take = train_count(spec.train_fraction, members.len());
            members.shuffle(&mut rng::stream(spec.seed, &[0x5B11, class as u64]));
            for &i in &members[..take] {
                in_train[i] = true;
            }
        }
    } else {
        let mut all: Vec<usize> = (0..data.len()).collect();
        let take = train_count(spec.train_fraction, all.len());
        all.shuffle(&mut rng::stream(spec.seed, &[0x5B11, u64::MAX]));
        for &i in &all[..take] {
            in_train[i] = true;
        }
    }

    let (train, test): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| in_train[i]);
    Ok((data.subset(&train), data.subset(&test)))
}

/// Assigns each row a fold in `0..folds`, round-robin within each class after a seeded shuffle.
pub fn stratified_folds(data: &Dataset, folds: usize, seed: u64) -> Vec<usize> {
    let mut assignment = vec![0; data.len()];
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); NUM_CLASSES];
    for (i, example) in data.iter().enumerate() {
        groups[example.label.index()].push(i);
    }
    let mut offset = 0;
    for (class, members) in groups.iter_mut().enumerate() {
        members.shuffle(&mut rng::stream(seed, &[0xF01D, class as u64]));
        for (k, &i) in members.iter().enumerate() {
            assignment[i] = (k + offset) % folds;
        }
        offset += members.len();
    }
    assignment
}
