use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chromosome::{decode, Chromosome, GaError, GeneBounds};
use super::fitness::{FitnessCache, FitnessKind, FitnessSpec};
use super::operators::{mutate, roulette_select, two_point_crossover};
use crate::herd::Dataset;
use crate::rng;
use crate::svm::{SolverConfig, SvmHyperparams};

/// Smallest change in best-ever fitness that counts as progress.
pub const MIN_IMPROVEMENT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    pub max_generations: usize,
    /// Generations without improvement before stopping.
    pub patience: usize,
    pub target_fitness: f64,
    pub elitism_count: usize,
    pub cv_folds: usize,
    pub fitness: FitnessKind,
    pub solver: SolverConfig,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 200,
            crossover_rate: 0.75,
            mutation_rate: 0.01,
            max_generations: 5000,
            patience: 25,
            target_fitness: 0.95,
            elitism_count: 1,
            cv_folds: 3,
            fitness: FitnessKind::WeightedF1,
            solver: SolverConfig::default(),
            seed: 0,
        }
    }
}

impl GaConfig {
    /// Small population and generation budget for interactive runs.
    pub fn desk() -> Self {
        Self { population_size: 20, max_generations: 15, ..Self::default() }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            v.push(format!("population_size must be even and at least 2, got {}", self.population_size));
        }
        for (name, r) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&r) {
                v.push(format!("{name} must lie in [0, 1], got {r}"));
            }
        }
        if self.max_generations == 0 {
            v.push("max_generations must be positive".into());
        }
        if self.patience == 0 {
            v.push("patience must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.target_fitness) {
            v.push(format!("target_fitness must lie in [0, 1], got {}", self.target_fitness));
        }
        if self.elitism_count >= self.population_size {
            v.push(format!("elitism_count must be below population_size, got {}", self.elitism_count));
        }
        if self.cv_folds < 2 {
            v.push(format!("cv_folds must be at least 2, got {}", self.cv_folds));
        }
        if let Err(e) = self.solver.check() {
            v.push(e);
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    /// 1-based.
    pub generation: usize,
    /// Best fitness seen in any generation so far.
    pub best_fitness: f64,
    pub generation_best: f64,
    pub mean_fitness: f64,
    pub best_c: f64,
    pub best_gamma: f64,
    /// Distinct chromosomes evaluated so far.
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaTrace {
    pub generations: Vec<GenerationRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TargetReached,
    Patience,
    MaxGenerations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaOutcome {
    pub best: SvmHyperparams<f64>,
    pub best_chromosome: Chromosome,
    pub best_fitness: f64,
    pub stop: StopReason,
    pub trace: GaTrace,
}

fn random_chromosome(len: usize, seed: u64, slot: usize) -> Chromosome {
    let mut r = rng::stream(seed, &[0x6A, 0, slot as u64]);
    Chromosome::new((0..len).map(|_| r.random_bool(0.5)).collect())
}

/// Runs the genetic search on `train` only; fitness is cross-validated inside it.
pub fn optimize(train: &Dataset, bounds: &GeneBounds, cfg: &GaConfig) -> Result<GaOutcome, GaError> {
    let mut problems = bounds.violations();
    problems.extend(cfg.violations());
    if !problems.is_empty() {
        return Err(GaError::InvalidConfig(problems.join("; ")));
    }
    let spec = FitnessSpec { kind: cfg.fitness, cv_folds: cfg.cv_folds, solver: cfg.solver, seed: cfg.seed };
    let cache = FitnessCache::new(train, bounds, &spec)?;
    let len = bounds.chromosome_len();
    let mut population: Vec<Chromosome> = (0..cfg.population_size).map(|s| random_chromosome(len, cfg.seed, s)).collect();

    let mut best: Option<(Chromosome, f64)> = None;
    let mut reference = f64::NEG_INFINITY;
    let mut stale = 0;
    let mut trace = GaTrace::default();

    for generation in 1..=cfg.max_generations {
        let fitness: Vec<f64> = population.par_iter().map(|c| cache.get(c)).collect::<Result<_, _>>()?;
        let (gen_idx, &gen_best) = fitness
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty population");
        if best.as_ref().is_none_or(|(_, f)| gen_best > *f) {
            best = Some((population[gen_idx].clone(), gen_best));
        }
        let (best_c, best_f) = best.clone().expect("set above");
        let (c, gamma) = decode::<f64>(&best_c, bounds)?;
        trace.generations.push(GenerationRecord {
            generation,
            best_fitness: best_f,
            generation_best: gen_best,
            mean_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
            best_c: c,
            best_gamma: gamma,
            evaluations: cache.evaluations(),
        });

        if best_f - reference >= MIN_IMPROVEMENT {
            reference = best_f;
            stale = 0;
        } else {
            stale += 1;
        }
        let stop = if best_f >= cfg.target_fitness {
            Some(StopReason::TargetReached)
        } else if stale >= cfg.patience {
            Some(StopReason::Patience)
        } else if generation == cfg.max_generations {
            Some(StopReason::MaxGenerations)
        } else {
            None
        };
        if let Some(stop) = stop {
            return Ok(GaOutcome { best: SvmHyperparams::rbf(c, gamma), best_chromosome: best_c, best_fitness: best_f, stop, trace });
        }

        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
        let mut next: Vec<Chromosome> = ranked[..cfg.elitism_count].iter().map(|&i| population[i].clone()).collect();
        let mut pair = 0u64;
        while next.len() < cfg.population_size {
            let mut r = rng::stream(cfg.seed, &[0x6A, generation as u64, pair]);
            let a = &population[roulette_select(&fitness, &mut r)?];
            let b = &population[roulette_select(&fitness, &mut r)?];
            let (x, y) = two_point_crossover(a, b, &mut r, cfg.crossover_rate)?;
            next.push(mutate(&x, &mut r, cfg.mutation_rate));
            if next.len() < cfg.population_size {
                next.push(mutate(&y, &mut r, cfg.mutation_rate));
            }
            pair += 1;
        }
        population = next;
    }
    unreachable!("the last generation always stops")
}

pub const TRACE_CSV_HEADER: [&str; 5] = ["generation", "best_fitness", "mean_fitness", "best_C", "best_gamma"];

pub fn write_trace_csv<W: Write>(trace: &GaTrace, writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRACE_CSV_HEADER)?;
    for g in &trace.generations {
        w.write_record([
            g.generation.to_string(),
            format!("{:.6}", g.best_fitness),
            format!("{:.6}", g.mean_fitness),
            format!("{:?}", g.best_c),
            format!("{:?}", g.best_gamma),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herd::{DiseaseLabel, FeatureVector, NUM_CLASSES};

    #[test]
    fn paper_defaults() {
        let c = GaConfig::default();
        assert_eq!(
            (c.population_size, c.crossover_rate, c.mutation_rate, c.max_generations, c.target_fitness),
            (200, 0.75, 0.01, 5000, 0.95)
        );
        assert!(c.violations().is_empty());
        let d = GaConfig::desk();
        assert_eq!((d.population_size, d.max_generations, d.cv_folds), (20, 15, 3));
    }

    #[test]
    fn every_violation_is_reported() {
        let c = GaConfig { population_size: 7, mutation_rate: 1.5, elitism_count: 9, ..GaConfig::default() };
        assert_eq!(c.violations().len(), 3);
    }

    #[test]
    fn constant_landscape_stops_on_patience() {
        let data = Dataset::from_rows(
            (0..NUM_CLASSES * 3).map(|i| (FeatureVector::zeros(), DiseaseLabel::from_index(i % NUM_CLASSES).unwrap())),
        );
        let cfg = GaConfig { patience: 3, ..GaConfig::desk() };
        let out = optimize(&data, &GeneBounds::default(), &cfg).unwrap();
        assert_eq!(out.stop, StopReason::Patience);
        assert!(out.trace.generations.len() <= 4 + 3);
        assert!(out.trace.generations.windows(2).all(|w| w[0].best_fitness == w[1].best_fitness));
    }
}
