//! Genetic search over `(C, gamma)` with binary chromosomes.

mod chromosome;
mod fitness;
mod operators;
mod optimize;

pub use chromosome::{decode, decode_gene, Chromosome, GaError, GeneBounds};
pub use fitness::{FitnessCache, FitnessKind, FitnessSpec};
pub use operators::{crossover_at, mutate, roulette_select, two_point_crossover};
pub use optimize::{optimize, write_trace_csv, GaConfig, GaOutcome, GaTrace, GenerationRecord, StopReason};
