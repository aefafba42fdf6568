use rand::Rng;

use super::chromosome::{Chromosome, GaError};

/// Fitness-proportional selection; a wheel with zero total mass is uniform.
pub fn roulette_select<R: Rng + ?Sized>(fitnesses: &[f64], rng: &mut R) -> Result<usize, GaError> {
    if fitnesses.is_empty() {
        return Err(GaError::EmptyPopulation);
    }
    assert!(fitnesses.iter().all(|&f| f >= 0.0 && f.is_finite()), "fitnesses must be finite and non-negative");
    let total: f64 = fitnesses.iter().sum();
    if total <= 0.0 {
        return Ok(rng.random_range(0..fitnesses.len()));
    }
    let mut spin = rng.random::<f64>() * total;
    for (i, &f) in fitnesses.iter().enumerate() {
        if f > 0.0 && spin < f {
            return Ok(i);
        }
        spin -= f;
    }
    // rounding left the spin past the last slot
    Ok(fitnesses.iter().rposition(|&f| f > 0.0).expect("positive total"))
}

/// Swaps bits `[i, j)` between the parents.
pub fn crossover_at(a: &Chromosome, b: &Chromosome, i: usize, j: usize) -> Result<(Chromosome, Chromosome), GaError> {
    if a.len() != b.len() {
        return Err(GaError::LengthMismatch { expected: a.len(), found: b.len() });
    }
    assert!(i < j && j <= a.len(), "cut points must satisfy i < j <= len");
    let (mut x, mut y) = (a.clone(), b.clone());
    x.bits[i..j].copy_from_slice(&b.bits[i..j]);
    y.bits[i..j].copy_from_slice(&a.bits[i..j]);
    Ok((x, y))
}

/// With probability `rate`, swaps the segment between two random cut points; otherwise clones the parents.
pub fn two_point_crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
    rate: f64,
) -> Result<(Chromosome, Chromosome), GaError> {
    if a.len() != b.len() {
        return Err(GaError::LengthMismatch { expected: a.len(), found: b.len() });
    }
    if a.is_empty() || !rng.random_bool(rate) {
        return Ok((a.clone(), b.clone()));
    }
    let i = rng.random_range(0..a.len());
    let j = rng.random_range(i + 1..=a.len());
    crossover_at(a, b, i, j)
}

/// Flips each bit independently with probability `per_bit_rate`.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, rng: &mut R, per_bit_rate: f64) -> Chromosome {
    Chromosome::new(c.bits.iter().map(|&b| b ^ rng.random_bool(per_bit_rate)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn degenerate_wheel_always_picks_the_only_mass() {
        let mut r = rng::stream(1, &[]);
        for _ in 0..1000 {
            assert_eq!(roulette_select(&[1.0, 0.0, 0.0, 0.0], &mut r).unwrap(), 0);
        }
        assert!(matches!(roulette_select(&[], &mut r), Err(GaError::EmptyPopulation)));
    }

    #[test]
    fn equal_and_zero_wheels_are_uniform() {
        for weights in [vec![0.5f64; 8], vec![0.0; 8]] {
            let mut r = rng::stream(2, &[weights[0].to_bits()]);
            let draws = 10_000;
            let mut counts = [0usize; 8];
            for _ in 0..draws {
                counts[roulette_select(&weights, &mut r).unwrap()] += 1;
            }
            let p = 1.0 / 8.0;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            for c in counts {
                assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
            }
        }
    }

    #[test]
    fn proportional_wheel_matches_weights() {
        let mut r = rng::stream(3, &[]);
        let mut hits = 0;
        for _ in 0..20_000 {
            hits += (roulette_select(&[1.0, 3.0], &mut r).unwrap() == 1) as usize;
        }
        let frac = hits as f64 / 20_000.0;
        assert!((frac - 0.75).abs() < 0.015, "{frac}");
    }

    #[test]
    fn hand_applied_segment_swap() {
        let a = Chromosome::parse("00000000").unwrap();
        let b = Chromosome::parse("11111111").unwrap();
        let (x, y) = crossover_at(&a, &b, 2, 5).unwrap();
        assert_eq!((x.to_string(), y.to_string()), ("00111000".to_string(), "11000111".to_string()));
    }

    #[test]
    fn crossover_edge_cases() {
        let mut r = rng::stream(4, &[]);
        let a = Chromosome::parse("0110100111").unwrap();
        let b = Chromosome::parse("1100011010").unwrap();
        for _ in 0..50 {
            assert_eq!(two_point_crossover(&a, &a, &mut r, 1.0).unwrap(), (a.clone(), a.clone()));
            assert_eq!(two_point_crossover(&a, &b, &mut r, 0.0).unwrap(), (a.clone(), b.clone()));
            let (x, y) = two_point_crossover(&a, &b, &mut r, 1.0).unwrap();
            for k in 0..a.len() {
                assert!((x.bits[k] == a.bits[k] && y.bits[k] == b.bits[k]) || (x.bits[k] == b.bits[k] && y.bits[k] == a.bits[k]));
            }
        }
        assert!(two_point_crossover(&a, &Chromosome::zeros(3), &mut r, 1.0).is_err());
    }

    #[test]
    fn mutation_extremes_and_expected_flips() {
        let mut r = rng::stream(5, &[]);
        let c = Chromosome::parse("011010011101001011010010").unwrap();
        assert_eq!(mutate(&c, &mut r, 0.0), c);
        let flipped = mutate(&c, &mut r, 1.0);
        assert!(flipped.bits.iter().zip(&c.bits).all(|(a, b)| a != b));

        let trials = 100_000;
        let flips: usize = (0..trials)
            .map(|_| mutate(&c, &mut r, 0.01).bits.iter().zip(&c.bits).filter(|(a, b)| a != b).count())
            .sum();
        let mean = flips as f64 / trials as f64;
        assert!((mean - 0.24).abs() < 0.02, "{mean}");
    }
}
