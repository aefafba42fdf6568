//! Pairwise coordinate ascent (SMO) on the box-constrained dual.
//!
//! Works with `Q_ij = l_i l_j g_ij` and the gradient `G = Q b - 1` of the
//! minimisation form. The first index is `i = argmax_{I_up} -l_t G_t`; its partner
//! is the `I_low` member with the largest second-order gain `b^2 / a` (the
//! LIBSVM WSS2 rule). Iteration stops once `max_{I_up} - min_{I_low}` of
//! `-l_t G_t` drops below the KKT tolerance, which bounds the violation of every
//! KKT case by the same tolerance once the bias sits inside it.

use serde::{Deserialize, Serialize};

use super::kernel::Gram;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kkt_tolerance: f64,
    /// Pair updates are also capped at `max_passes` sweeps over all `n (n - 1) / 2` pairs.
    pub max_passes: usize,
    pub max_iterations: usize,
    /// Record the dual objective after every pair update.
    #[serde(default)]
    pub track_objective: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { kkt_tolerance: 1e-3, max_passes: 200, max_iterations: 10_000_000, track_objective: false }
    }
}

impl SolverConfig {
    pub fn with_tolerance(kkt_tolerance: f64) -> Self {
        Self { kkt_tolerance, ..Self::default() }
    }

    pub fn check(&self) -> Result<(), String> {
        let mut problems = Vec::new();
        if !(self.kkt_tolerance > 0.0) {
            problems.push(format!("kkt_tolerance must be positive, got {}", self.kkt_tolerance));
        }
        if self.max_passes == 0 {
            problems.push("max_passes must be positive".to_string());
        }
        if self.max_iterations == 0 {
            problems.push("max_iterations must be positive".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems.join("; "))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution<T> {
    pub betas: Vec<T>,
    pub bias: T,
    pub iterations: usize,
    pub converged: bool,
    /// Final `max_{I_up} - min_{I_low}` violation.
    pub gap: T,
    pub objective_trace: Vec<T>,
}

const CURVATURE_FLOOR: f64 = 1e-12;

/// Solves `max f(b)` s.t. `sum b_i l_i = 0`, `0 <= b_i <= c`.
///
/// `keys` break exact ties in pair selection (smaller key wins), which makes the
/// iteration path independent of where each example sits in the input.
pub fn solve_dual<T: Scalar>(gram: &Gram<T>, labels: &[T], keys: &[u64], c: T, cfg: &SolverConfig) -> DualSolution<T> {
    let n = labels.len();
    assert_eq!(gram.len(), n, "gram and label lengths differ");
    assert_eq!(keys.len(), n, "key and label lengths differ");

    let tol = T::lit(cfg.kkt_tolerance);
    let floor = T::lit(CURVATURE_FLOOR);
    let two = T::lit(2.0);
    let mut alpha = vec![T::zero(); n];
    let mut grad = vec![-T::one(); n];
    let mut trace = Vec::new();
    let pairs = (n * n.saturating_sub(1) / 2).max(1);
    let cap = cfg.max_iterations.min(cfg.max_passes.saturating_mul(pairs));

    let in_up = |a: T, y: T| (y > T::zero() && a < c) || (y < T::zero() && a > T::zero());
    let in_low = |a: T, y: T| (y > T::zero() && a > T::zero()) || (y < T::zero() && a < c);

    let mut iterations = 0;
    let mut converged = false;
    let mut gap;
    loop {
        let mut i_best: Option<(usize, T)> = None;
        let mut low_min: Option<T> = None;
        for t in 0..n {
            let v = -labels[t] * grad[t];
            if in_up(alpha[t], labels[t]) {
                let better = match i_best {
                    None => true,
                    Some((bi, bv)) => v > bv || (v == bv && keys[t] < keys[bi]),
                };
                if better {
                    i_best = Some((t, v));
                }
            }
            if in_low(alpha[t], labels[t]) && low_min.is_none_or(|m| v < m) {
                low_min = Some(v);
            }
        }
        let (Some((i, vi)), Some(vmin)) = (i_best, low_min) else {
            gap = T::zero();
            converged = true;
            break;
        };
        gap = vi - vmin;
        if gap <= tol {
            converged = true;
            break;
        }
        // Partner with the largest guaranteed objective gain b^2 / a.
        let row_i = gram.row(i);
        let kii = gram.get(i, i);
        let mut j_best: Option<(usize, T)> = None;
        for t in 0..n {
            if !in_low(alpha[t], labels[t]) {
                continue;
            }
            let b = vi + labels[t] * grad[t];
            if b <= T::zero() {
                continue;
            }
            let mut a = kii + gram.get(t, t) - two * row_i[t];
            if a <= T::zero() {
                a = floor;
            }
            let gain = b * b / a;
            let better = match j_best {
                None => true,
                Some((bj, bg)) => gain > bg || (gain == bg && keys[t] < keys[bj]),
            };
            if better {
                j_best = Some((t, gain));
            }
        }
        let j = j_best.expect("a violating partner exists while the gap is open").0;
        if iterations >= cap {
            break;
        }
        iterations += 1;

        let (yi, yj) = (labels[i], labels[j]);
        let kij = gram.get(i, j);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if yi != yj {
            // Q_ij = -k_ij when labels differ, so Q_ii + Q_jj + 2 Q_ij = k_ii + k_jj - 2 k_ij
            let mut quad = gram.get(i, i) + gram.get(j, j) - two * kij;
            if quad <= T::zero() {
                quad = floor;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > T::zero() {
                if alpha[j] < T::zero() {
                    alpha[j] = T::zero();
                    alpha[i] = diff;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = -diff;
            }
            if diff > T::zero() {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = gram.get(i, i) + gram.get(j, j) - two * kij;
            if quad <= T::zero() {
                quad = floor;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < T::zero() {
                alpha[j] = T::zero();
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < T::zero() {
                alpha[i] = T::zero();
                alpha[j] = sum;
            }
        }

        let di = (alpha[i] - old_i) * yi;
        let dj = (alpha[j] - old_j) * yj;
        let (row_i, row_j) = (gram.row(i), gram.row(j));
        for t in 0..n {
            // Q_ti * d(alpha_i) = l_t * k_ti * l_i * d(alpha_i)
            grad[t] += labels[t] * (row_i[t] * di + row_j[t] * dj);
        }

        if cfg.track_objective {
            trace.push(objective_from_gradient(&alpha, &grad));
        }
    }

    let bias = compute_bias(&alpha, labels, &grad, c);
    DualSolution { betas: alpha, bias, iterations, converged, gap, objective_trace: trace }
}

/// `f(b) = 1/2 sum b_i (1 - G_i)`, valid whenever `G = Q b - 1`.
fn objective_from_gradient<T: Scalar>(alpha: &[T], grad: &[T]) -> T {
    let half = T::lit(0.5);
    alpha.iter().zip(grad).map(|(&a, &g)| a * (T::one() - g)).sum::<T>() * half
}

/// Mean of `-l_t G_t` over free multipliers, else the midpoint of the feasible interval.
fn compute_bias<T: Scalar>(alpha: &[T], labels: &[T], grad: &[T], c: T) -> T {
    let mut free: Vec<T> = Vec::new();
    let mut b_min = T::neg_infinity();
    let mut b_max = T::infinity();
    for t in 0..alpha.len() {
        let v = -labels[t] * grad[t];
        if alpha[t] > T::zero() && alpha[t] < c {
            free.push(v);
            continue;
        }
        let at_upper = alpha[t] >= c;
        // b must satisfy b >= v for I_up-only members and b <= v for I_low-only members.
        let up_only = (labels[t] > T::zero()) != at_upper;
        if up_only {
            b_min = b_min.max(v);
        } else {
            b_max = b_max.min(v);
        }
    }
    if !free.is_empty() {
        free.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        return free.iter().copied().sum::<T>() / T::from_usize_lossy(free.len());
    }
    match (b_min.is_finite(), b_max.is_finite()) {
        (true, true) => (b_min + b_max) / T::lit(2.0),
        (true, false) => b_min,
        (false, true) => b_max,
        (false, false) => T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svm::dual::dual_objective;
    use crate::svm::kernel::KernelSpec;

    fn solve(rows: &[Vec<f64>], labels: &[f64], kernel: KernelSpec<f64>, c: f64, tol: f64) -> (Gram<f64>, DualSolution<f64>) {
        let gram = Gram::compute(&kernel, rows);
        let keys: Vec<u64> = (0..rows.len() as u64).collect();
        let cfg = SolverConfig { track_objective: true, ..SolverConfig::with_tolerance(tol) };
        let sol = solve_dual(&gram, labels, &keys, c, &cfg);
        (gram, sol)
    }

    #[test]
    fn symmetric_pair_has_equal_multipliers_and_zero_bias() {
        let (_, sol) = solve(&[vec![1.0], vec![-1.0]], &[1.0, -1.0], KernelSpec::Linear, 100.0, 1e-9);
        assert!(sol.converged);
        assert!((sol.betas[0] - 0.5).abs() < 1e-12);
        assert_eq!(sol.betas[0], sol.betas[1]);
        assert!(sol.bias.abs() < 1e-12);
    }

    #[test]
    fn objective_trace_matches_direct_evaluation_and_never_decreases() {
        let rows: Vec<Vec<f64>> = (0..12).map(|i| vec![(i as f64 * 1.3).sin(), (i as f64 * 0.7).cos()]).collect();
        let labels: Vec<f64> = (0..12).map(|i| if (i * 7) % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let (gram, sol) = solve(&rows, &labels, KernelSpec::rbf(0.8), 5.0, 1e-8);
        assert!(sol.converged);
        for w in sol.objective_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{} -> {}", w[0], w[1]);
        }
        let direct = dual_objective(&sol.betas, &labels, &gram).unwrap();
        assert!((direct - sol.objective_trace.last().unwrap()).abs() < 1e-10);
        let balance: f64 = sol.betas.iter().zip(&labels).map(|(b, l)| b * l).sum();
        assert!(balance.abs() < 1e-12);
        assert!(sol.betas.iter().all(|&b| (0.0..=5.0).contains(&b)));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 3.0, (i % 4) as f64]).collect();
        let labels: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let gram = Gram::compute(&KernelSpec::rbf(1.0), &rows);
        let keys: Vec<u64> = (0..20).collect();
        let cfg = SolverConfig { max_iterations: 1, ..SolverConfig::with_tolerance(1e-9) };
        let sol = solve_dual(&gram, &labels, &keys, 10.0, &cfg);
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 1);
    }
}
