use serde::{Deserialize, Serialize};

use crate::classifier::{check_dim, Classifier, DimensionMismatch};
use crate::herd::NUM_CLASSES;
use crate::svm::Standardizer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf { frequencies: Vec<f64> },
    /// Rows with `z[feature] <= threshold` go to `left`.
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// CART classification tree grown by Gini impurity; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTreeModel {
    pub scaling: Standardizer<f64>,
    pub nodes: Vec<TreeNode>,
}

type Counts = [usize; NUM_CLASSES];

fn gini_mass(counts: &Counts, total: usize) -> f64 {
    // total * gini, so child masses add up directly
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    let sq: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
    t - sq / t
}

struct Builder<'a> {
    rows: &'a [Vec<f64>],
    classes: &'a [usize],
    max_depth: usize,
    min_leaf: usize,
    nodes: Vec<TreeNode>,
}

impl Builder<'_> {
    fn counts(&self, members: &[usize]) -> Counts {
        let mut c = [0; NUM_CLASSES];
        for &i in members {
            c[self.classes[i]] += 1;
        }
        c
    }

    /// Best `(feature, threshold)` by impurity decrease; ties keep the lowest feature, then the lowest threshold.
    fn best_split(&self, members: &[usize], parent: &Counts) -> Option<(usize, f64)> {
        let n = members.len();
        let parent_mass = gini_mass(parent, n);
        let mut best: Option<(f64, usize, f64)> = None;
        let dim = self.rows[members[0]].len();
        let mut order = members.to_vec();
        for feature in 0..dim {
            order.sort_by(|&a, &b| self.rows[a][feature].total_cmp(&self.rows[b][feature]));
            let mut left = [0; NUM_CLASSES];
            for pos in 0..n - 1 {
                left[self.classes[order[pos]]] += 1;
                let (lo, hi) = (self.rows[order[pos]][feature], self.rows[order[pos + 1]][feature]);
                if lo == hi {
                    continue;
                }
                let n_left = pos + 1;
                if n_left < self.min_leaf || n - n_left < self.min_leaf {
                    continue;
                }
                let mut right = *parent;
                for (r, l) in right.iter_mut().zip(&left) {
                    *r -= l;
                }
                let child = gini_mass(&left, n_left) + gini_mass(&right, n - n_left);
                let gain = parent_mass - child;
                if gain > 1e-12 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, feature, lo + (hi - lo) / 2.0));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    fn grow(&mut self, members: Vec<usize>, depth: usize) -> usize {
        let counts = self.counts(&members);
        let id = self.nodes.len();
        let leaf = TreeNode::Leaf {
            frequencies: counts.iter().map(|&c| c as f64 / members.len() as f64).collect(),
        };
        self.nodes.push(leaf);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || depth >= self.max_depth || members.len() < 2 * self.min_leaf {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&members, &counts) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = members.iter().partition(|&&i| self.rows[i][feature] <= threshold);
        let left = self.grow(l, depth + 1);
        let right = self.grow(r, depth + 1);
        self.nodes[id] = TreeNode::Split { feature, threshold, left, right };
        id
    }
}

impl DecisionTreeModel {
    pub(crate) fn fit(scaling: Standardizer<f64>, scaled: &[Vec<f64>], classes: &[usize], max_depth: usize, min_leaf: usize) -> Self {
        let mut b = Builder { rows: scaled, classes, max_depth, min_leaf, nodes: Vec::new() };
        b.grow((0..scaled.len()).collect(), 0);
        Self { scaling, nodes: b.nodes }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

impl Classifier for DecisionTreeModel {
    fn dim(&self) -> usize {
        self.scaling.dim()
    }

    /// Class frequencies of the training rows in the reached leaf.
    fn scores(&self, x: &[f64]) -> Result<[f64; NUM_CLASSES], DimensionMismatch> {
        check_dim(self.dim(), x)?;
        let z = self.scaling.transform(x).expect("dimension checked");
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { frequencies } => {
                    let mut out = [0.0; NUM_CLASSES];
                    out.copy_from_slice(frequencies);
                    return Ok(out);
                }
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if z[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{fixtures, train_baseline_rows, BaselineModel, BaselineSpec};
    use crate::classifier::Classifier;
    use crate::herd::DiseaseLabel;
    use proptest::prelude::*;

    #[test]
    fn constant_features_predict_majority() {
        let rows = vec![vec![1.0, 2.0]; 7];
        let labels: Vec<DiseaseLabel> = [3, 5, 5, 3, 5, 1, 5].iter().map(|&i| DiseaseLabel::from_index(i).unwrap()).collect();
        let BaselineModel::DecisionTree(m) = train_baseline_rows(&BaselineSpec::decision_tree(), &rows, &labels, 0).unwrap() else {
            unreachable!()
        };
        assert_eq!(m.nodes.len(), 1);
        assert_eq!(m.predict(&[1.0, 2.0]).unwrap(), DiseaseLabel::from_index(5).unwrap());
        assert_eq!(m.predict(&[-9.0, 9.0]).unwrap(), DiseaseLabel::from_index(5).unwrap());
    }

    #[test]
    fn depth_limit_is_respected() {
        let (rows, labels) = fixtures::clusters(13, 10, 4, 0.5, 5);
        let spec = BaselineSpec::DecisionTree { max_depth: 3, min_samples_leaf: 1 };
        let BaselineModel::DecisionTree(m) = train_baseline_rows(&spec, &rows, &labels, 0).unwrap() else { unreachable!() };
        assert!(m.depth() <= 3);
    }

    #[test]
    fn separable_training_data_is_fit_exactly() {
        let (rows, labels) = fixtures::clusters(6, 10, 6, 20.0, 6);
        let m = train_baseline_rows(&BaselineSpec::decision_tree(), &rows, &labels, 0).unwrap();
        assert_eq!(m.predict_all(&rows).unwrap(), labels);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn row_order_does_not_change_predictions(seed in 0u64..500, rotate in 1usize..40) {
            let (rows, labels) = fixtures::clusters(5, 8, 3, 1.0, seed);
            let mut idx: Vec<usize> = (0..rows.len()).collect();
            idx.rotate_left(rotate % rows.len());
            idx.reverse();
            let rows2: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
            let labels2: Vec<DiseaseLabel> = idx.iter().map(|&i| labels[i]).collect();
            let a = train_baseline_rows(&BaselineSpec::decision_tree(), &rows, &labels, 0).unwrap();
            let b = train_baseline_rows(&BaselineSpec::decision_tree(), &rows2, &labels2, 0).unwrap();
            let (probe, _) = fixtures::clusters(5, 4, 3, 1.0, seed + 1);
            prop_assert_eq!(a.score_matrix(&probe).unwrap(), b.score_matrix(&probe).unwrap());
        }
    }
}
