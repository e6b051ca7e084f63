//! Greedy CART regression tree with variance impurity.
//!
//! At every node each feature is sorted and every midpoint between
//! consecutive distinct values is scored by the reduction in the sum of
//! squared errors (SSE). Rows go left iff `value <= threshold`.
//!
//! Ties: candidates are ordered by feature index, then threshold. The
//! winner is the first candidate whose SSE reduction is within
//! [`TIE_TOLERANCE`] `* node_sse` of the best reduction. The tolerance
//! absorbs summation-order rounding, so that two features inducing the same
//! partition (e.g. `renter_share` and `owner_share`) tie exactly.

use serde::{Deserialize, Serialize};

use super::features::FeatureMatrix;
use super::XaiError;

/// Relative tolerance, in units of node SSE, under which split gains tie.
pub const TIE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub min_impurity_decrease: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 6,
            min_samples_leaf: 5,
            min_impurity_decrease: 0.0,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<(), XaiError> {
        if self.max_depth < 1 {
            return Err(XaiError::InvalidParams("max_depth must be at least 1".into()));
        }
        if self.min_samples_leaf < 1 {
            return Err(XaiError::InvalidParams("min_samples_leaf must be at least 1".into()));
        }
        if !(self.min_impurity_decrease >= 0.0) || !self.min_impurity_decrease.is_finite() {
            return Err(XaiError::InvalidParams(
                "min_impurity_decrease must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature_index: usize,
        threshold: f64,
        left: usize,
        right: usize,
        n_samples: usize,
        /// Node variance minus the sample-weighted variance of its children.
        impurity_decrease: f64,
    },
    Leaf {
        value: f64,
        n_samples: usize,
    },
}

impl Node {
    pub fn n_samples(&self) -> usize {
        match *self {
            Node::Split { n_samples, .. } | Node::Leaf { n_samples, .. } => n_samples,
        }
    }
}

/// A fitted tree. Nodes are stored in pre-order; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    n_features: usize,
    nodes: Vec<Node>,
}

/// The best split of a set of rows, as chosen by [`best_split`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitChoice {
    pub feature_index: usize,
    pub threshold: f64,
    /// Reduction in SSE.
    pub gain: f64,
}

impl RegressionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    pub fn n_splits(&self) -> usize {
        self.nodes.len() - self.n_leaves()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Index into [`nodes`](Self::nodes) of the leaf that `row` lands in.
    pub fn leaf_index(&self, row: &[f64]) -> Result<usize, XaiError> {
        if row.len() != self.n_features {
            return Err(XaiError::DimensionMismatch {
                expected: self.n_features,
                found: row.len(),
            });
        }
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { .. } => return Ok(i),
                Node::Split {
                    feature_index,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if row[feature_index] <= threshold { left } else { right },
            }
        }
    }

    pub fn predict(&self, row: &[f64]) -> Result<f64, XaiError> {
        match self.nodes[self.leaf_index(row)?] {
            Node::Leaf { value, .. } => Ok(value),
            Node::Split { .. } => unreachable!("leaf_index returns leaves"),
        }
    }

    pub fn predict_matrix(&self, m: &FeatureMatrix) -> Result<Vec<f64>, XaiError> {
        m.rows().iter().map(|row| self.predict(row)).collect()
    }
}

pub fn fit_tree(m: &FeatureMatrix, params: &TreeParams) -> Result<RegressionTree, XaiError> {
    params.validate()?;
    if m.n_rows() < 1 {
        return Err(XaiError::InsufficientData);
    }
    let mut builder = Builder {
        rows: m.rows(),
        target: m.target(),
        n_features: m.n_features(),
        params,
        nodes: Vec::new(),
    };
    let indices: Vec<usize> = (0..m.n_rows()).collect();
    builder.grow(indices, 0);
    Ok(RegressionTree {
        n_features: m.n_features(),
        nodes: builder.nodes,
    })
}

struct Builder<'a> {
    rows: &'a [Vec<f64>],
    target: &'a [f64],
    n_features: usize,
    params: &'a TreeParams,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn grow(&mut self, indices: Vec<usize>, depth: usize) -> usize {
        let n = indices.len();
        let id = self.nodes.len();
        let first = self.target[indices[0]];
        let constant = indices.iter().all(|&i| self.target[i] == first);

        let leaf = |target: &[f64]| Node::Leaf {
            // A pure node predicts its value exactly rather than a rounded mean.
            value: if constant {
                first
            } else {
                indices.iter().map(|&i| target[i]).sum::<f64>() / n as f64
            },
            n_samples: n,
        };

        if constant || depth >= self.params.max_depth || n < 2 * self.params.min_samples_leaf {
            self.nodes.push(leaf(self.target));
            return id;
        }
        let Some(choice) = best_split(
            self.rows,
            self.target,
            &indices,
            self.n_features,
            self.params.min_samples_leaf,
        ) else {
            self.nodes.push(leaf(self.target));
            return id;
        };
        let impurity_decrease = choice.gain / n as f64;
        if impurity_decrease < self.params.min_impurity_decrease {
            self.nodes.push(leaf(self.target));
            return id;
        }

        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.rows[i][choice.feature_index] <= choice.threshold);

        // Placeholder, patched once the children have ids.
        self.nodes.push(Node::Leaf {
            value: 0.0,
            n_samples: n,
        });
        let left = self.grow(left_idx, depth + 1);
        let right = self.grow(right_idx, depth + 1);
        self.nodes[id] = Node::Split {
            feature_index: choice.feature_index,
            threshold: choice.threshold,
            left,
            right,
            n_samples: n,
            impurity_decrease,
        };
        id
    }
}

/// Midpoint of two consecutive distinct sorted values, kept strictly below
/// `hi` so the partition is preserved when the two are adjacent floats.
pub fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi || !mid.is_finite() {
        lo
    } else {
        mid
    }
}

/// Best variance-reducing split of `indices`, or `None` when no candidate
/// leaves `min_samples_leaf` rows on both sides.
pub fn best_split(
    rows: &[Vec<f64>],
    target: &[f64],
    indices: &[usize],
    n_features: usize,
    min_samples_leaf: usize,
) -> Option<SplitChoice> {
    let n = indices.len();
    if n < 2 {
        return None;
    }
    let mean = indices.iter().map(|&i| target[i]).sum::<f64>() / n as f64;
    let centered = |i: usize| target[i] - mean;
    let total: f64 = indices.iter().map(|&i| centered(i)).sum();
    let node_sse: f64 = indices.iter().map(|&i| centered(i).powi(2)).sum();
    let base = total * total / n as f64;

    let mut candidates: Vec<SplitChoice> = Vec::new();
    let mut order = indices.to_vec();
    for feature in 0..n_features {
        order.sort_by(|&a, &b| rows[a][feature].total_cmp(&rows[b][feature]).then(a.cmp(&b)));
        let mut left_sum = 0.0;
        for pos in 1..n {
            left_sum += centered(order[pos - 1]);
            let lo = rows[order[pos - 1]][feature];
            let hi = rows[order[pos]][feature];
            if lo == hi || pos < min_samples_leaf || n - pos < min_samples_leaf {
                continue;
            }
            let right_sum = total - left_sum;
            let gain = left_sum * left_sum / pos as f64 + right_sum * right_sum / (n - pos) as f64
                - base;
            candidates.push(SplitChoice {
                feature_index: feature,
                threshold: midpoint(lo, hi),
                gain: gain.max(0.0),
            });
        }
    }

    let best = candidates.iter().map(|c| c.gain).fold(f64::NEG_INFINITY, f64::max);
    let tolerance = TIE_TOLERANCE * node_sse;
    candidates.into_iter().find(|c| c.gain >= best - tolerance)
}
