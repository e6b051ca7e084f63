use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::tree::{Node, RegressionTree};
use super::XaiError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureWeight {
    pub feature: String,
    pub weight: f64,
}

/// Normalized impurity-decrease importance, sorted by descending weight and
/// then ascending feature name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureImportance(pub Vec<FeatureWeight>);

impl FeatureImportance {
    pub fn weights(&self) -> &[FeatureWeight] {
        &self.0
    }

    pub fn get(&self, feature: &str) -> Option<f64> {
        self.0.iter().find(|w| w.feature == feature).map(|w| w.weight)
    }

    pub fn total(&self) -> f64 {
        self.0.iter().map(|w| w.weight).sum()
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|w| w.weight == 0.0)
    }

    /// The `k` highest-weighted feature names.
    pub fn top(&self, k: usize) -> Vec<&str> {
        self.0.iter().take(k).map(|w| w.feature.as_str()).collect()
    }
}

/// Sum, per feature, of `n_samples / n_total * impurity_decrease` over the
/// splits on that feature, normalized to sum to one. A tree without any
/// variance-reducing split yields all zeros.
pub fn feature_importance(
    tree: &RegressionTree,
    feature_names: &[String],
) -> Result<FeatureImportance, XaiError> {
    if feature_names.len() != tree.n_features() {
        return Err(XaiError::DimensionMismatch {
            expected: tree.n_features(),
            found: feature_names.len(),
        });
    }
    let n_total = tree.root().n_samples() as f64;
    let mut raw = vec![0.0; feature_names.len()];
    for node in tree.nodes() {
        if let Node::Split {
            feature_index,
            n_samples,
            impurity_decrease,
            ..
        } = *node
        {
            raw[feature_index] += n_samples as f64 / n_total * impurity_decrease;
        }
    }
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        for w in &mut raw {
            *w /= total;
        }
    } else {
        raw.iter_mut().for_each(|w| *w = 0.0);
    }

    let mut weights: Vec<FeatureWeight> = feature_names
        .iter()
        .zip(raw)
        .map(|(name, weight)| FeatureWeight {
            feature: name.clone(),
            weight,
        })
        .collect();
    weights.sort_by(|a, b| {
        b.weight
            .partial_cmp(&a.weight)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.feature.cmp(&b.feature))
    });
    Ok(FeatureImportance(weights))
}
