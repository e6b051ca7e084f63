//! Explainable analytics over locale snapshots: a deterministic regression
//! tree for annual consumption, impurity-based feature importance, fit
//! metrics, and Pearson correlation matrices between feature groups.

mod features;
mod importance;
mod metrics;
mod pcc;
pub mod tree;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use features::{
    build_feature_matrix, FeatureMatrix, FEATURE_NAMES, INCOME_FEATURES, RACE_FEATURES,
    TENURE_FEATURES, YEAR_BUILT_FEATURES,
};
pub use importance::{feature_importance, FeatureImportance, FeatureWeight};
pub use metrics::{r_squared, rmse, ModelMetrics};
pub use pcc::{pcc_matrix, pearson, PccMatrix};
pub use tree::{fit_tree, Node, RegressionTree, TreeParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum XaiError {
    #[error("not enough data")]
    InsufficientData,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("expected {expected} features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("actual values have zero variance")]
    ZeroVarianceTarget,
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("invalid tree parameters: {0}")]
    InvalidParams(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

/// A tree fitted to a snapshot together with its explanation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub params: TreeParams,
    pub tree: RegressionTree,
    pub importance: FeatureImportance,
    pub metrics: ModelMetrics,
}

impl FittedModel {
    /// Fit on every row of `m` and score on the same rows.
    pub fn fit(m: &FeatureMatrix, params: &TreeParams) -> Result<Self, XaiError> {
        let tree = fit_tree(m, params)?;
        let importance = feature_importance(&tree, m.feature_names())?;
        let predicted = tree.predict_matrix(m)?;
        let metrics = if m.n_rows() >= 2 {
            ModelMetrics::evaluate(&predicted, m.target())?
        } else {
            ModelMetrics {
                r_squared: None,
                rmse: (predicted[0] - m.target()[0]).abs(),
                n_samples: 1,
            }
        };
        Ok(FittedModel {
            params: *params,
            tree,
            importance,
            metrics,
        })
    }
}
