use serde::{Deserialize, Serialize};

use super::XaiError;

fn check_lengths(predicted: &[f64], actual: &[f64]) -> Result<(), XaiError> {
    if predicted.len() != actual.len() {
        return Err(XaiError::LengthMismatch {
            left: predicted.len(),
            right: actual.len(),
        });
    }
    if actual.len() < 2 {
        return Err(XaiError::InsufficientData);
    }
    Ok(())
}

/// Coefficient of determination, `1 - SS_res / SS_tot`.
pub fn r_squared(predicted: &[f64], actual: &[f64]) -> Result<f64, XaiError> {
    check_lengths(predicted, actual)?;
    let first = actual[0];
    if actual.iter().all(|&a| a == first) {
        return Err(XaiError::ZeroVarianceTarget);
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    let ss_res: f64 = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (a - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Root of the mean squared error, in target units.
pub fn rmse(predicted: &[f64], actual: &[f64]) -> Result<f64, XaiError> {
    check_lengths(predicted, actual)?;
    let mse = predicted
        .iter()
        .zip(actual)
        .map(|(p, a)| (a - p).powi(2))
        .sum::<f64>()
        / actual.len() as f64;
    Ok(mse.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelMetrics {
    /// `None` when the actual values have zero variance.
    pub r_squared: Option<f64>,
    pub rmse: f64,
    pub n_samples: usize,
}

impl ModelMetrics {
    pub fn evaluate(predicted: &[f64], actual: &[f64]) -> Result<Self, XaiError> {
        let rmse = rmse(predicted, actual)?;
        let r_squared = match r_squared(predicted, actual) {
            Ok(r2) => Some(r2),
            Err(XaiError::ZeroVarianceTarget) => None,
            Err(e) => return Err(e),
        };
        Ok(ModelMetrics {
            r_squared,
            rmse,
            n_samples: actual.len(),
        })
    }
}
