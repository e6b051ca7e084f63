use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::XaiError;
use crate::ingest::{LocaleRecord, Snapshot};

/// Column order of [`build_feature_matrix`].
pub const FEATURE_NAMES: [&str; 16] = [
    "white_share",
    "black_share",
    "asian_share",
    "other_share",
    "hispanic_share",
    "renter_share",
    "owner_share",
    "pre1960_share",
    "built_1960_1979_share",
    "built_1980_1999_share",
    "built_2000_plus_share",
    "low_income_share",
    "moderate_income_share",
    "high_income_share",
    "median_household_income",
    "participation_rate",
];

pub const RACE_FEATURES: [&str; 5] = [
    "white_share",
    "black_share",
    "asian_share",
    "other_share",
    "hispanic_share",
];
pub const TENURE_FEATURES: [&str; 2] = ["renter_share", "owner_share"];
pub const INCOME_FEATURES: [&str; 3] = [
    "low_income_share",
    "moderate_income_share",
    "high_income_share",
];
pub const YEAR_BUILT_FEATURES: [&str; 4] = [
    "pre1960_share",
    "built_1960_1979_share",
    "built_1980_1999_share",
    "built_2000_plus_share",
];

/// Dense row-major design matrix with a regression target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    feature_names: Vec<String>,
    rows: Vec<Vec<f64>>,
    target: Vec<f64>,
    row_ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        target: Vec<f64>,
        row_ids: Vec<String>,
    ) -> Result<Self, XaiError> {
        if rows.is_empty() {
            return Err(XaiError::InsufficientData);
        }
        if feature_names.is_empty() {
            return Err(XaiError::InvalidMatrix("at least one feature is required".into()));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(XaiError::InvalidMatrix(format!("duplicate feature name {name:?}")));
            }
        }
        if target.len() != rows.len() || row_ids.len() != rows.len() {
            return Err(XaiError::LengthMismatch {
                left: rows.len(),
                right: if target.len() != rows.len() { target.len() } else { row_ids.len() },
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != feature_names.len() {
                return Err(XaiError::DimensionMismatch {
                    expected: feature_names.len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) || !target[i].is_finite() {
                return Err(XaiError::InvalidMatrix(format!("non-finite value in row {i}")));
            }
        }
        Ok(FeatureMatrix {
            feature_names,
            rows,
            target,
            row_ids,
        })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[index]).collect()
    }

    pub fn column_by_name(&self, name: &str) -> Result<Vec<f64>, XaiError> {
        self.feature_index(name)
            .map(|i| self.column(i))
            .ok_or_else(|| XaiError::UnknownFeature(name.to_string()))
    }
}

fn features_of(record: &LocaleRecord) -> [f64; 16] {
    let population = record.total_population;
    let units = record.occupied_units();
    let built = record.year_built_counts;
    let built_total = built.total();
    let income = record.income_bin_counts;
    let households = income.total();
    [
        record.race_counts.white / population,
        record.race_counts.black / population,
        record.race_counts.asian / population,
        record.race_counts.other / population,
        record.hispanic_count / population,
        record.renter_occupied / units,
        record.owner_occupied / units,
        built.pre1960 / built_total,
        built.from_1960_to_1979 / built_total,
        built.from_1980_to_1999 / built_total,
        built.from_2000 / built_total,
        income.low / households,
        income.moderate / households,
        income.high / households,
        record.median_household_income,
        record.program_participation_rate,
    ]
}

/// One row per locale (in snapshot order) of demographic, housing and
/// income shares; the target is annual kWh per household.
pub fn build_feature_matrix(snapshot: &Snapshot) -> FeatureMatrix {
    let records = snapshot.records();
    FeatureMatrix {
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        rows: records.iter().map(|r| features_of(r).to_vec()).collect(),
        target: records.iter().map(|r| r.annual_kwh_per_household).collect(),
        row_ids: records.iter().map(|r| r.locale_id.clone()).collect(),
    }
}
