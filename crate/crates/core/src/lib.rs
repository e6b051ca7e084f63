//! Energy-equity analytics: locale ingestion, household energy burden, and
//! explainable models of consumption.

pub mod burden;
pub mod ingest;
pub mod xai;

pub use burden::{
    compute_energy_burden, evaluate_zip, tips_catalog, BurdenError, BurdenReport, BurdenStatus,
    RateSchedule,
};
pub use ingest::{load_snapshot, save_snapshot, IngestError, LocaleRecord, Snapshot};
pub use xai::{build_feature_matrix, FeatureMatrix, FittedModel, XaiError};
