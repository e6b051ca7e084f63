//! Canonical CSV tables in, validated [`Snapshot`]s out.
//!
//! Each census or utility dataset arrives as a simplified CSV keyed by a
//! five-character `locale_id`:
//!
//! | kind | census table | file | required columns |
//! |------|--------------|------|------------------|
//! | Race | B02001 | `race.csv` | white, black, asian, other, total_population |
//! | HispanicOrigin | B03003 | `hispanic.csv` | hispanic |
//! | YearBuilt | B25034 | `year_built.csv` | pre1960, b1960_1979, b1980_1999, b2000_plus |
//! | IncomeBins | B19001 | `income_bins.csv` | low, moderate, high |
//! | IncomeQuintiles | B19081 | `income_quintiles.csv` | median_household_income |
//! | Tenure | B25003 | `tenure.csv` | owner_occupied, renter_occupied |
//! | UtilityEnergy | utility data | `utility_energy.csv` | annual_kwh_per_household, annual_therms_per_household |
//! | ProgramParticipation | program data | `participation.csv` | participation_rate |
//!
//! Any table may also carry a `name` column with a display name.

mod join;
mod record;
mod snapshot;
mod table;

use std::fs;
use std::path::Path;

use thiserror::Error;

pub use join::{join_tables, JoinOutcome};
pub use record::{IncomeBinCounts, LocaleRecord, RaceCounts, YearBuiltCounts};
pub use snapshot::{load_snapshot, save_snapshot, Snapshot, FORMAT_VERSION};
pub use table::{is_valid_locale_id, parse_table, RawTable, Row, TableKind, LOCALE_COLUMN};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("column {0:?} appears more than once")]
    DuplicateColumn(String),
    #[error("duplicate locale {0:?}")]
    DuplicateLocale(String),
    #[error("row {row}: invalid locale id {value:?} (expected 5 alphanumeric characters)")]
    InvalidLocaleId { row: usize, value: String },
    #[error("row {row}, column {column:?}: {value:?} is not a finite number")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}, column {column:?}: negative value {value}")]
    NegativeValue {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("{0} table has no data rows")]
    EmptyTable(TableKind),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("no {0} table supplied")]
    MissingTableKind(TableKind),
    #[error("more than one {0} table supplied")]
    DuplicateTableKind(TableKind),
    #[error("no locale appears in every table")]
    NoCommonLocales,
    #[error("snapshot has no records")]
    EmptySnapshot,
    #[error("invalid rate schedule: {0}")]
    InvalidRates(String),
    #[error("locale {locale_id:?}: {reason}")]
    IntegrityViolation { locale_id: String, reason: String },
    #[error("unsupported snapshot format version {found:?} (expected {expected})")]
    FormatVersionMismatch { expected: u32, found: Option<u64> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PartialEq for IngestError {
    fn eq(&self, other: &Self) -> bool {
        use IngestError::*;
        match (self, other) {
            (Io(a), Io(b)) => a.kind() == b.kind() && a.to_string() == b.to_string(),
            (Io(_), _) | (_, Io(_)) => false,
            // Every other variant carries plain data; compare the rendered form.
            _ => std::mem::discriminant(self) == std::mem::discriminant(other)
                && self.to_string() == other.to_string(),
        }
    }
}

/// Parse every canonical table in `dir`. Errors carry the offending file name.
pub fn read_data_dir(dir: &Path) -> Result<Vec<RawTable>, DataDirError> {
    TableKind::ALL
        .iter()
        .map(|&kind| {
            let path = dir.join(kind.file_name());
            let file = fs::File::open(&path).map_err(|e| DataDirError {
                file: kind.file_name().to_string(),
                source: e.into(),
            })?;
            parse_table(file, kind).map_err(|source| DataDirError {
                file: kind.file_name().to_string(),
                source,
            })
        })
        .collect()
}

#[derive(Debug, Error)]
#[error("{file}")]
pub struct DataDirError {
    pub file: String,
    #[source]
    pub source: IngestError,
}
