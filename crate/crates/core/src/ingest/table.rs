use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use super::IngestError;

pub const LOCALE_COLUMN: &str = "locale_id";
pub const NAME_COLUMN: &str = "name";

/// The canonical input tables, one per census table or utility dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TableKind {
    /// B02001.
    Race,
    /// B03003.
    HispanicOrigin,
    /// B25034.
    YearBuilt,
    /// B19001, collapsed to low/moderate/high.
    IncomeBins,
    /// B19081; only the median household income is used.
    IncomeQuintiles,
    /// B25003.
    Tenure,
    UtilityEnergy,
    ProgramParticipation,
}

impl TableKind {
    pub const ALL: [TableKind; 8] = [
        TableKind::Race,
        TableKind::HispanicOrigin,
        TableKind::YearBuilt,
        TableKind::IncomeBins,
        TableKind::IncomeQuintiles,
        TableKind::Tenure,
        TableKind::UtilityEnergy,
        TableKind::ProgramParticipation,
    ];

    pub fn required_columns(self) -> &'static [&'static str] {
        match self {
            TableKind::Race => &["white", "black", "asian", "other", "total_population"],
            TableKind::HispanicOrigin => &["hispanic"],
            TableKind::YearBuilt => &["pre1960", "b1960_1979", "b1980_1999", "b2000_plus"],
            TableKind::IncomeBins => &["low", "moderate", "high"],
            TableKind::IncomeQuintiles => &["median_household_income"],
            TableKind::Tenure => &["owner_occupied", "renter_occupied"],
            TableKind::UtilityEnergy => &["annual_kwh_per_household", "annual_therms_per_household"],
            TableKind::ProgramParticipation => &["participation_rate"],
        }
    }

    /// Canonical file name inside an ingest data directory.
    pub fn file_name(self) -> &'static str {
        match self {
            TableKind::Race => "race.csv",
            TableKind::HispanicOrigin => "hispanic.csv",
            TableKind::YearBuilt => "year_built.csv",
            TableKind::IncomeBins => "income_bins.csv",
            TableKind::IncomeQuintiles => "income_quintiles.csv",
            TableKind::Tenure => "tenure.csv",
            TableKind::UtilityEnergy => "utility_energy.csv",
            TableKind::ProgramParticipation => "participation.csv",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Locale ids are five ASCII alphanumerics (a zip code or county GEOID),
/// compared verbatim so leading zeros survive.
pub fn is_valid_locale_id(id: &str) -> bool {
    id.len() == 5 && id.bytes().all(|b| b.is_ascii_alphanumeric())
}

/// One row of a parsed table: the required columns of its kind, by name.
pub type Row = BTreeMap<String, f64>;

/// A validated table keyed by locale id.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub kind: TableKind,
    pub rows: BTreeMap<String, Row>,
    /// Display names from an optional `name` column.
    pub names: BTreeMap<String, String>,
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn value(&self, locale_id: &str, column: &str) -> Option<f64> {
        self.rows.get(locale_id)?.get(column).copied()
    }
}

/// Parse a canonical CSV table. Column order is irrelevant; columns other
/// than `locale_id`, `name` and the kind's required columns are ignored.
pub fn parse_table<R: Read>(input: R, kind: TableKind) -> Result<RawTable, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let headers = reader.headers().map_err(csv_error)?.clone();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in headers.iter().enumerate() {
        // Only the columns we read need to be unambiguous.
        if (name == LOCALE_COLUMN || name == NAME_COLUMN || kind.required_columns().contains(&name))
            && index.insert(name, i).is_some()
        {
            return Err(IngestError::DuplicateColumn(name.to_string()));
        }
    }

    let locale_idx = *index
        .get(LOCALE_COLUMN)
        .ok_or_else(|| IngestError::MissingColumn(LOCALE_COLUMN.to_string()))?;
    let name_idx = index.get(NAME_COLUMN).copied();
    let mut value_columns = Vec::with_capacity(kind.required_columns().len());
    for &column in kind.required_columns() {
        let idx = *index
            .get(column)
            .ok_or_else(|| IngestError::MissingColumn(column.to_string()))?;
        value_columns.push((column, idx));
    }

    let mut rows = BTreeMap::new();
    let mut names = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        // 1-based, counting the header as line 1.
        let line = i + 2;
        let locale_id = record.get(locale_idx).unwrap_or_default();
        if !is_valid_locale_id(locale_id) {
            return Err(IngestError::InvalidLocaleId {
                row: line,
                value: locale_id.to_string(),
            });
        }

        let mut row = Row::new();
        for &(column, idx) in &value_columns {
            let cell = record.get(idx).unwrap_or_default();
            let value: f64 = match cell.parse() {
                Ok(v) if f64::is_finite(v) => v,
                _ => {
                    return Err(IngestError::NonNumericCell {
                        row: line,
                        column: column.to_string(),
                        value: cell.to_string(),
                    })
                }
            };
            if value < 0.0 {
                return Err(IngestError::NegativeValue {
                    row: line,
                    column: column.to_string(),
                    value,
                });
            }
            // Normalize -0.0 so persisted values compare bit-identically.
            row.insert(column.to_string(), value + 0.0);
        }

        if rows.insert(locale_id.to_string(), row).is_some() {
            return Err(IngestError::DuplicateLocale(locale_id.to_string()));
        }
        if let Some(name) = name_idx.and_then(|idx| record.get(idx)) {
            if !name.is_empty() {
                names.insert(locale_id.to_string(), name.to_string());
            }
        }
    }

    if rows.is_empty() {
        return Err(IngestError::EmptyTable(kind));
    }
    Ok(RawTable { kind, rows, names })
}

fn csv_error(err: csv::Error) -> IngestError {
    IngestError::Csv(err.to_string())
}
