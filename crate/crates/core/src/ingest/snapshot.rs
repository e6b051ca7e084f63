use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::record::LocaleRecord;
use super::IngestError;
use crate::burden::RateSchedule;

pub const FORMAT_VERSION: u32 = 1;

/// The validated, immutable join of all input tables plus the rate schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    records: Vec<LocaleRecord>,
    rates: RateSchedule,
    created_at: DateTime<Utc>,
    source_note: String,
}

impl Snapshot {
    /// Build a snapshot stamped with the current time. Records are sorted by
    /// locale id.
    pub fn new(
        records: Vec<LocaleRecord>,
        rates: RateSchedule,
        source_note: impl Into<String>,
    ) -> Result<Self, IngestError> {
        Self::with_created_at(records, rates, source_note, Utc::now())
    }

    pub fn with_created_at(
        mut records: Vec<LocaleRecord>,
        rates: RateSchedule,
        source_note: impl Into<String>,
        created_at: DateTime<Utc>,
    ) -> Result<Self, IngestError> {
        records.sort_by(|a, b| a.locale_id.cmp(&b.locale_id));
        let snapshot = Snapshot {
            records,
            rates,
            created_at,
            source_note: source_note.into(),
        };
        snapshot.validate()?;
        Ok(snapshot)
    }

    fn validate(&self) -> Result<(), IngestError> {
        if self.records.is_empty() {
            return Err(IngestError::EmptySnapshot);
        }
        self.rates
            .validate()
            .map_err(|e| IngestError::InvalidRates(e.to_string()))?;
        for pair in self.records.windows(2) {
            // Sorted, so duplicates are adjacent; strict order also catches
            // unsorted documents on load.
            if pair[0].locale_id >= pair[1].locale_id {
                return Err(IngestError::IntegrityViolation {
                    locale_id: pair[1].locale_id.clone(),
                    reason: "locale ids must be unique and sorted".into(),
                });
            }
        }
        for record in &self.records {
            record
                .check()
                .map_err(|reason| IngestError::IntegrityViolation {
                    locale_id: record.locale_id.clone(),
                    reason,
                })?;
        }
        Ok(())
    }

    pub fn records(&self) -> &[LocaleRecord] {
        &self.records
    }

    pub fn record(&self, locale_id: &str) -> Option<&LocaleRecord> {
        self.records
            .binary_search_by(|r| r.locale_id.as_str().cmp(locale_id))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn rates(&self) -> &RateSchedule {
        &self.rates
    }

    pub fn created_at(&self) -> DateTime<Utc> {
        self.created_at
    }

    pub fn source_note(&self) -> &str {
        &self.source_note
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Serialize)]
struct DocumentRef<'a> {
    format_version: u32,
    created_at: DateTime<Utc>,
    source_note: &'a str,
    rates: &'a RateSchedule,
    records: &'a [LocaleRecord],
}

#[derive(Deserialize)]
struct Document {
    created_at: DateTime<Utc>,
    source_note: String,
    rates: RateSchedule,
    records: Vec<LocaleRecord>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: Option<u64>,
}

pub fn save_snapshot(snapshot: &Snapshot, destination: &Path) -> Result<(), IngestError> {
    let doc = DocumentRef {
        format_version: FORMAT_VERSION,
        created_at: snapshot.created_at,
        source_note: &snapshot.source_note,
        rates: &snapshot.rates,
        records: &snapshot.records,
    };
    let mut out = BufWriter::new(fs::File::create(destination)?);
    serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn load_snapshot(source: &Path) -> Result<Snapshot, IngestError> {
    let reader = BufReader::new(fs::File::open(source)?);
    let value: serde_json::Value = serde_json::from_reader(reader).map_err(io::Error::from)?;

    let probe: VersionProbe = serde_json::from_value(value.clone()).unwrap_or(VersionProbe {
        format_version: None,
    });
    if probe.format_version != Some(u64::from(FORMAT_VERSION)) {
        return Err(IngestError::FormatVersionMismatch {
            expected: FORMAT_VERSION,
            found: probe.format_version,
        });
    }

    let doc: Document = serde_json::from_value(value).map_err(io::Error::from)?;
    let snapshot = Snapshot {
        records: doc.records,
        rates: doc.rates,
        created_at: doc.created_at,
        source_note: doc.source_note,
    };
    snapshot.validate()?;
    Ok(snapshot)
}
