use std::collections::{BTreeMap, BTreeSet};

use super::record::{IncomeBinCounts, LocaleRecord, RaceCounts, YearBuiltCounts};
use super::table::{RawTable, TableKind};
use super::IngestError;

/// Result of an inner join: records sorted by locale id, plus how many
/// locales appeared in at least one table but not in all of them.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinOutcome {
    pub records: Vec<LocaleRecord>,
    pub dropped: usize,
}

/// Inner-join one table of every kind on `locale_id`.
///
/// The output does not depend on the order of `tables`. Locales missing from
/// any table are dropped and counted; no values are imputed.
pub fn join_tables(tables: &[RawTable]) -> Result<JoinOutcome, IngestError> {
    let mut by_kind: BTreeMap<TableKind, &RawTable> = BTreeMap::new();
    for table in tables {
        if by_kind.insert(table.kind, table).is_some() {
            return Err(IngestError::DuplicateTableKind(table.kind));
        }
    }
    for kind in TableKind::ALL {
        if !by_kind.contains_key(&kind) {
            return Err(IngestError::MissingTableKind(kind));
        }
    }

    let union: BTreeSet<&String> = by_kind.values().flat_map(|t| t.rows.keys()).collect();
    let common: Vec<&String> = union
        .iter()
        .copied()
        .filter(|id| by_kind.values().all(|t| t.rows.contains_key(*id)))
        .collect();
    if common.is_empty() {
        return Err(IngestError::NoCommonLocales);
    }

    let get = |kind: TableKind, id: &str, column: &str| -> f64 {
        by_kind[&kind]
            .value(id, column)
            .expect("parsed tables carry every required column")
    };

    let mut records = Vec::with_capacity(common.len());
    for id in &common {
        let id = id.as_str();
        // First table (in kind order) with a display name wins.
        let name = by_kind
            .values()
            .find_map(|t| t.names.get(id))
            .cloned()
            .unwrap_or_else(|| id.to_string());

        let record = LocaleRecord {
            locale_id: id.to_string(),
            name,
            race_counts: RaceCounts {
                white: get(TableKind::Race, id, "white"),
                black: get(TableKind::Race, id, "black"),
                asian: get(TableKind::Race, id, "asian"),
                other: get(TableKind::Race, id, "other"),
            },
            hispanic_count: get(TableKind::HispanicOrigin, id, "hispanic"),
            total_population: get(TableKind::Race, id, "total_population"),
            owner_occupied: get(TableKind::Tenure, id, "owner_occupied"),
            renter_occupied: get(TableKind::Tenure, id, "renter_occupied"),
            year_built_counts: YearBuiltCounts {
                pre1960: get(TableKind::YearBuilt, id, "pre1960"),
                from_1960_to_1979: get(TableKind::YearBuilt, id, "b1960_1979"),
                from_1980_to_1999: get(TableKind::YearBuilt, id, "b1980_1999"),
                from_2000: get(TableKind::YearBuilt, id, "b2000_plus"),
            },
            income_bin_counts: IncomeBinCounts {
                low: get(TableKind::IncomeBins, id, "low"),
                moderate: get(TableKind::IncomeBins, id, "moderate"),
                high: get(TableKind::IncomeBins, id, "high"),
            },
            median_household_income: get(TableKind::IncomeQuintiles, id, "median_household_income"),
            annual_kwh_per_household: get(TableKind::UtilityEnergy, id, "annual_kwh_per_household"),
            annual_therms_per_household: get(
                TableKind::UtilityEnergy,
                id,
                "annual_therms_per_household",
            ),
            program_participation_rate: get(TableKind::ProgramParticipation, id, "participation_rate"),
        };
        record
            .check()
            .map_err(|reason| IngestError::IntegrityViolation {
                locale_id: id.to_string(),
                reason,
            })?;
        records.push(record);
    }

    Ok(JoinOutcome {
        dropped: union.len() - records.len(),
        records,
    })
}
