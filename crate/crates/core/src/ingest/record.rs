use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaceCounts {
    pub white: f64,
    pub black: f64,
    pub asian: f64,
    pub other: f64,
}

/// Housing units by era of construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearBuiltCounts {
    pub pre1960: f64,
    #[serde(rename = "1960_1979")]
    pub from_1960_to_1979: f64,
    #[serde(rename = "1980_1999")]
    pub from_1980_to_1999: f64,
    #[serde(rename = "2000_plus")]
    pub from_2000: f64,
}

impl YearBuiltCounts {
    pub fn total(&self) -> f64 {
        self.pre1960 + self.from_1960_to_1979 + self.from_1980_to_1999 + self.from_2000
    }
}

/// Households by income band. Band thresholds belong to the source data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncomeBinCounts {
    pub low: f64,
    pub moderate: f64,
    pub high: f64,
}

impl IncomeBinCounts {
    pub fn total(&self) -> f64 {
        self.low + self.moderate + self.high
    }
}

/// Everything known about one locale after joining all input tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocaleRecord {
    pub locale_id: String,
    pub name: String,
    pub race_counts: RaceCounts,
    pub hispanic_count: f64,
    pub total_population: f64,
    pub owner_occupied: f64,
    pub renter_occupied: f64,
    pub year_built_counts: YearBuiltCounts,
    pub income_bin_counts: IncomeBinCounts,
    /// USD per year.
    pub median_household_income: f64,
    /// kWh per household per year.
    pub annual_kwh_per_household: f64,
    /// Therms per household per year.
    pub annual_therms_per_household: f64,
    /// Fraction of households enrolled in efficiency programs.
    pub program_participation_rate: f64,
}

impl LocaleRecord {
    pub fn occupied_units(&self) -> f64 {
        self.owner_occupied + self.renter_occupied
    }

    /// Check the record invariants, returning a description of the first
    /// violation.
    pub fn check(&self) -> Result<(), String> {
        let counts = [
            ("white", self.race_counts.white),
            ("black", self.race_counts.black),
            ("asian", self.race_counts.asian),
            ("other", self.race_counts.other),
            ("hispanic_count", self.hispanic_count),
            ("total_population", self.total_population),
            ("owner_occupied", self.owner_occupied),
            ("renter_occupied", self.renter_occupied),
            ("pre1960", self.year_built_counts.pre1960),
            ("1960_1979", self.year_built_counts.from_1960_to_1979),
            ("1980_1999", self.year_built_counts.from_1980_to_1999),
            ("2000_plus", self.year_built_counts.from_2000),
            ("low", self.income_bin_counts.low),
            ("moderate", self.income_bin_counts.moderate),
            ("high", self.income_bin_counts.high),
            ("median_household_income", self.median_household_income),
            ("annual_kwh_per_household", self.annual_kwh_per_household),
            ("annual_therms_per_household", self.annual_therms_per_household),
            ("program_participation_rate", self.program_participation_rate),
        ];
        for (name, value) in counts {
            if !value.is_finite() || value < 0.0 {
                return Err(format!("{name} must be finite and non-negative, got {value}"));
            }
        }
        if !super::is_valid_locale_id(&self.locale_id) {
            return Err(format!("invalid locale id {:?}", self.locale_id));
        }
        if self.occupied_units() <= 0.0 {
            return Err("owner_occupied + renter_occupied must be positive".into());
        }
        if self.total_population <= 0.0 {
            return Err("total_population must be positive".into());
        }
        let race = self.race_counts;
        for (name, value) in [
            ("white", race.white),
            ("black", race.black),
            ("asian", race.asian),
            ("other", race.other),
            ("hispanic", self.hispanic_count),
        ] {
            if value > self.total_population {
                return Err(format!(
                    "{name} count {value} exceeds total_population {}",
                    self.total_population
                ));
            }
        }
        if self.year_built_counts.total() <= 0.0 {
            return Err("year-built counts must not all be zero".into());
        }
        if self.income_bin_counts.total() <= 0.0 {
            return Err("income bin counts must not all be zero".into());
        }
        if self.median_household_income <= 0.0 {
            return Err("median_household_income must be positive".into());
        }
        if self.program_participation_rate > 1.0 {
            return Err(format!(
                "program_participation_rate must be in [0, 1], got {}",
                self.program_participation_rate
            ));
        }
        Ok(())
    }
}
