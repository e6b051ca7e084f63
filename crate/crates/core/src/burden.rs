//! Household energy burden: the share of median income spent on electricity
//! and heating, and the calculator that compares a locale against the state
//! average.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::Snapshot;

/// Default state-average burden threshold, in percent.
pub const DEFAULT_STATE_AVERAGE_PCT: f64 = 6.0;

pub const OVERBURDENED_MESSAGE: &str = "Overburdened";
pub const BELOW_AVERAGE_MESSAGE: &str = "Below State Average";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BurdenError {
    #[error("median household income must be positive, got {0}")]
    NonPositiveIncome(f64),
    #[error("unknown locale {0:?}")]
    UnknownLocale(String),
    #[error("invalid rate schedule: {0}")]
    InvalidRates(String),
}

/// Energy prices and the state-average burden threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSchedule {
    /// USD per kWh.
    pub electricity_rate: f64,
    /// USD per therm.
    pub heating_rate: f64,
    /// Percent of income above which a locale is overburdened.
    #[serde(default = "default_state_average")]
    pub state_average_burden_pct: f64,
}

fn default_state_average() -> f64 {
    DEFAULT_STATE_AVERAGE_PCT
}

impl RateSchedule {
    pub fn new(electricity_rate: f64, heating_rate: f64, state_average_burden_pct: f64) -> Self {
        RateSchedule {
            electricity_rate,
            heating_rate,
            state_average_burden_pct,
        }
    }

    pub fn validate(&self) -> Result<(), BurdenError> {
        let fields = [
            ("electricity_rate", self.electricity_rate),
            ("heating_rate", self.heating_rate),
            ("state_average_burden_pct", self.state_average_burden_pct),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(BurdenError::InvalidRates(format!(
                    "{name} must be a finite non-negative number, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Same schedule with a different threshold.
    pub fn with_state_average(mut self, pct: f64) -> Self {
        self.state_average_burden_pct = pct;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BurdenStatus {
    Overburdened,
    BelowStateAverage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurdenReport {
    pub locale_id: String,
    pub energy_burden_pct: f64,
    pub state_average_pct: f64,
    pub status: BurdenStatus,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tips: Option<Vec<String>>,
}

/// Percentage of income spent on energy:
/// `(kwh * electricity_rate + therms * heating_rate) / income * 100`.
///
/// The result is not rounded.
pub fn compute_energy_burden(
    annual_kwh: f64,
    electricity_rate: f64,
    annual_therms: f64,
    heating_rate: f64,
    median_income: f64,
) -> Result<f64, BurdenError> {
    if !(median_income > 0.0) {
        return Err(BurdenError::NonPositiveIncome(median_income));
    }
    let electricity_price = annual_kwh * electricity_rate;
    let heating_price = annual_therms * heating_rate;
    let total_price = electricity_price + heating_price;
    Ok(total_price / median_income * 100.0)
}

/// Run the burden calculator for one locale of the snapshot, using the
/// snapshot's own rate schedule.
pub fn evaluate_zip(zip: &str, snapshot: &Snapshot) -> Result<BurdenReport, BurdenError> {
    evaluate_zip_with_rates(zip, snapshot, snapshot.rates())
}

/// Like [`evaluate_zip`] but with an explicit rate schedule, e.g. when an
/// operator overrides the state average.
pub fn evaluate_zip_with_rates(
    zip: &str,
    snapshot: &Snapshot,
    rates: &RateSchedule,
) -> Result<BurdenReport, BurdenError> {
    let record = snapshot
        .record(zip)
        .ok_or_else(|| BurdenError::UnknownLocale(zip.to_string()))?;

    let burden = compute_energy_burden(
        record.annual_kwh_per_household,
        rates.electricity_rate,
        record.annual_therms_per_household,
        rates.heating_rate,
        record.median_household_income,
    )?;

    // Strictly greater: a locale exactly at the average is not overburdened.
    let (status, message, tips) = if burden > rates.state_average_burden_pct {
        (
            BurdenStatus::Overburdened,
            OVERBURDENED_MESSAGE,
            Some(tips_catalog()),
        )
    } else {
        (BurdenStatus::BelowStateAverage, BELOW_AVERAGE_MESSAGE, None)
    };

    Ok(BurdenReport {
        locale_id: record.locale_id.clone(),
        energy_burden_pct: burden,
        state_average_pct: rates.state_average_burden_pct,
        status,
        message: message.to_string(),
        tips,
    })
}

const TIPS: &[&str] = &[
    "Schedule a free or low-cost home energy audit to find where heat and electricity are being lost.",
    "Seal air leaks around windows, doors and attic hatches, and add insulation where the audit recommends it.",
    "Lower the thermostat setpoint in winter and raise it in summer; a programmable or smart thermostat automates this.",
    "Replace incandescent bulbs with LEDs and unplug or power-strip idle electronics.",
    "Check eligibility for utility bill assistance such as LIHEAP and income-qualified energy efficiency programs.",
    "Ask your utility about budget billing and time-of-use rates to smooth and reduce monthly costs.",
    "When replacing appliances or heating equipment, choose ENERGY STAR models and look for available rebates.",
    "Renters: ask your landlord about weatherization programs that cover rental properties at no cost to tenants.",
];

/// Fixed, ordered advice shown to overburdened households.
pub fn tips_catalog() -> Vec<String> {
    TIPS.iter().map(|tip| tip.to_string()).collect()
}
