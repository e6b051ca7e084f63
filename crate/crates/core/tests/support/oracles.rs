//! Reference computations and generators for tests. Nothing here calls into
//! the code paths it is used to check.
#![allow(dead_code)]

use chrono::{TimeZone, Utc};
use eeq_core::ingest::{IncomeBinCounts, LocaleRecord, RaceCounts, Snapshot, YearBuiltCounts};
use eeq_core::RateSchedule;
use rand::Rng;

/// Energy burden in percent, arranged differently from the library on
/// purpose so rounding paths differ.
pub fn burden_oracle(kwh: f64, elec_rate: f64, therms: f64, heat_rate: f64, income: f64) -> f64 {
    100.0 * (kwh * elec_rate + therms * heat_rate) / income
}

/// Pearson's r of integer vectors with every sum computed exactly in i128
/// (`n Σxy − Σx Σy` over the square root of the variance products). Only the
/// final division and square root round.
pub fn pearson_exact(x: &[i64], y: &[i64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as i128;
    let sx: i128 = x.iter().map(|&v| v as i128).sum();
    let sy: i128 = y.iter().map(|&v| v as i128).sum();
    let sxx: i128 = x.iter().map(|&v| (v as i128) * (v as i128)).sum();
    let syy: i128 = y.iter().map(|&v| (v as i128) * (v as i128)).sum();
    let sxy: i128 = x.iter().zip(y).map(|(&a, &b)| (a as i128) * (b as i128)).sum();
    let num = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx == 0 || vy == 0 {
        return None;
    }
    Some(num as f64 / ((vx as f64) * (vy as f64)).sqrt())
}

fn sse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSplit {
    pub feature_index: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Exhaustive root-split search: every feature, every midpoint between
/// consecutive distinct values, each scored by re-partitioning the rows and
/// recomputing both child SSEs from scratch. Among splits whose gain is
/// within `tie_tolerance * parent_sse` of the maximum, the lowest feature
/// index and then the lowest threshold wins.
pub fn best_split_oracle(
    rows: &[Vec<f64>],
    target: &[f64],
    min_samples_leaf: usize,
    tie_tolerance: f64,
) -> Option<OracleSplit> {
    if target.iter().all(|&t| t == target[0]) {
        return None;
    }
    let parent = sse(target);
    let d = rows[0].len();
    let mut all = Vec::new();
    for f in 0..d {
        let mut values: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (row, &t) in rows.iter().zip(target) {
                if row[f] <= threshold {
                    left.push(t);
                } else {
                    right.push(t);
                }
            }
            if left.len() < min_samples_leaf || right.len() < min_samples_leaf {
                continue;
            }
            all.push(OracleSplit {
                feature_index: f,
                threshold,
                gain: parent - sse(&left) - sse(&right),
            });
        }
    }
    let best = all.iter().map(|s| s.gain).fold(f64::NEG_INFINITY, f64::max);
    all.into_iter()
        .find(|s| s.gain >= best - tie_tolerance * parent)
}

pub fn random_record<R: Rng>(rng: &mut R, locale_id: String) -> LocaleRecord {
    let population = rng.gen_range(100..200_000) as f64;
    let white = (population * rng.gen_range(0.0..0.9)).floor();
    let black = ((population - white) * rng.gen_range(0.0..0.9)).floor();
    let asian = ((population - white - black) * rng.gen_range(0.0..0.9)).floor();
    let other = population - white - black - asian;
    let units = rng.gen_range(1..80_000) as f64;
    let renter = (units * rng.gen::<f64>()).floor();
    LocaleRecord {
        name: format!("Locale {locale_id}"),
        locale_id,
        race_counts: RaceCounts {
            white,
            black,
            asian,
            other,
        },
        hispanic_count: (population * rng.gen::<f64>()).floor(),
        total_population: population,
        owner_occupied: units - renter,
        renter_occupied: renter,
        year_built_counts: YearBuiltCounts {
            pre1960: rng.gen_range(0.0..1e4),
            from_1960_to_1979: rng.gen_range(0.0..1e4),
            from_1980_to_1999: rng.gen_range(0.0..1e4),
            from_2000: rng.gen_range(1.0..1e4),
        },
        income_bin_counts: IncomeBinCounts {
            low: rng.gen_range(0.0..1e4),
            moderate: rng.gen_range(0.0..1e4),
            high: rng.gen_range(1.0..1e4),
        },
        median_household_income: rng.gen_range(15_000.0..250_000.0),
        annual_kwh_per_household: rng.gen_range(0.0..30_000.0),
        annual_therms_per_household: rng.gen_range(0.0..2_000.0),
        program_participation_rate: rng.gen::<f64>(),
    }
}

pub fn random_snapshot<R: Rng>(rng: &mut R, n: usize) -> Snapshot {
    let mut ids: Vec<u32> = (0..n).map(|_| rng.gen_range(0..100_000)).collect();
    ids.sort_unstable();
    ids.dedup();
    let records = ids
        .into_iter()
        .map(|id| random_record(rng, format!("{id:05}")))
        .collect();
    let rates = RateSchedule::new(
        rng.gen_range(0.05..0.45),
        rng.gen_range(0.5..3.0),
        rng.gen_range(1.0..15.0),
    );
    let created = Utc
        .timestamp_opt(rng.gen_range(1_500_000_000..2_000_000_000), rng.gen_range(0..1_000_000_000))
        .unwrap();
    Snapshot::with_created_at(records, rates, "generated", created).unwrap()
}
