//! Regenerates `fixtures/synthetic/`, the bundled demo dataset.
//!
//! ```text
//! cargo run -p eeq-cli --example gen_synthetic -- fixtures/synthetic
//! ```
//!
//! Structure planted per locale (U(a, b) is uniform, all noise independent):
//!
//! - asian, black, other shares ~ U(0.02, 0.25), U(0.02, 0.25), U(0.01, 0.45);
//!   white is the remainder. The wide spread of `other` keeps white_share from
//!   acting as a near-exact proxy for asian_share + renter_share.
//! - renter_share = 0.15 + black_share + U(-0.07, 0.07)
//! - low_income_share = 0.10 + 0.6 * renter_share + U(-0.04, 0.04)
//! - built_2000_plus_share = 0.05 + 0.5 * asian_share + U(-0.03, 0.03)
//! - annual kWh = 5000 + 9000 * renter_share + 12000 * asian_share + U(-150, 150)
//!
//! Two extra locales with hand-picked consumption back the calculator
//! examples: 07043 (10.00% burden) and 07928 (3.53%).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;
const GENERATED: usize = 998;

struct Locale {
    id: String,
    name: String,
    population: u64,
    white: u64,
    black: u64,
    asian: u64,
    other: u64,
    hispanic: u64,
    owner: u64,
    renter: u64,
    built: [u64; 4],
    income_bins: [u64; 3],
    median_income: u64,
    kwh: f64,
    therms: f64,
    participation: f64,
}

fn generate(rng: &mut ChaCha8Rng, id: String, name: String) -> Locale {
    let population: u64 = rng.gen_range(5_000..60_000);
    let p = population as f64;
    let asian_share = rng.gen_range(0.02..0.25);
    let black_share = rng.gen_range(0.02..0.25);
    let other_share = rng.gen_range(0.01..0.45);
    let asian = (asian_share * p).round() as u64;
    let black = (black_share * p).round() as u64;
    let other = (other_share * p).round() as u64;
    let white = population - asian - black - other;
    let hispanic_share = 0.05 + 0.5 * black_share + rng.gen_range(-0.03..0.03);
    let hispanic = (hispanic_share * p).round() as u64;

    let units = (p / 2.5).round() as u64;
    let u = units as f64;
    let renter_share = 0.15 + black_share + rng.gen_range(-0.07..0.07);
    let renter = (renter_share * u).round() as u64;
    let owner = units - renter;

    let pre1960 = (rng.gen_range(0.20..0.40) * u).round() as u64;
    let b1960 = (rng.gen_range(0.20..0.30) * u).round() as u64;
    let b2000 = ((0.05 + 0.5 * asian_share + rng.gen_range(-0.03..0.03)) * u).round() as u64;
    let b1980 = units - pre1960 - b1960 - b2000;

    let low_share = 0.10 + 0.6 * renter_share + rng.gen_range(-0.04..0.04);
    let low = (low_share * u).round() as u64;
    let moderate = (rng.gen_range(0.25..0.35) * u).round() as u64;
    let high = units - low - moderate;
    let median_income = (110_000.0 - 120_000.0 * low_share + rng.gen_range(-5_000.0..5_000.0)).round() as u64;

    let kwh = 5_000.0 + 9_000.0 * renter_share + 12_000.0 * asian_share + rng.gen_range(-150.0..150.0);
    let pre1960_share = pre1960 as f64 / u;
    let therms = 400.0 + 600.0 * pre1960_share + rng.gen_range(-50.0..50.0);
    let participation = rng.gen_range(0.02..0.20);

    Locale {
        id,
        name,
        population,
        white,
        black,
        asian,
        other,
        hispanic,
        owner,
        renter,
        built: [pre1960, b1960, b1980, b2000],
        income_bins: [low, moderate, high],
        median_income,
        kwh: (kwh * 10.0_f64).round() / 10.0,
        therms: (therms * 10.0_f64).round() / 10.0,
        participation: (participation * 10_000.0_f64).round() / 10_000.0,
    }
}

fn main() -> std::io::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures/synthetic".into())
        .into();
    fs::create_dir_all(&out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut locales: Vec<Locale> = (0..GENERATED)
        .map(|i| {
            let id = format!("{:05}", 8_000 + i);
            let name = format!("Synthetic {id}");
            generate(&mut rng, id, name)
        })
        .collect();

    // (10000 * 0.20 + 1000 * 1.50) / 35000 = 10%
    let mut montclair = generate(&mut rng, "07043".into(), "Upper Montclair".into());
    montclair.kwh = 10_000.0;
    montclair.therms = 1_000.0;
    montclair.median_income = 35_000;
    // (6400 * 0.20 + 560 * 1.50) / 60000 = 3.5333%
    let mut chatham = generate(&mut rng, "07928".into(), "Chatham".into());
    chatham.kwh = 6_400.0;
    chatham.therms = 560.0;
    chatham.median_income = 60_000;
    locales.push(montclair);
    locales.push(chatham);
    locales.sort_by(|a, b| a.id.cmp(&b.id));

    let mut race = String::from("locale_id,name,white,black,asian,other,total_population\n");
    let mut hispanic = String::from("locale_id,hispanic\n");
    let mut tenure = String::from("locale_id,owner_occupied,renter_occupied\n");
    let mut built = String::from("locale_id,pre1960,b1960_1979,b1980_1999,b2000_plus\n");
    let mut bins = String::from("locale_id,low,moderate,high\n");
    let mut quintiles = String::from("locale_id,median_household_income\n");
    let mut energy = String::from("locale_id,annual_kwh_per_household,annual_therms_per_household\n");
    let mut participation = String::from("locale_id,participation_rate\n");
    for l in &locales {
        let _ = writeln!(race, "{},{},{},{},{},{},{}", l.id, l.name, l.white, l.black, l.asian, l.other, l.population);
        let _ = writeln!(hispanic, "{},{}", l.id, l.hispanic);
        let _ = writeln!(tenure, "{},{},{}", l.id, l.owner, l.renter);
        let [a, b, c, d] = l.built;
        let _ = writeln!(built, "{},{a},{b},{c},{d}", l.id);
        let [lo, mo, hi] = l.income_bins;
        let _ = writeln!(bins, "{},{lo},{mo},{hi}", l.id);
        let _ = writeln!(quintiles, "{},{}", l.id, l.median_income);
        let _ = writeln!(energy, "{},{},{}", l.id, l.kwh, l.therms);
        let _ = writeln!(participation, "{},{}", l.id, l.participation);
    }

    fs::write(out.join("race.csv"), race)?;
    fs::write(out.join("hispanic.csv"), hispanic)?;
    fs::write(out.join("tenure.csv"), tenure)?;
    fs::write(out.join("year_built.csv"), built)?;
    fs::write(out.join("income_bins.csv"), bins)?;
    fs::write(out.join("income_quintiles.csv"), quintiles)?;
    fs::write(out.join("utility_energy.csv"), energy)?;
    fs::write(out.join("participation.csv"), participation)?;
    fs::write(
        out.join("rates.json"),
        "{\n  \"electricity_rate\": 0.2,\n  \"heating_rate\": 1.5,\n  \"state_average_burden_pct\": 6.0\n}\n",
    )?;
    println!("wrote {} locales to {}", locales.len(), out.display());
    Ok(())
}
