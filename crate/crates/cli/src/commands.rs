use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use eeq_api::ApiConfig;
use eeq_core::burden::{evaluate_zip_with_rates, BurdenError};
use eeq_core::ingest::{is_valid_locale_id, join_tables, load_snapshot, read_data_dir, save_snapshot};
use eeq_core::xai::{
    build_feature_matrix, pcc_matrix, FittedModel, RegressionTree, TreeParams, INCOME_FEATURES,
    RACE_FEATURES, TENURE_FEATURES, YEAR_BUILT_FEATURES,
};
use eeq_core::{RateSchedule, Snapshot};
use serde::{Deserialize, Serialize};

pub struct CommandError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for CommandError {
    fn from(error: E) -> Self {
        CommandError {
            code: 1,
            error: error.into(),
        }
    }
}

fn not_found(error: anyhow::Error) -> CommandError {
    CommandError { code: 2, error }
}

type CommandResult = Result<(), CommandError>;

fn open_snapshot(path: &Path) -> anyhow::Result<Snapshot> {
    load_snapshot(path).with_context(|| format!("loading snapshot {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn ingest(data_dir: &Path, rates_file: &Path, out: &Path, note: Option<String>) -> CommandResult {
    let rates_text = fs::read_to_string(rates_file)
        .with_context(|| format!("reading {}", rates_file.display()))?;
    let rates: RateSchedule = serde_json::from_str(&rates_text)
        .with_context(|| format!("parsing {}", rates_file.display()))?;
    rates
        .validate()
        .with_context(|| format!("{}: invariant violation", rates_file.display()))?;

    let tables = read_data_dir(data_dir)?;
    let joined = join_tables(&tables)?;
    let count = joined.records.len();
    let note = note.unwrap_or_else(|| format!("ingested from {}", data_dir.display()));
    let snapshot = Snapshot::new(joined.records, rates, note)?;
    save_snapshot(&snapshot, out).with_context(|| format!("writing {}", out.display()))?;
    println!("joined={count} dropped={}", joined.dropped);
    Ok(())
}

/// Contents of `tree.json`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TreeFile {
    pub feature_names: Vec<String>,
    pub params: TreeParams,
    pub tree: RegressionTree,
}

pub fn analyze(snapshot: &Path, out_dir: &Path, params: &TreeParams) -> CommandResult {
    let snapshot = open_snapshot(snapshot)?;
    let features = build_feature_matrix(&snapshot);
    let model = FittedModel::fit(&features, params)?;

    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    write_json(&out_dir.join("importance.json"), &model.importance)?;
    write_json(&out_dir.join("metrics.json"), &model.metrics)?;
    write_json(
        &out_dir.join("tree.json"),
        &TreeFile {
            feature_names: features.feature_names().to_vec(),
            params: model.params,
            tree: model.tree.clone(),
        },
    )?;

    match model.metrics.r_squared {
        Some(r2) => println!("r_squared={r2:.4} rmse={:.4}", model.metrics.rmse),
        None => println!("r_squared=undefined rmse={:.4}", model.metrics.rmse),
    }
    println!(
        "splits={} leaves={} depth={}",
        model.tree.n_splits(),
        model.tree.n_leaves(),
        model.tree.depth()
    );
    for w in model.importance.weights().iter().take(5) {
        println!("{:>7.2}%  {}", w.weight * 100.0, w.feature);
    }
    Ok(())
}

pub fn burden(snapshot: &Path, zip: &str, state_average: Option<f64>) -> CommandResult {
    if !is_valid_locale_id(zip) {
        return Err(anyhow!("invalid zip {zip:?}: expected 5 alphanumeric characters").into());
    }
    let snapshot = open_snapshot(snapshot)?;
    let mut rates = *snapshot.rates();
    if let Some(pct) = state_average {
        rates = rates.with_state_average(pct);
        rates.validate()?;
    }
    let report = match evaluate_zip_with_rates(zip, &snapshot, &rates) {
        Ok(report) => report,
        Err(e @ BurdenError::UnknownLocale(_)) => return Err(not_found(e.into())),
        Err(e) => return Err(e.into()),
    };
    println!("{:.2}%", report.energy_burden_pct);
    println!("{}", report.message);
    if let Some(tips) = &report.tips {
        println!("Tips to lower energy burden:");
        for tip in tips {
            println!("- {tip}");
        }
    }
    Ok(())
}

/// Expand a `--group-*` argument: a named feature group or a list of names.
fn expand_group(arg: &str) -> Vec<String> {
    let named: Option<&[&str]> = match arg.trim() {
        "race" => Some(&RACE_FEATURES),
        "tenure" => Some(&TENURE_FEATURES),
        "income" => Some(&INCOME_FEATURES),
        "year_built" => Some(&YEAR_BUILT_FEATURES),
        _ => None,
    };
    match named {
        Some(names) => names.iter().map(|s| s.to_string()).collect(),
        None => arg
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect(),
    }
}

pub fn pcc(snapshot: &Path, group_a: &str, group_b: &str, out: &Path) -> CommandResult {
    let group_a = expand_group(group_a);
    let group_b = expand_group(group_b);
    if group_a.is_empty() || group_b.is_empty() {
        return Err(anyhow!("both feature groups must name at least one feature").into());
    }
    let snapshot = open_snapshot(snapshot)?;
    let features = build_feature_matrix(&snapshot);
    let matrix = pcc_matrix(&features, &group_a, &group_b)?;
    fs::write(out, matrix.to_csv()).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "wrote {}x{} matrix to {}",
        group_a.len(),
        group_b.len(),
        out.display()
    );
    Ok(())
}

pub fn serve(
    snapshot: PathBuf,
    bind: SocketAddr,
    state_average: Option<f64>,
    assets: Option<PathBuf>,
    params: TreeParams,
) -> CommandResult {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .init();

    let mut config = ApiConfig::new(bind, snapshot);
    config.state_average_override = state_average;
    config.static_assets_dir = assets;
    config.tree_params = params;

    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(eeq_api::serve(config, shutdown_signal()))?;
    Ok(())
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut sig) => {
                sig.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}
