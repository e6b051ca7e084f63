//! Read-only HTTP/JSON service over one loaded snapshot and the model fitted
//! to it at startup.
//!
//! Endpoints:
//!
//! - `GET /api/health`
//! - `GET /api/burden?zip=<locale_id>`
//! - `GET /api/feature-importance`
//! - `GET /api/pcc?group_a=<names>&group_b=<names>` (comma-separated)
//! - `GET /api/locales`
//!
//! Every `/api` error is a JSON object with an `error` field.

use std::future::Future;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::rejection::QueryRejection;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use eeq_core::burden::{evaluate_zip_with_rates, BurdenError};
use eeq_core::ingest::{is_valid_locale_id, load_snapshot, IngestError};
use eeq_core::xai::{build_feature_matrix, pcc_matrix, FeatureMatrix, FittedModel, TreeParams, XaiError};
use eeq_core::{RateSchedule, Snapshot};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

#[derive(Debug, Clone)]
pub struct ApiConfig {
    pub bind_address: SocketAddr,
    pub snapshot_path: PathBuf,
    /// Replaces the snapshot's state-average threshold when set.
    pub state_average_override: Option<f64>,
    /// Portal build served under `/`.
    pub static_assets_dir: Option<PathBuf>,
    pub tree_params: TreeParams,
}

impl ApiConfig {
    pub fn new(bind_address: SocketAddr, snapshot_path: impl Into<PathBuf>) -> Self {
        ApiConfig {
            bind_address,
            snapshot_path: snapshot_path.into(),
            state_average_override: None,
            static_assets_dir: None,
            tree_params: TreeParams::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("loading snapshot {path}: {source}")]
    Snapshot {
        path: PathBuf,
        #[source]
        source: IngestError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("binding {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything the handlers read. Built once, never mutated.
#[derive(Debug)]
pub struct AppState {
    snapshot: Snapshot,
    rates: RateSchedule,
    features: FeatureMatrix,
    model: Option<FittedModel>,
}

impl AppState {
    /// Build the served state, fitting the model on every locale.
    pub fn new(
        snapshot: Snapshot,
        state_average_override: Option<f64>,
        params: &TreeParams,
    ) -> Result<Self, ApiError> {
        let features = build_feature_matrix(&snapshot);
        let model = match FittedModel::fit(&features, params) {
            Ok(model) => Some(model),
            Err(XaiError::InvalidParams(msg)) => return Err(ApiError::Config(msg)),
            Err(e) => {
                tracing::warn!("model unavailable: {e}");
                None
            }
        };
        Self::with_model(snapshot, state_average_override, model)
    }

    pub fn with_model(
        snapshot: Snapshot,
        state_average_override: Option<f64>,
        model: Option<FittedModel>,
    ) -> Result<Self, ApiError> {
        let mut rates = *snapshot.rates();
        if let Some(pct) = state_average_override {
            rates = rates.with_state_average(pct);
        }
        rates
            .validate()
            .map_err(|e| ApiError::Config(e.to_string()))?;
        Ok(AppState {
            features: build_feature_matrix(&snapshot),
            snapshot,
            rates,
            model,
        })
    }

    pub fn snapshot(&self) -> &Snapshot {
        &self.snapshot
    }

    pub fn rates(&self) -> &RateSchedule {
        &self.rates
    }

    pub fn features(&self) -> &FeatureMatrix {
        &self.features
    }

    pub fn model(&self) -> Option<&FittedModel> {
        self.model.as_ref()
    }
}

struct ApiFailure {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiFailure {
    fn new(status: StatusCode, error: &str) -> Self {
        ApiFailure {
            status,
            body: json!({ "error": error }),
        }
    }

    fn detail(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.body[key] = value.into();
        self
    }
}

impl IntoResponse for ApiFailure {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<QueryRejection> for ApiFailure {
    fn from(rejection: QueryRejection) -> Self {
        ApiFailure::new(StatusCode::BAD_REQUEST, "invalid_request").detail("detail", rejection.body_text())
    }
}

type AppResult<T> = Result<Json<T>, ApiFailure>;

#[derive(Serialize)]
struct Health {
    status: &'static str,
    locales: usize,
    snapshot_created_at: String,
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    Json(Health {
        status: "ok",
        locales: state.snapshot.len(),
        snapshot_created_at: state.snapshot.created_at().to_rfc3339(),
    })
}

#[derive(Deserialize)]
struct BurdenQuery {
    zip: Option<String>,
}

async fn burden(
    State(state): State<Arc<AppState>>,
    query: Result<Query<BurdenQuery>, QueryRejection>,
) -> AppResult<eeq_core::BurdenReport> {
    let Query(query) = query?;
    let zip = query.zip.unwrap_or_default();
    if !is_valid_locale_id(&zip) {
        return Err(ApiFailure::new(StatusCode::BAD_REQUEST, "invalid_zip"));
    }
    match evaluate_zip_with_rates(&zip, &state.snapshot, &state.rates) {
        Ok(report) => Ok(Json(report)),
        Err(BurdenError::UnknownLocale(_)) => {
            Err(ApiFailure::new(StatusCode::NOT_FOUND, "unknown_locale"))
        }
        Err(e) => Err(ApiFailure::new(StatusCode::INTERNAL_SERVER_ERROR, "burden_failed")
            .detail("detail", e.to_string())),
    }
}

async fn feature_importance(
    State(state): State<Arc<AppState>>,
) -> AppResult<eeq_core::xai::FeatureImportance> {
    state
        .model
        .as_ref()
        .map(|m| Json(m.importance.clone()))
        .ok_or_else(|| ApiFailure::new(StatusCode::SERVICE_UNAVAILABLE, "model_unavailable"))
}

#[derive(Deserialize)]
struct PccQuery {
    group_a: Option<String>,
    group_b: Option<String>,
}

fn split_names(raw: Option<&str>, param: &str) -> Result<Vec<String>, ApiFailure> {
    let names: Vec<String> = raw
        .unwrap_or_default()
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    if names.is_empty() {
        return Err(ApiFailure::new(StatusCode::BAD_REQUEST, "invalid_request")
            .detail("detail", format!("{param} must list at least one feature")));
    }
    Ok(names)
}

async fn pcc(
    State(state): State<Arc<AppState>>,
    query: Result<Query<PccQuery>, QueryRejection>,
) -> AppResult<eeq_core::xai::PccMatrix> {
    let Query(query) = query?;
    let group_a = split_names(query.group_a.as_deref(), "group_a")?;
    let group_b = split_names(query.group_b.as_deref(), "group_b")?;
    match pcc_matrix(&state.features, &group_a, &group_b) {
        Ok(matrix) => Ok(Json(matrix)),
        Err(XaiError::UnknownFeature(name)) => {
            Err(ApiFailure::new(StatusCode::BAD_REQUEST, "unknown_feature").detail("feature", name))
        }
        Err(e) => Err(ApiFailure::new(StatusCode::INTERNAL_SERVER_ERROR, "pcc_failed")
            .detail("detail", e.to_string())),
    }
}

#[derive(Serialize)]
struct LocaleSummary<'a> {
    locale_id: &'a str,
    name: &'a str,
}

async fn locales(State(state): State<Arc<AppState>>) -> Response {
    let list: Vec<LocaleSummary> = state
        .snapshot
        .records()
        .iter()
        .map(|r| LocaleSummary {
            locale_id: &r.locale_id,
            name: &r.name,
        })
        .collect();
    Json(list).into_response()
}

async fn not_found() -> ApiFailure {
    ApiFailure::new(StatusCode::NOT_FOUND, "not_found")
}

async fn method_not_allowed() -> ApiFailure {
    ApiFailure::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed")
}

pub fn router(state: Arc<AppState>, static_assets_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/burden", get(burden))
        .route("/api/feature-importance", get(feature_importance))
        .route("/api/pcc", get(pcc))
        .route("/api/locales", get(locales))
        .route("/api", get(not_found))
        .route("/api/{*rest}", get(not_found))
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(state);
    match static_assets_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    }
}

/// Serve on an already-bound listener until `shutdown` resolves.
pub async fn serve_on(
    listener: TcpListener,
    state: Arc<AppState>,
    static_assets_dir: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ApiError> {
    let app = router(state, static_assets_dir.as_deref());
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Load the snapshot, fit the model, then bind and serve. Nothing listens
/// until loading has finished.
pub async fn serve(
    config: ApiConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ApiError> {
    let snapshot = load_snapshot(&config.snapshot_path).map_err(|source| ApiError::Snapshot {
        path: config.snapshot_path.clone(),
        source,
    })?;
    if let Some(dir) = &config.static_assets_dir {
        if !dir.is_dir() {
            return Err(ApiError::Config(format!(
                "static assets directory {} does not exist",
                dir.display()
            )));
        }
    }
    let state = Arc::new(AppState::new(
        snapshot,
        config.state_average_override,
        &config.tree_params,
    )?);
    let listener = TcpListener::bind(config.bind_address)
        .await
        .map_err(|source| ApiError::Bind {
            addr: config.bind_address,
            source,
        })?;
    tracing::info!(
        addr = %listener.local_addr()?,
        locales = state.snapshot.len(),
        "serving"
    );
    serve_on(listener, state, config.static_assets_dir, shutdown).await
}
