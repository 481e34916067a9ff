use std::sync::{Arc, OnceLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::answer::{answer, AnswerCache, AnswerRequest};
use crate::error::ServiceError;
use crate::report::{list_patients, patient_report};
use crate::store::Store;

/// Shared handler state. The store is filled once loading finishes; until
/// then every route answers 503.
#[derive(Clone)]
pub struct AppState {
    store: Arc<OnceLock<Arc<Store>>>,
    cache: Arc<AnswerCache>,
}

impl AppState {
    pub fn empty(cache_capacity: usize) -> Self {
        AppState {
            store: Arc::new(OnceLock::new()),
            cache: Arc::new(AnswerCache::new(cache_capacity)),
        }
    }

    pub fn loaded(store: Store) -> Self {
        let state = Self::empty(store.config.cache_capacity);
        state.install(store);
        state
    }

    /// Sets the store. Later calls are ignored.
    pub fn install(&self, store: Store) {
        let _ = self.store.set(Arc::new(store));
    }

    fn store(&self) -> Result<Arc<Store>, ServiceError> {
        self.store.get().cloned().ok_or(ServiceError::NotLoaded)
    }

    pub fn cache(&self) -> &AnswerCache {
        &self.cache
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        if status.is_server_error() {
            tracing::error!("{self}");
        }
        (status, Json(json!({"error": self.code(), "message": self.to_string()}))).into_response()
    }
}

type Reply = Result<Response, ServiceError>;

async fn patients(State(state): State<AppState>) -> Reply {
    let store = state.store()?;
    Ok(Json(list_patients(&store)).into_response())
}

async fn report(State(state): State<AppState>, Path(id): Path<String>) -> Reply {
    let store = state.store()?;
    Ok(Json(patient_report(&store, &id)?).into_response())
}

async fn stats(State(state): State<AppState>) -> Reply {
    let store = state.store()?;
    Ok(Json(&store.stats).into_response())
}

async fn answer_route(
    State(state): State<AppState>,
    Path((patient, question)): Path<(String, String)>,
    body: Option<Json<AnswerRequest>>,
) -> Reply {
    let store = state.store()?;
    let req = body.map(|Json(b)| b).unwrap_or_default();
    // Remote scoring blocks on I/O, so run it off the async workers.
    let result = tokio::task::spawn_blocking(move || answer(&store, Some(state.cache()), &patient, &question, &req))
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))??;
    Ok(Json(result.as_ref()).into_response())
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/patients", get(patients))
        .route("/patients/{id}/report", get(report))
        .route("/patients/{id}/questions/{qid}/answer", post(answer_route))
        .route("/corpus/stats", get(stats))
        .with_state(state)
}
