//! HTTP API over the builder, both translation directions and the
//! translation history.
//!
//! | route | |
//! |---|---|
//! | `GET /healthz` | liveness |
//! | `GET /api/options?subject=..&verb=..` | offered choices per slot |
//! | `POST /api/translate/ovp2en` | selections to English |
//! | `POST /api/translate/en2ovp` | `{text, score}` to a translation record |
//! | `GET /api/history?limit=&offset=` | stored records, oldest first |
//! | `GET /api/random?seed=` | a random complete sentence |

pub mod history;

use std::path::Path;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::ServeDir;

pub use history::{HistoryError, HistoryPage, HistoryStore};

use crate::builder::{random_sentence, valid_choices, BuilderError, SlotChoices};
use crate::config::{Config, ConfigError};
use crate::en2ovp::{translate_english, En2OvpError, En2OvpOptions};
use crate::eval::{score_record, EmbeddingBackend, EvalError};
use crate::grammar::{validate, Clause, SentenceSelections, Verdict, Violation};
use crate::llm::{ChatBackend, LlmError};
use crate::ovp2en::{translate_ovp, EncodeOptions, Ovp2EnError};
use crate::Lexicon;

/// Seconds suggested to clients after a backend failure.
pub const RETRY_AFTER_SECS: u64 = 5;
pub const MAX_HISTORY_PAGE: usize = 1000;
pub const MAX_INPUT_CHARS: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

struct Inner {
    lexicon: &'static Lexicon,
    chat: Arc<dyn ChatBackend>,
    embeddings: Option<Arc<dyn EmbeddingBackend>>,
    history: HistoryStore,
    options: En2OvpOptions,
}

/// Shared, immutable request context. Only the history log mutates.
#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(
        lexicon: &'static Lexicon,
        chat: Arc<dyn ChatBackend>,
        embeddings: Option<Arc<dyn EmbeddingBackend>>,
        history: HistoryStore,
        options: En2OvpOptions,
    ) -> AppState {
        AppState(Arc::new(Inner {
            lexicon,
            chat,
            embeddings,
            history,
            options,
        }))
    }

    pub fn from_config(config: &Config) -> Result<AppState, ServiceError> {
        Ok(AppState::new(
            config.lexicon()?,
            config.chat_backend(config.backend)?,
            config.embedding_backend(config.backend)?,
            HistoryStore::open(&config.history_path)?,
            config.en2ovp_options()?,
        ))
    }

    fn encode(&self) -> EncodeOptions {
        self.0.options.encode
    }
}

/// JSON error body `{"error": ...}` with a status.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    details: Option<serde_json::Value>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            message: message.into(),
            details: None,
        }
    }

    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn with_details(mut self, details: impl Serialize) -> ApiError {
        self.details = serde_json::to_value(details).ok();
        self
    }

    /// Backend failures are reported without response bodies or prompts.
    fn backend(e: &LlmError) -> ApiError {
        tracing::warn!(error = %e, "backend call failed");
        let message = match e {
            LlmError::Transport(_) => "backend unreachable".to_string(),
            LlmError::Backend { status, .. } => format!("backend returned status {status}"),
            LlmError::Format { message, .. } => format!("unusable backend reply: {message}"),
            LlmError::InvalidRequest(m) => format!("backend request rejected: {m}"),
            LlmError::Config(m) => format!("backend misconfigured: {m}"),
        };
        ApiError::new(StatusCode::BAD_GATEWAY, message)
    }

    fn internal(e: impl std::fmt::Display) -> ApiError {
        tracing::error!(error = %e, "internal error");
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal error")
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "error": self.message });
        if let Some(d) = self.details {
            body["details"] = d;
        }
        let mut response = (self.status, Json(body)).into_response();
        if self.status == StatusCode::BAD_GATEWAY {
            response
                .headers_mut()
                .insert(header::RETRY_AFTER, HeaderValue::from(RETRY_AFTER_SECS));
        }
        response
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Debug, Serialize)]
pub struct OptionsResponse<'a> {
    pub slots: Vec<SlotChoices<'a>>,
    pub verdict: Verdict,
    /// Present once the selections form a complete sentence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
}

async fn options(
    State(state): State<AppState>,
    query: Result<Query<SentenceSelections>, QueryRejection>,
) -> Result<Response, ApiError> {
    let Query(selections) = query?;
    let lex = state.0.lexicon;
    let slots = valid_choices(lex, &selections).map_err(|e| match &e {
        BuilderError::Contradiction(v) => ApiError::bad_request(e.to_string()).with_details(v),
        _ => ApiError::bad_request(e.to_string()),
    })?;
    let verdict = validate(lex, &selections);
    let surface = match verdict {
        Verdict::Complete => Some(crate::render(lex, &selections).map_err(ApiError::internal)?),
        _ => None,
    };
    Ok(Json(OptionsResponse { slots, verdict, surface }).into_response())
}

fn check_complete(lexicon: &Lexicon, selections: &SentenceSelections) -> Result<(), ApiError> {
    match validate(lexicon, selections) {
        Verdict::Complete => Ok(()),
        Verdict::Invalid(v)
            if v.iter()
                .any(|x| matches!(x, Violation::UnknownLexeme { .. } | Violation::WrongCategory { .. })) =>
        {
            Err(ApiError::bad_request("selections name unusable lexemes").with_details(v))
        }
        verdict => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, verdict.to_string()).with_details(verdict)),
    }
}

async fn ovp2en(
    State(state): State<AppState>,
    body: Result<Json<SentenceSelections>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(selections) = body?;
    check_complete(state.0.lexicon, &selections)?;
    match translate_ovp(state.0.lexicon, &selections, state.0.chat.as_ref(), state.encode()).await {
        Ok(t) => Ok(Json(t).into_response()),
        Err(Ovp2EnError::Llm(e)) => Err(ApiError::backend(&e)),
        Err(Ovp2EnError::Grammar(e)) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct En2OvpRequest {
    pub text: String,
    #[serde(default)]
    pub score: bool,
}

async fn en2ovp(
    State(state): State<AppState>,
    body: Result<Json<En2OvpRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = body?;
    if req.text.trim().is_empty() {
        return Err(ApiError::bad_request("text is empty"));
    }
    if req.text.chars().count() > MAX_INPUT_CHARS {
        return Err(ApiError::bad_request(format!("text exceeds {MAX_INPUT_CHARS} characters")));
    }
    let embeddings = match (req.score, &state.0.embeddings) {
        (true, None) => {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "scoring requested but no embeddings backend is configured",
            ))
        }
        (true, Some(e)) => Some(e.clone()),
        (false, _) => None,
    };
    let record = translate_english(state.0.lexicon, &req.text, state.0.chat.as_ref(), &state.0.options)
        .await
        .map_err(|e| match e {
            En2OvpError::EmptyInput => ApiError::bad_request("text is empty"),
            En2OvpError::Segmentation(e) => ApiError::backend(&e),
            other => ApiError::internal(other),
        })?;
    let record = match embeddings {
        None => record,
        Some(backend) => score_record(record, backend.as_ref()).await.map_err(|e| match e {
            EvalError::Backend(e) => ApiError::backend(&e),
            other => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, format!("cannot score: {other}")),
        })?,
    };
    // Durable before the response leaves.
    let history = state.0.history.clone();
    let stored = record.clone();
    tokio::task::spawn_blocking(move || history.append(&stored))
        .await
        .map_err(ApiError::internal)?
        .map_err(ApiError::internal)?;
    Ok(Json(record).into_response())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PageQuery {
    limit: Option<usize>,
    offset: Option<usize>,
}

async fn history(
    State(state): State<AppState>,
    query: Result<Query<PageQuery>, QueryRejection>,
) -> ApiResult<HistoryPage> {
    let Query(q) = query?;
    let limit = q.limit.unwrap_or(50);
    if limit > MAX_HISTORY_PAGE {
        return Err(ApiError::bad_request(format!("limit exceeds {MAX_HISTORY_PAGE}")));
    }
    let store = state.0.history.clone();
    let page = tokio::task::spawn_blocking(move || store.page(q.offset.unwrap_or(0), limit))
        .await
        .map_err(ApiError::internal)?
        .map_err(ApiError::internal)?;
    Ok(Json(page))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedQuery {
    seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct RandomResponse {
    pub seed: u64,
    pub selections: SentenceSelections,
    pub surface: String,
}

async fn random(
    State(state): State<AppState>,
    query: Result<Query<SeedQuery>, QueryRejection>,
) -> ApiResult<RandomResponse> {
    let Query(q) = query?;
    let seed = q.seed.unwrap_or_else(rand::random);
    let selections = random_sentence(state.0.lexicon, seed);
    let surface = Clause::from_selections(state.0.lexicon, &selections)
        .map_err(ApiError::internal)?
        .render(state.0.lexicon.word_order());
    Ok(Json(RandomResponse {
        seed,
        selections,
        surface,
    }))
}

fn cors_layer(origins: &[String]) -> Result<Option<CorsLayer>, ConfigError> {
    if origins.is_empty() {
        return Ok(None);
    }
    let allow = if origins.iter().any(|o| o == "*") {
        AllowOrigin::from(Any)
    } else {
        let list = origins
            .iter()
            .map(|o| {
                HeaderValue::from_str(o).map_err(|_| ConfigError::Invalid(format!("bad CORS origin `{o}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        AllowOrigin::list(list)
    };
    Ok(Some(
        CorsLayer::new()
            .allow_origin(allow)
            .allow_methods([Method::GET, Method::POST])
            .allow_headers([header::CONTENT_TYPE]),
    ))
}

/// The API routes, plus CORS and a static fallback when configured.
pub fn router(state: AppState, cors_origins: &[String], static_dir: Option<&Path>) -> Result<Router, ConfigError> {
    let mut app = Router::new()
        .route("/healthz", get(healthz))
        .route("/api/options", get(options))
        .route("/api/translate/ovp2en", post(ovp2en))
        .route("/api/translate/en2ovp", post(en2ovp))
        .route("/api/history", get(history))
        .route("/api/random", get(random))
        .with_state(state);
    if let Some(dir) = static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(cors) = cors_layer(cors_origins)? {
        app = app.layer(cors);
    }
    Ok(app)
}

/// Serves until ctrl-c.
pub async fn serve(config: &Config) -> Result<(), ServiceError> {
    let state = AppState::from_config(config)?;
    let app = router(state, &config.cors_origins, config.static_dir.as_deref())?;
    let listener = tokio::net::TcpListener::bind(&config.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, backend = ?config.backend, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
