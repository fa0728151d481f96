//! JSON error replies: `{code, field?, message}`.

use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use helios_core::grid::GridError;
use helios_core::{HeatmapError, SceneError, TimeError};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, body: ErrorBody { code, field: None, message: message.into() } }
    }

    pub fn with_field(mut self, field: impl Into<String>) -> Self {
        self.body.field = Some(field.into());
        self
    }

    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid", message).with_field(field)
    }

    pub fn not_found(what: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("{what} not found"))
    }

    pub fn conflict(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        let status = match r {
            JsonRejection::JsonDataError(_) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, "bad_request", r.body_text())
    }
}

impl From<TimeError> for ApiError {
    fn from(e: TimeError) -> Self {
        Self::invalid(e.field(), e.to_string())
    }
}

impl From<GridError> for ApiError {
    fn from(e: GridError) -> Self {
        let field = match &e {
            GridError::NonPositive { name, .. } => (*name).to_owned(),
            GridError::SpacingExceedsExtent { name, .. } => format!("spacing_{name}"),
            GridError::NonFinite => "center".to_owned(),
            GridError::Parse { .. } => "sensors".to_owned(),
        };
        Self::invalid(field, e.to_string())
    }
}

impl From<HeatmapError> for ApiError {
    fn from(e: HeatmapError) -> Self {
        let field = match e {
            HeatmapError::Mid { .. } => "mid",
            HeatmapError::EmptyRange { .. } | HeatmapError::NonFinite => "min",
        };
        Self::invalid(field, e.to_string())
    }
}

impl From<SceneError> for ApiError {
    fn from(e: SceneError) -> Self {
        match e {
            SceneError::Invalid(v) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid_scene", v.to_string()),
            other => Self::new(StatusCode::BAD_REQUEST, "bad_scene", other.to_string()),
        }
    }
}
