use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use pgames_core::{GameError, PdlError};
use serde::Serialize;

/// Error payload: `{"error": ..., "field": ...}` plus a text position for
/// cheat-sheet syntax errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

impl ApiError {
    pub fn bad_request(error: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, error: error.into(), field: None, line: None, col: None }
    }

    pub fn invalid(field: impl Into<String>, error: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            error: error.into(),
            field: Some(field.into()),
            line: None,
            col: None,
        }
    }

    pub fn not_found(error: impl Into<String>) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, error: error.into(), field: None, line: None, col: None }
    }

    /// A cheat-sheet error attributed to `field`.
    pub fn pdl(field: &str, e: &PdlError) -> Self {
        let mut out = ApiError::invalid(field, e.to_string());
        if let Some((line, col)) = e.position() {
            out.line = Some(line);
            out.col = Some(col);
        }
        out
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        match &e {
            GameError::OutOfRange { name, .. } => ApiError::invalid(name.to_lowercase(), e.to_string()),
            GameError::Pdl(p) => ApiError::pdl("pdl", p),
            _ => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                error: e.to_string(),
                field: None,
                line: None,
                col: None,
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self)).into_response()
    }
}
