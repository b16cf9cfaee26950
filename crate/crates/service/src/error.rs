use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use plknot_core::Error;
use serde_json::{json, Value};

/// Error response body: `{"error": {"code", "message", "details"}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into(), details: Value::Null }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", what)
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn body(&self) -> Value {
        json!({"error": {"code": self.code, "message": self.message, "details": self.details}})
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match &e {
            Error::Parse { line, column, .. } => Self::new(StatusCode::BAD_REQUEST, "parse_error", e.to_string())
                .with_details(json!({"line": line, "column": column})),
            Error::NoPrecrossings => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "no_precrossings", e.to_string()),
            Error::UnknownCrossing(id) => Self::not_found(e.to_string()).with_details(json!({"crossing": id})),
            _ => Self::new(StatusCode::BAD_REQUEST, "validation_error", e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body())).into_response()
    }
}
