//! JSON error bodies: `{code, message, detail}` with a matching status.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use fairdoc::metafetch::MetaError;
use fairdoc::modelkg::KgError;
use fairdoc::rulemine::RuleError;
use fairdoc::workflowdoc::DocError;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>, detail: Value) -> Self {
        Self { status, body: ErrorBody { code: code.into(), message: message.into(), detail } }
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NotFound", format!("no {what} `{id}`"), json!({ "id": id }))
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message, Value::Null)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message, Value::Null)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<KgError> for ApiError {
    fn from(e: KgError) -> Self {
        use StatusCode as S;
        let message = e.to_string();
        let (status, code, detail) = match &e {
            KgError::EmptyLabel => (S::BAD_REQUEST, "EmptyLabel", Value::Null),
            KgError::InvalidExternalId { scheme } => (S::BAD_REQUEST, "InvalidExternalId", json!({ "scheme": scheme })),
            KgError::DuplicateEntity { existing } => (S::CONFLICT, "DuplicateEntity", json!({ "existing": existing })),
            KgError::InvalidKind(k) => (S::BAD_REQUEST, "InvalidKind", json!({ "kind": k })),
            KgError::UnknownRelation(r) => (S::BAD_REQUEST, "UnknownRelation", json!({ "relation": r })),
            KgError::MissingEntity(id) => (S::NOT_FOUND, "MissingEntity", json!({ "id": id })),
            KgError::DomainRangeViolation { relation, expected_domain, expected_range, src_kind, dst_kind } => (
                S::BAD_REQUEST,
                "DomainRangeViolation",
                json!({
                    "relation": relation, "expected_domain": expected_domain, "expected_range": expected_range,
                    "src_kind": src_kind, "dst_kind": dst_kind,
                }),
            ),
            KgError::CycleIntroduced { src, dst } => (S::CONFLICT, "CycleIntroduced", json!({ "src": src, "dst": dst })),
            KgError::WrongKind { id, expected, found } => {
                (S::BAD_REQUEST, "WrongKind", json!({ "id": id, "expected": expected, "found": found }))
            }
            KgError::SchemaViolation { path, message } => {
                (S::BAD_REQUEST, "SchemaViolation", json!({ "path": path, "message": message }))
            }
            KgError::DanglingReference { relation, missing } => {
                (S::BAD_REQUEST, "DanglingReference", json!({ "relation": relation, "missing": missing }))
            }
            KgError::InvalidIri(iri) => (S::BAD_REQUEST, "InvalidIri", json!({ "iri": iri })),
        };
        ApiError::new(status, code, message, detail)
    }
}

impl From<DocError> for ApiError {
    fn from(e: DocError) -> Self {
        use StatusCode as S;
        let message = e.to_string();
        let (status, code, detail) = match e {
            DocError::UnknownQuestion(q) => (S::NOT_FOUND, "UnknownQuestion", json!({ "question": q })),
            DocError::TypeMismatch { question, expected, message } => (
                S::BAD_REQUEST,
                "TypeMismatch",
                json!({ "question": question, "expected": expected, "message": message }),
            ),
            DocError::UnknownEntityRef { question, id } => {
                (S::BAD_REQUEST, "UnknownEntityRef", json!({ "question": question, "id": id }))
            }
            DocError::IncompleteSession { missing } => (S::BAD_REQUEST, "IncompleteSession", json!({ "missing": missing })),
            DocError::VersionMismatch { expected, found } => {
                (S::CONFLICT, "VersionMismatch", json!({ "expected": expected, "found": found }))
            }
            DocError::SchemaViolation { path, message } => {
                (S::BAD_REQUEST, "SchemaViolation", json!({ "path": path, "message": message }))
            }
            DocError::Kg { question, source } => {
                let inner = ApiError::from(source);
                let detail = json!({ "question": question, "code": inner.body.code, "detail": inner.body.detail });
                return ApiError::new(inner.status, &inner.body.code.clone(), message, detail);
            }
            DocError::InjectedFault(n) => (S::INTERNAL_SERVER_ERROR, "InjectedFault", json!({ "after": n })),
        };
        ApiError::new(status, code, message, detail)
    }
}

impl From<RuleError> for ApiError {
    fn from(e: RuleError) -> Self {
        use StatusCode as S;
        let message = e.to_string();
        let (status, code, detail) = match &e {
            RuleError::BadHeader(h) => (S::BAD_REQUEST, "BadHeader", json!({ "message": h })),
            RuleError::NonBinaryCell { row, column, value } => {
                (S::BAD_REQUEST, "NonBinaryCell", json!({ "row": row, "column": column, "value": value }))
            }
            RuleError::RaggedRow { row, expected, found } => {
                (S::BAD_REQUEST, "RaggedRow", json!({ "row": row, "expected": expected, "found": found }))
            }
            RuleError::EmptyObjectId { row } => (S::BAD_REQUEST, "EmptyObjectId", json!({ "row": row })),
            RuleError::DuplicateObjectId(id) => (S::BAD_REQUEST, "DuplicateObjectId", json!({ "object_id": id })),
            RuleError::EmptyDataset => (S::BAD_REQUEST, "EmptyDataset", Value::Null),
            RuleError::Csv { row, message } => (S::BAD_REQUEST, "Csv", json!({ "row": row, "message": message })),
            RuleError::DigestMismatch { expected, found } => {
                (S::CONFLICT, "DigestMismatch", json!({ "expected": expected, "found": found }))
            }
            RuleError::PropertyMismatch => (S::BAD_REQUEST, "PropertyMismatch", Value::Null),
            RuleError::InvalidDocument(m) => (S::BAD_REQUEST, "InvalidDocument", json!({ "message": m })),
            RuleError::ZeroPolynomial
            | RuleError::ContradictionPolynomial
            | RuleError::NameMissing(_)
            | RuleError::Poly(_) => (S::BAD_REQUEST, "RuleError", Value::Null),
        };
        ApiError::new(status, code, message, detail)
    }
}

impl From<MetaError> for ApiError {
    fn from(e: MetaError) -> Self {
        let message = e.to_string();
        match e {
            MetaError::InvalidDoi(doi) => ApiError::new(StatusCode::BAD_REQUEST, "InvalidDoi", message, json!({ "doi": doi })),
            MetaError::FixtureCorrupt { path, message: m } => ApiError::new(
                StatusCode::INTERNAL_SERVER_ERROR,
                "FixtureCorrupt",
                message,
                json!({ "path": path, "message": m }),
            ),
            MetaError::NetworkError(m) => ApiError::new(StatusCode::BAD_GATEWAY, "NetworkError", message, json!({ "message": m })),
        }
    }
}
