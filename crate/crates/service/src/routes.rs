//! HTTP routes. Every handler is a thin shell over one library call.

use std::sync::Arc;

use axum::extract::multipart::MultipartError;
use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{DefaultBodyLimit, FromRequest, FromRequestParts, Multipart, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::Router;
use fairdoc::boolpoly::TermOrder;
use fairdoc::modelkg::{
    export_json, export_triples, DedupPolicy, Direction, EntityKind, EntityQuery, NewEntity, RelationKind, Triple,
};
use fairdoc::rulemine::{validate_rules, Dataset};
use fairdoc::workflowdoc::{
    export_to_kg, load_session, render_wiki, suggest, AnswerValue, DocumentationSession, ExportReport,
    RulesAttachment,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::jobs::{AnalysisJob, JobState};
use crate::state::AppState;

type S = State<Arc<AppState>>;
type ApiResult<T> = Result<T, ApiError>;

/// Room for multipart boundaries and the small text fields.
const MULTIPART_SLACK: usize = 64 * 1024;

#[derive(FromRequest)]
#[from_request(via(axum::Json), rejection(ApiError))]
pub struct Json<T>(pub T);

impl<T: Serialize> IntoResponse for Json<T> {
    fn into_response(self) -> Response {
        axum::Json(self.0).into_response()
    }
}

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Query), rejection(ApiError))]
pub struct Query<T>(pub T);

#[derive(FromRequestParts)]
#[from_request(via(axum::extract::Path), rejection(ApiError))]
pub struct Path<T>(pub T);

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        // malformed and mistyped bodies are both plain validation failures
        let status = if r.status() == StatusCode::UNPROCESSABLE_ENTITY { StatusCode::BAD_REQUEST } else { r.status() };
        ApiError::new(status, "BadJson", r.body_text(), Value::Null)
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "BadQuery", r.body_text(), Value::Null)
    }
}

impl From<PathRejection> for ApiError {
    fn from(r: PathRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "BadPath", r.body_text(), Value::Null)
    }
}

fn multipart_error(e: MultipartError) -> ApiError {
    let status = e.status();
    let code = if status == StatusCode::PAYLOAD_TOO_LARGE { "PayloadTooLarge" } else { "BadMultipart" };
    ApiError::new(status, code, e.body_text(), Value::Null)
}

fn too_large(limit: usize) -> ApiError {
    ApiError::new(
        StatusCode::PAYLOAD_TOO_LARGE,
        "PayloadTooLarge",
        format!("upload exceeds {limit} bytes"),
        json!({ "limit": limit }),
    )
}

/// Runs blocking library work (file reads, network lookups) off the runtime.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

pub fn router(state: Arc<AppState>) -> Router {
    let upload_limit = state.config.max_upload_bytes + MULTIPART_SLACK;
    Router::new()
        .route("/api/health", get(health))
        .route("/api/template", get(template))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/import", post(import_session))
        .route("/api/sessions/{id}", get(get_session))
        .route("/api/sessions/{id}/answers/{qid}", put(put_answer).delete(delete_answer))
        .route("/api/sessions/{id}/staged-entities", post(stage_entity))
        .route("/api/sessions/{id}/staged-relations", post(stage_relation))
        .route("/api/sessions/{id}/rules", post(attach_rules))
        .route("/api/sessions/{id}/suggest/{qid}", get(suggest_route))
        .route("/api/sessions/{id}/completeness", get(completeness))
        .route("/api/sessions/{id}/wiki", get(wiki))
        .route("/api/sessions/{id}/export", post(export_session))
        .route("/api/kg/entities", get(find_entities).post(create_entity))
        .route("/api/kg/entities/{id}", get(get_entity))
        .route("/api/kg/entities/{id}/neighbors", get(neighbors))
        .route("/api/kg/entities/{id}/card", get(card))
        .route("/api/kg/relations", post(add_relation))
        .route("/api/kg/export", get(export_kg))
        .route("/api/kg/validate", get(validate_kg))
        .route(
            "/api/analysis/jobs",
            post(submit_job).layer(DefaultBodyLimit::max(upload_limit)),
        )
        .route("/api/analysis/jobs/{id}", get(get_job))
        .route("/api/analysis/jobs/{id}/rules", get(job_rules))
        .route(
            "/api/analysis/jobs/{id}/validate",
            post(validate_job).layer(DefaultBodyLimit::max(upload_limit)),
        )
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "NotFound", "no such route", Value::Null) })
        .with_state(state)
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

async fn template(State(st): S) -> Json<fairdoc::workflowdoc::QuestionnaireTemplate> {
    Json(st.template.clone())
}

// ---- sessions

async fn create_session(State(st): S) -> (StatusCode, Json<DocumentationSession>) {
    (StatusCode::CREATED, Json(st.insert_session(DocumentationSession::new(&st.template))))
}

async fn import_session(State(st): S, body: axum::body::Bytes) -> ApiResult<(StatusCode, Json<DocumentationSession>)> {
    let s = load_session(&body, &st.template)?;
    if st.session(s.id()).is_ok() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "DuplicateSession",
            format!("session `{}` already exists", s.id()),
            json!({ "id": s.id() }),
        ));
    }
    Ok((StatusCode::CREATED, Json(st.insert_session(s))))
}

async fn get_session(State(st): S, Path(id): Path<String>) -> ApiResult<Json<DocumentationSession>> {
    Ok(Json(st.session(&id)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerBody {
    pub value: AnswerValue,
}

async fn put_answer(
    State(st): S,
    Path((id, qid)): Path<(String, String)>,
    Json(body): Json<AnswerBody>,
) -> ApiResult<Json<DocumentationSession>> {
    let (_, s) = st.update_session(&id, |s| {
        let kg = st.kg();
        Ok(s.set_answer(&st.template, &kg, &qid, body.value)?)
    })?;
    Ok(Json(s))
}

async fn delete_answer(State(st): S, Path((id, qid)): Path<(String, String)>) -> ApiResult<Json<DocumentationSession>> {
    let (_, s) = st.update_session(&id, |s| Ok(s.clear_answer(&st.template, &qid)?))?;
    Ok(Json(s))
}

async fn stage_entity(
    State(st): S,
    Path(id): Path<String>,
    Json(entity): Json<NewEntity>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let (staged, _) = st.update_session(&id, |s| Ok(s.stage_entity(entity)?))?;
    Ok((StatusCode::CREATED, Json(json!({ "id": staged }))))
}

async fn stage_relation(State(st): S, Path(id): Path<String>, Json(t): Json<Triple>) -> ApiResult<Json<Value>> {
    let (added, _) = st.update_session(&id, |s| {
        let kg = st.kg();
        Ok(s.stage_relation(&kg, &t.src, t.relation, &t.dst)?)
    })?;
    Ok(Json(json!({ "added": added })))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttachBody {
    pub job_id: String,
    #[serde(default)]
    pub name: Option<String>,
}

async fn attach_rules(State(st): S, Path(id): Path<String>, Json(body): Json<AttachBody>) -> ApiResult<Json<DocumentationSession>> {
    let job = finished_job(&st, &body.job_id)?;
    let done = job.result.as_ref().expect("done jobs carry a result");
    let name = body.name.unwrap_or(job.file_name.clone());
    let (_, s) = st.update_session(&id, |s| {
        s.attach_rules(RulesAttachment::from_rule_set(name, &done.rules));
        Ok(())
    })?;
    Ok(Json(s))
}

#[derive(Debug, Default, Deserialize)]
pub struct SuggestParams {
    #[serde(default)]
    pub q: String,
}

async fn suggest_route(
    State(st): S,
    Path((id, qid)): Path<(String, String)>,
    Query(p): Query<SuggestParams>,
) -> ApiResult<Json<Value>> {
    let session = st.session(&id)?;
    blocking(move || {
        let kg = st.kg();
        let hits = suggest(&st.template, &session, &qid, &p.q, &kg, &st.resolver)?;
        Ok(Json(serde_json::to_value(hits).expect("suggestions serialize")))
    })
    .await
}

async fn completeness(State(st): S, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let missing = st.session(&id)?.completeness(&st.template);
    Ok(Json(json!({ "complete": missing.is_empty(), "missing": missing })))
}

#[derive(Debug, Default, Deserialize)]
pub struct WikiParams {
    #[serde(default)]
    pub force: bool,
}

async fn wiki(State(st): S, Path(id): Path<String>, Query(p): Query<WikiParams>) -> ApiResult<Json<Value>> {
    let page = render_wiki(&st.template, &st.session(&id)?, p.force)?;
    Ok(Json(serde_json::to_value(page).expect("page serializes")))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportBody {
    #[serde(default)]
    pub dedup_policy: DedupPolicy,
}

#[derive(Debug, Serialize)]
pub struct ExportResponse {
    pub wiki_markdown: String,
    pub export_report: ExportReport,
}

/// The body is optional; an empty one means the default policy.
async fn export_session(State(st): S, Path(id): Path<String>, body: axum::body::Bytes) -> ApiResult<Json<ExportResponse>> {
    let policy = if body.iter().all(u8::is_ascii_whitespace) {
        DedupPolicy::default()
    } else {
        serde_json::from_slice::<ExportBody>(&body)
            .map_err(|e| ApiError::bad_request("BadJson", e.to_string()))?
            .dedup_policy
    };
    let (out, _) = st.update_session(&id, |s| {
        let report = st.mutate_kg(|kg| Ok(export_to_kg(&st.template, s, kg, policy)?))?;
        let page = render_wiki(&st.template, s, false)?;
        Ok(ExportResponse { wiki_markdown: page.markdown, export_report: report })
    })?;
    Ok(Json(out))
}

// ---- knowledge graph

#[derive(Debug, Default, Deserialize)]
pub struct FindParams {
    pub kind: Option<String>,
    pub q: Option<String>,
    pub scheme: Option<String>,
    pub value: Option<String>,
}

impl FindParams {
    pub fn to_query(&self) -> Result<EntityQuery, ApiError> {
        let kind = match self.kind.as_deref().filter(|k| !k.is_empty()) {
            Some(k) => Some(k.parse::<EntityKind>()?),
            None => None,
        };
        let external_id = match (&self.scheme, &self.value) {
            (Some(s), Some(v)) => Some((s.clone(), v.clone())),
            (None, None) => None,
            _ => return Err(ApiError::bad_request("BadQuery", "scheme and value go together")),
        };
        Ok(EntityQuery { kind, label: self.q.clone().filter(|q| !q.is_empty()), external_id })
    }
}

async fn find_entities(State(st): S, Query(p): Query<FindParams>) -> ApiResult<Json<Value>> {
    let q = p.to_query()?;
    let kg = st.kg();
    Ok(Json(serde_json::to_value(kg.find_entities(&q)).expect("entities serialize")))
}

async fn get_entity(State(st): S, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let kg = st.kg();
    let e = kg.entity(&id).ok_or_else(|| ApiError::not_found("entity", &id))?;
    Ok(Json(serde_json::to_value(e).expect("entity serializes")))
}

#[derive(Debug, Default, Deserialize)]
pub struct NeighborParams {
    pub direction: Option<Direction>,
    pub relation: Option<String>,
}

async fn neighbors(State(st): S, Path(id): Path<String>, Query(p): Query<NeighborParams>) -> ApiResult<Json<Value>> {
    let relation = p.relation.as_deref().map(str::parse::<RelationKind>).transpose()?;
    let kg = st.kg();
    let hits = kg.neighbors(&id, p.direction.unwrap_or(Direction::Both), relation)?;
    Ok(Json(serde_json::to_value(hits).expect("neighbors serialize")))
}

async fn card(State(st): S, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let card = st.kg().model_card(&id)?;
    Ok(Json(serde_json::to_value(card).expect("card serializes")))
}

#[derive(Debug, Default, Deserialize)]
pub struct CreateParams {
    #[serde(default)]
    pub dedup_policy: DedupPolicy,
}

async fn create_entity(
    State(st): S,
    Query(p): Query<CreateParams>,
    Json(entity): Json<NewEntity>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let outcome = st.mutate_kg(|kg| Ok(kg.create_entity(entity, p.dedup_policy)?))?;
    let status = if outcome.created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(serde_json::to_value(outcome).expect("outcome serializes"))))
}

async fn add_relation(State(st): S, Json(t): Json<Triple>) -> ApiResult<(StatusCode, Json<Value>)> {
    let added = st.mutate_kg(|kg| Ok(kg.add_relation(&t.src, t.relation, &t.dst)?))?;
    let status = if added { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(json!({ "added": added }))))
}

pub const DEFAULT_BASE_IRI: &str = "https://example.org/fairdoc/";

#[derive(Debug, Default, Deserialize)]
pub struct ExportParams {
    pub format: Option<String>,
    pub base: Option<String>,
}

async fn export_kg(State(st): S, Query(p): Query<ExportParams>) -> ApiResult<Response> {
    let kg = st.kg();
    match p.format.as_deref().unwrap_or("json") {
        "json" => Ok(([(header::CONTENT_TYPE, "application/json")], export_json(&kg)).into_response()),
        "triples" => {
            let bytes = export_triples(&kg, p.base.as_deref().unwrap_or(DEFAULT_BASE_IRI))?;
            Ok(([(header::CONTENT_TYPE, "application/n-triples")], bytes).into_response())
        }
        other => Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "UnknownFormat",
            format!("unknown export format `{other}`"),
            json!({ "allowed": ["json", "triples"] }),
        )),
    }
}

async fn validate_kg(State(st): S) -> Json<Value> {
    Json(serde_json::to_value(st.kg().validate()).expect("report serializes"))
}

// ---- analysis jobs

struct Upload {
    file_name: String,
    bytes: Vec<u8>,
    order: Option<String>,
}

async fn read_upload(mut mp: Multipart, limit: usize) -> ApiResult<Upload> {
    let mut up = Upload { file_name: String::new(), bytes: Vec::new(), order: None };
    let mut seen_file = false;
    while let Some(field) = mp.next_field().await.map_err(multipart_error)? {
        match field.name().unwrap_or_default() {
            "file" => {
                up.file_name = field.file_name().unwrap_or("upload.csv").to_string();
                up.bytes = field.bytes().await.map_err(multipart_error)?.to_vec();
                seen_file = true;
            }
            "order" => up.order = Some(field.text().await.map_err(multipart_error)?),
            _ => {}
        }
    }
    if !seen_file {
        return Err(ApiError::bad_request("MissingFile", "multipart field `file` is required"));
    }
    if up.bytes.len() > limit {
        return Err(too_large(limit));
    }
    Ok(up)
}

#[derive(Debug, Default, Deserialize)]
pub struct OrderParams {
    pub order: Option<String>,
}

fn parse_order(text: Option<&str>) -> ApiResult<TermOrder> {
    match text.map(str::trim).filter(|t| !t.is_empty()) {
        None => Ok(TermOrder::default()),
        Some(t) => t.parse().map_err(|_| {
            ApiError::new(
                StatusCode::BAD_REQUEST,
                "UnknownOrder",
                format!("unknown term order `{t}`"),
                json!({ "allowed": ["lex", "deglex", "degrevlex"] }),
            )
        }),
    }
}

async fn submit_job(State(st): S, Query(p): Query<OrderParams>, mp: Multipart) -> ApiResult<(StatusCode, Json<AnalysisJob>)> {
    let up = read_upload(mp, st.config.max_upload_bytes).await?;
    let order = parse_order(up.order.as_deref().or(p.order.as_deref()))?;
    let dataset = Dataset::load_csv(&up.bytes)?;
    let job = st.jobs.submit(dataset, order, &up.file_name);
    Ok((StatusCode::ACCEPTED, Json(job)))
}

fn job(st: &AppState, id: &str) -> ApiResult<AnalysisJob> {
    st.jobs.get(id).ok_or_else(|| ApiError::not_found("job", id))
}

fn finished_job(st: &AppState, id: &str) -> ApiResult<AnalysisJob> {
    let j = job(st, id)?;
    match j.state {
        JobState::Done => Ok(j),
        state => Err(ApiError::new(
            StatusCode::CONFLICT,
            "JobNotDone",
            format!("job `{id}` is {}", serde_json::to_value(state).unwrap().as_str().unwrap_or("")),
            json!({ "state": state, "error": j.error }),
        )),
    }
}

async fn get_job(State(st): S, Path(id): Path<String>) -> ApiResult<Json<AnalysisJob>> {
    Ok(Json(job(&st, &id)?))
}

async fn job_rules(State(st): S, Path(id): Path<String>) -> ApiResult<Response> {
    let j = finished_job(&st, &id)?;
    let bytes = j.result.expect("done jobs carry a result").json.clone();
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

#[derive(Debug, Default, Deserialize)]
pub struct ValidateParams {
    #[serde(default)]
    pub allow_other_dataset: bool,
}

async fn validate_job(
    State(st): S,
    Path(id): Path<String>,
    Query(p): Query<ValidateParams>,
    mp: Multipart,
) -> ApiResult<Json<Value>> {
    let j = finished_job(&st, &id)?;
    let up = read_upload(mp, st.config.max_upload_bytes).await?;
    let ds = Dataset::load_csv(&up.bytes)?;
    let done = j.result.expect("done jobs carry a result");
    let report = validate_rules(&done.rules, &ds, p.allow_other_dataset)?;
    Ok(Json(serde_json::to_value(report).expect("report serializes")))
}
