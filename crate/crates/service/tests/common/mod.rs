//! In-process HTTP helpers: requests go straight into the router.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use fairdoc_service::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_bytes(rel: &str) -> Vec<u8> {
    std::fs::read(fixtures_dir().join(rel)).unwrap()
}

pub struct TestApp {
    pub state: Arc<AppState>,
    pub app: Router,
    pub dir: tempfile::TempDir,
}

pub fn config(dir: &std::path::Path) -> ServiceConfig {
    ServiceConfig {
        kg_store_path: dir.join("store/kg.json"),
        fixtures_path: fixtures_dir(),
        max_upload_bytes: 4096,
        ..ServiceConfig::default()
    }
}

/// Must be called inside a tokio runtime.
pub fn app() -> TestApp {
    let dir = tempfile::tempdir().unwrap();
    app_with(config(dir.path()), dir)
}

pub fn app_with(cfg: ServiceConfig, dir: tempfile::TempDir) -> TestApp {
    let state = AppState::new(cfg).unwrap();
    TestApp { app: router(state.clone()), state, dir }
}

pub struct Reply {
    pub status: StatusCode,
    pub content_type: String,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes)
            .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.bytes)))
    }

    pub fn text(&self) -> String {
        String::from_utf8(self.bytes.clone()).unwrap()
    }
}

impl TestApp {
    pub async fn send(&self, req: Request<Body>) -> Reply {
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let content_type = resp
            .headers()
            .get("content-type")
            .map(|v| v.to_str().unwrap().to_string())
            .unwrap_or_default();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, content_type, bytes }
    }

    pub async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                req = req.header("content-type", "application/json");
                Body::from(serde_json::to_vec(&v).unwrap())
            }
            None => Body::empty(),
        };
        self.send(req.body(body).unwrap()).await
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.call(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str, body: Value) -> Reply {
        self.call(Method::POST, uri, Some(body)).await
    }

    pub async fn put(&self, uri: &str, body: Value) -> Reply {
        self.call(Method::PUT, uri, Some(body)).await
    }

    pub async fn upload(&self, uri: &str, file_name: &str, csv: &[u8], order: Option<&str>) -> Reply {
        let boundary = "fairdoc-test-boundary";
        let mut body = Vec::new();
        if let Some(o) = order {
            body.extend_from_slice(
                format!("--{boundary}\r\nContent-Disposition: form-data; name=\"order\"\r\n\r\n{o}\r\n").as_bytes(),
            );
        }
        body.extend_from_slice(
            format!(
                "--{boundary}\r\nContent-Disposition: form-data; name=\"file\"; filename=\"{file_name}\"\r\nContent-Type: text/csv\r\n\r\n"
            )
            .as_bytes(),
        );
        body.extend_from_slice(csv);
        body.extend_from_slice(format!("\r\n--{boundary}--\r\n").as_bytes());
        let req = Request::builder()
            .method(Method::POST)
            .uri(uri)
            .header("content-type", format!("multipart/form-data; boundary={boundary}"))
            .body(Body::from(body))
            .unwrap();
        self.send(req).await
    }

    /// Polls a job until it leaves the queue.
    pub async fn wait_job(&self, id: &str) -> Value {
        for _ in 0..1000 {
            let j = self.get(&format!("/api/analysis/jobs/{id}")).await.json();
            if j["state"] == "done" || j["state"] == "failed" {
                return j;
            }
            tokio::time::sleep(Duration::from_millis(5)).await;
        }
        panic!("job {id} did not finish");
    }

    pub async fn answer(&self, sid: &str, qid: &str, value: Value) -> Reply {
        self.put(&format!("/api/sessions/{sid}/answers/{qid}"), json!({ "value": value })).await
    }
}

pub fn text(s: &str) -> Value {
    json!({ "type": "text", "value": s })
}

/// Candidates with external provenance for `label` on an entity question.
async fn stage_external(t: &TestApp, sid: &str, qid: &str, label: &str) -> String {
    let hits = t.get(&format!("/api/sessions/{sid}/suggest/{qid}?q={label}")).await.json();
    let ext: Vec<&Value> = hits.as_array().unwrap().iter().filter(|h| h["provenance"] == "external").collect();
    assert_eq!(ext.len(), 1, "{hits}");
    let h = ext[0];
    let scheme = h["source"].as_str().unwrap();
    let entity = json!({
        "kind": h["kind"],
        "label": h["label"],
        "description": h["description"],
        "external_ids": { scheme: h["id"] },
    });
    let r = t.post(&format!("/api/sessions/{sid}/staged-entities"), entity).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text());
    r.json()["id"].as_str().unwrap().to_string()
}

async fn stage(t: &TestApp, sid: &str, entity: Value) -> String {
    let r = t.post(&format!("/api/sessions/{sid}/staged-entities"), entity).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text());
    r.json()["id"].as_str().unwrap().to_string()
}

/// The Logical Data Analysis documentation run, driven entirely over HTTP.
/// Mirrors the library-level script step for step. Returns the session id.
pub async fn logical_data_analysis(t: &TestApp) -> String {
    let s = t.post("/api/sessions", json!(null)).await;
    assert_eq!(s.status, StatusCode::CREATED);
    let sid = s.json()["id"].as_str().unwrap().to_string();
    let ok = |r: Reply| assert_eq!(r.status, StatusCode::OK, "{}", r.text());

    ok(t.answer(&sid, "title", text("Logical Data Analysis")).await);
    ok(t.answer(
        &sid,
        "objective",
        text("Discern rules behind the destruction patterns of statues from the Cachette de Karnak."),
    )
    .await);
    ok(t.answer(&sid, "workflow_kind", json!({ "type": "term", "value": "analysis" })).await);
    ok(t.answer(&sid, "publication_doi", json!({ "type": "doi", "value": "https://doi.org/10.1000/demo" })).await);
    let cite = t.get(&format!("/api/sessions/{sid}/suggest/publication_title")).await.json();
    let meta = &cite[0]["publication"];
    ok(t.answer(&sid, "publication_title", text(meta["title"].as_str().unwrap())).await);
    let authors: Vec<&str> = meta["authors"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
    ok(t.answer(&sid, "publication_authors", text(&authors.join(", "))).await);
    ok(t.answer(&sid, "publication_role", json!({ "type": "term", "value": "uses" })).await);

    let field = stage_external(t, &sid, "research_fields", "egypt").await;
    let problem = stage(t, &sid, json!({ "kind": "ResearchProblem", "label": "Destruction Patterns of Egyptian Statues" })).await;
    let model = stage(
        t,
        &sid,
        json!({
            "kind": "MathematicalModel",
            "label": "Object Comparison Model",
            "description": "Compares objects through the presence or absence of properties.",
        }),
    )
    .await;
    let ring = stage(
        t,
        &sid,
        json!({
            "kind": "MathematicalFormulation",
            "label": "Boolean Ring",
            "attributes": { "formula": "B_n = F_2[x_1..x_n]/(x_i^2 + x_i)" },
        }),
    )
    .await;
    let property = stage(t, &sid, json!({ "kind": "Quantity", "label": "Object Property" })).await;
    let boolean = stage(t, &sid, json!({ "kind": "QuantityKind", "label": "Boolean" })).await;
    let boolean_poly = stage(t, &sid, json!({ "kind": "QuantityKind", "label": "Boolean Polynomial" })).await;
    let task = stage(t, &sid, json!({ "kind": "ComputationalTask", "label": "Extraction of Logical Rules" })).await;
    let ideal = stage(
        t,
        &sid,
        json!({
            "kind": "MathematicalFormulation",
            "label": "Vanishing Ideal of Object Points",
            "attributes": { "formula": "I(P) = { f in B_n : f(p) = 0 for all p in P }" },
        }),
    )
    .await;
    let input = stage(t, &sid, json!({ "kind": "Quantity", "label": "object properties" })).await;
    let output = stage(t, &sid, json!({ "kind": "Quantity", "label": "logical rules" })).await;
    for (a, r, b) in [
        (&ring, "containsQuantity", &property),
        (&property, "hasQuantityKind", &boolean),
        (&task, "taskFormulation", &ideal),
        (&ideal, "containsQuantity", &input),
        (&ideal, "containsQuantity", &output),
        (&task, "inputQuantity", &input),
        (&task, "outputQuantity", &output),
        (&input, "hasQuantityKind", &boolean),
        (&output, "hasQuantityKind", &boolean_poly),
    ] {
        let rel = t
            .post(&format!("/api/sessions/{sid}/staged-relations"), json!({ "src": a, "relation": r, "dst": b }))
            .await;
        assert_eq!(rel.json(), json!({ "added": true }), "{a} {r} {b}");
    }

    let julia = stage_external(t, &sid, "software", "julia").await;
    let oscar = stage_external(t, &sid, "software", "oscar").await;
    let method = stage(t, &sid, json!({ "kind": "Method", "label": "Rules and Pattern Algorithm" })).await;
    let data_in = stage(
        t,
        &sid,
        json!({ "kind": "Dataset", "label": "Encoded Cachette Objects", "description": "333 objects, 16 binary properties" }),
    )
    .await;
    let data_out = stage(t, &sid, json!({ "kind": "Dataset", "label": "Mined Logical Rules" })).await;

    let list = |ids: &[&String]| json!({ "type": "ref_list", "value": ids });
    let one = |id: &String| json!({ "type": "ref", "value": id });
    let flag = |b: bool| json!({ "type": "flag", "value": b });
    ok(t.answer(&sid, "research_fields", list(&[&field])).await);
    ok(t.answer(&sid, "model", one(&model)).await);
    ok(t.answer(&sid, "research_problem", one(&problem)).await);
    ok(t.answer(&sid, "formulations", list(&[&ring])).await);
    ok(t.answer(&sid, "tasks", list(&[&task])).await);
    ok(t.answer(&sid, "methods", list(&[&method])).await);
    ok(t.answer(&sid, "software", list(&[&julia, &oscar])).await);
    ok(t.answer(&sid, "input_data", list(&[&data_in])).await);
    ok(t.answer(&sid, "output_data", list(&[&data_out])).await);
    ok(t.answer(&sid, "data_available", flag(false)).await);
    ok(t.answer(&sid, "code_available", flag(true)).await);
    ok(t.answer(&sid, "deterministic", flag(true)).await);
    ok(t.answer(&sid, "environment_notes", text("Julia with the OSCAR package")).await);

    let job = t.upload("/api/analysis/jobs", "two_rows.csv", &fixture_bytes("data/two_rows.csv"), None).await;
    assert_eq!(job.status, StatusCode::ACCEPTED, "{}", job.text());
    let job_id = job.json()["job_id"].as_str().unwrap().to_string();
    assert_eq!(t.wait_job(&job_id).await["state"], "done");
    ok(t.post(&format!("/api/sessions/{sid}/rules"), json!({ "job_id": job_id })).await);
    sid
}
