mod common;

use std::sync::Arc;

use axum::http::{Method, StatusCode};
use common::{app, app_with, config, fixture_bytes, logical_data_analysis, text};
use fairdoc::modelkg::{export_json, import_json};
use fairdoc::rulemine::{export_rules_json, mine_rules, Dataset};
use fairdoc_service::{bind, serve_until, AppState, ServeError, ServiceConfig};
use serde_json::{json, Value};

#[tokio::test]
async fn health_reports_version() {
    let t = app();
    let r = t.get("/api/health").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }));
}

#[tokio::test]
async fn scripted_flow_exports_golden_wiki() {
    let t = app();
    let sid = logical_data_analysis(&t).await;
    let c = t.get(&format!("/api/sessions/{sid}/completeness")).await.json();
    assert_eq!(c, json!({ "complete": true, "missing": [] }));

    let r = t.post(&format!("/api/sessions/{sid}/export"), json!({ "dedup_policy": "reuse" })).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text());
    let body = r.json();
    let wiki = body["wiki_markdown"].as_str().unwrap();
    assert!(wiki.starts_with("# Logical Data Analysis\n"));
    let golden = String::from_utf8(fixture_bytes("golden/logical_data_analysis.md")).unwrap();
    assert_eq!(wiki, golden);
    assert_eq!(body["export_report"]["created"].as_array().unwrap().len(), 18);

    // the store on disk is the live graph
    let on_disk = std::fs::read(t.dir.path().join("store/kg.json")).unwrap();
    let exported = t.get("/api/kg/export?format=json").await;
    assert_eq!(exported.bytes, on_disk);
    assert_eq!(on_disk, fixture_bytes("kg/object_comparison.json"));

    // exporting again (empty body means reuse) creates nothing
    let again = t.call(Method::POST, &format!("/api/sessions/{sid}/export"), None).await.json();
    assert_eq!(again["export_report"]["created"], json!([]));
    assert_eq!(again["export_report"]["relations_added"], json!([]));
}

#[tokio::test]
async fn two_row_upload_gives_one_rule() {
    let t = app();
    let csv = fixture_bytes("data/two_rows.csv");
    let r = t.upload("/api/analysis/jobs", "two_rows.csv", &csv, Some("lex")).await;
    assert_eq!(r.status, StatusCode::ACCEPTED);
    let queued = r.json();
    assert_eq!(queued["order"], "lex");
    let id = queued["job_id"].as_str().unwrap();
    let done = t.wait_job(id).await;
    assert_eq!(done["state"], "done");
    assert_eq!(done["rule_count"], 1);
    let rules = t.get(&format!("/api/analysis/jobs/{id}/rules")).await;
    let expected = mine_rules(&Dataset::load_csv(&csv).unwrap(), "lex".parse().unwrap()).unwrap();
    assert_eq!(rules.bytes, export_rules_json(&expected));
    assert_eq!(rules.json()["rules"][0]["text"], "head ⇔ base");

    // a second job over the same data gives the same bytes
    let r2 = t.upload("/api/analysis/jobs?order=lex", "again.csv", &csv, None).await.json();
    let id2 = r2["job_id"].as_str().unwrap();
    t.wait_job(id2).await;
    assert_eq!(t.get(&format!("/api/analysis/jobs/{id2}/rules")).await.bytes, rules.bytes);
}

#[tokio::test]
async fn upload_errors() {
    let t = app();
    let bad = t.upload("/api/analysis/jobs", "bad.csv", &fixture_bytes("data/bad_cell.csv"), None).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    let body = bad.json();
    assert_eq!(body["code"], "NonBinaryCell");
    assert_eq!(body["detail"]["value"], "2");

    let mut big = b"object_id,a\n".to_vec();
    for i in 0..1000 {
        big.extend_from_slice(format!("S{i},1\n").as_bytes());
    }
    let r = t.upload("/api/analysis/jobs", "big.csv", &big, None).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(r.json()["code"], "PayloadTooLarge");

    let r = t.upload("/api/analysis/jobs", "x.csv", b"object_id,a\nS1,1\n", Some("revlex")).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::BAD_REQUEST, json!("UnknownOrder")));
}

#[tokio::test]
async fn validation_checks_the_digest() {
    let t = app();
    let csv = fixture_bytes("data/two_rows.csv");
    let id = t.upload("/api/analysis/jobs", "two_rows.csv", &csv, None).await.json()["job_id"]
        .as_str()
        .unwrap()
        .to_string();
    t.wait_job(&id).await;
    let same = t.upload(&format!("/api/analysis/jobs/{id}/validate"), "x.csv", &csv, None).await;
    assert_eq!(same.status, StatusCode::OK, "{}", same.text());
    assert_eq!(same.json()["total_violations"], 0);

    let other = b"object_id,head,base\nS1,1,0\n";
    let r = t.upload(&format!("/api/analysis/jobs/{id}/validate"), "o.csv", other, None).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::CONFLICT, json!("DigestMismatch")));
    let r = t
        .upload(&format!("/api/analysis/jobs/{id}/validate?allow_other_dataset=true"), "o.csv", other, None)
        .await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["total_violations"], 1);
}

#[tokio::test]
async fn unknown_ids_are_404() {
    let t = app();
    for uri in [
        "/api/sessions/nope",
        "/api/sessions/nope/completeness",
        "/api/kg/entities/model-999999",
        "/api/kg/entities/model-999999/card",
        "/api/kg/entities/model-999999/neighbors",
        "/api/analysis/jobs/nope",
        "/api/analysis/jobs/nope/rules",
        "/api/nothing-here",
    ] {
        let r = t.get(uri).await;
        assert_eq!(r.status, StatusCode::NOT_FOUND, "{uri}");
        let body = r.json();
        assert!(body["code"].is_string() && body["message"].is_string(), "{uri}: {body}");
    }
    let sid = t.post("/api/sessions", json!(null)).await.json()["id"].as_str().unwrap().to_string();
    let r = t.answer(&sid, "no_such_question", text("x")).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::NOT_FOUND, json!("UnknownQuestion")));
}

#[tokio::test]
async fn validation_errors_are_400_and_conflicts_409() {
    let t = app();
    let sid = t.post("/api/sessions", json!(null)).await.json()["id"].as_str().unwrap().to_string();
    let r = t.answer(&sid, "title", json!({ "type": "flag", "value": true })).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::BAD_REQUEST, json!("TypeMismatch")));
    let r = t.post(&format!("/api/sessions/{sid}/export"), json!({})).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::BAD_REQUEST, json!("IncompleteSession")));
    let r = t.put(&format!("/api/sessions/{sid}/answers/title"), json!({ "nope": 1 })).await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::BAD_REQUEST, json!("BadJson")));

    let e = json!({ "kind": "Software", "label": "Julia" });
    assert_eq!(t.post("/api/kg/entities", e.clone()).await.status, StatusCode::CREATED);
    let reuse = t.post("/api/kg/entities", e.clone()).await;
    assert_eq!((reuse.status, reuse.json()["created"].clone()), (StatusCode::OK, json!(false)));
    let strict = t.post("/api/kg/entities?dedup_policy=strict", e).await;
    assert_eq!((strict.status, strict.json()["code"].clone()), (StatusCode::CONFLICT, json!("DuplicateEntity")));
    let r = t.get("/api/kg/entities?kind=Gadget").await;
    assert_eq!((r.status, r.json()["code"].clone()), (StatusCode::BAD_REQUEST, json!("InvalidKind")));
    let r = t.get("/api/kg/export?format=xml").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn reads_never_touch_the_store() {
    let t = app();
    let m = t.post("/api/kg/entities", json!({ "kind": "MathematicalModel", "label": "M" })).await.json();
    let id = m["id"].as_str().unwrap();
    let store = t.dir.path().join("store/kg.json");
    let before = std::fs::read(&store).unwrap();
    let sid = t.post("/api/sessions", json!(null)).await.json()["id"].as_str().unwrap().to_string();
    for uri in [
        "/api/health".to_string(),
        "/api/template".to_string(),
        "/api/kg/entities?q=m".to_string(),
        format!("/api/kg/entities/{id}"),
        format!("/api/kg/entities/{id}/card"),
        format!("/api/kg/entities/{id}/neighbors?direction=out"),
        "/api/kg/export?format=triples".to_string(),
        "/api/kg/validate".to_string(),
        format!("/api/sessions/{sid}/suggest/model?q=m"),
        format!("/api/sessions/{sid}/wiki?force=true"),
    ] {
        assert_eq!(t.get(&uri).await.status, StatusCode::OK, "{uri}");
    }
    // session edits stay in the session until export
    t.answer(&sid, "model", json!({ "type": "ref", "value": id })).await;
    t.post(&format!("/api/sessions/{sid}/staged-entities"), json!({ "kind": "Software", "label": "S" })).await;
    assert_eq!(std::fs::read(&store).unwrap(), before);
    assert_eq!(export_json(&t.state.kg()), before);
}

#[tokio::test]
async fn store_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let path = cfg.kg_store_path.clone();
    {
        let state = AppState::new(cfg.clone()).unwrap();
        let t = common::TestApp { app: fairdoc_service::router(state.clone()), state, dir: tempfile::tempdir().unwrap() };
        let a = t.post("/api/kg/entities", json!({ "kind": "MathematicalModel", "label": "A" })).await.json();
        let b = t.post("/api/kg/entities", json!({ "kind": "MathematicalModel", "label": "B" })).await.json();
        let r = t.post("/api/kg/relations", json!({ "src": a["id"], "relation": "generalizes", "dst": b["id"] })).await;
        assert_eq!(r.status, StatusCode::CREATED);
        let cyc = t.post("/api/kg/relations", json!({ "src": b["id"], "relation": "generalizes", "dst": a["id"] })).await;
        assert_eq!((cyc.status, cyc.json()["code"].clone()), (StatusCode::CONFLICT, json!("CycleIntroduced")));
    }
    let kg = import_json(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!((kg.len(), kg.relation_count()), (2, 1));
    let t = app_with(cfg, dir);
    assert_eq!(t.get("/api/kg/entities").await.json().as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn session_import_round_trips() {
    let t = app();
    let sid = t.post("/api/sessions", json!(null)).await.json()["id"].as_str().unwrap().to_string();
    t.answer(&sid, "title", text("T")).await;
    let saved = t.get(&format!("/api/sessions/{sid}")).await.bytes;
    let dup = t
        .send(
            axum::http::Request::post("/api/sessions/import")
                .body(axum::body::Body::from(saved.clone()))
                .unwrap(),
        )
        .await;
    assert_eq!(dup.status, StatusCode::CONFLICT);

    let other = common::app();
    let r = other
        .send(axum::http::Request::post("/api/sessions/import").body(axum::body::Body::from(saved)).unwrap())
        .await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(r.json()["answers"]["title"], json!({ "type": "text", "value": "T" }));
}

#[tokio::test]
async fn bind_to_occupied_port_fails() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let cfg = ServiceConfig { port: taken.local_addr().unwrap().port(), ..ServiceConfig::default() };
    assert!(matches!(bind(&cfg).await, Err(ServeError::BindFailure { .. })));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn shutdown_serves_then_aborts_pending_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ServiceConfig { port: 0, ..config(dir.path()) };
    let state: Arc<AppState> = AppState::new(cfg.clone()).unwrap();
    let listener = bind(&cfg).await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (tx, rx) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(serve_until(state.clone(), listener, async {
        let _ = rx.await;
    }));

    // a real request over TCP
    let body = tokio::task::spawn_blocking(move || {
        use std::io::{Read, Write};
        let mut s = std::net::TcpStream::connect(addr).unwrap();
        s.write_all(b"GET /api/health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n").unwrap();
        let mut out = String::new();
        s.read_to_string(&mut out).unwrap();
        out
    })
    .await
    .unwrap();
    assert!(body.starts_with("HTTP/1.1 200"), "{body}");

    // occupy the only worker with a large job so the next one stays queued
    let mut rows = String::from("object_id");
    for p in 0..11 {
        rows.push_str(&format!(",p{p}"));
    }
    rows.push('\n');
    for i in 0..(1 << 11) {
        rows.push_str(&format!("O{i}"));
        for p in 0..11 {
            rows.push_str(if (i >> p) & 1 == 1 { ",1" } else { ",0" });
        }
        rows.push('\n');
    }
    let ds = Dataset::load_csv(rows.as_bytes()).unwrap();
    let (first, second) = (
        state.jobs.submit(ds.clone(), Default::default(), "a"),
        state.jobs.submit(ds, Default::default(), "b"),
    );
    tx.send(()).unwrap();
    server.await.unwrap().unwrap();
    let j = state.jobs.get(&second.job_id).unwrap();
    assert_eq!(serde_json::to_value(j.state).unwrap(), Value::from("failed"));
    assert_eq!(j.error.as_deref(), Some("aborted"));
    let f = state.jobs.get(&first.job_id).unwrap();
    assert!(f.error.as_deref() == Some("aborted") || f.rule_count.is_some());
}
