mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use common::fixture;
use fmit::server::{router, router_with_store, ServerConfig, SessionStore};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn xml(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

fn city() -> Value {
    json!({ "base_xml": xml("worked/city_base.xml"), "other_xml": xml("worked/city_other.xml") })
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(v) => req.header("content-type", "application/json").body(Body::from(v.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (status, bytes) = call(app, method, uri, body).await;
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn create(app: &Router, body: Value) -> String {
    let (status, v) = call_json(app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["session_id"].as_str().unwrap().to_owned()
}

fn resolution(id: &str, cid: u32) -> String {
    format!("/api/sessions/{id}/conflicts/{cid}/resolution")
}

#[tokio::test]
async fn full_session_lifecycle() {
    let app = router(&ServerConfig::default());
    let (status, v) = call_json(&app, "POST", "/api/sessions", Some(city())).await;
    assert_eq!(status, StatusCode::CREATED);
    let id = v["session_id"].as_str().unwrap().to_owned();
    assert_eq!(id.len(), 32);
    assert_eq!(v["state"], "awaiting_resolutions");
    assert_eq!(v["pending"], json!([1, 2, 3]));
    assert_eq!(v["report"]["recommended_mode"], "semi_automatic");

    let (status, _) = call(&app, "GET", &format!("/api/sessions/{id}/merged.xml"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, v) = call_json(&app, "POST", &format!("/api/sessions/{id}/finalize"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(v["unresolved"], json!([1, 2, 3]));

    for (cid, choice) in [(1, "keep_other"), (2, "keep_base"), (3, "keep_base")] {
        let (status, v) = call_json(&app, "POST", &resolution(&id, cid), Some(json!({ "choice": choice }))).await;
        assert_eq!(status, StatusCode::OK, "{v}");
        assert_eq!(v["status"], json!({ "state": "resolved", "choice": choice }));
    }
    let (status, _) = call(&app, "POST", &resolution(&id, 1), Some(json!({ "choice": "keep_base" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, v) = call_json(&app, "POST", &format!("/api/sessions/{id}/finalize"), None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["state"], "finalized");
    assert!(v["post_report"]["cee"].as_f64().unwrap() > 0.6867);

    let (status, body) = call(&app, "GET", &format!("/api/sessions/{id}/merged.xml"), None).await;
    assert_eq!(status, StatusCode::OK);
    let merged = fmit::parse_xml(&body).unwrap().model;
    assert!(merged.find("Transporte").is_some());

    let (status, v) = call_json(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["state"], "finalized");
    let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/finalize"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn camel_case_fields_are_accepted() {
    let app = router(&ServerConfig::default());
    let body = json!({ "baseXml": xml("worked/city_base.xml"), "otherXml": xml("worked/city_other.xml"), "theta": 0.5 });
    let (status, v) = call_json(&app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(v["report"]["recommended_mode"], "automatic");
}

#[tokio::test]
async fn bad_requests() {
    let app = router(&ServerConfig::default());
    let (status, _) = call(&app, "GET", "/api/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/api/sessions/nope/finalize", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, v) = call_json(&app, "POST", "/api/sessions", Some(json!({ "base_xml": "<x/>", "other_xml": "" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(v["model"], "base");
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());

    let (status, _) = call(&app, "POST", "/api/sessions", Some(json!({ "base_xml": 1 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let mut body = city();
    body["tau"] = json!(1.5);
    let (status, _) = call(&app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let id = create(&app, city()).await;
    let (status, _) = call(&app, "POST", &resolution(&id, 99), Some(json!({ "choice": "keep_base" }))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/conflicts/abc/resolution"), Some(json!({ "choice": "keep_base" }))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", &resolution(&id, 1), Some(json!({ "choice": "both" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn structural_conflicts_cannot_be_resolved() {
    let app = router(&ServerConfig::default());
    let body = json!({
        "base_xml": xml("scenarios/s3_moved_feature/base.xml"),
        "other_xml": xml("scenarios/s3_moved_feature/other.xml"),
    });
    let (_, v) = call_json(&app, "POST", "/api/sessions", Some(body)).await;
    let id = v["session_id"].as_str().unwrap();
    assert_eq!(v["conflicts"][0]["kind"], "structural");
    assert_eq!(v["pending"], json!([]));
    let (status, _) = call(&app, "POST", &resolution(id, 1), Some(json!({ "choice": "keep_base" }))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/finalize"), None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn oversized_models_are_refused() {
    let config = ServerConfig { max_model_bytes: 256, ..ServerConfig::default() };
    let app = router(&config);
    let big = format!("{}<!--{}-->", xml("worked/city_base.xml"), "x".repeat(300));
    let body = json!({ "base_xml": big, "other_xml": xml("worked/city_other.xml") });
    let (status, _) = call(&app, "POST", "/api/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    let huge = json!({ "base_xml": "x".repeat(200_000), "other_xml": "" });
    let (status, _) = call(&app, "POST", "/api/sessions", Some(huge)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn least_recently_used_sessions_are_evicted() {
    let store = Arc::new(SessionStore::new(2));
    let app = router_with_store(&ServerConfig::default(), store.clone());
    let a = create(&app, city()).await;
    let b = create(&app, city()).await;
    // touch a so b becomes the oldest
    assert_eq!(call(&app, "GET", &format!("/api/sessions/{a}"), None).await.0, StatusCode::OK);
    let c = create(&app, city()).await;
    assert_eq!(store.len(), 2);
    assert_eq!(call(&app, "GET", &format!("/api/sessions/{b}"), None).await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&app, "GET", &format!("/api/sessions/{a}"), None).await.0, StatusCode::OK);
    assert_eq!(call(&app, "GET", &format!("/api/sessions/{c}"), None).await.0, StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn racing_resolutions_apply_once() {
    let app = router(&ServerConfig::default());
    for _ in 0..20 {
        let id = create(&app, city()).await;
        let tasks: Vec<_> = ["keep_base", "keep_other"]
            .into_iter()
            .map(|choice| {
                let (app, uri) = (app.clone(), resolution(&id, 2));
                tokio::spawn(async move { call(&app, "POST", &uri, Some(json!({ "choice": choice }))).await.0 })
            })
            .collect();
        let mut codes = Vec::new();
        for t in tasks {
            codes.push(t.await.unwrap());
        }
        codes.sort();
        assert_eq!(codes, [StatusCode::OK, StatusCode::CONFLICT]);
    }
}

#[tokio::test]
async fn root_serves_a_page_and_static_dir_when_given() {
    let app = router(&ServerConfig::default());
    let (status, body) = call(&app, "GET", "/", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(String::from_utf8(body).unwrap().contains("/api/sessions"));

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>ui</p>").unwrap();
    let app = router(&ServerConfig { static_dir: Some(dir.path().to_owned()), ..ServerConfig::default() });
    let (status, body) = call(&app, "GET", "/", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<p>ui</p>");
    assert_eq!(call(&app, "GET", "/api/sessions/nope", None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn cors_is_opt_in() {
    let preflight = |app: Router| async move {
        let req = Request::builder()
            .method("OPTIONS")
            .uri("/api/sessions")
            .header("origin", "http://example.com")
            .header("access-control-request-method", "POST")
            .body(Body::empty())
            .unwrap();
        app.oneshot(req).await.unwrap().headers().get("access-control-allow-origin").cloned()
    };
    assert!(preflight(router(&ServerConfig::default())).await.is_none());
    let open = router(&ServerConfig { permissive_cors: true, ..ServerConfig::default() });
    assert!(preflight(open).await.is_some());
}
