// Starts the HTTP API on a free local port and walks one session through it
// with plain HTTP/1.1 requests: create, resolve every conflict, finalize,
// download the merged model.
//
//     cargo run --example http_server
//
// For a long-running server use `fmit serve --port 8087` instead.

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};

use fmit::server::{serve_on, ServerConfig};
use serde_json::{json, Value};

const BASE: &str = include_str!("../fixtures/worked/city_base.xml");
const OTHER: &str = include_str!("../fixtures/worked/city_other.xml");

fn request(addr: SocketAddr, method: &str, path: &str, body: Option<&Value>) -> (u16, String) {
    let body = body.map(Value::to_string).unwrap_or_default();
    let mut stream = TcpStream::connect(addr).expect("server is up");
    write!(
        stream,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = String::new();
    stream.read_to_string(&mut raw).unwrap();
    let status = raw[9..12].parse().unwrap();
    let (_, payload) = raw.split_once("\r\n\r\n").unwrap_or((&raw, ""));
    (status, payload.to_owned())
}

fn main() {
    let rt = tokio::runtime::Runtime::new().unwrap();
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let addr = listener.local_addr().unwrap();
    rt.spawn(async move { serve_on(listener, &ServerConfig::default()).await });
    println!("listening on http://{addr}");

    let (status, body) =
        request(addr, "POST", "/api/sessions", Some(&json!({ "base_xml": BASE, "other_xml": OTHER })));
    let created: Value = serde_json::from_str(&body).unwrap();
    let id = created["session_id"].as_str().unwrap().to_owned();
    println!("POST /api/sessions -> {status}, cee {}", created["report"]["cee"]);

    for cid in created["pending"].as_array().unwrap() {
        let path = format!("/api/sessions/{id}/conflicts/{cid}/resolution");
        let (status, body) = request(addr, "POST", &path, Some(&json!({ "choice": "keep_base" })));
        let conflict: Value = serde_json::from_str(&body).unwrap();
        println!("resolve #{cid} ({}) -> {status}", conflict["kind"]);
    }

    let (status, body) = request(addr, "POST", &format!("/api/sessions/{id}/finalize"), None);
    let done: Value = serde_json::from_str(&body).unwrap();
    println!("finalize -> {status}, post-merge cee {}", done["post_report"]["cee"]);

    let (status, xml) = request(addr, "GET", &format!("/api/sessions/{id}/merged.xml"), None);
    println!("GET merged.xml -> {status}\n{xml}");
    assert!(fmit::xml::parse_str(&xml).is_ok());
}
