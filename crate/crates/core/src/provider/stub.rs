//! Deterministic stand-in for an embedding service.
//!
//! Each text maps to a pseudo-random unit vector seeded by its SHA-256, so
//! tests and demos need neither network access nor a model download.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{normalize, UnitVector};

/// The stub's vector for `text`.
pub fn stub_vector(text: &str, dimension: usize) -> UnitVector {
    let digest = Sha256::digest(text.as_bytes());
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    let mut rng = ChaCha8Rng::from_seed(seed);
    loop {
        let raw: Vec<f64> = (0..dimension)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        if let Ok(v) = normalize(&raw) {
            return v;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct StubOptions {
    pub dimension: usize,
    /// Answer this many requests with HTTP 503 before serving normally.
    pub fail_first: usize,
    /// Return one embedding fewer than requested.
    pub short_response: bool,
}

#[derive(Debug, Default)]
struct Counters {
    requests: AtomicUsize,
    texts: AtomicUsize,
}

#[derive(Deserialize)]
struct Request {
    texts: Vec<String>,
}

/// An in-process stub service on an ephemeral localhost port. Stops on drop.
pub struct StubServer {
    server: Arc<tiny_http::Server>,
    counters: Arc<Counters>,
    addr: SocketAddr,
    worker: Option<JoinHandle<()>>,
}

impl StubServer {
    pub fn start(options: StubOptions) -> Result<Self> {
        Self::bind("127.0.0.1:0", options)
    }

    pub fn bind(addr: &str, options: StubOptions) -> Result<Self> {
        if options.dimension < 2 {
            return Err(Error::BadParams("stub dimension must be at least 2".into()));
        }
        let server = tiny_http::Server::http(addr)
            .map_err(|e| Error::io(addr, std::io::Error::other(e.to_string())))?;
        let addr = server
            .server_addr()
            .to_ip()
            .ok_or_else(|| Error::BadParams("stub must listen on an IP address".into()))?;
        let server = Arc::new(server);
        let counters = Arc::new(Counters::default());
        let worker = {
            let server = Arc::clone(&server);
            let counters = Arc::clone(&counters);
            std::thread::spawn(move || serve(&server, &counters, &options))
        };
        Ok(Self {
            server,
            counters,
            addr,
            worker: Some(worker),
        })
    }

    pub fn url(&self) -> String {
        format!("http://{}/embed", self.addr)
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Number of HTTP requests received so far.
    pub fn requests(&self) -> usize {
        self.counters.requests.load(Ordering::SeqCst)
    }

    /// Number of texts embedded so far.
    pub fn texts_served(&self) -> usize {
        self.counters.texts.load(Ordering::SeqCst)
    }

    /// Blocks until the server stops.
    pub fn join(mut self) {
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

fn serve(server: &tiny_http::Server, counters: &Counters, options: &StubOptions) {
    let json =
        tiny_http::Header::from_bytes("Content-Type", "application/json").expect("static header");
    for mut request in server.incoming_requests() {
        let seen = counters.requests.fetch_add(1, Ordering::SeqCst);
        if seen < options.fail_first {
            let _ = request
                .respond(tiny_http::Response::from_string("unavailable").with_status_code(503));
            continue;
        }
        let mut body = String::new();
        let parsed = request
            .as_reader()
            .read_to_string(&mut body)
            .ok()
            .and_then(|_| serde_json::from_str::<Request>(&body).ok());
        let Some(parsed) = parsed else {
            let _ = request
                .respond(tiny_http::Response::from_string("bad request").with_status_code(400));
            continue;
        };
        counters
            .texts
            .fetch_add(parsed.texts.len(), Ordering::SeqCst);
        let mut embeddings: Vec<Vec<f64>> = parsed
            .texts
            .iter()
            .map(|t| stub_vector(t, options.dimension).into_inner())
            .collect();
        if options.short_response {
            embeddings.pop();
        }
        let payload = serde_json::json!({ "embeddings": embeddings }).to_string();
        let _ =
            request.respond(tiny_http::Response::from_string(payload).with_header(json.clone()));
    }
}
