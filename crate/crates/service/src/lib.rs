//! Stateless HTTP/JSON advisor.
//!
//! | route | body / query |
//! |---|---|
//! | `GET /health` | |
//! | `POST /advise/jeopardy` | `{p1, p2, player}` |
//! | `POST /advise/weakest-link` | `{w, p1, p2, y1, y2}` |
//! | `GET /kuhn/strategy` | `?n=N&certify=true` |
//! | `POST /pdl/evaluate` | `{pdl, params}` |
//! | `POST /solve/2x2` | `{a, b, c, d, e, f, g, h}` |
//!
//! Malformed JSON answers 400, a missing or out-of-range field answers 422
//! naming the field, and unknown routes answer 404.

mod error;
mod handlers;

use std::net::SocketAddr;

use axum::http::{header, Method, Uri};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

pub use error::ApiError;
pub use handlers::{
    JeopardyAdvice, KuhnStrategy, KuhnTables, PdlEvaluation, SolvedGame, StrategyEntry, VoteEvs, WeakestLinkAdvice,
};

/// Largest deck for which `certify=true` computes NashConv.
pub const CERTIFY_MAX_N: usize = 200;

/// Router with CORS open to any origin.
pub fn router() -> Router {
    router_for(AllowOrigin::from(Any))
}

/// Router whose CORS policy admits `origins`.
pub fn router_for(origins: AllowOrigin) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(origins)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/health", get(handlers::health))
        .route("/advise/jeopardy", post(handlers::jeopardy))
        .route("/advise/weakest-link", post(handlers::weakest_link))
        .route("/kuhn/strategy", get(handlers::kuhn_strategy))
        .route("/pdl/evaluate", post(handlers::pdl_evaluate))
        .route("/solve/2x2", post(handlers::solve_2x2))
        .fallback(|uri: Uri| async move { ApiError::not_found(format!("no route for {}", uri.path())) })
        .layer(cors)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
