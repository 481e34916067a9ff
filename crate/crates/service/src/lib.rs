//! HTTP API and shared request handling for the contextual-explanation
//! service.
//!
//! [`Store`] holds the loaded corpus, knowledge files and patients.
//! [`answer::answer`] is the single answering path used by both the CLI and
//! the `/answer` route.

pub mod answer;
pub mod config;
pub mod error;
pub mod http;
pub mod report;
pub mod store;

pub use answer::{AnswerCache, AnswerRequest, AnswerResponse};
pub use config::ServiceConfig;
pub use error::ServiceError;
pub use http::{router, AppState};
pub use store::Store;
