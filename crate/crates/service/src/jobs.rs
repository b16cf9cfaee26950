//! Background computations that clients poll.

use std::sync::Arc;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use plknot_core::analysis::Progress;
use plknot_core::Error;
use serde::Serialize;
use serde_json::{json, Value};
use tokio::sync::watch;

use crate::error::ApiError;
use crate::wait_duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Running,
    Done,
    Failed,
}

type Outcome = Option<Result<Value, ApiError>>;

pub struct Job {
    pub id: String,
    pub kind: &'static str,
    pub session: String,
    /// Session revision the job was started from.
    pub revision: u64,
    progress: Arc<Progress>,
    outcome: watch::Sender<Outcome>,
}

impl Job {
    pub fn spawn<F>(id: String, kind: &'static str, session: String, revision: u64, work: F) -> Arc<Job>
    where
        F: FnOnce(&Progress) -> Result<Value, Error> + Send + 'static,
    {
        let (tx, _) = watch::channel(None);
        let job = Arc::new(Job { id, kind, session, revision, progress: Arc::new(Progress::new()), outcome: tx });
        let runner = Arc::clone(&job);
        tokio::task::spawn_blocking(move || {
            let result = work(&runner.progress).map_err(ApiError::from);
            runner.outcome.send_replace(Some(result));
        });
        job
    }

    pub fn state(&self) -> JobState {
        match &*self.outcome.borrow() {
            None => JobState::Running,
            Some(Ok(_)) => JobState::Done,
            Some(Err(_)) => JobState::Failed,
        }
    }

    pub fn body(&self) -> Value {
        let (done, total) = self.progress.snapshot();
        let outcome = self.outcome.borrow();
        let (result, error) = match &*outcome {
            None => (Value::Null, Value::Null),
            Some(Ok(v)) => (v.clone(), Value::Null),
            Some(Err(e)) => (Value::Null, e.body()["error"].clone()),
        };
        json!({
            "id": self.id,
            "kind": self.kind,
            "session": self.session,
            "revision": self.revision,
            "state": self.state(),
            "progress": {"done": done, "total": total},
            "result": result,
            "error": error,
        })
    }

    /// Waits up to `wait_ms` for the job, then reports it: 200 once it has
    /// finished, 202 while it is still running.
    pub async fn respond(&self, wait_ms: u64) -> Response {
        let mut rx = self.outcome.subscribe();
        let _ = tokio::time::timeout(wait_duration(wait_ms), rx.wait_for(Option::is_some)).await;
        let status = if self.state() == JobState::Running { StatusCode::ACCEPTED } else { StatusCode::OK };
        (status, Json(self.body())).into_response()
    }
}
