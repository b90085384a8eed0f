//! Clients for the semantic scoring service. Both transports speak the same
//! JSON bodies: a request with the file text and the stage descriptions,
//! answered by one score per stage.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use pysmell::stages::{ScoreResponse, ScoreSource, StageDescriptions, StageLabel};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct Health {
    pub model_id: String,
}

/// POST /classify over HTTP.
pub struct HttpScorer {
    agent: ureq::Agent,
    base: String,
    descriptions: StageDescriptions,
}

impl HttpScorer {
    pub fn new(endpoint: &str, timeout: Duration, descriptions: StageDescriptions) -> Self {
        Self {
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
            base: endpoint.trim_end_matches('/').to_string(),
            descriptions,
        }
    }

    pub fn health(&self) -> Result<Health> {
        let resp = self.agent.get(&format!("{}/health", self.base)).call()?;
        Ok(resp.into_json()?)
    }
}

impl ScoreSource for HttpScorer {
    fn scores(&mut self, text: &str) -> Result<Option<BTreeMap<StageLabel, f64>>, String> {
        let request = self.descriptions.request(text);
        let response: ScoreResponse = self
            .agent
            .post(&format!("{}/classify", self.base))
            .send_json(&request)
            .map_err(|e| e.to_string())?
            .into_json()
            .map_err(|e| e.to_string())?;
        response.validate(&request).map(Some).map_err(|e| e.to_string())
    }
}

/// One JSON request per line on a child's stdin, one response per line on
/// its stdout.
pub struct StdioScorer {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
    descriptions: StageDescriptions,
}

impl StdioScorer {
    pub fn spawn(command: &[String], timeout: Duration, descriptions: StageDescriptions) -> Result<Self> {
        let (program, args) = command.split_first().ok_or_else(|| anyhow!("adapter command is empty"))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .with_context(|| format!("starting adapter {program}"))?;
        let stdin = child.stdin.take().context("adapter stdin")?;
        let stdout = child.stdout.take().context("adapter stdout")?;
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(Self { child, stdin, lines, timeout, descriptions })
    }

    fn exchange(&mut self, text: &str) -> Result<BTreeMap<StageLabel, f64>> {
        let request = self.descriptions.request(text);
        let mut line = serde_json::to_string(&request)?;
        line.push('\n');
        self.stdin.write_all(line.as_bytes())?;
        self.stdin.flush()?;
        let reply = match self.lines.recv_timeout(self.timeout) {
            Ok(reply) => reply?,
            Err(RecvTimeoutError::Timeout) => bail!("adapter did not answer within {:?}", self.timeout),
            Err(RecvTimeoutError::Disconnected) => bail!("adapter closed its output"),
        };
        let response: ScoreResponse = serde_json::from_str(&reply).context("adapter reply is not a score response")?;
        Ok(response.validate(&request)?)
    }
}

impl ScoreSource for StdioScorer {
    fn scores(&mut self, text: &str) -> Result<Option<BTreeMap<StageLabel, f64>>, String> {
        self.exchange(text).map(Some).map_err(|e| format!("{e:#}"))
    }
}

impl Drop for StdioScorer {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Wraps a scorer so that its first failure switches the run to
/// keyword-only classification instead of aborting it.
pub struct Degrading {
    inner: Option<Box<dyn ScoreSource>>,
    pub warnings: Vec<String>,
}

impl Degrading {
    pub fn new(inner: Option<Box<dyn ScoreSource>>) -> Self {
        Self { inner, warnings: Vec::new() }
    }

    pub fn degraded(&self) -> bool {
        !self.warnings.is_empty()
    }
}

impl ScoreSource for Degrading {
    fn scores(&mut self, text: &str) -> Result<Option<BTreeMap<StageLabel, f64>>, String> {
        let Some(inner) = self.inner.as_mut() else { return Ok(None) };
        match inner.scores(text) {
            Ok(s) => Ok(s),
            Err(e) => {
                let msg = format!("semantic adapter failed ({e}); continuing with keyword matching only");
                eprintln!("warning: {msg}");
                self.warnings.push(msg);
                self.inner = None;
                Ok(None)
            }
        }
    }
}
