//! Repository search and metadata over the GitHub REST API.

use std::time::Duration;

use chrono::{DateTime, NaiveDate, Utc};
use pysmell::miner::{detect_ml_imports, MinerError, RepoMetadata, RepoSource};
use serde_json::Value;

pub const DEFAULT_API: &str = "https://api.github.com";

pub struct GitHub {
    agent: ureq::Agent,
    base: String,
    token: String,
    pub ml_libraries: Vec<String>,
    /// Source files downloaded per repository when looking for ML imports.
    pub max_import_probe: usize,
    pub max_retries: u32,
    /// Longest single wait when the API asks us to back off.
    pub max_backoff: Duration,
}

impl GitHub {
    pub fn new(base: &str, token: &str, ml_libraries: Vec<String>) -> Self {
        Self {
            agent: ureq::AgentBuilder::new().timeout(Duration::from_secs(30)).build(),
            base: base.trim_end_matches('/').to_string(),
            token: token.to_string(),
            ml_libraries,
            max_import_probe: 40,
            max_retries: 5,
            max_backoff: Duration::from_secs(60),
        }
    }

    fn get(&self, path: &str, query: &[(&str, &str)], raw: bool) -> Result<ureq::Response, MinerError> {
        let url = format!("{}{}", self.base, path);
        let mut attempt = 0;
        loop {
            let mut req = self
                .agent
                .get(&url)
                .set("Authorization", &format!("Bearer {}", self.token))
                .set("User-Agent", "pysmell")
                .set("Accept", if raw { "application/vnd.github.raw" } else { "application/vnd.github+json" });
            for (k, v) in query {
                req = req.query(k, v);
            }
            match req.call() {
                Ok(resp) => return Ok(resp),
                Err(ureq::Error::Status(401, _)) => {
                    return Err(MinerError::ApiAuthError("token rejected (HTTP 401)".into()))
                }
                Err(ureq::Error::Status(code @ (403 | 429), resp)) => {
                    let wait = backoff(&resp, attempt);
                    let limited = code == 429
                        || resp.header("x-ratelimit-remaining") == Some("0")
                        || resp.header("retry-after").is_some();
                    if !limited {
                        return Err(MinerError::ApiAuthError(format!("access denied (HTTP {code})")));
                    }
                    if attempt >= self.max_retries {
                        return Err(MinerError::ApiRateLimited { retry_after_secs: Some(wait.as_secs()) });
                    }
                    std::thread::sleep(wait.min(self.max_backoff));
                    attempt += 1;
                }
                Err(ureq::Error::Status(code, _)) => return Err(MinerError::Api(format!("GET {path}: HTTP {code}"))),
                Err(e) => return Err(MinerError::Api(e.to_string())),
            }
        }
    }

    fn json(&self, path: &str, query: &[(&str, &str)]) -> Result<(Value, Option<String>), MinerError> {
        let resp = self.get(path, query, false)?;
        let link = resp.header("link").map(String::from);
        let value = resp.into_json().map_err(|e| MinerError::Api(e.to_string()))?;
        Ok((value, link))
    }

    fn commit_date(commit: &Value) -> Option<NaiveDate> {
        let s = commit.pointer("/commit/committer/date").and_then(Value::as_str)?;
        Some(s.parse::<DateTime<Utc>>().ok()?.date_naive())
    }
}

/// Wait requested by the server, or exponential backoff when it gives none.
fn backoff(resp: &ureq::Response, attempt: u32) -> Duration {
    if let Some(secs) = resp.header("retry-after").and_then(|v| v.parse::<u64>().ok()) {
        return Duration::from_secs(secs);
    }
    if let Some(reset) = resp.header("x-ratelimit-reset").and_then(|v| v.parse::<i64>().ok()) {
        let now = Utc::now().timestamp();
        return Duration::from_secs((reset - now).max(1) as u64);
    }
    Duration::from_secs(1 << attempt.min(6))
}

/// Page number of the `rel="last"` link, if any.
fn last_page(link: &str) -> Option<String> {
    link.split(',')
        .find(|part| part.contains("rel=\"last\""))
        .and_then(|part| part.split(['?', '&', '>']).find_map(|kv| kv.strip_prefix("page=")))
        .map(String::from)
}

impl RepoSource for GitHub {
    fn search(&mut self, query: &str, limit: usize) -> Result<Vec<String>, MinerError> {
        let mut names = Vec::new();
        let per_page = limit.min(100).to_string();
        let mut page = 1;
        while names.len() < limit {
            let page_s = page.to_string();
            let (value, _) = self.json(
                "/search/repositories",
                &[("q", query), ("per_page", &per_page), ("page", &page_s)],
            )?;
            let items = value.get("items").and_then(Value::as_array).cloned().unwrap_or_default();
            if items.is_empty() {
                break;
            }
            names.extend(items.iter().filter_map(|i| i.get("full_name")?.as_str().map(String::from)));
            page += 1;
        }
        names.truncate(limit);
        Ok(names)
    }

    fn metadata(&mut self, full_name: &str) -> Result<RepoMetadata, MinerError> {
        let (repo, _) = self.json(&format!("/repos/{full_name}"), &[])?;
        let count = |k: &str| repo.get(k).and_then(Value::as_u64).unwrap_or(0);
        let branch = repo.get("default_branch").and_then(Value::as_str).unwrap_or("main").to_string();

        let commits_path = format!("/repos/{full_name}/commits");
        let (newest, link) = self.json(&commits_path, &[("per_page", "1")])?;
        let last_commit = newest.get(0).and_then(Self::commit_date);
        let first_commit = match link.as_deref().and_then(last_page) {
            Some(page) => self.json(&commits_path, &[("per_page", "1"), ("page", &page)])?.0.get(0).and_then(Self::commit_date),
            None => last_commit,
        };
        let (Some(first_commit), Some(last_commit)) = (first_commit, last_commit) else {
            return Err(MinerError::Api(format!("{full_name} has no commits")));
        };

        let (tree, _) = self.json(&format!("/repos/{full_name}/git/trees/{branch}"), &[("recursive", "1")])?;
        let py_files: Vec<String> = tree
            .get("tree")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter(|e| e.get("type").and_then(Value::as_str) == Some("blob"))
            .filter_map(|e| e.get("path")?.as_str().map(String::from))
            .filter(|p| p.ends_with(".py"))
            .collect();

        let mut texts = Vec::new();
        for path in py_files.iter().take(self.max_import_probe) {
            let resp = self.get(&format!("/repos/{full_name}/contents/{path}"), &[("ref", &branch)], true)?;
            if let Ok(text) = resp.into_string() {
                texts.push(text);
            }
        }
        let imports_ml_libs = detect_ml_imports(texts.iter().map(String::as_str), &self.ml_libraries);

        Ok(RepoMetadata {
            full_name: full_name.to_string(),
            is_fork: repo.get("fork").and_then(Value::as_bool).unwrap_or(false),
            stars: count("stargazers_count"),
            forks: count("forks_count"),
            source_file_count: py_files.len() as u64,
            first_commit: first_commit.min(last_commit),
            last_commit: first_commit.max(last_commit),
            imports_ml_libs,
        })
    }
}
