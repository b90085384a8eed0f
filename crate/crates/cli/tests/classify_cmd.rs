mod common;

use std::net::TcpListener;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use common::{json_file, run, MockServer, Response};
use serde_json::{json, Value};

const STAGES: [&str; 5] = ["Data Collection", "Data Processing", "Model Training", "Model Evaluation", "Model Deployment"];

fn project(dir: &Path) -> std::path::PathBuf {
    let root = dir.join("proj");
    std::fs::create_dir_all(&root).unwrap();
    std::fs::write(root.join("a_load.py"), "from sklearn.datasets import load_iris\nX, y = load_iris(return_X_y=True)\n").unwrap();
    std::fs::write(root.join("b_misc.py"), "def greet(name):\n    return 'hi ' + name\n").unwrap();
    std::fs::write(
        root.join("c_loop.py"),
        "result = []\nfor i in range(10):\n    result.append(i)\n",
    )
    .unwrap();
    root
}

fn classify(dir: &Path, extra: &[&str]) -> (std::process::Output, Value) {
    let root = project(dir);
    let out = dir.join(format!("stages_{}.json", extra.len()));
    let mut args = vec!["classify", root.to_str().unwrap(), "-o", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let output = run(&args);
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    (output, json_file(&out))
}

fn assignment<'a>(v: &'a Value, suffix: &str) -> &'a Value {
    v["assignments"].as_array().unwrap().iter().find(|a| a["file"].as_str().unwrap().ends_with(suffix)).unwrap()
}

fn free_port_url() -> String {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    format!("http://{}", l.local_addr().unwrap())
}

fn scores(training: f64) -> Value {
    let mut m = serde_json::Map::new();
    for s in STAGES {
        m.insert(s.into(), json!(if s == "Model Training" { training } else { 0.1 }));
    }
    json!({ "scores": m, "model_id": "mock-nli" })
}

#[test]
fn keyword_only_assigns_load_iris_to_collection() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = classify(dir.path(), &[]);
    let load = assignment(&v, "a_load.py");
    assert_eq!(load["stages"], json!(["Data Collection"]));
    assert_eq!(load["provenance"]["Data Collection"]["source"], "keyword");
    assert_eq!(assignment(&v, "b_misc.py")["stages"], json!(["Unknown"]));
    assert_eq!(v["adapter"]["attached"], false);
    assert!(v["multi_label"]["rows"].is_array());
    assert!(v["mono_label"]["rows"].is_array());
    assert!(v["config"]["tool"]["classifier_threshold"].is_number());
    // the loop in c_loop.py is a List Comprehension smell in an Unknown file
    let unknown = v["multi_label"]["rows"].as_array().unwrap().iter().find(|r| r["stage"] == "Unknown").unwrap();
    assert_eq!(unknown["files"], 2);
}

#[test]
fn offline_adapter_gives_identical_keyword_result_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let (_, baseline) = classify(dir.path(), &[]);
    let url = free_port_url();
    let (output, v) = classify(dir.path(), &["--adapter-url", &url, "--adapter-timeout-ms", "500"]);
    assert_eq!(v["assignments"], baseline["assignments"]);
    assert_eq!(v["multi_label"], baseline["multi_label"]);
    assert_eq!(v["mono_label"], baseline["mono_label"]);
    assert_eq!(v["adapter"]["attached"], true);
    assert_eq!(v["adapter"]["degraded"], true);
    assert!(String::from_utf8_lossy(&output.stderr).contains("warning"));
}

#[test]
fn http_adapter_scores_are_used() {
    let seen = Arc::new(std::sync::Mutex::new(Vec::<Value>::new()));
    let log = seen.clone();
    let server = MockServer::start(move |req| {
        if req.method == "GET" && req.path == "/health" {
            return Response::json(json!({ "model_id": "mock-nli" }));
        }
        assert_eq!((req.method.as_str(), req.path.as_str()), ("POST", "/classify"));
        let body: Value = serde_json::from_str(&req.body).unwrap();
        log.lock().unwrap().push(body);
        Response::json(scores(0.95))
    });
    let dir = tempfile::tempdir().unwrap();
    let (_, v) = classify(dir.path(), &["--adapter-url", &server.url]);
    assert_eq!(v["adapter"]["degraded"], false);
    let misc = assignment(&v, "b_misc.py");
    assert_eq!(misc["stages"], json!(["Model Training"]));
    assert_eq!(misc["provenance"]["Model Training"], json!({ "source": "semantic", "score": 0.95 }));
    // low semantic scores still fall back to keywords per stage
    let load = assignment(&v, "a_load.py");
    assert_eq!(load["stages"], json!(["Data Collection", "Model Training"]));
    assert_eq!(load["provenance"]["Data Collection"]["source"], "keyword");

    let requests = seen.lock().unwrap();
    assert_eq!(requests.len(), 3);
    for r in requests.iter() {
        let names: Vec<&str> = r["stages"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
        assert_eq!(names, STAGES);
        assert!(r["stages"].as_array().unwrap().iter().all(|s| !s["description"].as_str().unwrap().is_empty()));
        assert!(r["file_text"].is_string());
    }

    let scorer = pysmell_cli::adapter::HttpScorer::new(
        &server.url,
        Duration::from_secs(2),
        pysmell::stages::StageConfig::default().stage_descriptions(),
    );
    assert_eq!(scorer.health().unwrap().model_id, "mock-nli");
}

#[test]
fn out_of_range_scores_degrade() {
    let server = MockServer::start(|_| Response::json(scores(1.5)));
    let dir = tempfile::tempdir().unwrap();
    let (_, baseline) = classify(dir.path(), &[]);
    let (_, v) = classify(dir.path(), &["--adapter-url", &server.url]);
    assert_eq!(v["adapter"]["degraded"], true);
    assert_eq!(v["assignments"], baseline["assignments"]);
}

#[test]
fn adapter_stopped_mid_run_degrades() {
    let calls = Arc::new(AtomicUsize::new(0));
    let counter = calls.clone();
    let server = MockServer::start(move |_| {
        if counter.fetch_add(1, Ordering::SeqCst) >= 1 {
            std::thread::sleep(Duration::from_millis(1500));
        }
        Response::json(scores(0.95))
    });
    let dir = tempfile::tempdir().unwrap();
    let (_, baseline) = classify(dir.path(), &[]);
    let (output, v) = classify(dir.path(), &["--adapter-url", &server.url, "--adapter-timeout-ms", "300"]);
    assert_eq!(v["adapter"]["degraded"], true);
    assert!(String::from_utf8_lossy(&output.stderr).contains("keyword matching only"));
    // first file was scored, the rest fell back
    assert_eq!(assignment(&v, "a_load.py")["stages"], json!(["Data Collection", "Model Training"]));
    assert_eq!(assignment(&v, "b_misc.py"), assignment(&baseline, "b_misc.py"));
    assert_eq!(assignment(&v, "c_loop.py"), assignment(&baseline, "c_loop.py"));
    assert_eq!(calls.load(Ordering::SeqCst), 2);
}

const STDIO_WORKER: &str = r#"
import json, sys
for line in sys.stdin:
    req = json.loads(line)
    names = [s["name"] for s in req["stages"]]
    scores = {n: (0.97 if n == "Model Evaluation" else 0.2) for n in names}
    print(json.dumps({"scores": scores, "model_id": "stdio-mock"}), flush=True)
"#;

#[test]
fn stdio_adapter_line_protocol() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("worker.py");
    std::fs::write(&script, STDIO_WORKER).unwrap();
    let (_, v) = classify(dir.path(), &["--adapter-cmd", "python3", script.to_str().unwrap()]);
    assert_eq!(v["adapter"]["degraded"], false);
    let misc = assignment(&v, "b_misc.py");
    assert_eq!(misc["stages"], json!(["Model Evaluation"]));
    assert_eq!(misc["provenance"]["Model Evaluation"], json!({ "source": "semantic", "score": 0.97 }));
}

#[test]
fn stdio_adapter_exiting_degrades() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("once.py");
    std::fs::write(&script, STDIO_WORKER.replace("flush=True)", "flush=True)\n    break")).unwrap();
    let (_, baseline) = classify(dir.path(), &[]);
    let (_, v) = classify(dir.path(), &["--adapter-cmd", "python3", script.to_str().unwrap()]);
    assert_eq!(v["adapter"]["degraded"], true);
    assert_eq!(assignment(&v, "c_loop.py"), assignment(&baseline, "c_loop.py"));
}

#[test]
fn missing_adapter_program_runs_keyword_only() {
    let dir = tempfile::tempdir().unwrap();
    let (_, baseline) = classify(dir.path(), &[]);
    let (output, v) = classify(dir.path(), &["--adapter-cmd", "/nonexistent/scorer"]);
    assert_eq!(v["assignments"], baseline["assignments"]);
    assert!(String::from_utf8_lossy(&output.stderr).contains("warning"));
}
