use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;

fn search(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_search")).args(args).output().unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = search(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tsv_of(args: &[&str]) -> Vec<Vec<String>> {
    let out = search(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}

#[test]
fn seq_tables_in_both_formats() {
    let rows = tsv_of(&["seq", "--kind", "g", "--i", "2", "--steps", "5", "--format", "tsv"]);
    assert_eq!(rows[0], ["index", "value"]);
    let values: Vec<(&str, &str)> = rows[1..].iter().map(|r| (r[0].as_str(), r[1].as_str())).collect();
    assert_eq!(
        values,
        [
            ("-1", "0"),
            ("0", "1"),
            ("1", "2"),
            ("2", "6"),
            ("3", "16"),
            ("4", "44"),
            ("5", "120")
        ]
    );

    let v = json_of(&["seq", "--kind", "f", "--i", "1", "--steps", "6"]);
    assert_eq!(v["first_index"], 0);
    let f: Vec<&str> = v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(f, ["1", "1", "2", "3", "5", "8", "13"]);
}

#[test]
fn accuracy_table_for_h() {
    let v = json_of(&[
        "accuracy",
        "--policy",
        r#"{"type":"odd_block_h","i":2}"#,
        "--steps",
        "6",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["attained_at"], 3);
    assert!((v["sup"]["float"].as_f64().unwrap() - 1.3730667).abs() < 1e-6);
    let rows = tsv_of(&[
        "accuracy",
        "--policy",
        r#"{"type":"golden"}"#,
        "--steps",
        "3",
        "--format",
        "tsv",
    ]);
    assert_eq!(rows[0], ["n", "delta", "delta_float", "weighted", "weighted_float"]);
    assert_eq!(rows.len(), 4);
}

#[test]
fn basic_policy_from_i_and_alpha1() {
    let v = json_of(&["accuracy", "--i", "2", "--alpha1", "13/100", "--steps", "3"]);
    assert_eq!(v["policy"]["type"], "basic");
    assert_eq!(v["rows"][0]["delta"]["exact"], "13/50");
}

#[test]
fn run_finds_the_peak_within_the_bound() {
    let v = json_of(&[
        "run",
        "--policy",
        r#"{"type":"golden"}"#,
        "--steps",
        "20",
        "--peak",
        "0.3",
    ]);
    let est = v["estimate"]["float"].as_f64().unwrap();
    let bound = v["bound"]["float"].as_f64().unwrap();
    assert!((est - 0.3).abs() <= bound);
    assert!(bound <= 0.6180339887498949f64.powi(20) + 1e-15);
    assert_eq!(v["trajectory"].as_array().unwrap().len(), 20);
}

#[test]
fn run_from_a_table_and_from_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    std::fs::write(&path, "# x y\n0 0\n0.7 1\n1 0\n").unwrap();
    let v = json_of(&[
        "run",
        "--policy",
        r#"{"type":"odd_block_w","i":2}"#,
        "--steps",
        "4",
        "--table",
        path.to_str().unwrap(),
    ]);
    let (a, b) = (
        v["interval"][0]["float"].as_f64().unwrap(),
        v["interval"][1]["float"].as_f64().unwrap(),
    );
    assert!(a <= 0.7 && 0.7 <= b);

    let mut child = Command::new(env!("CARGO_BIN_EXE_search"))
        .args([
            "run",
            "--policy",
            r#"{"type":"fibonacci","horizon":3}"#,
            "--steps",
            "3",
            "--interactive",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1\n2\n3\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"]["exact"], "1/5");
    let seen: Vec<f64> = v["history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_f64().unwrap())
        .collect();
    assert_eq!(seen, [1.0, 2.0, 3.0]);
}

#[test]
fn oracle_with_witness() {
    let v = json_of(&[
        "oracle",
        "--policy",
        r#"{"type":"fibonacci","horizon":3}"#,
        "--steps",
        "3",
        "--witness",
    ]);
    assert_eq!(v["value"]["exact"], "1/5");
    let bp = v["witness"]["breakpoints"].as_array().unwrap();
    assert_eq!(bp.first().unwrap()["x"]["exact"], "0/1");
    assert_eq!(bp.last().unwrap()["x"]["exact"], "1/1");
    let rows = tsv_of(&[
        "oracle",
        "--policy",
        r#"{"type":"odd_block_h","i":2}"#,
        "--steps",
        "3",
        "--format",
        "tsv",
    ]);
    let v = json_of(&[
        "accuracy",
        "--policy",
        r#"{"type":"odd_block_h","i":2}"#,
        "--steps",
        "3",
    ]);
    assert_eq!(rows[1][1], v["rows"][2]["delta"]["exact"].as_str().unwrap());
}

#[test]
fn verify_reports_every_check() {
    let v = json_of(&["verify", "--i", "2", "--i-max", "4", "--steps", "10"]);
    assert_eq!(v["all_hold"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["holds"] == true));
    for i in 2..=4 {
        assert!(checks
            .iter()
            .any(|c| c["i"] == i && c["check"] == "identity g_ratio_order"));
        assert!(checks
            .iter()
            .any(|c| c["i"] == i && c["check"] == "W accuracy exceeds H accuracy"));
    }
}

#[test]
fn usage_errors_exit_nonzero() {
    let out = search(&["accuracy", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--policy"));
    let out = search(&["accuracy", "--policy", r#"{"type":"nope"}"#, "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = search(&["verify", "--i", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = search(&["run", "--policy", r#"{"type":"golden"}"#, "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn http(port: u16, method: &str, path: &str, body: &str) -> (u16, Value) {
    let mut s = TcpStream::connect(("127.0.0.1", port)).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut resp = String::new();
    s.read_to_string(&mut resp).unwrap();
    let status = resp[9..12].parse().unwrap();
    let body = &resp[resp.find("\r\n\r\n").unwrap() + 4..];
    (status, serde_json::from_str(body).unwrap())
}

#[test]
fn advise_serve_answers_and_restores_from_its_log() {
    let dir = tempfile::tempdir().unwrap();
    let start = |port: u16| {
        let child = Command::new(env!("CARGO_BIN_EXE_search"))
            .args([
                "advise-serve",
                "--port",
                &port.to_string(),
                "--log-dir",
                dir.path().to_str().unwrap(),
            ])
            .stderr(Stdio::null())
            .spawn()
            .unwrap();
        let deadline = Instant::now() + Duration::from_secs(20);
        while TcpStream::connect(("127.0.0.1", port)).is_err() {
            assert!(Instant::now() < deadline, "server did not start");
            std::thread::sleep(Duration::from_millis(50));
        }
        Server(child)
    };
    let free_port = || TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();

    let port = free_port();
    let server = start(port);
    let (status, v) = http(
        port,
        "POST",
        "/sessions",
        r#"{"policy":{"type":"odd_block_h","i":2},"interval":[0,1]}"#,
    );
    assert_eq!(status, 201);
    let id = v["id"].as_str().unwrap().to_string();
    assert_eq!(v["pending"].as_array().unwrap().len(), 3);
    let (status, v) = http(
        port,
        "POST",
        &format!("/sessions/{id}/results"),
        r#"{"values":[1,2,1]}"#,
    );
    assert_eq!(status, 200);
    drop(server);

    let port = free_port();
    let _server = start(port);
    let (status, shown) = http(port, "GET", &format!("/sessions/{id}"), "");
    assert_eq!(status, 200);
    assert_eq!(shown, v);
}
