#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub const GOLDEN_17: &str = r#"{"p":17,"method":"quartic1mod8","root":3,"edges":[[12,13],[7,9],[2,5],[1,14],[3,8],[10,16],[4,11],[6,15],[0,"c"]]}"#;

pub fn paley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paley"))
        .args(args)
        .env_remove("PALEY_ORACLE_CAP")
        .output()
        .expect("spawn paley")
}

pub fn paley_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paley"))
        .args(args)
        .env(key, value)
        .output()
        .expect("spawn paley")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

pub fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Scan output with the timing field removed from every line.
pub fn strip_timings(text: &str) -> String {
    text.lines()
        .map(
            |line| match serde_json::from_str::<serde_json::Value>(line) {
                Ok(serde_json::Value::Object(mut m)) => {
                    m.remove("mu_s");
                    serde_json::Value::Object(m).to_string()
                }
                _ => line.to_string(),
            },
        )
        .collect::<Vec<_>>()
        .join("\n")
}
