#![allow(dead_code)]

use std::io::Write;
use std::process::{Command, Output, Stdio};

use hypermatch::hypergraph::NAMED_INSTANCES;
use hypermatch::{gen_random_33, named_instance, Hypergraph};

pub const CORPUS_SEEDS: u64 = 50;

/// 50 seeded random (3,3)-graphs with at most 12 edges, then the four named
/// fixtures.
pub fn corpus() -> Vec<(String, Hypergraph)> {
    let mut out: Vec<(String, Hypergraph)> = (0..CORPUS_SEEDS)
        .map(|seed| {
            let n = 12 + (seed % 7) as usize;
            (
                format!("random-{seed}"),
                gen_random_33(n, 12, seed).unwrap(),
            )
        })
        .collect();
    out.extend(
        NAMED_INSTANCES
            .iter()
            .map(|&name| (name.to_string(), named_instance(name).unwrap())),
    );
    out
}

pub fn hypermatch(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hypermatch"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn hypermatch");
    // The child may exit without reading stdin; a broken pipe is fine.
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Value on the first line of a plain `count` or `exact` output.
pub fn first_value(o: &Output) -> f64 {
    let text = stdout(o);
    let line = text.lines().next().expect("empty output");
    match line.split_once('/') {
        Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
        None => line.parse().unwrap(),
    }
}
