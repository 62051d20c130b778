//! End-to-end runs of the `pgx` binary.

mod common;

use std::process::{Command, Output};

fn pgx_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pgx"));
    cmd.args(args)
        .env_remove("PGX_BRUTE_CAP")
        .env_remove("PGX_CENSUS_DIR")
        .env_remove("PGX_FORMAT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("pgx binary runs")
}

fn pgx(args: &[&str]) -> Output {
    pgx_env(args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn stats_examples() {
    let o = pgx(&["stats", "Q8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stats"]["size"], 8);
    assert_eq!(v["stats"]["undirected_edges"], 16);
    assert_eq!(v["oracle"], "consistent");

    let v: serde_json::Value =
        serde_json::from_slice(&pgx(&["stats", "C9xC3", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["stats"]["phi_sum"], 125);
    assert_eq!(v["stats"]["mutual_edges"], 49);

    let o = pgx(&["stats", "C1", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("C1,1,1,1,0,0,0"));
}

#[test]
fn graph_exports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c6.dot");
    let o = pgx(&[
        "graph",
        "C6",
        "undirected",
        "dot",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph \"C6\" {"));
    assert_eq!(dot.lines().filter(|l| l.contains(" [label=")).count(), 6);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 13);

    let o = pgx(&["graph", "C2", "undirected", "edge-csv"]);
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = pgx(&["graph", "Q8", "directed", "edge-csv"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 19);

    let o = pgx(&["graph", "C64", "directed", "dot", "--brute-cap", "32"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_exit_codes() {
    let o = pgx(&["verify", "main-theorem", "--n", "135", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["argmax"].as_array().unwrap().len(), 2);
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["completeness"], "complete");

    let o = pgx(&["verify", "main-theorem", "--n", "30"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("square-free"));

    let o = pgx(&["verify", "main-theorem", "--n", "36"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("even"));
    let o = pgx(&["verify", "main-theorem", "--n", "36", "--allow-even"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exploratory"));

    assert_eq!(
        pgx(&["verify", "lemma-2.5", "--p-max", "97", "--m-max", "12"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        pgx(&["verify", "prop-2.2", "--p", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(pgx(&["verify", "prop-2.2"]).status.code(), Some(3));
    assert_eq!(
        pgx(&["verify", "cor-2.6", "--p-max", "5"]).status.code(),
        Some(3)
    );
    assert_eq!(
        pgx(&["verify", "main-theorem", "--n", "405"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pgx(&["verify", "cor-2.3", "--p", "3", "--n", "3"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        pgx(&["verify", "lemma-2.1", "--pairs", "20"]).status.code(),
        Some(0)
    );
}

#[test]
fn every_format_carries_the_same_table() {
    let csv = stdout(&pgx(&["verify", "prop-2.2", "--p", "3", "--format", "csv"]));
    let text = stdout(&pgx(&[
        "verify", "prop-2.2", "--p", "3", "--format", "text",
    ]));
    let json: serde_json::Value = serde_json::from_slice(
        &pgx(&["verify", "prop-2.2", "--p", "3", "--format", "json"]).stdout,
    )
    .unwrap();
    let rows = json["table"]["rows"].as_array().unwrap();
    assert_eq!(csv.lines().count(), 1 + rows.len());
    for row in rows {
        let name = row[0].as_str().unwrap();
        assert!(csv.contains(name) && text.contains(name));
    }
}

#[test]
fn scan_smallest_range() {
    let o = pgx(&["scan", "conjecture-2.9", "--n-max", "9", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("9,3,C3xC3,"));
    assert_eq!(
        pgx(&["scan", "conjecture-2.9", "--n-max", "8"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn configuration_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pgx.toml");
    std::fs::write(&cfg, "format = \"csv\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let o = pgx(&["stats", "C4", "--config", cfg]);
    assert!(stdout(&o).starts_with("name,size"));
    let o = pgx_env(&["stats", "C4", "--config", cfg], &[("PGX_FORMAT", "json")]);
    assert!(stdout(&o).starts_with('{'));
    let o = pgx_env(
        &["stats", "C4", "--config", cfg, "--format", "text"],
        &[("PGX_FORMAT", "json")],
    );
    assert!(stdout(&o).starts_with("field"));

    let o = pgx_env(&["stats", "C4"], &[("PGX_FORMAT", "yaml")]);
    assert_eq!(o.status.code(), Some(3));
    let o = pgx_env(
        &["graph", "C64", "directed", "dot"],
        &[("PGX_BRUTE_CAP", "32")],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn census_ingest() {
    let src = tempfile::tempdir().unwrap();
    let root = tempfile::tempdir().unwrap();
    let groups = common::order_16_groups();
    common::write_cayley_dir(src.path(), &groups[..3]);

    let o = pgx(&["census", "ingest", src.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("census directory"));

    let o = pgx_env(
        &[
            "census",
            "ingest",
            src.path().to_str().unwrap(),
            "--format",
            "csv",
        ],
        &[("PGX_CENSUS_DIR", root.path().to_str().unwrap())],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
    assert!(root.path().join("16").join("C16.cayley").is_file());

    // a partial census still replaces the built-in catalog of that order
    let o = pgx(&[
        "verify",
        "prop-2.8",
        "--p",
        "2",
        "--n",
        "4",
        "--census-dir",
        root.path().to_str().unwrap(),
    ]);
    assert!(stdout(&o).contains("complete-via-census"));

    let bad = tempfile::tempdir().unwrap();
    std::fs::write(
        bad.path().join("x.cayley"),
        "order 2\nidentity 0\n0 1\n1 1\n",
    )
    .unwrap();
    let o = pgx(&[
        "census",
        "ingest",
        bad.path().to_str().unwrap(),
        "--census-dir",
        root.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn file_specs_read_cayley_tables() {
    let dir = tempfile::tempdir().unwrap();
    let groups = common::order_16_groups();
    common::write_cayley_dir(dir.path(), &groups[12..13]);
    let path = dir.path().join("Pauli.cayley");
    let spec = format!("file:\"{}\"", path.display());
    let o = pgx(&["stats", &spec, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",27"));
    let o = pgx(&["stats", &format!("{spec}xC3"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
