use std::path::PathBuf;
use std::process::Command;

use lpa_core::cli;
use lpa_core::constructions::Group;
use lpa_core::graph::Graph;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lpa-ibn").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

fn s3_file(dir: &tempfile::TempDir) -> String {
    let path = dir.path().join("s3.json");
    std::fs::write(&path, Group::symmetric(3).unwrap().to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn golden_gribn_uniform_columns() {
    assert_eq!(
        json(&ok(&["gribn", &data("uniform_columns.graph")])),
        json(
            r#"{"hasGrIbn": false, "reason": "column-sum-uniform", "certificate": {"P":[1],"Q":[0,0,0,0]}}"#
        )
    );
}

#[test]
fn golden_ibn_sink_loops() {
    assert_eq!(
        ok(&["ibn", &data("sink_loops.graph")]),
        "{\"hasIbn\":false,\"rankLeft\":1,\"rankRight\":1}\n"
    );
}

#[test]
fn golden_monoid_eq_fibonacci() {
    let out = ok(&[
        "monoid-eq",
        &data("fibonacci.graph"),
        "--left",
        "u(1)+v(1)",
        "--right",
        "2*u(2)+v(2)",
    ]);
    assert_eq!(json(&out), json(r#"{"equal": true}"#));
    let out = ok(&[
        "monoid-eq",
        &data("fibonacci.graph"),
        "--left",
        "u(-1)",
        "--right",
        "v(-1)",
    ]);
    assert_eq!(json(&out), json(r#"{"equal": false}"#));
}

#[test]
fn analyze_report_shape_and_determinism() {
    let strip = |s: &str| {
        let mut v = json(s);
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = ok(&["analyze", &data("sink_extension.json")]);
    let b = ok(&["analyze", &data("sink_extension.json")]);
    assert_eq!(strip(&a), strip(&b));
    let order = [
        "input",
        "vertexClassification",
        "ibn",
        "gribn",
        "hereditarySaturatedCount",
        "timing",
    ];
    let positions: Vec<usize> = order
        .iter()
        .map(|k| a.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{a}");
    let v = strip(&a);
    assert_eq!(v["input"]["adjacency"], json("[[3,2,0],[1,2,1],[0,0,0]]"));
    assert_eq!(v["vertexClassification"]["sinks"], json(r#"["w"]"#));
    assert_eq!(v["gribn"]["reason"], "sink-present");
    assert_eq!(v["hereditarySaturatedCount"], 3);
}

#[test]
fn analyze_large_multiplicity_is_a_string() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.graph");
    std::fs::write(&path, "vertices a\nedge a a 18446744073709551615\n").unwrap();
    let v = json(&ok(&["analyze", path.to_str().unwrap()]));
    assert_eq!(
        v["input"]["adjacency"],
        json(r#"[["18446744073709551615"]]"#)
    );
}

#[test]
fn text_mode_statements() {
    let out = ok(&["--format", "text", "gribn", &data("sink_loops.graph")]);
    assert_eq!(out, "L_K(E) has gr-IBN (E has a sink)\n");
    let out = ok(&["gribn", "--format", "text", &data("uniform_columns.graph")]);
    assert!(out.starts_with("L_K(E) does not have gr-IBN (every column of A sums to 4)"));
    let out = ok(&["--format", "text", "ibn", &data("two_cycle.graph")]);
    assert!(out.starts_with("L_K(E) has IBN"));
}

#[test]
fn gribn_oracle_reports_agreement() {
    for file in [
        "fibonacci.graph",
        "uniform_columns.graph",
        "two_cycle.graph",
        "sink_loops.graph",
    ] {
        let v = json(&ok(&[
            "gribn",
            "--oracle",
            "--max-exp",
            "4",
            "--max-terms",
            "6",
            &data(file),
        ]));
        assert_eq!(v["oracle"]["agrees"], true, "{file}");
    }
    let v = json(&ok(&["gribn", "--oracle", &data("sink_loops.graph")]));
    assert_eq!(v["oracle"]["ran"], false);
    let (code, _, err) = run(&[
        "gribn",
        "--oracle",
        "--max-terms",
        "1",
        &data("fibonacci.graph"),
    ]);
    assert_eq!(code, 3, "{err}");
}

fn assert_round_trip(text: &str) {
    let g = Graph::parse(text).unwrap();
    assert_eq!(g.to_text(), text);
}

#[test]
fn construct_outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = s3_file(&dir);
    let z4 = data("z4.json");
    let line = dir.path().join("line.graph");
    std::fs::write(&line, ok(&["construct", "line", "3"])).unwrap();
    let line = line.to_string_lossy().into_owned();
    let cycle = data("two_cycle.graph");
    let ext = data("sink_extension.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["construct", "cayley", "--group", &z4, "--gens", "1,2"],
        vec![
            "construct",
            "cayley",
            "--group",
            &s3,
            "--gens",
            "(12),(123)",
        ],
        vec!["construct", "cyclic-cayley", "--n", "5", "--j", "0"],
        vec![
            "construct",
            "hopf",
            "--group",
            &s3,
            "--ram",
            "(123):1,(12):2",
        ],
        vec!["construct", "product", &cycle, &line],
        vec!["construct", "quotient", &ext, "--h", "w"],
        vec!["construct", "line", "4"],
        vec!["construct", "cycle", "3"],
    ];
    for args in cases {
        let text = ok(&args);
        assert_round_trip(&text);
        let again = ok(&args);
        assert_eq!(text, again);
    }
}

#[test]
fn construct_quotient_of_product_by_comma_names() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.graph");
    std::fs::write(&line, ok(&["construct", "line", "2"])).unwrap();
    let prod = dir.path().join("prod.graph");
    std::fs::write(
        &prod,
        ok(&[
            "construct",
            "product",
            &data("two_cycle.graph"),
            line.to_str().unwrap(),
        ]),
    )
    .unwrap();
    let out = ok(&[
        "construct",
        "quotient",
        prod.to_str().unwrap(),
        "--h",
        "a,v2,b,v2",
    ]);
    let g = Graph::parse(&out).unwrap();
    assert_eq!(g.names(), ["a,v1", "b,v1"]);
}

#[test]
fn construct_json_format() {
    let out = ok(&["construct", "cycle", "2", "--format", "json"]);
    let g = Graph::parse(&out).unwrap();
    assert_eq!(g.adjacency(), vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn hsets_and_cover() {
    let v = json(&ok(&["hsets", &data("sink_extension.json")]));
    assert_eq!(v["sets"], json(r#"[[], ["w"], ["u", "v", "w"]]"#));
    let out = ok(&[
        "cover",
        &data("sink_loops.graph"),
        "--from",
        "-1",
        "--to",
        "0",
    ]);
    let g = Graph::parse(&out).unwrap();
    assert_eq!(g.names(), ["u@-1", "v@-1", "u@0", "v@0"]);
    let dot = ok(&[
        "cover",
        &data("sink_loops.graph"),
        "--from",
        "0",
        "--to",
        "1",
        "--dot",
    ]);
    assert!(dot.starts_with("digraph"));
    let (code, _, _) = run(&[
        "cover",
        &data("sink_loops.graph"),
        "--from",
        "2",
        "--to",
        "1",
    ]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["hsets", &data("sink_loops.graph"), "--max-vertices", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "vertices a\nedge a b\n").unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(run(&["ibn", bad]).0, 2);
    assert_eq!(run(&["ibn", "/definitely/not/here.graph"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(
        run(&[
            "monoid-eq",
            &data("fibonacci.graph"),
            "--left",
            "u(",
            "--right",
            "0"
        ])
        .0,
        2
    );
    assert_eq!(
        run(&[
            "monoid-eq",
            &data("fibonacci.graph"),
            "--left",
            "q(0)",
            "--right",
            "0"
        ])
        .0,
        3
    );
    assert_eq!(
        run(&[
            "construct",
            "cayley",
            "--group",
            &data("z4.json"),
            "--gens",
            "2"
        ])
        .0,
        3
    );
    assert_eq!(
        run(&[
            "construct",
            "quotient",
            &data("sink_extension.json"),
            "--h",
            "v"
        ])
        .0,
        3
    );
    assert_eq!(
        run(&["construct", "cyclic-cayley", "--n", "2", "--j", "0"]).0,
        3
    );
    assert_eq!(run(&["construct", "line", "0"]).0, 3);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn quiet_suppresses_stdout() {
    let (code, out, _) = run(&["--quiet", "ibn", &data("sink_loops.graph")]);
    assert_eq!((code, out.as_str()), (0, ""));
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_lpa-ibn"))
        .args(["gribn", &data("fibonacci.graph")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(v["certificate"], json(r#"{"P":[0,1],"Q":[2]}"#));
    let out = Command::new(env!("CARGO_BIN_EXE_lpa-ibn"))
        .args([
            "construct",
            "quotient",
            &data("sink_extension.json"),
            "--h",
            "u",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
