use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn hc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hc-cli"))
        .args(args)
        .output()
        .unwrap()
}

fn hc_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hc-cli"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no '{key}' in {text}"))
        .to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const PATH4: &str = "# path\n4 3\n0 1\n1 2\n2 3\n";

#[test]
fn path_graph_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, PATH4).unwrap();

    let opt_tree = dir.path().join("opt.tree");
    let out = stdout(&hc(&["opt", "--graph", p(&graph), "--out", p(&opt_tree)]));
    assert_eq!(field(&out, "opt"), "4");

    let out = stdout(&hc(&["eval", "--graph", p(&graph), "--tree", p(&opt_tree)]));
    assert_eq!(field(&out, "mw"), "4");
    assert_eq!(field(&out, "dasgupta"), "8");

    let out = stdout(&hc(&["mub", "--graph", p(&graph), "--solver", "exact"]));
    assert_eq!(field(&out, "L"), "{0,1}");
    assert_eq!(field(&out, "R"), "{2,3}");
    assert_eq!(field(&out, "uncut"), "2");

    let out = stdout(&hc(&["analyze", "--graph", p(&graph), "--tree", p(&opt_tree)]));
    assert_eq!(field(&out, "upper_bound"), "4");
}

#[test]
fn tree_written_by_avg_link_evaluates_the_same() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let tree = dir.path().join("t.tree");
    let gen = hc(&["gen", "--kind", "uniform", "--n", "9", "--seed", "4", "--out", p(&graph)]);
    stdout(&gen);
    let built = stdout(&hc(&["avg-link", "--graph", p(&graph), "--out", p(&tree)]));
    let evaluated = stdout(&hc(&["eval", "--graph", p(&graph), "--tree", p(&tree)]));
    assert_eq!(built, evaluated);
}

#[test]
fn hc_local_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    stdout(&hc(&["gen", "--kind", "gnp", "--p", "0.4", "--n", "12", "--seed", "9", "--out", p(&graph)]));
    let args = ["hc", "--graph", p(&graph), "--solver", "local", "--recursive", "2", "--seed", "5"];
    assert_eq!(stdout(&hc(&args)), stdout(&hc(&args)));
}

#[test]
fn graph_from_stdin() {
    let out = stdout(&hc_stdin(&["avg-link", "--graph", "-"], PATH4));
    assert_eq!(field(&out, "mw"), "4");
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--kind", "planted-hierarchy", "--n", "8", "--seed", "2"];
    let a = stdout(&hc(&args));
    assert_eq!(a, stdout(&hc(&args)));
    assert!(a.contains("\n8 28\n"));
}

#[test]
fn mc_bisect_reports_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let tree = dir.path().join("t.tree");
    stdout(&hc(&["gen", "--kind", "uniform", "--n", "6", "--seed", "1", "--out", p(&graph)]));
    std::fs::write(&tree, "(((0,1),(2,3)),(4,5))\n").unwrap();
    let args = ["mc-bisect", "--graph", p(&graph), "--tree", p(&tree), "--trials", "500", "--seed", "3"];
    let out = stdout(&hc(&args));
    assert_eq!(field(&out, "delta"), (1.0f64 / 6.0).to_string());
    assert!(field(&out, "red_uncut").contains("predicted"));
    assert_eq!(out, stdout(&hc(&args)));
}

#[test]
fn experiment_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.toml");
    let records = dir.path().join("records.jsonl");
    std::fs::write(
        &config,
        "seed = 3\n[[instances]]\ngenerator = \"gnp\"\nn = 8\np = 0.5\ncount = 10\n",
    )
    .unwrap();
    stdout(&hc(&["experiment", "--config", p(&config), "--out", p(&records)]));
    let text = std::fs::read_to_string(&records).unwrap();
    assert_eq!(text.lines().count(), 10);
    let table = stdout(&hc(&["summarize", "--records", p(&records)]));
    assert!(table.starts_with("algorithm"));
    assert_eq!(table.lines().count(), 5);
}

#[test]
fn precondition_and_parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    std::fs::write(&graph, PATH4).unwrap();
    let big = dir.path().join("big.txt");
    stdout(&hc(&["gen", "--kind", "uniform", "--n", "17", "--out", p(&big)]));
    let bad_config = dir.path().join("bad.toml");
    std::fs::write(&bad_config, "[[instances]]\ngenerator = \"gnp\"\nn = 20\np = 0.3\n").unwrap();
    let odd = dir.path().join("odd.txt");
    std::fs::write(&odd, "3 1\n0 1\n").unwrap();
    let odd_tree = dir.path().join("odd.tree");
    std::fs::write(&odd_tree, "((0,1),2)").unwrap();

    let cases: Vec<(Vec<&str>, Option<&str>)> = vec![
        (vec!["eval", "--graph", "-", "--tree", "-"], Some("4 1\n0 4\n")),
        (vec!["avg-link", "--graph", "-"], Some("2 1\n0 1 -1\n")),
        (vec!["avg-link", "--graph", "-"], Some("3 2\n0 1\n1 0\n")),
        (vec!["opt", "--graph", p(&big)], None),
        (vec!["experiment", "--config", p(&bad_config)], None),
        (vec!["mc-bisect", "--graph", p(&odd), "--tree", p(&odd_tree)], None),
        (vec!["gen", "--kind", "gnp", "--n", "5"], None),
        (vec!["gen", "--kind", "gnp", "--n", "5", "--p", "1.5"], None),
        (vec!["summarize", "--records", "-"], Some("")),
        (vec!["mub", "--graph", p(&graph)], None),
        (vec!["frobnicate"], None),
    ];
    for (args, input) in cases {
        let out = match input {
            Some(text) => hc_stdin(&args, text),
            None => hc(&args),
        };
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let out = hc(&["opt", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(1));
}
