use std::process::{Command, Output};

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(args: &[&str], field: &str) -> f64 {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = orlicz(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    v[field].as_f64().unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(value(&["eval", "--kind", "h1", "--x", "4"], "value"), 2.0);
    assert_eq!(value(&["eval", "--kind", "W", "--x", "0"], "value"), 0.0);
    assert_eq!(value(&["eval", "--kind", "h2", "--inverse", "--x", "0"], "value"), 0.0);
    let v = value(&["eval", "--family", "power:2", "--x", "1"], "value");
    assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
}

#[test]
fn eval_prints_fifteen_significant_digits() {
    let o = orlicz(&["eval", "--kind", "h2", "--x", "1", "--format", "csv"]);
    // 2 log 2 - 1
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "h2,1,false,0.386294361119891");
}

#[test]
fn domain_and_parse_errors_exit_two() {
    let o = orlicz(&["eval", "--kind", "h2", "--x", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonnegative"));
    assert_eq!(orlicz(&["norm", "--dist", "weibull:1", "--family", "power:2"]).status.code(), Some(2));
    assert_eq!(orlicz(&["table", "--step", "0"]).status.code(), Some(2));
    assert_eq!(orlicz(&["eval", "--x", "1"]).status.code(), Some(2));
}

#[test]
fn norm_examples() {
    let g = value(&["norm", "--dist", "gaussian:0,1", "--family", "power:2"], "value");
    assert!((g - (8.0f64 / 3.0).sqrt()).abs() < 1e-6);
    let p = value(&["norm", "--dist", "cpoisson:5", "--family", "bennett:1.0954"], "value");
    assert!(p <= 30f64.sqrt());

    let dir = tempfile::tempdir().unwrap();
    let zeros = dir.path().join("zeros.csv");
    std::fs::write(&zeros, "0\n0\n0\n").unwrap();
    let spec = format!("empirical:@{}", zeros.display());
    assert_eq!(value(&["norm", "--dist", &spec, "--family", "power:2"], "value"), 0.0);
}

#[test]
fn divergent_norm_exits_three() {
    let o = orlicz(&["norm", "--dist", "gaussian:0,1", "--family", "power:3"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bound_examples() {
    let args = ["bound", "convert", "--A", "1", "--B", "1"];
    assert!((value(&args, "L") - 2f64.sqrt()).abs() < 1e-12);
    assert!((value(&args, "tau") - 8f64.sqrt()).abs() < 1e-12);
    assert_eq!(value(&["bound", "tail", "--kind", "h1", "--tau", "1", "--L", "1", "--z", "0"], "bound"), 1.0);

    let o = orlicz(&["bound", "max", "--family", "bennett", "--tau", "1", "--L", "2", "--m", "1000000", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(String, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0].0, "exact");
    assert!(rows.len() == 3);
    assert!(rows[1..].iter().all(|(_, v)| *v >= rows[0].1));

    let small = orlicz(&["bound", "max", "--family", "bennett", "--tau", "1", "--L", "2", "--m", "10"]);
    assert!(small.status.success());
    assert!(String::from_utf8_lossy(&small.stderr).contains("omitted"));
}

#[test]
fn sum_bound_verbs() {
    let b = value(&["bound", "bennett", "--n", "100", "--sigma2", "0.21", "--b", "1", "--z", "1"], "bound");
    let k = value(
        &["bound", "prokhorov", "--n", "100", "--sigma2", "0.21", "--b", "1", "--z", "1", "--variant", "kruglov"],
        "bound",
    );
    let p = value(&["bound", "prokhorov", "--n", "100", "--sigma2", "0.21", "--b", "1", "--z", "1"], "bound");
    assert!(b <= k && k <= p);
    let phi = value(&["bound", "talagrand-phi", "--L", "1", "--S", "2", "--x", "1"], "phi");
    assert!((phi - 0.5).abs() < 1e-15);
}

#[test]
fn figure_table_is_byte_stable() {
    let a = orlicz(&["table", "--ratio"]);
    let b = orlicz(&["table", "--ratio"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next().unwrap(), "x,h0,h1,h2,h4,h5");
    assert_eq!(text.lines().count(), 502);
    let single = orlicz(&["table", "--xmin", "3", "--xmax", "3"]);
    assert_eq!(stdout(&single).lines().count(), 2);
}

#[test]
fn verify_selection_and_exit_codes() {
    let o = orlicz(&["verify", "--only", "Corollary2iii", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["lemma_id"], "Corollary2iii");
    assert_eq!(reports[0]["pass"], true);

    assert_eq!(orlicz(&["verify", "--only", "NoSuchLemma"]).status.code(), Some(2));
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_orlicz"))
            .args(["verify", "--only", "Lemma3", "--samples", "2000", "--format", "json"])
            .env("ORLICZ_SEED", seed)
            .output()
            .unwrap()
    };
    let a: serde_json::Value = serde_json::from_slice(&run("7").stdout).unwrap();
    assert_eq!(a[0]["seed"], 7);
    let b: serde_json::Value = serde_json::from_slice(&run("7").stdout).unwrap();
    assert_eq!(a, b);
}

#[test]
fn every_subcommand_has_help_and_formats() {
    for cmd in [&["eval"][..], &["table"], &["norm"], &["bound"], &["bound", "max"], &["verify"]] {
        let mut args = cmd.to_vec();
        args.push("--help");
        let o = orlicz(&args);
        assert!(o.status.success(), "{cmd:?}");
        if cmd != ["bound"] {
            assert!(stdout(&o).contains("--format"), "{cmd:?}");
        }
    }
    for format in ["json", "csv", "table"] {
        let o = orlicz(&["eval", "--kind", "h0", "--x", "1", "--format", format]);
        assert!(o.status.success());
    }
}
