use std::process::{Command, Output};

fn liouville(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .env_remove("LP_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<serde_json::Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn witness_for_three_two() {
    let out = liouville(&["witness", "--q", "3", "--a", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let record = &json_lines(&out)[0];
    assert_eq!(record["least_plus"], 14);
    assert_eq!(record["least_minus"], 2);
}

#[test]
fn witness_usage_errors() {
    let out = liouville(&["witness", "--q", "4", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    let out = liouville(&["witness", "--q", "3", "--a", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a unit"));
    assert_eq!(liouville(&["witness", "--q", "3"]).status.code(), Some(1));
    assert_eq!(liouville(&["--tolerance", "-1", "lfunction", "--q", "3"]).status.code(), Some(1));
    assert_eq!(liouville(&["--segment-size", "1000", "scan", "--q-min", "3", "--q-max", "5"]).status.code(), Some(1));
}

#[test]
fn scan_reports_and_summary() {
    let out = liouville(&["scan", "--q-min", "3", "--q-max", "19", "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let qs: Vec<u64> = json_lines(&out).iter().map(|r| r["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, vec![3, 5, 7, 11, 13, 17, 19]);
    let summary = String::from_utf8_lossy(&out.stderr).to_string();
    let max: f64 = summary
        .split("max exponent ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(max >= 14f64.ln() / 3f64.ln() - 1e-6);
}

#[test]
fn scan_csv_and_empty_range() {
    let out = liouville(&["--format", "csv", "scan", "--q-min", "3", "--q-max", "3"]);
    assert_eq!(
        stdout(&out),
        "q,a,least_plus,least_minus,n_of_q,exponent\n3,1,1,7,14,2.402174\n3,2,14,2,14,2.402174\n"
    );
    let out = liouville(&["scan", "--q-min", "20", "--q-max", "22"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_selectors() {
    let out = liouville(&["verify", "--lemma", "parseval", "--q", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["pass"], true);

    let out = liouville(&["verify", "--lemma", "all", "--q", "101"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = json_lines(&out).iter().map(|r| r["lemma"].as_str().unwrap().to_owned()).collect();
    assert_eq!(
        names,
        [
            "gauss", "poisson", "large-sieve", "parseval", "inversion", "comb", "hyperbola",
            "lfunction", "holder", "key-identity", "census", "exceptional"
        ]
    );

    let out = liouville(&["verify", "--lemma", "comb", "--q", "5", "--set-a", "1,2,3", "--set-b", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(liouville(&["verify", "--lemma", "nope", "--q", "5"]).status.code(), Some(1));
}

#[test]
fn large_sieve_records_its_generator() {
    let out = liouville(&["--seed", "9", "verify", "--lemma", "large-sieve", "--q", "11"]);
    let report = &json_lines(&out)[0];
    assert_eq!(report["params"]["rng"], "ChaCha8Rng");
    assert_eq!(report["params"]["seed"], 9);
}

#[test]
fn lfunction_spectrum_census() {
    let l = &json_lines(&liouville(&["lfunction", "--q", "3"]))[0];
    assert!((l["value"].as_f64().unwrap() - 0.6045997881).abs() <= 1e-6);

    let rows = json_lines(&liouville(&["spectrum", "--q", "3"]));
    assert!(rows[0]["abs"].as_f64().unwrap().abs() < 1e-12);
    assert!((rows[1]["abs"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    let rows = json_lines(&liouville(&["census", "--q", "3", "--x", "12"]));
    let starts: Vec<u64> = rows.iter().map(|r| r["start"].as_u64().unwrap()).collect();
    assert_eq!(starts, vec![1, 4, 7]);
}

#[test]
fn output_file_and_workers() {
    let dir = std::env::temp_dir().join(format!("liouville-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["--format", "csv", "--output", path.to_str().unwrap(), "scan", "--q-min", "3", "--q-max", "7"])
        .env("LP_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 + 4 + 6);
    std::fs::remove_dir_all(&dir).unwrap();
}
