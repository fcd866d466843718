use std::collections::HashMap;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eginoe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Header plus data rows of a CSV table, skipping `#` provenance lines.
fn csv_rows(text: &str) -> (Vec<String>, Vec<HashMap<String, String>>) {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            header
                .iter()
                .cloned()
                .zip(r.iter().map(String::from))
                .collect()
        })
        .collect();
    (header, rows)
}

fn num(row: &HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

#[test]
fn exact_distribution_sums_to_one() {
    let o = run(&["exact", "--n", "4", "--tau", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(
        header,
        ["regime", "n", "tau_or_alpha", "tau", "m", "l", "log_p", "p"]
    );
    assert_eq!(rows.len(), 3);
    let total: f64 = rows.iter().map(|r| num(r, "p")).sum();
    assert!((total - 1.0).abs() < 1e-8);
    let p44 = rows.iter().find(|r| r["m"] == "4").unwrap();
    assert!((num(p44, "p") - 0.125).abs() < 1e-14);
}

#[test]
fn csv_floats_round_trip_exactly() {
    let csv = stdout(&run(&["exact", "--n", "6", "--tau", "0.3"]));
    let json = stdout(&run(&[
        "exact", "--n", "6", "--tau", "0.3", "--format", "json",
    ]));
    let (_, rows) = csv_rows(&csv);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (r, j) in rows.iter().zip(jrows) {
        assert_eq!(num(r, "log_p"), j["log_p"].as_f64().unwrap());
        assert!(r["log_p"].contains('e'));
    }
    assert_eq!(v["provenance"]["command"], "exact");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["exact", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["exact", "--n", "4", "--tau", "1:0:0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn domain_and_degenerate_errors_exit_3() {
    let o = run(&["exact", "--n", "3", "--tau", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("eginoe:"));
    let o = run(&[
        "asym", "--regime", "weak", "--alpha", "0", "--n", "10", "--l", "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn potential_approaches_limits() {
    let o = run(&["potential", "--n", "10000", "--tau", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = csv_rows(&stdout(&o));
    let r = &rows[0];
    assert!((num(r, "y_star_n") - (2.0f64 / 3.0).sqrt()).abs() < 1e-3);
    assert!((num(r, "q_gap") - 3f64.ln()).abs() < 1e-2);
    assert_eq!(num(r, "gap_limit"), 3f64.ln());
}

#[test]
fn crosscheck_routes_agree() {
    let o = run(&["crosscheck", "--n", "2,6", "--tau", "0.25,0.75"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!(r["max_disagreement"].as_f64().unwrap() < 1e-10);
        assert!(r["normalization_defect"].as_f64().unwrap().abs() < 1e-12);
    }
    let n2 = &rows[0];
    assert_eq!(n2["n"], 2);
    let ratio = n2["ratio_laguerre"].as_f64().unwrap();
    // p_{2,0}/p_{2,2} = (1 - p22)/p22 with p22 = √((1+τ)/2)
    let p22 = (1.25f64 / 2.0).sqrt();
    assert!((ratio - (1.0 - p22) / p22).abs() < 1e-12);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("eginoe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# sweep\nn = 4\ntau = 0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let (_, rows) = csv_rows(&stdout(&run(&["exact", "--config", cfg])));
    assert!(rows.iter().all(|r| r["n"] == "4" && num(r, "tau") == 0.5));

    let (_, rows) = csv_rows(&stdout(&run(&["exact", "--config", cfg, "--tau", "0.25"])));
    assert!(rows.iter().all(|r| r["n"] == "4" && num(r, "tau") == 0.25));

    std::fs::write(dir.join("bad.cfg"), "colour = red\n").unwrap();
    let o = run(&["exact", "--config", dir.join("bad.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("eginoe-out-{}.csv", std::process::id()));
    let o = run(&[
        "exact",
        "--n",
        "2",
        "--tau",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let (_, rows) = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 2);
    std::fs::remove_file(&path).ok();
}

#[test]
fn residual_sweep_marks_rows_beyond_zonal_cap() {
    let o = run(&[
        "residual-sweep",
        "--n",
        "20,100",
        "--tau",
        "0.5",
        "--l",
        "1,2",
        "--regime",
        "strong",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header.last().unwrap(), "error");
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let capped = r["n"] == "100" && r["l"] == "2";
        assert_eq!(r["error"].is_empty(), !capped, "{r:?}");
        if !capped {
            assert!(num(r, "residual").is_finite());
        }
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let args = [
        "mc", "--n", "4", "--tau", "0", "--trials", "2000", "--seed", "3",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let (_, rows) = csv_rows(&a);
    let count: u64 = rows
        .iter()
        .map(|r| r["count"].parse::<u64>().unwrap())
        .sum();
    assert_eq!(count, 2000);
    assert!(rows
        .iter()
        .all(|r| r["m"].parse::<usize>().unwrap() % 2 == 0));
}
