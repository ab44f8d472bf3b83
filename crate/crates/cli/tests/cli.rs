use std::process::{Command, Output};

fn fiid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiid"))
        .args(args)
        .env_remove("FIID_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generators_report_rank_and_claim() {
    let o = fiid(&["generators", "--d", "4", "--k", "3", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 6, free-claim PASS (n ≤ 3)"), "{}", stdout(&o));

    let o = fiid(&["generators", "--d", "3", "--k", "2", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rank 2, free-claim PASS (n ≤ 4)"));
}

#[test]
fn odd_degree_k1_is_an_error() {
    let o = fiid(&["generators", "--d", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("k=1 with odd d") && err.contains("edge-vertex"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(fiid(&["measure", "--nope"]).status.code(), Some(1));
    assert_eq!(fiid(&["measure", "--process", "bogus"]).status.code(), Some(1));
    assert_eq!(fiid(&["measure", "--process", "majority", "--eps", "0.5"]).status.code(), Some(1));
    assert_eq!(fiid(&["--help"]).status.code(), Some(0));
}

#[test]
fn majority_exact_row() {
    let o = fiid(&["measure", "--process", "majority", "--d", "3", "--k", "1", "--R", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("exact-enumeration"));
    assert!(s.contains("edge-vertex (d=3,k=1)") && s.contains("PASS"), "{s}");
}

#[test]
fn identity_has_zero_information() {
    let o = fiid(&["measure", "--process", "identity", "--d", "3", "--k", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["mi"]["value"].as_f64(), Some(0.0));
    assert!(row["verdicts"].as_array().unwrap().iter().all(|x| x["pass"] == true));
}

#[test]
fn measurement_rows_carry_schema_seed_method_and_verdicts() {
    let o = fiid(&[
        "measure", "--process", "majority", "--k", "1-2", "--budget", "1", "--samples", "4000", "--seed", "12",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 12);
    assert_eq!(v["schema"], 1);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["schema"], 1);
        assert_eq!(row["method"], "monte-carlo");
        assert_eq!(row["seed"], 12);
        assert!(row["mi"]["stderr"].as_f64().unwrap() > 0.0);
        assert_eq!(row["verdicts"].as_array().unwrap().len(), 2);
        assert!(row["joint"]["matrix"].is_array());
    }
}

#[test]
fn budget_env_forces_sampling() {
    let o = Command::new(env!("CARGO_BIN_EXE_fiid"))
        .args(["measure", "--process", "majority", "--k", "1", "--samples", "2000", "--format", "csv"])
        .env("FIID_BUDGET", "8")
        .output()
        .unwrap();
    assert!(stdout(&o).contains(",monte-carlo,2000,"));
}

#[test]
fn exact_only_over_budget_fails() {
    let o = fiid(&["measure", "--process", "majority", "--k", "1", "--samples", "0", "--budget", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exceeded"));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["measure", "--process", "majority", "--k", "2", "--budget", "1", "--samples", "3000", "--seed", "5"];
    assert_eq!(fiid(&args).stdout, fiid(&args).stdout);
    let other = ["measure", "--process", "majority", "--k", "2", "--budget", "1", "--samples", "3000", "--seed", "6"];
    assert_ne!(fiid(&args).stdout, fiid(&other).stdout);
}

#[test]
fn csv_header_and_seed_line() {
    let o = fiid(&["sharpness", "--kmax", "2", "--rmax", "3", "--format", "csv"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("# fiid sharpness seed=1"));
    assert_eq!(lines.next(), Some("d,k,R,ratio,beta,gap"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn gaussian_closed_form_only() {
    let o = fiid(&["gaussian", "--kmax", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert!(v["rows"][0]["monte_carlo"].is_null());
    assert!(v["extra"]["fitted_exponent"].as_f64().is_some());
    assert_eq!(v["extra"]["scaled_increasing"], true);
}

#[test]
fn gaussian_small_truncation_names_needed_radius() {
    let o = fiid(&["gaussian", "--kmax", "8", "--D", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("use D >="));
}

#[test]
fn gaussian_large_eps_stays_below_bound() {
    let o = fiid(&["gaussian", "--eps", "2", "--kmax", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn sparse_modes() {
    let o = fiid(&["sparse", "--n", "1000", "--d", "3", "--L", "2", "--mode", "set"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("separation OK, domination OK, rounds="));
    let o = fiid(&["sparse", "--n", "1000", "--d", "3", "--L", "2", "--mode", "coloring"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("≤ 10 = |B_2| in T_3"), "{}", stdout(&o));
    assert_eq!(fiid(&["sparse", "--n", "999", "--d", "3"]).status.code(), Some(1));
}

#[test]
fn factorization_counts_ball() {
    let o = fiid(&["factorization", "--d", "4", "--k", "3", "--L", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("elements 161 (|B_4| = 161), unique factorization PASS"));
}

#[test]
fn config_sweep_and_region_dump() {
    let dir = std::env::temp_dir().join(format!("fiid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.toml");
    std::fs::write(
        &cfg,
        "[[measure]]\nprocess = \"majority\"\nd = 3\nk = \"1-2\"\n\n[[measure]]\nprocess = \"parity\"\nd = 3\nk = 1\n",
    )
    .unwrap();
    let region = dir.join("region.json");
    let out = dir.join("out.csv");
    let o = fiid(&[
        "measure",
        "--config",
        cfg.to_str().unwrap(),
        "--dump-region",
        region.to_str().unwrap(),
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 2 + 3);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&region).unwrap()).unwrap();
    assert_eq!(r["vertices"].as_array().unwrap().len(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn failing_verdict_exits_two() {
    // An unfinished certificate counts as a failed verdict.
    let o = fiid(&["generators", "--d", "5", "--k", "5", "--nmax", "3", "--sequence-budget", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("INCOMPLETE"));
}
