use std::process::{Command, Output};

fn hilbno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn mu_table_plane_column() {
    let o = hilbno(&["mu-table", "--surfaces", "P2", "--n-range", "2..8", "--format", "csv"]);
    assert!(o.status.success());
    let mus: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    assert_eq!(mus, ["1", "1", "3/2", "2", "2", "12/5", "8/3"]);
}

#[test]
fn mu_table_hirzebruch_entries() {
    let o = hilbno(&["mu-table", "--surfaces", "H1", "--n", "9"]);
    assert_eq!(json(&o)[0]["mu"], "5/3");
    let o = hilbno(&["mu-table", "--surfaces", "H2", "--n", "2", "--approx", "--format", "csv"]);
    assert_eq!(stdout(&o), "surface,n,mu,mu_approx\nH2,2,1/3,3.333333e-1\n");
}

#[test]
fn plane_body_rows() {
    let o = hilbno(&["body", "--surface", "c2", "--n", "2", "--r", "1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["row_count"], 5);
    assert_eq!(v["unbounded"], true);
    assert_eq!(v["h_representation"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn unbounded_volume_is_refused() {
    let o = hilbno(&["body", "--surface", "c2", "--n", "2", "--r", "1", "--volume"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bounded"));
}

#[test]
fn toric_volumes() {
    let o = hilbno(&["body", "--surface", "P1xP1", "--coeffs", "1,1", "--n", "2", "--r", "0", "--volume", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,r,vertex_count,volume\n2,0,12,1/2\n");
    let o = hilbno(&["body", "--surface", "P2", "--coeffs", "4", "--n", "4", "--r", "1", "--vertices", "--volume"]);
    let v = json(&o);
    assert_eq!(v["vertex_count"], 186);
    assert_eq!(v["volume"], "112811/2688");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 186);
}

#[test]
fn output_is_deterministic() {
    let args = ["body", "--surface", "H1", "--coeffs", "2,1", "--n", "2", "--r", "1", "--vertices", "--volume"];
    let (a, b) = (hilbno(&args), hilbno(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"command": "body", "surface": "P2", "coeffs": ["2"], "n": 2, "r": 1, "volume": true, "format": "csv"}"#,
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let o = hilbno(&["--config", path]);
    assert_eq!(stdout(&o), "n,r,vertex_count,volume\n2,1,12,7/8\n");
    let out = dir.path().join("out.csv");
    let o = hilbno(&["--config", path, "body", "--n", "1", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    // one point: the triangle of degree 2 has area 2
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "n,r,vertex_count,volume\n1,1,3,2\n");
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"command": "body", "colour": "red"}"#).unwrap();
    let o = hilbno(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    assert_eq!(hilbno(&["body", "--n", "2"]).status.code(), Some(2));
    assert_eq!(hilbno(&["body", "--surface", "K3", "--n", "2", "--r", "0"]).status.code(), Some(2));
    assert_eq!(hilbno(&["check", "plots"]).status.code(), Some(2));
    assert_eq!(hilbno(&["dh-grid", "--r", "3"]).status.code(), Some(2));
    assert_eq!(hilbno(&[]).status.code(), Some(2));
    assert_eq!(hilbno(&["semigroup", "decompose", "--vector", "0,0,0,1", "--r", "2"]).status.code(), Some(2));
}

#[test]
fn semigroup_actions() {
    let o = hilbno(&["semigroup", "decompose", "--vector", "0,1,3,3", "--r", "2"]);
    let v = json(&o);
    let parts = v["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 2);
    let sum: Vec<i64> = (0..4)
        .map(|k| parts.iter().map(|p| p[k].as_i64().unwrap()).sum())
        .collect();
    assert_eq!(sum, [0, 1, 3, 3]);
    let o = hilbno(&["semigroup", "member", "--vector", "0,0,0,2", "--r", "2"]);
    assert_eq!(json(&o)["member"], true);
    let o = hilbno(&["semigroup", "enumerate", "--n", "2", "--r", "1", "--p", "1", "--q", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "p1,p2,q1,q2\n0,1,0,1\n0,1,1,0\n");
    let o = hilbno(&[
        "semigroup", "enumerate", "--surface", "P2", "--coeffs", "1", "--n", "2", "--r", "1", "--p-max", "5", "--q-max", "5",
    ]);
    assert_eq!(json(&o)["count"], 3);
}

#[test]
fn dh_grid_table() {
    let o = hilbno(&["dh-grid", "--r", "10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,count_scaled,fiber_volume,abs_dev"));
    assert_eq!(lines.count(), 25);
    let o = hilbno(&["dh-grid", "--r", "10"]);
    assert_eq!(json(&o)["max_dev"], "51/200");
}

#[test]
fn check_suites_pass() {
    let o = hilbno(&["check", "catalan", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches(",PASS,").count(), 6);
    let o = hilbno(&["check", "mu", "--surfaces", "P2,H1", "--n-range", "2..8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 14);
    let o = hilbno(&["check", "mu", "--surfaces", "P2", "--n-range", "41..41"]);
    assert_eq!(o.status.code(), Some(2));
}
