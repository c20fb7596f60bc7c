use std::process::{Command, Output};

fn qcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| if c == "inf" { f64::INFINITY } else { c.parse().unwrap() }).collect())
        .collect();
    (header, rows)
}

#[test]
fn capacity_examples() {
    let o = qcap(&["capacity", "lossy:eta=0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lower: 1 (reverse-coherent-information)\nupper: 1 (entanglement-flux)\nexact: true\n");
    let o = qcap(&["capacity", "damping:p=0.25"]);
    let text = stdout(&o);
    assert!(text.contains("(reverse-coherent-information)") && text.contains("exact: false"), "{text}");
    let o = qcap(&["capacity", "erasure:d=4,p=0.5"]);
    assert!(stdout(&o).contains("upper: 1 ") && stdout(&o).contains("exact: true"));
}

#[test]
fn exit_codes() {
    assert_eq!(qcap(&["capacity", "lossy:eta=0.5,"]).status.code(), Some(2));
    assert_eq!(qcap(&["capacity", "damping:p=1.5"]).status.code(), Some(3));
    assert_eq!(qcap(&["sweep", "lossy", "--from", "0.1", "--to", "0.9", "--series", "nope"]).status.code(), Some(2));
    assert_eq!(qcap(&["capacity"]).status.code(), Some(2));
    let err = String::from_utf8(qcap(&["capacity", "lossy:eta=x"]).stderr).unwrap();
    assert!(err.contains("position 10"), "{err}");
}

#[test]
fn distance_recipe_orders_rates_below_capacity() {
    let args = [
        "sweep",
        "lossy",
        "--distance-km",
        "--from",
        "0",
        "--to",
        "500",
        "--points",
        "51",
        "--series",
        "capacity,tgw,no-switching,twoway-hom,bb84-1ph,bb84-decoy,dvmdi",
    ];
    let first = stdout(&qcap(&args));
    assert_eq!(first, stdout(&qcap(&args)), "CSV must be bit-stable");
    let (header, rows) = parse_csv(&first);
    assert_eq!(header[0], "x");
    assert_eq!(rows.len(), 51);
    assert_eq!(rows[5][0], 50.0);
    for w in rows.windows(2) {
        for j in 1..header.len() {
            assert!(w[1][j] <= w[0][j], "{} not decreasing", header[j]);
        }
    }
    for row in rows.iter().skip(1) {
        let capacity = row[1];
        assert!(row[2] > capacity, "tgw stays above the capacity");
        assert!(row[3..].iter().all(|&r| r <= capacity), "{row:?}");
    }
}

#[test]
fn additive_gap_shrinks_towards_zero_noise() {
    let o = qcap(&[
        "sweep",
        "additive",
        "--from",
        "0.3",
        "--to",
        "0.01",
        "--points",
        "20",
        "--series",
        "flux,coherent-info-clamped",
    ]);
    let (_, rows) = parse_csv(&stdout(&o));
    let gaps: Vec<f64> = rows.iter().map(|r| r[1] - r[2]).collect();
    assert!(gaps.iter().all(|&g| g >= 0.0));
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
    assert!(gaps[gaps.len() - 1] < 0.02);
}

#[test]
fn json_and_file_output() {
    let dir = std::env::temp_dir().join(format!("qcap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    let o = qcap(&[
        "sweep",
        "lossy",
        "--from",
        "0.5",
        "--to",
        "1",
        "--points",
        "2",
        "--format=json",
        &format!("--out={}", path.display()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"], serde_json::json!(["lower", "upper"]));
    assert_eq!(v["rows"][0], serde_json::json!([0.5, 1.0, 1.0]));
    assert_eq!(v["rows"][1][2], "Infinity");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_limit_examples() {
    let o = qcap(&["verify-limit", "lossy:eta=0.5", "--mu", "1e2,1e3,1e4"]);
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = parse_csv(&stdout(&o));
    assert_eq!(header, ["mu", "s_mu", "closed_form", "abs_diff", "scaled_diff"]);
    assert!(rows.iter().all(|r| r[4] <= 10.0));
    let o = qcap(&["verify-limit", "additive:xi=1"]);
    assert!(parse_csv(&stdout(&o)).1.iter().all(|r| r[3] == 0.0));
    let o = qcap(&["verify-limit", "amplifier:g=2", "--mu", "1e6"]);
    let (_, rows) = parse_csv(&stdout(&o));
    assert!((rows[0][1] - 1.0).abs() < 1e-5 && rows[0][2] == 1.0);
}

#[test]
fn telesim_examples() {
    let o = stdout(&qcap(&["telesim-check", "dephasing:p=0.3"]));
    let distance: f64 = o.lines().nth(1).unwrap().strip_prefix("choi_distance: ").unwrap().parse().unwrap();
    assert!(o.starts_with("covariant: true") && distance < 1e-12);
    assert!(stdout(&qcap(&["telesim-check", "damping:p=0.5"])).starts_with("covariant: false"));
    assert_eq!(qcap(&["telesim-check", "lossy:eta=0.5"]).status.code(), Some(3));
}

#[test]
fn qkd_rate_examples() {
    let o = stdout(&qcap(&["qkd-rate", "bb84-decoy", "1"]));
    assert!(o.contains("rate: 0.183939720586\n"), "{o}");
    let o = stdout(&qcap(&["qkd-rate", "cvmdi-sym", "0.3", "--format=json"]));
    let v: serde_json::Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["clamped"], true);
    assert_eq!(v["rate"], 0.0);
}
