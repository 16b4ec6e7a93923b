use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn weylcdma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylcdma"))
        .args(args)
        .env_remove("WEYLCDMA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = weylcdma(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("# {key}=");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

fn key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn solve_reports_certified_optimum() {
    let text = stdout_ok(&["solve", "--k", "7"]);
    let kv = key_values(&text);
    let get = |key: &str| kv.iter().find(|(k, _)| k == key).unwrap().1.clone();
    assert_eq!(get("rho").split(',').count(), 7);
    assert!(get("kkt_residual").parse::<f64>().unwrap() < 1e-9);
    assert_eq!(get("sampling_holds"), "true");
    let opt: f64 = get("objective").parse().unwrap();
    let sampled: f64 = get("sampling_min_objective").parse().unwrap();
    assert!(opt <= sampled);
}

#[test]
fn snr_table_has_one_row_per_slot() {
    let text = stdout_ok(&[
        "snr",
        "--n",
        "31",
        "--k",
        "31",
        "--gamma",
        "0.0161",
        "--ebn0-db",
        "25",
    ]);
    let rows = data_lines(&text);
    assert_eq!(rows[0], "sigma,gamma,snr,lower_bound");
    assert_eq!(rows.len(), 32);
    for row in &rows[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cols[2] >= cols[3] - 1e-12, "snr below bound: {row}");
    }
    assert_eq!(header_value(&text, "e_over_n0"), Some("316.22776601683796"));
}

#[test]
fn correlate_weyl_half_turn_bound_is_one() {
    let text = stdout_ok(&[
        "correlate",
        "--family",
        "weyl",
        "--rho-i",
        "0.2",
        "--rho-k",
        "0.7",
        "--n",
        "31",
    ]);
    let rows = data_lines(&text);
    assert_eq!(rows[0], "lag,abs_c,abs_theta,abs_theta_hat,bound");
    assert_eq!(rows.len(), 32);
    for row in &rows[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[4], 1.0);
        assert!(cols[1] <= 1.0 + 1e-9);
    }
}

#[test]
fn generate_weyl_and_vdc() {
    let text = stdout_ok(&["generate", "--family", "weyl", "--rho", "0.25", "--n", "8"]);
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 9);
    // chip 2 of rho = 1/4 sits at half a turn
    let chip2: Vec<f64> = rows[2].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((chip2[1] + 1.0).abs() < 1e-12 && chip2[2].abs() < 1e-12);

    let vdc = stdout_ok(&["generate", "--family", "vdc", "--n", "32", "--k", "4"]);
    assert_eq!(
        data_lines(&vdc),
        ["k,v,sigma", "1,0,0", "2,0.5,16", "3,0.25,8", "4,0.75,24"]
    );
}

#[test]
fn ber_sweep_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_weylcdma"))
            .args([
                "ber-sweep",
                "--family",
                "gold",
                "--k",
                "6",
                "--ebn0-db",
                "6",
                "--trials",
                "3000",
                "--seed",
                "17",
                "--values",
                "2,4,6",
            ])
            .arg("--out")
            .arg(&path)
            .env("WEYLCDMA_THREADS", threads)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        fs::read_to_string(path).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    assert_eq!(a, b);
    let rows = data_lines(&a);
    assert_eq!(
        rows[0],
        "axis_value,family,policy,gamma,kmax,mean_ber,wilson_lo,wilson_hi,bits"
    );
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("2,gold,random,"));
    assert_eq!(header_value(&a, "trials"), Some("3000"));
    assert_eq!(header_value(&a, "sigma_mode"), Some("per-trial"));
}

#[test]
fn config_hash_tracks_parameters() {
    let base = [
        "ber-sweep",
        "--family",
        "optimal",
        "--k",
        "3",
        "--trials",
        "200",
        "--values",
        "2,3",
    ];
    let a = stdout_ok(&base);
    let again = stdout_ok(&base);
    let mut reseeded = base.to_vec();
    reseeded.extend(["--seed", "1"]);
    let b = stdout_ok(&reseeded);
    assert_eq!(
        header_value(&a, "config_sha256"),
        header_value(&again, "config_sha256")
    );
    assert_ne!(
        header_value(&a, "config_sha256"),
        header_value(&b, "config_sha256")
    );
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        "family = \"weyl\"\nkmax = 16\nn = 31\nk = 4\ntrials = 500\ngamma = \"half-k\"\nvalues = [2.0, 4.0]\nsigma-mode = \"fixed\"\n",
    )
    .unwrap();
    let text = stdout_ok(&[
        "ber-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "300",
    ]);
    assert_eq!(header_value(&text, "trials"), Some("300"));
    assert_eq!(header_value(&text, "kmax"), Some("16"));
    assert_eq!(header_value(&text, "gamma_rule"), Some("1/(2K)"));
    assert_eq!(header_value(&text, "sigma_mode"), Some("fixed"));
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 3);
    // gamma = 1/(2K) follows the swept user count
    assert!(rows[1].contains(",2.500000000000e-1,"));
    assert!(rows[2].contains(",1.250000000000e-1,"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "chips = 31\n").unwrap();
    let out = weylcdma(&["ber-sweep", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid config file"));
}

#[test]
fn preset_writes_one_csv_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = weylcdma(&[
        "ber-sweep",
        "--preset",
        "fig3",
        "--trials",
        "100",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for curve in ["random", "vdc"] {
        let text = fs::read_to_string(dir.path().join(format!("fig3_{curve}.csv"))).unwrap();
        assert_eq!(header_value(&text, "preset"), Some("fig3"));
        assert_eq!(header_value(&text, "n"), Some("32"));
        assert_eq!(header_value(&text, "trials"), Some("100"));
        assert_eq!(data_lines(&text).len(), 1 + 31);
    }
}

#[test]
fn preset_refuses_parameter_changes() {
    let out = weylcdma(&["ber-sweep", "--preset", "fig1", "--n", "64"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("fixes its own parameters"));
}

#[test]
fn invalid_inputs_exit_nonzero_with_diagnostics() {
    let cases: [&[&str]; 5] = [
        &["ber-sweep", "--preset", "fig9"],
        &["ber-sweep", "--family", "optimal", "--kmax", "4"],
        &[
            "ber-sweep",
            "--policy",
            "vdc",
            "--n",
            "31",
            "--trials",
            "10",
        ],
        &["snr", "--n", "4", "--k", "9", "--ebn0-db", "10"],
        &["generate", "--family", "weyl", "--rho", "1.5"],
    ];
    for args in cases {
        let out = weylcdma(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
}

#[test]
fn unwritable_output_path_fails() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("x.csv");
    let out = weylcdma(&[
        "ber-sweep",
        "--trials",
        "10",
        "--values",
        "2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!Path::new(&target).exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot create"));
}
