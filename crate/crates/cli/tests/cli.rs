use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rmdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmdc")).args(args).env_remove("RMDC_WORKERS").output().expect("binary runs")
}

fn rmdc_with_workers(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmdc")).args(args).env("RMDC_WORKERS", workers).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let data = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, data)
}

fn manifest(path: &Path) -> serde_json::Value {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    serde_json::from_str(&fs::read_to_string(name).unwrap()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&rmdc(&["--help"])), 0);
    assert_eq!(code(&rmdc(&["no-such-command"])), 1);
    assert_eq!(code(&rmdc(&["baseline", "--n", "4", "--d-a", "3"])), 1);
    assert_eq!(code(&rmdc(&["validate", "--level", "medium"])), 1);
    assert_eq!(code(&rmdc(&["rmdc", "--n", "15", "--k", "1", "--samples", "10"])), 3);
    assert_eq!(code(&rmdc(&["dephase", "--n", "11", "--k", "1", "--samples", "10"])), 3);
    // Thirty samples with this seed land outside the 3 SE gate.
    assert_eq!(code(&rmdc(&["--seed", "2", "baseline", "--n", "4", "--samples", "30"])), 2);
    assert_eq!(code(&rmdc(&["--seed", "2", "baseline", "--n", "4", "--samples", "2000"])), 0);
    assert_eq!(code(&rmdc_with_workers(&["surface", "--d", "16"], "zero")), 1);
}

#[test]
fn csv_schemas_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.csv");
    let base = dir.path().join("base.csv");
    let surf = dir.path().join("surf.csv");
    let s = sweep.to_str().unwrap();
    assert_eq!(code(&rmdc(&["rmdc", "--n", "3", "--k", "0,1", "--samples", "50", "--out", s])), 0);
    assert_eq!(code(&rmdc(&["baseline", "--n", "2", "--exact", "--out", base.to_str().unwrap()])), 0);
    assert_eq!(
        code(&rmdc(&["surface", "--d", "16", "--k-max", "2", "--theta-steps", "4", "--out", surf.to_str().unwrap()])),
        0
    );
    assert_eq!(
        rows(&sweep).0,
        [
            "schema_version",
            "config_hash",
            "k",
            "theta",
            "mc_mean",
            "mc_mean_se",
            "mc_var",
            "mc_var_se",
            "analytic_mean",
            "analytic_var",
            "resample_count"
        ]
    );
    assert_eq!(
        rows(&base).0,
        [
            "schema_version",
            "config_hash",
            "n",
            "d_a",
            "samples",
            "mc_mean",
            "mc_mean_se",
            "mc_var",
            "mc_var_se",
            "haar_mean",
            "haar_var",
            "clifford_mean",
            "clifford_var",
            "mean_pass",
            "var_pass"
        ]
    );
    assert_eq!(rows(&surf).0, ["schema_version", "theta", "k", "log10_delta"]);
    for p in [&sweep, &base, &surf] {
        assert!(rows(p).1.iter().all(|r| r[0] == "1"));
        assert_eq!(manifest(p)["csv_schema_version"], 1);
    }
}

#[test]
fn manifest_hashes_match_rows_and_replay_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = ["--seed", "77", "rmdc", "--n", "4", "--k", "0..=2", "--theta", "pi/4", "--samples", "200", "--out"];
    let mut full: Vec<&str> = args.to_vec();
    full.push(out.to_str().unwrap());
    assert_eq!(code(&rmdc(&full)), 0);
    let m = manifest(&out);
    assert!(m["finished_at"].is_string());
    assert_eq!(m["master_seed"], 77);
    let hashes: Vec<String> =
        m["config_hashes"].as_array().unwrap().iter().map(|h| h.as_str().unwrap().into()).collect();
    let (_, data) = rows(&out);
    assert_eq!(data.iter().map(|r| r[1].clone()).collect::<Vec<_>>(), hashes);

    let copy = dir.path().join("again.csv");
    let manifest_file = dir.path().join("r.csv.manifest.json");
    assert_eq!(code(&rmdc(&["replay", manifest_file.to_str().unwrap(), "--out", copy.to_str().unwrap()])), 0);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&copy).unwrap());
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let args = ["--seed", "5", "dephase", "--n", "3", "--k", "0,2", "--samples", "300"];
    let one = rmdc_with_workers(&args, "1");
    let three = rmdc_with_workers(&args, "3");
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let from_file = dir.path().join("a.csv");
    fs::write(
        &cfg,
        format!(
            "seed = 11\n[rmdc]\nn = 3\nk = [0, 1]\ntheta = \"pi/2\"\nsamples = 40\nout = {:?}\n",
            from_file.to_str().unwrap()
        ),
    )
    .unwrap();
    assert_eq!(code(&rmdc(&["--config", cfg.to_str().unwrap(), "rmdc"])), 0);
    let m = manifest(&from_file);
    assert_eq!(m["run"]["n"], 3);
    assert_eq!(m["run"]["samples"], 40);
    assert_eq!(m["master_seed"], 11);

    let overridden = dir.path().join("b.csv");
    let o = rmdc(&[
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "12",
        "rmdc",
        "--samples",
        "60",
        "--out",
        overridden.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let m = manifest(&overridden);
    assert_eq!(m["run"]["samples"], 60);
    assert_eq!(m["run"]["n"], 3);
    assert_eq!(m["master_seed"], 12);

    fs::write(&cfg, "[rmdc]\nqubits = 3\n").unwrap();
    assert_eq!(code(&rmdc(&["--config", cfg.to_str().unwrap(), "rmdc"])), 1);
}

#[test]
fn zero_layer_row_reproduces_the_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("s.csv");
    let base = dir.path().join("b.csv");
    let common = ["--seed", "9"];
    let mut a = common.to_vec();
    a.extend(["rmdc", "--n", "4", "--k", "0", "--samples", "400", "--out", sweep.to_str().unwrap()]);
    let mut b = common.to_vec();
    b.extend(["baseline", "--n", "4", "--samples", "400", "--out", base.to_str().unwrap()]);
    assert_eq!(code(&rmdc(&a)), 0);
    let _ = rmdc(&b);
    let (_, s) = rows(&sweep);
    let (_, bl) = rows(&base);
    // mc_mean, mc_mean_se, mc_var, mc_var_se
    assert_eq!(s[0][4..8], bl[0][5..9]);
}

#[test]
fn surface_has_a_flat_first_column_and_a_valley_at_pi_over_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("surf.csv");
    assert_eq!(code(&rmdc(&["surface", "--theta-steps", "8", "--k-max", "6", "--out", out.to_str().unwrap()])), 0);
    let (_, data) = rows(&out);
    let parse =
        |r: &Vec<String>| (r[1].parse::<f64>().unwrap(), r[2].parse::<u32>().unwrap(), r[3].parse::<f64>().unwrap());
    let cells: Vec<(f64, u32, f64)> = data.iter().map(parse).collect();
    let k0: Vec<f64> = cells.iter().filter(|c| c.1 == 0).map(|c| c.2).collect();
    assert!(k0.iter().all(|v| (v - k0[0]).abs() < 1e-10));
    for k in 1..=6 {
        let best = cells.iter().filter(|c| c.1 == k).min_by(|a, b| a.2.total_cmp(&b.2)).unwrap();
        assert!((best.0 - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    }
}

#[test]
fn fast_validation_passes() {
    let o = rmdc(&["validate", "--level", "fast"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).matches("PASS").count(), 4);
}
