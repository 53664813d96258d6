use std::process::Command as Proc;

use dicke_fcs_cli::config::{LambdaUnits, Quantity, Suite};
use dicke_fcs_cli::{run, Command, RunConfig};
use dicke_fcs_core::model::ModelParams;
use dicke_fcs_core::statistics::{cumulants, prepare};

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_dicke-fcs"))
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn header(text: &str) -> Vec<String> {
    text.lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .split(',')
        .map(String::from)
        .collect()
}

fn col(text: &str, name: &str) -> usize {
    header(text).iter().position(|h| h == name).unwrap()
}

fn small_scan(quantity: Quantity) -> RunConfig {
    RunConfig {
        quantity,
        lambda_range: "0:3:31".parse().unwrap(),
        ..RunConfig::default()
    }
}

#[test]
fn exit_codes() {
    let ok = bin().args(["criticals", "--omega0", "2", "--omega", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.contains("lambda1 = 7.0710678118654757e-1"), "{text}");

    let bad = bin().args(["scan", "--omega", "-1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let bad = bin().args(["scan", "--quantity", "colour"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));

    let pass = bin()
        .args(["verify", "--suite", "rwa-oracle", "--omega0", "2", "--omega", "1", "--lambda", "0.3"])
        .output()
        .unwrap();
    assert_eq!(pass.status.code(), Some(0), "{}", String::from_utf8_lossy(&pass.stdout));
    let gap = bin()
        .args(["verify", "--suite", "rwa-oracle", "--omega0", "2", "--omega", "1", "--lambda", "0.75"])
        .output()
        .unwrap();
    assert_eq!(gap.status.code(), Some(2));
}

#[test]
fn config_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let out = dir.path().join("energies.csv");
    std::fs::write(&cfg, "omega0 = 2\nomega = 1\nquantity = energies\nlambda_range = 0:2:21\n").unwrap();
    let status = bin()
        .args(["scan", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--omega", "1"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# omega0 = 2\n# omega = 1\n"));
    assert!(text.contains("# quantity = energies\n"));
    assert!(text.contains(&format!("# out = {}\n", out.display())));
}

#[test]
fn scan_is_byte_identical_on_rerun() {
    for q in [Quantity::Energies, Quantity::Occupations, Quantity::Cumulants, Quantity::Fano] {
        let cfg = small_scan(q);
        let a = run(Command::Scan, &cfg).unwrap().text;
        let b = run(Command::Scan, &cfg).unwrap().text;
        assert_eq!(a, b);
    }
}

#[test]
fn every_key_is_echoed() {
    let text = run(Command::Scan, &small_scan(Quantity::Energies)).unwrap().text;
    for key in RunConfig::default().echo() {
        let k = key.split(" = ").next().unwrap();
        assert!(text.contains(&format!("# {k} = ")), "{k}");
    }
}

#[test]
fn gap_rows_are_flagged_and_empty() {
    let cfg = RunConfig {
        omega0: 2.0,
        omega: 1.0,
        ..small_scan(Quantity::Energies)
    };
    let text = run(Command::Scan, &cfg).unwrap().text;
    let (gap, em) = (col(&text, "gap"), col(&text, "eps_minus"));
    let rows = data_rows(&text);
    let gaps: Vec<_> = rows.iter().filter(|r| r[gap] == "1").collect();
    assert!(!gaps.is_empty());
    assert!(gaps.iter().all(|r| r[em].is_empty() && r[2] == "gap"));
    assert!(rows.iter().filter(|r| r[gap] == "0").all(|r| !r[em].is_empty()));
}

#[test]
fn zero_coupling_has_no_photons() {
    let text = run(Command::Scan, &small_scan(Quantity::Occupations)).unwrap().text;
    let first = &data_rows(&text)[0];
    assert_eq!(first[0], "0.0000000000000000e0");
    assert_eq!(first[col(&text, "photon_fluct")], "0.0000000000000000e0");
}

#[test]
fn cumulant_scan_matches_library() {
    let cfg = RunConfig {
        lambda_units: LambdaUnits::Absolute,
        lambda_range: "0.1:0.3:3".parse().unwrap(),
        edge_points: 0,
        ..small_scan(Quantity::Cumulants)
    };
    let text = run(Command::Scan, &cfg).unwrap().text;
    let row = &data_rows(&text)[2];
    let cs = cumulants(&prepare(&ModelParams::new(0.5, 2.0, 0.3, 1.0, 0.5).unwrap()).unwrap(), 5).unwrap();
    for k in 1..=5 {
        let v: f64 = row[col(&text, &format!("fluct_{k}"))].parse().unwrap();
        assert_eq!(v, cs.fluctuation(k));
    }
}

#[test]
fn lossless_points_record_errors_without_aborting() {
    let cfg = RunConfig {
        gamma: 0.0,
        ..small_scan(Quantity::Cumulants)
    };
    let report = run(Command::Scan, &cfg).unwrap();
    let (err, gap) = (col(&report.text, "error"), col(&report.text, "gap"));
    let rows = data_rows(&report.text);
    assert_eq!(rows.len(), 31 + 12);
    // Without loss the gap shrinks to the single point λ = λ2.
    assert_eq!(rows.iter().filter(|r| r[gap] == "1").count(), 1);
    assert!(rows.iter().filter(|r| r[gap] == "0").all(|r| !r[err].is_empty()));
}

#[test]
fn evolve_starts_from_the_initial_condition() {
    let cfg = RunConfig {
        omega0: 2.0,
        omega: 1.0,
        t_max: 20.0,
        samples: 5,
        jet_order: 3,
        ..RunConfig::default()
    };
    let text = run(Command::Evolve, &cfg).unwrap().text;
    let rows = data_rows(&text);
    let t0 = &rows[0];
    let photon: f64 = t0[1].parse().unwrap();
    assert!(photon > 1.0);
    assert!(t0[3..].iter().all(|c| c.parse::<f64>().unwrap() == 0.0));
    assert_eq!(rows.len(), 5);
}

#[test]
fn verify_reports_every_check() {
    let cfg = RunConfig {
        suite: Suite::Diagonalizer,
        ..RunConfig::default()
    };
    let report = run(Command::Verify, &cfg).unwrap();
    assert!(!report.failed);
    assert_eq!(data_rows(&report.text).len(), 3);
}
