//! End-to-end checks of the binary: value correctness against the library,
//! bit-exact JSON round trips, CSV shape, and the exit-code contract.

use eigencurve_core::functionals::{
    generalized_inner_product, FunctionalRequest, PairFunction, Window,
};
use eigencurve_core::geometry::{CurveSpec, Eigenfunction};
use eigencurve_core::sharpness::equator_mixed_inner_product_exact;
use serde_json::Value;
use std::process::{Command, Output};

fn eigencurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigencurve"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_rows(output: &Output) -> Vec<Value> {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let v: Value = serde_json::from_slice(&output.stdout).expect("valid JSON");
    assert_eq!(v["schema_version"], "1");
    assert!(v["timing_ms"].is_number());
    v["rows"].as_array().expect("rows array").clone()
}

#[test]
fn inner_product_of_constants_is_one_half() {
    let out = eigencurve(&[
        "inner-product",
        "--f",
        "0,0",
        "--g",
        "0,0",
        "--curve",
        "equator",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    let modulus = rows[0]["modulus"].as_f64().unwrap();
    assert!((modulus - 0.5).abs() < 1e-12);
}

#[test]
fn inner_product_matches_sharpness_closed_form() {
    let out = eigencurve(&[
        "inner-product",
        "--f",
        "8,4",
        "--g",
        "4,4",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    let modulus = rows[0]["modulus"].as_f64().unwrap();
    let exact = equator_mixed_inner_product_exact(8, 4).unwrap();
    assert!((modulus - exact).abs() / exact < 1e-9);
}

#[test]
fn distinct_equator_modes_are_orthogonal() {
    let out = eigencurve(&[
        "inner-product",
        "--f",
        "4,2",
        "--g",
        "4,4",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    assert!(rows[0]["modulus"].as_f64().unwrap() < 1e-12);
}

#[test]
fn torus_matched_period_is_five() {
    let out = eigencurve(&[
        "period",
        "--surface",
        "torus",
        "--modes",
        "3,4",
        "--curve",
        "geodesic:3,4",
        "--nu",
        "5",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    assert!((rows[0]["modulus"].as_f64().unwrap() - 5.0).abs() < 1e-10);
}

#[test]
fn band_limited_period_vanishes() {
    let out = eigencurve(&[
        "period",
        "--f",
        "16,8",
        "--curve",
        "tilted:0.5236",
        "--nu",
        "20",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    assert!(rows[0]["modulus"].as_f64().unwrap() < 1e-10);
}

#[test]
fn windowed_period_equals_library_call_bit_for_bit() {
    let tilt: f64 = "0.5235987755982988".parse().unwrap();
    let out = eigencurve(&[
        "period",
        "--f",
        "128,64",
        "--curve",
        "tilted:0.5235987755982988",
        "--nu",
        "32",
        "--window",
        "0,0.25",
        "--format",
        "json",
    ]);
    let rows = json_rows(&out);
    let req = FunctionalRequest {
        f: Eigenfunction::sphere_harmonic(128, 64).unwrap(),
        g: PairFunction::One,
        curve: CurveSpec::tilted_great_circle(tilt).unwrap(),
        frequency: 32.0,
        window: Some(Window::new(0.0, 0.25).unwrap()),
        tol: 1e-10,
    };
    let reference = generalized_inner_product(&req).unwrap();
    assert_eq!(
        rows[0]["re"].as_f64().unwrap().to_bits(),
        reference.value.re.to_bits(),
        "re differs from the library result"
    );
    assert_eq!(
        rows[0]["im"].as_f64().unwrap().to_bits(),
        reference.value.im.to_bits(),
        "im differs from the library result"
    );
    assert_eq!(
        rows[0]["nodes"].as_u64().unwrap() as usize,
        reference.nodes_used
    );
}

#[test]
fn json_reparse_reproduces_csv_values_exactly() {
    // the same invocation, both formats: every float survives the text trip
    let args = [
        "spectrum",
        "--f",
        "12,5",
        "--curve",
        "tilted:0.7",
        "--nu",
        "3,5,7",
    ];
    let csv = eigencurve(
        &args
            .iter()
            .chain(&["--format", "csv"])
            .copied()
            .collect::<Vec<_>>(),
    );
    let json = eigencurve(
        &args
            .iter()
            .chain(&["--format", "json"])
            .copied()
            .collect::<Vec<_>>(),
    );
    assert!(csv.status.success());
    let csv_text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let re_at = header.iter().position(|c| *c == "re").unwrap();
    let im_at = header.iter().position(|c| *c == "im").unwrap();
    let rows = json_rows(&json);
    for (line, row) in lines.zip(rows) {
        // the f column is quoted but holds no floats; split is safe here
        // because float cells never contain commas
        let cells: Vec<&str> = line.split(',').collect();
        // quoted "l,m" label adds one split; indices past it shift by one
        let shift = cells.len() - header.len();
        let re: f64 = cells[re_at + shift].parse().unwrap();
        let im: f64 = cells[im_at + shift].parse().unwrap();
        assert_eq!(re.to_bits(), row["re"].as_f64().unwrap().to_bits());
        assert_eq!(im.to_bits(), row["im"].as_f64().unwrap().to_bits());
    }
}

#[test]
fn experiment_e6_passes_and_reports() {
    let out = eigencurve(&["experiment", "E6", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["experiment"], "E6");
    assert!(v["rows"].as_array().unwrap().len() >= 4);
    assert!(v["fit"].is_null());
}

#[test]
fn experiment_e1_full_grid_lands_in_band() {
    let out = eigencurve(&[
        "experiment",
        "E1",
        "--lmin",
        "64",
        "--lmax",
        "2048",
        "--c",
        "0.5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let exponent = v["fit"]["exponent"].as_f64().unwrap();
    assert!((0.20..=0.30).contains(&exponent), "exponent {exponent}");
    assert_eq!(v["pass"], Value::Bool(true));
}

#[test]
fn experiment_e4_default_decays_fast_enough() {
    let out = eigencurve(&[
        "experiment",
        "E4",
        "--lmin",
        "64",
        "--lmax",
        "1024",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    if let Some(exponent) = v["fit"]["exponent"].as_f64() {
        assert!(exponent <= -4.0, "exponent {exponent}");
    }
}

#[test]
fn experiment_writes_csv_file_atomically() {
    let dir = std::env::temp_dir().join(format!("eigencurve-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("e6.csv");
    let out = eigencurve(&["experiment", "E6", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("schema,experiment,series,degree"));
    assert_eq!(text.lines().count(), 6); // header + 5 rows
    assert!(!text.contains('\r'));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn experiment_outside_band_exits_1() {
    // a window too narrow for the decay budget: neither the exponent bound
    // nor the small-tail criterion can hold
    let out = eigencurve(&[
        "experiment",
        "E4",
        "--lmin",
        "64",
        "--lmax",
        "256",
        "--window",
        "0,0.05",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    // unknown flag (clap), bad curve, non-coprime geodesic, missing --f
    for args in [
        vec!["inner-product", "--f", "2,1", "--definitely-not-a-flag"],
        vec!["period", "--f", "2,1", "--curve", "spiral:3", "--nu", "0"],
        vec![
            "period",
            "--surface",
            "torus",
            "--modes",
            "2,4",
            "--curve",
            "geodesic:2,4",
            "--nu",
            "0",
        ],
        vec!["inner-product", "--curve", "equator"],
        vec!["sharpness", "--f", "7,4"],
        vec!["experiment", "E9"],
    ] {
        let out = eigencurve(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn kernel_probe_rejects_inadmissible_target_as_usage() {
    let out = eigencurve(&[
        "kernel-probe",
        "--lambda",
        "64",
        "--nu",
        "32",
        "--target",
        "0.1,0.0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sharpness_row_is_self_consistent() {
    let out = eigencurve(&["sharpness", "--f", "60,30", "--format", "json"]);
    let rows = json_rows(&out);
    let telescoping = rows[0]["telescoping"].as_f64().unwrap();
    let log_form = rows[0]["telescoping_log_form"].as_f64().unwrap();
    assert!((telescoping - log_form).abs() / telescoping < 1e-12);
    let ratio = rows[0]["surrogate_ratio"].as_f64().unwrap();
    assert!((1.0..=1.5).contains(&ratio));
}
