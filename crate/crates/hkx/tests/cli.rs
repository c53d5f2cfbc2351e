use std::process::{Command, Output};

use harmonic_kernels::kernel_transform::{poisson_kernel_expansion, KernelExpansion};
use harmonic_kernels::reference_kernels::{eval_bergman_closed, ClosedKind, PointPair};
use harmonic_kernels::symbol_algebra::DomainSpec;

fn hkx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkx")).args(args).output().expect("run hkx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_json_round_trips_and_matches_library() {
    let o = hkx(&["expand", "poisson", "--n", "3", "--jet", "a1,a2,a3", "--grades", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = KernelExpansion::from_json(&stdout(&o)).unwrap();
    let direct = poisson_kernel_expansion(&DomainSpec::symbolic(3, 3).unwrap(), 3).unwrap();
    assert_eq!(parsed, direct);
    assert_eq!(parsed.to_json().unwrap().trim(), stdout(&o).trim());
}

#[test]
fn output_is_idempotent() {
    for args in [
        &["expand", "bergman", "--n", "3", "--grades", "2", "--format", "json"][..],
        &["closed-form", "--kind", "bergman-ball", "--x", "0.1,0.2", "--y", "-0.3,0.4"],
        &["oracle", "ball", "--lmax", "40", "--x", "0,0.3", "--y", "0.2,0"],
    ] {
        let (a, b) = (hkx(args), hkx(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn oracle_ball_example() {
    let o = hkx(&["oracle", "ball", "--lmax", "60", "--x", "0,0,0.5", "--y", "0,0,0.5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let closed =
        eval_bergman_closed(ClosedKind::unit_ball(), &PointPair::new(vec![0.0, 0.0, 0.5], vec![0.0, 0.0, 0.5]).unwrap())
            .unwrap();
    let spectral = v["spectral"].as_f64().unwrap();
    assert!(((spectral - closed) / closed).abs() <= 1e-6);
}

#[test]
fn oracle_ball_mismatch_exits_one() {
    // three terms of the series cannot reach 1e-6 at |x||y| = 0.64
    let o = hkx(&["oracle", "ball", "--lmax", "2", "--x", "0.8,0", "--y", "0.8,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_paper_passes() {
    let o = hkx(&["verify", "paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["expand", "poisson", "--jet", "0.5"][..],
        &["expand", "poisson", "--n", "1"],
        &["expand", "poisson", "--bogus"],
        &["closed-form", "--kind", "poisson-ball", "--x", "0,2", "--y", "0,1"],
        &["closed-form", "--kind", "weighted-halfspace", "--alpha", "-2", "--x", "0,1", "--y", "0,1"],
        &["oracle", "fd", "--n", "4"],
        &["oracle", "ball", "--x", "0,0", "--y", "0"],
    ] {
        let o = hkx(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_hkx")).args(["verify", "paper"]).env("HKX_THREADS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn closed_form_csv_columns() {
    let o = hkx(&["closed-form", "--kind", "weighted-halfspace", "--alpha", "1", "--x", "1,0,1", "--y", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("kind,n,alpha,x1,x2,x3,y1,y2,y3,value"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..3], &["weighted-halfspace", "3", "1"]);
    assert!(row[9].parse::<f64>().unwrap().is_finite());
}

#[test]
fn fit_reads_csv_and_reports_json() {
    let dir = std::env::temp_dir().join(format!("hkx-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("samples.csv");
    let mut csv = String::from("d,value\n");
    for k in 0..30 {
        let d = 0.01 * 1.1f64.powi(k);
        csv.push_str(&format!("{d},{}\n", 2.0 / d + 0.5 - 3.0 * d * d.ln()));
    }
    std::fs::write(&path, csv).unwrap();
    let o = hkx(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--basis",
        "d^-1,1,d log d",
        "--predicted",
        "2,1/2,-3",
    ]);
    assert_eq!(o.status.code(), Some(2), "rationals are not accepted as numeric predictions");
    let o = hkx(&["fit", "--input", path.to_str().unwrap(), "--basis", "d^-1,1,d log d", "--predicted", "2,-,-3", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["basis", "coefficients", "predicted", "relative_error", "condition_number"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!((v["coefficients"][1].as_f64().unwrap() - 0.5).abs() < 1e-8);
    std::fs::remove_dir_all(dir).ok();
}
