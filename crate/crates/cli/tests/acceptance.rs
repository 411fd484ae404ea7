//! Acceptance criterion 8: CLI reproducibility and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dispersal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispersal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn criterion_8_cli_reproducibility_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut ok = true;

    // run the documented pipeline twice and compare every produced file
    let run_pipeline = |root: &Path| {
        let toy = root.join("toy");
        let clouds = root.join("clouds");
        dispersal(&[
            "gen", "toy2d", "--std", "4", "--seed", "21", "--output",
            toy.to_str().unwrap(),
        ]);
        dispersal(&[
            "gen", "morph", "--shapes", "6", "--points", "40", "--seed", "21",
            "--alpha", "90", "--output", clouds.to_str().unwrap(),
        ]);
        dispersal(&[
            "distmat", "--input", toy.join("points.csv").to_str().unwrap(),
            "--distance", "sqeuclidean", "--format", "csv", "--output",
            root.join("toy.csv").to_str().unwrap(),
        ]);
        dispersal(&[
            "distmat", "--input", clouds.to_str().unwrap(), "--distance",
            "chamfer", "--format", "binary", "--output",
            root.join("clouds.dsm").to_str().unwrap(),
        ]);
        dispersal(&[
            "sweep", "--matrix", root.join("toy.csv").to_str().unwrap(),
            "--ks", "2:60:2", "--seed", "21", "--output",
            root.join("sweep").to_str().unwrap(),
        ]);
        dispersal(&[
            "ds", "--matrix", root.join("toy.csv").to_str().unwrap(),
            "--auto", "--ks", "2:60:2", "--seed", "21", "--output",
            root.join("report.json").to_str().unwrap(),
        ]);
        dispersal(&[
            "ds", "--matrix", root.join("toy.csv").to_str().unwrap(),
            "--method", "ap", "--q", "4", "--seed", "21", "--output",
            root.join("ap.json").to_str().unwrap(),
        ]);
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run_pipeline(&a);
    run_pipeline(&b);
    for rel in [
        "toy/points.csv",
        "toy/manifest.json",
        "clouds/index.txt",
        "clouds/manifest.json",
        "clouds/cloud_0.txt",
        "clouds/cloud_5.txt",
        "toy.csv",
        "clouds.dsm",
        "sweep/curve.csv",
        "sweep/curve.json",
        "sweep/elbow.json",
        "report.json",
        "ap.json",
    ] {
        if read(&a.join(rel)) != read(&b.join(rel)) {
            eprintln!("  rerun differs: {rel}");
            ok = false;
        }
    }

    // exit-code contract: 2 usage, 3 data, 4 no elbow, 5 degenerate
    let expect_code = |out: &Output, want: i32, what: &str| -> bool {
        let got = out.status.code().unwrap_or(-1);
        if got != want {
            eprintln!("  {what}: exit {got}, wanted {want}");
            return false;
        }
        true
    };
    ok &= expect_code(
        &dispersal(&[
            "sweep", "--matrix", a.join("toy.csv").to_str().unwrap(), "--ks",
            "500:500:1", "--output", dir.path().join("x").to_str().unwrap(),
        ]),
        2,
        "invalid k",
    );
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "0,1\n1,oops\n").unwrap();
    ok &= expect_code(
        &dispersal(&[
            "ds", "--matrix", bad.to_str().unwrap(), "--k", "1", "--output",
            dir.path().join("y").to_str().unwrap(),
        ]),
        3,
        "malformed matrix",
    );
    let zeros = dir.path().join("zeros.csv");
    fs::write(&zeros, "0,0,0,0\n0,0,0,0\n0,0,0,0\n0,0,0,0\n").unwrap();
    ok &= expect_code(
        &dispersal(&[
            "sweep", "--matrix", zeros.to_str().unwrap(), "--ks", "1:3:1",
            "--output", dir.path().join("z").to_str().unwrap(),
        ]),
        4,
        "no elbow",
    );
    let equal = dir.path().join("equal.csv");
    fs::write(&equal, "0,1,1\n1,0,1\n1,1,0\n").unwrap();
    ok &= expect_code(
        &dispersal(&[
            "ds", "--matrix", equal.to_str().unwrap(), "--method", "ap",
            "--output", dir.path().join("w").to_str().unwrap(),
        ]),
        5,
        "degenerate matrix",
    );

    println!(
        "ACCEPTANCE 8 (CLI reproducibility, exit codes): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}
