use std::fs;
use std::process::Command;

fn bincs(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bincs")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn help_lists_every_subcommand() {
    let (code, out, _) = bincs(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["construct", "analyze", "bounds", "recover", "phase", "report", "timing"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn usage_and_runtime_errors_have_distinct_codes() {
    assert_eq!(bincs(&["bounds", "--n", "900"]).0, 1);
    assert_eq!(bincs(&["frobnicate"]).0, 1);
    let (code, _, err) = bincs(&["recover", "--matrix", "/missing.mtx", "--y", "/missing.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("/missing.mtx"));
    let (code, _, err) = bincs(&["bounds", "--n", "900", "--k", "5", "--delta", "1.5"]);
    assert_eq!(code, 1);
    assert!(err.contains("--delta"));
}

#[test]
fn construct_analyze_recover_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mtx = dir.path().join("h.mtx");
    let (code, _, err) = bincs(&["construct", "--family", "array", "--q", "7", "--l", "4", "--out", mtx.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("# family=array"));

    let (code, out, _) = bincs(&["--quiet", "analyze", mtx.to_str().unwrap(), "--csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("girth") && out.contains("c_prime"));
    assert!(out.contains("28,49,6,4,4,4,7,7,7,true,true,1,0.25,25,"));

    // x = e_3 - e_20, so y holds the two columns' difference.
    let h = binary_cs::matrices::construct_array_matrix(7, 4).unwrap();
    let mut x = vec![0.0; 49];
    x[3] = 1.0;
    x[20] = -1.0;
    let y = h.matvec(&x);
    let (ypath, xpath, out_path) = (dir.path().join("y.txt"), dir.path().join("x.txt"), dir.path().join("xhat.txt"));
    binary_cs::matrices::write_vector(&ypath, &y).unwrap();
    binary_cs::matrices::write_vector(&xpath, &x).unwrap();
    let (code, out, err) = bincs(&[
        "--quiet",
        "recover",
        "--matrix",
        mtx.to_str().unwrap(),
        "--y",
        ypath.to_str().unwrap(),
        "--truth",
        xpath.to_str().unwrap(),
        "--oracle",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("status=converged") && out.contains("success=true"), "{out}");
    let xhat = binary_cs::matrices::read_vector(&out_path).unwrap();
    assert!(xhat.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-8));
}

#[test]
fn bounds_csv_parses_back_through_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bounds.csv");
    let (code, _, _) = bincs(&["--quiet", "bounds", "--n", "900", "--k", "5,10,15,20", "--out", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _, err) = bincs(&["--quiet", "report", "--results", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let table = fs::read_to_string(dir.path().join("table_v.csv")).unwrap();
    assert!(table.contains("900,5,11,121,31,186,"));
    assert!(table.contains("900,20,41,1681,31,651,"));
}

#[test]
fn phase_subcommand_writes_its_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "family = array\nn = 49\nm = 21\nk_grid = coarse\ntrials = 4\n").unwrap();
    let out = dir.path().join("out");
    let (code, stdout, err) = bincs(&["phase", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("seed = 3"), "{err}");
    assert!(stdout.contains("cells written"));
    for name in ["cells.csv", "summary.csv", "widths.csv"] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let (code, _, _) = bincs(&["--quiet", "phase", "--config", "/missing.cfg", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn report_without_inputs_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = bincs(&["--quiet", "report", "--results", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("missing inputs"));
}
