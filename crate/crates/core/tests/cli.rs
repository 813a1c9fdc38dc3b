use colored_homology::knotio::{run_command, Report};

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("chromo").chain(args.iter().copied()))
}

#[test]
fn verify_trefoil_passes() {
    let (code, out) = run(&["--trunc", "12", "verify", "colors: 1 1 ; word: 1 1 1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn non_closable_braid_is_a_usage_error() {
    let (code, out) = run(&["homology", "colors: 2 1 ; word: 1"]);
    assert_eq!(code, 2);
    assert!(out.contains("[2, 1]") && out.contains("[1, 2]"), "{out}");
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(run(&["homology"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["homology", "colors: 1 ; word: 3"]).0, 2);
}

#[test]
fn json_report_round_trips() {
    let (code, out) = run(&["--trunc", "8", "--format", "json", "homology", "colors: 1 1 ; word: 1 1"]);
    assert_eq!(code, 0, "{out}");
    let r: Report = serde_json::from_str(&out).unwrap();
    assert_eq!(r.truncation, 8);
    assert_eq!(r.braid, "colors: 1 1 ; word: 1 1");
    assert!(r.series.iter().all(|c| c.dim > 0 && c.q <= 8));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for key in ["braid", "truncation", "series", "euler", "calibration"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = std::env::temp_dir().join(format!("chromo-cli-cache-{}", std::process::id()));
    let dir_s = dir.to_str().unwrap();
    let args = ["--trunc", "8", "--cache", dir_s, "--format", "json", "homology", "colors: 2 ; word:"];
    let cold = run(&args);
    let braid = ["--trunc", "8", "--cache", dir_s, "--format", "json", "homology", "colors: 1 1 ; word: 1 -1"];
    let first = run(&braid);
    assert!(std::fs::read_dir(&dir).unwrap().count() > 0);
    let second = run(&braid);
    assert_eq!(cold.0, 0);
    assert_eq!(first, second);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn polynomial_of_unknot() {
    let (code, out) = run(&["polynomial", "colors: 1 ; word:"]);
    assert_eq!(code, 0);
    assert!(out.contains("trace: 1"), "{out}");
}
