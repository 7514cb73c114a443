use std::path::Path;
use std::process::{Command, Output};

use fzspec_cli::output::read_points;
use fzspec_core::C64;

fn fzspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fzspec")).args(args).output().expect("failed to start fzspec")
}

fn ok(args: &[&str]) -> String {
    let out = fzspec(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn points(path: &Path) -> Vec<C64> {
    read_points(path).unwrap()
}

fn sorted_bits(v: &[C64]) -> Vec<(u64, u64)> {
    let mut b: Vec<_> = v.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect();
    b.sort_unstable();
    b
}

#[test]
fn trivial_word_is_a_collinear_segment() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("plus");
    ok(&["spectrum", "word", "--word", "+", "--out", prefix.to_str().unwrap()]);
    let pts = points(&dir.path().join("plus.csv"));
    assert_eq!(pts.len(), 2048);
    assert!(pts.iter().all(|z| z.im.abs() < 1e-12 && z.re.abs() <= 2.0 + 1e-12));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("plus.json")).unwrap()).unwrap();
    assert_eq!(meta["theta_steps"], 2048);
    assert_eq!(meta["length"], 1);
}

#[test]
fn csv_round_trips_the_emitted_points() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("w");
    ok(&["spectrum", "word", "--word", "+++-", "--theta-steps", "256", "--out", prefix.to_str().unwrap()]);
    let text = std::fs::read_to_string(dir.path().join("w.csv")).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("re,im,theta,word,branch"));
    let direct: Vec<C64> = rows
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            C64::new(f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    let parsed = points(&dir.path().join("w.csv"));
    assert_eq!(sorted_bits(&direct), sorted_bits(&parsed));
    // The {+++-} curve lies on Re(z⁴ − 2z²) = 0.
    for z in &parsed {
        assert!((z.powi(4) - 2.0 * z * z).re.abs() < 1e-9);
    }
}

#[test]
fn identical_runs_give_identical_bytes() {
    for args in [
        &["spectrum", "random", "--model", "B", "--n", "199", "--seed", "11", "--realizations", "3"][..],
        &["spectrum", "word", "--word", "++-", "--theta-steps", "512", "--format", "svg"][..],
        &["escape-map", "--resolution", "16", "--samples", "200", "--burn-in", "50", "--seed", "5"][..],
    ] {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn model_a_is_symmetric_and_model_b_stays_in_the_disc() {
    let a = ok(&["spectrum", "random", "--model", "A", "--n", "999", "--seed", "7"]);
    let b = ok(&["spectrum", "random", "--model", "B", "--n", "999", "--seed", "7"]);
    let parse = |text: &str| -> Vec<C64> {
        text.lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                C64::new(f[0].parse().unwrap(), f[1].parse().unwrap())
            })
            .collect()
    };
    let (a, b) = (parse(&a), parse(&b));
    assert_eq!(a.len(), 1000);
    assert_eq!(b.len(), 1000);
    let near = |z: C64, set: &[C64]| set.iter().any(|q| (q - z).norm() < 1e-8);
    assert!(a.iter().all(|z| near(z.conj(), &a) && near(-z, &a)));
    assert!(a.iter().chain(&b).all(|z| z.norm() <= 2.0 + 1e-8));
}

#[test]
fn ensemble_concatenates_one_block_per_seed() {
    let text = ok(&["spectrum", "random", "--model", "A", "--n", "49", "--seed", "3", "--realizations", "4"]);
    let seeds: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(seeds.len(), 200);
    for (k, block) in seeds.chunks(50).enumerate() {
        assert!(block.iter().all(|s| *s == (3 + k).to_string()));
    }
}

#[test]
fn escape_map_smoke_contract() {
    let text = ok(&["escape-map", "--resolution", "128", "--burn-in", "20", "--samples", "30"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,gamma,escape_fraction"));
    assert_eq!(lines.count(), 128 * 128);
}

#[test]
fn escape_map_outside_the_disc_is_cold() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cold");
    ok(&["escape-map", "--resolution", "12", "--bounds", "2.1,3,2.1,3", "--samples", "500", "--out", prefix.to_str().unwrap()]);
    let text = std::fs::read_to_string(dir.path().join("cold.csv")).unwrap();
    for line in text.lines().skip(1) {
        assert_eq!(line.rsplit(',').next(), Some("0"), "{line}");
    }
    let svg = std::fs::read_to_string(dir.path().join("cold.svg")).unwrap();
    assert_eq!(svg.matches("<rect").count(), 1);
}

#[test]
fn clean_chain_escape_map_traces_the_real_band() {
    let text = ok(&[
        "escape-map", "--word", "+", "--resolution", "11", "--bounds", "-2.2,2.2,-0.2,0.2", "--y-max", "50", "--samples",
        "2000",
    ]);
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (re, im, esc) = (f[0], f[1], f[3]);
        if im.abs() < 1e-9 && re.abs() < 1.9 {
            assert_eq!(esc, 1.0, "{line}");
        }
        if im.abs() > 0.1 {
            assert_eq!(esc, 0.0, "{line}");
        }
    }
}

#[test]
fn overlay_draws_layers_and_accepts_empty_ones() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    ok(&["spectrum", "word", "--word", "++-", "--theta-steps", "128", "--out", &d("curve")]);
    ok(&["spectrum", "random", "--model", "A", "--n", "99", "--seed", "1", "--out", &d("cloud")]);
    std::fs::write(d("empty.csv"), "re,im\n").unwrap();
    let args = [
        "overlay", "--layer", &format!("cloud={}", d("cloud.csv")), "--layer", &format!("curve={}", d("curve.csv")),
        "--layer", &format!("poles={}", d("empty.csv")), "--svg", &d("fig.svg"),
    ];
    ok(&args);
    let svg = std::fs::read_to_string(d("fig.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 100 + 128 * 3 + 3); // markers plus legend
    assert!(svg.contains("empty (0 points)"));
    ok(&args);
    assert_eq!(std::fs::read_to_string(d("fig.svg")).unwrap(), svg);
}

#[test]
fn overlay_reports_malformed_rows_and_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "re,im\n0.5,0.5\n1.0,oops\n").unwrap();
    let out = fzspec(&["overlay", "--layer", &format!("cloud={}", bad.display())]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = fzspec(&["overlay", "--layer", "cloud=/nonexistent/points.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn overlay_clamps_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let far = dir.path().join("far.csv");
    std::fs::write(&far, "re,im\n0,0\n9,9\n").unwrap();
    let out = fzspec(&["overlay", "--layer", &format!("cloud={}", far.display())]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("1 points outside the viewport"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("clamped points: 1"));
}

#[test]
fn usage_errors_exit_2_and_name_the_token() {
    let out = fzspec(&["spectrum", "word", "--word", "++q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("\"q\""));

    let out = fzspec(&["spectrum", "word", "--word", "+", "--theta-steps", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fzspec(&["spectrum", "random", "--model", "B", "--word", "+-"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fzspec(&["spectrum", "random", "--model", "A", "--n", "5000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cap"));

    let out = fzspec(&["escape-map", "--resolution", "1025"]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(fzspec(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_supplies_defaults_that_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nmodel = A\nn = 19\nseed = 4\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = ok(&["spectrum", "random", "--config", c]);
    assert_eq!(from_file, ok(&["spectrum", "random", "--model", "A", "--n", "19", "--seed", "4"]));
    let overridden = ok(&["spectrum", "random", "--config", c, "--seed", "5"]);
    assert_eq!(overridden, ok(&["spectrum", "random", "--model", "A", "--n", "19", "--seed", "5"]));

    let out = fzspec(&["spectrum", "random", "--config", "/nonexistent.cfg"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn qpoly_reports_exact_polynomials() {
    let meta: serde_json::Value = serde_json::from_str(&ok(&["qpoly", "--word", "+++-", "--format", "json"])).unwrap();
    // Q = (z⁴ − 2z²)² + 4 for {+++-}.
    let q: Vec<f64> = meta["q"].as_array().unwrap().iter().map(|c| c[0].as_f64().unwrap()).collect();
    assert_eq!(q, vec![4.0, 0.0, 0.0, 0.0, 4.0, 0.0, -4.0, 0.0, 1.0]);
    assert_eq!(meta["closed_form_agrees"], true);
    assert_eq!(meta["endpoints"].as_array().unwrap().len(), 8);
}

#[test]
fn sentence_tags_points_with_their_word() {
    let text = ok(&["spectrum", "sentence", "--paragraph", "++--:100,+++-:100", "--theta-steps", "64"]);
    let words: std::collections::BTreeSet<&str> = text.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(words.into_iter().collect::<Vec<_>>(), vec!["+++-", "++--"]);
}

#[test]
fn word_enumeration_counts() {
    assert_eq!(ok(&["words", "enumerate", "--length", "5"]).lines().count(), 33);
    // Aperiodic binary necklaces of length 6 containing both letters.
    assert_eq!(ok(&["words", "enumerate", "--length", "6", "--necklaces"]).lines().count(), 1 + 9);
}
