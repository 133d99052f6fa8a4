use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn frackit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frackit")).args(args).output().expect("spawn frackit")
}

fn frackit_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frackit"))
        .args(args)
        .env("FRACKIT_THREADS", threads)
        .output()
        .expect("spawn frackit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Rows of a CSV as string cells, header first.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DECAY: &str = "\
# classical decay
[problem]
method = theorem1
terms = [(1, 1)]
forcing = unit

[grid]
t_max = 2
points = 256
";

#[test]
fn reaction_decay_matches_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "decay.cfg", DECAY);
    for method in ["theorem1", "volterra"] {
        let out = frackit(&["reaction", "--config", &cfg, "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let table = rows(&stdout(&out));
        assert_eq!(table[0], ["t", "N", "err_est", "flags"]);
        let at_one = table.iter().find(|r| r[0] == "1.0").expect("t = 1 row");
        let n: f64 = at_one[1].parse().unwrap();
        assert!((n - (-1.0f64).exp()).abs() < 1e-5, "{method}: {n}");
        assert!(stderr(&out).starts_with(&format!("reaction: method={method}")));
    }
}

#[test]
fn reaction_closed_form_methods() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cascade.cfg",
        "[problem]\nmethod = cascade\nnu = 1\nc = 1\nn = 1\nn0 = 2\n[grid]\nt_max = 1\npoints = 128\nspacing = uniform\n",
    );
    let out = frackit(&["reaction", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let last = rows(&stdout(&out)).pop().unwrap();
    assert_eq!(last[0], "1.0");
    assert!((last[1].parse::<f64>().unwrap() - 2.0 * (-1.0f64).exp()).abs() < 1e-5);

    let out = frackit(&[
        "reaction", "--config", &cfg, "-s", "problem.method=geometric", "-s", "problem.a=1", "-s", "problem.c=",
    ]);
    // problem.c is still defined (empty), and geometric does not take it
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("problem.c"), "{}", stderr(&out));
}

#[test]
fn ml_pointwise_value() {
    let out = frackit(&["ml", "--beta", "0.5", "--gamma", "1", "--delta", "2", "--z", "-1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = rows(&stdout(&out));
    assert_eq!(table[0], ["z", "value", "err_est", "flags"]);
    let v: f64 = table[1][1].parse().unwrap();
    let err: f64 = table[1][2].parse().unwrap();
    // extended-precision series
    assert!((v - 0.154_371_561_371_908_44).abs() < 1e-14, "{v}");
    assert!((0.0..1e-13).contains(&err));
}

#[test]
fn csv_numbers_round_trip() {
    let out = frackit(&["levy", "--rho", "0.7", "--t", "0.1, 0.5, 2, 30"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = rows(&stdout(&out));
    assert_eq!(table[0], ["t", "phi", "err_est"]);
    for row in &table[1..] {
        for cell in row {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v:?}"), *cell);
        }
    }
    // integral representation, extended precision
    let phi: f64 = table[2][1].parse().unwrap();
    assert!((phi / 0.965_119_118_469_361_76 - 1.0).abs() < 1e-10);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "diff.cfg",
        "[diffusion]\ndim = 1\nalpha = 0.5\nx_min = -6\nx_max = 6\nx_points = 61\nt = 0.5, 1, 2\n",
    );
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4", "0"].iter().enumerate() {
        let path = dir.path().join(format!("out{i}.csv"));
        let out = frackit_env(&["diffusion", "--config", &cfg, "--output", path.to_str().unwrap()], threads);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stdout(&out).starts_with("diffusion: dim=1"));
        outputs.push(fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 1 + 61 * 3);
    assert!(text.starts_with("x,t,N,err_est,flags\n"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "levy.cfg", "[levy]\nrho = 0.3\nt = 1\n[output]\npath = ignored.csv\n");
    let target = dir.path().join("flag.csv");
    let out = frackit(&["levy", "--config", &cfg, "--rho", "0.5", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = rows(&fs::read_to_string(&target).unwrap());
    let phi: f64 = table[1][1].parse().unwrap();
    assert!((phi - (-0.25f64).exp() / (2.0 * std::f64::consts::PI.sqrt())).abs() < 1e-15);
    assert!(!Path::new("ignored.csv").exists());
}

#[test]
fn cancellation_is_flagged_not_fatal() {
    let out = frackit(&["diffusion", "--dim", "3", "--alpha", "1", "--x", "0.5, 8", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = rows(&stdout(&out));
    assert_eq!(table[1][4], "");
    assert_eq!(table[2][4], "cancellation");
    let out = frackit(&["diffusion", "--dim", "2", "--alpha", "0.5", "--x", "0.1", "--t", "1"]);
    assert_eq!(rows(&stdout(&out))[1][3..], ["".to_string(), "asymptotic".to_string()]);
}

#[test]
fn invalid_inputs_exit_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(Vec<String>, &str)> = vec![
        (vec!["levy".into(), "--rho".into(), "1.5".into(), "--t".into(), "1".into()], "rho"),
        (vec!["levy".into(), "--rho".into(), "0.5".into(), "--t".into(), "1, -2".into()], "`t`"),
        (vec!["diffusion".into(), "--dim".into(), "3".into(), "--alpha".into(), "0.5".into(), "--x".into(), "0".into(), "--t".into(), "1".into()], "diffusion.x"),
        (vec!["diffusion".into(), "--dim".into(), "4".into(), "--alpha".into(), "0.5".into(), "--x".into(), "1".into(), "--t".into(), "1".into()], "diffusion.dim"),
        (vec!["diffusion".into(), "--alpha".into(), "1.5".into(), "--x".into(), "1".into(), "--t".into(), "1".into()], "alpha"),
        (vec!["diffusion".into(), "--alpha".into(), "0.5".into(), "--t".into(), "1".into()], "diffusion.x"),
        (vec!["ml".into(), "--beta".into(), "0.5".into(), "--gamma".into(), "one".into(), "--z".into(), "1".into()], "ml.gamma"),
        (vec!["reaction".into(), "--terms".into(), "(1, 1)".into(), "--t-max".into(), "1".into(), "--points".into(), "16".into(), "--forcing".into(), "power".into(), "-s".into(), "forcing.rho=0.5".into()], "forcing"),
        (vec!["reaction".into(), "--terms".into(), "(1, -1)".into(), "--t-max".into(), "1".into(), "--points".into(), "16".into()], "terms"),
        (vec!["reaction".into(), "--terms".into(), "(1, 1".into(), "--t-max".into(), "1".into(), "--points".into(), "16".into()], "problem.terms"),
        (vec!["reaction".into(), "--terms".into(), "(1, 1)".into(), "--t-max".into(), "1".into(), "--points".into(), "16".into(), "--method".into(), "euler".into()], "problem.method"),
        (vec!["reaction".into(), "--terms".into(), "(1, 1)".into(), "--t-max".into(), "1".into()], "grid.points"),
        (vec!["reaction".into(), "--config".into(), write(dir.path(), "bad.cfg", "[grid\n")], "line 1"),
        (vec!["reaction".into(), "--config".into(), write(dir.path(), "typo.cfg", "[grid]\ntmax = 1\n")], "grid.tmax"),
        (vec!["reaction".into(), "--config".into(), dir.path().join("missing.cfg").to_str().unwrap().into()], "missing.cfg"),
        (vec!["levy".into(), "--rho".into(), "0.5".into(), "--t".into(), "1".into(), "-s".into(), "rho=1".into()], "--set"),
        (vec!["verify".into(), "--only".into(), "11".into()], "criterion 11"),
        (vec!["nonsense".into()], "nonsense"),
    ];
    for (args, needle) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = frackit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).contains(needle), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty(), "{args:?} wrote output");
    }
}

#[test]
fn invalid_thread_count_exits_2() {
    let out = frackit_env(&["levy", "--rho", "0.5", "--t", "1"], "many");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("FRACKIT_THREADS"));
}

#[test]
fn numerical_failures_exit_3() {
    let out = frackit(&["diffusion", "--dim", "3", "--alpha", "1", "--x", "40", "--t", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("series did not converge"));
    // a dominant slow term: the layered series diverges
    let out = frackit(&["reaction", "--terms", "(0.1, 1), (20, 0.3)", "--t-max", "2", "--points", "64"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("diverged"));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_prints_a_table() {
    let out = frackit(&["verify", "--only", "5,9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("criterion"));
    assert!(text.contains(" 5  Prabhakar transform pair"));
    assert!(text.contains(" 9  two-dimensional logarithmic law"));
    assert!(text.trim_end().ends_with("verify: 2/2 criteria passed"));
}
