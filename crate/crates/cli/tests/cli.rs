use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qblue_core::estimators::code_probabilities;
use qblue_core::montecarlo::simulate_sine_record;
use qblue_core::{QuantizerSpec, SineDesign};

fn qblue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qblue"))
        .args(args)
        .env_remove("QBLUE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_samples(path: &Path, codes: &[usize]) {
    let mut text = String::from("index,code\n");
    for (i, c) in codes.iter().enumerate() {
        text.push_str(&format!("{i},{c}\n"));
    }
    fs::write(path, text).unwrap();
}

/// Parsed `parameter,estimate,std_dev,fallback,lambda` rows.
fn report(o: &Output) -> Vec<(String, f64, f64, bool, usize)> {
    assert!(o.status.success(), "{}", stderr(o));
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].to_string(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
                f[4].parse().unwrap(),
            )
        })
        .collect()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let out = dir.join(name);
    let mut args = vec![
        "gen-quantizer",
        "--bits",
        "10",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = qblue(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

#[test]
fn gen_quantizer_writes_even_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let o = qblue(&[
        "gen-quantizer",
        "--bits",
        "10",
        "--inl-half-width",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "levels=1024 step=0.001953125");
    let text = fs::read_to_string(&out).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(text.lines().next().unwrap(), "index,transition_volts");
    assert_eq!(values.len(), 1023);
    for w in values.windows(2) {
        assert!((w[1] - w[0] - 2.0 / 1024.0).abs() < 1e-15);
    }
}

#[test]
fn gen_quantizer_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(
        dir.path(),
        "a.csv",
        &["--inl-half-width", "0.5", "--seed", "7"],
    );
    let b = gen(
        dir.path(),
        "b.csv",
        &["--inl-half-width", "0.5", "--seed", "7"],
    );
    let c = gen(
        dir.path(),
        "c.csv",
        &["--inl-half-width", "0.5", "--seed", "8"],
    );
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn usage_errors_are_single_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    for args in [
        vec![
            "gen-quantizer",
            "--bits",
            "0",
            "--out",
            out.to_str().unwrap(),
        ],
        vec![
            "sweep",
            "--model",
            "dc1",
            "--sigma-norm",
            "0.2",
            "--theta-grid",
            "0:0.1:0.05",
            "--n",
            "10",
            "--records",
            "0",
        ],
        vec![
            "sweep",
            "--model",
            "dc4",
            "--sigma-norm",
            "0.2",
            "--theta-grid",
            "0",
            "--n",
            "10",
        ],
        vec![
            "crlb",
            "--sigma-norm",
            "0.2",
            "--n",
            "300",
            "--theta-grid",
            "0:-1:0.1",
        ],
        vec!["frobnicate"],
    ] {
        let o = qblue(&args);
        assert!(!o.status.success(), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn estimate_dc1_single_bin_falls_back() {
    let dir = tempfile::tempdir().unwrap();
    let q = gen(dir.path(), "q.csv", &[]);
    let samples = dir.path().join("s.csv");
    write_samples(&samples, &[515; 200]);
    let o = qblue(&[
        "estimate",
        "--model",
        "dc1",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
        "--sigma",
        "0.0004",
    ]);
    let rows = report(&o);
    assert_eq!(rows.len(), 1);
    let (name, est, _, fallback, lambda) = &rows[0];
    assert_eq!(name, "theta1");
    assert!(*fallback);
    assert_eq!(*lambda, 0);
    // code 515 sits four steps above the zero level (code 511)
    assert!((est - 4.0 * 2.0 / 1024.0).abs() < 1e-12);
}

#[test]
fn estimate_dc1_recovers_injected_level() {
    // counts proportional to exact probabilities of θ = 0.3Δ, σ = 0.25Δ;
    // with 10⁷ samples rounding moves θ̂ by far less than 1e-6
    let dir = tempfile::tempdir().unwrap();
    let q = gen(dir.path(), "q.csv", &[]);
    let spec = QuantizerSpec::uniform(10, -1.0, 1.0).unwrap();
    let d = spec.step();
    let (theta, sigma) = (0.3 * d, 0.25 * d);
    let p = code_probabilities(theta, sigma, &spec);
    let total = 10_000_000.0;
    let mut codes = Vec::new();
    for (k, &pk) in p.as_slice().iter().enumerate() {
        codes.extend(std::iter::repeat_n(k, (pk * total).round() as usize));
    }
    let samples = dir.path().join("s.csv");
    write_samples(&samples, &codes);
    let o = qblue(&[
        "estimate",
        "--model",
        "dc1",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
        "--sigma",
        &sigma.to_string(),
    ]);
    let rows = report(&o);
    assert!(!rows[0].3);
    assert!((rows[0].1 - theta).abs() < 1e-6, "{}", rows[0].1);

    let o = qblue(&[
        "estimate",
        "--model",
        "dc2",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
    ]);
    let rows = report(&o);
    assert_eq!(rows.len(), 2);
    assert!((rows[0].1 - theta).abs() < 1e-6);
    assert!((rows[1].1 - sigma).abs() < 1e-6);
}

#[test]
fn estimate_sine3_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let q = gen(
        dir.path(),
        "q.csv",
        &["--inl-half-width", "0.5", "--seed", "3"],
    );
    let spec = QuantizerSpec::load_transitions(&q, 2.0 / 1024.0, Some(1024)).unwrap();
    let d = spec.step();
    let design = SineDesign::canonical(20, 50, 0.3 * d).unwrap();
    let theta = [3.7 * d, 11.4 * d, 23.1 * d];
    let codes = simulate_sine_record(&design, &theta, &spec, 99);
    let samples = dir.path().join("s.csv");
    write_samples(&samples, &codes);
    let sigma = (0.3 * d).to_string();
    let o = qblue(&[
        "estimate",
        "--model",
        "sine3",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
        "--sigma",
        &sigma,
        "--samples-per-period",
        "20",
        "--periods",
        "50",
    ]);
    let rows = report(&o);
    assert_eq!(
        rows.iter().map(|r| r.0.as_str()).collect::<Vec<_>>(),
        ["theta0", "theta1", "theta2"]
    );
    for (r, t) in rows.iter().zip(theta) {
        assert!(r.2.is_finite() && r.2 > 0.0);
        assert!((r.1 - t).abs() < 6.0 * r.2, "{r:?} vs {t}");
        assert!(!r.3);
    }
}

#[test]
fn estimate_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let q = gen(dir.path(), "q.csv", &[]);
    let samples = dir.path().join("s.csv");
    write_samples(&samples, &[3000]);
    let o = qblue(&[
        "estimate",
        "--model",
        "dc2",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("outside [0, 1023]"));

    write_samples(&samples, &[500, 501]);
    let o = qblue(&[
        "estimate",
        "--model",
        "dc1",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--sigma"));

    let o = qblue(&[
        "estimate",
        "--model",
        "sine3",
        "--levels",
        q.to_str().unwrap(),
        "--samples",
        samples.to_str().unwrap(),
        "--sigma",
        "0.001",
        "--samples-per-period",
        "20",
        "--periods",
        "50",
    ]);
    assert!(!o.status.success());
    assert_eq!(stderr(&o).trim_end().lines().count(), 1);
}

#[test]
fn sweep_writes_schema_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let args = |out: &str| {
        vec![
            "sweep".to_string(),
            "--model".into(),
            "dc2".into(),
            "--sigma-norm".into(),
            "0.34".into(),
            "--theta-grid".into(),
            "-0.2:0.2:0.1".into(),
            "--n".into(),
            "100,200".into(),
            "--records".into(),
            "40".into(),
            "--seed".into(),
            "5".into(),
            "--inl-half-width".into(),
            "0.3".into(),
            "--out".into(),
            out.to_string(),
        ]
    };
    let run = |out: &Path, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_qblue"))
            .args(args(out.to_str().unwrap()))
            .env("QBLUE_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read_to_string(out).unwrap()
    };
    let one = run(&a, "1");
    let four = run(&dir.path().join("b.csv"), "4");
    assert_eq!(one, four);
    let mut lines = one.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta_over_delta,n,estimator,mean_error,std_error,mse,fallback_rate"
    );
    // 5 grid points × 2 lengths × (quantile, quantile_sigma, mean)
    assert_eq!(lines.count(), 30);

    let o = Command::new(env!("CARGO_BIN_EXE_qblue"))
        .args(args(a.to_str().unwrap()))
        .env("QBLUE_THREADS", "0")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).contains("QBLUE_THREADS"));
}

#[test]
fn sweep_sine3_rows() {
    let o = qblue(&[
        "sweep",
        "--model",
        "sine3",
        "--sigma-norm",
        "0.3",
        "--theta-grid",
        "3.7,11.4,23.1",
        "--samples-per-period",
        "20",
        "--periods",
        "10",
        "--records",
        "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let labels: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(
        labels,
        [
            "quantile_theta0",
            "quantile_theta1",
            "quantile_theta2",
            "lse_theta0",
            "lse_theta1",
            "lse_theta2"
        ]
    );
}

#[test]
fn crlb_table_properties() {
    let run = |n: &str| {
        let o = qblue(&[
            "crlb",
            "--sigma-norm",
            "0.2",
            "--n",
            n,
            "--theta-grid",
            "-0.45:0.45:0.05",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = stdout(&o);
        assert_eq!(
            text.lines().next().unwrap(),
            "theta_over_delta,sqrt_crlb_over_delta"
        );
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let a = run("300");
    let b = run("600");
    assert_eq!(a.len(), 19);
    for i in 0..a.len() {
        assert!((a[i] - a[a.len() - 1 - i]).abs() < 1e-10 * a[i]);
        assert!((a[i] / b[i] - 2f64.sqrt()).abs() < 1e-9);
    }
}
