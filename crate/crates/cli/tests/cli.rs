use std::path::Path;
use std::process::{Command, Output};

use manifold_agg::dynamics::parse_jsonl;
use manifold_agg::{EmpiricalMeasure, Manifold, ManifoldPoint};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_manifold-agg"));
    c.env_remove("MANIFOLD_AGG_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Value of `key` in a `key value` table printed by `constants`.
fn table_value(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no `{key}` in {out}"))
}

#[test]
fn printed_defaults_are_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--print-defaults"]);
    assert!(o.status.success());
    let text = stdout(&o).replace("t_final = 1.0", "t_final = 0.1");
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn single_particle_trajectory_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "manifold = \"hyperbolic\"\n[initial]\npoints = [[0.3, -0.2, 1.0630145812734648]]\n[flow]\ndt = 0.01\nt_final = 0.5\n",
    );
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines = parse_jsonl(&std::fs::read_to_string(out.join("trajectory.jsonl")).unwrap()).unwrap();
    assert_eq!(lines.len(), 51);
    assert!(lines.iter().all(|l| l.points == lines[0].points));
    let csv = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,particle_id,x0,x1,x2,speed\n"));
}

#[test]
fn two_body_simulation_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[initial]\npoints = [[-0.5, 0.0], [0.5, 0.0]]\n[flow]\ndt = 0.001\nt_final = 1.0\nscheme = \"geodesic-rk4\"\nrecord_every = 100\n",
    );
    let out = dir.path().join("out");
    let o = run(&["simulate", "--config", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines = parse_jsonl(&std::fs::read_to_string(out.join("trajectory.jsonl")).unwrap()).unwrap();
    let last = lines.last().unwrap();
    assert_eq!(last.t, 1.0);
    let d = Manifold::Euclidean(2).distance(&last.points[0], &last.points[1]).unwrap();
    assert!((d - (-1.0f64).exp()).abs() < 1e-6);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["final_max_pairwise_distance"].as_f64().unwrap(), d);
    assert_eq!(summary["config"]["flow"]["record_every"], 100);
    assert!(summary["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn sphere_guard_violation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "manifold = \"sphere\"\n[initial]\npoints = [[0.8660254037844387, 0.0, 0.5], [-0.8660254037844387, 0.0, 0.5]]\n",
    );
    let o = run(&["simulate", "--config", &cfg, "--output", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("diameter guard"), "{}", stderr(&o));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "manifold = \"torus\"\n",
        "potential = \"cubic\"\n",
        "unknown_key = 1\n",
        "checks = [\"nonsense\"]\n",
        "[flow]\ndt = 2.0\nt_final = 1.0\n",
        "[initial]\npoints = [[0.0, 0.0]]\nweights = [0.5]\n",
    ] {
        let cfg = write_config(dir.path(), text);
        let o = run(&["simulate", "--config", &cfg, "--output", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", stderr(&o));
    }
    let o = run(&["simulate", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--override-constant", "Q=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn default_verify_suites_pass() {
    for manifold in ["euclidean:2", "sphere"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), &format!("manifold = \"{manifold}\"\n"));
        let out = dir.path().join("out");
        let o = run(&["verify", "--config", &cfg, "--output", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 8, "{text}");
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("contraction.json")).unwrap()).unwrap();
        assert_eq!(report["passed"], true);
        assert!(out.join("verify_summary.json").exists());
    }
}

#[test]
fn halved_constant_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "checks = [\"d2_lipschitz\"]\n");
    let o = run(&[
        "verify",
        "--config",
        &cfg,
        "--output",
        dir.path().to_str().unwrap(),
        "--override-constant",
        "L=1",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("[FAIL] d2_lipschitz"));
}

#[test]
fn w1_command_examples() {
    let dir = tempfile::tempdir().unwrap();
    let m = Manifold::Sphere;
    let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let save = |name: &str, rho: &EmpiricalMeasure| std::fs::write(path(name), rho.to_json()).unwrap();

    let cloud = EmpiricalMeasure::uniform(
        m.sample_in_ball(&m.origin(), 1.0, 6, 3, Default::default()).unwrap(),
    )
    .unwrap();
    save("a.json", &cloud);
    let o = run(&["w1", &path("a.json"), &path("a.json"), "--manifold", "sphere"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "w1 = 0");

    let x = ManifoldPoint::new(vec![0.0, 0.0, 1.0]);
    let y = ManifoldPoint::new(vec![0.6, 0.0, 0.8]);
    save("x.json", &EmpiricalMeasure::dirac(x.clone()));
    save("y.json", &EmpiricalMeasure::dirac(y.clone()));
    let o = run(&["w1", &path("x.json"), &path("y.json"), "--manifold", "sphere"]);
    let printed: f64 = stdout(&o).trim().trim_start_matches("w1 = ").parse().unwrap();
    assert_eq!(printed, m.distance(&x, &y).unwrap());

    let other = EmpiricalMeasure::uniform(
        m.sample_in_ball(&m.origin(), 1.0, 6, 4, Default::default()).unwrap(),
    )
    .unwrap();
    save("b.json", &other);
    let out = dir.path().join("plan");
    let o = run(&[
        "w1",
        &path("a.json"),
        &path("b.json"),
        "--manifold",
        "sphere",
        "--oracle",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value("w1 = ") - value("oracle = ")).abs() <= 1e-12);
    let csv = std::fs::read_to_string(out.join("coupling.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn constants_command_examples() {
    let o = run(&["constants", "--manifold", "euclidean:2", "--potential", "quadratic"]);
    let t = stdout(&o);
    assert_eq!(table_value(&t, "L"), 2.0);
    assert_eq!(table_value(&t, "ell"), 1.0);
    assert_eq!(table_value(&t, "Lbar"), 1.0);
    assert_eq!(table_value(&t, "Lambda"), 1.0);

    let o = run(&["constants", "--manifold", "hyperbolic", "--potential", "quadratic", "--delta", "1"]);
    let l = table_value(&stdout(&o), "L");
    assert!((l - 2.0 / 1.0f64.tanh()).abs() < 1e-12);

    let delta = (std::f64::consts::PI / 3.0).to_string();
    let o = run(&["constants", "--manifold", "sphere", "--potential", "quadratic", "--delta", &delta]);
    let t = stdout(&o);
    assert_eq!(table_value(&t, "ell"), std::f64::consts::FRAC_PI_2);
    assert_eq!(table_value(&t, "Lambda"), std::f64::consts::FRAC_PI_2);

    let o = run(&["constants", "--manifold", "sphere", "--delta", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("diameter guard"));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "manifold = \"sphere\"\n[initial]\nradius = 0.4\ncount = 30\n[flow]\ndt = 0.01\nt_final = 0.3\n",
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = bin()
        .env("MANIFOLD_AGG_THREADS", "1")
        .args(["simulate", "--config", &cfg, "--output", a.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = run(&["simulate", "--config", &cfg, "--threads", "3", "--output", b.to_str().unwrap()]);
    assert!(o.status.success());
    let read = |d: &Path| std::fs::read_to_string(d.join("trajectory.jsonl")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn seed_flag_changes_sampled_initial_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[flow]\ndt = 0.05\nt_final = 0.1\n");
    let first = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        let o = run(&["simulate", "--config", &cfg, "--seed", seed, "--output", out.to_str().unwrap()]);
        assert!(o.status.success());
        parse_jsonl(&std::fs::read_to_string(out.join("trajectory.jsonl")).unwrap()).unwrap()[0]
            .points
            .clone()
    };
    assert_eq!(first("5", "a"), first("5", "b"));
    assert_ne!(first("5", "a"), first("6", "c"));
}
