use std::path::Path;
use std::process::{Command, Output};

const MINIMAL: &str = "\
[problem]
episodes = 2
rounds = 10
arms = 2

[scenario]
gap = 0.5

[params]
force = true
";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_meta-inf"));
    c.env_remove("MB_SEED");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn missing_config_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run", "-c", "no/such/config.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no/such/config.toml"), "{}", stderr(&o));
}

#[test]
fn minimal_run_writes_both_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", MINIMAL);
    let o = run(&["run", "-c", &cfg, "-o", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(csv_rows(&out.join("episodes.csv")).len(), 2);
    assert_eq!(csv_rows(&out.join("summary.csv")).len(), 1);
    assert!(!out.join("decisions.csv").exists());
}

#[test]
fn seed_override_aggregates_three_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", MINIMAL);
    let o = run(
        &["run", "-c", &cfg, "-o", "out", "--override", "seeds=1,2,3", "--override", "run.algorithms=meta_inf,exp3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(csv_rows(&out.join("episodes.csv")).len(), 2 * 3 * 2);
    let summary = csv_rows(&out.join("summary.csv"));
    assert_eq!(summary.len(), 2);
    let header = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let col = header.lines().next().unwrap().split(',').position(|h| h == "n_seeds").unwrap();
    assert!(summary.iter().all(|r| r[col] == "3"));
}

#[test]
fn bad_keys_and_values_are_configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", MINIMAL);
    let o = run(&["run", "-c", &cfg, "--override", "bogus=1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
    let o = run(&["run", "-c", &cfg, "--override", "scenario.prior=few_good_arms"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("scenario.k"), "{}", stderr(&o));
    let bad = write(dir.path(), "bad.toml", "[problem]\nepisodes = 2\nrounds = 10\narms = 2\nextra = 1\n");
    assert_eq!(run(&["run", "-c", &bad], dir.path()).status.code(), Some(2));
}

#[test]
fn validate_reports_feasibility() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "ok.toml",
        "[problem]\nepisodes = 200\nrounds = 11200\narms = 4\n[scenario]\ngap = 0.5\n[params]\ndelta = 0.02\n",
    );
    let o = run(&["validate", "-c", &ok], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("[0.009242, 0.250000]"), "{}", stdout(&o));
    assert!(stdout(&o).contains("feasible              true"));

    let short = write(dir.path(), "short.toml", "[problem]\nepisodes = 5\nrounds = 10\narms = 4\n[scenario]\ngap = 0.1\n");
    let o = run(&["validate", "-c", &short], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("10351"), "{}", stdout(&o));

    let o = run(&["validate", "-c", &ok, "--override", "delta=0.3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical_and_seed_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nepisodes = 6\nrounds = 400\narms = 3\n[params]\nforce = true\n\
         [run]\nseeds = [0, 1]\nalgorithms = [\"meta_inf\", \"inf_reset\", \"exp3s\"]\n",
    );
    for out in ["a", "b"] {
        let o = run(&["run", "-c", &cfg, "-o", out, "--record-decisions"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let o = run(&["run", "-c", &cfg, "-o", "c", "--threads", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    for f in ["episodes.csv", "summary.csv", "decisions.csv"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between reruns");
    }
    assert_eq!(
        std::fs::read(dir.path().join("a/episodes.csv")).unwrap(),
        std::fs::read(dir.path().join("c/episodes.csv")).unwrap()
    );

    let o = bin()
        .args(["run", "-c", &cfg, "-o", "d"])
        .env("MB_SEED", "99")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(
        std::fs::read(dir.path().join("a/episodes.csv")).unwrap(),
        std::fs::read(dir.path().join("d/episodes.csv")).unwrap()
    );
}

#[test]
fn bound_identify_and_compare_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[problem]\nepisodes = 20\nrounds = 3000\narms = 2\n[scenario]\ngap = 0.5\n\
         [run]\nidentify_episodes = 20\nseeds = [0, 1]\n",
    );
    let o = run(&["bound", "-c", &cfg, "-o", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("bound_value"));
    assert!(dir.path().join("out/bound.csv").exists());

    let o = run(&["identify", "-c", &cfg, "-o", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("out/identification.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1], "20");

    let o = run(&["compare", "-c", &cfg, "-o", "cmp"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(csv_rows(&dir.path().join("cmp/summary.csv")).len(), 5);
    assert!(stdout(&o).contains("minus meta_inf"));
}
