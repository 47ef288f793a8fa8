use std::path::PathBuf;
use std::process::{Command, Output};

fn verify(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_verify"));
    cmd.args(args).env_remove("DUALGPD_SEED");
    if let Some(s) = seed_env {
        cmd.env("DUALGPD_SEED", s);
    }
    cmd.output().expect("verify runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dualgpd-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn list_names_every_suite() {
    let o = verify(&["list"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 10);
    let all = json(&verify(&["list", "--format", "json"], None));
    assert_eq!(all[0]["name"], "dvb-duality");
    assert_eq!(all[9]["name"], "thm-needed");
}

#[test]
fn unknown_suite_is_an_error() {
    let o = verify(&["nope"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn json_is_reproducible_and_seeded() {
    let args = ["dvb-duality", "--trials", "5", "--format", "json"];
    let a = verify(&args, None);
    let b = verify(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["schema"], "dualgpd-report/1");
    assert_eq!(r["seed"], "7");
    assert!(r.get("timing_ms").is_none());
    assert_eq!(json(&verify(&args, Some("99")))["seed"], "99");
    let flag_wins: Vec<&str> = args.iter().copied().chain(["--seed", "5"]).collect();
    assert_eq!(json(&verify(&flag_wins, Some("99")))["seed"], "5");
    assert!(json(&verify(&[&args[..], &["--timing"]].concat(), None))["timing_ms"].is_u64());
}

#[test]
fn config_file_sits_below_flags() {
    let dir = scratch("config");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("run.conf");
    std::fs::write(&file, "# small run\ntrials = 3\nseed = 4\nformat = json\n").unwrap();
    let path = file.to_str().unwrap();
    let r = json(&verify(&["dvb-duality", "--config", path, "--seed", "6"], None));
    assert_eq!((r["config"]["trials"].as_u64(), r["seed"].as_str()), (Some(3), Some("6")));
    std::fs::write(&file, "speed = 3\n").unwrap();
    assert_eq!(verify(&["dvb-duality", "--config", path], None).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fault_fixtures_fail_the_run() {
    let o = verify(&["poisson-mult", "--dims", "1", "--inject-fault"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    assert_eq!(verify(&["dvb-duality", "--inject-fault"], None).status.code(), Some(2));
}

#[test]
fn golden_round_trip_and_corruption() {
    let dir = scratch("golden");
    let d = dir.to_str().unwrap();
    assert_eq!(verify(&["cotangent-double", "--dims", "1", "--regen-golden"], None).status.code(), Some(2));
    assert!(verify(&["cotangent-double", "--dims", "1", "--golden", d, "--regen-golden"], None).status.success());
    let ok = verify(&["cotangent-double", "--dims", "1", "--golden", d], None);
    assert!(ok.status.success(), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("golden: cotangent-pair-1.json matches"));
    let file = dir.join("cotangent-pair-1.json");
    let text = std::fs::read_to_string(&file).unwrap().replacen("-1/1", "1/1", 1);
    std::fs::write(&file, text).unwrap();
    let bad = verify(&["cotangent-double", "--dims", "1", "--golden", d], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("checksum"));
    std::fs::remove_dir_all(&dir).unwrap();
}
