use std::process::{Command, Output};

fn fibtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibtree"))
        .args(args)
        .env_remove("FIBTREE_DEPTH_CAP")
        .env_remove("FIBTREE_PRECISION_CAP")
        .env_remove("FIBTREE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fibtree(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn seq_examples() {
    assert_eq!(
        stdout(&["seq", "S", "1..4"]),
        "sequence,n,value\nS,1,5\nS,2,2\nS,3,7\nS,4,30\n"
    );
    assert_eq!(
        stdout(&["seq", "A11", "0", "3"]),
        "sequence,n,value\nA11,0,1\nA11,1,5\nA11,2,27\nA11,3,152\n"
    );
    assert_eq!(
        stdout(&["seq", "D", "0..2"]),
        "sequence,n,value\nD,0,-3\nD,1,-13\nD,2,-64\n"
    );
    assert_eq!(
        stdout(&["seq", "Ak", "1", "--k", "2"]),
        "sequence,n,value\nA2,1,7\n"
    );
}

#[test]
fn big_values_are_plain_decimal() {
    let out = stdout(&["seq", "A11", "400"]);
    let value = out.lines().nth(1).unwrap().rsplit(',').next().unwrap();
    assert!(
        value.len() > 300 && value.bytes().all(|c| c.is_ascii_digit()),
        "{value}"
    );
}

#[test]
fn count_and_sw_examples() {
    assert_eq!(
        stdout(&["count", "1", "2", "1"]),
        "pair,n,depth,sw,value\n1:2,1,4,1,6\n"
    );
    assert_eq!(
        stdout(&["count", "2", "1", "1", "--oracle"]),
        "pair,n,depth,sw,value,oracle,agree\n2:1,1,5,2,7,7,true\n"
    );
    assert!(stdout(&["count", "4", "7", "0"]).ends_with("4:7,0,2,5,0\n"));
    assert!(stdout(&["sw", "3", "5"]).ends_with("3:5,3,3:5 2:3 1:2 1:1,1 1 2 3 5,RRR\n"));
    assert!(stdout(&["sw", "1", "1"]).contains("1:1,0,"));
    assert!(stdout(&["sw", "2", "3"]).contains("2:3,2,"));
}

#[test]
fn walkprob_closed_form() {
    let out = stdout(&["walkprob", "0.5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let e = v["rows"][0]["escape"].as_f64().unwrap();
    assert!((e - 0.309_016_994).abs() < 1e-9);
    let low = stdout(&["walkprob", "0.3333333"]);
    assert!(low.lines().nth(1).unwrap().starts_with("0.3333333,0.0,"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "walkprob",
        "0.6",
        "--simulate",
        "20000",
        "300",
        "9",
        "--format",
        "json",
    ];
    assert_eq!(fibtree(&args).stdout, fibtree(&args).stdout);
    let hist = [
        "walkprob",
        "0.5",
        "--simulate",
        "5000",
        "200",
        "--occurrences",
        "--seed",
        "3",
    ];
    assert_eq!(fibtree(&hist).stdout, fibtree(&hist).stdout);
    let cert = ["certify", "cor31", "100", "140"];
    assert_eq!(fibtree(&cert).stdout, fibtree(&cert).stdout);
}

#[test]
fn json_roundtrips() {
    for args in [
        vec!["seq", "B", "0..30", "--format", "json"],
        vec!["certify", "dineq", "100", "110", "--format", "json"],
        vec![
            "walkprob",
            "0.7",
            "--simulate",
            "1000",
            "100",
            "--format",
            "json",
        ],
        vec!["identities", "all", "2", "4", "--format", "json"],
    ] {
        let out = stdout(&args);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&v).unwrap() + "\n",
            out,
            "{args:?}"
        );
    }
}

#[test]
fn certify_reports_and_exit_codes() {
    let ok = fibtree(&["certify", "binom3n", "1", "50"]);
    assert!(ok.status.success());
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.lines().skip(1).all(|l| l.contains(",holds,")));

    let cn = stdout(&["certify", "cn10000"]);
    let row: Vec<&str> = cn.lines().nth(1).unwrap().split(',').collect();
    let (lo, hi): (f64, f64) = (row[2].parse().unwrap(), row[3].parse().unwrap());
    assert!(19.7502 < lo && hi < 19.7505);

    let fails = fibtree(&["certify", "a12", "1400"]);
    assert_eq!(fails.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["nope"],
        vec!["count", "6", "9", "1"],
        vec!["walkprob", "1.5"],
        vec!["certify", "thm9"],
        vec!["seq", "Ak", "3"],
        vec!["seq", "S", "5..2"],
        vec!["identities", "lemma99", "1", "2"],
    ] {
        assert_eq!(fibtree(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(fibtree(&["--help"]).status.code(), Some(0));
}

#[test]
fn depth_cap_from_env_and_flag() {
    let capped = Command::new(env!("CARGO_BIN_EXE_fibtree"))
        .args(["count", "1", "1", "3", "--oracle"])
        .env("FIBTREE_DEPTH_CAP", "6")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_fibtree"))
        .args(["count", "1", "1", "3", "--oracle", "--depth-cap", "9"])
        .env("FIBTREE_DEPTH_CAP", "6")
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
}

#[test]
fn precision_cap_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_fibtree"))
        .args(["certify", "thmA", "5000"])
        .env("FIBTREE_PRECISION_CAP", "16")
        .output()
        .unwrap();
    assert!(out.status.success(), "undecided is not a failure");
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains(",undecided,16,"));
}

#[test]
fn oracle_command_agrees() {
    let out = fibtree(&["oracle", "--max-sw", "5", "--depth-cap", "15"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(text.contains("\nS,15,143,143,true\n"));
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.cache");
    let p = path.to_str().unwrap();
    let first = stdout(&["seq", "A11", "200", "--cache", p]);
    assert!(path.exists());
    let second = stdout(&["seq", "A11", "200", "--cache", p]);
    assert_eq!(first, second);

    std::fs::write(&path, b"garbage").unwrap();
    let out = fibtree(&["seq", "A11", "200", "--cache", p]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), first);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring cache"));
}
