use std::process::{Command, Output};

fn densclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densclass")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = densclass(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(densclass(&["simulate", "rule=gkl", "n=11", "p=0.5"]).status.code(), Some(2));
    assert_eq!(densclass(&["simulate", "rule=nope", "n=11", "p=0"]).status.code(), Some(2));
    assert_eq!(densclass(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(densclass(&["bounds", "k=12", "p=1/576", "k=3"]).status.code(), Some(2));
    assert_eq!(densclass(&["simulate", "rule=gkl", "input=/nonexistent/x"]).status.code(), Some(1));
    assert_eq!(densclass(&["bounds", "k=12", "p=1/576"]).status.code(), Some(0));
}

#[test]
fn header_echoes_resolved_config() {
    let out = stdout(&["simulate", "rule=gkl", "n=21", "p=0.3", "seed=5"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# densclass "));
    assert_eq!(lines[1], "# config: simulate rule=gkl n=21 p=0.3 seed=5 t_max=84 topology=ring format=text");
    assert_eq!(lines[2], "# seed: 5");
    assert!(lines[3].starts_with("# prng: "));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["sweep", "rule=modified_traffic", "n=51", "p=0.3,0.7", "trials=8", "seed=9"];
    assert_eq!(stdout(&args), stdout(&args));
    let other = ["sweep", "rule=modified_traffic", "n=51", "p=0.3,0.7", "trials=8", "seed=10"];
    assert_ne!(stdout(&args), stdout(&other));
}

#[test]
fn pbm_dimensions() {
    let out = stdout(&["simulate", "rule=gkl", "n=401", "p=0.5", "seed=1", "t_max=800", "format=pbm"]);
    let mut lines = out.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("401 801"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 801);
    assert!(rows.iter().all(|r| r.len() == 401 && r.bytes().all(|b| b == b'0' || b == b'1')));
}

#[test]
fn sweep_rows() {
    let out = stdout(&["sweep", "rule=gkl", "n=31", "p=0.0:0.2:1.0", "trials=4", "seed=2"]);
    let csv: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(csv[0].starts_with("p,trials,fixed0_frac"));
    assert_eq!(csv.len(), 7);
    assert!(csv[1].starts_with("0,4,1,0,0,"));
    assert!(csv[6].starts_with("1,4,0,1,0,"));
}

#[test]
fn files_written_with_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let arg = format!("out={}", out.display());
    assert!(stdout(&["bounds", "k=12", "p=1/1000", &arg]).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("n,l_n,f_n,closed_form_bound,closed_form_holds,alpha_pow,tail_bound"));
}
