use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thuemorse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(&a);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn spread_of_one_minus_x0() {
    let o = run(&["char", "spread", "1 - x0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2");
}

#[test]
fn trivial_power_of_x1() {
    let o = run(&["group", "trivial", "x1^3", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true");
    assert_eq!(
        stdout(&run(&["group", "trivial", "x0^4", "--q", "2"])),
        "false"
    );
}

#[test]
fn lemma_infinitesimal_reports_four_equalities() {
    let o = run(&["verify", "lemma-infinitesimal", "--q", "3", "--kmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 4);
    assert!(out.contains("chi_s(1 - x0^81) = 2/3^3"));
}

#[test]
fn json_spread_fields() {
    let v = json(&["char", "spread", "1 - x0^9", "--q", "3"]);
    assert_eq!(v["value"], "2/3");
    assert_eq!(v["num"], "2");
    assert_eq!(v["den"], "3");
    assert!(v["classes_used"].as_u64().unwrap() > 0);
}

#[test]
fn json_elements_reparse() {
    for args in [
        vec!["algebra", "star", "2*x0 x1 - 1 + x1^-1 x0"],
        vec!["algebra", "sigma", "1 - x0", "x1 x0 - 3", "--mode", "A"],
    ] {
        let v = json(&args);
        let printed = v["element"].as_str().unwrap().to_string();
        let mut again = args.clone();
        again[1] = "star";
        again[2] = &printed;
        again.truncate(3);
        // star twice returns the element, so reparsing must be exact
        let once = json(&again)["element"].as_str().unwrap().to_string();
        let twice = json(&["algebra", "star", &once])["element"]
            .as_str()
            .unwrap()
            .to_string();
        assert_eq!(twice, printed);
    }
}

#[test]
fn word_commands() {
    assert_eq!(stdout(&run(&["word", "prefix", "8"])), "01101001");
    assert_eq!(
        stdout(&run(&["word", "prefix", "9", "--q", "3"])),
        "012120201"
    );
    assert_eq!(
        stdout(&run(&["word", "subst", "x1", "--q", "3"])),
        "x1 x2 x0"
    );
    assert_eq!(
        stdout(&run(&["word", "gamma", "x0 x2", "--q", "3"])),
        "x1 x0"
    );
}

#[test]
fn group_commands() {
    assert_eq!(stdout(&run(&["group", "act", "x0", "00"])), "11");
    assert_eq!(stdout(&run(&["group", "section", "x0", "1"])), "x1");
    assert_eq!(stdout(&run(&["group", "order", "x1", "--q", "4"])), "4");
    assert_eq!(
        stdout(&run(&["group", "equal", "x1", "x2", "--q", "3"])),
        "true"
    );
    assert_eq!(stdout(&run(&["group", "moved", "x0 x1"])), "0,0");
    let n = json(&["group", "nucleus", "--q", "3"]);
    assert_eq!(n["elements"].as_array().unwrap().len(), 5);
    assert_eq!(n["closed"], true);
}

#[test]
fn algebra_commands() {
    assert_eq!(
        stdout(&run(&["algebra", "zero", "x1^2 - 1"])),
        "zero (depth 1)"
    );
    assert_eq!(
        stdout(&run(&["algebra", "cdepth", "1 - x0^2", "--mode", "A"])),
        "2"
    );
    let star_a = run(&["algebra", "star", "x0", "--mode", "A"]);
    assert_eq!(star_a.status.code(), Some(1));
}

#[test]
fn character_commands() {
    assert_eq!(stdout(&run(&["char", "kernel", "x1"])), "0");
    assert_eq!(
        stdout(&run(&["char", "group", "x0 x1", "--kernel", "ones"])),
        "1"
    );
    assert_eq!(
        stdout(&run(&["char", "count", "1 - x0", "5", "--mode", "A"])),
        "64"
    );
    assert!(
        !stdout(&run(&["char", "witness", "3/4", "--mode", "A"])).is_empty()
    );
    let g = json(&["char", "growth", "1 - x0^2", "3", "6", "--mode", "A"]);
    assert_eq!(g["stable"], true);
    assert_eq!(g["C"], "0");
}

#[test]
fn inconclusive_exit_code() {
    let o = run(&[
        "algebra",
        "cdepth",
        "1 - x0^16",
        "--mode",
        "A",
        "--depth",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["char", "spread", "1 - x0^64", "--cap-classes", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_fail() {
    assert_eq!(run(&["group"]).status.code(), Some(1));
    let o = run(&["char", "spread", "x0 +"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    assert_eq!(
        run(&["char", "spread", "x0", "--ring", "Fp:9"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn julia_render_writes_pgm() {
    let dir = std::env::temp_dir().join(format!("thuemorse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("f2.pgm");
    let o = run(&[
        "julia",
        "render",
        "--points",
        "2000",
        "--size",
        "50x40",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P5\n50 40\n255\n"));
    assert_eq!(bytes.len(), "P5\n50 40\n255\n".len() + 2000);
    std::fs::remove_dir_all(&dir).ok();
}
