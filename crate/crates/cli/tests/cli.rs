use std::fs;
use std::process::{Command, Output};

const OVERLAPPING: &str = "(($z{a+b}$x{b+})|($x{a+}c$x)+)$x(($y{a+b+}$y)|($u{c+}a$u))$z$x{a+}b$x";

fn backref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backref")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn avd_reports_degree_and_active_sets() {
    let o = backref(&["avd", OVERLAPPING, "--savd"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("avd=2\n"), "{text}");
    assert!(text.contains("$y{a+b+} active={z, y}"), "{text}");
    assert!(text.contains("savd=2"), "{text}");
}

#[test]
fn mdet_verdicts() {
    let o = backref(&["mdet", "a(b|c)*d"]);
    assert_eq!(stdout(&o), "memory-deterministic: yes\n");
    let o = backref(&["mdet", "($x{a+}b)+$x"]);
    let text = stdout(&o);
    assert!(text.starts_with("memory-deterministic: no\nwitness: origin="), "{text}");
    assert!(text.contains("witness word: \"aba\""), "{text}");
}

#[test]
fn match_exit_codes() {
    let hit = backref(&["match", "$x{(a|b)+}c$x", "abcab"]);
    assert_eq!(hit.status.code(), Some(0));
    assert_eq!(stdout(&hit), "match\tengine=sync\n");
    let miss = backref(&["match", "$x{(a|b)+}c$x", "abcaa"]);
    assert_eq!(miss.status.code(), Some(1));
    let bad = backref(&["match", "(a", "a"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("parse error"));
}

#[test]
fn every_engine_agrees() {
    for engine in ["auto", "oracle", "bfs", "reuse"] {
        for (w, code) in [("aabaa", 0), ("aabaab", 0), ("aaba", 1)] {
            let o = backref(&["match", "--engine", engine, "$x{a+}b$x(b|~)", w]);
            assert_eq!(o.status.code(), Some(code), "{engine} {w}");
        }
    }
}

#[test]
fn sync_is_refused_on_non_deterministic_patterns() {
    let o = backref(&["match", "--engine", "sync", "($x{a+}b)+$x", "aba"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("refusing"));
    let forced = backref(&["match", "--engine", "sync", "--force-sync", "($x{a+}b)+$x", "aba"]);
    assert!(matches!(forced.status.code(), Some(0 | 1)));
}

#[test]
fn budget_exhaustion_is_an_error() {
    let o = backref(&["match", "--engine", "bfs", "--budget", "3", "(a|aa)+$x{a+}$x", "aaaaaaaaaaaab"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_file_drops_one_trailing_newline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("input.txt");
    fs::write(&path, "abcab\n").unwrap();
    let o = backref(&["match", "$x{(a|b)+}c$x", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    fs::write(&path, "abcab\n\n").unwrap();
    let o = backref(&["match", "$x{(a|b)+}c$x", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exported_automaton_matches_like_the_pattern() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("copy.json");
    let o = backref(&["export", "$x{(a|b)+}c$x"]);
    fs::write(&path, &o.stdout).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(backref(&["match", "--mfa", p, "abcab"]).status.code(), Some(0));
    assert_eq!(backref(&["match", "--mfa", p, "--engine", "bfs", "abcaa"]).status.code(), Some(1));
    assert_eq!(stdout(&backref(&["mdet", "--mfa", p])), "memory-deterministic: yes\n");
    let dot = stdout(&backref(&["export", "--dot", "$x{(a|b)+}c$x"]));
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.contains("label=\"ox\""), "{dot}");
}

#[test]
fn classify_then_match_uses_the_recommended_engine() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let patterns = ["a+b", "$x{(a|b)+}c$x", OVERLAPPING, "($x{a+}b)+$x", "(a"];
    fs::write(&corpus, patterns.join("\n")).unwrap();
    let o = backref(&["classify", corpus.to_str().unwrap()]);
    assert!(o.status.success());
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["pattern", "parseOk", "numVars", "avd", "mdet", "recommendedEngine", "analysisMs"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), patterns.len());
    for (row, pattern) in rows.iter().zip(patterns) {
        assert_eq!(&row[0], pattern);
        if &row[1] == "false" {
            assert_eq!(pattern, "(a");
            continue;
        }
        let out = stdout(&backref(&["match", pattern, "ab"]));
        assert!(out.ends_with(&format!("engine={}\n", &row[5])), "{pattern}: {out} vs {}", &row[5]);
    }
    assert_eq!(&rows[2][3], "2");
    assert_eq!(&rows[2][5], "reuse-mfa(2)");
    assert_eq!(&rows[1][5], "sync");
}

#[test]
fn generators_write_patterns_and_automata() {
    let dir = tempfile::tempdir().unwrap();
    let cover = dir.path().join("cover.txt");
    fs::write(&cover, "2\n1\n2\n").unwrap();
    let o = backref(&["gen", "setcover", cover.to_str().unwrap(), "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "$z{~}($x1{~}|$x2{~})($x1{~}|$x2{~})b$x1$x2$z");

    let cnf = dir.path().join("f.cnf");
    fs::write(&cnf, "c one clause\np cnf 3 1\n1 2 3 0\n").unwrap();
    let o = backref(&["gen", "onein3", cnf.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("probe=aabaabaabab"));
    let mfa = dir.path().join("onein3.json");
    fs::write(&mfa, &o.stdout).unwrap();
    let m = mfa.to_str().unwrap();
    assert_eq!(backref(&["match", "--mfa", m, "--engine", "bfs", "aabaabaabab"]).status.code(), Some(0));

    let o = backref(&["gen", "satsync", cnf.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bound=9"));
    fs::write(&mfa, &o.stdout).unwrap();
    assert!(stdout(&backref(&["mdet", "--mfa", m])).starts_with("memory-deterministic: no"));

    let broken = dir.path().join("broken.cnf");
    fs::write(&broken, "1 2\n").unwrap();
    assert_eq!(backref(&["gen", "onein3", broken.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tokens_flag_splits_on_whitespace() {
    let o = backref(&["match", "--tokens", "--engine", "bfs", "$x{ab}c$x", "ab c ab"]);
    assert_eq!(o.status.code(), Some(1));
    let o = backref(&["match", "--engine", "bfs", "$x{ab}c$x", "abcab"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_automaton_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"memoryCount\": 1}").unwrap();
    assert_eq!(backref(&["match", "--mfa", path.to_str().unwrap(), "a"]).status.code(), Some(2));
}
