use std::path::Path;

use fairstep::cli::main_with;

fn run(args: &[&str], dir: &Path) -> (i32, String, String) {
    let mut argv = vec!["fairstep".to_string()];
    for a in args {
        argv.push(a.replace("@", dir.to_str().unwrap()));
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let (c, out, _) = run(&["check", "--system", "bakery-impl", "--spec", "bakery-spec", "--keys", "2", "--canon", "--cex-dir", "@"], p);
    assert_eq!(c, 0, "{out}");
    assert!(out.contains("result: pass"));

    let (c, _, err) = run(&["check", "--system", "nosuch"], p);
    assert_eq!(c, 1);
    assert!(err.contains("unknown system"));

    let (c, _, _) = run(&["check", "--system", "bakery-impl", "--keys", "2", "--depth", "5"], p);
    assert_eq!(c, 3);

    let (c, _, _) = run(&["check", "--system", "bakery-impl-m1", "--keys", "2", "--canon", "--cex-dir", "@"], p);
    assert_eq!(c, 2);
    assert!(p.join("bakery-impl-m1.t-noblk-blk.cex").exists());
    let f = p.join("bakery-impl-m1.t-noblk-blk.cex");
    let (c, out, _) = run(&["replay", f.to_str().unwrap()], p);
    assert_eq!(c, 2);
    assert!(out.starts_with("reproduced"));
}

#[test]
fn usage_errors() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    for args in [
        &["check", "--system", "relay", "--spec", "bakery-spec"][..],
        &["check", "--system", "bakery-impl", "--keys", "0"],
        &["check", "--system", "bakery-impl", "--suites", "match"],
        &["check", "--system", "bakery-impl", "--suites", "bogus"],
        &["check", "--system", "relay", "--suites", "valid-task"],
        &["simulate", "--system", "relay", "--sched", "aging", "--bound", "3"],
        &["simulate", "--system", "relay", "--keys", "3", "--sched", "aging", "--bound", "2", "--seed", "1"],
        &["refine", "--impl", "relay"],
        &["nonsense"],
    ] {
        assert_eq!(run(args, p).0, 1, "{args:?}");
    }
}

#[test]
fn relay_without_validity_is_inapplicable() {
    let d = tempfile::tempdir().unwrap();
    let (c, out, _) = run(&["check", "--system", "relay", "--keys", "3"], d.path());
    assert_eq!(c, 0);
    assert!(out.contains("inapplicable"));
}

#[test]
fn json_records_are_versioned_lines() {
    let d = tempfile::tempdir().unwrap();
    let (c, out, _) = run(&["check", "--system", "bakery-impl", "--keys", "2", "--canon", "--format", "json"], d.path());
    assert_eq!(c, 0);
    let mut n = 0;
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["record"], "verdict");
        assert_eq!(v["status"], "pass");
        n += 1;
    }
    assert!(n >= 15);
}

#[test]
fn cycles_and_closure() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let (c, out, _) = run(&["cycles", "--system", "bakery-impl", "--max-len", "4", "--canon"], p);
    assert_eq!(c, 0);
    assert!(out.contains("no cycles"));
    let (c, out, _) = run(&["cycles", "--system", "relay-m3", "--cex-dir", "@"], p);
    assert_eq!(c, 2);
    assert!(out.contains("reachable"));
    let f = p.join("relay-m3.no-reachable-cycle.cex");
    assert_eq!(run(&["replay", f.to_str().unwrap()], p).0, 2);
    let (c, out, _) = run(&["closure", "--system", "bakery-impl"], p);
    assert_eq!(c, 0);
    assert!(out.contains("inapplicable"));
    assert_eq!(run(&["closure", "--system", "relay", "--keys", "3"], p).0, 0);
}

#[test]
fn simulate_and_refine_saved_trace() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let (c, out, _) = run(&["simulate", "--system", "bakery-impl", "--keys", "3", "--steps", "2000", "--out", "@/t"], p);
    assert_eq!(c, 0, "{out}");
    assert!(out.contains("fair witness: exists with bound 3"));
    let (c, out, _) = run(&["refine", "--impl", "bakery-impl", "--trace", "@/t"], p);
    assert_eq!(c, 0, "{out}");
    assert!(out.contains("finite prefixes"));

    let (c, out, _) = run(&["simulate", "--system", "relay-m3", "--steps", "200"], p);
    assert_eq!(c, 2);
    assert!(out.contains("lasso"));

    std::fs::write(p.join("script"), "k0 k0 -").unwrap();
    let (c, _, _) = run(&["simulate", "--system", "relay", "--sched", "scripted", "--script", "@/script", "--steps", "30", "--horizon", "5"], p);
    assert_eq!(c, 3);
}

#[test]
fn explore_dump_and_listing() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let (c, out, _) = run(&["explore", "--system", "relay", "--keys", "2", "--dump", "@/g"], p);
    assert_eq!(c, 0);
    assert!(out.contains("8 states"));
    let g = std::fs::read_to_string(p.join("g")).unwrap();
    assert!(g.starts_with("fairstep-graph 1"));
    let (c, out, _) = run(&["systems"], p);
    assert_eq!(c, 0);
    assert_eq!(out.lines().count(), 6);
}
