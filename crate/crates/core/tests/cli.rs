//! End-to-end checks of the `landfillctl` binary: subcommand wiring, file
//! emission, determinism and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_landfillctl"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("landfillctl-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Minimal well-formedness scan: tags balance and attributes are quoted.
fn assert_well_formed_xml(text: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('<') {
        let end = rest[start..].find('>').map(|e| start + e).expect("unclosed tag");
        let tag = &rest[start + 1..end];
        rest = &rest[end + 1..];
        if tag.starts_with('?') || tag.starts_with('!') {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            let open = stack.pop().unwrap_or_else(|| panic!("stray closing tag {name}"));
            assert_eq!(open, name, "mismatched tag");
        } else if !tag.ends_with('/') {
            let name: String =
                tag.split_whitespace().next().unwrap().chars().collect();
            stack.push(name);
        }
        // quoted attributes only
        let attrs = tag.trim_end_matches('/');
        let quotes = attrs.matches('"').count();
        assert_eq!(quotes % 2, 0, "unbalanced quotes in <{tag}>");
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
}

#[test]
fn classify_builtin_case() {
    let out = bin().args(["classify", "--case", "case_I"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("regime saturated-interior"), "{text}");
    assert!(text.contains("s1_bar"));
    assert!(text.contains("s2_star      = 0.678232998313"));
}

#[test]
fn curves_case_i_locus_absent_switch_curve_present() {
    let dir = tmp_dir("curves");
    let out = bin()
        .args(["curves", "--case", "case_I", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let case_dir = dir.join("case_I");
    assert!(case_dir.join("sigma2.csv").exists());
    assert!(!case_dir.join("c0.csv").exists(), "empty locus must not emit a file");
    assert!(case_dir.join("c1.csv").exists());
    assert!(case_dir.join("xi_star.csv").exists());
    assert!(case_dir.join("singular_arc.csv").exists());

    // header and 17-significant-digit decimals
    let sigma2 = fs::read_to_string(case_dir.join("sigma2.csv")).unwrap();
    let mut lines = sigma2.lines();
    assert_eq!(lines.next(), Some("s1,s2"));
    let first = lines.next().unwrap();
    let v: f64 = first.split(',').next().unwrap().parse().unwrap();
    assert_eq!(v, 0.15);

    // SVG: well-formed, one path per exported curve
    let svg = fs::read_to_string(case_dir.join("overlay.svg")).unwrap();
    assert_well_formed_xml(&svg);
    // sigma2, c1, xi_star, singular arc = 4 curves in case I
    assert_eq!(svg.matches("<path ").count(), 4, "{svg}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn curves_case_iia_has_both_switching_curves() {
    let dir = tmp_dir("curves-iia");
    let out = bin()
        .args(["curves", "--case", "case_IIa", "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let case_dir = dir.join("case_IIa");
    assert!(case_dir.join("c0.csv").exists());
    assert!(case_dir.join("c1.csv").exists());
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn deterministic_curve_emission() {
    let emit = |tag: &str| -> Vec<u8> {
        let dir = tmp_dir(tag);
        let out = bin()
            .args(["curves", "--case", "case_IIb", "--out", dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        let bytes = fs::read(dir.join("case_IIb").join("c1.csv")).unwrap();
        fs::remove_dir_all(&dir).ok();
        bytes
    };
    assert_eq!(emit("det-a"), emit("det-b"), "reruns must be byte-identical");
}

#[test]
fn simulate_from_absorbing_set() {
    let dir = tmp_dir("sim");
    let out = bin()
        .args([
            "simulate",
            "--case",
            "case_I",
            "--start",
            "0.5,0.05",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("word B1"), "{text}");
    let word = fs::read_to_string(dir.join("case_I").join("arc_word_start.txt")).unwrap();
    assert_eq!(word.trim(), "B1");
    let traj = fs::read_to_string(dir.join("case_I").join("trajectory_start.csv")).unwrap();
    assert!(traj.starts_with("t,s1,s2,u\n"));
    let switches = fs::read_to_string(dir.join("case_I").join("switches_start.csv")).unwrap();
    assert_eq!(switches.trim(), "t,s1,s2,u_from,u_to");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_reports_gap() {
    let dir = tmp_dir("cmp");
    // small grid override keeps this test quick
    let cfg_text = "name = quick\nmu_bar = 1\nKs = 2\nKi = 0.23\na = 0.1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\ngrid.n = 48\n";
    let cfg_path = dir.join("quick.cfg");
    fs::write(&cfg_path, cfg_text).unwrap();
    let out = bin()
        .args([
            "compare",
            "--config",
            cfg_path.to_str().unwrap(),
            "--start",
            "0.6,0.4",
            "--out",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("oracle"), "{text}");
    assert!(text.contains("gap"), "{text}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn oracle_emits_annotated_grid() {
    let dir = tmp_dir("oracle");
    let cfg_text = "name = quick\nmu_bar = 1\nKs = 2\nKi = 0.23\na = 0.1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\ngrid.n = 32\n";
    let cfg_path = dir.join("quick.cfg");
    fs::write(&cfg_path, cfg_text).unwrap();
    let out = bin()
        .args(["oracle", "--config", cfg_path.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let grid = fs::read_to_string(dir.join("quick").join("value_grid.csv")).unwrap();
    assert!(grid.starts_with("# nx1=32 nx2=32\n"));
    assert!(grid.contains("# spacing="));
    assert!(grid.contains("s1,s2,v\n"));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn validation_errors_exit_2() {
    let dir = tmp_dir("bad");
    let cfg_path = dir.join("bad.cfg");
    fs::write(&cfg_path, "name = bad\nmu_bar = 1\nKs = 2\na = 0.1\nM = -1\nS1_bar = 0.15\nS2_bar = 0.05\n")
        .unwrap();
    let out = bin().args(["classify", "--config", cfg_path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin().args(["classify", "--case", "case_X"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // start inside the target is a validation error too
    let out = bin()
        .args(["simulate", "--case", "case_I", "--start", "0.1,0.01"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn hypothesis_violation_reported_from_config() {
    let dir = tmp_dir("hypo");
    let cfg_path = dir.join("hypo.cfg");
    fs::write(&cfg_path, "name = hypo\nmu_bar = 1\nKs = 2\na = -1\nM = 1.3\nS1_bar = 0.15\nS2_bar = 0.05\n")
        .unwrap();
    let out = bin().args(["classify", "--config", cfg_path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("H0"), "{err}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_and_case_must_agree() {
    let dir = tmp_dir("agree");
    let cfg_path = dir.join("c.cfg");
    let case = landfillctl::config::builtin_case("case_IIb").unwrap();
    fs::write(&cfg_path, case.emit()).unwrap();
    let ok = bin()
        .args(["classify", "--config", cfg_path.to_str().unwrap(), "--case", "case_IIb"])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = bin()
        .args(["classify", "--config", cfg_path.to_str().unwrap(), "--case", "case_I"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn classify_all_builtins_matches_expected_regimes() {
    let expect = [
        ("case_I", "saturated-interior"),
        ("case_IIa", "saturated-interior"),
        ("case_IIb", "saturated-interior"),
        ("case_IIc", "saturated-interior"),
        ("case_IIIa", "saturated-boundary"),
        ("case_IIIb", "saturated-boundary"),
        ("case_IIIc", "saturated-boundary"),
        ("case_IVa", "admissible-singular"),
        ("case_IVb", "admissible-singular"),
    ];
    for (name, regime) in expect {
        let out = bin().args(["classify", "--case", name]).output().unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains(&format!("regime {regime}")), "{name}: {text}");
    }
}
