//! Runs the `fsd` binary on fixed invocations and diffs stdout against the
//! files in `tests/golden/`. Set `FSD_UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn fsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsd")).args(args).current_dir(workspace_root()).output().unwrap()
}

const DATA: &str = "crates/cli/tests/data";

struct Case {
    name: &'static str,
    args: Vec<String>,
    code: i32,
}

fn case(name: &'static str, args: &str, code: i32) -> Case {
    let args = shell_words(&args.replace("$DATA", DATA));
    Case { name, args, code }
}

/// Splits on whitespace, honoring double quotes.
fn shell_words(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in s.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        out.push(cur);
    }
    out
}

fn cases() -> Vec<Case> {
    vec![
        case("verify_tito", r#"verify --group Z4 --pairing standard --set "{0,1}""#, 0),
        case("verify_pair", r#"verify --group Z4 --set "{0,1}" --dual "{0,3}""#, 0),
        case("verify_false_table", r#"verify --group Z9 --set "{0,1,3}" --table"#, 1),
        case("verify_json", r#"--format json verify --group Z2xZ2 --pairing [[0,1],[1,0]] --set "{(0,0),(1,0)}""#, 0),
        case("reduce_lattice", r#"reduce --group Z16 --set "{0,4,8,12}""#, 0),
        case("reduce_not_self_dual", r#"reduce --group Z9 --set "{0,1,3}""#, 1),
        case("evenset_tito", r#"evenset --group Z4 --set "{0,1}""#, 0),
        case("construct_paley7", "construct paley --p 7", 0),
        case("construct_gaussian", "construct gaussian --p 5 --alpha 2", 0),
        case("boolfn_classify_cube", "boolfn classify --field 3 --function x^3", 0),
        case("boolfn_graph_cube_f8", "boolfn graph --field n=3,poly=0b1011 --function x^3", 0),
        case("boolfn_graph_cube_f32", "boolfn graph --field 5 --function x^3", 1),
        case("boolfn_walsh_cube", "boolfn walsh --field 3 --function x^3", 0),
        case("boolfn_differential_cube", "boolfn differential --field 3 --function x^3", 0),
        case("boolfn_transform", "boolfn transform --field n=3,poly=0b1011 --function x^3 --l1 [3,7,5] --l2 [1]", 0),
        case("boolfn_gold_scan", "boolfn gold-scan --n 3,5,7", 0),
        case("codes_macwilliams", "codes macwilliams --input $DATA/f3_example.code", 0),
        case("codes_enumerators", "codes enumerators --input $DATA/f3_example.code", 0),
        case("codes_dual_check_f3", "codes dual-check --input $DATA/f3_example.code --other $DATA/f3_example.code", 1),
        case("codes_identity_f3", "codes identity --input $DATA/f3_example.code", 0),
        case("codes_z4_span", "codes z4-span --input $DATA/z4_c.gens", 0),
        case("codes_dual_check_gray", "codes dual-check --input $DATA/gray_c.code --other $DATA/gray_cprime.code", 0),
        case("codes_zero_counts", "codes zero-counts --input $DATA/gray_c.code --other $DATA/gray_cprime.code", 0),
        case("search_z4", "search --group Z4 --size 2", 0),
        case("search_z9_all_pairings", "search --group Z9 --size 3 --pairing all", 0),
        case("search_pairs_z4", "search --group Z4 --size 2 --pairs", 0),
    ]
}

#[test]
fn golden_outputs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("FSD_UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for c in cases() {
        let args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        let out = fsd(&args);
        let stdout = String::from_utf8(out.stdout).unwrap();
        let path = dir.join(format!("{}.txt", c.name));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &stdout).unwrap();
        } else {
            let expected = std::fs::read_to_string(&path).unwrap_or_default();
            if stdout != expected {
                failures.push(format!("{}: stdout differs\n--- expected\n{expected}--- actual\n{stdout}", c.name));
            }
        }
        if out.status.code() != Some(c.code) {
            failures.push(format!(
                "{}: exit {:?}, expected {}; stderr: {}",
                c.name,
                out.status.code(),
                c.code,
                String::from_utf8_lossy(&out.stderr)
            ));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn usage_and_domain_errors_exit_two() {
    for args in [
        r#"verify --group Z4 --set "{0,7,}""#,
        r#"verify --group Z4xQ2 --set "{0}""#,
        r#"verify --group Z4 --pairing [[2]] --set "{0,1}""#,
        "search --group Z8 --size 3",
        "search --group Z2^7 --size 8",
        "boolfn gold-scan",
        "boolfn classify --field 3 --function y^3",
        "codes macwilliams --input /nonexistent.code",
        "construct sporadic --index 3",
        "verify",
    ] {
        let out = fsd(&shell_words(args).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(2), "{args}");
        assert!(!out.stderr.is_empty(), "{args}");
    }
}

#[test]
fn construct_bundles_pipe_into_verify_and_reduce() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("tito", vec!["construct", "tito"]),
        ("sporadic1", vec!["construct", "sporadic", "--index", "1"]),
        ("sporadic2", vec!["construct", "sporadic", "--index", "2"]),
        ("lattice3", vec!["construct", "lattice", "--n", "3"]),
        ("gaussian13", vec!["construct", "gaussian", "--p", "13", "--alpha", "5"]),
        ("paley3", vec!["construct", "paley", "--p", "3"]),
        ("paley27", vec!["construct", "paley", "--p", "3", "--m", "3"]),
    ] {
        let out = fsd(&args);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let path = tmp.path().join(format!("{name}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let p = path.to_str().unwrap();
        let v = fsd(&["verify", "--bundle", p]);
        assert_eq!(v.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&v.stdout));
        let r = fsd(&["reduce", "--bundle", p]);
        assert_eq!(r.status.code(), Some(0), "{name}");
        let text = String::from_utf8(r.stdout).unwrap();
        let primitive_input = name.starts_with("sporadic") || name == "tito" || name.starts_with("paley");
        assert_eq!(text.contains("trivial: true"), !primitive_input, "{name}: {text}");
    }
}

#[test]
fn gray_image_matches_binary_code_file() {
    let tmp = tempfile::tempdir().unwrap();
    let span = fsd(&["codes", "z4-span", "--input", &format!("{DATA}/z4_c.gens")]);
    let code = tmp.path().join("c.code");
    std::fs::write(&code, &span.stdout).unwrap();
    let gray = fsd(&["codes", "gray", "--input", code.to_str().unwrap()]);
    assert_eq!(gray.status.code(), Some(0));
    let sorted = |text: &str| {
        let mut rows: Vec<String> = text.lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect();
        rows.sort();
        rows
    };
    let expected = std::fs::read_to_string(workspace_root().join(DATA).join("gray_c.code")).unwrap();
    assert_eq!(sorted(&String::from_utf8(gray.stdout).unwrap()), sorted(&expected));
}

#[test]
fn certificates_are_emitted_per_hit() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("certs");
    let out = fsd(&["search", "--group", "Z9", "--size", "3", "--emit-certificates", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let hits = String::from_utf8(out.stdout).unwrap().lines().filter(|l| l.starts_with('{')).count();
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), hits);
    for f in files {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(f.unwrap().path()).unwrap()).unwrap();
        assert_eq!(v["verdict"], true);
    }
}

#[test]
fn budgeted_seeded_search_reports_partial_flag() {
    let out = fsd(&[
        "search",
        "--group",
        "Z2xZ4xZ8",
        "--size",
        "8",
        "--seed-prefix",
        "{(0,0,0),(0,0,1),(0,0,2),(0,0,5),(0,1,0)}",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{(0,0,0),(0,0,1),(0,0,2),(0,0,5),(0,1,0),(0,3,0),(1,0,0),(1,2,6)}  primitive"), "{text}");
    assert!(text.contains("complete: true"));
    let out = fsd(&["search", "--group", "Z2xZ4xZ8", "--size", "8", "--budget-nodes", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("complete: false"));
}

/// Every `$ fsd ...` line inside a console block of the README is executed
/// and its output compared with the lines that follow it.
#[test]
fn readme_examples() {
    let readme = std::fs::read_to_string(workspace_root().join("README.md")).unwrap();
    let mut in_block = false;
    let mut examples: Vec<(String, String)> = Vec::new();
    for line in readme.lines() {
        if line.starts_with("```console") {
            in_block = true;
        } else if line.starts_with("```") {
            in_block = false;
        } else if in_block {
            if let Some(cmd) = line.strip_prefix("$ fsd ") {
                examples.push((cmd.to_string(), String::new()));
            } else if let Some((_, out)) = examples.last_mut() {
                out.push_str(line);
                out.push('\n');
            }
        }
    }
    assert!(examples.len() >= 3);
    for (cmd, expected) in examples {
        let out = fsd(&shell_words(&cmd).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "fsd {cmd}");
    }
}
