//! End-to-end tests driving the `burnside` binary on the shipped fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_d8_a6(command: &str, extra: &[&str]) -> Output {
    let group = fixture("d8_in_a6.toml");
    let ambient = fixture("a6.toml");
    let mut args = vec![
        command,
        "--group",
        group.to_str().unwrap(),
        "--ambient",
        ambient.to_str().unwrap(),
        "--prime",
        "2",
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not an artifact: {e}\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

// degree-6 class labels of the D8-in-A6 lattice, by subgroup shape
const T: &str = "<>";
const C21: &str = "<(1 3)(5 6)>";
const Z: &str = "<(1 3)(2 4)>";
const C22: &str = "<(1 4)(2 3)>";
const V41: &str = "<(1 3)(5 6),(1 3)(2 4)>";
const C4: &str = "<(1 2 3 4)(5 6)>";
const V42: &str = "<(1 3)(2 4),(1 4)(2 3)>";
const D8: &str = "<(1 2 3 4)(5 6),(1 3)(5 6)>";

#[test]
fn fmark_artifact_matches_the_golden_table() {
    let out = run_d8_a6("fmark", &[]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "fmark");
    assert_eq!(v["meta"]["mode"], "ambient");
    let rows = [T, Z, V41, C4, V42, D8];
    let golden: [[i64; 6]; 6] = [
        [8, 20, 6, 10, 6, 1],
        [0, 4, 2, 2, 2, 1],
        [0, 0, 2, 0, 0, 1],
        [0, 0, 0, 2, 0, 1],
        [0, 0, 0, 0, 2, 1],
        [0, 0, 0, 0, 0, 1],
    ];
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in rows.iter().enumerate() {
            assert_eq!(
                v["data"]["fmark"][r][c],
                json!(golden[i][j]),
                "fmark[{r}][{c}]"
            );
        }
    }
    for (label, w) in rows.iter().zip([8u64, 4, 2, 2, 2, 1]) {
        assert_eq!(v["data"]["weyl"][label], json!(w));
    }
}

#[test]
fn alpha_decompositions_match_the_golden_list() {
    let out = run_d8_a6("alpha", &[]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "alpha");
    let s_classes = [T, C21, Z, C22, V41, C4, V42, D8];
    let golden: [(&str, [i64; 8]); 6] = [
        (T, [1, 0, 0, 0, 0, 0, 0, 0]),
        (Z, [0, 2, 1, 2, 0, 0, 0, 0]),
        (V41, [0, 0, 0, 1, 1, 0, 0, 0]),
        (C4, [0, 1, 0, 1, 0, 1, 0, 0]),
        (V42, [0, 1, 0, 0, 0, 0, 1, 0]),
        (D8, [0, 0, 0, 0, 0, 0, 0, 1]),
    ];
    for (alpha_label, coeffs) in golden {
        for (s_label, want) in s_classes.iter().zip(coeffs) {
            assert_eq!(
                v["data"]["entries"][alpha_label][s_label],
                json!({ "num": want, "den": 1 }),
                "alpha[{alpha_label}] at {s_label}"
            );
        }
    }
}

#[test]
fn partition_mode_reproduces_the_fused_table() {
    let group = fixture("d8_fused.toml");
    let out = run(&[
        "fmark",
        "--group",
        group.to_str().unwrap(),
        "--prime",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["meta"]["mode"], "partition");
    // same fused system up to isomorphism, now on the degree-4 copy
    let rows = [
        "<>",
        "<(1 3)(2 4)>",
        "<(1 3),(1 3)(2 4)>",
        "<(1 2 3 4)>",
        "<(1 3)(2 4),(1 4)(2 3)>",
        "<(1 2 3 4),(1 3)>",
    ];
    let golden: [[i64; 6]; 6] = [
        [8, 20, 6, 10, 6, 1],
        [0, 4, 2, 2, 2, 1],
        [0, 0, 2, 0, 0, 1],
        [0, 0, 0, 2, 0, 1],
        [0, 0, 0, 0, 2, 1],
        [0, 0, 0, 0, 0, 1],
    ];
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in rows.iter().enumerate() {
            assert_eq!(
                v["data"]["fmark"][r][c],
                json!(golden[i][j]),
                "fmark[{r}][{c}]"
            );
        }
    }
}

#[test]
fn trivial_group_tables_are_one_by_one_identities() {
    let group = fixture("trivial.toml");
    let out = run(&["marks", "--group", group.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    for table in ["mark", "mobius", "zeta_tilde", "mu_tilde"] {
        let one = if table == "mobius" {
            json!({ "num": 1, "den": 1 })
        } else {
            json!(1)
        };
        assert_eq!(v["data"][table]["<>"]["<>"], one, "{table}");
    }
    let out = run(&[
        "alpha",
        "--group",
        group.to_str().unwrap(),
        "--prime",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["entries"]["<>"]["<>"], json!({ "num": 1, "den": 1 }));
}

#[test]
fn the_two_methods_agree_and_their_diff_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    for command in ["alpha", "fmark"] {
        let matrix = dir.path().join(format!("{command}_matrix.json"));
        let chains = dir.path().join(format!("{command}_chains.json"));
        let out = run_d8_a6(command, &["--out", matrix.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let out = run_d8_a6(
            command,
            &["--method", "chains", "--out", chains.to_str().unwrap()],
        );
        assert_eq!(code(&out), 0);
        let out = run(&["diff", matrix.to_str().unwrap(), chains.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{command} methods disagree");
        let v = stdout_json(&out);
        assert_eq!(v["data"]["equal"], json!(true));
    }
}

#[test]
fn the_filter_meet_shows_one_half_in_the_diff() {
    let dir = tempfile::tempdir().unwrap();
    let pure = dir.path().join("matrix.json");
    let meet = dir.path().join("meet.json");
    let out = run_d8_a6("alpha", &["--out", pure.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    // the combined filter breaks the pairing: diagnostic exit, artifact kept
    let out = run_d8_a6(
        "alpha",
        &[
            "--method",
            "chains",
            "--filter",
            "drab+elab",
            "--out",
            meet.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("coefficient 1/2"));
    let out = run(&[
        "diff",
        pure.to_str().unwrap(),
        meet.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains(&format!("/entries/{D8}/{C21}: 0 != 1/2")),
        "unexpected diff report:\n{text}"
    );
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    for path in [&first, &second] {
        let out = run_d8_a6("alpha", &["--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn chain_listings_reproduce_the_census() {
    let out = run_d8_a6("chains", &["--from", C21]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["count"], json!(10));
    assert_eq!(v["data"]["signed_sum"], json!(0));
    assert_eq!(v["data"]["coefficient"], json!({ "num": 0, "den": 1 }));
    assert_eq!(v["data"]["chains"].as_array().unwrap().len(), 10);
    // the first chain is the unbroken reflection-to-top path through V4^1
    assert_eq!(
        v["data"]["chains"][0]["segments"],
        json!([[C21, V41, D8]])
    );

    let out = run_d8_a6("chains", &["--from", C21, "--filter", "drab"]);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["count"], json!(2));
    assert_eq!(v["data"]["signed_sum"], json!(0));

    // five tethered chains from the bottom to the fused involution class
    let out = run_d8_a6("chains", &["--tethered", "--to", Z]);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["count"], json!(5));
    assert_eq!(v["data"]["fused_mark"], json!(20));

    // tethered from the center to the top: seven chains summing to one
    let out = run_d8_a6("chains", &["--tethered", "--from", Z]);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["count"], json!(7));
    assert_eq!(v["data"]["signed_sum"], json!(1));
    assert_eq!(v["data"]["fused_mark"], json!(1));
}

#[test]
fn biset_artifact_for_the_klein_four_system() {
    let group = fixture("v4.toml");
    let ambient = fixture("a4.toml");
    let out = run(&[
        "biset",
        "--group",
        group.to_str().unwrap(),
        "--ambient",
        ambient.to_str().unwrap(),
        "--prime",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["kind"], "biset");
    let support = v["data"]["support"].as_array().unwrap();
    assert_eq!(support.len(), 3);
    for entry in support {
        assert_eq!(entry["coefficient"], json!(1));
        assert_eq!(entry["domain"], json!("<(1 2)(3 4),(1 3)(2 4)>"));
    }
    assert_eq!(v["data"]["points"], json!(12));
    assert_eq!(v["data"]["points_over_s"], json!(3));
    assert_eq!(
        v["data"]["characteristic"],
        json!({ "twisted_diagonal": true, "stable": true, "coprime": true })
    );
    assert_eq!(v["data"]["normal_core"], json!("<(1 2)(3 4),(1 3)(2 4)>"));
    assert_eq!(v["data"]["normal_core_contained"], json!(true));
}

#[test]
fn verify_passes_on_the_worked_systems() {
    let out = run_d8_a6("verify", &[]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["all_pass"], json!(true));
    assert_eq!(v["data"]["checks"]["biset-characteristic"], json!(true));

    let group = fixture("d8_fused.toml");
    let out = run(&[
        "verify",
        "--group",
        group.to_str().unwrap(),
        "--prime",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["data"]["all_pass"], json!(true));
    // partition systems have no ambient group, hence no biset checks
    assert!(v["data"]["checks"].get("biset-characteristic").is_none());
}

#[test]
fn exit_codes_separate_usage_caps_and_diagnostics() {
    // missing --prime is a usage error
    let group = fixture("d8.toml");
    let out = run(&["alpha", "--group", group.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // exceeding the element cap is a resource failure
    let s5 = fixture("s5.toml");
    let out = run(&[
        "marks",
        "--group",
        s5.to_str().unwrap(),
        "--max-order",
        "100",
    ]);
    assert_eq!(code(&out), 3);

    // an inconsistent partition yields a negative coefficient: diagnostic
    let bad = fixture("d8_inconsistent.toml");
    let out = run(&["alpha", "--group", bad.to_str().unwrap(), "--prime", "2"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("coefficient -1"));

    // comparing artifacts of different kinds is a usage error
    let dir = tempfile::tempdir().unwrap();
    let alpha = dir.path().join("alpha.json");
    let fmark = dir.path().join("fmark.json");
    let out = run_d8_a6("alpha", &["--out", alpha.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run_d8_a6("fmark", &["--out", fmark.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let out = run(&["diff", alpha.to_str().unwrap(), fmark.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // a self-diff re-imports the artifact and agrees
    let out = run(&["diff", alpha.to_str().unwrap(), alpha.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn non_sylow_subgroups_need_the_flag() {
    let group = fixture("c2_in_a6.toml");
    let ambient = fixture("a6.toml");
    let base = [
        "fmark",
        "--group",
        group.to_str().unwrap(),
        "--ambient",
        ambient.to_str().unwrap(),
        "--prime",
        "2",
    ];
    let out = run(&base);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Sylow"));

    let mut allowed = base.to_vec();
    allowed.push("--allow-non-sylow");
    let out = run(&allowed);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
