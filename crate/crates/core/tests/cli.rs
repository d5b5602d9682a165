use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn tsvs(args: &[&str]) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tsvs"));
    cmd.env_remove("TSVS_SEED");
    for a in args {
        if a.contains('.') && !a.starts_with('-') {
            cmd.arg(data(a));
        } else {
            cmd.arg(a);
        }
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = tsvs(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn classify_cube_root_of_two() {
    assert_eq!(ok(&["classify", "cbrt2.field"]), "orbit 1 size 1 (trivial): x - g\norbit 2 size 2: x^2 + g*x + g^2\n");
}

#[test]
fn k0_golden() {
    let out = ok(&["k0", "cbrt2.field"]);
    assert_eq!(out.lines().next(), Some("Z[x1]/(x1^2 - x1 - 2)"));
    assert_eq!(out, "Z[x1]/(x1^2 - x1 - 2)\nx1*x1 = x1 + 2\ncommutative: yes\n");
    assert_eq!(ok(&["k0", "gauss.field"]).lines().nth(2), Some("group ring: Z[C2]"));
}

#[test]
fn simple_in_the_zeta_basis() {
    let out = ok(&["simple", "cbrt2.field", "--orbit", "2", "--basis", "zeta.basis"]);
    assert_eq!(out, "numberfield g: x^3 - 2\n[[0, -g], [g, -g]]\n");
    let (code, _, err) = tsvs(&["simple", "cbrt2.field", "--orbit", "3"]);
    assert_eq!(code, 1);
    assert_eq!(err, "UnknownOrbit: unknown orbit 3\n");
}

#[test]
fn end_tensor_decompose_similar() {
    assert_eq!(ok(&["end", "cbrt2.field", "--orbit", "2"]).lines().count(), 2);
    let t = ok(&["tensor", "zeta.hom", "zeta.hom"]);
    assert!(t.starts_with("numberfield g: x^3 - 2\n[["));
    assert_eq!(ok(&["decompose", "sum.hom"]), "orbit 1^1 + orbit 2^1\n");
    assert_eq!(ok(&["similar", "zeta.hom", "zeta.hom"]), "similar: yes\n");
}

#[test]
fn tensor_output_feeds_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.hom");
    std::fs::write(&path, ok(&["tensor", "zeta.hom", "zeta.hom"])).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tsvs")).arg("decompose").arg(&path).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "orbit 1^2 + orbit 2^1\n");
}

#[test]
fn jordan_commands() {
    let (code, out, err) = tsvs(&["jordan-order", "bad.mat"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.starts_with("NotJordanOrdered: "), "{err}");
    assert_eq!(
        ok(&["jordan-order", "ordered.mat"]),
        "blocks: [2, 1]\nconjugator: [[1, 0, 0], [0, 1, 3], [0, 0, 1]]\njcf: [[2, 1, 0], [0, 2, 0], [0, 0, 2]]\n"
    );
    let j = ok(&["jcf", "jordan.mat"]);
    assert!(j.contains("jcf: [[5, 0, 0], [0, 2, 1], [0, 0, 2]]"), "{j}");
}

#[test]
fn higher_derivation_commands() {
    assert_eq!(ok(&["hs-compose", "hasse2.hs", "id.hs"]), "hs over funcfield t: [D0; D1; D2]\n");
    assert_eq!(ok(&["hs-compose", "--truncate", "d1.hs", "d1.hs"]), "hs over funcfield t: [D0; 2*D1]\n");
    let (code, _, err) = tsvs(&["hs-compose", "d1.hs", "d1.hs"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("LeibnizViolation: "));
    assert_eq!(ok(&["hs-hom", "twisted.hs"]), "funcfield t\n[[t, 1, t], [0, t, 1], [0, 0, t]]\n");
}

#[test]
fn canonical_commands() {
    assert_eq!(
        ok(&["triangularize", "sqrt2-swap.hom"]),
        "diagonal: [g, -g]\nconjugator: [[0, 1], [1, -g]]\ntriangular: [[g, 1], [0, -g]]\n"
    );
    let (code, _, err) = tsvs(&["triangularize", "sum.hom"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("DoesNotSplit: "));
    let out = ok(&["homogeneous", "homogeneous.hom", "--diag", "t.hom"]);
    assert_eq!(
        out,
        "eigenvalue: t\nblocks: [2, 1]\nconjugator: [[1, 0, 0], [0, 1, 0], [0, 0, 1]]\nform:\n  \
         t 1 | 0\n  0 t | 0\n  ----+--\n  0 0 | t\nd1: [D0; D1]\nd2: [D0]\n"
    );
}

#[test]
fn json_mirrors_text() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "classify", "cbrt2.field"])).unwrap();
    assert_eq!(v["orbits"][1]["factor"], "x^2 + g*x + g^2");
    assert_eq!(v["orbits"][0]["trivial"], true);
    let v: serde_json::Value = serde_json::from_str(&ok(&["k0", "cbrt2.field", "--format", "json"])).unwrap();
    assert_eq!(v["ring"], "Z[x1]/(x1^2 - x1 - 2)");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--format", "json", "jordan-order", "ordered.mat"])).unwrap();
    assert_eq!(v["blocks"], serde_json::json!([2, 1]));
    assert_eq!(v["jcf"][0], serde_json::json!(["2", "1", "0"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hom");
    std::fs::write(&bad, "numberfield g: x^3 - 2\n[[0, -g], [g, -q]]\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tsvs")).arg("decompose").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("byte 38"));
    assert_eq!(tsvs(&["classify", "missing.field"]).0, 2);
    assert_eq!(tsvs(&["frobnicate"]).0, 2);
    assert_eq!(tsvs(&["--max-size", "0", "classify", "cbrt2.field"]).0, 1);
    assert_eq!(tsvs(&["--help"]).0, 0);
    // the field of the hom is degree 3, above a cap of 2
    assert_eq!(tsvs(&["--max-degree", "2", "decompose", "sum.hom"]).0, 1);
}

#[test]
fn output_is_deterministic() {
    for args in [&["similar", "zeta.hom", "sum.hom"][..], &["k0", "fifth2.field"], &["homogeneous", "homogeneous.hom", "--diag", "t.hom"]] {
        let a = tsvs(args);
        assert_eq!(a, tsvs(args));
    }
    let with_env = Command::new(env!("CARGO_BIN_EXE_tsvs"))
        .env("TSVS_SEED", "0x10")
        .args(["similar".as_ref(), data("zeta.hom").as_os_str(), data("zeta.hom").as_os_str()])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), "similar: yes\n");
}
