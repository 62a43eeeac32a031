//! End-to-end behavior of the `charmat` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use charmat_cli::io::MatrixFile;
use charmat_cli::report::Report;
use proptest::prelude::*;
use tempfile::TempDir;

fn charmat(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charmat"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env("CHARMAT_LOG", "error")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn report(out: &Path) -> Report {
    serde_json::from_slice(&fs::read(out.join("report.json")).unwrap()).unwrap()
}

fn matrix(path: &Path) -> MatrixFile {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn bits(m: &MatrixFile) -> Vec<[u64; 2]> {
    m.data
        .iter()
        .map(|[re, im]| [re.to_bits(), im.to_bits()])
        .collect()
}

const DIAG_1_3: &str = r#"{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [3, 0]]}"#;

#[test]
fn scalar_characteristic_matrix() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "t.json",
        r#"{"rows": 1, "cols": 1, "data": [[2, 0]]}"#,
    );
    let out = dir.path().join("out");
    let run = charmat(&out, &["charmat", input.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let p11 = matrix(&out.join("p11.json"));
    assert!((p11.data[0][0] - 0.2).abs() < 1e-15 && p11.data[0][1] == 0.0);
    assert!(report(&out).pass);
    let stdout: Report = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(stdout.residuals, report(&out).residuals);
}

#[test]
fn malformed_length_is_a_parse_error_with_line() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "t.json",
        "{\n  \"rows\": 2,\n  \"cols\": 2,\n  \"data\": [[1, 0]]\n}\n",
    );
    let run = charmat(dir.path(), &["charmat", input.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("line 5"), "{stderr}");
}

#[test]
fn exit_code_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path();
    let rect = write(
        &dir,
        "rect.json",
        r#"{"rows": 1, "cols": 2, "data": [[1, 0], [2, 0]]}"#,
    );
    let nonherm = write(
        &dir,
        "nh.json",
        r#"{"rows": 2, "cols": 2, "data": [[1, 0], [1, 0], [0, 0], [3, 0]]}"#,
    );
    let diag = write(&dir, "d.json", DIAG_1_3);
    let zero = write(
        &dir,
        "z.json",
        r#"{"rows": 1, "cols": 1, "data": [[0, 0]]}"#,
    );
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["charmat".into(), s(&diag)], 0),
        (
            vec![
                "--tol".into(),
                "0".into(),
                "charmat".into(),
                "--random".into(),
                "6".into(),
            ],
            1,
        ),
        (
            vec!["charmat".into(), s(&dir.path().join("missing.json"))],
            2,
        ),
        (vec!["charmat".into(), s(&rect)], 3),
        (vec!["charmat".into(), "--random".into(), "0".into()], 3),
        (
            vec!["--tol".into(), "-1".into(), "charmat".into(), s(&diag)],
            3,
        ),
        (
            vec!["selfadjoint".into(), s(&nonherm), "projection".into()],
            3,
        ),
        (
            vec![
                "selfadjoint".into(),
                s(&diag),
                "projection".into(),
                "--f-index".into(),
                "2".into(),
            ],
            3,
        ),
        (
            vec![
                "selfadjoint".into(),
                s(&diag),
                "resolvent".into(),
                "--z".into(),
                "3,0".into(),
            ],
            3,
        ),
        (
            vec!["example-dirichlet".into(), "--n".into(), "99".into()],
            3,
        ),
        (vec!["--bogus".into()], 3),
        // the singular fiber makes the inverse-check gate and every resolvent fine,
        // but the Stone integral past a huge window needs more steps than allowed
        (
            vec![
                "selfadjoint".into(),
                s(&zero),
                "stone".into(),
                "--epsilon".into(),
                "1e-12".into(),
            ],
            3,
        ),
    ];
    for (args, code) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let run = charmat(out, &args);
        assert_eq!(
            run.status.code(),
            Some(code),
            "{args:?}: {}",
            String::from_utf8_lossy(&run.stderr)
        );
    }
}

#[test]
fn numerical_failure_exits_four() {
    let dir = TempDir::new().unwrap();
    // overflows to infinity in T*T, so the factorization cannot proceed
    let huge = write(
        &dir,
        "h.json",
        r#"{"rows": 1, "cols": 1, "data": [[1e300, 0]]}"#,
    );
    let run = charmat(dir.path(), &["charmat", huge.to_str().unwrap()]);
    assert_eq!(
        run.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
}

#[test]
fn emitted_matrices_round_trip_bit_identically() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("a");
    assert_eq!(
        charmat(&out, &["--seed", "11", "charmat", "--random", "7"])
            .status
            .code(),
        Some(0)
    );
    for name in ["input", "p11", "p12", "p21", "p22"] {
        let path = out.join(format!("{name}.json"));
        let first = matrix(&path);
        assert_eq!(first.to_json(), fs::read(&path).unwrap());
        let again: MatrixFile = serde_json::from_slice(&first.to_json()).unwrap();
        assert_eq!(bits(&first), bits(&again));
    }
    // feeding the generated input back reproduces the blocks bit for bit
    let back = dir.path().join("b");
    let input = out.join("input.json");
    assert_eq!(
        charmat(&back, &["charmat", input.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    for name in ["p11", "p12", "p21", "p22"] {
        let file = format!("{name}.json");
        assert_eq!(
            fs::read(out.join(&file)).unwrap(),
            fs::read(back.join(&file)).unwrap()
        );
    }
}

#[test]
fn fixed_seed_reproduces_report() {
    let dir = TempDir::new().unwrap();
    let run = |sub: &str, seed: &str| {
        let out = dir.path().join(sub);
        charmat(
            &out,
            &["--seed", seed, "charmat", "--random", "12", "--oracle"],
        );
        let mut r = report(&out);
        r.wall_time_ms = 0.0;
        (r, fs::read(out.join("p21.json")).unwrap())
    };
    let (a, pa) = run("a", "5");
    let (b, pb) = run("b", "5");
    let (c, _) = run("c", "6");
    assert_eq!(a, b);
    assert_eq!(pa, pb);
    assert_ne!(a.inputs, c.inputs);
}

#[test]
fn random_matrix_with_oracle() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        charmat(dir.path(), &["charmat", "--random", "8", "--oracle"])
            .status
            .code(),
        Some(0)
    );
    let r = report(dir.path());
    assert!(r.pass);
    assert!(r.residuals["oracle"] <= 1e-10);
}

#[test]
fn csv_report() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG_1_3);
    let run = charmat(
        dir.path(),
        &["--format", "csv", "charmat", input.to_str().unwrap()],
    );
    assert_eq!(run.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(text.starts_with("key,value\ncommand,charmat\n"));
    assert!(text.contains("\nresidual:A6,"));
    assert!(text.contains("\npass,true\n"));
}

#[test]
fn verify_scalar_fibers() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "f.json",
        r#"{"grid": [0, 1], "fibers": [{"rows": 1, "cols": 1, "data": [[1, 0]]},
                                       {"rows": 1, "cols": 1, "data": [[2, 0]]}]}"#,
    );
    assert_eq!(
        charmat(dir.path(), &["verify", input.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(report(dir.path()).residuals["A19"], 0.0);
    let values: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("values.json")).unwrap()).unwrap();
    assert_eq!(values["family_norm"], 2.0);
}

#[test]
fn verify_laplacian_generator_family() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "f.json",
        r#"{"grid": [0, 0.5, 1], "fibers": [{"kind": "dirichlet-laplacian", "n": 200},
            {"kind": "dirichlet-laplacian", "n": 200}, {"kind": "dirichlet-laplacian", "n": 200}]}"#,
    );
    let run = charmat(dir.path(), &["verify", input.to_str().unwrap()]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stdout)
    );
}

#[test]
fn verify_mixed_dimensions_is_an_invariant_violation() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "f.json",
        r#"{"grid": [0, 1], "fibers": [{"rows": 1, "cols": 1, "data": [[1, 0]]},
                                       {"kind": "periodic-derivative", "n": 4}]}"#,
    );
    assert_eq!(
        charmat(dir.path(), &["verify", input.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn projection_of_diag_1_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG_1_3);
    let run = charmat(
        dir.path(),
        &[
            "selfadjoint",
            input.to_str().unwrap(),
            "projection",
            "--lambda",
            "2",
        ],
    );
    assert_eq!(run.status.code(), Some(0));
    let e = matrix(&dir.path().join("projection.json"));
    assert_eq!(e.data, vec![[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
}

#[test]
fn stone_on_diag_1_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG_1_3);
    let args = [
        "selfadjoint",
        input.to_str().unwrap(),
        "stone",
        "--lambda",
        "2",
        "--epsilon",
        "1e-4",
    ];
    assert_eq!(charmat(dir.path(), &args).status.code(), Some(0));
    assert!(report(dir.path()).residuals["stone"] <= 1e-3);
}

#[test]
fn fourier_on_zero_scalar() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "z.json",
        r#"{"rows": 1, "cols": 1, "data": [[0, 0]]}"#,
    );
    let args = [
        "selfadjoint",
        input.to_str().unwrap(),
        "fourier",
        "--z",
        "0,1",
        "--smax",
        "20",
    ];
    assert_eq!(charmat(dir.path(), &args).status.code(), Some(0));
    let r = report(dir.path()).residuals["fourier"];
    // trapezoid error h²/12 · (f'(smax) − f'(0)) for f = e^{-s}, less the truncated tail e^{-smax}
    let h = 20.0 / 40_000.0;
    let predicted = h * h / 12.0 * (1.0 - (-20f64).exp()) - (-20f64).exp();
    assert!((r - predicted).abs() < 1e-12, "{r} vs {predicted}");
}

#[test]
fn resolvent_and_group_on_diag_1_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", DIAG_1_3);
    for check in [["resolvent", "--z=-1,0.5"], ["group", "--s=-1.3"]] {
        let mut args = vec!["selfadjoint", input.to_str().unwrap()];
        args.extend(check);
        assert_eq!(
            charmat(dir.path(), &args).status.code(),
            Some(0),
            "{check:?}"
        );
    }
}

#[test]
fn example_dirichlet_small_grid() {
    let dir = TempDir::new().unwrap();
    let run = charmat(dir.path(), &["example-dirichlet", "--n", "400", "--k", "5"]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stdout)
    );
    let csv = fs::read_to_string(dir.path().join("eigenvalues.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("operator,index,computed,target,relative_error")
    );
    assert_eq!(lines.count(), 10);
    let r = report(dir.path());
    assert!(r.residuals["witness_periodic"] <= 1e-8);
    assert_eq!(
        charmat(
            dir.path(),
            &["example-dirichlet", "--n", "400", "--k", "41"]
        )
        .status
        .code(),
        Some(3)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Any mangling of a valid file that breaks the JSON or the schema exits 2.
    #[test]
    fn malformed_input_exits_two(cut in 1usize..40, junk in "[\\]\\[{}:,a-z\"]{1,4}") {
        let valid = r#"{"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [3, 0]]}"#;
        let mangled = format!("{}{}", &valid[..cut.min(valid.len() - 1)], junk);
        prop_assume!(serde_json::from_str::<MatrixFile>(&mangled).is_err());
        let dir = TempDir::new().unwrap();
        let input = write(&dir, "m.json", &mangled);
        let run = charmat(dir.path(), &["charmat", input.to_str().unwrap()]);
        prop_assert_eq!(run.status.code(), Some(2));
    }

    /// Every emitted block re-parses to the bit-identical matrix.
    #[test]
    fn emitted_blocks_round_trip(entries in prop::collection::vec(-1e3f64..1e3, 8)) {
        let data: Vec<[f64; 2]> = entries.chunks(2).map(|c| [c[0], c[1]]).collect();
        let file = MatrixFile { rows: 2, cols: 2, data };
        let dir = TempDir::new().unwrap();
        let input = dir.path().join("t.json");
        fs::write(&input, file.to_json()).unwrap();
        let run = charmat(dir.path(), &["charmat", input.to_str().unwrap()]);
        prop_assert!(matches!(run.status.code(), Some(0) | Some(1)));
        for name in ["p11", "p12", "p21", "p22"] {
            let path = dir.path().join(format!("{name}.json"));
            let parsed = matrix(&path);
            let reparsed: MatrixFile = serde_json::from_slice(&parsed.to_json()).unwrap();
            prop_assert_eq!(bits(&parsed), bits(&reparsed));
            prop_assert_eq!(parsed.to_json(), fs::read(&path).unwrap());
        }
    }
}
