use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperbits::protocols::{EBitProtocol, Protocol};
use hyperbits::qsim::{pauli_x, pauli_z, DensityMatrix, Observable, PureState};
use hyperbits::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperbits"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], paths: &[&Path]) -> Output {
    bin().args(args).args(paths).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn summary(out: &Output, key: &str) -> f64 {
    report(out)["summary"][key].as_f64().unwrap()
}

fn protocol_json(p: EBitProtocol) -> String {
    serde_json::to_string(&Protocol::Ebit(p).to_file()).unwrap()
}

#[test]
fn malformed_json_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", "{\"kind\": \"ebit\", ");
    let out_path = dir.path().join("report.json");
    let out = bin()
        .args(["convert", "--out"])
        .arg(&out_path)
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    assert!(out.stdout.is_empty());
}

#[test]
fn random_two_qubit_ebit_converts() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    // Search a few seeds for a protocol whose post-processing is realisable.
    let mut tried = 0;
    loop {
        let p = random::ebit_protocol(2, 2, 2, 2, &mut rng);
        let path = write(&dir, "p.json", &protocol_json(p));
        let out = run(&["convert"], &[&path]);
        tried += 1;
        match out.status.code() {
            Some(0) => {
                assert!(summary(&out, "max_residual") <= 1e-8);
                assert_eq!(report(&out)["converted"]["kind"], "hyperbit");
                break;
            }
            Some(3) => assert!(summary(&out, "max_residual") <= 1e-8),
            other => panic!("unexpected exit {other:?}"),
        }
        assert!(tried < 50, "no feasible protocol found");
    }
}

#[test]
fn infeasible_postprocessing_exits_3() {
    let dir = TempDir::new().unwrap();
    let rho = DensityMatrix::from_pure(&PureState::basis(4, 0));
    let b = Observable::new(&pauli_z().scale_real(0.6) + &pauli_x().scale_real(0.8)).unwrap();
    let p = EBitProtocol::new(rho, 2, 2, vec![Observable::new(pauli_x()).unwrap()], vec![[b.clone(), b]]).unwrap();
    let path = write(&dir, "p.json", &protocol_json(p));
    let out = run(&["convert"], &[&path]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(&out);
    assert_eq!(r["summary"]["feasible"], false);
    assert!(r.get("converted").is_none());
}

#[test]
fn direct_hyperbit_protocol_realised_with_entanglement() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "h.json",
        r#"{"kind":"hyperbit","encode":[[0.6,0.0],[0.0,-0.8]],
            "bob":[{"plus":{"meas":[1.0,0.0],"c":0.0,"q":0.0},"minus":{"meas":[0.0,1.0],"c":0.0,"q":0.0}}]}"#,
    );
    let out = run(&["convert"], &[&path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(summary(&out, "max_residual") <= 1e-9);
    assert_eq!(report(&out)["converted"]["kind"], "ebit");
}

#[test]
fn identity_uniform_and_duplicate_row() {
    let dir = TempDir::new().unwrap();
    let enc = write(
        &dir,
        "enc.json",
        r#"{"priors":[0.25,0.25,0.25,0.25],"hyperbits":[[0.6,0.8],[1,0],[0,-1],[-0.8,0.6]]}"#,
    );
    let out = run(&["identity"], &[&enc]);
    assert_eq!(out.status.code(), Some(0));
    assert!((summary(&out, "lhs") - 1.0).abs() <= 1e-12);

    let dup = write(&dir, "f.json", r#"{"n":2,"rows":[[1,1,1,1],[1,-1,1,-1],[1,-1,1,-1],[1,1,-1,-1]]}"#);
    let out = run(&["identity"], &[&enc, &dup]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn identity_sweep_passes() {
    let out = run(&["identity", "--seed", "3", "--trials", "1000"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(summary(&out, "max_residual") <= 1e-9);
}

#[test]
fn ic_perfect_bit_and_duplicate_ensemble() {
    let dir = TempDir::new().unwrap();
    let ens = write(&dir, "ens.json", r#"{"n":1,"bits":[1]}"#);
    let enc = write(&dir, "enc.json", r#"{"priors":[0.5,0.5],"hyperbits":[[1],[-1]]}"#);
    let out = run(&["ic"], &[&ens, &enc]);
    assert_eq!(out.status.code(), Some(0));
    assert!((summary(&out, "total_information") - 1.0).abs() <= 1e-12);

    let dup = write(&dir, "dup.json", r#"{"n":2,"bits":[1,1]}"#);
    let enc4 = write(&dir, "enc4.json", r#"{"priors":[0.25,0.25,0.25,0.25],"hyperbits":[[1],[-1],[1],[-1]]}"#);
    let out = run(&["ic"], &[&dup, &enc4]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ic_sweep_stays_below_one() {
    let out = run(&["ic", "--seed", "5", "--trials", "10000", "--format", "csv"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("# max_total_information=")).unwrap();
    let value: f64 = line.split('=').nth(1).unwrap().parse().unwrap();
    assert!(value <= 1.0 + 1e-9);
}

#[test]
fn koenig_symmetric_zero_and_arity() {
    let dir = TempDir::new().unwrap();
    let s = 1.0 / 3f64.sqrt();
    let sym = write(
        &dir,
        "sym.json",
        &format!(
            r#"{{"priors":[0.25,0.25,0.25,0.25],"hyperbits":[[{s},{s},{s}],[-{s},{s},-{s}],[{s},-{s},-{s}],[-{s},-{s},{s}]]}}"#
        ),
    );
    let out = run(&["koenig"], &[&sym]);
    assert_eq!(out.status.code(), Some(0));
    assert!((summary(&out, "p_sum") - 2.366_025_403_784_438_6).abs() <= 1e-9);
    assert!((summary(&out, "e_sq_sum") - 1.0).abs() <= 1e-9);

    let zero = write(&dir, "zero.json", r#"{"priors":[0.25,0.25,0.25,0.25],"hyperbits":[[0],[0],[0],[0]]}"#);
    let out = run(&["koenig"], &[&zero]);
    assert_eq!((summary(&out, "p_sum"), summary(&out, "e_sq_sum")), (1.5, 0.0));

    let three = write(&dir, "three.json", r#"{"priors":[0.5,0.25,0.25],"hyperbits":[[0],[0],[0]]}"#);
    assert_eq!(run(&["koenig"], &[&three]).status.code(), Some(2));
}
