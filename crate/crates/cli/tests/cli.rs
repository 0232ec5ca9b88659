use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use lhv_core::algebra::{Algebra, Basis, Element, TruncationBox};
use lhv_core::autos::automorphism_table;
use lhv_core::bider::BilinearTable;
use lhv_core::derivations::DerivationSpec;
use lhv_core::gamma::GammaConfig;
use lhv_core::io;
use lhv_core::random;
use lhv_core::scalar::{LaurentPoly, RhoOperator, Scalar};
use lhv_core::twolocal::TwoLocalTable;

fn z_config() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs/z.json")
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhv")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_temp(name: &str, v: &Value) -> String {
    let p = std::env::temp_dir().join(format!("lhv-{}-{name}.json", std::process::id()));
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

fn small_box() -> TruncationBox {
    TruncationBox::new(vec![(-2, 2)], (-1, 1), 2).unwrap()
}

#[test]
fn bracket_prints_the_result() {
    let out = run(&["bracket", "--config", &z_config(), "--expr", "[L(2;0), L(1;1)]"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["text"], "L(3;1)");
    assert!(String::from_utf8_lossy(&out.stderr).contains("L(3;1)"));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run(&["bracket", "--config", &z_config(), "--expr", "L(1;0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 6"));

    let out = run(&["verify", "nope", "--config", &z_config()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "gspace", "--config", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write_temp("badcfg", &serde_json::json!({ "schema": 1 }));
    assert_eq!(run(&["verify", "gspace", "--config", &bad]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_and_timing_is_opt_in() {
    let cfg = z_config();
    let a = run(&["verify", "theorem18", "--config", &cfg, "--seed", "7", "--json-only"]);
    let b = Command::new(env!("CARGO_BIN_EXE_lhv"))
        .args(["verify", "theorem18", "--config", &cfg, "--seed", "7", "--json-only"])
        .env("LHV_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());
    let v = json(&a);
    assert_eq!(v["seed"], 7);
    assert!(v.get("wall_ms").is_none());

    let t = json(&run(&["verify", "gspace", "--config", &cfg, "--timing", "--json-only"]));
    assert!(t["wall_ms"].is_u64());
}

#[test]
fn derivation_decompose_recovers_parameters() {
    let alg = Algebra::new(GammaConfig::integers());
    let b = LaurentPoly::monomial(Scalar::from_int(3), 2);
    let d = DerivationSpec::Sum(vec![DerivationSpec::DB(b.clone()), DerivationSpec::DRho(RhoOperator::euler())]);
    let table = d.table(&alg, &small_box()).unwrap();
    let path = write_temp("decompose", &io::table_to_json(&table));
    let out = run(&["derivation", "decompose", "--config", &z_config(), "--table", &path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["b"], b.to_string());
    assert_eq!(v["rho"], LaurentPoly::t_pow(1).to_string());
}

#[test]
fn bider_extract_and_reject() {
    let alg = Algebra::new(GammaConfig::integers());
    let lambda = Scalar::from_ratio(7, 2);
    let mut f = BilinearTable::inner(&alg, small_box(), &lambda);
    let path = write_temp("bider", &io::bilinear_to_json(&f));
    let out = run(&["bider", "extract", "--config", &z_config(), "--table", &path]);
    assert!(out.status.success());
    assert_eq!(json(&out)["lambda"], "7/2");

    let (x, y) = (Basis::l(&[1], 0), Basis::l(&[0], 0));
    let v = f.get(&x, &y).unwrap() + Element::basis(&Basis::h(&[1], 1));
    f.insert(x, y, v).unwrap();
    let path = write_temp("bider-bad", &io::bilinear_to_json(&f));
    let out = run(&["bider", "extract", "--config", &z_config(), "--table", &path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn twolocal_certify_on_a_restriction() {
    let alg = Algebra::new(GammaConfig::integers());
    let bx = small_box();
    let mut rng = random::rng(3);
    let d = DerivationSpec::Sum(vec![
        DerivationSpec::Inner(random::element(&mut rng, alg.gamma().field(), &bx, 2)),
        DerivationSpec::DB(LaurentPoly::t_pow(-1)),
    ]);
    let samples = vec![
        Element::basis(&Basis::l(&[0], 0)),
        Element::basis(&Basis::l(&[1], 0)),
        random::element(&mut rng, alg.gamma().field(), &bx, 3),
    ];
    let t = TwoLocalTable::restrict(&alg, &d, samples);
    let path = write_temp("twolocal", &io::two_local_to_json(&t));
    let out = run(&["twolocal", "certify", "--config", &z_config(), "--table", &path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r["zero"] == true));
}

#[test]
fn aut_extract_and_invert() {
    let cfg = GammaConfig::integers();
    let p = random::aut_params(&mut random::rng(11), &cfg);
    let table = automorphism_table(&cfg, &p, &small_box()).unwrap();
    let path = write_temp("aut", &io::table_to_json(&table));
    let out = run(&["aut", "extract", "--config", &z_config(), "--table", &path]);
    assert!(out.status.success());
    assert_eq!(json(&out), io::params_to_json(&p));

    let params = io::params_to_json(&p).to_string();
    let inv = json(&run(&["aut", "invert", "--config", &z_config(), "--params", &params]));
    let back = json(&run(&["aut", "invert", "--config", &z_config(), "--params", &inv.to_string()]));
    assert_eq!(back, io::params_to_json(&p));
}

#[test]
fn gamma_scaling_exit_codes() {
    let two = write_temp(
        "two",
        &serde_json::json!({"schema":1,"field":"rationals","gamma":{"generators":["2"]},"box":{"gamma":[[-2,2]],"t":[-1,1],"pad":2}}),
    );
    let three = write_temp(
        "three",
        &serde_json::json!({"schema":1,"field":"rationals","gamma":{"generators":["3"]},"box":{"gamma":[[-2,2]],"t":[-1,1],"pad":2}}),
    );
    let out = run(&["gamma", "scaling", "--config", &two, "--other", &three]);
    assert!(out.status.success());
    assert_eq!(json(&out)["a"], "2/3");
    let q2 = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/q2.json");
    let out = run(&["gamma", "scaling", "--config", &two, "--other", q2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
