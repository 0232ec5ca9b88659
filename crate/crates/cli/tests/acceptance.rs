//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always show.
//!
//! Runs `lhv verify all` once on configs/z.json, reads the JSON report and
//! adds independent checks against lhv-core and a dense rational oracle.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use num_traits::Zero;
use serde_json::Value;

use lhv_core::algebra::{Basis, Element};
use lhv_core::autos::{apply_automorphism, compose_params, AutomorphismParams};
use lhv_core::gamma::{Character, GammaConfig, IntHom};
use lhv_core::scalar::{Field, Scalar};

fn config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/z.json")
}

fn lhv(args: &[&str]) -> (Value, Duration, bool) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_lhv"))
        .args(args)
        .output()
        .expect("lhv runs");
    let wall = start.elapsed();
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON from lhv {args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr))
    });
    (v, wall, out.status.success())
}

struct Reports(Value);

impl Reports {
    fn check(&self, suite: &str, name: &str) -> &Value {
        let r = self.0["reports"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["suite"] == suite)
            .unwrap_or_else(|| panic!("no report for {suite}"));
        r["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap_or_else(|| panic!("no check {suite}/{name}"))
    }

    fn passed(&self, suite: &str, name: &str) -> bool {
        self.check(suite, name)["passed"] == true
    }

    fn counter(&self, suite: &str, name: &str, key: &str) -> u64 {
        self.check(suite, name)["counters"][key].as_u64().unwrap_or(0)
    }
}

/// Rank of the relation (a - b) g(a + b) = a g(a) - b g(b) on g(-3..=3),
/// plus whether 1 and alpha solve it.
fn dense_g_oracle() -> (usize, bool) {
    let pts: Vec<i64> = (-3..=3).collect();
    let idx = |p: i64| (p + 3) as usize;
    let mut rows: Vec<Vec<Rational64>> = Vec::new();
    for &a in &pts {
        for &b in &pts {
            if !(-3..=3).contains(&(a + b)) {
                continue;
            }
            let mut row = vec![Rational64::zero(); pts.len()];
            row[idx(a + b)] += Rational64::from(a - b);
            row[idx(a)] -= Rational64::from(a);
            row[idx(b)] += Rational64::from(b);
            rows.push(row);
        }
    }
    let solves = |g: &dyn Fn(i64) -> i64| {
        rows.iter()
            .all(|r| pts.iter().map(|&p| r[idx(p)] * Rational64::from(g(p))).sum::<Rational64>().is_zero())
    };
    let both = solves(&|_| 1) && solves(&|p| p);

    let mut m = rows.clone();
    let mut rank = 0;
    for col in 0..pts.len() {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let p = m[rank][col];
        for v in m[rank].iter_mut() {
            *v /= p;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..pts.len() {
                    let d = f * m[rank][c];
                    m[r][c] -= d;
                }
            }
        }
        rank += 1;
    }
    (pts.len() - rank, both)
}

fn z_params(a: i64, phi: i64, chi: i64, psi: i64, b: Scalar) -> AutomorphismParams {
    let cfg = GammaConfig::integers();
    AutomorphismParams::new(
        &cfg,
        Scalar::from_int(a),
        IntHom::new(vec![phi]),
        Character::new(vec![Scalar::from_int(chi)]).unwrap(),
        psi,
        b,
    )
    .unwrap()
}

fn main() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    let (all, all_wall, all_ok) = lhv(&["verify", "all", "--config", cfg, "--json-only"]);
    let (jac, _, _) = lhv(&["verify", "jacobi", "--config", cfg, "--json-only", "--timing"]);
    let r = Reports(all);

    let mut lines: Vec<(usize, bool, String)> = Vec::new();
    let mut line = |n: usize, ok: bool, what: String| lines.push((n, ok, what));

    let triples = r.counter("jacobi", "jacobi", "triples");
    let jac_ms = jac["wall_ms"].as_u64().unwrap_or(u64::MAX);
    line(
        1,
        r.passed("jacobi", "jacobi") && triples == 98u64.pow(3) && jac_ms <= 60_000,
        format!("jacobi and antisymmetry on {triples} triples in {jac_ms} ms"),
    );

    let fams = ["dphi", "dg", "db", "drho", "inner"];
    let ok = fams
        .iter()
        .all(|f| r.passed("derivation-families", f) && r.counter("derivation-families", f, "draws") == 50);
    line(2, ok, "D_phi, D_g, D_b, D^rho, ad(x): 50 draws each".into());

    let ok = r.passed("theorem5", "round_trip")
        && r.counter("theorem5", "round_trip", "draws") == 50
        && r.passed("theorem5", "direct_sum")
        && r.counter("theorem5", "direct_sum", "rank") == r.counter("theorem5", "direct_sum", "unknowns");
    line(3, ok, "degree-zero decomposition round trip, trivial joint kernel".into());

    let ok = r.passed("lemma2", "inner_reconstruction") && r.counter("lemma2", "inner_reconstruction", "draws") == 50;
    line(4, ok, "nonzero-degree derivations reconstructed as ad(x), 50 draws".into());

    let (nullity, both) = dense_g_oracle();
    let ok = r.passed("gspace", "solution_space")
        && r.counter("gspace", "solution_space", "rank") == 2
        && nullity == 2
        && both;
    line(5, ok, format!("g-space rank 2, dense oracle nullity {nullity}"));

    let ok = r.passed("theorem10", "certify")
        && r.counter("theorem10", "certify", "derivations") == 30
        && r.counter("theorem10", "certify", "samples") == 30 * 12;
    line(6, ok, "2-local certification, 30 derivations x 12 samples".into());

    let ok = r.passed("theorem15", "inner_extraction")
        && r.counter("theorem15", "inner_extraction", "maps") == 30
        && r.passed("theorem15", "perturbations_rejected")
        && r.counter("theorem15", "perturbations_rejected", "perturbations") == 30;
    line(7, ok, "lambda extracted exactly, 30 perturbations rejected".into());

    let ok = ["round_trip", "commuting", "noncentral_rejected"].iter().all(|c| r.passed("theorem16", c))
        && r.counter("theorem16", "round_trip", "maps") == 30;
    line(8, ok, "commuting maps split as lambda id + central".into());

    let pair = &r.check("theorem18", "bracket_product_rejected")["info"]["commutativity_counterexample"];
    let ok = r.passed("theorem18", "zero_product_trivial")
        && r.passed("theorem18", "bracket_product_rejected")
        && pair.as_array().is_some_and(|p| p.len() == 2);
    line(9, ok, format!("zero product trivial, bracket product fails at {pair}"));

    // composition on a hand example: (1,0,1,-1,2) o (1,0,1,-1,3) = (1,0,1,1,3/2)
    let z = GammaConfig::integers();
    let p1 = z_params(1, 0, 1, -1, Scalar::from_int(2));
    let p2 = z_params(1, 0, 1, -1, Scalar::from_int(3));
    let c = compose_params(&z, &p1, &p2).unwrap();
    let x = Element::basis(&Basis::l(&[1], 1));
    let twice = apply_automorphism(&z, &p1, &apply_automorphism(&z, &p2, &x).unwrap()).unwrap();
    let hand = c == z_params(1, 0, 1, 1, Scalar::from_ratio(3, 2)) && twice == x.scale(&Scalar::from_ratio(3, 2));
    let t24 = ["compose_then_apply", "extract_inverts_table", "associativity", "inverse"];
    let info = &r.check("theorem24", "compose_then_apply")["info"];
    let ok = t24.iter().all(|c| r.passed("theorem24", c))
        && r.counter("theorem24", "compose_then_apply", "pairs") == 100
        && r.counter("theorem24", "associativity", "triples") == 40
        && info["backends"] == serde_json::json!(["Q", "Q(sqrt(2))"])
        && info["unit_scaling"] == "1+sqrt(2)"
        && hand;
    line(10, ok, "automorphism parameters over Q and Q(sqrt(2)), 50 pairs each".into());

    let ok = r.passed("lemma11", "perfect")
        && r.counter("lemma11", "perfect", "witnesses") == 98
        && r.passed("lemma19", "h_ideal")
        && r.passed("lemma19", "quotient_preserves_bracket");
    line(11, ok, "perfect on the box, H-span ideal, quotient keeps brackets".into());

    let two = GammaConfig::new(Field::Rationals, vec![Scalar::from_int(2)]).unwrap();
    let three = GammaConfig::new(Field::Rationals, vec![Scalar::from_int(3)]).unwrap();
    let q2 = GammaConfig::quadratic_integers(2).unwrap();
    let a = two.find_scaling(&three);
    let ok = r.passed("scaling", "lattice_isomorphism")
        && r.check("scaling", "lattice_isomorphism")["info"]["a"] == "2/3"
        && a == Some(Scalar::from_ratio(2, 3))
        && z.find_scaling(&q2).is_none();
    line(12, ok, "scaling 2Z -> 3Z is 2/3 and preserves brackets".into());

    let mut grid = Vec::new();
    for p in -12i64..=12 {
        for q in 1i64..=12 {
            let s = Scalar::from_ratio(p, q);
            if !s.is_zero() && z.scaling_group_contains(&s).unwrap() && !grid.contains(&s) {
                grid.push(s);
            }
        }
    }
    grid.sort_by_key(|s| s.to_string());
    let unit = Scalar::one() + Scalar::sqrt(2);
    let ok = r.passed("scaling", "scaling_group")
        && grid == [Scalar::from_int(-1), Scalar::from_int(1)]
        && q2.scaling_group_contains(&unit).unwrap();
    line(13, ok, "scaling group over Z is {-1, 1}, 1+sqrt(2) lies in it over Z+Z sqrt(2)".into());

    for (n, ok, what) in &lines {
        println!("criterion {n:2}: {} {what}", if *ok { "pass" } else { "FAIL" });
    }
    let budget = all_ok && all_wall <= Duration::from_secs(300);
    println!("verify all: {} in {:.1} s", if budget { "pass" } else { "FAIL" }, all_wall.as_secs_f64());

    let failed: Vec<usize> = lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if !failed.is_empty() || !budget {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
