//! Verification suites run by `lhv verify`.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use lhv_core::algebra::{
    self, check_h_ideal, check_jacobi, check_perfect, quotient_mod_h, Algebra, Basis, Element, Kind, TruncationBox,
};
use lhv_core::autos::{
    apply_automorphism, automorphism_table, compose_params, extract_params, invert_params, isomorphism_by_scaling,
    AutomorphismParams, ScalingMap,
};
use lhv_core::bider::{
    check_biderivation, check_commuting, check_post_lie, decompose_commuting, extract_inner_coefficient,
    post_lie_commutative_at, BiderError, BilinearTable,
};
use lhv_core::config::AlgebraConfig;
use lhv_core::derivations::{
    check_derivation, decompose_degree_zero, direct_sum_check, homogeneous_parts, inner_witness_nonzero_degree,
    DerivationSpec,
};
use lhv_core::gamma::{solve_g_space, GammaConfig, GammaElement};
use lhv_core::io::{element_to_json, params_to_json};
use lhv_core::random::{self, Rand};
use lhv_core::scalar::{Field, Scalar};
use lhv_core::twolocal::{certify_two_local, TwoLocalTable, WitnessSpace, WitnessSpec};

pub const SUITES: [&str; 14] = [
    "jacobi",
    "derivation-families",
    "theorem5",
    "lemma2",
    "gspace",
    "theorem10",
    "biderivation",
    "theorem15",
    "theorem16",
    "theorem18",
    "lemma11",
    "lemma19",
    "theorem24",
    "scaling",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; known suites: {known}, all", known = SUITES.join(", "))]
    UnknownSuite(String),
}

/// One named check inside a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub counters: BTreeMap<String, u64>,
    pub counterexample: Option<Value>,
    pub info: Map<String, Value>,
}

impl Check {
    fn new(name: &str) -> Check {
        Check {
            name: name.into(),
            passed: true,
            counters: BTreeMap::new(),
            counterexample: None,
            info: Map::new(),
        }
    }

    fn count(&mut self, key: &str, n: u64) {
        *self.counters.entry(key.into()).or_default() += n;
    }

    fn fail(&mut self, example: Value) {
        self.passed = false;
        self.counterexample.get_or_insert(example);
    }

    fn expect(&mut self, ok: bool, example: impl FnOnce() -> Value) {
        if !ok {
            self.fail(example());
        }
    }

    fn info(&mut self, key: &str, v: Value) {
        self.info.insert(key.into(), v);
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "counters": self.counters,
            "counterexample": self.counterexample,
            "info": self.info,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(name: &str, cfg: &AlgebraConfig, seed: u64) -> Result<Vec<Report>, SuiteError> {
    if name == "all" {
        return Ok(SUITES.iter().map(|s| run_suite(s, cfg, seed).expect("known")).collect());
    }
    Ok(vec![run_suite(name, cfg, seed)?])
}

pub fn run_suite(name: &str, cfg: &AlgebraConfig, seed: u64) -> Result<Report, SuiteError> {
    let ctx = Ctx {
        alg: Algebra::new(cfg.gamma.clone()),
        cfg,
    };
    let mut rng = random::rng(seed);
    let checks = match name {
        "jacobi" => jacobi(&ctx),
        "derivation-families" => derivation_families(&ctx, &mut rng),
        "theorem5" => theorem5(&ctx, &mut rng),
        "lemma2" => lemma2(&ctx, &mut rng),
        "gspace" => gspace(&ctx),
        "theorem10" => theorem10(&ctx, &mut rng),
        "biderivation" => biderivation(&ctx, &mut rng),
        "theorem15" => theorem15(&ctx, &mut rng),
        "theorem16" => theorem16(&ctx, &mut rng, seed),
        "theorem18" => theorem18(&ctx, &mut rng),
        "lemma11" => lemma11(&ctx),
        "lemma19" => lemma19(&ctx),
        "theorem24" => theorem24(&ctx, &mut rng),
        "scaling" => scaling(&ctx),
        other => return Err(SuiteError::UnknownSuite(other.into())),
    };
    Ok(Report {
        suite: name.into(),
        seed,
        checks,
    })
}

struct Ctx<'a> {
    alg: Algebra,
    cfg: &'a AlgebraConfig,
}

impl Ctx<'_> {
    fn bx(&self) -> &TruncationBox {
        &self.cfg.bx
    }

    fn field(&self) -> Field {
        self.cfg.gamma.field()
    }

    fn rank(&self) -> usize {
        self.cfg.gamma.rank()
    }
}

/// The part of `bx` used for sweeps over basis triples: lattice coordinates
/// in `[-2, 2]` (`[-1, 1]` from rank two on) and degrees in `[-1, 1]`.
pub fn cubic_box(bx: &TruncationBox) -> TruncationBox {
    let r = if bx.rank() == 1 { 2 } else { 1 };
    let small = TruncationBox::new(vec![(-r, r); bx.rank()], (-1, 1), r).expect("valid");
    let meet = small.intersect(bx).unwrap_or(small);
    // the pad is only needed to absorb sums of the smaller box
    let pad = meet
        .gamma_bounds()
        .iter()
        .chain(std::iter::once(&meet.t_bounds()))
        .map(|&(lo, hi)| lo.abs().max(hi.abs()))
        .max()
        .unwrap_or(0);
    TruncationBox::new(meet.gamma_bounds().to_vec(), meet.t_bounds(), pad).expect("valid")
}

fn basis_pair(x: &Basis, y: &Basis) -> Value {
    json!([x.to_string(), y.to_string()])
}

fn jacobi(ctx: &Ctx) -> Vec<Check> {
    let r = check_jacobi(&ctx.alg, ctx.bx());
    let mut c = Check::new("jacobi");
    c.count("pairs", r.pairs);
    c.count("triples", r.triples);
    c.count("antisymmetry_failures", r.antisymmetry_failures);
    c.count("jacobi_failures", r.jacobi_failures);
    if let Some((x, y)) = &r.first_antisymmetry_failure {
        c.fail(basis_pair(x, y));
    }
    if let Some((x, y, z)) = &r.first_jacobi_failure {
        c.fail(json!([x.to_string(), y.to_string(), z.to_string()]));
    }
    vec![c]
}

const DRAWS: usize = 50;

fn derivation_families(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let (field, rank) = (ctx.field(), ctx.rank());
    let names = ["dphi", "dg", "db", "drho", "inner"];
    let mut checks: Vec<Check> = names.iter().map(|n| Check::new(n)).collect();
    for _ in 0..DRAWS {
        let specs = [
            DerivationSpec::DPhi(random::poly_hom(rng, field, rank, (-1, 1))),
            DerivationSpec::DG(random::gsymbol(rng, field, (-1, 1))),
            DerivationSpec::DB(random::laurent(rng, field, (-1, 1), 2)),
            DerivationSpec::DRho(random::rho(rng, field, (-1, 1))),
            DerivationSpec::Inner(random::element(rng, field, &cubic_box(ctx.bx()), 3)),
        ];
        for (c, spec) in checks.iter_mut().zip(specs) {
            c.count("draws", 1);
            match check_derivation(&ctx.alg, &spec, ctx.bx()) {
                Ok(r) => {
                    c.count("pairs", r.pairs_checked);
                    if let Some(f) = r.first_failure {
                        c.fail(json!({ "pair": basis_pair(&f.x, &f.y), "lhs": f.lhs.to_string(), "rhs": f.rhs.to_string() }));
                    }
                }
                Err(e) => c.fail(json!(e.to_string())),
            }
        }
    }
    checks
}

fn theorem5(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let (field, rank) = (ctx.field(), ctx.rank());
    let mut c = Check::new("round_trip");
    for _ in 0..DRAWS {
        let phi = random::poly_hom(rng, field, rank, (-2, 2));
        let g = random::gsymbol(rng, field, (-2, 2));
        let b = random::laurent(rng, field, (-2, 2), 2);
        let rho = random::rho(rng, field, (-2, 2));
        let spec = DerivationSpec::Sum(vec![
            DerivationSpec::DPhi(phi.clone()),
            DerivationSpec::DG(g.clone()),
            DerivationSpec::DB(b.clone()),
            DerivationSpec::DRho(rho.clone()),
        ]);
        c.count("draws", 1);
        let got = spec
            .table(&ctx.alg, ctx.bx())
            .and_then(|t| decompose_degree_zero(&ctx.alg, &t));
        match got {
            Ok(d) => c.expect(
                d.phi == phi && d.g == g && d.b == b && d.rho == rho && d.residual.is_zero(),
                || json!({ "spec": lhv_core::io::derivation_to_json(&spec) }),
            ),
            Err(e) => c.fail(json!(e.to_string())),
        }
    }
    let mut d = Check::new("direct_sum");
    let r = direct_sum_check(&ctx.alg, ctx.bx());
    d.count("unknowns", r.unknowns as u64);
    d.count("equations", r.equations as u64);
    d.count("rank", r.rank as u64);
    d.info("window", json!([r.window.0, r.window.1]));
    d.expect(r.trivial(), || json!({ "underconstrained": r.underconstrained }));
    vec![c, d]
}

fn lemma2(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let pool: Vec<Basis> = ctx.bx().basis().into_iter().filter(|b| !b.gamma.is_zero()).collect();
    let mut c = Check::new("inner_reconstruction");
    for _ in 0..DRAWS {
        let n = rng.gen_range(1..=4);
        let x = random::element_from(rng, ctx.field(), &pool, n);
        c.count("draws", 1);
        let result = (|| {
            let table = DerivationSpec::Inner(x.clone()).table(&ctx.alg, ctx.bx())?;
            let parts = homogeneous_parts(&ctx.alg, &table)?;
            let mut w = Element::zero();
            for (gamma, part) in &parts {
                w.add_assign(&inner_witness_nonzero_degree(&ctx.alg, part, gamma)?);
            }
            let rebuilt = DerivationSpec::Inner(w).table(&ctx.alg, ctx.bx())?;
            Ok::<_, lhv_core::derivations::DerivationError>((parts.len(), rebuilt == table))
        })();
        match result {
            Ok((parts, ok)) => {
                c.count("components", parts as u64);
                c.expect(ok, || json!(x.to_string()));
            }
            Err(e) => c.fail(json!({ "x": x.to_string(), "error": e.to_string() })),
        }
    }
    vec![c]
}

fn gspace(ctx: &Ctx) -> Vec<Check> {
    let mut c = Check::new("solution_space");
    match solve_g_space(&ctx.cfg.gamma, ctx.bx()) {
        Ok(sp) => {
            c.count("rank", sp.rank() as u64);
            c.count("points", sp.points.len() as u64);
            c.count("equations", sp.equations as u64);
            let parametric = sp.is_parametric(&ctx.cfg.gamma);
            if parametric {
                c.info("basis", json!(["alpha -> 1", "alpha -> alpha"]));
            }
            c.expect(parametric, || json!({ "rank": sp.rank() }));
        }
        Err(e) => c.fail(json!(e.to_string())),
    }
    vec![c]
}

fn theorem10(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let (field, rank) = (ctx.field(), ctx.rank());
    let bx = ctx.bx();
    let space = WitnessSpace::for_box(bx);
    let (lo, hi) = bx.t_bounds();
    let degrees = (lo.max(-2), hi.min(2));
    let (i, j) = ctx.cfg.anchors;
    let anchors = [
        Element::basis(&Basis::new(Kind::L, GammaElement::zero(rank), i)),
        Element::basis(&Basis::new(Kind::L, GammaElement::unit(rank, 0), j)),
    ];
    let mut c = Check::new("certify");
    for _ in 0..30 {
        let d = WitnessSpec {
            inner: random::element(rng, field, bx, 3),
            phi: random::poly_hom(rng, field, rank, degrees),
            g: random::gsymbol(rng, field, degrees),
            b: random::laurent(rng, field, degrees, 2),
            rho: random::rho(rng, field, degrees),
        }
        .derivation();
        let mut samples = anchors.to_vec();
        while samples.len() < 12 {
            let n = rng.gen_range(1..=3);
            let s = random::element(rng, field, bx, n);
            if !s.is_zero() && !samples.contains(&s) {
                samples.push(s);
            }
        }
        let delta = TwoLocalTable::restrict(&ctx.alg, &d, samples);
        c.count("derivations", 1);
        c.count("samples", delta.len() as u64);
        match certify_two_local(&ctx.alg, &delta, bx, &space, (i, j)) {
            Ok(cert) => {
                c.count("anchor_witness_sufficient", cert.anchor_witness_sufficient as u64);
                let bad = cert.residuals.iter().position(|r| !r.is_zero());
                c.expect(bad.is_none(), || {
                    let k = bad.unwrap();
                    json!({ "sample": delta.samples[k].to_string(), "residual": cert.residuals[k].to_string() })
                });
            }
            Err(e) => c.fail(json!(e.to_string())),
        }
    }
    vec![c]
}

fn triple_json(f: &lhv_core::bider::TripleFailure) -> Value {
    json!({ "identity": f.identity, "args": [f.x.to_string(), f.y.to_string(), f.z.to_string()] })
}

fn biderivation(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let alg = &ctx.alg;
    let cb = cubic_box(ctx.bx());
    let rank = ctx.rank();
    let mut out = Vec::new();

    let mut c = Check::new("inner_and_zero_pass");
    for f in [
        BilinearTable::inner(alg, cb.clone(), &Scalar::from_int(5)),
        BilinearTable::new(cb.clone()),
    ] {
        let r = check_biderivation(alg, &f, &cb);
        c.count("triples", r.checked);
        c.count("skipped", r.skipped);
        if let Some(fail) = &r.first_failure {
            c.fail(triple_json(fail));
        }
    }
    out.push(c);

    let mut c = Check::new("perturbation_detected");
    let e1 = |k: i64, t: i64| Basis::new(Kind::L, GammaElement::unit(rank, 0).scale(k), t);
    let mut f = BilinearTable::inner(alg, cb.clone(), &Scalar::one());
    let v = f.get(&e1(1, 0), &e1(0, 0)).expect("in box") + Element::basis(&e1(1, 1));
    f.insert(e1(1, 0), e1(0, 0), v).expect("in box");
    let r = check_biderivation(alg, &f, &cb);
    match &r.first_failure {
        Some(fail) => c.info("first_failure", triple_json(fail)),
        None => c.fail(json!("perturbed bracket passed")),
    }
    out.push(c);

    // [f(b1,b2), [b3,b4]] = [[b1,b2], f(b3,b4)] on sampled tuples
    let lambda = random::nonzero_rational(rng);
    let f = BilinearTable::inner(alg, cb.clone(), &lambda);
    let basis = cb.basis();
    let mut c = Check::new("bracket_swap_identity");
    let br = |x: &Basis, y: &Basis| match alg.bracket_basis(x, y) {
        Some((s, z)) => Element::basis(&z).scale(&s),
        None => Element::zero(),
    };
    for _ in 0..2000 {
        let b: Vec<&Basis> = (0..4).map(|_| &basis[rng.gen_range(0..basis.len())]).collect();
        let lhs = alg.bracket(&f.get(b[0], b[1]).unwrap(), &br(b[2], b[3])).unwrap();
        let rhs = alg.bracket(&br(b[0], b[1]), &f.get(b[2], b[3]).unwrap()).unwrap();
        c.count("tuples", 1);
        c.expect(lhs == rhs, || json!([b[0].to_string(), b[1].to_string(), b[2].to_string(), b[3].to_string()]));
    }
    out.push(c);

    let extracted = extract_inner_coefficient(alg, &f, &cb, ctx.cfg.reference_pair.clone());
    let mut c = Check::new("central_arguments_vanish");
    let mut d = Check::new("commuting_pairs_vanish");
    match extracted {
        Ok(l) => {
            for z in algebra::central_subspace(alg, &cb) {
                for b in &basis {
                    let e = Element::basis(b);
                    c.count("checks", 1);
                    let ok = f.apply(&e, &z).unwrap().is_zero()
                        && f.apply(&z, &e).unwrap().is_zero()
                        && alg.bracket(&e, &z).unwrap().scale(&l).is_zero();
                    c.expect(ok, || json!([b.to_string(), z.to_string()]));
                }
            }
            for x in &basis {
                for y in &basis {
                    if alg.bracket_basis(x, y).is_none() {
                        d.count("pairs", 1);
                        let v = f.get(x, y).unwrap();
                        let central = basis.iter().all(|b| alg.bracket(&v, &Element::basis(b)).unwrap().is_zero());
                        d.expect(central && v.is_zero(), || basis_pair(x, y));
                    }
                }
            }
        }
        Err(e) => {
            c.fail(json!(e.to_string()));
            d.fail(json!(e.to_string()));
        }
    }
    out.push(c);
    out.push(d);
    out
}

/// Adds a random nonzero value to one random entry.
fn perturb(rng: &mut Rand, f: &BilinearTable, field: Field) -> (BilinearTable, Basis, Basis) {
    let basis = f.domain().basis();
    let x = basis[rng.gen_range(0..basis.len())].clone();
    let y = basis[rng.gen_range(0..basis.len())].clone();
    let n = rng.gen_range(1..=2);
    let e = random::element(rng, field, f.domain(), n);
    let mut g = f.clone();
    let v = g.get(&x, &y).expect("in domain") + e;
    g.insert(x.clone(), y.clone(), v).expect("in domain");
    (g, x, y)
}

fn theorem15(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let alg = &ctx.alg;
    let cb = cubic_box(ctx.bx());
    let mut c = Check::new("inner_extraction");
    let mut p = Check::new("perturbations_rejected");
    for _ in 0..30 {
        let lambda = random::scalar(rng, ctx.field());
        let f = BilinearTable::inner(alg, cb.clone(), &lambda);
        let r = check_biderivation(alg, &f, &cb);
        c.count("maps", 1);
        c.count("triples", r.checked);
        if let Some(fail) = &r.first_failure {
            c.fail(triple_json(fail));
        }
        match extract_inner_coefficient(alg, &f, &cb, ctx.cfg.reference_pair.clone()) {
            Ok(l) => c.expect(l == lambda, || json!({ "lambda": lambda.to_string(), "extracted": l.to_string() })),
            Err(e) => c.fail(json!(e.to_string())),
        }
        let (g, x, y) = perturb(rng, &f, ctx.field());
        let r = check_biderivation(alg, &g, &cb);
        p.count("perturbations", 1);
        p.expect(!r.passed(), || json!({ "entry": basis_pair(&x, &y), "value": g.get(&x, &y).unwrap().to_string() }));
    }
    vec![c, p]
}

fn theorem16(ctx: &Ctx, rng: &mut Rand, seed: u64) -> Vec<Check> {
    let alg = &ctx.alg;
    let bx = ctx.bx();
    let basis = bx.basis();
    let rank = ctx.rank();
    let centrals: Vec<Basis> = bx
        .t_values()
        .map(|t| Basis::new(Kind::H, GammaElement::zero(rank), t))
        .collect();
    let noncentral: Vec<Basis> = basis
        .iter()
        .filter(|b| !(b.kind == Kind::H && b.gamma.is_zero()))
        .cloned()
        .collect();
    let mut c = Check::new("round_trip");
    let mut n = Check::new("noncentral_rejected");
    let mut k = Check::new("commuting");
    for _ in 0..30 {
        let lambda = random::scalar(rng, ctx.field());
        let mut tau = lhv_core::algebra::BasisTable::new(bx.clone());
        for b in &basis {
            let m = rng.gen_range(0..=2);
            tau.insert(b.clone(), random::element_from(rng, ctx.field(), &centrals, m))
                .expect("in box");
        }
        let phi = tau.map_values(|b, v| v + &Element::basis(b).scale(&lambda));
        c.count("maps", 1);
        match check_commuting(alg, &phi, bx, seed, 4) {
            Ok(r) => {
                k.count("pairs", r.pairs);
                k.count("spot_checks", r.spot_checks);
                k.expect(r.passed(), || json!(format!("{:?}", r.first_failure)));
            }
            Err(e) => k.fail(json!(e.to_string())),
        }
        match decompose_commuting(alg, &phi, bx) {
            Ok((l, t)) => c.expect(l == lambda && t == tau, || json!({ "lambda": lambda.to_string() })),
            Err(e) => c.fail(json!(e.to_string())),
        }
        let b = basis[rng.gen_range(0..basis.len())].clone();
        let extra = random::element_from(rng, ctx.field(), &noncentral, 1);
        let mut bad = phi.clone();
        bad.insert(b.clone(), &phi.get(&b).unwrap() + &extra).unwrap();
        n.count("perturbations", 1);
        match decompose_commuting(alg, &bad, bx) {
            Err(BiderError::NonCentralResidual(_)) => {}
            other => n.fail(json!({ "entry": b.to_string(), "added": extra.to_string(), "result": format!("{other:?}") })),
        }
    }
    vec![c, k, n]
}

fn theorem18(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let alg = &ctx.alg;
    let cb = cubic_box(ctx.bx());
    let mut z = Check::new("zero_product_trivial");
    let r = check_post_lie(alg, &BilinearTable::new(cb.clone()), &cb);
    for (k, id) in r.identities.iter().enumerate() {
        z.count(&format!("identity{}_checked", k + 1), id.checked);
        if let Some(f) = &id.first_failure {
            z.fail(triple_json(f));
        }
    }
    z.expect(r.trivial, || json!("zero product reported nontrivial"));

    let mut b = Check::new("bracket_product_rejected");
    let lambda = random::nonzero_rational(rng);
    let prod = BilinearTable::inner(alg, cb.clone(), &lambda);
    let r = check_post_lie(alg, &prod, &cb);
    b.info("lambda", json!(lambda.to_string()));
    match &r.identities[0].first_failure {
        Some(f) => {
            b.info("commutativity_counterexample", basis_pair(&f.x, &f.y));
            // L(e1;0), L(2e1;0) when 2e1 fits in the box, else L(e1;0), L(0;0)
            let e = |k: i64| Basis::new(Kind::L, GammaElement::unit(ctx.rank(), 0).scale(k), 0);
            let y = if cb.contains(&e(2)) { e(2) } else { e(0) };
            b.expect(post_lie_commutative_at(&prod, &e(1), &y) == Some(false), || {
                basis_pair(&e(1), &y)
            });
        }
        None => b.fail(json!("commutativity held for a bracket product")),
    }
    vec![z, b]
}

fn lemma11(ctx: &Ctx) -> Vec<Check> {
    let mut c = Check::new("perfect");
    match check_perfect(&ctx.alg, ctx.bx()) {
        Ok(r) => {
            let basis = ctx.bx().basis();
            c.count("witnesses", r.witnesses.len() as u64);
            for b in &basis {
                let w = r.witnesses.iter().find(|w| &w.target == b);
                let ok = w.is_some_and(|w| match ctx.alg.bracket_basis(&w.left, &w.right) {
                    Some((s, z)) => z == *b && &s * &w.coeff == Scalar::one(),
                    None => false,
                });
                c.expect(ok, || json!(b.to_string()));
            }
        }
        Err(e) => c.fail(json!(e.to_string())),
    }
    vec![c]
}

fn lemma19(ctx: &Ctx) -> Vec<Check> {
    let alg = &ctx.alg;
    let basis = ctx.bx().basis();
    let mut h = Check::new("h_ideal");
    match check_h_ideal(alg, ctx.bx()) {
        Ok(n) => h.count("pairs", n),
        Err((x, y)) => h.fail(basis_pair(&x, &y)),
    }
    let mut q = Check::new("quotient_preserves_bracket");
    for x in &basis {
        for y in &basis {
            let (ex, ey) = (Element::basis(x), Element::basis(y));
            let lhs = quotient_mod_h(&alg.bracket(&ex, &ey).unwrap());
            let rhs = quotient_mod_h(&alg.bracket(&quotient_mod_h(&ex), &quotient_mod_h(&ey)).unwrap());
            q.count("pairs", 1);
            q.expect(lhs == rhs, || basis_pair(x, y));
        }
    }
    vec![h, q]
}

/// The second backend exercised by `theorem24`, with a box suited to it.
fn other_backend(cfg: &GammaConfig) -> (GammaConfig, TruncationBox) {
    if cfg.field() == Field::Rationals {
        (
            GammaConfig::quadratic_integers(2).expect("2 is square-free"),
            TruncationBox::new(vec![(-1, 1), (-1, 1)], (-1, 1), 1).expect("valid"),
        )
    } else {
        (
            GammaConfig::integers(),
            TruncationBox::new(vec![(-3, 3)], (-3, 3), 3).expect("valid"),
        )
    }
}

fn theorem24(ctx: &Ctx, rng: &mut Rand) -> Vec<Check> {
    let mut apply = Check::new("compose_then_apply");
    let mut extract = Check::new("extract_inverts_table");
    let mut assoc = Check::new("associativity");
    let mut inv = Check::new("inverse");
    let backends = [(ctx.cfg.gamma.clone(), ctx.bx().clone()), other_backend(&ctx.cfg.gamma)];
    let mut names = Vec::new();
    for (cfg, bx) in &backends {
        let alg = Algebra::new(cfg.clone());
        let basis = bx.basis();
        names.push(json!(cfg.field().to_string()));
        let mut draws: Vec<(AutomorphismParams, AutomorphismParams)> =
            (0..DRAWS).map(|_| (random::aut_params(rng, cfg), random::aut_params(rng, cfg))).collect();
        if let Some(d) = cfg.field().radicand() {
            // a fundamental unit, when it scales the lattice onto itself
            let unit = Scalar::one() + Scalar::sqrt(d);
            if cfg.scaling_group_contains(&unit).unwrap_or(false) {
                let p = &mut draws[0].0;
                p.a = unit;
                apply.info("unit_scaling", json!(p.a.to_string()));
            }
        }
        for (p1, p2) in &draws {
            apply.count("pairs", 1);
            let composed = compose_params(cfg, p1, p2);
            let Ok(c12) = composed else {
                apply.fail(json!({ "p1": params_to_json(p1), "p2": params_to_json(p2) }));
                continue;
            };
            for b in &basis {
                let x = Element::basis(b);
                let two = apply_automorphism(cfg, p1, &apply_automorphism(cfg, p2, &x).unwrap()).unwrap();
                let one = apply_automorphism(cfg, &c12, &x).unwrap();
                apply.count("basis_checks", 1);
                apply.expect(two == one, || {
                    json!({ "p1": params_to_json(p1), "p2": params_to_json(p2), "basis": b.to_string(), "lhs": element_to_json(&two) })
                });
            }
            extract.count("tables", 1);
            let back = automorphism_table(cfg, p1, bx).and_then(|t| extract_params(&alg, &t));
            extract.expect(back.as_ref() == Ok(p1), || json!({ "params": params_to_json(p1), "result": format!("{back:?}") }));
            inv.count("params", 1);
            let q = invert_params(cfg, p1).unwrap();
            let left = compose_params(cfg, &q, p1).unwrap();
            let right = compose_params(cfg, p1, &q).unwrap();
            inv.expect(left.is_identity() && right.is_identity() && invert_params(cfg, &q).unwrap() == *p1, || {
                json!({ "params": params_to_json(p1), "inverse": params_to_json(&q) })
            });
        }
        for _ in 0..20 {
            let p: Vec<_> = (0..3).map(|_| random::aut_params(rng, cfg)).collect();
            let l = compose_params(cfg, &compose_params(cfg, &p[0], &p[1]).unwrap(), &p[2]).unwrap();
            let r = compose_params(cfg, &p[0], &compose_params(cfg, &p[1], &p[2]).unwrap()).unwrap();
            assoc.count("triples", 1);
            assoc.expect(l == r, || json!(p.iter().map(params_to_json).collect::<Vec<_>>()));
        }
    }
    for c in [&mut apply, &mut extract, &mut assoc, &mut inv] {
        c.info("backends", json!(names));
    }
    vec![apply, extract, assoc, inv]
}

fn scaling(ctx: &Ctx) -> Vec<Check> {
    let q = |n| GammaConfig::new(Field::Rationals, vec![Scalar::from_int(n)]).expect("valid");
    let q2 = GammaConfig::quadratic_integers(2).expect("valid");
    let sample = TruncationBox::new(vec![(-2, 2)], (-1, 1), 2).expect("valid");

    let mut l = Check::new("lattice_isomorphism");
    let (two, three) = (q(2), q(3));
    let a = two.find_scaling(&three);
    l.info("a", json!(a.as_ref().map(Scalar::to_string)));
    l.expect(a == Some(Scalar::from_ratio(2, 3)), || json!("find_scaling(2Z, 3Z) != 2/3"));
    match isomorphism_by_scaling(&two, &three, &sample) {
        Some(iso) => {
            l.count("pairs", iso.pairs_checked);
            if let Some((x, y)) = &iso.first_failure {
                l.fail(basis_pair(x, y));
            }
        }
        None => l.fail(json!("no isomorphism found")),
    }
    // without the leading factor the same lattice map is not a homomorphism
    let bare = ScalingMap::new(&two, &three, Scalar::from_ratio(2, 3), false).expect("valid");
    let (_, fail) = bare.check(&Algebra::new(two.clone()), &Algebra::new(three.clone()), &sample);
    l.info("unscaled_map_fails_at", json!(fail.as_ref().map(|(x, y)| basis_pair(x, y))));
    l.expect(fail.is_some(), || json!("unscaled map preserved brackets"));
    let rank1_q2 = GammaConfig::new(Field::quadratic(2).expect("valid"), vec![Scalar::one()]).expect("valid");
    for (x, y) in [(&rank1_q2, &q2), (&q2, &rank1_q2), (&q(1), &q2)] {
        l.count("mismatched_configs", 1);
        l.expect(x.find_scaling(y).is_none(), || json!([x.generators().len(), y.generators().len()]));
    }

    let mut g = Check::new("scaling_group");
    let z = q(1);
    let mut accepted = Vec::new();
    for p in -12..=12i64 {
        for d in 1..=12i64 {
            let s = Scalar::from_ratio(p, d);
            if s.is_zero() || accepted.contains(&s) {
                continue;
            }
            g.count("candidates", 1);
            if z.scaling_group_contains(&s).unwrap() {
                accepted.push(s);
            }
        }
    }
    accepted.sort_by_key(|s| s.to_string());
    g.info("accepted_over_z", json!(accepted.iter().map(Scalar::to_string).collect::<Vec<_>>()));
    g.expect(accepted == [Scalar::from_int(-1), Scalar::from_int(1)], || json!("unexpected scaling group over Z"));
    let unit = Scalar::one() + Scalar::sqrt(2);
    g.expect(q2.scaling_group_contains(&unit).unwrap(), || json!("1+sqrt(2) rejected"));
    g.expect(!q2.scaling_group_contains(&Scalar::from_int(2)).unwrap(), || json!("2 accepted"));
    let own = ctx.cfg.gamma.scaling_group_sample(2);
    g.info("configured_sample", json!(own.iter().map(Scalar::to_string).collect::<Vec<_>>()));
    vec![l, g]
}
