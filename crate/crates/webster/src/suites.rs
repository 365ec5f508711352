//! Verification suites and the report format shared by the CLI and the tests.

use crate::algebra::{enumerate_basis, Algebra, AlgebraElement, GeneratorToken, NormalBasisElement, Word};
use crate::bimodule::{
    basis_element, enumerate_bimodule_basis, realize, standard, BimodCtx, BimoduleElement, BimoduleModel, BimoduleSpec,
};
use crate::field::{is_prime, FieldParams};
use crate::linalg::{rank, Echelon, Insert};
use crate::poly::{Monomial, Polynomial, Var};
use crate::rep::{act, act_word, bimodule_act, calibrate_psi2, fingerprint, window, Psi2Calibration, VnElement};
use crate::verify;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 10] =
    ["relations", "differential", "basis", "rep-oracle", "bimodules", "homs", "ses", "bb", "braid", "p-extend"];

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub p: u64,
    pub window: u32,
    pub seed: u64,
    pub checks: Vec<String>,
    pub corpus_size: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("n must be between 2 and {max}, got {0}", max = crate::poly::MAX_N)]
    BadN(usize),
    #[error("p must be an odd prime, got {0}")]
    BadP(u64),
    #[error("the window D must be at least 4, got {0}")]
    BadWindow(u32),
    #[error("unknown check {0:?}; expected one of {list}", list = SUITES.join(", "))]
    UnknownCheck(String),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 || self.n > crate::poly::MAX_N {
            return Err(ConfigError::BadN(self.n));
        }
        if self.p == 2 || !is_prime(self.p) || self.p > u32::MAX as u64 {
            return Err(ConfigError::BadP(self.p));
        }
        if self.window < 4 {
            return Err(ConfigError::BadWindow(self.window));
        }
        for c in &self.checks {
            if !SUITES.contains(&c.as_str()) {
                return Err(ConfigError::UnknownCheck(c.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub summary: String,
    pub details: Value,
}

impl CheckResult {
    fn new(name: &str, pass: bool, summary: String, details: Value) -> Self {
        CheckResult { name: name.into(), status: if pass { Status::Pass } else { Status::Fail }, summary, details }
    }

    fn skipped(name: &str, why: &str) -> Self {
        CheckResult { name: name.into(), status: Status::Skipped, summary: why.into(), details: Value::Null }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub psi2: Psi2Calibration,
    pub results: Vec<CheckResult>,
    pub pass: bool,
    /// Wall-clock seconds per check; the only non-deterministic field.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

/// Shared state for one run.
pub struct Env {
    pub n: usize,
    pub field: FieldParams,
    pub window: u32,
    pub seed: u64,
    pub corpus: usize,
    pub calibration: Psi2Calibration,
    pub alg: Arc<Algebra>,
    pub ctx: BimodCtx,
}

impl Env {
    pub fn new(n: usize, p: u64, window: u32, seed: u64, corpus: usize) -> Self {
        let field = FieldParams::new(p).expect("validated prime");
        let calibration = calibrate_psi2(n, field);
        let alg = Arc::new(Algebra::new(n, field, calibration.convention));
        let ctx = BimodCtx::new(alg.clone());
        Env { n, field, window, seed, corpus, calibration, alg, ctx }
    }

    pub fn from_config(c: &RunConfig) -> Self {
        Env::new(c.n, c.p, c.window, c.seed, c.corpus_size)
    }

    /// A generator seeded by the run seed and the suite name.
    fn rng(&self, salt: &str) -> ChaCha8Rng {
        let mut s = self.seed ^ 0x9e37_79b9_7f4a_7c15;
        for b in salt.bytes() {
            s = s.rotate_left(7) ^ b as u64;
            s = s.wrapping_mul(0x100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(s)
    }
}

/// Run the requested suites in order.
pub fn run(config: &RunConfig, timings: bool) -> Result<Report, ConfigError> {
    config.validate()?;
    let env = Env::from_config(config);
    let checks: Vec<String> = if config.checks.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { config.checks.clone() };
    let mut results = Vec::new();
    let mut times = BTreeMap::new();
    for c in &checks {
        let t = Instant::now();
        results.push(run_suite(&env, c));
        times.insert(c.clone(), (t.elapsed().as_secs_f64() * 1000.0).round() / 1000.0);
    }
    let pass = results.iter().all(|r| r.passed());
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        config: RunConfig { checks, ..config.clone() },
        psi2: env.calibration.clone(),
        results,
        pass,
        timings: timings.then_some(times),
    })
}

pub fn run_suite(env: &Env, name: &str) -> CheckResult {
    match name {
        "relations" => relations(env),
        "differential" => differential(env),
        "basis" => basis(env, env.window as i64, env.window.min(8) as i64),
        "rep-oracle" => rep_oracle(env),
        "bimodules" => bimodules(env),
        "homs" => homs(env),
        "ses" => ses(env),
        "bb" => bb(env),
        "braid" => braid(env),
        "p-extend" => p_extend(env),
        other => CheckResult::new(other, false, "unknown check".into(), Value::Null),
    }
}

// ---------------------------------------------------------------- relations

/// A defining relation instance `lhs = sum c_k w_k`.
pub struct RelationInstance {
    pub family: &'static str,
    pub lhs: Word,
    pub rhs: Vec<(u32, Word)>,
}

/// All instances of the defining relations, with the double-crossing signs
/// taken from `conv`.
pub fn relation_instances(alg: &Algebra) -> Vec<RelationInstance> {
    use GeneratorToken::*;
    let n = alg.n();
    let f = alg.field();
    let conv = alg.convention();
    let mut out = Vec::new();
    let one = 1u32;
    for k in 0..=n {
        for l in 0..=n {
            out.push(RelationInstance {
                family: "idempotents",
                lhs: vec![E(k), E(l)],
                rhs: if k == l { vec![(one, vec![E(k)])] } else { vec![] },
            });
        }
    }
    for j in 1..=n {
        for k in 0..=n {
            let target = if k + 1 == j {
                Some(j)
            } else if k == j {
                Some(j - 1)
            } else {
                None
            };
            match target {
                Some(t) => out.push(RelationInstance {
                    family: "crossing-idempotent",
                    lhs: vec![Psi(j), E(k)],
                    rhs: vec![(one, vec![E(t), Psi(j), E(k)])],
                }),
                None => out.push(RelationInstance { family: "kill-red2", lhs: vec![Psi(j), E(k)], rhs: vec![] }),
            }
        }
    }
    for j in 1..=n {
        for l in 1..=n {
            if j.abs_diff(l) > 1 {
                for k in 0..=n {
                    out.push(RelationInstance {
                        family: "far-commutation",
                        lhs: vec![Psi(j), Psi(l), E(k)],
                        rhs: vec![(one, vec![Psi(l), Psi(j), E(k)])],
                    });
                }
            }
        }
    }
    let dots: Vec<GeneratorToken> = (1..=n).map(X).chain([Y]).collect();
    for &v in &dots {
        for k in 0..=n {
            for j in 1..=n {
                if k + 1 == j || k == j {
                    out.push(RelationInstance {
                        family: "dot-slide",
                        lhs: vec![v, Psi(j), E(k)],
                        rhs: vec![(one, vec![Psi(j), v, E(k)])],
                    });
                }
            }
            for &w in &dots {
                out.push(RelationInstance { family: "central", lhs: vec![v, w, E(k)], rhs: vec![(one, vec![w, v, E(k)])] });
            }
        }
    }
    for j in 1..=n {
        for (k, sign) in [(j - 1, conv.black_left), (j, conv.black_right)] {
            let s = f.from_i64(sign as i64);
            out.push(RelationInstance {
                family: "r2-like2",
                lhs: vec![Psi(j), Psi(j), E(k)],
                rhs: vec![(s, vec![X(j), E(k)]), (f.neg(s), vec![Y, E(k)])],
            });
        }
    }
    out
}

fn reduce_combo(alg: &Algebra, rhs: &[(u32, Word)]) -> AlgebraElement {
    rhs.iter().fold(alg.zero(), |acc, (c, w)| acc.add(&alg.reduce(w).scale(*c)))
}

fn relations(env: &Env) -> CheckResult {
    let alg = &env.alg;
    let inst = relation_instances(alg);
    let d = env.window;
    let cols = window(env.n, d);
    let results: Vec<(bool, bool)> = inst
        .par_iter()
        .map(|r| {
            let canonical = alg.reduce(&r.lhs) == reduce_combo(alg, &r.rhs);
            let operator = cols.iter().all(|(k, m)| {
                let v = VnElement::from_sector(env.n, *k, Polynomial::monomial(env.n, env.field, *m, 1));
                let lhs = act_word(&r.lhs, &v);
                let mut rhs = VnElement::zero(env.n, env.field);
                for (c, w) in &r.rhs {
                    rhs = rhs.add(&act_word(w, &v).scale(*c));
                }
                lhs == rhs
            });
            (canonical, operator)
        })
        .collect();
    let mut fams: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    for (r, (c, o)) in inst.iter().zip(&results) {
        let e = fams.entry(r.family).or_default();
        e.0 += 1;
        e.1 += *c as usize;
        e.2 += *o as usize;
    }
    let pass = results.iter().all(|(c, o)| *c && *o);
    let details: Value = fams
        .iter()
        .map(|(k, (t, c, o))| (k.to_string(), json!({"instances": t, "canonical_ok": c, "operator_ok": o})))
        .collect::<serde_json::Map<_, _>>()
        .into();
    CheckResult::new(
        "relations",
        pass,
        format!("{} relation instances, canonical and operator identities on window {d}", inst.len()),
        json!({"window": d, "families": details, "psi2_convention": alg.convention()}),
    )
}

// ------------------------------------------------------------- differential

/// A random element with `terms` basis terms of degree at most `max_deg`.
pub fn random_element(alg: &Algebra, rng: &mut ChaCha8Rng, max_deg: i64, terms: usize) -> AlgebraElement {
    let p = alg.field().p();
    let mut r = alg.zero();
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_deg);
        let b = enumerate_basis(alg.n(), d);
        if let Some(e) = b.choose(rng) {
            r = r.add(&AlgebraElement::basis(alg.n(), alg.field(), e).scale(rng.gen_range(1..p)));
        }
    }
    r
}

fn differential(env: &Env) -> CheckResult {
    let alg = &env.alg;
    let d = env.window as i64;
    let mut rng = env.rng("differential");
    let pairs: Vec<(AlgebraElement, AlgebraElement)> = (0..env.corpus.max(1))
        .map(|_| (random_element(alg, &mut rng, d / 2, 2), random_element(alg, &mut rng, d / 2, 2)))
        .collect();
    let leibniz_fail = pairs
        .par_iter()
        .filter(|(a, b)| {
            let lhs = alg.differential(&alg.mul(a, b));
            let rhs = alg.mul(&alg.differential(a), b).add(&alg.mul(a, &alg.differential(b)));
            lhs != rhs
        })
        .count();
    let p = env.field.p();
    let basis: Vec<NormalBasisElement> = (0..=d).flat_map(|k| enumerate_basis(env.n, k)).collect();
    let nil_fail: Vec<String> = basis
        .par_iter()
        .filter_map(|b| {
            let mut x = AlgebraElement::basis(env.n, env.field, b);
            for _ in 0..p {
                x = alg.differential(&x);
            }
            (!x.is_zero()).then(|| b.format(env.n))
        })
        .collect();
    // d x_j = x_j^2 and d e_k = 0.
    let gen_ok = (0..=env.n).all(|k| alg.differential(&alg.e(k)).is_zero())
        && (1..=env.n).all(|j| {
            let x = alg.reduce(&[GeneratorToken::X(j), GeneratorToken::E(0)]);
            alg.differential(&x) == alg.reduce(&[GeneratorToken::X(j), GeneratorToken::X(j), GeneratorToken::E(0)])
        });
    let pass = leibniz_fail == 0 && nil_fail.is_empty() && gen_ok;
    CheckResult::new(
        "differential",
        pass,
        format!("Leibniz on {} random pairs, d^p = 0 on {} basis elements of degree <= {d}", pairs.len(), basis.len()),
        json!({
            "leibniz_pairs": pairs.len(),
            "leibniz_failures": leibniz_fail,
            "nilpotence_checked": basis.len(),
            "nilpotence_failures": nil_fail.iter().take(10).collect::<Vec<_>>(),
            "generator_values_ok": gen_ok,
        }),
    )
}

// -------------------------------------------------------------------- basis

#[derive(Clone, Debug, Serialize)]
pub struct BasisRow {
    pub degree: i64,
    pub closure: usize,
    pub enumerated: usize,
    pub fingerprints_distinct: bool,
}

/// Dimension of the span of all products of generators of degree `d`, for
/// every `d <= max`, computed by multiplying out generator by generator.
pub fn closure_dimensions(alg: &Algebra, max: i64) -> Result<Vec<usize>, String> {
    use GeneratorToken::*;
    let n = alg.n();
    let gens: Vec<(i64, AlgebraElement)> = (1..=n)
        .map(|j| (1, alg.reduce(&[Psi(j)])))
        .chain((1..=n).map(|j| (2, alg.reduce(&[X(j)]))))
        .chain([(2, alg.reduce(&[Y]))])
        .collect();
    let mut spans: Vec<Vec<AlgebraElement>> = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=max.max(0) {
        let basis = enumerate_basis(n, d);
        let index: HashMap<NormalBasisElement, u32> = basis.iter().enumerate().map(|(i, b)| (*b, i as u32)).collect();
        let cands: Vec<AlgebraElement> = if d == 0 {
            (0..=n).map(|k| alg.e(k)).collect()
        } else {
            gens.par_iter()
                .filter(|(g, _)| *g <= d)
                .flat_map_iter(|(g, ge)| spans[(d - g) as usize].iter().map(move |s| alg.mul(ge, s)).collect::<Vec<_>>())
                .collect()
        };
        let mut ech = Echelon::new(alg.field(), basis.len().max(1));
        let mut kept = Vec::new();
        for c in cands {
            let mut v = Vec::new();
            for (b, x) in c.terms() {
                let i = *index.get(&b).ok_or_else(|| format!("product left the enumerated basis in degree {d}"))?;
                v.push((i, x));
            }
            v.sort();
            if let Insert::Pivot(_) = ech.insert(&v) {
                kept.push(c);
            }
        }
        dims.push(kept.len());
        spans.push(kept);
    }
    Ok(dims)
}

/// Whether the basis elements of degree `d` have pairwise distinct
/// fingerprints on the window `d + margin`.
pub fn fingerprints_distinct(alg: &Algebra, d: i64, margin: u32) -> bool {
    let basis = enumerate_basis(alg.n(), d);
    let w = d as u32 + margin;
    let fps: Vec<_> =
        basis.par_iter().map(|b| fingerprint(&AlgebraElement::basis(alg.n(), alg.field(), b), w).entries).collect();
    let mut seen = HashSet::new();
    fps.into_iter().all(|f| !f.is_empty() && seen.insert(f))
}

#[derive(Clone, Debug, Serialize)]
pub struct BimodBasisRow {
    pub module: String,
    pub degree: i64,
    pub closure: usize,
    pub enumerated: usize,
    pub independent: bool,
}

/// The bimodules with explicit basis families.
pub fn family_specs(n: usize) -> Vec<BimoduleSpec> {
    let mut v: Vec<BimoduleSpec> = (1..n).map(BimoduleSpec::wi).collect();
    for i in 1..n.saturating_sub(1) {
        v.push(BimoduleSpec::wii1(i));
        v.push(standard::triple_spec(i, true));
    }
    v
}

/// Compare the explicit family against the closure dimension and check that
/// the family members are independent elements of the bimodule.
pub fn bimodule_basis_row(model: &BimoduleModel, d: i64) -> BimodBasisRow {
    let idx = enumerate_bimodule_basis(model, d);
    let amb = model.ambient();
    let mut per_block: BTreeMap<(usize, usize), Vec<_>> = BTreeMap::new();
    let mut contained = true;
    for i in &idx {
        let (ts, a) = realize(model, i);
        contained &= model.structure().contains(ts.0, ts.1, &a);
        per_block.entry(ts).or_default().push(a);
    }
    let independent = contained
        && per_block.iter().all(|(&(t, s), v)| match model.polydeg_for(t, s, d) {
            Some(pd) => {
                let vecs: Vec<_> = v.iter().map(|a| amb.to_sparse(a, pd)).collect();
                rank(model.field(), amb.index(pd).len(), &vecs) == v.len()
            }
            None => false,
        });
    BimodBasisRow { module: model.spec().name(), degree: d, closure: model.dim(d), enumerated: idx.len(), independent }
}

pub fn basis(env: &Env, max_alg: i64, max_bimod: i64) -> CheckResult {
    let alg = &env.alg;
    let closure = match closure_dimensions(alg, max_alg) {
        Ok(c) => c,
        Err(e) => return CheckResult::new("basis", false, e, Value::Null),
    };
    let rows: Vec<BasisRow> = (0..=max_alg)
        .map(|d| BasisRow {
            degree: d,
            closure: closure[d as usize],
            enumerated: enumerate_basis(env.n, d).len(),
            fingerprints_distinct: fingerprints_distinct(alg, d, 4),
        })
        .collect();
    let mut brows = Vec::new();
    for spec in family_specs(env.n) {
        let model = match env.ctx.model(&spec) {
            Ok(m) => m,
            Err(e) => return CheckResult::new("basis", false, e.to_string(), Value::Null),
        };
        let r: Vec<BimodBasisRow> = (0..=max_bimod).into_par_iter().map(|d| bimodule_basis_row(&model, d)).collect();
        brows.extend(r);
    }
    let pass = rows.iter().all(|r| r.closure == r.enumerated && r.fingerprints_distinct)
        && brows.iter().all(|r| r.closure == r.enumerated && r.independent);
    CheckResult::new(
        "basis",
        pass,
        format!("algebra degrees <= {max_alg} (separation margin 4), bimodule families degrees <= {max_bimod}"),
        json!({"separation_margin": 4, "algebra": rows, "bimodules": brows}),
    )
}

// --------------------------------------------------------------- rep-oracle

fn vn_basis(env: &Env, d: u32) -> Vec<VnElement> {
    window(env.n, d)
        .into_iter()
        .map(|(k, m)| VnElement::from_sector(env.n, k, Polynomial::monomial(env.n, env.field, m, 1)))
        .collect()
}

/// A random word of generators (no idempotents) of length at most `len`.
fn random_word(n: usize, rng: &mut ChaCha8Rng, len: usize) -> Word {
    use GeneratorToken::*;
    let l = rng.gen_range(0..=len);
    (0..l)
        .map(|_| match rng.gen_range(0..3) {
            0 => Psi(rng.gen_range(1..=n)),
            1 => X(rng.gen_range(1..=n)),
            _ => Y,
        })
        .collect()
}

fn rep_oracle(env: &Env) -> CheckResult {
    let alg = &env.alg;
    let d = env.window;
    let mut rng = env.rng("rep-oracle");
    let vs = vn_basis(env, d);
    let pairs: Vec<_> = (0..env.corpus.clamp(10, 60))
        .map(|_| (random_element(alg, &mut rng, d as i64 / 2, 2), random_element(alg, &mut rng, d as i64 / 2, 2)))
        .collect();
    let hom_fail = pairs
        .par_iter()
        .filter(|(a, b)| {
            let ab = alg.mul(a, b);
            !vs.iter().all(|v| act(&ab, v) == act(a, &act(b, v)))
        })
        .count();
    let unit_ok = fingerprint(&alg.one(), d).entries.len() == vs.len();

    // phi / gamma: the action of a m b equals rho(a) phi(m) rho(b).
    let mut bimod = Vec::new();
    for spec in family_specs(env.n) {
        let Ok(model) = env.ctx.model(&spec) else { continue };
        let elems: Vec<BimoduleElement> = (0..=4)
            .flat_map(|k| enumerate_bimodule_basis(&model, k))
            .map(|i| basis_element(&model, &i))
            .collect();
        let trials: Vec<(BimoduleElement, Word, Word)> = (0..env.corpus.clamp(10, 40))
            .filter_map(|_| {
                let m = elems.choose(&mut rng).cloned()?;
                Some((m, random_word(env.n, &mut rng, 2), random_word(env.n, &mut rng, 2)))
            })
            .collect();
        let vs4 = vn_basis(env, d.min(6));
        let fails = trials
            .par_iter()
            .filter(|(m, l, r)| {
                let a = alg.reduce(l);
                let b = alg.reduce(r);
                let amb = model.left_act(&a, &model.right_act(m, &b));
                !vs4.iter().all(|v| bimodule_act(&model, &amb, v) == act(&a, &bimodule_act(&model, m, &act(&b, v))))
            })
            .count();
        bimod.push(json!({"module": spec.name(), "trials": trials.len(), "failures": fails}));
    }
    let bimod_ok = bimod.iter().all(|r| r["failures"] == 0);

    // Braid relation of divided differences on x-monomials of degree <= window.
    let mut dd_ok = true;
    for i in 1..env.n.saturating_sub(1) {
        for t in 0..=d / 2 {
            for m in Monomial::all_of_total(env.n, false, t) {
                let f = Polynomial::monomial(env.n, env.field, m, 1);
                let a = f.divided_difference(i).divided_difference(i + 1).divided_difference(i);
                let b = f.divided_difference(i + 1).divided_difference(i).divided_difference(i + 1);
                dd_ok &= a == b;
            }
        }
    }
    let cal = &env.calibration;
    let pass = hom_fail == 0 && unit_ok && bimod_ok && dd_ok && cal.convention.black_left != 0 && cal.convention.black_right != 0;
    CheckResult::new(
        "rep-oracle",
        pass,
        format!("rho multiplicative on {} pairs, bimodule actions on window {}", pairs.len(), d.min(6)),
        json!({
            "window": d,
            "homomorphism_pairs": pairs.len(),
            "homomorphism_failures": hom_fail,
            "unit_is_identity": unit_ok,
            "bimodule_actions": bimod,
            "divided_difference_braid": dd_ok,
            "psi2_calibration": cal,
        }),
    )
}

// ---------------------------------------------------------------- bimodules

fn bimodules(env: &Env) -> CheckResult {
    let alg = &env.alg;
    let p = env.field.p();
    let d = env.window.min(6) as i64;
    let mut rng = env.rng("bimodules");
    let mut specs = family_specs(env.n);
    specs.extend((1..env.n).map(|i| BimoduleSpec::wi(i).twisted(-1).shifted(-2)));
    specs.extend((1..env.n).map(|i| BimoduleSpec::wi(i).twisted(1).shifted(2)));
    let mut rows = Vec::new();
    let mut pass = true;
    for spec in specs {
        let model = match env.ctx.model(&spec) {
            Ok(m) => m,
            Err(e) => return CheckResult::new("bimodules", false, e.to_string(), Value::Null),
        };
        let elems: Vec<BimoduleElement> = (model.spec().total_shift() as i64 - 2..=d)
            .flat_map(|k| enumerate_bimodule_basis(&model, k))
            .map(|i| basis_element(&model, &i))
            .collect();
        let nil_fail = elems
            .par_iter()
            .filter(|m| {
                let mut x = (*m).clone();
                for _ in 0..p {
                    x = model.differential(&x);
                }
                !x.is_zero()
            })
            .count();
        let trials: Vec<(BimoduleElement, AlgebraElement, AlgebraElement)> = (0..env.corpus.clamp(10, 40))
            .filter_map(|_| {
                let m = elems.choose(&mut rng).cloned()?;
                Some((m, random_element(alg, &mut rng, 2, 1), random_element(alg, &mut rng, 2, 1)))
            })
            .collect();
        let leibniz_fail = trials
            .par_iter()
            .filter(|(m, a, b)| {
                let amb = model.left_act(a, &model.right_act(m, b));
                let lhs = model.differential(&amb);
                let rhs = model
                    .left_act(&alg.differential(a), &model.right_act(m, b))
                    .add(&model.left_act(a, &model.right_act(&model.differential(m), b)))
                    .add(&model.left_act(a, &model.right_act(m, &alg.differential(b))));
                lhs != rhs
            })
            .count();
        let closed = elems.iter().all(|m| model.contains(&model.differential(m)));
        // The generator has differential twist * (x_i + x_{i+1}) * generator.
        let gen_ok = match &spec.kind {
            crate::bimodule::BimoduleKind::Wi(i) => {
                let g = model.generator();
                let e1 = Polynomial::var(env.n, env.field, Var::X(*i)).add(&Polynomial::var(env.n, env.field, Var::X(i + 1)));
                let want = model.left_act(&alg.poly(&e1.scale(env.field.from_i64(spec.twist as i64))), &g);
                model.differential(&g) == want
            }
            _ => model.differential(&model.generator()).is_zero(),
        };
        pass &= nil_fail == 0 && leibniz_fail == 0 && closed && gen_ok;
        rows.push(json!({
            "module": spec.name(),
            "elements": elems.len(),
            "nilpotence_failures": nil_fail,
            "leibniz_trials": trials.len(),
            "leibniz_failures": leibniz_fail,
            "differential_closed": closed,
            "generator_differential_ok": gen_ok,
        }));
    }
    CheckResult::new("bimodules", pass, format!("d^p = 0, Leibniz and twisted generator on degrees <= {d}"), json!({"modules": rows}))
}

// --------------------------------------------------------------------- homs

fn homs(env: &Env) -> CheckResult {
    let ctx = &env.ctx;
    let mut rows = Vec::new();
    let mut record = |name: String, m: Result<crate::bimodule::maps::BimoduleMap, crate::bimodule::BimodError>, want_dg: bool| {
        let (lin, dg) = match &m {
            Ok(m) => (m.check_bimodule_map().is_ok(), m.check_dg().is_ok()),
            Err(_) => (false, false),
        };
        let ok = lin && dg == want_dg;
        rows.push(json!({"map": name, "bimodule_map": lin, "commutes_with_d": dg, "expected_to_commute": want_dg, "ok": ok}));
    };
    for i in 1..env.n {
        record(format!("epsilon{i}"), standard::epsilon(ctx, i), true);
        record(format!("iota{i}"), standard::iota(ctx, i), true);
    }
    let mut identities = Vec::new();
    let mut pass = true;
    for i in 1..env.n.saturating_sub(1) {
        for of in [true, false] {
            let tag = if of { format!("{i},{}", i + 1) } else { format!("{},{i}", i + 1) };
            record(format!("alpha{tag}"), standard::alpha(ctx, i, of), true);
            record(format!("pi{tag}"), standard::pi(ctx, i, of), true);
            record(format!("sigma{tag}"), standard::sigma(ctx, i, of), false);
            record(format!("tau{tag}"), standard::tau(ctx, i, of), false);
            if let (Ok(a), Ok(p), Ok(s), Ok(t)) =
                (standard::alpha(ctx, i, of), standard::pi(ctx, i, of), standard::sigma(ctx, i, of), standard::tau(ctx, i, of))
            {
                let sa = s.compose(&a) == crate::bimodule::maps::BimoduleMap::identity(a.src().clone());
                let pt = p.compose(&t) == crate::bimodule::maps::BimoduleMap::identity(p.tgt().clone());
                pass &= sa && pt;
                identities.push(json!({"order": tag, "sigma_alpha_id": sa, "pi_tau_id": pt}));
            } else {
                pass = false;
            }
        }
    }
    pass &= rows.iter().all(|r| r["ok"] == true);
    // epsilon o iota, ignoring the twist on the middle term.
    let mut eps_iota = Vec::new();
    for i in 1..env.n {
        if let (Ok(e), Ok(io)) = (standard::epsilon(ctx, i), standard::iota(ctx, i)) {
            let e2 = e.retarget(io.tgt().clone(), e.tgt().clone());
            eps_iota.push(json!({"i": i, "epsilon_iota_zero": e2.compose(&io).is_zero()}));
        }
    }
    CheckResult::new(
        "homs",
        pass,
        "standard maps are bimodule maps; epsilon, iota, alpha, pi commute with d; the splittings do not".into(),
        json!({"maps": rows, "splitting_identities": identities, "epsilon_after_iota": eps_iota}),
    )
}

// ----------------------------------------------------------------- ses / bb

fn ses(env: &Env) -> CheckResult {
    if env.n < 3 {
        return CheckResult::skipped("ses", "needs n >= 3");
    }
    let mut reps = Vec::new();
    for i in 1..=env.n - 2 {
        for of in [true, false] {
            match verify::verify_ses(&env.ctx, i, of, env.window as i64) {
                Ok(r) => reps.push(r),
                Err(e) => return CheckResult::new("ses", false, e.to_string(), Value::Null),
            }
        }
    }
    let pass = reps.iter().all(|r| r.pass);
    CheckResult::new("ses", pass, format!("exactness and splitting in degrees <= {}", env.window), json!(reps))
}

fn bb(env: &Env) -> CheckResult {
    let mut reps = Vec::new();
    for i in 1..env.n {
        match verify::verify_bb(&env.ctx, i, env.window as i64) {
            Ok(r) => reps.push(r),
            Err(e) => return CheckResult::new("bb", false, e.to_string(), Value::Null),
        }
    }
    let pass = reps.iter().all(|r| r.pass);
    CheckResult::new("bb", pass, format!("W_i W_i = W_i + W_i^{{e1}}{{2}} in degrees <= {}", env.window), json!(reps))
}

// -------------------------------------------------------------------- braid

fn braid(env: &Env) -> CheckResult {
    let w = env.window as i64;
    let mut reps = Vec::new();
    for i in 1..env.n {
        for pf in [false, true] {
            reps.push(verify::verify_inverse(&env.ctx, i, pf, w));
        }
    }
    for i in 1..env.n {
        for j in i + 2..env.n {
            reps.push(verify::verify_far_comm(&env.ctx, i, j, w));
        }
    }
    for i in 1..env.n.saturating_sub(1) {
        reps.push(verify::verify_braid_relation(&env.ctx, i, w));
    }
    let pass = reps.iter().all(|r| r.pass);
    CheckResult::new("braid", pass, format!("{} relations certified with re-verified homotopies", reps.len()), json!(reps))
}

fn p_extend(env: &Env) -> CheckResult {
    let p = env.field.p();
    let mut rng = env.rng("p-extend");
    let functor = match verify::verify_p_extend(&env.ctx, p, env.corpus.clamp(20, 200), &mut rng) {
        Ok(r) => r,
        Err(e) => return CheckResult::new("p-extend", false, e, Value::Null),
    };
    let mut certs = Vec::new();
    for i in 1..env.n {
        for pf in [false, true] {
            let name = if pf { format!("T{i}' T{i} ~ Id") } else { format!("T{i} T{i}' ~ Id") };
            match verify::inverse_equivalence(&env.ctx, i, pf) {
                Ok((_, eq)) => certs.push(verify::p_extend_certificate(&env.ctx, &name, &eq, p, env.window as i64)),
                Err(e) => return CheckResult::new("p-extend", false, e, Value::Null),
            }
        }
    }
    let pass = functor.pass && certs.iter().all(|r| r.pass);
    CheckResult::new(
        "p-extend",
        pass,
        format!("P(Sigma_i) = T_i, {} null-homotopic maps preserved, {} p-certificates", functor.preserved, certs.len()),
        json!({"functor": functor, "certificates": certs}),
    )
}
