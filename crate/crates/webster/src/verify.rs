//! Verification of the bimodule decompositions and of the braid relations
//! for the complexes `Sigma_i`, `Sigma_i'` and their p-extensions.

use crate::bimodule::maps::BimoduleMap;
use crate::bimodule::{standard, BimodCtx, BimodError, BimoduleKind, BimoduleModel, BimoduleSpec};
use crate::homological::*;
use crate::linalg::{rank, SparseVec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn check_index(ctx: &BimodCtx, i: usize) -> Result<(), BimodError> {
    if i >= 1 && i < ctx.n() {
        Ok(())
    } else {
        Err(BimodError::IndexOutOfRange { index: i, n: ctx.n() })
    }
}

fn two_term(lo: i32, d: BimoduleMap) -> Complex {
    let mut m = SumMap::zero(vec![d.src().clone()], vec![d.tgt().clone()]);
    m.set(0, 0, d.clone());
    Complex::new(Regime::Ordinary, lo, vec![vec![d.src().clone()], vec![d.tgt().clone()]], vec![m])
}

/// `W_i -> W` in degrees -1, 0.
pub fn build_sigma(ctx: &BimodCtx, i: usize) -> Result<Complex, BimodError> {
    check_index(ctx, i)?;
    Ok(two_term(-1, standard::epsilon(ctx, i)?))
}

/// `W -> W_i^{-e1}{-2}` in degrees 0, 1.
pub fn build_sigma_prime(ctx: &BimodCtx, i: usize) -> Result<Complex, BimodError> {
    check_index(ctx, i)?;
    Ok(two_term(0, standard::iota(ctx, i)?))
}

pub fn identity_complex(ctx: &BimodCtx) -> Result<Complex, BimodError> {
    Ok(Complex::single(Regime::Ordinary, ctx.model(&BimoduleSpec::w())?))
}

/// Tensor product of a word in `Sigma_i` (positive index) and `Sigma_i'`
/// (negative index).
pub fn braid_word(ctx: &BimodCtx, word: &[i32]) -> Result<Complex, BimodError> {
    let mut c = identity_complex(ctx)?;
    for &g in word {
        let s = if g > 0 { build_sigma(ctx, g as usize)? } else { build_sigma_prime(ctx, (-g) as usize)? };
        c = tensor_complexes(ctx, &c, &s)?;
    }
    Ok(c)
}

/// The displayed p-complex `W_i = ... = W_i -> W`.
pub fn build_t(ctx: &BimodCtx, i: usize, p: u32) -> Result<Complex, BimodError> {
    check_index(ctx, i)?;
    let e = standard::epsilon(ctx, i)?;
    let wi = e.src().clone();
    let mut terms = vec![vec![wi.clone()]; p as usize - 1];
    terms.push(vec![e.tgt().clone()]);
    let mut diffs = vec![SumMap::identity(vec![wi.clone()]); p as usize - 2];
    let mut last = SumMap::zero(vec![wi], vec![e.tgt().clone()]);
    last.set(0, 0, e);
    diffs.push(last);
    Ok(Complex::new(Regime::P(p), 1 - p as i32, terms, diffs))
}

/// The displayed p-complex `W -> W_i^{-e1}{-2} = ... = W_i^{-e1}{-2}`.
pub fn build_t_prime(ctx: &BimodCtx, i: usize, p: u32) -> Result<Complex, BimodError> {
    check_index(ctx, i)?;
    let io = standard::iota(ctx, i)?;
    let t = io.tgt().clone();
    let mut terms = vec![vec![io.src().clone()]];
    terms.extend(std::iter::repeat_n(vec![t.clone()], p as usize - 1));
    let mut first = SumMap::zero(vec![io.src().clone()], vec![t.clone()]);
    first.set(0, 0, io);
    let mut diffs = vec![first];
    diffs.extend(std::iter::repeat_n(SumMap::identity(vec![t]), p as usize - 2));
    Ok(Complex::new(Regime::P(p), 0, terms, diffs))
}

/// Structural equality: same summands and identical differentials.
pub fn same_complex(a: &Complex, b: &Complex) -> bool {
    a.regime == b.regime
        && a.lo == b.lo
        && a.terms.len() == b.terms.len()
        && a.degrees().all(|k| {
            let (ta, tb) = (a.term(k), b.term(k));
            ta.len() == tb.len()
                && ta.iter().zip(&tb).all(|(x, y)| x.spec() == y.spec())
                && (0..a.d(k).tgt.len())
                    .all(|r| (0..ta.len()).all(|c| a.d(k).get(r, c).map(|m| m.images()) == b.d(k).get(r, c).map(|m| m.images())))
        })
}

fn tensor_parts(spec: &BimoduleSpec) -> Option<(Vec<BimoduleSpec>, i32)> {
    match &spec.kind {
        BimoduleKind::Tensor(parts) if spec.twist == 0 => Some((parts.clone(), spec.shift)),
        _ => None,
    }
}

/// The decomposition `W_a W_a = W_a (+) W_a^{e1}{2}` (up to twists and
/// shifts) of a two-factor summand: components of `u` and of its inverse.
pub fn bb_split(ctx: &BimodCtx, obj: &Arc<BimoduleModel>) -> Option<(Vec<BimoduleMap>, Vec<BimoduleMap>)> {
    let (parts, shift) = tensor_parts(obj.spec())?;
    let [x, y] = parts.as_slice() else { return None };
    let (BimoduleKind::Wi(a), BimoduleKind::Wi(b)) = (&x.kind, &y.kind) else { return None };
    if a != b {
        return None;
    }
    let x = x.clone().shifted(shift);
    let collapse = if y.twist == 0 {
        standard::collapse_second(ctx, &x, y).ok()?
    } else if x.twist == 0 {
        standard::collapse_first(ctx, &x, y).ok()?
    } else {
        return None;
    };
    let mid = standard::middle_demazure(ctx, &x, y).ok()?;
    let us = vec![collapse.retarget(obj.clone(), collapse.tgt().clone()), mid.retarget(obj.clone(), mid.tgt().clone())];
    let vs: Option<Vec<_>> = (0..2).map(|j| right_inverse(ctx, &us, j)).collect();
    Some((us, vs?))
}

/// The splitting `W_a W_b W_a = W_{i,i+1} (+) W_a^{e1}{2}` through the
/// non-DG maps `sigma` and `tau`.
pub fn ses_split(ctx: &BimodCtx, obj: &Arc<BimoduleModel>) -> Option<(Vec<BimoduleMap>, Vec<BimoduleMap>)> {
    let (parts, shift) = tensor_parts(obj.spec())?;
    if shift != 0 || parts.iter().any(|p| p.twist != 0 || p.shift != 0) {
        return None;
    }
    let [x, y, z] = parts.as_slice() else { return None };
    let (BimoduleKind::Wi(a), BimoduleKind::Wi(b), BimoduleKind::Wi(c)) = (&x.kind, &y.kind, &z.kind) else {
        return None;
    };
    if a != c || a.abs_diff(*b) != 1 {
        return None;
    }
    let i = (*a).min(*b);
    let of = a < b;
    let us = vec![standard::sigma(ctx, i, of).ok()?, standard::pi(ctx, i, of).ok()?];
    let vs = vec![standard::alpha(ctx, i, of).ok()?, standard::tau(ctx, i, of).ok()?];
    Some((us, vs))
}

/// Split every decomposable summand; `ses` also allows the non-DG splitting.
pub fn split_all(ctx: &BimodCtx, cx: &Arc<Complex>, ses: bool) -> Equivalence {
    let mut eq = Equivalence::identity(cx);
    loop {
        let cur = eq.tgt.clone();
        let mut step = None;
        'search: for k in cur.degrees() {
            for (idx, o) in cur.term(k).iter().enumerate() {
                let parts = bb_split(ctx, o).or_else(|| if ses { ses_split(ctx, o) } else { None });
                if let Some((us, vs)) = parts {
                    let (u, v) = split_summand(&cur.term(k), idx, &us, &vs);
                    step = Some(substitute(&cur, k, &u, &v));
                    break 'search;
                }
            }
        }
        match step {
            Some(s) => eq = eq.then(&s),
            None => return eq,
        }
    }
}

/// Split then eliminate.
pub fn simplify(ctx: &BimodCtx, cx: &Arc<Complex>, ses: bool) -> Equivalence {
    let a = split_all(ctx, cx, ses);
    let b = reduce(ctx, &a.tgt);
    a.then(&b)
}

#[derive(Clone, Debug, Serialize)]
pub struct DimRow {
    pub degree: i64,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BbReport {
    pub i: usize,
    pub lhs: String,
    pub rhs: Vec<String>,
    pub dims: Vec<DimRow>,
    pub dims_agree: bool,
    pub iso_dg: bool,
    pub inverse_ok: bool,
    pub pass: bool,
}

/// Degreewise dimensions of `W_i W_i` against `W_i (+) W_i^{e1}{2}`, and the
/// explicit DG isomorphism between them.
pub fn verify_bb(ctx: &BimodCtx, i: usize, window: i64) -> Result<BbReport, BimodError> {
    check_index(ctx, i)?;
    let lhs = ctx.model(&BimoduleSpec::tensor(vec![BimoduleSpec::wi(i), BimoduleSpec::wi(i)]))?;
    let (us, vs) = bb_split(ctx, &lhs).ok_or(BimodError::Mismatch)?;
    let dims: Vec<DimRow> = (0..=window)
        .map(|d| DimRow { degree: d, lhs: lhs.dim(d), rhs: us.iter().map(|u| u.tgt().dim(d)).sum() })
        .collect();
    let dims_agree = dims.iter().all(|r| r.lhs == r.rhs);
    let iso_dg = us.iter().chain(&vs).all(|m| m.check_dg().is_ok() && m.check_bimodule_map().is_ok());
    let id = BimoduleMap::identity(lhs.clone());
    let vu = vs[0].compose(&us[0]).add(&vs[1].compose(&us[1]));
    let mut inverse_ok = vu == id;
    for (a, u) in us.iter().enumerate() {
        for (b, v) in vs.iter().enumerate() {
            let uv = u.compose(v);
            let want = if a == b { BimoduleMap::identity(u.tgt().clone()) } else { BimoduleMap::zero(v.src().clone(), u.tgt().clone(), 0) };
            inverse_ok &= uv == want;
        }
    }
    Ok(BbReport {
        i,
        lhs: lhs.spec().name(),
        rhs: us.iter().map(|u| u.tgt().spec().name()).collect(),
        dims,
        dims_agree,
        iso_dg,
        inverse_ok,
        pass: dims_agree && iso_dg && inverse_ok,
    })
}

/// Matrix of a map in internal degree `d`, as columns over the greedy basis
/// of the source and ambient coordinates of the target.
fn degree_matrix(m: &BimoduleMap, d: i64) -> (Vec<SparseVec>, usize) {
    let src = m.src();
    let tgt = m.tgt();
    let amb = tgt.ambient();
    let mut offsets = BTreeMap::new();
    let mut total = 0usize;
    for (t, s) in tgt.blocks() {
        if let Some(pd) = tgt.polydeg_for(t, s, d + m.degree() as i64) {
            offsets.insert((t, s), (total, pd));
            total += amb.index(pd).len();
        }
    }
    let cols = src
        .generic_basis(d)
        .into_iter()
        .map(|(t, s, g, mono)| {
            let a = src.structure().basis_element(t, s, g, &mono);
            let img = m.apply_amb(&a);
            match offsets.get(&(t, s)) {
                Some(&(off, pd)) if !img.is_zero() => {
                    amb.to_sparse(&img, pd).into_iter().map(|(c, v)| (c + off as u32, v)).collect()
                }
                _ => vec![],
            }
        })
        .collect();
    (cols, total)
}

#[derive(Clone, Debug, Serialize)]
pub struct SesRow {
    pub degree: i64,
    pub dim_sub: usize,
    pub dim_mid: usize,
    pub dim_quot: usize,
    pub rank_alpha: usize,
    pub rank_pi: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SesReport {
    pub i: usize,
    pub outer_first: bool,
    pub rows: Vec<SesRow>,
    pub exact: bool,
    pub alpha_dg: bool,
    pub pi_dg: bool,
    pub pi_alpha_zero: bool,
    pub sigma_alpha_id: bool,
    pub pi_tau_id: bool,
    pub sigma_tau_zero: bool,
    pub splitting_complete: bool,
    pub splitting_fails_dg: bool,
    pub pass: bool,
}

/// Exactness of `0 -> W_{i,i+1} -> W_a W_b W_a -> W_a^{e1}{2} -> 0` by rank
/// conditions in every degree up to `window`, and the bimodule splitting.
pub fn verify_ses(ctx: &BimodCtx, i: usize, outer_first: bool, window: i64) -> Result<SesReport, BimodError> {
    if i < 1 || i + 2 > ctx.n() {
        return Err(BimodError::IndexOutOfRange { index: i, n: ctx.n() });
    }
    let a = standard::alpha(ctx, i, outer_first)?;
    let p = standard::pi(ctx, i, outer_first)?;
    let s = standard::sigma(ctx, i, outer_first)?;
    let t = standard::tau(ctx, i, outer_first)?;
    let f = ctx.field();
    let rows: Vec<SesRow> = (0..=window)
        .map(|d| {
            let (ca, na) = degree_matrix(&a, d);
            let (cp, np) = degree_matrix(&p, d);
            SesRow {
                degree: d,
                dim_sub: a.src().dim(d),
                dim_mid: a.tgt().dim(d),
                dim_quot: p.tgt().dim(d),
                rank_alpha: rank(f, na, &ca),
                rank_pi: rank(f, np, &cp),
            }
        })
        .collect();
    let pi_alpha_zero = p.compose(&a).is_zero();
    // With pi o alpha = 0, injectivity, surjectivity and dim ker pi = rank alpha give exactness.
    let exact = pi_alpha_zero
        && rows.iter().all(|r| r.rank_alpha == r.dim_sub && r.rank_pi == r.dim_quot && r.dim_mid - r.rank_pi == r.rank_alpha);
    let id_mid = BimoduleMap::identity(a.tgt().clone());
    let sigma_alpha_id = s.compose(&a) == BimoduleMap::identity(a.src().clone());
    let pi_tau_id = p.compose(&t) == BimoduleMap::identity(p.tgt().clone());
    let sigma_tau_zero = s.compose(&t).is_zero();
    let splitting_complete = a.compose(&s).add(&t.compose(&p)) == id_mid;
    let splitting_fails_dg = s.check_dg().is_err() || t.check_dg().is_err();
    let alpha_dg = a.check_dg().is_ok() && a.check_bimodule_map().is_ok();
    let pi_dg = p.check_dg().is_ok() && p.check_bimodule_map().is_ok();
    let pass = exact && alpha_dg && pi_dg && sigma_alpha_id && pi_tau_id && sigma_tau_zero && splitting_complete && splitting_fails_dg;
    Ok(SesReport {
        i,
        outer_first,
        rows,
        exact,
        alpha_dg,
        pi_dg,
        pi_alpha_zero,
        sigma_alpha_id,
        pi_tau_id,
        sigma_tau_zero,
        splitting_complete,
        splitting_fails_dg,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSize {
    pub f: usize,
    pub g: usize,
    pub h_src: usize,
    pub h_tgt: usize,
}

fn size(m: &GradedMap) -> usize {
    m.comps.values().map(|s| s.nonzero_entries()).sum()
}

fn cert_size(eq: &Equivalence) -> CertificateSize {
    CertificateSize { f: size(&eq.f), g: size(&eq.g), h_src: size(&eq.h_src), h_tgt: size(&eq.h_tgt) }
}

/// An isomorphism in the relative homotopy category: either a single
/// equivalence `lhs -> rhs` whose maps both commute with the p-differential,
/// or a roof `lhs <- apex -> rhs` of equivalences whose forward maps commute
/// with it.
#[derive(Clone)]
pub enum Certificate {
    Direct(Box<Equivalence>),
    Roof { left: Box<Equivalence>, right: Box<Equivalence> },
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerRow {
    pub degree: i64,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidReport {
    pub relation: String,
    pub n: usize,
    pub p: u32,
    pub regime: String,
    pub homotopy_formula: String,
    pub window: i64,
    pub lhs_terms: BTreeMap<i32, Vec<String>>,
    pub rhs_terms: BTreeMap<i32, Vec<String>>,
    /// Euler characteristic of each side in every internal degree of the window
    /// (ordinary complexes only).
    pub euler: Vec<EulerRow>,
    pub certificate_kind: Option<String>,
    pub apex_terms: Option<BTreeMap<i32, Vec<String>>>,
    pub certificate: Vec<CertificateSize>,
    pub pass: bool,
    pub failure: Option<String>,
}

fn regime_name(r: Regime) -> (String, String) {
    match r {
        Regime::Ordinary => ("ordinary".into(), "f = d h + h d".into()),
        Regime::P(p) => (format!("p-complex (p={p})"), "f = sum_{a+b=p-1} d^a h d^b".into()),
    }
}

fn euler_rows(a: &Complex, b: &Complex, window: i64) -> Vec<EulerRow> {
    if a.regime != Regime::Ordinary {
        return vec![];
    }
    (-window..=window).map(|d| EulerRow { degree: d, lhs: a.euler(d), rhs: b.euler(d) }).collect()
}

/// Check one equivalence: the forward map commutes with the p-differential
/// (and the backward map too if `g_dg`), both are chain maps, both
/// homotopies are re-verified by substitution, and a second pair of
/// homotopies is solved independently.
pub fn certify(ctx: &BimodCtx, eq: &Equivalence, g_dg: bool) -> Result<(), String> {
    eq.f.check_dg().map_err(|e| format!("f not DG: {e}"))?;
    if g_dg {
        eq.g.check_dg().map_err(|e| format!("g not DG: {e}"))?;
    }
    eq.verify()?;
    let gf = eq.g.compose(&eq.f).sub(&GradedMap::identity(&eq.src));
    find_homotopy(ctx, &gf).ok_or("no homotopy found for g f - 1")?;
    let fg = eq.f.compose(&eq.g).sub(&GradedMap::identity(&eq.tgt));
    find_homotopy(ctx, &fg).ok_or("no homotopy found for f g - 1")?;
    Ok(())
}

fn report(
    relation: &str,
    ctx: &BimodCtx,
    lhs: &Complex,
    rhs: &Complex,
    window: i64,
    cert: Result<Certificate, String>,
) -> BraidReport {
    let (regime, formula) = regime_name(lhs.regime);
    let euler = euler_rows(lhs, rhs, window);
    let mut r = BraidReport {
        relation: relation.into(),
        n: ctx.n(),
        p: ctx.field().p(),
        regime,
        homotopy_formula: formula,
        window,
        lhs_terms: lhs.describe(),
        rhs_terms: rhs.describe(),
        certificate_kind: None,
        apex_terms: None,
        certificate: vec![],
        pass: false,
        failure: None,
        euler,
    };
    let cert = match cert {
        Ok(c) => c,
        Err(e) => {
            r.failure = Some(e);
            return r;
        }
    };
    if r.euler.iter().any(|e| e.lhs != e.rhs) {
        r.failure = Some("Euler characteristics differ".into());
        return r;
    }
    let res = match &cert {
        Certificate::Direct(eq) => {
            r.certificate_kind = Some("direct".into());
            r.certificate = vec![cert_size(eq)];
            certify(ctx, eq, true)
        }
        Certificate::Roof { left, right } => {
            r.certificate_kind = Some("roof".into());
            r.apex_terms = Some(left.src.describe());
            r.certificate = vec![cert_size(left), cert_size(right)];
            certify(ctx, left, false)
                .map_err(|e| format!("left leg: {e}"))
                .and_then(|_| certify(ctx, right, false).map_err(|e| format!("right leg: {e}")))
        }
    };
    match res {
        Ok(()) => r.pass = true,
        Err(e) => r.failure = Some(e),
    }
    r
}

/// The reduction of a complex to the identity complex, or the reason it fails.
fn reduce_to_identity(ctx: &BimodCtx, cx: &Arc<Complex>) -> Result<Equivalence, String> {
    let eq = simplify(ctx, cx, false);
    let id = Arc::new(identity_complex(ctx).map_err(|e| e.to_string())?);
    let t = &eq.tgt;
    let nonempty: Vec<i32> = t.degrees().filter(|&k| !t.term(k).is_empty()).collect();
    if nonempty != vec![0] || t.term(0).len() != 1 || t.term(0)[0].spec() != id.term(0)[0].spec() {
        return Err(format!("reduction stopped at {:?}", t.describe()));
    }
    // Re-home onto the identity complex.
    let mut f = GradedMap::zero(cx.clone(), id.clone(), 0);
    let mut g = GradedMap::zero(id.clone(), cx.clone(), 0);
    let fk = eq.f.comp(0);
    let gk = eq.g.comp(0);
    f.set(0, SumMap { src: fk.src.clone(), tgt: id.term(0), entries: fk.entries.clone() });
    g.set(0, SumMap { src: id.term(0), tgt: gk.tgt.clone(), entries: gk.entries.clone() });
    let s = cx.regime.homotopy_shift();
    Ok(Equivalence {
        src: cx.clone(),
        tgt: id.clone(),
        f,
        g,
        h_src: eq.h_src.clone(),
        h_tgt: GradedMap::zero(id.clone(), id, s),
    })
}

/// `Sigma_i Sigma_i' ~ Id` (`prime_first = false`) or `Sigma_i' Sigma_i ~ Id`.
pub fn inverse_equivalence(ctx: &BimodCtx, i: usize, prime_first: bool) -> Result<(Arc<Complex>, Equivalence), String> {
    let word = if prime_first { [-(i as i32), i as i32] } else { [i as i32, -(i as i32)] };
    let cx = Arc::new(braid_word(ctx, &word).map_err(|e| e.to_string())?);
    cx.check_nilpotent()?;
    cx.check_dg()?;
    let eq = reduce_to_identity(ctx, &cx)?;
    Ok((cx, eq))
}

pub fn verify_inverse(ctx: &BimodCtx, i: usize, prime_first: bool, window: i64) -> BraidReport {
    let name = if prime_first { format!("Sigma{i}' Sigma{i} ~ Id") } else { format!("Sigma{i} Sigma{i}' ~ Id") };
    let id = identity_complex(ctx).expect("identity complex");
    match inverse_equivalence(ctx, i, prime_first) {
        Ok((cx, eq)) => report(&name, ctx, &cx, &id, window, Ok(Certificate::Direct(Box::new(eq)))),
        Err(e) => {
            let word = if prime_first { [-(i as i32), i as i32] } else { [i as i32, -(i as i32)] };
            let cx = braid_word(ctx, &word).unwrap_or_else(|_| id.clone());
            report(&name, ctx, &cx, &id, window, Err(e))
        }
    }
}

/// `Sigma_i Sigma_j = Sigma_j Sigma_i` for `|i-j| > 1`: an isomorphism of complexes.
pub fn verify_far_comm(ctx: &BimodCtx, i: usize, j: usize, window: i64) -> BraidReport {
    let name = format!("Sigma{i} Sigma{j} = Sigma{j} Sigma{i}");
    let build = || -> Result<(Arc<Complex>, Arc<Complex>), String> {
        if i.abs_diff(j) < 2 {
            return Err("indices are adjacent".into());
        }
        let a = braid_word(ctx, &[i as i32, j as i32]).map_err(|e| e.to_string())?;
        let b = braid_word(ctx, &[j as i32, i as i32]).map_err(|e| e.to_string())?;
        Ok((Arc::new(a), Arc::new(b)))
    };
    let (a, b) = match build() {
        Ok(x) => x,
        Err(e) => {
            let id = identity_complex(ctx).expect("identity complex");
            return report(&name, ctx, &id, &id, window, Err(e));
        }
    };
    let eq = (|| -> Result<Certificate, String> {
        let mut fixed = BTreeMap::new();
        fixed.insert(0, SumMap::identity(a.term(0)));
        let f = solve_chain_map(ctx, &a, &b, &fixed, true).ok_or("no DG chain map with identity in degree 0")?;
        let g = solve_chain_map(ctx, &b, &a, &fixed, true).ok_or("no DG chain map back")?;
        if g.compose(&f).first_difference(&GradedMap::identity(&a)).is_some()
            || f.compose(&g).first_difference(&GradedMap::identity(&b)).is_some()
        {
            return Err("chain maps are not mutually inverse".into());
        }
        let s = a.regime.homotopy_shift();
        Ok(Certificate::Direct(Box::new(Equivalence {
            src: a.clone(),
            tgt: b.clone(),
            f,
            g,
            h_src: GradedMap::zero(a.clone(), a.clone(), s),
            h_tgt: GradedMap::zero(b.clone(), b.clone(), s),
        })))
    })();
    report(&name, ctx, &a, &b, window, eq)
}

/// Both sides of the braid relation and the certificate between them, if found.
pub type BraidCertificate = (Arc<Complex>, Arc<Complex>, Result<Certificate, String>);

/// `Sigma_i Sigma_{i+1} Sigma_i ~ Sigma_{i+1} Sigma_i Sigma_{i+1}`, as a roof
/// through the common reduced complex: both sides are simplified with the
/// decompositions of `W_a W_a` and `W_a W_b W_a`, the reduced complexes are
/// identified by a DG chain isomorphism, and the legs are the DG inclusions.
pub fn braid_certificate(ctx: &BimodCtx, i: usize) -> Result<BraidCertificate, String> {
    let (a, b) = (i as i32, i as i32 + 1);
    let l = Arc::new(braid_word(ctx, &[a, b, a]).map_err(|e| e.to_string())?);
    let r = Arc::new(braid_word(ctx, &[b, a, b]).map_err(|e| e.to_string())?);
    let cert = (|| -> Result<Certificate, String> {
        for c in [&l, &r] {
            c.check_nilpotent()?;
            c.check_dg()?;
        }
        let el = simplify(ctx, &l, true);
        let er = simplify(ctx, &r, true);
        if el.tgt.term(0).len() != 1 || er.tgt.term(0).len() != 1 {
            return Err("reduced complexes do not end in a single W".into());
        }
        let mut fixed = BTreeMap::new();
        fixed.insert(0, SumMap::identity(el.tgt.term(0)));
        let phi = solve_chain_map(ctx, &el.tgt, &er.tgt, &fixed, true).ok_or("no DG chain map between the reduced complexes")?;
        let psi = solve_chain_map(ctx, &er.tgt, &el.tgt, &fixed, true).ok_or("no DG chain map back between the reduced complexes")?;
        let hl = psi.compose(&phi).sub(&GradedMap::identity(&el.tgt));
        let hr = phi.compose(&psi).sub(&GradedMap::identity(&er.tgt));
        let mid = Equivalence {
            src: el.tgt.clone(),
            tgt: er.tgt.clone(),
            f: phi,
            g: psi,
            h_src: find_homotopy(ctx, &hl).ok_or("reduced complexes not equivalent")?,
            h_tgt: find_homotopy(ctx, &hr).ok_or("reduced complexes not equivalent")?,
        };
        let left = el.inverse();
        let right = mid.then(&er.inverse());
        Ok(Certificate::Roof { left: Box::new(left), right: Box::new(right) })
    })();
    Ok((l, r, cert))
}

pub fn verify_braid_relation(ctx: &BimodCtx, i: usize, window: i64) -> BraidReport {
    let name = format!("Sigma{i} Sigma{j} Sigma{i} ~ Sigma{j} Sigma{i} Sigma{j}", j = i + 1);
    match braid_certificate(ctx, i) {
        Ok((l, r, cert)) => report(&name, ctx, &l, &r, window, cert),
        Err(e) => {
            let id = identity_complex(ctx).expect("identity complex");
            report(&name, ctx, &id, &id, window, Err(e))
        }
    }
}

/// Apply the p-extension to a certified ordinary equivalence and certify
/// the result in the p-complex regime.
pub fn p_extend_certificate(ctx: &BimodCtx, name: &str, eq: &Equivalence, p: u32, window: i64) -> BraidReport {
    let src = Arc::new(p_extend(&eq.src, p));
    let tgt = Arc::new(p_extend(&eq.tgt, p));
    let res = (|| -> Result<Certificate, String> {
        src.check_nilpotent()?;
        tgt.check_nilpotent()?;
        let f = p_extend_map(&eq.f, &src, &tgt, p);
        let g = p_extend_map(&eq.g, &tgt, &src, p);
        let gf = g.compose(&f).sub(&GradedMap::identity(&src));
        let h_src = find_homotopy(ctx, &gf).ok_or("no p-null-homotopy for g f - 1")?;
        let fg = f.compose(&g).sub(&GradedMap::identity(&tgt));
        let h_tgt = find_homotopy(ctx, &fg).ok_or("no p-null-homotopy for f g - 1")?;
        Ok(Certificate::Direct(Box::new(Equivalence { src: src.clone(), tgt: tgt.clone(), f, g, h_src, h_tgt })))
    })();
    report(name, ctx, &src, &tgt, window, res)
}

#[derive(Clone, Debug, Serialize)]
pub struct PExtendReport {
    pub p: u32,
    pub t_matches: bool,
    pub t_prime_matches: bool,
    pub identity_preserved: bool,
    pub functorial_pairs: usize,
    pub functorial: bool,
    pub null_homotopic_maps: usize,
    pub nonzero_maps: usize,
    pub preserved: usize,
    pub pass: bool,
}

/// A random null-homotopic chain endomorphism `d h + h d` of `cx`.
pub fn random_null_homotopic(ctx: &BimodCtx, cx: &Arc<Complex>, rng: &mut ChaCha8Rng) -> GradedMap {
    let p = ctx.field().p();
    let unknowns = unknowns_for(ctx, 0, cx, cx, -1, false, |_| false);
    let mut h = GradedMap::zero(cx.clone(), cx.clone(), -1);
    for u in &unknowns {
        let c = rng.gen_range(0..p);
        if c != 0 {
            let mut s = h.comp(u.k);
            s.add_entry(u.r, u.c, &u.map.scale(c));
            h.set(u.k, s);
        }
    }
    h.homotopy_image()
}

/// Structural checks of the p-extension and preservation of null-homotopic maps.
pub fn verify_p_extend(ctx: &BimodCtx, p: u32, corpus: usize, rng: &mut ChaCha8Rng) -> Result<PExtendReport, String> {
    let e = |x: BimodError| x.to_string();
    let s = build_sigma(ctx, 1).map_err(e)?;
    let t_matches = same_complex(&p_extend(&s, p), &build_t(ctx, 1, p).map_err(e)?);
    let sp = build_sigma_prime(ctx, 1).map_err(e)?;
    let t_prime_matches = same_complex(&p_extend(&sp, p), &build_t_prime(ctx, 1, p).map_err(e)?);

    let cx = Arc::new(braid_word(ctx, &[1, -1]).map_err(e)?);
    let px = Arc::new(p_extend(&cx, p));
    let identity_preserved = p_extend_map(&GradedMap::identity(&cx), &px, &px, p).first_difference(&GradedMap::identity(&px)).is_none();

    let maps: Vec<GradedMap> = (0..corpus).map(|_| random_null_homotopic(ctx, &cx, rng)).collect();
    let nonzero_maps = maps.iter().filter(|m| !m.is_zero()).count();
    let mut functorial = true;
    let mut functorial_pairs = 0;
    for w in maps.windows(2) {
        let lhs = p_extend_map(&w[0].compose(&w[1]), &px, &px, p);
        let rhs = p_extend_map(&w[0], &px, &px, p).compose(&p_extend_map(&w[1], &px, &px, p));
        functorial &= lhs.first_difference(&rhs).is_none();
        functorial_pairs += 1;
    }
    let mut solver = HomotopySolver::new(ctx, &px, &px);
    let preserved = maps.iter().filter(|m| solver.solve(&p_extend_map(m, &px, &px, p)).is_some()).count();
    let pass = t_matches && t_prime_matches && identity_preserved && functorial && preserved == corpus && nonzero_maps > 0;
    Ok(PExtendReport {
        p,
        t_matches,
        t_prime_matches,
        identity_preserved,
        functorial_pairs,
        functorial,
        null_homotopic_maps: corpus,
        nonzero_maps,
        preserved,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::field::FieldParams;
    use crate::rep::calibrate_psi2;
    use rand::SeedableRng;

    fn ctx(n: usize, p: u64) -> BimodCtx {
        let f = FieldParams::new(p).unwrap();
        BimodCtx::new(Arc::new(Algebra::new(n, f, calibrate_psi2(n, f).convention)))
    }

    #[test]
    fn sigma_shapes() {
        let c = ctx(2, 3);
        let s = build_sigma(&c, 1).unwrap();
        assert_eq!(s.lo, -1);
        assert_eq!(s.term(-1)[0].spec(), &BimoduleSpec::wi(1));
        assert_eq!(s.term(0)[0].spec(), &BimoduleSpec::w());
        let sp = build_sigma_prime(&c, 1).unwrap();
        assert_eq!(sp.term(1)[0].spec(), &BimoduleSpec::wi(1).twisted(-1).shifted(-2));
        assert!(build_sigma(&c, 2).is_err());
    }

    #[test]
    fn bb_n2() {
        let r = verify_bb(&ctx(2, 3), 1, 6).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn inverse_n2() {
        let c = ctx(2, 3);
        for pf in [false, true] {
            let r = verify_inverse(&c, 1, pf, 6);
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn p_extension_suite() {
        let c = ctx(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = verify_p_extend(&c, 3, 4, &mut rng).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
