//! Complexes of bimodules, graded maps between them, homotopy solving,
//! Gaussian elimination and the p-extension functor.
//!
//! Terms are finite direct sums of bimodule models; maps between sums are
//! matrices of bimodule maps. All differentials have internal degree 0.

use crate::bimodule::ambient::Key;
use crate::bimodule::maps::BimoduleMap;
use crate::bimodule::{BimodCtx, BimodError, BimoduleModel, BimoduleSpec};
use crate::field::FieldParams;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::Monomial;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

pub type Obj = Arc<BimoduleModel>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `d^2 = 0`.
    Ordinary,
    /// `d^p = 0`.
    P(u32),
}

impl Regime {
    /// Number of differentials whose composite must vanish.
    pub fn nilpotency(&self) -> u32 {
        match self {
            Regime::Ordinary => 2,
            Regime::P(p) => *p,
        }
    }

    /// Homological degree of a null-homotopy.
    pub fn homotopy_shift(&self) -> i32 {
        1 - self.nilpotency() as i32
    }
}

fn same_objs(a: &[Obj], b: &[Obj]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.spec() == y.spec())
}

/// A matrix of bimodule maps between direct sums; `entries[r][c]` maps
/// summand `c` of the source to summand `r` of the target.
#[derive(Clone)]
pub struct SumMap {
    pub src: Vec<Obj>,
    pub tgt: Vec<Obj>,
    pub entries: Vec<Vec<Option<BimoduleMap>>>,
}

impl SumMap {
    pub fn zero(src: Vec<Obj>, tgt: Vec<Obj>) -> Self {
        let entries = vec![vec![None; src.len()]; tgt.len()];
        SumMap { src, tgt, entries }
    }

    pub fn identity(objs: Vec<Obj>) -> Self {
        let mut m = SumMap::zero(objs.clone(), objs.clone());
        for (i, o) in objs.iter().enumerate() {
            m.entries[i][i] = Some(BimoduleMap::identity(o.clone()));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&BimoduleMap> {
        self.entries[r][c].as_ref()
    }

    /// Entry `(r,c)`, or the zero map.
    pub fn entry(&self, r: usize, c: usize) -> BimoduleMap {
        self.entries[r][c]
            .clone()
            .unwrap_or_else(|| BimoduleMap::zero(self.src[c].clone(), self.tgt[r].clone(), 0))
    }

    pub fn set(&mut self, r: usize, c: usize, m: BimoduleMap) {
        self.entries[r][c] = if m.is_zero() { None } else { Some(m) };
    }

    pub fn add_entry(&mut self, r: usize, c: usize, m: &BimoduleMap) {
        let v = match &self.entries[r][c] {
            Some(x) => x.add(m),
            None => m.clone(),
        };
        self.set(r, c, v);
    }

    /// `self o before`.
    pub fn compose(&self, before: &SumMap) -> SumMap {
        assert!(same_objs(&before.tgt, &self.src), "composition of sums: mismatched objects");
        let mut r = SumMap::zero(before.src.clone(), self.tgt.clone());
        for (i, row) in self.entries.iter().enumerate() {
            for (m, a) in row.iter().enumerate() {
                let Some(a) = a else { continue };
                for (c, b) in before.entries[m].iter().enumerate() {
                    if let Some(b) = b {
                        r.add_entry(i, c, &a.compose(b));
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &SumMap) -> SumMap {
        assert!(same_objs(&self.src, &o.src) && same_objs(&self.tgt, &o.tgt), "sum of maps: mismatched objects");
        let mut r = self.clone();
        for (i, row) in o.entries.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    r.add_entry(i, c, b);
                }
            }
        }
        r
    }

    pub fn scale(&self, k: u32) -> SumMap {
        let mut r = SumMap::zero(self.src.clone(), self.tgt.clone());
        for (i, row) in self.entries.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    r.set(i, c, b.scale(k));
                }
            }
        }
        r
    }

    pub fn neg(&self) -> SumMap {
        match self.src.first().or(self.tgt.first()) {
            Some(o) => self.scale(o.field().p() - 1),
            None => self.clone(),
        }
    }

    pub fn sub(&self, o: &SumMap) -> SumMap {
        self.add(&o.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.as_ref().is_none_or(|m| m.is_zero()))
    }

    pub fn check_dg(&self) -> Result<(), String> {
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(m) = e {
                    m.check_dg().map_err(|e| format!("entry ({r},{c}): {e}"))?;
                }
            }
        }
        Ok(())
    }

    /// Entrywise `d o F - F o d`.
    pub fn dg_defect(&self) -> SumMap {
        let mut r = SumMap::zero(self.src.clone(), self.tgt.clone());
        for (i, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(m) = e {
                    r.set(i, c, m.dg_defect());
                }
            }
        }
        r
    }

    pub fn nonzero_entries(&self) -> usize {
        self.entries.iter().flatten().filter(|e| e.is_some()).count()
    }
}

/// A bounded complex of direct sums of bimodules; `diffs[i]` maps
/// `terms[i]` (homological degree `lo + i`) to `terms[i+1]`.
#[derive(Clone)]
pub struct Complex {
    pub regime: Regime,
    pub lo: i32,
    pub terms: Vec<Vec<Obj>>,
    pub diffs: Vec<SumMap>,
}

impl Complex {
    pub fn new(regime: Regime, lo: i32, terms: Vec<Vec<Obj>>, diffs: Vec<SumMap>) -> Self {
        assert_eq!(diffs.len(), terms.len().saturating_sub(1), "differential count");
        for (i, d) in diffs.iter().enumerate() {
            assert!(same_objs(&d.src, &terms[i]) && same_objs(&d.tgt, &terms[i + 1]), "differential shape");
        }
        Complex { regime, lo, terms, diffs }
    }

    /// The complex with `obj` in degree 0.
    pub fn single(regime: Regime, obj: Obj) -> Self {
        Complex { regime, lo: 0, terms: vec![vec![obj]], diffs: vec![] }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn term(&self, k: i32) -> Vec<Obj> {
        if k < self.lo || k > self.hi() {
            return vec![];
        }
        self.terms[(k - self.lo) as usize].clone()
    }

    /// Differential out of degree `k`.
    pub fn d(&self, k: i32) -> SumMap {
        if k >= self.lo && k < self.hi() {
            self.diffs[(k - self.lo) as usize].clone()
        } else {
            SumMap::zero(self.term(k), self.term(k + 1))
        }
    }

    /// Composite of `m` differentials starting in degree `k`.
    pub fn d_power(&self, k: i32, m: u32) -> SumMap {
        let mut r = SumMap::identity(self.term(k));
        for j in 0..m {
            r = self.d(k + j as i32).compose(&r);
        }
        r
    }

    pub fn check_nilpotent(&self) -> Result<(), String> {
        let m = self.regime.nilpotency();
        for k in self.lo - m as i32..=self.hi() {
            if !self.d_power(k, m).is_zero() {
                return Err(format!("d^{m} is nonzero starting in homological degree {k}"));
            }
        }
        Ok(())
    }

    pub fn check_dg(&self) -> Result<(), String> {
        for k in self.degrees() {
            self.d(k).check_dg().map_err(|e| format!("differential out of degree {k}: {e}"))?;
        }
        Ok(())
    }

    /// Dimension of each term in internal degree `d`.
    pub fn dims(&self, d: i64) -> BTreeMap<i32, usize> {
        self.degrees().map(|k| (k, self.term(k).iter().map(|o| o.dim(d)).sum())).collect()
    }

    pub fn euler(&self, d: i64) -> i64 {
        self.dims(d).iter().map(|(k, v)| if k % 2 == 0 { *v as i64 } else { -(*v as i64) }).sum()
    }

    /// Names of the summands in each degree.
    pub fn describe(&self) -> BTreeMap<i32, Vec<String>> {
        self.degrees().map(|k| (k, self.term(k).iter().map(|o| o.spec().name()).collect())).collect()
    }
}

/// A family of maps `src^k -> tgt^{k+shift}`.
#[derive(Clone)]
pub struct GradedMap {
    pub src: Arc<Complex>,
    pub tgt: Arc<Complex>,
    pub shift: i32,
    pub comps: BTreeMap<i32, SumMap>,
}

impl GradedMap {
    pub fn zero(src: Arc<Complex>, tgt: Arc<Complex>, shift: i32) -> Self {
        GradedMap { src, tgt, shift, comps: BTreeMap::new() }
    }

    pub fn identity(c: &Arc<Complex>) -> Self {
        let mut m = GradedMap::zero(c.clone(), c.clone(), 0);
        for k in c.degrees() {
            m.comps.insert(k, SumMap::identity(c.term(k)));
        }
        m
    }

    pub fn differential(c: &Arc<Complex>) -> Self {
        let mut m = GradedMap::zero(c.clone(), c.clone(), 1);
        for k in c.degrees() {
            m.comps.insert(k, c.d(k));
        }
        m
    }

    pub fn comp(&self, k: i32) -> SumMap {
        self.comps.get(&k).cloned().unwrap_or_else(|| SumMap::zero(self.src.term(k), self.tgt.term(k + self.shift)))
    }

    pub fn set(&mut self, k: i32, m: SumMap) {
        assert!(same_objs(&m.src, &self.src.term(k)) && same_objs(&m.tgt, &self.tgt.term(k + self.shift)));
        self.comps.insert(k, m);
    }

    /// `self o before`.
    pub fn compose(&self, before: &GradedMap) -> GradedMap {
        let mut r = GradedMap::zero(before.src.clone(), self.tgt.clone(), self.shift + before.shift);
        for (&k, b) in &before.comps {
            let Some(a) = self.comps.get(&(k + before.shift)) else { continue };
            r.comps.insert(k, a.compose(b));
        }
        r
    }

    pub fn add(&self, o: &GradedMap) -> GradedMap {
        assert_eq!(self.shift, o.shift);
        let mut r = self.clone();
        for (&k, b) in &o.comps {
            let v = r.comp(k).add(b);
            r.comps.insert(k, v);
        }
        r
    }

    pub fn scale(&self, c: u32) -> GradedMap {
        let mut r = self.clone();
        for v in r.comps.values_mut() {
            *v = v.scale(c);
        }
        r
    }

    pub fn neg(&self) -> GradedMap {
        let mut r = self.clone();
        for v in r.comps.values_mut() {
            *v = v.neg();
        }
        r
    }

    pub fn sub(&self, o: &GradedMap) -> GradedMap {
        self.add(&o.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|m| m.is_zero())
    }

    /// First degree where `self != o`.
    pub fn first_difference(&self, o: &GradedMap) -> Option<i32> {
        let d = self.sub(o);
        d.comps.iter().find(|(_, m)| !m.is_zero()).map(|(k, _)| *k)
    }

    /// `d f - f d`, for maps of shift 0.
    pub fn chain_defect(&self) -> GradedMap {
        let dt = GradedMap::differential(&self.tgt);
        let ds = GradedMap::differential(&self.src);
        dt.compose(self).sub(&self.compose(&ds))
    }

    pub fn check_chain(&self) -> Result<(), String> {
        let d = self.chain_defect();
        match d.comps.iter().find(|(_, m)| !m.is_zero()) {
            None => Ok(()),
            Some((k, _)) => Err(format!("not a chain map in homological degree {k}")),
        }
    }

    pub fn check_dg(&self) -> Result<(), String> {
        for (k, m) in &self.comps {
            m.check_dg().map_err(|e| format!("homological degree {k}: {e}"))?;
        }
        Ok(())
    }

    pub fn dg_defect(&self) -> GradedMap {
        let mut r = self.clone();
        for v in r.comps.values_mut() {
            *v = v.dg_defect();
        }
        r
    }

    /// The map `d h + h d` (ordinary) or `sum_{a+b=p-1} d^a h d^b` (p-complexes)
    /// determined by a homotopy `h`.
    pub fn homotopy_image(&self) -> GradedMap {
        let m = self.src.regime.nilpotency();
        assert_eq!(self.shift, 1 - m as i32, "homotopy has the wrong homological degree");
        let ds = GradedMap::differential(&self.src);
        let dt = GradedMap::differential(&self.tgt);
        let mut total = GradedMap::zero(self.src.clone(), self.tgt.clone(), 0);
        let mut left_pows = vec![GradedMap::identity(&self.tgt)];
        let mut right_pows = vec![GradedMap::identity(&self.src)];
        for a in 1..m as usize {
            left_pows.push(dt.compose(&left_pows[a - 1]));
            right_pows.push(right_pows[a - 1].compose(&ds));
        }
        for (a, l) in left_pows.iter().enumerate() {
            total = total.add(&l.compose(self).compose(&right_pows[m as usize - 1 - a]));
        }
        total
    }
}

/// A homotopy equivalence with its certificates: `g f - 1` and `f g - 1`
/// are the images of `h_src` and `h_tgt`.
#[derive(Clone)]
pub struct Equivalence {
    pub src: Arc<Complex>,
    pub tgt: Arc<Complex>,
    pub f: GradedMap,
    pub g: GradedMap,
    pub h_src: GradedMap,
    pub h_tgt: GradedMap,
}

impl Equivalence {
    pub fn identity(c: &Arc<Complex>) -> Self {
        let s = c.regime.homotopy_shift();
        Equivalence {
            src: c.clone(),
            tgt: c.clone(),
            f: GradedMap::identity(c),
            g: GradedMap::identity(c),
            h_src: GradedMap::zero(c.clone(), c.clone(), s),
            h_tgt: GradedMap::zero(c.clone(), c.clone(), s),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Equivalence) -> Equivalence {
        let f = next.f.compose(&self.f);
        let g = self.g.compose(&next.g);
        let h_src = self.g.compose(&next.h_src).compose(&self.f).add(&self.h_src);
        let h_tgt = next.f.compose(&self.h_tgt).compose(&next.g).add(&next.h_tgt);
        Equivalence { src: self.src.clone(), tgt: next.tgt.clone(), f, g, h_src, h_tgt }
    }

    pub fn inverse(&self) -> Equivalence {
        Equivalence {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
            h_src: self.h_tgt.clone(),
            h_tgt: self.h_src.clone(),
        }
    }

    /// Check every identity by direct substitution.
    pub fn verify(&self) -> Result<(), String> {
        self.f.check_chain().map_err(|e| format!("f: {e}"))?;
        self.g.check_chain().map_err(|e| format!("g: {e}"))?;
        let gf = self.g.compose(&self.f).sub(&GradedMap::identity(&self.src));
        if let Some(k) = gf.first_difference(&self.h_src.homotopy_image()) {
            return Err(format!("gf - 1 differs from the homotopy image in degree {k}"));
        }
        let fg = self.f.compose(&self.g).sub(&GradedMap::identity(&self.tgt));
        if let Some(k) = fg.first_difference(&self.h_tgt.homotopy_image()) {
            return Err(format!("fg - 1 differs from the homotopy image in degree {k}"));
        }
        Ok(())
    }
}

/// Tensor product over W of two ordinary complexes, with the Koszul sign on
/// the second differential.
pub fn tensor_complexes(ctx: &BimodCtx, a: &Complex, b: &Complex) -> Result<Complex, BimodError> {
    assert!(a.regime == Regime::Ordinary && b.regime == Regime::Ordinary, "tensor of ordinary complexes only");
    let f = ctx.field();
    let lo = a.lo + b.lo;
    let hi = a.hi() + b.hi();
    // Summands of degree k: (ka, ia, kb, ib).
    let mut index: Vec<Vec<(i32, usize, i32, usize)>> = Vec::new();
    let mut terms = Vec::new();
    for k in lo..=hi {
        let mut idx = Vec::new();
        let mut objs = Vec::new();
        for ka in a.degrees() {
            let kb = k - ka;
            if kb < b.lo || kb > b.hi() {
                continue;
            }
            for (ia, oa) in a.term(ka).iter().enumerate() {
                for (ib, ob) in b.term(kb).iter().enumerate() {
                    idx.push((ka, ia, kb, ib));
                    objs.push(ctx.model(&BimoduleSpec::tensor(vec![oa.spec().clone(), ob.spec().clone()]))?);
                }
            }
        }
        index.push(idx);
        terms.push(objs);
    }
    let mut diffs = Vec::new();
    for k in lo..hi {
        let i = (k - lo) as usize;
        let mut m = SumMap::zero(terms[i].clone(), terms[i + 1].clone());
        for (c, &(ka, ia, kb, ib)) in index[i].iter().enumerate() {
            for (r, &(ka2, ja, kb2, jb)) in index[i + 1].iter().enumerate() {
                if ka2 == ka + 1 && kb2 == kb && jb == ib {
                    if let Some(da) = a.d(ka).get(ja, ia) {
                        m.add_entry(r, c, &da.tensor_right(ctx, &b.term(kb)[ib])?);
                    }
                }
                if ka2 == ka && kb2 == kb + 1 && ja == ia {
                    if let Some(db) = b.d(kb).get(jb, ib) {
                        let mut t = db.tensor_left(ctx, &a.term(ka)[ia])?;
                        if ka.rem_euclid(2) == 1 {
                            t = t.scale(f.p() - 1);
                        }
                        m.add_entry(r, c, &t);
                    }
                }
            }
        }
        diffs.push(m);
    }
    Ok(Complex::new(Regime::Ordinary, lo, terms, diffs))
}

/// Position of ordinary degree `k` (first copy) under the p-extension.
fn p_position(k: i32, p: u32) -> i32 {
    let m = k.div_euclid(2);
    if k.rem_euclid(2) == 0 {
        m * p as i32
    } else {
        m * p as i32 + 1
    }
}

/// For each p-extended degree: the ordinary degree and copy index.
fn p_origins(c: &Complex, p: u32) -> Vec<(i32, i32, u32)> {
    let mut out = Vec::new();
    for k in c.degrees() {
        let copies = if k.rem_euclid(2) == 0 { 1 } else { p - 1 };
        for j in 0..copies {
            out.push((p_position(k, p) + j as i32, k, j));
        }
    }
    out
}

/// The p-extension: odd terms repeated `p-1` times joined by identities.
pub fn p_extend(c: &Complex, p: u32) -> Complex {
    assert_eq!(c.regime, Regime::Ordinary, "p-extension of an ordinary complex");
    let origins = p_origins(c, p);
    let lo = origins.first().map_or(0, |o| o.0);
    let terms: Vec<Vec<Obj>> = origins.iter().map(|(_, k, _)| c.term(*k)).collect();
    let mut diffs = Vec::new();
    for w in origins.windows(2) {
        let (_, k, j) = w[0];
        let odd = k.rem_euclid(2) == 1;
        if odd && j + 1 < p - 1 {
            diffs.push(SumMap::identity(c.term(k)));
        } else {
            diffs.push(c.d(k));
        }
    }
    Complex::new(Regime::P(p), lo, terms, diffs)
}

/// The p-extension of a chain map between ordinary complexes.
pub fn p_extend_map(f: &GradedMap, src: &Arc<Complex>, tgt: &Arc<Complex>, p: u32) -> GradedMap {
    assert_eq!(f.shift, 0);
    let mut r = GradedMap::zero(src.clone(), tgt.clone(), 0);
    for (q, k, _) in p_origins(&f.src, p) {
        if let Some(m) = f.comps.get(&k) {
            r.set(q, m.clone());
        }
    }
    r
}

/// Coordinates of a row of a linear system built from graded maps.
type RowKey = (usize, i32, usize, usize, usize, Key, Monomial);

fn flatten(eqs: &[GradedMap]) -> Vec<(RowKey, u32)> {
    let mut out = Vec::new();
    for (e, gm) in eqs.iter().enumerate() {
        for (&k, sm) in &gm.comps {
            for (r, row) in sm.entries.iter().enumerate() {
                for (c, m) in row.iter().enumerate() {
                    let Some(m) = m else { continue };
                    for (pos, img) in m.images().iter().enumerate() {
                        for (key, poly) in img.terms() {
                            for (mono, v) in poly.terms() {
                                out.push(((e, k, r, c, pos, *key, *mono), *v));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// One unknown: a basis map placed in entry `(r,c)` of component `k` of family `fam`.
#[derive(Clone)]
pub struct Unknown {
    pub fam: usize,
    pub k: i32,
    pub r: usize,
    pub c: usize,
    pub map: BimoduleMap,
}

/// Unknowns for all components of a graded map `src -> tgt` of the given shift.
pub fn unknowns_for(
    ctx: &BimodCtx,
    fam: usize,
    src: &Complex,
    tgt: &Complex,
    shift: i32,
    dg: bool,
    skip: impl Fn(i32) -> bool,
) -> Vec<Unknown> {
    let mut out = Vec::new();
    for k in src.degrees() {
        if skip(k) {
            continue;
        }
        for (c, so) in src.term(k).iter().enumerate() {
            for (r, to) in tgt.term(k + shift).iter().enumerate() {
                for m in ctx.hom(so, to, 0, dg).iter() {
                    out.push(Unknown { fam, k, r, c, map: m.clone() });
                }
            }
        }
    }
    out
}

/// A linear system `sum_u x_u L(u) = rhs` whose unknowns are graded-map
/// entries and whose equations are graded maps; reusable for many
/// right-hand sides.
pub struct MapSystem {
    field: FieldParams,
    templates: Vec<GradedMap>,
    unknowns: Vec<Unknown>,
    rows: HashMap<RowKey, u32>,
    ech: Echelon,
    pub rank: usize,
}

fn place(templates: &[GradedMap], u: &Unknown, coeff: u32) -> Vec<GradedMap> {
    let mut fams = templates.to_vec();
    let t = &mut fams[u.fam];
    let mut sm = t.comp(u.k);
    sm.add_entry(u.r, u.c, &u.map.scale(coeff));
    t.comps.insert(u.k, sm);
    fams
}

impl MapSystem {
    /// `lin` must be linear in the families.
    pub fn new(
        field: FieldParams,
        templates: Vec<GradedMap>,
        unknowns: Vec<Unknown>,
        lin: impl Fn(&[GradedMap]) -> Vec<GradedMap> + Sync,
    ) -> Self {
        let cols: Vec<Vec<(RowKey, u32)>> =
            unknowns.par_iter().map(|u| flatten(&lin(&place(&templates, u, 1)))).collect();
        let mut rows: HashMap<RowKey, u32> = HashMap::new();
        let mut sparse: Vec<SparseVec> = Vec::with_capacity(cols.len());
        for col in cols {
            let mut v: Vec<(u32, u32)> = col
                .into_iter()
                .map(|(k, x)| {
                    let n = rows.len() as u32;
                    (*rows.entry(k).or_insert(n), x)
                })
                .collect();
            v.sort();
            sparse.push(crate::linalg::sparse_collect(field, v));
        }
        let ncols = rows.len();
        let mut ech = Echelon::with_tracking(field, ncols, sparse.len() + 1);
        for v in &sparse {
            ech.insert(v);
        }
        let rank = ech.rank();
        MapSystem { field, templates, unknowns, rows, ech, rank }
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    /// Solve `L(x) = rhs`; returns the families.
    pub fn solve(&mut self, rhs: &[GradedMap]) -> Option<Vec<GradedMap>> {
        let mut b = Vec::new();
        for (k, x) in flatten(rhs) {
            let row = *self.rows.get(&k)?;
            b.push((row, x));
        }
        b.sort();
        let b = crate::linalg::sparse_collect(self.field, b);
        let sol = self.ech.solve(&b)?;
        let mut fams = self.templates.clone();
        for (i, c) in sol {
            fams = place(&fams, &self.unknowns[i as usize], c);
        }
        Some(fams)
    }
}

/// Solve `f = d h + h d` (or the p-analogue); the result is re-verified.
pub fn find_homotopy(ctx: &BimodCtx, f: &GradedMap) -> Option<GradedMap> {
    HomotopySolver::new(ctx, &f.src, &f.tgt).solve(f)
}

/// Null-homotopy solver for a fixed pair of complexes.
pub struct HomotopySolver {
    sys: MapSystem,
}

impl HomotopySolver {
    pub fn new(ctx: &BimodCtx, src: &Arc<Complex>, tgt: &Arc<Complex>) -> Self {
        let s = src.regime.homotopy_shift();
        let unknowns = unknowns_for(ctx, 0, src, tgt, s, false, |_| false);
        let template = GradedMap::zero(src.clone(), tgt.clone(), s);
        let sys = MapSystem::new(ctx.field(), vec![template], unknowns, |fams| vec![fams[0].homotopy_image()]);
        HomotopySolver { sys }
    }

    pub fn unknown_count(&self) -> usize {
        self.sys.unknown_count()
    }

    pub fn solve(&mut self, f: &GradedMap) -> Option<GradedMap> {
        if f.is_zero() {
            return Some(self.sys.templates[0].clone());
        }
        let h = self.sys.solve(std::slice::from_ref(f))?.remove(0);
        h.homotopy_image().first_difference(f).is_none().then_some(h)
    }
}

/// A chain map `src -> tgt` agreeing with `fixed` in the listed degrees;
/// the remaining components are drawn from DG (or arbitrary) bimodule maps.
pub fn solve_chain_map(
    ctx: &BimodCtx,
    src: &Arc<Complex>,
    tgt: &Arc<Complex>,
    fixed: &BTreeMap<i32, SumMap>,
    dg: bool,
) -> Option<GradedMap> {
    let mut base = GradedMap::zero(src.clone(), tgt.clone(), 0);
    for (k, m) in fixed {
        base.set(*k, m.clone());
    }
    let unknowns = unknowns_for(ctx, 0, src, tgt, 0, dg, |k| fixed.contains_key(&k));
    let template = GradedMap::zero(src.clone(), tgt.clone(), 0);
    let mut sys = MapSystem::new(ctx.field(), vec![template], unknowns, |f| vec![f[0].chain_defect()]);
    let rhs = base.chain_defect().neg();
    let sol = if rhs.is_zero() { GradedMap::zero(src.clone(), tgt.clone(), 0) } else { sys.solve(&[rhs])?.remove(0) };
    let f = base.add(&sol);
    f.check_chain().ok().map(|_| f)
}

/// A chain map homotopic to `f` that commutes with the p-differential,
/// found as `f + d k + k d`.
pub fn dg_correct(ctx: &BimodCtx, f: &GradedMap) -> Option<GradedMap> {
    if f.dg_defect().is_zero() {
        return Some(f.clone());
    }
    let s = f.src.regime.homotopy_shift();
    let unknowns = unknowns_for(ctx, 0, &f.src, &f.tgt, s, false, |_| false);
    let template = GradedMap::zero(f.src.clone(), f.tgt.clone(), s);
    let mut sys = MapSystem::new(ctx.field(), vec![template], unknowns, |k| vec![k[0].homotopy_image().dg_defect()]);
    let k = sys.solve(&[f.dg_defect().neg()])?.remove(0);
    let g = f.add(&k.homotopy_image());
    g.dg_defect().is_zero().then_some(g)
}

/// Inverse of a bimodule isomorphism, if it exists.
pub fn invert(ctx: &BimodCtx, phi: &BimoduleMap) -> Option<BimoduleMap> {
    let id_t = BimoduleMap::identity(phi.tgt().clone());
    let id_s = BimoduleMap::identity(phi.src().clone());
    if phi.src().spec() == phi.tgt().spec() {
        let f = phi.src().field();
        for c in 1..f.p() {
            if phi.scale(c) == id_t {
                return Some(id_s.scale(c));
            }
        }
    }
    right_inverse(ctx, std::slice::from_ref(phi), 0).filter(|psi| psi.compose(phi) == id_s)
}

/// `v : us[j].tgt -> X` with `us[i] o v = delta_{ij} id`, where all `us[i]` start at `X`.
pub fn right_inverse(ctx: &BimodCtx, us: &[BimoduleMap], j: usize) -> Option<BimoduleMap> {
    let x = us[j].src().clone();
    let a = us[j].tgt().clone();
    let basis = ctx.hom(&a, &x, -us[j].degree(), false);
    let layouts: Vec<_> =
        us.iter().map(|u| crate::bimodule::maps::MapLayout::new(a.clone(), u.tgt().clone(), 0)).collect();
    let mut offs = vec![0u32];
    for l in &layouts {
        offs.push(offs.last().unwrap() + l.len);
    }
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|b| {
            let mut v = Vec::new();
            for (i, u) in us.iter().enumerate() {
                v.extend(u.compose(b).to_sparse(&layouts[i]).into_iter().map(|(c, x)| (c + offs[i], x)));
            }
            v
        })
        .collect();
    let target: SparseVec =
        BimoduleMap::identity(a.clone()).to_sparse(&layouts[j]).into_iter().map(|(c, x)| (c + offs[j], x)).collect();
    let sol = crate::linalg::solve(ctx.field(), *offs.last().unwrap() as usize, &cols, &target)?;
    let mut v = BimoduleMap::zero(a, x, -us[j].degree());
    for (i, c) in sol {
        v = v.add(&basis[i as usize].scale(c));
    }
    Some(v)
}

/// Remove summand `c` of degree `k` against summand `r` of degree `k+1`
/// through the invertible component `phi = d[r][c]` with inverse `phi_inv`.
pub fn gaussian_eliminate(cx: &Arc<Complex>, k: i32, c: usize, r: usize, phi_inv: &BimoduleMap) -> Equivalence {
    assert_eq!(cx.regime, Regime::Ordinary, "elimination in ordinary complexes");
    let dk = cx.d(k);
    let keep_k: Vec<usize> = (0..cx.term(k).len()).filter(|&i| i != c).collect();
    let keep_k1: Vec<usize> = (0..cx.term(k + 1).len()).filter(|&i| i != r).collect();
    let tk: Vec<Obj> = keep_k.iter().map(|&i| cx.term(k)[i].clone()).collect();
    let tk1: Vec<Obj> = keep_k1.iter().map(|&i| cx.term(k + 1)[i].clone()).collect();

    let mut terms = Vec::new();
    for q in cx.degrees() {
        terms.push(if q == k {
            tk.clone()
        } else if q == k + 1 {
            tk1.clone()
        } else {
            cx.term(q)
        });
    }
    let sub = |m: &SumMap, rows: &[usize], cols: &[usize], tr: Vec<Obj>, tc: Vec<Obj>| {
        let mut o = SumMap::zero(tc, tr);
        for (a, &ri) in rows.iter().enumerate() {
            for (b, &ci) in cols.iter().enumerate() {
                if let Some(e) = m.get(ri, ci) {
                    o.set(a, b, e.clone());
                }
            }
        }
        o
    };
    let all = |n: usize| (0..n).collect::<Vec<_>>();
    let mut diffs = Vec::new();
    for q in cx.lo..cx.hi() {
        let d = cx.d(q);
        let rows = if q + 1 == k {
            keep_k.clone()
        } else if q + 1 == k + 1 {
            keep_k1.clone()
        } else {
            all(d.tgt.len())
        };
        let cols = if q == k {
            keep_k.clone()
        } else if q == k + 1 {
            keep_k1.clone()
        } else {
            all(d.src.len())
        };
        let mut nd = sub(&d, &rows, &cols, terms[(q + 1 - cx.lo) as usize].clone(), terms[(q - cx.lo) as usize].clone());
        if q == k {
            // d' = eps - gamma phi^-1 delta
            for (a, &ri) in keep_k1.iter().enumerate() {
                let Some(gamma) = dk.get(ri, c) else { continue };
                for (b, &ci) in keep_k.iter().enumerate() {
                    let Some(delta) = dk.get(r, ci) else { continue };
                    nd.add_entry(a, b, &gamma.compose(phi_inv).compose(delta).neg());
                }
            }
        }
        diffs.push(nd);
    }
    let out = Arc::new(Complex::new(cx.regime, cx.lo, terms, diffs));

    let mut f = GradedMap::zero(cx.clone(), out.clone(), 0);
    let mut g = GradedMap::zero(out.clone(), cx.clone(), 0);
    for q in cx.degrees() {
        if q == k {
            let mut fk = SumMap::zero(cx.term(k), tk.clone());
            let mut gk = SumMap::zero(tk.clone(), cx.term(k));
            for (a, &i) in keep_k.iter().enumerate() {
                fk.set(a, i, BimoduleMap::identity(tk[a].clone()));
                gk.set(i, a, BimoduleMap::identity(tk[a].clone()));
                if let Some(delta) = dk.get(r, i) {
                    gk.set(c, a, phi_inv.compose(delta).neg());
                }
            }
            f.set(k, fk);
            g.set(k, gk);
        } else if q == k + 1 {
            let mut fk = SumMap::zero(cx.term(k + 1), tk1.clone());
            let mut gk = SumMap::zero(tk1.clone(), cx.term(k + 1));
            for (a, &i) in keep_k1.iter().enumerate() {
                fk.set(a, i, BimoduleMap::identity(tk1[a].clone()));
                gk.set(i, a, BimoduleMap::identity(tk1[a].clone()));
                if let Some(gamma) = dk.get(i, c) {
                    fk.set(a, r, gamma.compose(phi_inv).neg());
                }
            }
            f.set(k + 1, fk);
            g.set(k + 1, gk);
        } else {
            f.set(q, SumMap::identity(cx.term(q)));
            g.set(q, SumMap::identity(cx.term(q)));
        }
    }
    let mut h = GradedMap::zero(cx.clone(), cx.clone(), -1);
    let mut hk = SumMap::zero(cx.term(k + 1), cx.term(k));
    hk.set(c, r, phi_inv.neg());
    h.set(k + 1, hk);
    Equivalence { src: cx.clone(), tgt: out.clone(), f, g, h_src: h, h_tgt: GradedMap::zero(out.clone(), out, -1) }
}

/// Replace the term of degree `k` through mutually inverse isomorphisms
/// `u : C^k -> T` and `v : T -> C^k`.
pub fn substitute(cx: &Arc<Complex>, k: i32, u: &SumMap, v: &SumMap) -> Equivalence {
    let t = u.tgt.clone();
    let mut terms = Vec::new();
    for q in cx.degrees() {
        terms.push(if q == k { t.clone() } else { cx.term(q) });
    }
    let mut diffs = Vec::new();
    for q in cx.lo..cx.hi() {
        let mut d = cx.d(q);
        if q + 1 == k {
            d = u.compose(&d);
        }
        if q == k {
            d = d.compose(v);
        }
        diffs.push(d);
    }
    let out = Arc::new(Complex::new(cx.regime, cx.lo, terms, diffs));
    let mut f = GradedMap::zero(cx.clone(), out.clone(), 0);
    let mut g = GradedMap::zero(out.clone(), cx.clone(), 0);
    for q in cx.degrees() {
        if q == k {
            f.set(q, u.clone());
            g.set(q, v.clone());
        } else {
            f.set(q, SumMap::identity(cx.term(q)));
            g.set(q, SumMap::identity(cx.term(q)));
        }
    }
    let s = cx.regime.homotopy_shift();
    Equivalence {
        src: cx.clone(),
        tgt: out.clone(),
        f,
        g,
        h_src: GradedMap::zero(cx.clone(), cx.clone(), s),
        h_tgt: GradedMap::zero(out.clone(), out, s),
    }
}

/// Isomorphism data splitting summand `idx` of a list into several summands.
pub fn split_summand(objs: &[Obj], idx: usize, u_parts: &[BimoduleMap], v_parts: &[BimoduleMap]) -> (SumMap, SumMap) {
    let mut t: Vec<Obj> = Vec::new();
    let mut pos = Vec::new();
    for (i, o) in objs.iter().enumerate() {
        if i == idx {
            for p in u_parts {
                t.push(p.tgt().clone());
            }
        } else {
            pos.push((i, t.len()));
            t.push(o.clone());
        }
    }
    let mut u = SumMap::zero(objs.to_vec(), t.clone());
    let mut v = SumMap::zero(t.clone(), objs.to_vec());
    for &(i, j) in &pos {
        u.set(j, i, BimoduleMap::identity(objs[i].clone()));
        v.set(i, j, BimoduleMap::identity(objs[i].clone()));
    }
    for (a, (up, vp)) in u_parts.iter().zip(v_parts).enumerate() {
        u.set(idx + a, idx, up.clone());
        v.set(idx, idx + a, vp.clone());
    }
    (u, v)
}

/// Repeatedly eliminate invertible components between equal summands.
pub fn reduce(ctx: &BimodCtx, cx: &Arc<Complex>) -> Equivalence {
    let mut eq = Equivalence::identity(cx);
    'outer: loop {
        let cur = eq.tgt.clone();
        for k in cur.lo..cur.hi() {
            let d = cur.d(k);
            for (r, row) in d.entries.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    let Some(phi) = e else { continue };
                    if phi.src().spec() != phi.tgt().spec() {
                        continue;
                    }
                    if let Some(inv) = invert(ctx, phi) {
                        let step = gaussian_eliminate(&cur, k, c, r, &inv);
                        eq = eq.then(&step);
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    eq
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::bimodule::standard;
    use crate::rep::calibrate_psi2;

    fn ctx(n: usize, p: u64) -> BimodCtx {
        let f = FieldParams::new(p).unwrap();
        BimodCtx::new(Arc::new(Algebra::new(n, f, calibrate_psi2(n, f).convention)))
    }

    #[test]
    fn identity_cone_is_contractible() {
        let c = ctx(2, 3);
        let w = c.model(&BimoduleSpec::wi(1)).unwrap();
        let cx = Arc::new(Complex::new(
            Regime::Ordinary,
            0,
            vec![vec![w.clone()], vec![w.clone()]],
            vec![SumMap::identity(vec![w.clone()])],
        ));
        let id = GradedMap::identity(&cx);
        let h = find_homotopy(&c, &id).expect("identity complex is null-homotopic");
        assert!(h.homotopy_image().first_difference(&id).is_none());
        let eq = reduce(&c, &cx);
        eq.verify().unwrap();
        assert!(eq.tgt.terms.iter().all(|t| t.is_empty()));
    }

    #[test]
    fn p_extension_of_sigma() {
        let c = ctx(2, 3);
        let eps = standard::epsilon(&c, 1).unwrap();
        let s = Complex::new(
            Regime::Ordinary,
            -1,
            vec![vec![eps.src().clone()], vec![eps.tgt().clone()]],
            vec![{
                let mut m = SumMap::zero(vec![eps.src().clone()], vec![eps.tgt().clone()]);
                m.set(0, 0, eps.clone());
                m
            }],
        );
        let t = p_extend(&s, 3);
        assert_eq!(t.lo, -2);
        assert_eq!(t.terms.len(), 3);
        assert!(t.d(-2).get(0, 0).unwrap() == &BimoduleMap::identity(eps.src().clone()));
        t.check_nilpotent().unwrap();
    }
}
