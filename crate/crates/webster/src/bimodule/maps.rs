//! Bimodule homomorphisms.
//!
//! Every (W,W)-bimodule map `X -> Y` between our bimodules is the blockwise
//! restriction of a single S-bimodule map between the ambient tensor
//! products, so a map is stored as the images of the ambient left basis
//! `1 (x) b_1 (x) ... (x) b_m`.

use super::ambient::{Amb, Ambient, Key};
use super::model::{BimodCtx, BimodError, BimoduleElement, BimoduleModel, BimoduleSpec};
use crate::linalg::{nullspace, solve, SparseVec};
use crate::poly::{Monomial, Polynomial, Var};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct BimoduleMap {
    src: Arc<BimoduleModel>,
    tgt: Arc<BimoduleModel>,
    degree: i32,
    images: Vec<Amb>,
}

impl fmt::Debug for BimoduleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} (deg {}): {:?}", self.src.spec(), self.tgt.spec(), self.degree, self.images)
    }
}

impl PartialEq for BimoduleMap {
    fn eq(&self, o: &Self) -> bool {
        self.src.spec() == o.src.spec() && self.tgt.spec() == o.tgt.spec() && self.images == o.images
    }
}

/// Polynomial-degree offset of a map of internal degree `degree`.
pub fn kappa(src: &BimoduleModel, tgt: &BimoduleModel, degree: i32) -> i64 {
    degree as i64 + src.shift() as i64 - tgt.shift() as i64
}

impl BimoduleMap {
    /// Map given by the images of the ambient left basis keys.
    pub fn from_fn(
        src: Arc<BimoduleModel>,
        tgt: Arc<BimoduleModel>,
        degree: i32,
        mut f: impl FnMut(&[Monomial]) -> Amb,
    ) -> Self {
        let images = src.ambient().keys().iter().map(|k| f(&src.ambient().key_monomials(k))).collect();
        BimoduleMap { src, tgt, degree, images }
    }

    pub fn zero(src: Arc<BimoduleModel>, tgt: Arc<BimoduleModel>, degree: i32) -> Self {
        let z = tgt.ambient().zero();
        let images = vec![z; src.ambient().keys().len()];
        BimoduleMap { src, tgt, degree, images }
    }

    pub fn identity(m: Arc<BimoduleModel>) -> Self {
        let amb = m.ambient().clone();
        let images = amb.keys().iter().map(|k| amb.unit_key(*k)).collect();
        BimoduleMap { src: m.clone(), tgt: m, degree: 0, images }
    }

    pub fn src(&self) -> &Arc<BimoduleModel> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<BimoduleModel> {
        &self.tgt
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn images(&self) -> &[Amb] {
        &self.images
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|a| a.is_zero())
    }

    fn key_pos(&self, k: &Key) -> usize {
        self.src.ambient().keys().binary_search(k).expect("unknown key")
    }

    pub fn apply_amb(&self, a: &Amb) -> Amb {
        let mut r = self.tgt.ambient().zero();
        for (k, f) in a.terms() {
            r.add_assign(&self.images[self.key_pos(k)].left_mul(f));
        }
        r
    }

    pub fn apply(&self, m: &BimoduleElement) -> BimoduleElement {
        let mut r = self.tgt.zero();
        for (ts, a) in m.blocks() {
            r.add_block(*ts, &self.apply_amb(a));
        }
        r
    }

    /// `self o other`.
    pub fn compose(&self, other: &BimoduleMap) -> BimoduleMap {
        assert_eq!(other.tgt.spec(), self.src.spec(), "composition mismatch");
        let images = other.images.iter().map(|a| self.apply_amb(a)).collect();
        BimoduleMap { src: other.src.clone(), tgt: self.tgt.clone(), degree: self.degree + other.degree, images }
    }

    pub fn add(&self, o: &BimoduleMap) -> BimoduleMap {
        assert!(self.src.spec() == o.src.spec() && self.tgt.spec() == o.tgt.spec(), "sum mismatch");
        let images = self.images.iter().zip(&o.images).map(|(a, b)| a.add(b)).collect();
        BimoduleMap { src: self.src.clone(), tgt: self.tgt.clone(), degree: self.degree, images }
    }

    pub fn scale(&self, c: u32) -> BimoduleMap {
        let images = self.images.iter().map(|a| a.scale(c)).collect();
        BimoduleMap { src: self.src.clone(), tgt: self.tgt.clone(), degree: self.degree, images }
    }

    pub fn sub(&self, o: &BimoduleMap) -> BimoduleMap {
        self.add(&o.scale(self.src.field().p() - 1))
    }

    pub fn neg(&self) -> BimoduleMap {
        self.scale(self.src.field().p() - 1)
    }

    /// `F(1 (x) b . z) - F(1 (x) b) . z` for the first failing key and variable.
    pub fn check_right_linear(&self) -> Result<(), String> {
        let samb = self.src.ambient();
        let tamb = self.tgt.ambient();
        let n = self.src.n();
        let f = self.src.field();
        for (pos, k) in samb.keys().iter().enumerate() {
            for v in (1..=n).map(Var::X).chain([Var::Y]) {
                let z = Polynomial::var(n, f, v);
                let lhs = self.apply_amb(&samb.right_mul(&samb.unit_key(*k), &z));
                let rhs = tamb.right_mul(&self.images[pos], &z);
                if lhs != rhs {
                    return Err(format!("not right linear at key {:?}, variable {v:?}", &k[..samb.len()]));
                }
            }
        }
        Ok(())
    }

    /// Every block generator of the source lands in the target block.
    pub fn check_integral(&self) -> Result<(), String> {
        let st = self.src.structure();
        for (t, s) in self.src.blocks() {
            for (g, (_, a)) in st.generators(t, s).iter().enumerate() {
                let img = self.apply_amb(a);
                if !self.tgt.structure().contains(t, s, &img) {
                    return Err(format!("generator {g} of block ({t},{s}) leaves the target"));
                }
            }
        }
        Ok(())
    }

    /// Commutes with the differentials.
    pub fn check_dg(&self) -> Result<(), String> {
        let samb = self.src.ambient();
        let tamb = self.tgt.ambient();
        for (pos, k) in samb.keys().iter().enumerate() {
            let lhs = self.apply_amb(&samb.differential(&samb.unit_key(*k), self.src.twists()));
            let rhs = tamb.differential(&self.images[pos], self.tgt.twists());
            if lhs != rhs {
                return Err(format!("does not commute with d at key {:?}", &k[..samb.len()]));
            }
        }
        Ok(())
    }

    /// `d o F - F o d`, as a map of degree `degree + 2`.
    pub fn dg_defect(&self) -> BimoduleMap {
        let samb = self.src.ambient();
        let tamb = self.tgt.ambient();
        let images = samb
            .keys()
            .iter()
            .enumerate()
            .map(|(pos, k)| {
                let lhs = tamb.differential(&self.images[pos], self.tgt.twists());
                lhs.sub(&self.apply_amb(&samb.differential(&samb.unit_key(*k), self.src.twists())))
            })
            .collect();
        BimoduleMap { src: self.src.clone(), tgt: self.tgt.clone(), degree: self.degree + 2, images }
    }

    pub fn check_bimodule_map(&self) -> Result<(), String> {
        self.check_right_linear()?;
        self.check_integral()
    }

    /// `self (x) id_Y`.
    pub fn tensor_right(&self, ctx: &BimodCtx, y: &Arc<BimoduleModel>) -> Result<BimoduleMap, BimodError> {
        let src = ctx.model(&BimoduleSpec::tensor(vec![self.src.spec().clone(), y.spec().clone()]))?;
        let tgt = ctx.model(&BimoduleSpec::tensor(vec![self.tgt.spec().clone(), y.spec().clone()]))?;
        let xs = self.src.ambient();
        let ya = y.ambient();
        let m = xs.len();
        let mut images = Vec::new();
        for k in src.ambient().keys() {
            let mut kx = [0u8; super::ambient::MAX_FACTORS];
            kx[..m].copy_from_slice(&k[..m]);
            let mut ky = [0u8; super::ambient::MAX_FACTORS];
            ky[..ya.len()].copy_from_slice(&k[m..m + ya.len()]);
            let img = &self.images[self.key_pos(&kx)];
            images.push(self.tgt.ambient().concat(img, ya, &ya.unit_key(ky), tgt.ambient()));
        }
        Ok(BimoduleMap { src, tgt, degree: self.degree, images })
    }

    /// `id_X (x) self`.
    pub fn tensor_left(&self, ctx: &BimodCtx, x: &Arc<BimoduleModel>) -> Result<BimoduleMap, BimodError> {
        let src = ctx.model(&BimoduleSpec::tensor(vec![x.spec().clone(), self.src.spec().clone()]))?;
        let tgt = ctx.model(&BimoduleSpec::tensor(vec![x.spec().clone(), self.tgt.spec().clone()]))?;
        let xa = x.ambient();
        let m = xa.len();
        let ys = self.src.ambient();
        let mut images = Vec::new();
        for k in src.ambient().keys() {
            let mut kx = [0u8; super::ambient::MAX_FACTORS];
            kx[..m].copy_from_slice(&k[..m]);
            let mut ky = [0u8; super::ambient::MAX_FACTORS];
            ky[..ys.len()].copy_from_slice(&k[m..m + ys.len()]);
            let img = &self.images[self.key_pos(&ky)];
            images.push(xa.concat(&xa.unit_key(kx), self.tgt.ambient(), img, tgt.ambient()));
        }
        Ok(BimoduleMap { src, tgt, degree: self.degree, images })
    }

    /// Same images, reinterpreted between models with identical factors
    /// (used when only twists or shifts are relabelled).
    pub fn retarget(&self, src: Arc<BimoduleModel>, tgt: Arc<BimoduleModel>) -> BimoduleMap {
        assert_eq!(src.factors(), self.src.factors());
        assert_eq!(tgt.factors(), self.tgt.factors());
        BimoduleMap { src, tgt, degree: self.degree, images: self.images.clone() }
    }

    /// Coordinates of the images, for linear algebra over maps.
    pub fn to_sparse(&self, layout: &MapLayout) -> SparseVec {
        let tamb = self.tgt.ambient();
        let mut out = Vec::new();
        for (pos, img) in self.images.iter().enumerate() {
            let Some((off, pd)) = layout.slots[pos] else {
                assert!(img.is_zero(), "image in impossible degree");
                continue;
            };
            for (c, v) in tamb.to_sparse(img, pd) {
                out.push((off + c, v));
            }
        }
        out
    }

    pub fn from_sparse(layout: &MapLayout, v: &SparseVec) -> BimoduleMap {
        let tamb = layout.tgt.ambient().clone();
        let mut images = vec![tamb.zero(); layout.slots.len()];
        for &(c, val) in v {
            let (pos, off, pd) = layout.locate(c);
            let e = tamb.index(pd).entries[(c - off) as usize];
            images[pos].add_key(e.0, &Polynomial::monomial(tamb.n(), tamb.field(), e.1, val));
        }
        BimoduleMap { src: layout.src.clone(), tgt: layout.tgt.clone(), degree: layout.degree, images }
    }
}

/// Coordinate layout of all ambient maps of a fixed degree between two models.
pub struct MapLayout {
    pub src: Arc<BimoduleModel>,
    pub tgt: Arc<BimoduleModel>,
    pub degree: i32,
    /// Per source key: offset and polynomial degree of its image.
    pub slots: Vec<Option<(u32, u32)>>,
    pub len: u32,
}

impl MapLayout {
    pub fn new(src: Arc<BimoduleModel>, tgt: Arc<BimoduleModel>, degree: i32) -> Self {
        let k = kappa(&src, &tgt, degree);
        let samb = src.ambient().clone();
        let tamb = tgt.ambient().clone();
        let mut slots = Vec::new();
        let mut off = 0u32;
        for key in samb.keys() {
            let pd = samb.key_degree(key) as i64 + k;
            if pd < 0 || pd % 2 != 0 {
                slots.push(None);
                continue;
            }
            let len = tamb.index(pd as u32).len() as u32;
            slots.push(Some((off, pd as u32)));
            off += len;
        }
        MapLayout { src, tgt, degree, slots, len: off }
    }

    fn locate(&self, c: u32) -> (usize, u32, u32) {
        let mut best = None;
        for (pos, s) in self.slots.iter().enumerate() {
            if let Some((off, pd)) = s {
                if *off <= c {
                    best = Some((pos, *off, *pd));
                }
            }
        }
        best.expect("coordinate out of range")
    }
}

/// Accumulates linear equations on unknown maps, keyed by equation group.
struct Rows {
    map: HashMap<(u32, u32), u32>,
}

impl Rows {
    fn new() -> Self {
        Rows { map: HashMap::new() }
    }

    fn row(&mut self, group: u32, c: u32) -> u32 {
        let n = self.map.len() as u32;
        *self.map.entry((group, c)).or_insert(n)
    }

    fn len(&self) -> usize {
        self.map.len()
    }
}

/// A unit unknown: key position and target coordinate.
struct Unknown {
    pos: usize,
    key: Key,
    mono: Monomial,
}

fn unknowns(layout: &MapLayout) -> Vec<Unknown> {
    let tamb = layout.tgt.ambient();
    let mut out = Vec::new();
    for (pos, s) in layout.slots.iter().enumerate() {
        if let Some((_, pd)) = s {
            for e in &tamb.index(*pd).entries {
                out.push(Unknown { pos, key: e.0, mono: e.1 });
            }
        }
    }
    out
}

/// Basis of the space of bimodule maps `src -> tgt` of internal degree
/// `degree`; with `dg`, only maps commuting with the differentials.
pub fn hom_space(src: &Arc<BimoduleModel>, tgt: &Arc<BimoduleModel>, degree: i32, dg: bool) -> Vec<BimoduleMap> {
    let layout = MapLayout::new(src.clone(), tgt.clone(), degree);
    let cols = hom_constraints(&layout, dg);
    let nrows = cols.1;
    let ns = nullspace(src.field(), nrows, &cols.0);
    ns.iter().map(|v| BimoduleMap::from_sparse(&layout, v)).collect()
}

/// Constraint columns (one per unknown, in layout order) and row count.
fn hom_constraints(layout: &MapLayout, dg: bool) -> (Vec<SparseVec>, usize) {
    let src = &layout.src;
    let tgt = &layout.tgt;
    let samb: &Arc<Ambient> = src.ambient();
    let tamb: &Arc<Ambient> = tgt.ambient();
    let n = src.n();
    let f = src.field();
    let k = kappa(src, tgt, layout.degree);
    let unk = unknowns(layout);
    let vars: Vec<Var> = (1..=n).map(Var::X).chain([Var::Y]).collect();
    let one_mono = |m: &Monomial| Polynomial::monomial(n, f, *m, 1);

    // For each source key position: contributions c with key_k * z = sum_k' c_{k'} key_{k'}.
    let keys = samb.keys();
    let mut rev: Vec<Vec<(u32, Polynomial, u32)>> = vec![Vec::new(); keys.len()];
    let mut group = 0u32;
    let mut right_groups: Vec<Vec<(u32, u32)>> = vec![Vec::new(); keys.len()];
    for (pos, key) in keys.iter().enumerate() {
        let Some((_, pd)) = layout.slots[pos] else { continue };
        for (zi, z) in vars.iter().enumerate() {
            let zp = Polynomial::var(n, f, *z);
            let prod = samb.right_mul(&samb.unit_key(*key), &zp);
            for (k2, c) in prod.terms() {
                let p2 = keys.binary_search(k2).unwrap();
                rev[p2].push((group, c.clone(), pd + 2));
            }
            right_groups[pos].push((group, zi as u32));
            group += 1;
        }
    }
    let mut dg_groups: Vec<Option<u32>> = vec![None; keys.len()];
    let mut dg_rev: Vec<Vec<(u32, Polynomial, u32)>> = vec![Vec::new(); keys.len()];
    if dg {
        for (pos, key) in keys.iter().enumerate() {
            let Some((_, pd)) = layout.slots[pos] else { continue };
            let d = samb.differential(&samb.unit_key(*key), src.twists());
            for (k2, c) in d.terms() {
                let p2 = keys.binary_search(k2).unwrap();
                dg_rev[p2].push((group, c.clone(), pd + 2));
            }
            dg_groups[pos] = Some(group);
            group += 1;
        }
    }
    // Integrality groups: (block, generator) with target polynomial degree.
    struct IntGroup {
        group: u32,
        t: usize,
        s: usize,
        pd: u32,
        coeffs: Vec<(usize, Polynomial)>,
    }
    let mut ints = Vec::new();
    for (t, s) in src.blocks() {
        for (gd, g) in src.structure().generators(t, s) {
            let pd = *gd as i64 + k;
            if pd < 0 {
                continue;
            }
            let coeffs = g.terms().iter().map(|(k2, c)| (keys.binary_search(k2).unwrap(), c.clone())).collect();
            ints.push(IntGroup { group, t, s, pd: pd as u32, coeffs });
            group += 1;
        }
    }
    let mut int_by_pos: Vec<Vec<(usize, Polynomial)>> = vec![Vec::new(); keys.len()];
    for (gi, ig) in ints.iter().enumerate() {
        for (p, c) in &ig.coeffs {
            int_by_pos[*p].push((gi, c.clone()));
        }
    }

    let mut rows = Rows::new();
    let mut cols = Vec::with_capacity(unk.len());
    let zpolys: Vec<Polynomial> = vars.iter().map(|z| Polynomial::var(n, f, *z)).collect();
    for u in &unk {
        let e = Amb::pure(u.key, one_mono(&u.mono));
        let (_, pd_e) = layout.slots[u.pos].unwrap();
        let mut col: Vec<(u32, u32)> = Vec::new();
        for (g, c, pd) in &rev[u.pos] {
            let v = e.left_mul(c);
            for (r, val) in tamb.to_sparse(&v, *pd) {
                col.push((rows.row(*g, r), val));
            }
        }
        for (g, zi) in &right_groups[u.pos] {
            let v = tamb.right_mul(&e, &zpolys[*zi as usize]);
            for (r, val) in tamb.to_sparse(&v, pd_e + 2) {
                col.push((rows.row(*g, r), f.neg(val)));
            }
        }
        if dg {
            for (g, c, pd) in &dg_rev[u.pos] {
                for (r, val) in tamb.to_sparse(&e.left_mul(c), *pd) {
                    col.push((rows.row(*g, r), val));
                }
            }
            if let Some(g) = dg_groups[u.pos] {
                let d = tamb.differential(&e, tgt.twists());
                for (r, val) in tamb.to_sparse(&d, pd_e + 2) {
                    col.push((rows.row(g, r), f.neg(val)));
                }
            }
        }
        for (gi, c) in &int_by_pos[u.pos] {
            let ig = &ints[*gi];
            let v = tamb.to_sparse(&e.left_mul(c), ig.pd);
            let rem = tgt.structure().remainder(ig.t, ig.s, ig.pd, &v);
            for (r, val) in rem {
                col.push((rows.row(ig.group, r), val));
            }
        }
        cols.push(crate::linalg::sparse_collect(f, col));
    }
    (cols, rows.len())
}

/// Find `sum_k c_k basis_k` satisfying linear conditions
/// `sum_k c_k L(basis_k) = target`, where `L` maps into a common layout.
pub fn solve_in_span(
    field: crate::field::FieldParams,
    images: &[SparseVec],
    nrows: usize,
    target: &SparseVec,
) -> Option<SparseVec> {
    solve(field, nrows, images, target)
}
