//! Bimodule specifications and their realisation as block families of
//! sub-bimodules of ambient tensor products.
//!
//! A (W,W)-bimodule `X` is stored as the collection of blocks
//! `X_{t,s} = e_t X e_s`, each a sub-S-bimodule of the ambient tensor product
//! of its factors. The algebra acts through `P_{t,s} -> w_{t,s}` on slot 0
//! (left) and on the last slot (right).

use super::ambient::{Amb, Ambient, Factor, Key, MAX_FACTORS};
use crate::algebra::{path_weight, AlgebraElement, Algebra};
use crate::field::FieldParams;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, Var};
use dashmap::DashMap;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BimodError {
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("twist {0} not in {{-1, 0, 1}}")]
    BadTwist(i8),
    #[error("more than {MAX_FACTORS} tensor factors")]
    TooManyFactors,
    #[error("parameter mismatch between bimodules")]
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BimoduleKind {
    PlainW,
    Wi(usize),
    Wii1(usize),
    Tensor(Vec<BimoduleSpec>),
}

/// Which bimodule, with the twist `mu` of the differential on its generator
/// (`mu (x_i + x_{i+1})`) and an internal-degree shift.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BimoduleSpec {
    pub kind: BimoduleKind,
    pub twist: i8,
    pub shift: i32,
}

impl BimoduleSpec {
    pub fn w() -> Self {
        BimoduleSpec { kind: BimoduleKind::PlainW, twist: 0, shift: 0 }
    }

    pub fn wi(i: usize) -> Self {
        BimoduleSpec { kind: BimoduleKind::Wi(i), twist: 0, shift: 0 }
    }

    pub fn wii1(i: usize) -> Self {
        BimoduleSpec { kind: BimoduleKind::Wii1(i), twist: 0, shift: 0 }
    }

    /// Tensor product over W; nested tensors and copies of W are flattened.
    pub fn tensor(parts: Vec<BimoduleSpec>) -> Self {
        let mut flat = Vec::new();
        let mut shift = 0;
        for p in parts {
            match p.kind {
                BimoduleKind::PlainW => shift += p.shift,
                BimoduleKind::Tensor(inner) => {
                    shift += p.shift;
                    flat.extend(inner);
                }
                _ => flat.push(p),
            }
        }
        match flat.len() {
            0 => BimoduleSpec { kind: BimoduleKind::PlainW, twist: 0, shift },
            1 => {
                let mut s = flat.pop().unwrap();
                s.shift += shift;
                s
            }
            _ => BimoduleSpec { kind: BimoduleKind::Tensor(flat), twist: 0, shift },
        }
    }

    pub fn twisted(mut self, mu: i8) -> Self {
        self.twist = mu;
        self
    }

    pub fn shifted(mut self, m: i32) -> Self {
        self.shift += m;
        self
    }

    /// Tensor factors with their twists.
    pub fn factors(&self) -> Vec<(Factor, i8)> {
        match &self.kind {
            BimoduleKind::PlainW => vec![],
            BimoduleKind::Wi(i) => vec![(Factor::Simple(*i), self.twist)],
            BimoduleKind::Wii1(i) => vec![(Factor::Thick(*i), self.twist)],
            BimoduleKind::Tensor(parts) => parts.iter().flat_map(|p| p.factors()).collect(),
        }
    }

    pub fn total_shift(&self) -> i32 {
        match &self.kind {
            BimoduleKind::Tensor(parts) => self.shift + parts.iter().map(|p| p.total_shift()).sum::<i32>(),
            _ => self.shift,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), BimodError> {
        if !(-1..=1).contains(&self.twist) {
            return Err(BimodError::BadTwist(self.twist));
        }
        match &self.kind {
            BimoduleKind::PlainW => Ok(()),
            BimoduleKind::Wi(i) if *i >= 1 && *i < n => Ok(()),
            BimoduleKind::Wii1(i) if *i >= 1 && *i + 2 <= n => Ok(()),
            BimoduleKind::Wi(i) | BimoduleKind::Wii1(i) => Err(BimodError::IndexOutOfRange { index: *i, n }),
            BimoduleKind::Tensor(parts) => {
                if self.factors().len() > MAX_FACTORS {
                    return Err(BimodError::TooManyFactors);
                }
                parts.iter().try_for_each(|p| p.validate(n))
            }
        }
    }

    /// Short human-readable name, e.g. `W1^{-e1}{-2} W2`.
    pub fn name(&self) -> String {
        let base = match &self.kind {
            BimoduleKind::PlainW => "W".to_string(),
            BimoduleKind::Wi(i) => format!("W{i}"),
            BimoduleKind::Wii1(i) => format!("W{i},{}", i + 1),
            BimoduleKind::Tensor(parts) => parts.iter().map(|p| p.name()).collect::<Vec<_>>().join(" "),
        };
        let tw = match self.twist {
            0 => String::new(),
            1 => "^{e1}".into(),
            -1 => "^{-e1}".into(),
            t => format!("^{{{t}e1}}"),
        };
        let sh = if self.shift != 0 { format!("{{{}}}", self.shift) } else { String::new() };
        if matches!(self.kind, BimoduleKind::Tensor(_)) && (self.shift != 0 || self.twist != 0) {
            format!("({base}){tw}{sh}")
        } else {
            format!("{base}{tw}{sh}")
        }
    }
}

impl fmt::Display for BimoduleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Degree-`pd` part of one block: echelon form of its span and the greedy
/// basis `(generator index, monomial)`.
pub struct BlockSpace {
    pub pd: u32,
    pub ech: Mutex<Echelon>,
    pub basis: Vec<(usize, Monomial)>,
}

impl BlockSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Block decomposition shared by all bimodules with the same tensor factors.
pub struct Structure {
    n: usize,
    field: FieldParams,
    amb: Arc<Ambient>,
    gens: BTreeMap<(usize, usize), Vec<(u32, Amb)>>,
    spaces: DashMap<(usize, usize, u32), Arc<BlockSpace>>,
}

impl Structure {
    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.amb
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous left-S generators of block `(t,s)` with their polynomial degrees.
    pub fn generators(&self, t: usize, s: usize) -> &[(u32, Amb)] {
        self.gens.get(&(t, s)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn space(&self, t: usize, s: usize, pd: u32) -> Arc<BlockSpace> {
        if let Some(r) = self.spaces.get(&(t, s, pd)) {
            return r.clone();
        }
        let idx = self.amb.index(pd);
        let mut ech = Echelon::new(self.field, idx.len());
        let mut basis = Vec::new();
        for (g, (gd, amb)) in self.generators(t, s).iter().enumerate() {
            if *gd > pd || !(pd - gd).is_multiple_of(2) {
                continue;
            }
            for m in Monomial::all_of_total(self.n, true, (pd - gd) / 2) {
                let v = self.amb.to_sparse(&amb.left_mul(&Polynomial::monomial(self.n, self.field, m, 1)), pd);
                if let crate::linalg::Insert::Pivot(_) = ech.insert(&v) {
                    basis.push((g, m));
                }
            }
        }
        let r = Arc::new(BlockSpace { pd, ech: Mutex::new(ech), basis });
        self.spaces.entry((t, s, pd)).or_insert(r).clone()
    }

    /// Membership of a homogeneous ambient element in block `(t,s)`.
    pub fn contains(&self, t: usize, s: usize, a: &Amb) -> bool {
        if a.is_zero() {
            return true;
        }
        let Some(pd) = self.amb.polydeg(a) else {
            return false;
        };
        let sp = self.space(t, s, pd);
        let v = self.amb.to_sparse(a, pd);
        let mut e = sp.ech.lock().unwrap();
        e.contains(&v)
    }

    /// Canonical remainder modulo block `(t,s)` in polynomial degree `pd`.
    pub fn remainder(&self, t: usize, s: usize, pd: u32, v: &SparseVec) -> SparseVec {
        let sp = self.space(t, s, pd);
        let mut e = sp.ech.lock().unwrap();
        e.reduce(v)
    }

    pub fn basis_element(&self, t: usize, s: usize, gen: usize, m: &Monomial) -> Amb {
        self.gens[&(t, s)][gen].1.left_mul(&Polynomial::monomial(self.n, self.field, *m, 1))
    }
}

/// A bimodule: block structure together with twists and shift.
pub struct BimoduleModel {
    spec: BimoduleSpec,
    structure: Arc<Structure>,
    twists: Vec<i8>,
    shift: i32,
}

impl BimoduleModel {
    pub fn spec(&self) -> &BimoduleSpec {
        &self.spec
    }

    pub fn structure(&self) -> &Arc<Structure> {
        &self.structure
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.structure.amb
    }

    pub fn n(&self) -> usize {
        self.structure.n
    }

    pub fn field(&self) -> FieldParams {
        self.structure.field
    }

    pub fn twists(&self) -> &[i8] {
        &self.twists
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn factors(&self) -> &[Factor] {
        self.structure.amb.factors()
    }

    /// Polynomial degree of the ambient realisation of internal degree `d` in block `(t,s)`.
    pub fn polydeg_for(&self, t: usize, s: usize, d: i64) -> Option<u32> {
        let pd = d - (s as i64 - t as i64) - self.shift as i64;
        (pd >= 0 && pd % 2 == 0).then_some(pd as u32)
    }

    pub fn internal_degree(&self, t: usize, s: usize, pd: u32) -> i64 {
        pd as i64 + (s as i64 - t as i64) + self.shift as i64
    }

    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..=n).flat_map(|t| (0..=n).map(move |s| (t, s))).collect()
    }

    /// Dimension of the internal-degree-`d` part.
    pub fn dim(&self, d: i64) -> usize {
        self.blocks()
            .into_iter()
            .filter_map(|(t, s)| self.polydeg_for(t, s, d).map(|pd| self.structure.space(t, s, pd).dim()))
            .sum()
    }

    pub fn zero(&self) -> BimoduleElement {
        BimoduleElement { n: self.n(), field: self.field(), blocks: BTreeMap::new() }
    }

    /// Differential of an ambient element sitting in block `(t,s)`.
    pub fn differential_amb(&self, t: usize, s: usize, a: &Amb) -> Amb {
        let amb = self.ambient();
        let mut r = amb.differential(a, &self.twists);
        let c = self.field().from_i64(s as i64 - t as i64);
        if c != 0 {
            r.add_scaled(&a.left_mul(&Polynomial::var(self.n(), self.field(), Var::Y)), c);
        }
        r
    }

    pub fn differential(&self, m: &BimoduleElement) -> BimoduleElement {
        let mut r = self.zero();
        for (&(t, s), a) in &m.blocks {
            r.add_block((t, s), &self.differential_amb(t, s, a));
        }
        r
    }

    pub fn left_act(&self, a: &AlgebraElement, m: &BimoduleElement) -> BimoduleElement {
        let mut r = self.zero();
        for (&(t, u), f) in a.blocks() {
            let g = f.mul(&path_weight(self.n(), self.field(), t, u));
            for (&(u2, s), x) in &m.blocks {
                if u2 == u {
                    r.add_block((t, s), &x.left_mul(&g));
                }
            }
        }
        r
    }

    pub fn right_act(&self, m: &BimoduleElement, b: &AlgebraElement) -> BimoduleElement {
        let amb = self.ambient();
        let mut r = self.zero();
        for (&(t, u), x) in &m.blocks {
            for (&(u2, s), f) in b.blocks() {
                if u2 == u {
                    let g = f.mul(&path_weight(self.n(), self.field(), u, s));
                    r.add_block((t, s), &amb.right_mul(x, &g));
                }
            }
        }
        r
    }

    /// Check that every block component lies in the bimodule.
    pub fn contains(&self, m: &BimoduleElement) -> bool {
        m.blocks.iter().all(|(&(t, s), a)| {
            let amb = self.ambient();
            let mut degs: Vec<u32> = Vec::new();
            for (k, f) in a.terms() {
                for (mono, _) in f.terms() {
                    degs.push(mono.degree() + amb.key_degree(k));
                }
            }
            degs.sort();
            degs.dedup();
            degs.iter().all(|&d| self.structure.contains(t, s, &amb.homogeneous_part(a, d)))
        })
    }

    /// The canonical generator: `sum_j 1 (x) ... (x) 1` over the allowed idempotents.
    pub fn generator(&self) -> BimoduleElement {
        let n = self.n();
        let mut r = self.zero();
        for j in 0..=n {
            if self.factors().iter().all(|f| allowed(f, j)) {
                r.add_block((j, j), &self.ambient().one());
            }
        }
        r
    }

    /// Greedy basis of internal degree `d`: `(t, s, generator index, monomial)`.
    pub fn generic_basis(&self, d: i64) -> Vec<(usize, usize, usize, Monomial)> {
        let mut out = Vec::new();
        for (t, s) in self.blocks() {
            if let Some(pd) = self.polydeg_for(t, s, d) {
                for (g, m) in &self.structure.space(t, s, pd).basis {
                    out.push((t, s, *g, *m));
                }
            }
        }
        out
    }
}

/// Whether the idempotent `e_j` passes through a factor.
pub fn allowed(f: &Factor, j: usize) -> bool {
    match *f {
        Factor::Simple(i) => j != i,
        Factor::Thick(i) => j != i && j != i + 1,
    }
}

/// A bimodule element: one ambient element per block.
#[derive(Clone, PartialEq, Eq)]
pub struct BimoduleElement {
    n: usize,
    field: FieldParams,
    blocks: BTreeMap<(usize, usize), Amb>,
}

impl BimoduleElement {
    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Amb> {
        &self.blocks
    }

    pub fn block(&self, ts: (usize, usize)) -> Amb {
        self.blocks.get(&ts).cloned().unwrap_or_else(|| Amb::zero(self.n, self.field))
    }

    pub fn from_block(n: usize, field: FieldParams, ts: (usize, usize), a: Amb) -> Self {
        let mut r = BimoduleElement { n, field, blocks: BTreeMap::new() };
        r.add_block(ts, &a);
        r
    }

    pub fn add_block(&mut self, ts: (usize, usize), a: &Amb) {
        if a.is_zero() {
            return;
        }
        let e = self.blocks.entry(ts).or_insert_with(|| Amb::zero(a.n(), a.field()));
        e.add_assign(a);
        if e.is_zero() {
            self.blocks.remove(&ts);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, o: &BimoduleElement) -> BimoduleElement {
        let mut r = self.clone();
        for (ts, a) in &o.blocks {
            r.add_block(*ts, a);
        }
        r
    }

    pub fn scale(&self, c: u32) -> BimoduleElement {
        let mut r = BimoduleElement { n: self.n, field: self.field, blocks: BTreeMap::new() };
        for (ts, a) in &self.blocks {
            r.add_block(*ts, &a.scale(c));
        }
        r
    }

    pub fn sub(&self, o: &BimoduleElement) -> BimoduleElement {
        self.add(&o.scale(self.field.p() - 1))
    }
}

impl fmt::Debug for BimoduleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|(ts, a)| format!("{ts:?}: {a:?}")).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// Shared caches of ambients, block structures and models over one algebra.
pub struct BimodCtx {
    alg: Arc<Algebra>,
    ambients: DashMap<Vec<Factor>, Arc<Ambient>>,
    structures: DashMap<Vec<Factor>, Arc<Structure>>,
    models: DashMap<BimoduleSpec, Arc<BimoduleModel>>,
    homs: DashMap<(BimoduleSpec, BimoduleSpec, i32, bool), Arc<Vec<super::maps::BimoduleMap>>>,
}

impl BimodCtx {
    pub fn new(alg: Arc<Algebra>) -> Self {
        BimodCtx {
            alg,
            ambients: DashMap::new(),
            structures: DashMap::new(),
            models: DashMap::new(),
            homs: DashMap::new(),
        }
    }

    /// Cached basis of bimodule maps `src -> tgt` of internal degree `degree`.
    pub fn hom(
        &self,
        src: &Arc<BimoduleModel>,
        tgt: &Arc<BimoduleModel>,
        degree: i32,
        dg: bool,
    ) -> Arc<Vec<super::maps::BimoduleMap>> {
        let key = (src.spec().clone(), tgt.spec().clone(), degree, dg);
        if let Some(h) = self.homs.get(&key) {
            return h.clone();
        }
        let h = Arc::new(super::maps::hom_space(src, tgt, degree, dg));
        self.homs.entry(key).or_insert(h).clone()
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn field(&self) -> FieldParams {
        self.alg.field()
    }

    pub fn ambient(&self, factors: &[Factor]) -> Arc<Ambient> {
        if let Some(a) = self.ambients.get(factors) {
            return a.clone();
        }
        let a = Arc::new(Ambient::new(self.n(), self.field(), factors.to_vec()));
        self.ambients.entry(factors.to_vec()).or_insert(a).clone()
    }

    fn single_factor_gens(&self, f: Factor, t: usize, s: usize) -> Vec<Amb> {
        let n = self.n();
        let fp = self.field();
        let amb = self.ambient(&[f]);
        let mut out = Vec::new();
        for j in (0..=n).filter(|&j| allowed(&f, j)) {
            let l = path_weight(n, fp, t, j);
            let r = path_weight(n, fp, j, s);
            for c in f.cosets() {
                out.push(amb.pure_tensor(&[l.clone(), r.mul_mono(&c)]));
            }
        }
        out
    }

    pub fn structure(&self, factors: &[Factor]) -> Arc<Structure> {
        if let Some(s) = self.structures.get(factors) {
            return s.clone();
        }
        let n = self.n();
        let fp = self.field();
        let amb = self.ambient(factors);
        let mut gens: BTreeMap<(usize, usize), Vec<(u32, Amb)>> = BTreeMap::new();
        match factors.len() {
            0 => {
                for t in 0..=n {
                    for s in 0..=n {
                        let w = path_weight(n, fp, t, s);
                        let a = Amb::pure([0; MAX_FACTORS], w);
                        let d = amb.polydeg(&a).unwrap();
                        gens.insert((t, s), vec![(d, a)]);
                    }
                }
            }
            1 => {
                for t in 0..=n {
                    for s in 0..=n {
                        let cands = self.single_factor_gens(factors[0], t, s);
                        gens.insert((t, s), prune(&amb, cands));
                    }
                }
            }
            m => {
                let left = self.structure(&factors[..m - 1]);
                let lamb = self.ambient(&factors[..m - 1]);
                let ramb = self.ambient(&factors[m - 1..]);
                for t in 0..=n {
                    for s in 0..=n {
                        let mut cands = Vec::new();
                        for u in 0..=n {
                            let rg = self.single_factor_gens(factors[m - 1], u, s);
                            for (_, g) in left.generators(t, u) {
                                for h in &rg {
                                    cands.push(lamb.concat(g, &ramb, h, &amb));
                                }
                            }
                        }
                        gens.insert((t, s), prune(&amb, cands));
                    }
                }
            }
        }
        let st = Arc::new(Structure { n, field: fp, amb, gens, spaces: DashMap::new() });
        self.structures.entry(factors.to_vec()).or_insert(st).clone()
    }

    pub fn model(&self, spec: &BimoduleSpec) -> Result<Arc<BimoduleModel>, BimodError> {
        if let Some(m) = self.models.get(spec) {
            return Ok(m.clone());
        }
        spec.validate(self.n())?;
        let fs = spec.factors();
        let factors: Vec<Factor> = fs.iter().map(|x| x.0).collect();
        let twists: Vec<i8> = fs.iter().map(|x| x.1).collect();
        let structure = self.structure(&factors);
        let m = Arc::new(BimoduleModel { spec: spec.clone(), structure, twists, shift: spec.total_shift() });
        Ok(self.models.entry(spec.clone()).or_insert(m).clone())
    }

    /// Tensor product over W of two elements.
    pub fn tensor_elements(
        &self,
        x: &BimoduleModel,
        a: &BimoduleElement,
        y: &BimoduleModel,
        b: &BimoduleElement,
    ) -> Result<(Arc<BimoduleModel>, BimoduleElement), BimodError> {
        let spec = BimoduleSpec::tensor(vec![x.spec().clone(), y.spec().clone()]);
        let target = self.model(&spec)?;
        let mut r = target.zero();
        for (&(t, u), ga) in a.blocks() {
            for (&(u2, s), gb) in b.blocks() {
                if u == u2 {
                    r.add_block((t, s), &x.ambient().concat(ga, y.ambient(), gb, target.ambient()));
                }
            }
        }
        Ok((target, r))
    }
}

/// Keep a minimal generating subset (as a left S-module) of homogeneous candidates.
fn prune(amb: &Ambient, cands: Vec<Amb>) -> Vec<(u32, Amb)> {
    let n = amb.n();
    let fp = amb.field();
    let mut c: Vec<(u32, Amb)> = cands
        .into_iter()
        .filter(|a| !a.is_zero())
        .map(|a| (amb.polydeg(&a).expect("inhomogeneous generator"), a))
        .collect();
    c.sort_by_key(|x| x.0);
    let mut kept: Vec<(u32, Amb)> = Vec::new();
    let mut cur_deg = u32::MAX;
    let mut ech: Option<Echelon> = None;
    for (d, a) in c {
        if d != cur_deg {
            cur_deg = d;
            let idx = amb.index(d);
            let mut e = Echelon::new(fp, idx.len());
            for (kd, k) in &kept {
                if (d - kd) % 2 != 0 {
                    continue;
                }
                for m in Monomial::all_of_total(n, true, (d - kd) / 2) {
                    e.insert(&amb.to_sparse(&k.left_mul(&Polynomial::monomial(n, fp, m, 1)), d));
                }
            }
            ech = Some(e);
        }
        let e = ech.as_mut().unwrap();
        let v = amb.to_sparse(&a, d);
        if let crate::linalg::Insert::Pivot(_) = e.insert(&v) {
            kept.push((d, a));
        }
    }
    kept
}

/// Block-key helper for tests and families.
pub fn key_of(cosets: &[u8]) -> Key {
    let mut k = [0u8; MAX_FACTORS];
    k[..cosets.len()].copy_from_slice(cosets);
    k
}
