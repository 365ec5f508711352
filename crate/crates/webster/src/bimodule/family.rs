//! Explicit basis families for W, W_i, W_{i,i+1} and W_i W_{i+1} W_i, and a
//! greedy basis for every other bimodule.

use super::ambient::{Amb, Factor};
use super::model::{BimoduleElement, BimoduleKind, BimoduleModel};
use crate::algebra::{enumerate_basis, path_weight, NormalBasisElement};
use crate::linalg::{Echelon, Insert, SparseVec};
use crate::poly::{Monomial, Polynomial, Var};
use serde::Serialize;
use std::collections::BTreeMap;

/// Family tags: `Aleph(k)` spans `W_i`, `Beth(k)` spans `W_{i,i+1}`,
/// `Gimel(k)` spans `W_i W_{i+1} W_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Aleph(u8),
    Beth(u8),
    Gimel(u8),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Aleph(k) => format!("aleph{k}"),
            Family::Beth(k) => format!("beth{k}"),
            Family::Gimel(k) => format!("gimel{k}"),
        }
    }
}

/// Index of a basis element of a bimodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BimodBasisIndex {
    /// NE/SE basis element of W.
    Alg(NormalBasisElement),
    /// Member of an explicit family: `x^a y^b` prefix in `mono`, dot
    /// exponents `r, s, t` (for beth, `r = c_i`, `s = c_{i+1}`) and endpoint
    /// slots `j` (bottom), `l` (top) where the family needs them.
    Fam { fam: Family, mono: Monomial, r: u8, s: u8, t: u8, j: u8, l: u8 },
    /// Greedy basis element `mono * g` for generator `gen` of block `(t,s)`.
    Generic { t: u8, s: u8, gen: u16, mono: Monomial },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Alg,
    Aleph(usize),
    Beth(usize),
    Gimel(usize),
    Generic,
}

pub fn family_kind(model: &BimoduleModel) -> FamilyKind {
    match &model.spec().kind {
        BimoduleKind::PlainW => FamilyKind::Alg,
        BimoduleKind::Wi(i) => FamilyKind::Aleph(*i),
        BimoduleKind::Wii1(i) => FamilyKind::Beth(*i),
        BimoduleKind::Tensor(_) => match model.factors() {
            [Factor::Simple(a), Factor::Simple(b), Factor::Simple(c)] if *b == a + 1 && c == a => {
                FamilyKind::Gimel(*a)
            }
            _ => FamilyKind::Generic,
        },
    }
}

/// One family member with `mono = 1`: block `(top, bottom)`, slot polynomials,
/// whether `y` may appear in the prefix, and the parameters.
struct Seed {
    fam: Family,
    top: usize,
    bottom: usize,
    slots: Vec<Polynomial>,
    with_y: bool,
    rst: (u8, u8, u8),
    jl: (u8, u8),
}

fn seeds(model: &BimoduleModel, kind: FamilyKind) -> Vec<Seed> {
    let n = model.n();
    let f = model.field();
    let one = Polynomial::one(n, f);
    let x = |j: usize| Polynomial::var(n, f, Var::X(j));
    let xp = |j: usize, e: u8| Polynomial::var(n, f, Var::X(j)).pow(e as u32);
    let yx = |j: usize| Polynomial::y_minus_x(n, f, j);
    let w = |t: usize, s: usize| path_weight(n, f, t, s);
    let mut out = Vec::new();
    let mut push = |fam, top, bottom, slots: Vec<Polynomial>, with_y, rst, jl| {
        out.push(Seed { fam, top, bottom, slots, with_y, rst, jl });
    };
    match kind {
        FamilyKind::Aleph(i) => {
            for c in 0..2u8 {
                push(Family::Aleph(1), i, i, vec![yx(i), xp(i, c)], true, (c, 0, 0), (0, 0));
            }
            push(Family::Aleph(2), i, i, vec![one.clone(), yx(i + 1)], false, (0, 0, 0), (0, 0));
            for j in 0..=n {
                for l in 0..=n {
                    if j == i && l == i {
                        continue;
                    }
                    for c in 0..2u8 {
                        let slots = if j != i {
                            vec![w(l, j), xp(i, c)]
                        } else {
                            vec![one.clone(), xp(i, c).mul(&w(l, i))]
                        };
                        push(Family::Aleph(3), l, j, slots, true, (c, 0, 0), (j as u8, l as u8));
                    }
                }
            }
        }
        FamilyKind::Beth(i) => {
            let xc = |ci: u8, ci1: u8| xp(i, ci).mul(&xp(i + 1, ci1));
            let full: Vec<(u8, u8)> = (0..3).flat_map(|a| (0..2).map(move |b| (a, b))).collect();
            let b = |k: u8| Family::Beth(k);
            for &(ci, ci1) in &full {
                push(b(1), i, i, vec![yx(i), xc(ci, ci1)], true, (ci, ci1, 0), (0, 0));
            }
            for c2 in 0..2u8 {
                push(b(2), i, i, vec![one.clone(), yx(i + 1).mul(&yx(i + 2)).mul(&xp(i + 1, c2))], false, (0, c2, 0), (0, 0));
            }
            for &(ci, ci1) in &full {
                push(b(3), i + 1, i + 1, vec![one.clone(), yx(i + 2).mul(&xc(ci, ci1))], true, (ci, ci1, 0), (0, 0));
            }
            for c2 in 0..2u8 {
                push(b(4), i + 1, i + 1, vec![yx(i).mul(&yx(i + 1)), xp(i + 1, c2)], false, (0, c2, 0), (0, 0));
            }
            for (ci, ci1) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                push(b(5), i + 1, i, vec![yx(i).mul(&yx(i + 1)), xc(ci, ci1)], false, (ci, ci1, 0), (0, 0));
            }
            for &(ci, ci1) in &full {
                push(b(6), i + 1, i, vec![one.clone(), yx(i + 1).mul(&yx(i + 2)).mul(&xc(ci, ci1))], true, (ci, ci1, 0), (0, 0));
            }
            for &(ci, ci1) in &full {
                push(b(7), i, i + 1, vec![yx(i), xc(ci, ci1)], true, (ci, ci1, 0), (0, 0));
            }
            for (ci, ci1) in [(0, 0), (1, 0), (0, 1), (2, 0)] {
                push(b(8), i, i + 1, vec![one.clone(), yx(i + 2).mul(&xc(ci, ci1))], false, (ci, ci1, 0), (0, 0));
            }
            let inner = |k: usize| k == i || k == i + 1;
            for j in 0..=n {
                for l in 0..=n {
                    if inner(j) && inner(l) {
                        continue;
                    }
                    for &(ci, ci1) in &full {
                        let slots = if !inner(j) {
                            vec![w(l, j), xc(ci, ci1)]
                        } else {
                            vec![one.clone(), xc(ci, ci1).mul(&w(l, j))]
                        };
                        push(b(9), l, j, slots, true, (ci, ci1, 0), (j as u8, l as u8));
                    }
                }
            }
        }
        FamilyKind::Gimel(i) => {
            let g = |k: u8| Family::Gimel(k);
            let bits: Vec<(u8, u8, u8)> =
                (0..2).flat_map(|r| (0..2).flat_map(move |s| (0..2).map(move |t| (r, s, t)))).collect();
            let rt: Vec<(u8, u8)> = (0..2).flat_map(|r| (0..2).map(move |t| (r, t))).collect();
            for &(r, s, t) in &bits {
                push(g(1), i, i, vec![yx(i), xp(i, r), xp(i + 1, s), xp(i, t)], true, (r, s, t), (0, 0));
            }
            for s in 0..2u8 {
                push(g(2), i, i, vec![one.clone(), yx(i + 1), xp(i + 1, s), yx(i + 1)], false, (0, s, 0), (0, 0));
            }
            push(g(3), i, i, vec![one.clone(), one.clone(), one.clone(), yx(i + 1).mul(&yx(i + 2))], false, (0, 0, 0), (0, 0));
            for &(r, s, t) in &bits {
                push(g(4), i + 1, i + 1, vec![one.clone(), yx(i + 1).mul(&xp(i, r)), xp(i + 1, s), xp(i, t)], true, (r, s, t), (0, 0));
            }
            for &(r, t) in &rt {
                push(g(5), i + 1, i + 1, vec![one.clone(), xp(i, r), yx(i + 2), xp(i, t)], false, (r, 0, t), (0, 0));
            }
            for &(r, s, t) in &bits {
                push(g(6), i, i + 1, vec![one.clone(), yx(i + 1).mul(&xp(i, r)), xp(i + 1, s), xp(i, t)], true, (r, s, t), (0, 0));
            }
            for &(r, t) in &rt {
                push(g(7), i, i + 1, vec![one.clone(), xp(i, r), yx(i + 2), xp(i, t)], false, (r, 0, t), (0, 0));
            }
            for t in 0..2u8 {
                push(g(8), i, i + 1, vec![yx(i), one.clone(), one.clone(), xp(i, t)], false, (0, 0, t), (0, 0));
            }
            for &(r, s, t) in &bits {
                push(g(9), i + 1, i, vec![one.clone(), yx(i + 1).mul(&xp(i, r)), xp(i + 1, s), yx(i + 1).mul(&xp(i, t))], true, (r, s, t), (0, 0));
            }
            for &(r, t) in &rt {
                push(g(10), i + 1, i, vec![one.clone(), xp(i, r), yx(i + 2), yx(i + 1).mul(&xp(i, t))], false, (r, 0, t), (0, 0));
            }
            for r in 0..2u8 {
                push(g(11), i + 1, i, vec![one.clone(), yx(i).mul(&yx(i + 1)).mul(&xp(i, r)), one.clone(), one.clone()], false, (r, 0, 0), (0, 0));
            }
            let inner = |k: usize| k == i || k == i + 1;
            for j in 0..=n {
                for l in 0..=n {
                    if inner(j) && inner(l) {
                        continue;
                    }
                    let slot = if !inner(j) {
                        if l != i {
                            1
                        } else {
                            0
                        }
                    } else if j == i + 1 {
                        2
                    } else {
                        3
                    };
                    for &(r, s, t) in &bits {
                        let mut slots = vec![one.clone(), xp(i, r), xp(i + 1, s), xp(i, t)];
                        slots[slot] = slots[slot].mul(&w(l, j));
                        push(g(12), l, j, slots, true, (r, s, t), (j as u8, l as u8));
                    }
                }
            }
            let _ = x;
        }
        FamilyKind::Alg | FamilyKind::Generic => {}
    }
    out
}

/// Realisation of a basis index: block `(top, bottom)` and ambient element.
pub fn realize(model: &BimoduleModel, idx: &BimodBasisIndex) -> ((usize, usize), Amb) {
    let n = model.n();
    let f = model.field();
    match idx {
        BimodBasisIndex::Alg(b) => {
            let (t, s) = b.block();
            let poly = Polynomial::monomial(n, f, b.mono, 1).mul(&path_weight(n, f, t, s));
            ((t, s), Amb::pure([0; super::ambient::MAX_FACTORS], poly))
        }
        BimodBasisIndex::Generic { t, s, gen, mono } => {
            let (t, s) = (*t as usize, *s as usize);
            ((t, s), model.structure().basis_element(t, s, *gen as usize, mono))
        }
        BimodBasisIndex::Fam { fam, mono, r, s, t, j, l } => {
            let kind = family_kind(model);
            let seed = seeds(model, kind)
                .into_iter()
                .find(|x| x.fam == *fam && x.rst == (*r, *s, *t) && x.jl == (*j, *l))
                .expect("index not valid for this bimodule");
            let amb = model.ambient().pure_tensor(&seed.slots);
            ((seed.top, seed.bottom), amb.left_mul(&Polynomial::monomial(n, f, *mono, 1)))
        }
    }
}

/// Element with a single basis index.
pub fn basis_element(model: &BimoduleModel, idx: &BimodBasisIndex) -> BimoduleElement {
    let (ts, a) = realize(model, idx);
    BimoduleElement::from_block(model.n(), model.field(), ts, a)
}

/// All basis indices of internal degree `d`, in a deterministic order.
pub fn enumerate_bimodule_basis(model: &BimoduleModel, d: i64) -> Vec<BimodBasisIndex> {
    let n = model.n();
    let kind = family_kind(model);
    match kind {
        FamilyKind::Alg => enumerate_basis(n, d - model.shift() as i64)
            .into_iter()
            .map(BimodBasisIndex::Alg)
            .collect(),
        FamilyKind::Generic => model
            .generic_basis(d)
            .into_iter()
            .map(|(t, s, g, m)| BimodBasisIndex::Generic { t: t as u8, s: s as u8, gen: g as u16, mono: m })
            .collect(),
        _ => {
            let amb = model.ambient();
            let mut out = Vec::new();
            for seed in seeds(model, kind) {
                let a = amb.pure_tensor(&seed.slots);
                let Some(pd0) = amb.polydeg(&a) else {
                    if a.is_zero() {
                        continue;
                    }
                    panic!("inhomogeneous family seed {:?}", seed.fam);
                };
                let d0 = model.internal_degree(seed.top, seed.bottom, pd0);
                if d < d0 || (d - d0) % 2 != 0 {
                    continue;
                }
                let tot = ((d - d0) / 2) as u32;
                for m in Monomial::all_of_total(n, seed.with_y, tot) {
                    out.push(BimodBasisIndex::Fam {
                        fam: seed.fam,
                        mono: m,
                        r: seed.rst.0,
                        s: seed.rst.1,
                        t: seed.rst.2,
                        j: seed.jl.0,
                        l: seed.jl.1,
                    });
                }
            }
            out.sort();
            out
        }
    }
}

pub fn format_index(model: &BimoduleModel, idx: &BimodBasisIndex) -> String {
    let n = model.n();
    match idx {
        BimodBasisIndex::Alg(b) => b.format(n),
        BimodBasisIndex::Generic { t, s, gen, mono } => {
            let a: Vec<String> = mono.x_exponents(n).iter().map(|x| x.to_string()).collect();
            format!("G[t={t},s={s},g={gen}](a=[{}],b={})", a.join(","), mono.y())
        }
        BimodBasisIndex::Fam { fam, mono, r, s, t, j, l } => {
            let a: Vec<String> = mono.x_exponents(n).iter().map(|x| x.to_string()).collect();
            let mut p = vec![format!("a=[{}]", a.join(",")), format!("b={}", mono.y())];
            match fam {
                Family::Aleph(k) => {
                    p.push(format!("c={r}"));
                    if *k == 3 {
                        p.push(format!("j={j},l={l}"));
                    }
                }
                Family::Beth(k) => {
                    p.push(format!("c=[{r},{s}]"));
                    if *k == 9 {
                        p.push(format!("j={j},l={l}"));
                    }
                }
                Family::Gimel(k) => {
                    p.push(format!("r={r},s={s},t={t}"));
                    if *k == 12 {
                        p.push(format!("j={j},l={l}"));
                    }
                }
            }
            format!("{}({})", fam.name(), p.join(","))
        }
    }
}

/// Coordinates of an element in the basis; `None` if it is not in the bimodule.
pub fn coordinates(model: &BimoduleModel, m: &BimoduleElement) -> Option<Vec<(BimodBasisIndex, u32)>> {
    let amb = model.ambient();
    let mut by_deg: BTreeMap<i64, BimoduleElement> = BTreeMap::new();
    for (&(t, s), a) in m.blocks() {
        let mut degs: Vec<u32> = a
            .terms()
            .iter()
            .flat_map(|(k, f)| f.terms().map(move |(mm, _)| (k, mm.degree())))
            .map(|(k, d)| d + amb.key_degree(k))
            .collect();
        degs.sort();
        degs.dedup();
        for pd in degs {
            let e = model.internal_degree(t, s, pd);
            by_deg
                .entry(e)
                .or_insert_with(|| model.zero())
                .add_block((t, s), &amb.homogeneous_part(a, pd));
        }
    }
    let mut out = Vec::new();
    for (d, part) in by_deg {
        let basis = enumerate_bimodule_basis(model, d);
        let mut per_block: BTreeMap<(usize, usize), Vec<(usize, Amb)>> = BTreeMap::new();
        for (k, idx) in basis.iter().enumerate() {
            let (ts, a) = realize(model, idx);
            per_block.entry(ts).or_default().push((k, a));
        }
        for (&(t, s), a) in part.blocks() {
            let pd = model.polydeg_for(t, s, d)?;
            let members = per_block.get(&(t, s))?;
            let idx = amb.index(pd);
            let mut ech = Echelon::with_tracking(model.field(), idx.len(), members.len() + 1);
            for (_, b) in members {
                if let Insert::Dependent(_) = ech.insert(&amb.to_sparse(b, pd)) {
                    panic!("basis family is dependent in block ({t},{s}) degree {d}");
                }
            }
            let sol: SparseVec = ech.solve(&amb.to_sparse(a, pd))?;
            for (pos, c) in sol {
                out.push((basis[members[pos as usize].0], c));
            }
        }
    }
    out.sort();
    Some(out)
}

/// Render an element as a basis combination.
pub fn format_element(model: &BimoduleModel, m: &BimoduleElement) -> String {
    let Some(c) = coordinates(model, m) else {
        return format!("<not in {}>", model.spec().name());
    };
    if c.is_empty() {
        return "0".into();
    }
    let f = model.field();
    let mut out = String::new();
    for (k, (idx, v)) in c.iter().enumerate() {
        let sv = f.to_signed(*v);
        if k > 0 {
            out.push_str(if sv < 0 { " - " } else { " + " });
        } else if sv < 0 {
            out.push('-');
        }
        if sv.unsigned_abs() != 1 {
            out.push_str(&format!("{}*", sv.unsigned_abs()));
        }
        out.push_str(&format_index(model, idx));
    }
    out
}
