//! The standard maps between W, W_i, W_{i,i+1} and their tensor products.

use super::ambient::{Amb, Factor};
use super::maps::{hom_space, BimoduleMap, MapLayout};
use super::model::{BimodCtx, BimodError, BimoduleModel, BimoduleSpec};
use crate::linalg::{solve, SparseVec};
use crate::poly::{Polynomial, Var};
use std::sync::Arc;

fn mono_poly(m: &BimoduleModel, mono: &crate::poly::Monomial) -> Polynomial {
    Polynomial::monomial(m.n(), m.field(), *mono, 1)
}

fn xv(m: &BimoduleModel, j: usize) -> Polynomial {
    Polynomial::var(m.n(), m.field(), Var::X(j))
}

/// `theta = x_j (x) 1 - 1 (x) x_{j+1}` in the ambient of a single factor `W_j`.
fn theta(m: &BimoduleModel, j: usize) -> Amb {
    let amb = m.ambient();
    let one = Polynomial::one(m.n(), m.field());
    amb.pure_tensor(&[xv(m, j), one.clone()]).sub(&amb.pure_tensor(&[one, xv(m, j + 1)]))
}

/// Multiplication `W_i -> W`.
pub fn epsilon(ctx: &BimodCtx, i: usize) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&BimoduleSpec::wi(i))?;
    let tgt = ctx.model(&BimoduleSpec::w())?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| t2.ambient().pure_tensor(&[mono_poly(&t2, &ms[0])])))
}

/// `W -> W_i^{-e1}{-2}`, sending the unit to `theta`.
pub fn iota(ctx: &BimodCtx, i: usize) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&BimoduleSpec::w())?;
    let tgt = ctx.model(&BimoduleSpec::wi(i).twisted(-1).shifted(-2))?;
    let th = theta(&tgt, i);
    Ok(BimoduleMap::from_fn(src, tgt, 0, |_| th.clone()))
}

/// The triple tensor `W_a W_b W_a` with `{a,b} = {i,i+1}`.
pub fn triple_spec(i: usize, outer_first: bool) -> BimoduleSpec {
    let (a, b) = if outer_first { (i, i + 1) } else { (i + 1, i) };
    BimoduleSpec::tensor(vec![BimoduleSpec::wi(a), BimoduleSpec::wi(b), BimoduleSpec::wi(a)])
}

/// Outer index of the triple.
fn outer(i: usize, outer_first: bool) -> usize {
    if outer_first {
        i
    } else {
        i + 1
    }
}

/// Quotient term `W_a^{e1}{2}` of the triple.
pub fn quotient_spec(i: usize, outer_first: bool) -> BimoduleSpec {
    BimoduleSpec::wi(outer(i, outer_first)).twisted(1).shifted(2)
}

/// Inclusion `W_{i,i+1} -> W_a W_b W_a`.
pub fn alpha(ctx: &BimodCtx, i: usize, outer_first: bool) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&BimoduleSpec::wii1(i))?;
    let tgt = ctx.model(&triple_spec(i, outer_first))?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| {
        let one = Polynomial::one(t2.n(), t2.field());
        t2.ambient().pure_tensor(&[one.clone(), one.clone(), one, mono_poly(&t2, &ms[0])])
    }))
}

/// Projection `W_a W_b W_a -> W_a^{e1}{2}`, `f0 (x) f1 (x) f2 (x) f3 -> f0 (x) D_a(f1 f2) f3`.
pub fn pi(ctx: &BimodCtx, i: usize, outer_first: bool) -> Result<BimoduleMap, BimodError> {
    let a = outer(i, outer_first);
    let src = ctx.model(&triple_spec(i, outer_first))?;
    let tgt = ctx.model(&quotient_spec(i, outer_first))?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| {
        let f12 = mono_poly(&t2, &ms[0]).mul(&mono_poly(&t2, &ms[1]));
        let d = Factor::Simple(a).demazure(&f12);
        t2.ambient().pure_tensor(&[d, mono_poly(&t2, &ms[2])])
    }))
}

/// Section of `pi`: the generator goes to `-(1 (x) theta_b (x) 1)`.
pub fn tau(ctx: &BimodCtx, i: usize, outer_first: bool) -> Result<BimoduleMap, BimodError> {
    let b = if outer_first { i + 1 } else { i };
    let src = ctx.model(&quotient_spec(i, outer_first))?;
    let tgt = ctx.model(&triple_spec(i, outer_first))?;
    let t2 = tgt.clone();
    let one = Polynomial::one(t2.n(), t2.field());
    let mid = t2
        .ambient()
        .pure_tensor(&[one.clone(), xv(&t2, b), one.clone(), one.clone()])
        .sub(&t2.ambient().pure_tensor(&[one.clone(), one.clone(), xv(&t2, b + 1), one.clone()]))
        .scale(t2.field().p() - 1);
    let src2 = src.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| t2.ambient().right_mul(&mid, &mono_poly(&src2, &ms[0]))))
}

/// Retraction `W_a W_b W_a -> W_{i,i+1}` with `sigma alpha = id` and `sigma tau = 0`.
pub fn sigma(ctx: &BimodCtx, i: usize, outer_first: bool) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&triple_spec(i, outer_first))?;
    let tgt = ctx.model(&BimoduleSpec::wii1(i))?;
    let basis = hom_space(&src, &tgt, 0, false);
    let al = alpha(ctx, i, outer_first)?;
    let ta = tau(ctx, i, outer_first)?;
    let id = BimoduleMap::identity(tgt.clone());
    let l1 = MapLayout::new(tgt.clone(), tgt.clone(), 0);
    let zsrc = ctx.model(&quotient_spec(i, outer_first))?;
    let l2 = MapLayout::new(zsrc.clone(), tgt.clone(), 0);
    let cols: Vec<SparseVec> = basis
        .iter()
        .map(|s| {
            let mut v = s.compose(&al).to_sparse(&l1);
            v.extend(s.compose(&ta).to_sparse(&l2).into_iter().map(|(c, x)| (c + l1.len, x)));
            v
        })
        .collect();
    let target = id.to_sparse(&l1);
    let c = solve(ctx.field(), (l1.len + l2.len) as usize, &cols, &target).ok_or(BimodError::Mismatch)?;
    Ok(combine(&basis, &c, src, tgt))
}

/// `sum_k c_k maps_k`.
pub fn combine(maps: &[BimoduleMap], c: &SparseVec, src: Arc<BimoduleModel>, tgt: Arc<BimoduleModel>) -> BimoduleMap {
    let deg = maps.first().map_or(0, |m| m.degree());
    let mut r = BimoduleMap::zero(src, tgt, deg);
    for &(k, v) in c {
        r = r.add(&maps[k as usize].scale(v));
    }
    r
}

/// `W_a^{m1}{s1} W_a^{m2}{s2} -> W_a^{m2}{s1+s2}`, multiplying the first factor away.
pub fn collapse_first(ctx: &BimodCtx, x: &BimoduleSpec, y: &BimoduleSpec) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&BimoduleSpec::tensor(vec![x.clone(), y.clone()]))?;
    let tgt = ctx.model(&y.clone().shifted(x.total_shift()))?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| {
        t2.ambient().pure_tensor(&[mono_poly(&t2, &ms[0]), mono_poly(&t2, &ms[1])])
    }))
}

/// `W_a^{m1}{s1} W_a^{m2}{s2} -> W_a^{m1}{s1+s2}`, multiplying the second factor away.
pub fn collapse_second(ctx: &BimodCtx, x: &BimoduleSpec, y: &BimoduleSpec) -> Result<BimoduleMap, BimodError> {
    let src = ctx.model(&BimoduleSpec::tensor(vec![x.clone(), y.clone()]))?;
    let tgt = ctx.model(&x.clone().shifted(y.total_shift()))?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| {
        let one = Polynomial::one(t2.n(), t2.field());
        t2.ambient().pure_tensor(&[one, mono_poly(&t2, &ms[0]).mul(&mono_poly(&t2, &ms[1]))])
    }))
}

/// `W_a^{m1}{s1} W_a^{m2}{s2} -> W_a^{m1+m2+1}{s1+s2+2}`, `f0 (x) f1 (x) f2 -> f0 (x) D_a(f1) f2`.
pub fn middle_demazure(ctx: &BimodCtx, x: &BimoduleSpec, y: &BimoduleSpec) -> Result<BimoduleMap, BimodError> {
    let a = match y.factors().as_slice() {
        [(f, _)] => *f,
        _ => return Err(BimodError::Mismatch),
    };
    let src = ctx.model(&BimoduleSpec::tensor(vec![x.clone(), y.clone()]))?;
    let base = BimoduleSpec { twist: 0, shift: 0, ..y.clone() };
    let tgt = ctx.model(&base.twisted(x.twist + y.twist + 1).shifted(x.total_shift() + y.total_shift() + 2))?;
    let t2 = tgt.clone();
    Ok(BimoduleMap::from_fn(src, tgt, 0, |ms| {
        let one = Polynomial::one(t2.n(), t2.field());
        t2.ambient().pure_tensor(&[one, a.demazure(&mono_poly(&t2, &ms[0])).mul(&mono_poly(&t2, &ms[1]))])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Psi2Convention};
    use crate::field::FieldParams;

    fn ctx(n: usize) -> BimodCtx {
        BimodCtx::new(Arc::new(Algebra::new(n, FieldParams::new(101).unwrap(), Psi2Convention::STATED)))
    }

    #[test]
    fn epsilon_and_iota() {
        let c = ctx(2);
        let e = epsilon(&c, 1).unwrap();
        e.check_bimodule_map().unwrap();
        e.check_dg().unwrap();
        let i = iota(&c, 1).unwrap();
        i.check_bimodule_map().unwrap();
        i.check_dg().unwrap();
    }

    #[test]
    fn ses_maps() {
        let c = ctx(3);
        for of in [true, false] {
            let a = alpha(&c, 1, of).unwrap();
            a.check_bimodule_map().unwrap();
            a.check_dg().unwrap();
            let p = pi(&c, 1, of).unwrap();
            p.check_bimodule_map().unwrap();
            p.check_dg().unwrap();
            assert!(p.compose(&a).is_zero());
            let t = tau(&c, 1, of).unwrap();
            t.check_bimodule_map().unwrap();
            assert_eq!(p.compose(&t), BimoduleMap::identity(p.tgt().clone()));
            let s = sigma(&c, 1, of).unwrap();
            s.check_bimodule_map().unwrap();
            assert_eq!(s.compose(&a), BimoduleMap::identity(a.src().clone()));
            assert!(s.compose(&t).is_zero());
            let split = a.compose(&s).add(&t.compose(&p));
            assert_eq!(split, BimoduleMap::identity(a.tgt().clone()));
            assert!(s.check_dg().is_err() || t.check_dg().is_err());
        }
    }

    #[test]
    fn bb_maps() {
        let c = ctx(2);
        let x = BimoduleSpec::wi(1);
        let y = BimoduleSpec::wi(1).twisted(-1).shifted(-2);
        let u = middle_demazure(&c, &x, &y).unwrap();
        u.check_bimodule_map().unwrap();
        u.check_dg().unwrap();
        let v = collapse_second(&c, &x, &y).unwrap();
        v.check_bimodule_map().unwrap();
    }

    #[test]
    fn hom_space_contains_standard_maps() {
        let c = ctx(2);
        let e = epsilon(&c, 1).unwrap();
        let hs = hom_space(e.src(), e.tgt(), 0, true);
        assert_eq!(hs.len(), 1);
        let i = iota(&c, 1).unwrap();
        let hs = hom_space(i.src(), i.tgt(), 0, true);
        assert_eq!(hs.len(), 1);
    }
}
