//! Independent reference implementations used as test oracles. They share no
//! code with the library beyond reading its public data.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;
use webster::algebra::{Algebra, AlgebraElement, GeneratorToken};
use webster::bimodule::BimodCtx;
use webster::field::FieldParams;
use webster::poly::{Monomial, Polynomial};
use webster::rep::calibrate_psi2;

pub fn field(p: u64) -> FieldParams {
    FieldParams::new(p).unwrap()
}

pub fn algebra(n: usize, p: u64) -> Arc<Algebra> {
    Arc::new(Algebra::new(n, field(p), calibrate_psi2(n, field(p)).convention))
}

pub fn ctx(n: usize, p: u64) -> BimodCtx {
    BimodCtx::new(algebra(n, p))
}

/// Dense polynomial: exponent vector `[x_1..x_n, y]` to a residue mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    pub n: usize,
    pub p: u64,
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl Dense {
    pub fn zero(n: usize, p: u64) -> Self {
        Dense { n, p, terms: BTreeMap::new() }
    }

    pub fn mono(n: usize, p: u64, e: Vec<u32>, c: i64) -> Self {
        let mut d = Dense::zero(n, p);
        d.add_term(e, c.rem_euclid(p as i64) as u64);
        d
    }

    pub fn var(n: usize, p: u64, idx: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[idx] = 1;
        Dense::mono(n, p, e, 1)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: u64) {
        let v = self.terms.entry(e.clone()).or_insert(0);
        *v = (*v + c) % self.p;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), *c);
        }
        r
    }

    pub fn scale(&self, c: i64) -> Dense {
        let c = c.rem_euclid(self.p as i64) as u64;
        let mut r = Dense::zero(self.n, self.p);
        for (e, v) in &self.terms {
            r.add_term(e.clone(), v * c % self.p);
        }
        r
    }

    pub fn sub(&self, o: &Dense) -> Dense {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        let mut r = Dense::zero(self.n, self.p);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                r.add_term(e, x * y % self.p);
            }
        }
        r
    }

    /// The derivation with `x -> x^2` on every variable.
    pub fn derive(&self) -> Dense {
        let mut r = Dense::zero(self.n, self.p);
        for (e, c) in &self.terms {
            for i in 0..e.len() {
                if e[i] > 0 {
                    let mut f = e.clone();
                    f[i] += 1;
                    r.add_term(f, c * (e[i] as u64 % self.p) % self.p);
                }
            }
        }
        r
    }

    /// `(f - s_i f) / (x_i - x_{i+1})` by the closed form on monomials.
    pub fn divided_difference(&self, i: usize) -> Dense {
        let (a_ix, b_ix) = (i - 1, i);
        let mut r = Dense::zero(self.n, self.p);
        for (e, c) in &self.terms {
            let (a, b) = (e[a_ix], e[b_ix]);
            let (hi, lo, sign) = if a >= b { (a, b, 1) } else { (b, a, self.p - 1) };
            for k in 0..hi - lo {
                let mut f = e.clone();
                f[a_ix] = hi - 1 - k;
                f[b_ix] = lo + k;
                r.add_term(f, c * sign % self.p);
            }
        }
        r
    }

    pub fn from_poly(f: &Polynomial) -> Dense {
        let n = f.n();
        let mut d = Dense::zero(n, f.field().p() as u64);
        for (m, c) in f.terms() {
            d.add_term(exps(n, m), *c as u64);
        }
        d
    }
}

pub fn exps(n: usize, m: &Monomial) -> Vec<u32> {
    let mut e = m.x_exponents(n);
    e.push(m.y());
    e
}

/// An element of V_n: one dense polynomial per black-strand slot.
pub type DenseVn = BTreeMap<usize, Dense>;

/// The action of one generator on V_n, written out directly from the
/// defining formulas of the polynomial representation.
pub fn act_token(tok: GeneratorToken, v: &DenseVn, n: usize, p: u64) -> DenseVn {
    let mut out: DenseVn = BTreeMap::new();
    let mut put = |k: usize, f: Dense| {
        let e = out.entry(k).or_insert_with(|| Dense::zero(n, p));
        *e = e.add(&f);
    };
    for (&k, f) in v {
        match tok {
            GeneratorToken::E(i) if i == k => put(k, f.clone()),
            GeneratorToken::E(_) => {}
            GeneratorToken::X(j) => put(k, f.mul(&Dense::var(n, p, j - 1))),
            GeneratorToken::Y => put(k, f.mul(&Dense::var(n, p, n))),
            GeneratorToken::Psi(j) if k + 1 == j => {
                put(j, f.mul(&Dense::var(n, p, n).sub(&Dense::var(n, p, j - 1))))
            }
            GeneratorToken::Psi(j) if k == j => put(j - 1, f.clone()),
            GeneratorToken::Psi(_) => {}
        }
    }
    out.retain(|_, f| !f.terms.is_empty());
    out
}

pub fn act_word(w: &[GeneratorToken], v: &DenseVn, n: usize, p: u64) -> DenseVn {
    w.iter().rev().fold(v.clone(), |acc, t| act_token(*t, &acc, n, p))
}

/// Action of an algebra element through the words of its basis terms.
pub fn act_element(a: &AlgebraElement, v: &DenseVn) -> DenseVn {
    let n = a.n();
    let p = a.field().p() as u64;
    let mut out: DenseVn = BTreeMap::new();
    for (b, c) in a.terms() {
        for (k, f) in act_word(&b.word(n), v, n, p) {
            let e = out.entry(k).or_insert_with(|| Dense::zero(n, p));
            *e = e.add(&f.scale(c as i64));
        }
    }
    out.retain(|_, f| !f.terms.is_empty());
    out
}

pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
}

/// Number of NE/SE basis elements in degree `d`: for each pair of slots the
/// crossings are forced and the dots form a monomial in n+1 variables of
/// degree 2 each.
pub fn basis_count(n: usize, d: i64) -> u64 {
    if d < 0 {
        return 0;
    }
    let mut total = 0;
    for t in 0..=n as i64 {
        for s in 0..=n as i64 {
            let rest = d - (t - s).abs();
            if rest >= 0 && rest % 2 == 0 {
                let m = (rest / 2) as u64;
                total += binomial(m + n as u64, n as u64);
            }
        }
    }
    total
}
