//! Tensor products `S (x)_{L_1} S (x)_{L_2} ... (x)_{L_m} S` of the polynomial
//! ring `S = F_p[x_1..x_n, y]` over invariant subrings, in normal form.
//!
//! Slot `k >= 1` holds a coset representative of `S` over the invariants of
//! factor `k`; slot 0 holds an arbitrary polynomial. Normalisation moves
//! invariant coefficients right to left.

use crate::field::FieldParams;
use crate::linalg::SparseVec;
use crate::poly::{Monomial, Polynomial, Var};
use dashmap::DashMap;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Maximum number of tensor factors.
pub const MAX_FACTORS: usize = 6;

/// Invariant subring of a tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Factor {
    /// Invariants of the transposition of `x_i, x_{i+1}`.
    Simple(usize),
    /// Invariants of the permutations of `x_i, x_{i+1}, x_{i+2}`.
    Thick(usize),
}

impl Factor {
    pub fn index(&self) -> usize {
        match *self {
            Factor::Simple(i) | Factor::Thick(i) => i,
        }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match *self {
            Factor::Simple(i) => i >= 1 && i < n,
            Factor::Thick(i) => i >= 1 && i + 2 <= n,
        }
    }

    /// Coset representatives, in a fixed order.
    pub fn cosets(&self) -> Vec<Monomial> {
        match *self {
            Factor::Simple(i) => vec![Monomial::one(), Monomial::var(Var::X(i))],
            Factor::Thick(i) => {
                let m = |a: u32, b: u32| {
                    let mut e = Monomial::one();
                    e.set_exp(Var::X(i), a);
                    e.set_exp(Var::X(i + 1), b);
                    e
                };
                vec![m(0, 0), m(1, 0), m(0, 1), m(2, 0), m(1, 1), m(2, 1)]
            }
        }
    }

    pub fn coset_count(&self) -> usize {
        match self {
            Factor::Simple(_) => 2,
            Factor::Thick(_) => 6,
        }
    }

    /// The divided-difference operator attached to the factor.
    pub fn demazure(&self, f: &Polynomial) -> Polynomial {
        match *self {
            Factor::Simple(i) => f.divided_difference(i),
            Factor::Thick(i) => f
                .divided_difference(i)
                .divided_difference(i + 1)
                .divided_difference(i),
        }
    }

    /// First elementary symmetric polynomial in the factor's variables.
    pub fn e1(&self, n: usize, field: FieldParams) -> Polynomial {
        let k = match self {
            Factor::Simple(_) => 2,
            Factor::Thick(_) => 3,
        };
        let i = self.index();
        let mut r = Polynomial::zero(n, field);
        for j in i..i + k {
            r.add_term(Monomial::var(Var::X(j)), 1);
        }
        r
    }

    /// Coefficients `l_c`, invariant under the factor, with `f = sum_c l_c * coset_c`.
    pub fn decompose(&self, f: &Polynomial) -> Vec<Polynomial> {
        let n = f.n();
        let fp = f.field();
        match *self {
            Factor::Simple(i) => {
                let b = f.divided_difference(i);
                let a = f.sub(&b.mul_mono(&Monomial::var(Var::X(i))));
                vec![a, b]
            }
            Factor::Thick(i) => {
                let xi = Polynomial::var(n, fp, Var::X(i));
                let xi1 = Polynomial::var(n, fp, Var::X(i + 1));
                let g1 = f.divided_difference(i + 1);
                let g0 = f.sub(&xi1.mul(&g1));
                let split = |g: &Polynomial| {
                    let l2 = g.divided_difference(i).divided_difference(i + 1);
                    let l1 = g.divided_difference(i).sub(&l2.mul(&xi.add(&xi1)));
                    let l0 = g.sub(&l1.mul(&xi)).sub(&l2.mul(&xi).mul(&xi));
                    [l0, l1, l2]
                };
                let [a0, a1, a2] = split(&g0);
                let [b0, b1, b2] = split(&g1);
                vec![a0, a1, b0, a2, b1, b2]
            }
        }
    }
}

pub type Key = [u8; MAX_FACTORS];

/// An element of an ambient tensor product: slot-0 polynomial per coset key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Amb {
    n: usize,
    field: FieldParams,
    terms: BTreeMap<Key, Polynomial>,
}

impl Amb {
    pub fn zero(n: usize, field: FieldParams) -> Self {
        Amb { n, field, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    /// `f (x) b_1 (x) ... (x) b_m` for a key.
    pub fn pure(key: Key, f: Polynomial) -> Self {
        let mut r = Amb::zero(f.n(), f.field());
        r.add_key(key, &f);
        r
    }

    pub fn terms(&self) -> &BTreeMap<Key, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_key(&mut self, key: Key, f: &Polynomial) {
        if f.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(|| Polynomial::zero(f.n(), f.field()));
        e.add_assign(f);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign(&mut self, other: &Amb) {
        for (k, f) in &other.terms {
            self.add_key(*k, f);
        }
    }

    pub fn add_scaled(&mut self, other: &Amb, c: u32) {
        if c == 0 {
            return;
        }
        for (k, f) in &other.terms {
            self.add_key(*k, &f.scale(c));
        }
    }

    pub fn add(&self, other: &Amb) -> Amb {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &Amb) -> Amb {
        let mut r = self.clone();
        r.add_scaled(other, self.field.p() - 1);
        r
    }

    pub fn scale(&self, c: u32) -> Amb {
        let mut r = Amb::zero(self.n, self.field);
        r.add_scaled(self, c);
        r
    }

    /// Multiply slot 0 by `g`.
    pub fn left_mul(&self, g: &Polynomial) -> Amb {
        let mut r = Amb::zero(self.n, self.field);
        for (k, f) in &self.terms {
            r.add_key(*k, &f.mul(g));
        }
        r
    }
}

impl fmt::Debug for Amb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, p)| format!("({})[{}]", p.to_string_n(), k.iter().map(|x| x.to_string()).collect::<String>()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coordinates of the homogeneous part of a fixed polynomial degree.
pub struct AmbIndex {
    pub entries: Vec<(Key, Monomial)>,
    map: HashMap<(Key, Monomial), u32>,
}

impl AmbIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, key: &Key, m: &Monomial) -> Option<u32> {
        self.map.get(&(*key, *m)).copied()
    }
}

/// Normal forms and operations for one ambient tensor product.
pub struct Ambient {
    n: usize,
    field: FieldParams,
    factors: Vec<Factor>,
    keys: Vec<Key>,
    key_deg: HashMap<Key, u32>,
    cosets: Vec<Vec<Monomial>>,
    slot_memo: DashMap<(usize, Key, Monomial), Arc<Amb>>,
    index_memo: DashMap<u32, Arc<AmbIndex>>,
}

impl Ambient {
    pub fn new(n: usize, field: FieldParams, factors: Vec<Factor>) -> Self {
        assert!(factors.len() <= MAX_FACTORS, "too many tensor factors");
        for f in &factors {
            assert!(f.is_valid(n), "factor {f:?} invalid for n={n}");
        }
        let cosets: Vec<Vec<Monomial>> = factors.iter().map(|f| f.cosets()).collect();
        let mut keys = vec![[0u8; MAX_FACTORS]];
        for (k, f) in factors.iter().enumerate() {
            let mut next = Vec::new();
            for key in &keys {
                for c in 0..f.coset_count() {
                    let mut nk = *key;
                    nk[k] = c as u8;
                    next.push(nk);
                }
            }
            keys = next;
        }
        keys.sort();
        let key_deg = keys
            .iter()
            .map(|k| {
                let d = (0..factors.len()).map(|s| cosets[s][k[s] as usize].degree()).sum();
                (*k, d)
            })
            .collect();
        Ambient {
            n,
            field,
            factors,
            keys,
            key_deg,
            cosets,
            slot_memo: DashMap::new(),
            index_memo: DashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// All coset keys (the left basis of the ambient as a free left S-module).
    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn key_degree(&self, k: &Key) -> u32 {
        self.key_deg[k]
    }

    pub fn key_monomials(&self, k: &Key) -> Vec<Monomial> {
        (0..self.factors.len()).map(|s| self.cosets[s][k[s] as usize]).collect()
    }

    pub fn zero(&self) -> Amb {
        Amb::zero(self.n, self.field)
    }

    pub fn one(&self) -> Amb {
        Amb::pure([0; MAX_FACTORS], Polynomial::one(self.n, self.field))
    }

    pub fn unit_key(&self, k: Key) -> Amb {
        Amb::pure(k, Polynomial::one(self.n, self.field))
    }

    /// Normal form of `1 (x) b_1 (x) ... (x) b_slot * m (x) ... (x) b_m`.
    pub fn mul_slot_mono(&self, key: &Key, slot: usize, m: &Monomial) -> Arc<Amb> {
        if let Some(r) = self.slot_memo.get(&(slot, *key, *m)) {
            return r.clone();
        }
        let r = if slot == 0 {
            Amb::pure(*key, Polynomial::monomial(self.n, self.field, *m, 1))
        } else {
            let f = &self.factors[slot - 1];
            let cur = self.cosets[slot - 1][key[slot - 1] as usize];
            let g = Polynomial::monomial(self.n, self.field, cur.mul(m), 1);
            let mut r = self.zero();
            for (c, lam) in f.decompose(&g).into_iter().enumerate() {
                if lam.is_zero() {
                    continue;
                }
                let mut k2 = *key;
                k2[slot - 1] = c as u8;
                r.add_assign(&self.mul_slot_poly(&k2, slot - 1, &lam));
            }
            r
        };
        let r = Arc::new(r);
        self.slot_memo.entry((slot, *key, *m)).or_insert(r).clone()
    }

    pub fn mul_slot_poly(&self, key: &Key, slot: usize, g: &Polynomial) -> Amb {
        let mut r = self.zero();
        for (m, &c) in g.terms() {
            r.add_scaled(&self.mul_slot_mono(key, slot, m), c);
        }
        r
    }

    /// Multiply slot `slot` of every term by `g`.
    pub fn mul_at(&self, a: &Amb, slot: usize, g: &Polynomial) -> Amb {
        if slot == 0 {
            return a.left_mul(g);
        }
        let mut r = self.zero();
        for (k, f) in a.terms() {
            r.add_assign(&self.mul_slot_poly(k, slot, g).left_mul(f));
        }
        r
    }

    pub fn right_mul(&self, a: &Amb, g: &Polynomial) -> Amb {
        self.mul_at(a, self.factors.len(), g)
    }

    /// Normal form of a pure tensor `f_0 (x) f_1 (x) ... (x) f_m`.
    pub fn pure_tensor(&self, slots: &[Polynomial]) -> Amb {
        assert_eq!(slots.len(), self.factors.len() + 1, "slot count mismatch");
        let mut r = Amb::pure([0; MAX_FACTORS], slots[0].clone());
        for (s, g) in slots.iter().enumerate().skip(1) {
            r = self.mul_at(&r, s, g);
        }
        r
    }

    /// Slotwise Leibniz extension of the polynomial derivation, plus
    /// `mu_k e_1` multiplied in at each twisted factor.
    pub fn differential(&self, a: &Amb, twists: &[i8]) -> Amb {
        let mut r = self.zero();
        for (k, f) in a.terms() {
            r.add_key(*k, &f.derivation());
            for s in 1..=self.factors.len() {
                let b = self.cosets[s - 1][k[s - 1] as usize];
                let db = Polynomial::monomial(self.n, self.field, b, 1).derivation();
                if db.is_zero() {
                    continue;
                }
                let mut k2 = *k;
                k2[s - 1] = 0;
                r.add_assign(&self.mul_slot_poly(&k2, s, &db).left_mul(f));
            }
        }
        for (s, &mu) in twists.iter().enumerate() {
            if mu == 0 {
                continue;
            }
            let e1 = self.factors[s].e1(self.n, self.field);
            let c = self.field.from_i64(mu as i64);
            r.add_scaled(&self.mul_at(a, s + 1, &e1), c);
        }
        r
    }

    /// Coordinates of polynomial degree `d` (internal degree, twice the
    /// total exponent).
    pub fn index(&self, d: u32) -> Arc<AmbIndex> {
        if let Some(r) = self.index_memo.get(&d) {
            return r.clone();
        }
        let mut entries = Vec::new();
        for k in &self.keys {
            let kd = self.key_deg[k];
            if kd > d || !(d - kd).is_multiple_of(2) {
                continue;
            }
            for m in Monomial::all_of_total(self.n, true, (d - kd) / 2) {
                entries.push((*k, m));
            }
        }
        let map = entries.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
        let r = Arc::new(AmbIndex { entries, map });
        self.index_memo.entry(d).or_insert(r).clone()
    }

    /// Polynomial degree of each term (must be homogeneous).
    pub fn polydeg(&self, a: &Amb) -> Option<u32> {
        let mut d = None;
        for (k, f) in a.terms() {
            for (m, _) in f.terms() {
                let e = m.degree() + self.key_deg[k];
                match d {
                    None => d = Some(e),
                    Some(x) if x != e => return None,
                    _ => {}
                }
            }
        }
        d
    }

    /// Homogeneous component of polynomial degree `d`.
    pub fn homogeneous_part(&self, a: &Amb, d: u32) -> Amb {
        let mut r = self.zero();
        for (k, f) in a.terms() {
            let kd = self.key_deg[k];
            if kd <= d {
                r.add_key(*k, &f.homogeneous_part(d - kd));
            }
        }
        r
    }

    pub fn to_sparse(&self, a: &Amb, d: u32) -> SparseVec {
        let idx = self.index(d);
        let mut out = Vec::new();
        for (k, f) in a.terms() {
            for (m, &c) in f.terms() {
                let pos = idx
                    .position(k, m)
                    .unwrap_or_else(|| panic!("term outside degree {d}: {a:?}"));
                out.push((pos, c));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn from_sparse(&self, v: &SparseVec, d: u32) -> Amb {
        let idx = self.index(d);
        let mut r = self.zero();
        for &(pos, c) in v {
            let (k, m) = idx.entries[pos as usize];
            r.add_key(k, &Polynomial::monomial(self.n, self.field, m, c));
        }
        r
    }

    pub fn concat_keys(&self, a: &Key, other: &Ambient, b: &Key) -> Key {
        let m = self.factors.len();
        let mut k = *a;
        k[m..m + other.factors.len()].copy_from_slice(&b[..other.factors.len()]);
        k
    }

    /// Tensor product over S of elements of two ambients, landing in `target`,
    /// whose factors are `self.factors ++ other.factors`.
    pub fn concat(&self, a: &Amb, other: &Ambient, b: &Amb, target: &Ambient) -> Amb {
        debug_assert_eq!(target.factors.len(), self.factors.len() + other.factors.len());
        let mut r = target.zero();
        let m = self.factors.len();
        for (kb, g) in b.terms() {
            let merged = self.mul_at(a, m, g);
            for (ka, f) in merged.terms() {
                r.add_key(self.concat_keys(ka, other, kb), f);
            }
        }
        r
    }

    /// Evaluate `f_0 D_1(f_1 D_2( ... f_m v))` on a polynomial `v`.
    pub fn operator_apply(&self, a: &Amb, v: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero(self.n, self.field);
        for (k, f0) in a.terms() {
            let mut acc = v.clone();
            for s in (1..=self.factors.len()).rev() {
                acc = acc.mul_mono(&self.cosets[s - 1][k[s - 1] as usize]);
                acc = self.factors[s - 1].demazure(&acc);
            }
            r.add_assign(&acc.mul(f0));
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldParams {
        FieldParams::new(p).unwrap()
    }

    #[test]
    fn decomposition_recombines() {
        let f = fp(5);
        let n = 3;
        for fac in [Factor::Simple(1), Factor::Simple(2), Factor::Thick(1)] {
            for t in 0..4 {
                for m in Monomial::all_of_total(n, true, t) {
                    let g = Polynomial::monomial(n, f, m, 1);
                    let parts = fac.decompose(&g);
                    let mut acc = Polynomial::zero(n, f);
                    for (lam, c) in parts.iter().zip(fac.cosets()) {
                        for i in fac.index()..fac.index() + if fac.coset_count() == 2 { 1 } else { 2 } {
                            assert!(lam.is_symmetric(i), "{fac:?} {m:?}");
                        }
                        acc.add_assign(&lam.mul_mono(&c));
                    }
                    assert_eq!(acc, g);
                }
            }
        }
    }

    #[test]
    fn theta_is_central() {
        let f = fp(3);
        let n = 2;
        let a = Ambient::new(n, f, vec![Factor::Simple(1)]);
        let x1 = Polynomial::var(n, f, Var::X(1));
        let x2 = Polynomial::var(n, f, Var::X(2));
        let one = Polynomial::one(n, f);
        let theta = a.pure_tensor(&[x1.clone(), one.clone()]).sub(&a.pure_tensor(&[one, x2.clone()]));
        for g in [x1, x2, Polynomial::var(n, f, Var::Y)] {
            assert_eq!(theta.left_mul(&g), a.right_mul(&theta, &g));
        }
    }

    #[test]
    fn concat_is_associative_with_slots() {
        let f = fp(3);
        let n = 3;
        let a = Ambient::new(n, f, vec![Factor::Simple(1)]);
        let b = Ambient::new(n, f, vec![Factor::Simple(2)]);
        let ab = Ambient::new(n, f, vec![Factor::Simple(1), Factor::Simple(2)]);
        let x = |j| Polynomial::var(n, f, Var::X(j));
        let u = a.pure_tensor(&[x(1), x(2)]);
        let v = b.pure_tensor(&[x(3), x(2)]);
        let direct = ab.pure_tensor(&[x(1), x(2).mul(&x(3)), x(2)]);
        assert_eq!(a.concat(&u, &b, &v, &ab), direct);
    }
}
