//! The algebra W(n,1): generator words, rewriting to the canonical NE/SE
//! basis, multiplication, grading and the p-differential.

use crate::field::FieldParams;
use crate::poly::{Monomial, Polynomial, Var};
use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A generator of W(n,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GeneratorToken {
    /// Idempotent with the black strand in slot `k` (`k` reds to its left).
    E(usize),
    /// Dot on red strand `j`.
    X(usize),
    /// Dot on the black strand.
    Y,
    /// Crossing of the black strand with red strand `j`.
    Psi(usize),
}

impl GeneratorToken {
    pub fn degree(&self) -> u32 {
        match self {
            GeneratorToken::E(_) => 0,
            GeneratorToken::X(_) | GeneratorToken::Y => 2,
            GeneratorToken::Psi(_) => 1,
        }
    }

    pub fn is_valid(&self, n: usize) -> bool {
        match *self {
            GeneratorToken::E(k) => k <= n,
            GeneratorToken::X(j) | GeneratorToken::Psi(j) => (1..=n).contains(&j),
            GeneratorToken::Y => true,
        }
    }
}

impl fmt::Display for GeneratorToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorToken::E(k) => write!(f, "e{k}"),
            GeneratorToken::X(j) => write!(f, "x{j}"),
            GeneratorToken::Y => write!(f, "y"),
            GeneratorToken::Psi(j) => write!(f, "psi{j}"),
        }
    }
}

/// A product of generators, read left = top.
pub type Word = Vec<GeneratorToken>;

pub fn word_degree(w: &[GeneratorToken]) -> u32 {
    w.iter().map(|t| t.degree()).sum()
}

pub fn format_word(w: &[GeneratorToken]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("*")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisKind {
    NE,
    SE,
}

/// `NE_{i,j}(a,b) = x^a y^b psi_j ... psi_{i+1} e_i` (black from slot i at the
/// bottom to slot j >= i at the top) or `SE_{i,j}(a,b)` (black from slot j at
/// the bottom to slot i < j at the top).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalBasisElement {
    pub kind: BasisKind,
    pub i: usize,
    pub j: usize,
    pub mono: Monomial,
}

/// Number of crossings of the black strand in `NE_{i,j}` or `SE_{i,j}`.
pub const fn crossing_count(_kind: BasisKind, i: usize, j: usize) -> usize {
    j - i
}

impl NormalBasisElement {
    pub fn new(kind: BasisKind, i: usize, j: usize, a: &[u32], b: u32) -> Self {
        match kind {
            BasisKind::NE => assert!(i <= j, "NE requires i <= j"),
            BasisKind::SE => assert!(i < j, "SE requires i < j"),
        }
        NormalBasisElement { kind, i, j, mono: Monomial::from_exponents(a, b) }
    }

    /// Basis element with path `P_{t,s}` (top slot `t`, bottom slot `s`).
    pub fn from_block(t: usize, s: usize, mono: Monomial) -> Self {
        if t >= s {
            NormalBasisElement { kind: BasisKind::NE, i: s, j: t, mono }
        } else {
            NormalBasisElement { kind: BasisKind::SE, i: t, j: s, mono }
        }
    }

    /// `(top, bottom)` slots.
    pub fn block(&self) -> (usize, usize) {
        match self.kind {
            BasisKind::NE => (self.j, self.i),
            BasisKind::SE => (self.i, self.j),
        }
    }

    pub fn degree(&self) -> u32 {
        self.mono.degree() + crossing_count(self.kind, self.i, self.j) as u32
    }

    pub fn a(&self, n: usize) -> Vec<u32> {
        self.mono.x_exponents(n)
    }

    pub fn b(&self) -> u32 {
        self.mono.y()
    }

    /// Defining word: dots on top, then the crossings, then the bottom idempotent.
    pub fn word(&self, n: usize) -> Word {
        let mut w = Vec::new();
        for j in 1..=n {
            for _ in 0..self.mono.x(j) {
                w.push(GeneratorToken::X(j));
            }
        }
        for _ in 0..self.mono.y() {
            w.push(GeneratorToken::Y);
        }
        let (t, s) = self.block();
        w.extend(path_word(t, s));
        w
    }

    pub fn format(&self, n: usize) -> String {
        let a = self.a(n).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let k = match self.kind {
            BasisKind::NE => "NE",
            BasisKind::SE => "SE",
        };
        format!("{k}[i={},j={}](a=[{a}],b={})", self.i, self.j, self.b())
    }
}

/// Word of the minimal path from bottom slot `s` to top slot `t`.
pub fn path_word(t: usize, s: usize) -> Word {
    let mut w = Vec::new();
    if t >= s {
        for j in (s + 1..=t).rev() {
            w.push(GeneratorToken::Psi(j));
        }
    } else {
        for j in t + 1..=s {
            w.push(GeneratorToken::Psi(j));
        }
    }
    w.push(GeneratorToken::E(s));
    w
}

/// `prod_{k=s+1}^{t} (y - x_k)` for `t > s`, else 1: the polynomial by which
/// the minimal path `P_{t,s}` acts on the polynomial representation.
pub fn path_weight(n: usize, field: FieldParams, t: usize, s: usize) -> Polynomial {
    let mut w = Polynomial::one(n, field);
    for k in s + 1..=t {
        w = w.mul(&Polynomial::y_minus_x(n, field, k));
    }
    w
}

/// An element of W(n,1), stored as `sum_{(t,s)} f_{t,s} P_{t,s}`, which is the
/// same data as a sparse combination of NE/SE basis elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    n: usize,
    field: FieldParams,
    blocks: BTreeMap<(usize, usize), Polynomial>,
}

impl AlgebraElement {
    pub fn zero(n: usize, field: FieldParams) -> Self {
        AlgebraElement { n, field, blocks: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn idempotent(n: usize, field: FieldParams, k: usize) -> Self {
        AlgebraElement::from_block(n, (k, k), Polynomial::one(n, field))
    }

    pub fn unit(n: usize, field: FieldParams) -> Self {
        let mut r = AlgebraElement::zero(n, field);
        for k in 0..=n {
            r.add_block((k, k), &Polynomial::one(n, field));
        }
        r
    }

    pub fn from_block(n: usize, ts: (usize, usize), f: Polynomial) -> Self {
        let mut r = AlgebraElement::zero(n, f.field());
        r.add_block(ts, &f);
        r
    }

    pub fn basis(n: usize, field: FieldParams, b: &NormalBasisElement) -> Self {
        AlgebraElement::from_block(n, b.block(), Polynomial::monomial(n, field, b.mono, 1))
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Polynomial> {
        &self.blocks
    }

    pub fn block(&self, ts: (usize, usize)) -> Polynomial {
        self.blocks.get(&ts).cloned().unwrap_or_else(|| Polynomial::zero(self.n, self.field))
    }

    pub fn add_block(&mut self, ts: (usize, usize), f: &Polynomial) {
        if f.is_zero() {
            return;
        }
        let e = self.blocks.entry(ts).or_insert_with(|| Polynomial::zero(f.n(), f.field()));
        e.add_assign(f);
        if e.is_zero() {
            self.blocks.remove(&ts);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        for (ts, f) in &other.blocks {
            r.add_block(*ts, f);
        }
        r
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(self.field.p() - 1))
    }

    pub fn scale(&self, c: u32) -> AlgebraElement {
        let mut r = AlgebraElement::zero(self.n, self.field);
        for (ts, f) in &self.blocks {
            r.add_block(*ts, &f.scale(c));
        }
        r
    }

    /// Multiply every coefficient by a central polynomial.
    pub fn mul_poly(&self, g: &Polynomial) -> AlgebraElement {
        let mut r = AlgebraElement::zero(self.n, self.field);
        for (ts, f) in &self.blocks {
            r.add_block(*ts, &f.mul(g));
        }
        r
    }

    /// Canonical basis terms in ascending order.
    pub fn terms(&self) -> Vec<(NormalBasisElement, u32)> {
        let mut out = Vec::new();
        for (&(t, s), f) in &self.blocks {
            for (m, &c) in f.terms() {
                out.push((NormalBasisElement::from_block(t, s, *m), c));
            }
        }
        out.sort();
        out
    }

    pub fn degree_of_block(&self, ts: (usize, usize), m: &Monomial) -> u32 {
        m.degree() + ts.0.abs_diff(ts.1) as u32
    }

    /// Homogeneous component of internal degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> AlgebraElement {
        let mut r = AlgebraElement::zero(self.n, self.field);
        for (&ts, f) in &self.blocks {
            let c = ts.0.abs_diff(ts.1) as u32;
            if d >= c && (d - c).is_multiple_of(2) {
                r.add_block(ts, &f.homogeneous_part(d - c));
            }
        }
        r
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms().iter().map(|(b, _)| b.degree()).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = self.field;
        let mut out = String::new();
        for (k, (b, c)) in self.terms().iter().rev().enumerate() {
            let sc = f.to_signed(*c);
            let mag = sc.unsigned_abs();
            if k == 0 {
                if sc < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if sc < 0 { " - " } else { " + " });
            }
            if mag != 1 {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&b.format(self.n));
        }
        out
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

/// Signs `sigma` in `psi_j psi_j e = sigma (x_j - y) e`, one per crossing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Psi2Convention {
    /// Black strand starts left of red `j` (idempotent `e_{j-1}`).
    pub black_left: i8,
    /// Black strand starts right of red `j` (idempotent `e_j`).
    pub black_right: i8,
}

impl Psi2Convention {
    /// The relation taken literally: `psi_j psi_j e = (x_j - y) e` for both orders.
    pub const STATED: Psi2Convention = Psi2Convention { black_left: 1, black_right: 1 };
    /// The signs forced by the polynomial representation.
    pub const CALIBRATED: Psi2Convention = Psi2Convention { black_left: -1, black_right: -1 };
}

/// Order in which redexes are chosen during rewriting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

#[derive(Clone, Debug)]
struct Term {
    coeff: u32,
    mono: Monomial,
    toks: Vec<GeneratorToken>,
}

enum Step {
    /// Term rewritten into these terms (possibly none).
    Into(Vec<Term>),
}

/// Output slot of `psi_j e_k` for valid `k`.
fn crossing_target(j: usize, k: usize) -> Option<usize> {
    if k + 1 == j {
        Some(j)
    } else if k == j {
        Some(j - 1)
    } else {
        None
    }
}

type Redex<'a> = (usize, Box<dyn Fn(&Term) -> Step + 'a>);

/// The algebra W(n,1) over F_p with memoized path structure constants.
pub struct Algebra {
    n: usize,
    field: FieldParams,
    conv: Psi2Convention,
    memo: DashMap<(usize, usize, usize), Polynomial>,
}

impl Algebra {
    pub fn new(n: usize, field: FieldParams, conv: Psi2Convention) -> Self {
        assert!((1..=crate::poly::MAX_N).contains(&n), "unsupported strand count {n}");
        Algebra { n, field, conv, memo: DashMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn convention(&self) -> Psi2Convention {
        self.conv
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(self.n, self.field)
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::unit(self.n, self.field)
    }

    pub fn e(&self, k: usize) -> AlgebraElement {
        AlgebraElement::idempotent(self.n, self.field, k)
    }

    pub fn poly(&self, f: &Polynomial) -> AlgebraElement {
        self.one().mul_poly(f)
    }

    pub fn var(&self, v: Var) -> Polynomial {
        Polynomial::var(self.n, self.field, v)
    }

    /// Minimal path element `P_{t,s}`.
    pub fn path(&self, t: usize, s: usize) -> AlgebraElement {
        AlgebraElement::from_block(self.n, (t, s), Polynomial::one(self.n, self.field))
    }

    /// All redex positions of a term, each with the rewrite it performs.
    fn redexes(&self, t: &Term) -> Vec<Redex<'_>> {
        use GeneratorToken::*;
        let f = self.field;
        let n = self.n;
        let toks = &t.toks;
        let mut out: Vec<Redex<'_>> = Vec::new();
        if toks.last().is_none_or(|x| !matches!(x, E(_))) {
            out.push((
                toks.len(),
                Box::new(move |t: &Term| {
                    Step::Into(
                        (0..=n)
                            .map(|k| {
                                let mut u = t.clone();
                                u.toks.push(E(k));
                                u
                            })
                            .collect(),
                    )
                }),
            ));
        }
        for (p, tok) in toks.iter().enumerate() {
            match *tok {
                X(_) | Y => out.push((
                    p,
                    Box::new(move |t: &Term| {
                        let mut u = t.clone();
                        let v = match u.toks.remove(p) {
                            X(j) => Var::X(j),
                            _ => Var::Y,
                        };
                        u.mono = u.mono.mul(&Monomial::var(v));
                        Step::Into(vec![u])
                    }),
                )),
                E(a) => {
                    if let Some(&E(b)) = toks.get(p + 1) {
                        out.push((
                            p,
                            Box::new(move |t: &Term| {
                                if a != b {
                                    return Step::Into(vec![]);
                                }
                                let mut u = t.clone();
                                u.toks.remove(p);
                                Step::Into(vec![u])
                            }),
                        ));
                    }
                    if let (Some(&Psi(j)), Some(&E(k))) = (toks.get(p + 1), toks.get(p + 2)) {
                        if let Some(tgt) = crossing_target(j, k) {
                            if tgt != a {
                                out.push((p, Box::new(|_: &Term| Step::Into(vec![]))));
                            }
                        }
                    }
                }
                Psi(j) => {
                    match toks.get(p + 1) {
                        Some(&E(k)) => match crossing_target(j, k) {
                            None => out.push((p, Box::new(|_: &Term| Step::Into(vec![])))),
                            Some(tgt) => {
                                let typed_left = p > 0 && matches!(toks[p - 1], E(_));
                                if !typed_left && (p == 0 || matches!(toks[p - 1], Psi(_))) {
                                    out.push((
                                        p,
                                        Box::new(move |t: &Term| {
                                            let mut u = t.clone();
                                            u.toks.insert(p, E(tgt));
                                            Step::Into(vec![u])
                                        }),
                                    ));
                                }
                                if p >= 2 {
                                    if let (Psi(j2), E(mid)) = (toks[p - 2], toks[p - 1]) {
                                        if j2 == j && mid == tgt {
                                            let sigma = if k + 1 == j {
                                                self.conv.black_left
                                            } else {
                                                self.conv.black_right
                                            };
                                            out.push((
                                                p - 2,
                                                Box::new(move |t: &Term| {
                                                    self.double_crossing(t, p - 2, j, sigma)
                                                }),
                                            ));
                                        }
                                    }
                                }
                            }
                        },
                        Some(&Psi(l)) if j > l + 1 => out.push((
                            p,
                            Box::new(move |t: &Term| {
                                let mut u = t.clone();
                                u.toks.swap(p, p + 1);
                                Step::Into(vec![u])
                            }),
                        )),
                        _ => {}
                    }
                }
            }
        }
        let _ = f;
        out
    }

    /// `psi_j E(mid) psi_j E(k)` at position `p` becomes `sigma (x_j - y) E(k)`.
    fn double_crossing(&self, t: &Term, p: usize, j: usize, sigma: i8) -> Step {
        let f = self.field;
        let s = if sigma > 0 { 1 } else { f.p() - 1 };
        let mut base = t.clone();
        base.toks.drain(p..p + 3);
        let mut a = base.clone();
        a.coeff = f.mul(a.coeff, s);
        a.mono = a.mono.mul(&Monomial::var(Var::X(j)));
        let mut b = base;
        b.coeff = f.mul(b.coeff, f.neg(s));
        b.mono = b.mono.mul(&Monomial::var(Var::Y));
        Step::Into(vec![a, b])
    }

    fn normal_term_to_block(&self, t: &Term) -> Option<((usize, usize), Monomial)> {
        use GeneratorToken::*;
        let toks = &t.toks;
        let Some(&E(bottom)) = toks.last() else { return None };
        let mut slot = bottom;
        let mut idx = toks.len() - 1;
        while idx > 0 {
            idx -= 1;
            match toks[idx] {
                Psi(j) => slot = crossing_target(j, slot)?,
                E(a) => {
                    if a != slot {
                        return None;
                    }
                }
                _ => return None,
            }
        }
        Some(((slot, bottom), t.mono))
    }

    /// Rewrite a word to canonical form using the given redex selection order.
    pub fn reduce_with(&self, w: &[GeneratorToken], strategy: Strategy) -> AlgebraElement {
        for t in w {
            assert!(t.is_valid(self.n), "invalid token {t} for n={}", self.n);
        }
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut result = self.zero();
        let mut work = vec![Term { coeff: 1, mono: Monomial::one(), toks: w.to_vec() }];
        while let Some(t) = work.pop() {
            if t.coeff == 0 {
                continue;
            }
            let mut rs = self.redexes(&t);
            if rs.is_empty() {
                let (ts, m) = self
                    .normal_term_to_block(&t)
                    .unwrap_or_else(|| panic!("irreducible non-normal term {:?}", t.toks));
                result.add_block(ts, &Polynomial::monomial(self.n, self.field, m, t.coeff));
                continue;
            }
            let pick = match strategy {
                Strategy::Leftmost => rs.iter().enumerate().min_by_key(|(_, r)| r.0).unwrap().0,
                Strategy::Rightmost => rs.iter().enumerate().max_by_key(|(_, r)| r.0).unwrap().0,
                Strategy::Random(_) => rng.as_mut().unwrap().gen_range(0..rs.len()),
            };
            let (_, rule) = rs.swap_remove(pick);
            let Step::Into(ts) = rule(&t);
            work.extend(ts);
        }
        result
    }

    /// Canonical form of a word.
    pub fn reduce(&self, w: &[GeneratorToken]) -> AlgebraElement {
        self.reduce_with(w, Strategy::Leftmost)
    }

    /// Structure constant `c` with `P_{t,u} P_{u,s} = c P_{t,s}`.
    pub fn path_product(&self, t: usize, u: usize, s: usize) -> Polynomial {
        if let Some(c) = self.memo.get(&(t, u, s)) {
            return c.clone();
        }
        let mut w = path_word(t, u);
        w.extend(path_word(u, s));
        let r = self.reduce(&w);
        assert!(r.blocks().keys().all(|&k| k == (t, s)), "path product left its block");
        let c = r.block((t, s));
        self.memo.entry((t, u, s)).or_insert(c).clone()
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        assert!(a.n() == self.n && b.n() == self.n, "parameter mismatch");
        assert!(a.field() == self.field && b.field() == self.field, "parameter mismatch");
        let mut r = self.zero();
        for (&(t, u), f) in a.blocks() {
            for (&(u2, s), g) in b.blocks() {
                if u != u2 {
                    continue;
                }
                let c = self.path_product(t, u, s);
                if c.is_zero() {
                    continue;
                }
                r.add_block((t, s), &f.mul(g).mul(&c));
            }
        }
        r
    }

    /// Evaluate a word as a product of generator elements (unreduced path).
    pub fn word_element(&self, w: &[GeneratorToken]) -> AlgebraElement {
        self.reduce(w)
    }

    fn token_differential(&self, tok: GeneratorToken) -> Vec<(u32, Word)> {
        use GeneratorToken::*;
        match tok {
            E(_) => vec![],
            X(j) => vec![(1, vec![X(j), X(j)])],
            Y => vec![(1, vec![Y, Y])],
            Psi(j) => vec![(1, vec![X(j), Psi(j), E(j - 1)]), (1, vec![Y, Psi(j), E(j)])],
        }
    }

    /// `d` applied to a word by the Leibniz rule, then reduced.
    pub fn differential_word(&self, w: &[GeneratorToken]) -> AlgebraElement {
        let mut r = self.zero();
        for (p, &tok) in w.iter().enumerate() {
            for (c, rep) in self.token_differential(tok) {
                let mut w2: Word = w[..p].to_vec();
                w2.extend(rep);
                w2.extend_from_slice(&w[p + 1..]);
                r = r.add(&self.reduce(&w2).scale(c));
            }
        }
        r
    }

    /// The p-differential, computed on defining words of basis elements.
    pub fn differential(&self, a: &AlgebraElement) -> AlgebraElement {
        let mut r = self.zero();
        for (b, c) in a.terms() {
            r = r.add(&self.differential_word(&b.word(self.n)).scale(c));
        }
        r
    }

    /// All NE/SE basis elements of internal degree `d`, in canonical order.
    pub fn enumerate_basis(&self, d: i64) -> Vec<NormalBasisElement> {
        enumerate_basis(self.n, d)
    }
}

/// All NE/SE basis elements of W(n,1) of internal degree `d`.
pub fn enumerate_basis(n: usize, d: i64) -> Vec<NormalBasisElement> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    let d = d as usize;
    for t in 0..=n {
        for s in 0..=n {
            let c = t.abs_diff(s);
            if c > d || !(d - c).is_multiple_of(2) {
                continue;
            }
            for m in Monomial::all_of_total(n, true, ((d - c) / 2) as u32) {
                out.push(NormalBasisElement::from_block(t, s, m));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use GeneratorToken::*;

    fn alg(n: usize, p: u64) -> Algebra {
        Algebra::new(n, FieldParams::new(p).unwrap(), Psi2Convention::STATED)
    }

    #[test]
    fn idempotents_orthogonal() {
        let a = alg(2, 3);
        assert!(a.reduce(&[E(1), E(2)]).is_zero());
        assert_eq!(a.reduce(&[E(1)]), a.e(1));
    }

    #[test]
    fn stated_double_crossing() {
        let a = alg(2, 5);
        let r = a.reduce(&[Psi(2), Psi(2), E(1)]);
        let f = a.field();
        let expect = Polynomial::var(2, f, Var::X(2)).sub(&Polynomial::var(2, f, Var::Y));
        assert_eq!(r, AlgebraElement::from_block(2, (1, 1), expect));
    }

    #[test]
    fn ill_typed_crossing_vanishes() {
        let a = alg(3, 3);
        assert!(a.reduce(&[Psi(3), E(1)]).is_zero());
        assert!(a.reduce(&[Psi(1), Psi(3), E(3)]).is_zero());
    }

    #[test]
    fn degree_zero_basis() {
        assert_eq!(enumerate_basis(2, 0).len(), 3);
        let b = enumerate_basis(1, 1);
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.degree() == 1 && x.mono == Monomial::one()));
        assert!(enumerate_basis(2, -1).is_empty());
    }

    #[test]
    fn basis_word_roundtrip() {
        let a = alg(3, 3);
        for d in 0..6 {
            for b in enumerate_basis(3, d) {
                let w = b.word(3);
                assert_eq!(word_degree(&w), b.degree());
                assert_eq!(a.reduce(&w), AlgebraElement::basis(3, a.field(), &b));
            }
        }
    }

    #[test]
    fn printer_form() {
        let b = NormalBasisElement::new(BasisKind::NE, 1, 2, &[3, 0], 2);
        assert_eq!(b.format(2), "NE[i=1,j=2](a=[3,0],b=2)");
    }
}
