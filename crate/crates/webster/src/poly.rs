//! Sparse multivariate polynomials over F_p in the variables x_1..x_n and y.

use crate::field::FieldParams;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Largest supported strand count.
pub const MAX_N: usize = 7;
const SLOTS: usize = MAX_N + 1;
const Y_SLOT: usize = MAX_N;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("mismatched variable count: {0} vs {1}")]
    VariableCount(usize, usize),
    #[error("mismatched field: F_{0} vs F_{1}")]
    Field(u32, u32),
    #[error("strand index {index} out of range 1..{max}")]
    IndexOutOfRange { index: usize, max: usize },
}

/// A variable of `R_n[y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Red dot on strand `j` (1-based).
    X(usize),
    /// Black dot.
    Y,
}

impl Var {
    fn slot(self) -> usize {
        match self {
            Var::X(j) => {
                debug_assert!((1..=MAX_N).contains(&j));
                j - 1
            }
            Var::Y => Y_SLOT,
        }
    }
}

/// Exponent vector `x^a y^b`. Ordered graded-lexicographically with
/// `x_1 > x_2 > ... > x_n > y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    e: [u8; SLOTS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::one();
        m.e[v.slot()] = 1;
        m
    }

    pub fn from_exponents(x: &[u32], y: u32) -> Self {
        assert!(x.len() <= MAX_N);
        let mut m = Monomial::one();
        for (k, &a) in x.iter().enumerate() {
            m.e[k] = u8::try_from(a).expect("exponent overflow");
        }
        m.e[Y_SLOT] = u8::try_from(y).expect("exponent overflow");
        m
    }

    pub fn x(&self, j: usize) -> u32 {
        self.e[j - 1] as u32
    }

    pub fn y(&self) -> u32 {
        self.e[Y_SLOT] as u32
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.e[v.slot()] as u32
    }

    pub fn set_exp(&mut self, v: Var, a: u32) {
        self.e[v.slot()] = u8::try_from(a).expect("exponent overflow");
    }

    pub fn x_exponents(&self, n: usize) -> Vec<u32> {
        (1..=n).map(|j| self.x(j)).collect()
    }

    /// Sum of all exponents.
    pub fn total(&self) -> u32 {
        self.e.iter().map(|&a| a as u32).sum()
    }

    /// Internal degree: every variable has degree 2.
    pub fn degree(&self) -> u32 {
        2 * self.total()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for k in 0..SLOTS {
            m.e[k] = m.e[k].checked_add(other.e[k]).expect("exponent overflow");
        }
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..SLOTS).all(|k| self.e[k] <= other.e[k])
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for k in 0..SLOTS {
            m.e[k] -= other.e[k];
        }
        m
    }

    pub fn swap(&self, a: Var, b: Var) -> Monomial {
        let mut m = *self;
        m.e.swap(a.slot(), b.slot());
        m
    }

    /// Largest strand index carrying a nonzero exponent.
    pub fn max_x_index(&self) -> usize {
        (0..MAX_N).rev().find(|&k| self.e[k] > 0).map_or(0, |k| k + 1)
    }

    /// All monomials in x_1..x_n, y of total exponent `t`, in descending order.
    pub fn all_of_total(n: usize, with_y: bool, t: u32) -> Vec<Monomial> {
        let mut vars: Vec<Var> = (1..=n).map(Var::X).collect();
        if with_y {
            vars.push(Var::Y);
        }
        let mut out = Vec::new();
        let mut cur = Monomial::one();
        fn rec(vars: &[Var], left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if vars.len() == 1 {
                cur.set_exp(vars[0], left);
                out.push(*cur);
                cur.set_exp(vars[0], 0);
                return;
            }
            for a in (0..=left).rev() {
                cur.set_exp(vars[0], a);
                rec(&vars[1..], left - a, cur, out);
            }
            cur.set_exp(vars[0], 0);
        }
        if vars.is_empty() {
            if t == 0 {
                out.push(cur);
            }
            return out;
        }
        rec(&vars, t, &mut cur, &mut out);
        out
    }

    pub fn format(&self, n: usize) -> String {
        let mut parts = Vec::new();
        for j in 1..=n.max(self.max_x_index()) {
            match self.x(j) {
                0 => {}
                1 => parts.push(format!("x{j}")),
                a => parts.push(format!("x{j}^{a}")),
            }
        }
        match self.y() {
            0 => {}
            1 => parts.push("y".to_string()),
            b => parts.push(format!("y^{b}")),
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.e.cmp(&other.e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.format(0);
        write!(f, "{}", if s.is_empty() { "1" } else { &s })
    }
}

/// A polynomial in `F_p[x_1..x_n, y]` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    field: FieldParams,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(n: usize, field: FieldParams) -> Self {
        assert!(n <= MAX_N, "at most {MAX_N} red strands supported");
        Polynomial { n, field, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, field: FieldParams, c: u32) -> Self {
        let mut p = Polynomial::zero(n, field);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(n: usize, field: FieldParams) -> Self {
        Polynomial::constant(n, field, 1)
    }

    pub fn monomial(n: usize, field: FieldParams, m: Monomial, c: u32) -> Self {
        let mut p = Polynomial::zero(n, field);
        p.add_term(m, c);
        p
    }

    pub fn var(n: usize, field: FieldParams, v: Var) -> Self {
        if let Var::X(j) = v {
            assert!((1..=n).contains(&j), "x{j} out of range for n={n}");
        }
        Polynomial::monomial(n, field, Monomial::var(v), 1)
    }

    /// `y - x_j`.
    pub fn y_minus_x(n: usize, field: FieldParams, j: usize) -> Self {
        Polynomial::var(n, field, Var::Y).sub(&Polynomial::var(n, field, Var::X(j)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &u32)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &u32)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: u32) {
        let c = c % self.field.p();
        if c == 0 {
            return;
        }
        debug_assert!(m.max_x_index() <= self.n, "monomial uses x beyond n");
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::VariableCount(self.n, other.n));
        }
        if self.field != other.field {
            return Err(PolyError::Field(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let mut r = self.clone();
        for (m, &c) in &other.terms {
            r.add_term(*m, c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check(other)?;
        let f = self.field;
        let mut acc: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let e = acc.entry(m1.mul(m2)).or_insert(0);
                *e = f.add(*e, f.mul(c1, c2));
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(Polynomial { n: self.n, field: f, terms: acc })
    }

    /// Panicking addition for internal use where operands are known compatible.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.try_add(other).expect("incompatible polynomials")
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.try_mul(other).expect("incompatible polynomials")
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        debug_assert_eq!(self.n, other.n);
        for (m, &c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, s: u32) {
        let f = self.field;
        for (m, &c) in &other.terms {
            self.add_term(*m, f.mul(c, s));
        }
    }

    pub fn add_scaled_mono(&mut self, other: &Polynomial, s: u32, mono: &Monomial) {
        let f = self.field;
        for (m, &c) in &other.terms {
            self.add_term(m.mul(mono), f.mul(c, s));
        }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.p() - 1)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        r.add_scaled(other, self.field.p() - 1);
        r
    }

    pub fn scale(&self, s: u32) -> Polynomial {
        let f = self.field;
        let s = s % f.p();
        if s == 0 {
            return Polynomial::zero(self.n, f);
        }
        Polynomial {
            n: self.n,
            field: f,
            terms: self.terms.iter().map(|(m, &c)| (*m, f.mul(c, s))).collect(),
        }
    }

    pub fn mul_mono(&self, mono: &Monomial) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, &c)| (m.mul(mono), c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.n, self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Homogeneous part of internal degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, &c)| (*m, c))
                .collect(),
        }
    }

    /// Internal degree if homogeneous (`None` for zero or inhomogeneous input).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The derivation with `x_j -> x_j^2`, `y -> y^2`.
    pub fn derivation(&self) -> Polynomial {
        let f = self.field;
        let mut r = Polynomial::zero(self.n, f);
        let vars: Vec<Var> = (1..=self.n).map(Var::X).chain(std::iter::once(Var::Y)).collect();
        for (m, &c) in &self.terms {
            for &v in &vars {
                let a = m.exp(v);
                if a == 0 {
                    continue;
                }
                let mut m2 = *m;
                m2.set_exp(v, a + 1);
                r.add_term(m2, f.mul(c, a % f.p()));
            }
        }
        r
    }

    /// Exchange two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> Polynomial {
        Polynomial {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, &c)| (m.swap(a, b), c)).collect(),
        }
    }

    /// `f^{s_i}`: exchange x_i and x_{i+1}.
    pub fn s(&self, i: usize) -> Polynomial {
        self.swap_vars(Var::X(i), Var::X(i + 1))
    }

    pub fn is_symmetric(&self, i: usize) -> bool {
        *self == self.s(i)
    }

    /// Exact quotient by `a - b` via long division; panics if the remainder is nonzero.
    pub fn div_by_difference(&self, a: Var, b: Var) -> Polynomial {
        self.try_div_by_difference(a, b)
            .unwrap_or_else(|| panic!("{:?} not divisible by {:?} - {:?}", self, a, b))
    }

    pub fn try_div_by_difference(&self, a: Var, b: Var) -> Option<Polynomial> {
        let f = self.field;
        let mut rem = self.clone();
        let mut q = Polynomial::zero(self.n, f);
        loop {
            let pick = rem.terms.iter().rev().find(|(m, _)| m.exp(a) > 0).map(|(m, &c)| (*m, c));
            let Some((m, c)) = pick else { break };
            let mut mq = m;
            mq.set_exp(a, m.exp(a) - 1);
            q.add_term(mq, c);
            rem.add_term(m, f.neg(c));
            let mut mb = mq;
            mb.set_exp(b, mq.exp(b) + 1);
            rem.add_term(mb, c);
        }
        rem.is_zero().then_some(q)
    }

    /// Divided difference `(f - f^{s_i}) / (x_i - x_{i+1})`.
    pub fn try_divided_difference(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i == 0 || i >= self.n {
            return Err(PolyError::IndexOutOfRange { index: i, max: self.n.saturating_sub(1) });
        }
        Ok(self.divided_difference(i))
    }

    pub fn divided_difference(&self, i: usize) -> Polynomial {
        let num = self.sub(&self.s(i));
        num.div_by_difference(Var::X(i), Var::X(i + 1))
    }

    /// Substitute `v -> g` for a single variable.
    pub fn substitute(&self, v: Var, g: &Polynomial) -> Polynomial {
        let f = self.field;
        let mut r = Polynomial::zero(self.n, f);
        let mut powers: Vec<Polynomial> = vec![Polynomial::one(self.n, f)];
        for (m, &c) in &self.terms {
            let a = m.exp(v) as usize;
            while powers.len() <= a {
                let next = powers.last().unwrap().mul(g);
                powers.push(next);
            }
            let mut rest = *m;
            rest.set_exp(v, 0);
            r.add_scaled_mono(&powers[a], c, &rest);
        }
        r
    }

    pub fn to_string_n(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = self.field;
        let mut out = String::new();
        for (k, (m, &c)) in self.terms.iter().rev().enumerate() {
            let sc = f.to_signed(c);
            let (sign, mag) = if sc < 0 { ("-", (-sc) as u64) } else { ("+", sc as u64) };
            if k == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let ms = m.format(self.n);
            if ms.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&ms);
            } else {
                out.push_str(&format!("{mag}*{ms}"));
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_n())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_n())
    }
}

/// Exact sum; errors on mismatched variable count or field.
pub fn poly_add(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    f.try_add(g)
}

/// Exact product; errors on mismatched variable count or field.
pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    f.try_mul(g)
}

pub fn poly_derivation(f: &Polynomial) -> Polynomial {
    f.derivation()
}

pub fn divided_difference(i: usize, f: &Polynomial) -> Result<Polynomial, PolyError> {
    f.try_divided_difference(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldParams {
        FieldParams::new(p).unwrap()
    }

    #[test]
    fn additive_inverse() {
        let f = fp(5);
        let x1 = Polynomial::var(2, f, Var::X(1));
        assert!(x1.add(&x1.scale(4)).is_zero());
    }

    #[test]
    fn doubling_in_f3() {
        let f = fp(3);
        let x = Polynomial::var(2, f, Var::X(1)).pow(2);
        assert_eq!(x.add(&x), x.scale(2));
    }

    #[test]
    fn difference_of_squares() {
        let f = fp(5);
        let x = Polynomial::var(2, f, Var::X(1));
        let y = Polynomial::var(2, f, Var::Y);
        let lhs = x.add(&y).mul(&x.sub(&y));
        assert_eq!(lhs, x.mul(&x).sub(&y.mul(&y)));
    }

    #[test]
    fn mismatched_variable_count() {
        let f = fp(3);
        let a = Polynomial::one(2, f);
        let b = Polynomial::one(3, f);
        assert!(matches!(poly_add(&a, &b), Err(PolyError::VariableCount(2, 3))));
    }

    #[test]
    fn derivation_examples() {
        let f = fp(3);
        let x = Polynomial::var(2, f, Var::X(1));
        assert_eq!(x.derivation(), x.mul(&x));
        assert!(Polynomial::one(2, f).derivation().is_zero());
        let mut d = x.clone();
        for _ in 0..3 {
            d = d.derivation();
        }
        assert!(d.is_zero());
    }

    #[test]
    fn divided_difference_examples() {
        let f = fp(5);
        let x1 = Polynomial::var(2, f, Var::X(1));
        let x2 = Polynomial::var(2, f, Var::X(2));
        assert_eq!(x1.divided_difference(1), Polynomial::one(2, f));
        assert!(Polynomial::constant(2, f, 3).divided_difference(1).is_zero());
        assert!(x1.mul(&x2).divided_difference(1).is_zero());
        assert!(x1.try_divided_difference(2).is_err());
    }

    #[test]
    fn exact_division_by_y_minus_x() {
        let f = fp(7);
        let g = Polynomial::y_minus_x(3, f, 2);
        let h = Polynomial::var(3, f, Var::X(1)).add(&Polynomial::var(3, f, Var::Y).pow(3));
        let q = g.mul(&h).div_by_difference(Var::Y, Var::X(2));
        assert_eq!(q, h);
        assert!(h.try_div_by_difference(Var::Y, Var::X(2)).is_none());
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::from_exponents(&[1, 0], 0);
        let b = Monomial::from_exponents(&[0, 1], 0);
        let c = Monomial::from_exponents(&[0, 0], 2);
        assert!(a > b);
        assert!(c > a);
    }
}
