//! Text syntax for polynomials, words, algebra elements and bimodule elements.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'e'INT | 'x'INT ['^'INT] | 'y' ['^'INT] | 'psi'INT
//!         | 'gen['INT']' | 'gen2['INT']' | 'gen3['INT']'
//!         | ('NE'|'SE') '[i='INT',j='INT'](a=['INT(','INT)*'],b='INT')'
//! ```
//!
//! Coefficients are reduced mod p. In a bimodule term the tokens left of the
//! generator form the left algebra word and those right of it the right word.

use crate::algebra::{Algebra, AlgebraElement, BasisKind, GeneratorToken, NormalBasisElement, Word};
use crate::bimodule::{BimodCtx, BimoduleElement, BimoduleModel, BimoduleSpec};
use crate::field::FieldParams;
use crate::poly::{Monomial, Polynomial, Var};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

/// Which generator a bimodule term is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// W_i.
    Single(usize),
    /// W_{i,i+1}.
    Thick(usize),
    /// W_i W_{i+1} W_i.
    Triple(usize),
}

impl GenKind {
    pub fn spec(&self) -> BimoduleSpec {
        match *self {
            GenKind::Single(i) => BimoduleSpec::wi(i),
            GenKind::Thick(i) => BimoduleSpec::wii1(i),
            GenKind::Triple(i) => {
                BimoduleSpec::tensor(vec![BimoduleSpec::wi(i), BimoduleSpec::wi(i + 1), BimoduleSpec::wi(i)])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Factor {
    Int(u64),
    Tok(GeneratorToken, u32),
    Gen(GenKind),
    Basis(NormalBasisElement),
}

/// One summand: sign, factors and the position where it starts.
#[derive(Clone, Debug)]
struct Term {
    negative: bool,
    factors: Vec<(usize, Factor)>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        Parser { s: text.as_bytes(), pos: 0, n }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{lit}'"))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a nonnegative integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| err(start, "integer too large"))
    }

    fn index(&mut self, lo: usize, hi: usize, what: &str) -> Result<usize, ParseError> {
        let p = self.pos;
        let v = self.int()?;
        if (v as usize) < lo || v as usize > hi {
            return err(p, format!("{what} index {v} out of range {lo}..={hi}"));
        }
        Ok(v as usize)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        if !self.eat("^") {
            return Ok(1);
        }
        self.skip_ws();
        let p = self.pos;
        match self.s.get(p) {
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                u32::try_from(v).or_else(|_| err(p, "exponent too large"))
            }
            _ => err(p, "exponent must be a nonnegative integer"),
        }
    }

    fn factor(&mut self) -> Result<(usize, Factor), ParseError> {
        self.skip_ws();
        let p = self.pos;
        let n = self.n;
        let f = match self.peek() {
            Some(c) if c.is_ascii_digit() => Factor::Int(self.int()?),
            _ if self.eat("psi") => Factor::Tok(GeneratorToken::Psi(self.index(1, n, "crossing")?), 1),
            _ if self.eat("gen3[") => {
                let i = self.index(1, n.saturating_sub(2), "generator")?;
                self.expect("]")?;
                Factor::Gen(GenKind::Triple(i))
            }
            _ if self.eat("gen2[") => {
                let i = self.index(1, n.saturating_sub(2), "generator")?;
                self.expect("]")?;
                Factor::Gen(GenKind::Thick(i))
            }
            _ if self.eat("gen[") => {
                let i = self.index(1, n.saturating_sub(1), "generator")?;
                self.expect("]")?;
                Factor::Gen(GenKind::Single(i))
            }
            _ if self.eat("e") => Factor::Tok(GeneratorToken::E(self.index(0, n, "idempotent")?), 1),
            _ if self.eat("x") => {
                let j = self.index(1, n, "dot")?;
                Factor::Tok(GeneratorToken::X(j), self.exponent()?)
            }
            _ if self.eat("y") => Factor::Tok(GeneratorToken::Y, self.exponent()?),
            _ if self.eat("NE") => Factor::Basis(self.basis(BasisKind::NE, p)?),
            _ if self.eat("SE") => Factor::Basis(self.basis(BasisKind::SE, p)?),
            Some(_) => return err(p, "unexpected character"),
            None => return err(p, "unexpected end of input"),
        };
        Ok((p, f))
    }

    fn basis(&mut self, kind: BasisKind, start: usize) -> Result<NormalBasisElement, ParseError> {
        let n = self.n;
        self.expect("[")?;
        self.expect("i=")?;
        let i = self.index(0, n, "slot")?;
        self.expect(",")?;
        self.expect("j=")?;
        let j = self.index(0, n, "slot")?;
        self.expect("]")?;
        self.expect("(")?;
        self.expect("a=")?;
        self.expect("[")?;
        let mut a = Vec::new();
        loop {
            let v = self.int()?;
            a.push(u32::try_from(v).or_else(|_| err(self.pos, "exponent too large"))?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("]")?;
        self.expect(",")?;
        self.expect("b=")?;
        let b = self.int()? as u32;
        self.expect(")")?;
        if a.len() != n {
            return err(start, format!("expected {n} dot exponents, found {}", a.len()));
        }
        let ok = match kind {
            BasisKind::NE => i <= j,
            BasisKind::SE => i < j,
        };
        if !ok {
            return err(start, "slot indices violate the basis shape");
        }
        Ok(NormalBasisElement::new(kind, i, j, &a, b))
    }

    fn term(&mut self, negative: bool) -> Result<Term, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat("*") {
            factors.push(self.factor()?);
        }
        Ok(Term { negative, factors })
    }

    fn expr(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let neg = self.eat("-");
        terms.push(self.term(neg)?);
        loop {
            if self.eat("+") {
                terms.push(self.term(false)?);
            } else if self.eat("-") {
                terms.push(self.term(true)?);
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.s.len() {
            return err(self.pos, "unexpected trailing input");
        }
        Ok(terms)
    }
}

fn coefficient(field: FieldParams, t: &Term) -> u32 {
    let mut c = 1u32;
    for (_, f) in &t.factors {
        if let Factor::Int(v) = f {
            c = field.mul(c, (v % field.p() as u64) as u32);
        }
    }
    if t.negative {
        field.neg(c)
    } else {
        c
    }
}

fn push_token(w: &mut Word, f: &Factor, n: usize) {
    match f {
        Factor::Tok(t, e) => w.extend(std::iter::repeat_n(*t, *e as usize)),
        Factor::Basis(b) => w.extend(b.word(n)),
        _ => {}
    }
}

/// Parse a polynomial in `x_1..x_n, y`.
pub fn parse_polynomial(text: &str, n: usize, field: FieldParams) -> Result<Polynomial, ParseError> {
    let terms = Parser::new(text, n).expr()?;
    let mut r = Polynomial::zero(n, field);
    for t in &terms {
        let mut m = Monomial::one();
        for (p, f) in &t.factors {
            match f {
                Factor::Int(_) => {}
                Factor::Tok(GeneratorToken::X(j), e) => m = m.mul(&pow_mono(Var::X(*j), *e)),
                Factor::Tok(GeneratorToken::Y, e) => m = m.mul(&pow_mono(Var::Y, *e)),
                _ => return err(*p, "only integers, x_j and y may appear in a polynomial"),
            }
        }
        r.add_term(m, coefficient(field, t));
    }
    Ok(r)
}

fn pow_mono(v: Var, e: u32) -> Monomial {
    let mut m = Monomial::one();
    m.set_exp(v, e);
    m
}

/// Parse a single product of generators.
pub fn parse_word(text: &str, n: usize) -> Result<Word, ParseError> {
    let terms = Parser::new(text, n).expr()?;
    if terms.len() != 1 || terms[0].negative {
        return err(0, "a word is a single product of generators");
    }
    let mut w = Vec::new();
    for (p, f) in &terms[0].factors {
        match f {
            Factor::Tok(..) | Factor::Basis(_) => push_token(&mut w, f, n),
            _ => return err(*p, "only generators may appear in a word"),
        }
    }
    Ok(w)
}

/// Parse an algebra element; each term is reduced to canonical form.
pub fn parse_algebra(text: &str, alg: &Algebra) -> Result<AlgebraElement, ParseError> {
    let n = alg.n();
    let terms = Parser::new(text, n).expr()?;
    let mut r = alg.zero();
    for t in &terms {
        let mut w = Vec::new();
        for (p, f) in &t.factors {
            match f {
                Factor::Gen(_) => return err(*p, "bimodule generator in an algebra element"),
                _ => push_token(&mut w, f, n),
            }
        }
        let c = coefficient(alg.field(), t);
        let v = if w.is_empty() { alg.one() } else { alg.reduce(&w) };
        r = r.add(&v.scale(c));
    }
    Ok(r)
}

/// A parsed element of W or of one of the bimodules.
#[derive(Clone)]
pub enum ParsedElement {
    Algebra(AlgebraElement),
    Bimodule(Arc<BimoduleModel>, BimoduleElement),
}

/// Parse an algebra or bimodule element.
pub fn parse_element(text: &str, ctx: &BimodCtx) -> Result<ParsedElement, ParseError> {
    let alg = ctx.algebra();
    let n = alg.n();
    let terms = Parser::new(text, n).expr()?;
    let mut kinds = Vec::new();
    for t in &terms {
        let gens: Vec<_> = t
            .factors
            .iter()
            .filter_map(|(p, f)| match f {
                Factor::Gen(g) => Some((*p, *g)),
                _ => None,
            })
            .collect();
        if gens.len() > 1 {
            return err(gens[1].0, "more than one bimodule generator in a term");
        }
        kinds.push((t.factors[0].0, gens.first().map(|x| x.1)));
    }
    let g = match kinds[0].1 {
        None => {
            if let Some((p, _)) = kinds.iter().find(|k| k.1.is_some()) {
                return err(*p, "terms mix algebra and bimodule elements");
            }
            return parse_algebra(text, alg).map(ParsedElement::Algebra);
        }
        Some(g) => g,
    };
    if let Some((p, _)) = kinds.iter().find(|k| k.1 != Some(g)) {
        return err(*p, "terms use different generators");
    }
    let model = ctx.model(&g.spec()).map_err(|e| ParseError { pos: 0, msg: e.to_string() })?;
    let gen = model.generator();
    let mut r = model.zero();
    for t in &terms {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let mut seen = false;
        for (_, f) in &t.factors {
            match f {
                Factor::Gen(_) => seen = true,
                _ if seen => push_token(&mut right, f, n),
                _ => push_token(&mut left, f, n),
            }
        }
        let l = if left.is_empty() { alg.one() } else { alg.reduce(&left) };
        let rr = if right.is_empty() { alg.one() } else { alg.reduce(&right) };
        let v = model.left_act(&l, &model.right_act(&gen, &rr));
        r = r.add(&v.scale(coefficient(alg.field(), t)));
    }
    Ok(ParsedElement::Bimodule(model, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Psi2Convention;
    use crate::rep::calibrate_psi2;

    fn alg(n: usize) -> Algebra {
        let f = FieldParams::new(5).unwrap();
        Algebra::new(n, f, calibrate_psi2(n, f).convention)
    }

    #[test]
    fn polynomial_syntax() {
        let f = FieldParams::new(5).unwrap();
        let p = parse_polynomial("3*x1^2*y + 2*x2 - 7", 2, f).unwrap();
        assert_eq!(p.to_string_n(), parse_polynomial(&p.to_string_n(), 2, f).unwrap().to_string_n());
        let e = parse_polynomial("x1^(-1)", 2, f).unwrap_err();
        assert_eq!(e.pos, 3);
    }

    #[test]
    fn words_and_elements() {
        let a = alg(2);
        assert_eq!(parse_word("e2 * psi1 * x1^3 * y^2 * e1", 2).unwrap().len(), 8);
        assert_eq!(parse_algebra("e1", &a).unwrap(), a.e(1));
        let r = parse_algebra("psi2*psi2*e1", &a).unwrap();
        assert_eq!(r.terms().len(), 2);
        assert_eq!(r, a.reduce(&[GeneratorToken::Psi(2), GeneratorToken::Psi(2), GeneratorToken::E(1)]));
        assert!(parse_algebra("x1^(-1)", &a).is_err());
        assert!(parse_algebra("e3", &a).is_err());
        let _ = Psi2Convention::STATED;
    }

    #[test]
    fn canonical_round_trip() {
        let a = alg(2);
        let v = parse_algebra("2*x1*psi2*e1 - y^2*e0 + psi1*psi2*e2", &a).unwrap();
        assert_eq!(parse_algebra(&v.format(), &a).unwrap(), v);
    }
}
