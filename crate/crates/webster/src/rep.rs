//! The polynomial representation V_n = (+)_k R_n[y_k] of W(n,1), used as an
//! independent oracle for the rewriting engine and the bimodule models.
//!
//! Sector `k` stores a polynomial in `x_1..x_n, y`, where `y` stands for `y_k`.

use crate::algebra::{AlgebraElement, GeneratorToken, Psi2Convention};
use crate::bimodule::{BimoduleElement, BimoduleModel};
use crate::field::FieldParams;
use crate::poly::{Monomial, Polynomial, Var};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VnElement {
    n: usize,
    field: FieldParams,
    sectors: BTreeMap<usize, Polynomial>,
}

impl VnElement {
    pub fn zero(n: usize, field: FieldParams) -> Self {
        VnElement { n, field, sectors: BTreeMap::new() }
    }

    pub fn from_sector(n: usize, k: usize, f: Polynomial) -> Self {
        let mut v = VnElement::zero(n, f.field());
        v.add_sector(k, &f);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sectors(&self) -> &BTreeMap<usize, Polynomial> {
        &self.sectors
    }

    pub fn sector(&self, k: usize) -> Polynomial {
        self.sectors.get(&k).cloned().unwrap_or_else(|| Polynomial::zero(self.n, self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.sectors.is_empty()
    }

    pub fn add_sector(&mut self, k: usize, f: &Polynomial) {
        assert!(k <= self.n, "sector out of range");
        let e = self.sectors.entry(k).or_insert_with(|| Polynomial::zero(self.n, self.field));
        e.add_assign(f);
        if e.is_zero() {
            self.sectors.remove(&k);
        }
    }

    pub fn add(&self, o: &VnElement) -> VnElement {
        let mut r = self.clone();
        for (k, f) in &o.sectors {
            r.add_sector(*k, f);
        }
        r
    }

    pub fn scale(&self, c: u32) -> VnElement {
        let mut r = VnElement::zero(self.n, self.field);
        for (k, f) in &self.sectors {
            r.add_sector(*k, &f.scale(c));
        }
        r
    }
}

/// Action of a single generator.
pub fn act_token(tok: GeneratorToken, v: &VnElement) -> VnElement {
    let n = v.n;
    let f = v.field;
    let mut r = VnElement::zero(n, f);
    match tok {
        GeneratorToken::E(k) => {
            if let Some(p) = v.sectors.get(&k) {
                r.add_sector(k, p);
            }
        }
        GeneratorToken::X(j) => {
            let x = Polynomial::var(n, f, Var::X(j));
            for (k, p) in &v.sectors {
                r.add_sector(*k, &p.mul(&x));
            }
        }
        GeneratorToken::Y => {
            let y = Polynomial::var(n, f, Var::Y);
            for (k, p) in &v.sectors {
                r.add_sector(*k, &p.mul(&y));
            }
        }
        GeneratorToken::Psi(j) => {
            // Black strand in slot j-1 moves right past red j, picking up (y - x_j);
            // in slot j it moves left and the polynomial is carried over.
            if let Some(p) = v.sectors.get(&(j - 1)) {
                r.add_sector(j, &p.mul(&Polynomial::y_minus_x(n, f, j)));
            }
            if let Some(p) = v.sectors.get(&j) {
                r.add_sector(j - 1, p);
            }
        }
    }
    r
}

/// Action of a word; the rightmost token acts first.
pub fn act_word(w: &[GeneratorToken], v: &VnElement) -> VnElement {
    w.iter().rev().fold(v.clone(), |acc, t| act_token(*t, &acc))
}

/// Action of an algebra element, evaluated on the defining words of its basis terms.
pub fn act(a: &AlgebraElement, v: &VnElement) -> VnElement {
    let mut r = VnElement::zero(v.n, v.field);
    for (b, c) in a.terms() {
        r = r.add(&act_word(&b.word(a.n()), v).scale(c));
    }
    r
}

/// Action of a bimodule element of W_i, W_{i,i+1} or a tensor product, through
/// `f_0 (x) f_1 (x) ... -> (v -> f_0 D_1(f_1 D_2(... v)))`.
pub fn bimodule_act(model: &BimoduleModel, m: &BimoduleElement, v: &VnElement) -> VnElement {
    let mut r = VnElement::zero(v.n, v.field);
    for (&(t, s), a) in m.blocks() {
        if let Some(p) = v.sectors.get(&s) {
            r.add_sector(t, &model.ambient().operator_apply(a, p));
        }
    }
    r
}

/// All basis vectors `(sector, monomial)` of V_n of internal degree at most `d`.
pub fn window(n: usize, d: u32) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for t in 0..=d / 2 {
            let mut ms = Monomial::all_of_total(n, true, t);
            ms.reverse();
            out.extend(ms.into_iter().map(|m| (k, m)));
        }
    }
    out
}

/// Sparse matrix of an operator on the window of V_n of degree at most `window`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFingerprint {
    pub window: u32,
    /// `(column, row sector, row monomial, coefficient)`, sorted.
    pub entries: Vec<(u32, usize, Monomial, u32)>,
}

impl OperatorFingerprint {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// One triplet per line: `column sector monomial coefficient`.
    pub fn to_text(&self, n: usize) -> String {
        let mut s = format!("window {}\n", self.window);
        for (c, k, m, v) in &self.entries {
            let _ = writeln!(s, "{c} {k} {} {v}", m.format(n));
        }
        s
    }
}

/// Fingerprint of an arbitrary operator on V_n.
pub fn fingerprint_fn(
    n: usize,
    field: FieldParams,
    d: u32,
    op: impl Fn(&VnElement) -> VnElement + Sync,
) -> OperatorFingerprint {
    let cols = window(n, d);
    let mut entries: Vec<(u32, usize, Monomial, u32)> = cols
        .par_iter()
        .enumerate()
        .flat_map_iter(|(c, (k, m))| {
            let v = VnElement::from_sector(n, *k, Polynomial::monomial(n, field, *m, 1));
            let img = op(&v);
            let mut out = Vec::new();
            for (k2, p) in img.sectors {
                for (m2, val) in p.terms() {
                    out.push((c as u32, k2, *m2, *val));
                }
            }
            out
        })
        .collect();
    entries.sort();
    OperatorFingerprint { window: d, entries }
}

pub fn fingerprint(a: &AlgebraElement, d: u32) -> OperatorFingerprint {
    fingerprint_fn(a.n(), a.field(), d, |v| act(a, v))
}

/// Fingerprint of `phi_i` (or its iterates) applied to a bimodule element.
pub fn phi_apply(model: &BimoduleModel, m: &BimoduleElement, d: u32) -> OperatorFingerprint {
    fingerprint_fn(model.n(), model.field(), d, |v| bimodule_act(model, m, v))
}

/// Fingerprint of `gamma_{i,i+1}` applied to an element of W_{i,i+1}.
pub fn gamma_apply(model: &BimoduleModel, m: &BimoduleElement, d: u32) -> OperatorFingerprint {
    phi_apply(model, m, d)
}

/// Outcome of checking the double-crossing relation against the representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Psi2Calibration {
    /// Does `psi_j psi_j e = (x_j - y) e` hold, as stated, for the order with
    /// the black strand left of red `j`?
    pub stated_holds_black_left: bool,
    pub stated_holds_black_right: bool,
    /// Sign `sigma` with `psi_j psi_j e = sigma (x_j - y) e` under the representation.
    pub convention: Psi2Convention,
    /// The dot in the relation sits on the red strand being crossed.
    pub dot_on_crossed_strand: bool,
}

/// Determine the double-crossing signs from the representation, for every
/// `j` and both crossing orders.
pub fn calibrate_psi2(n: usize, field: FieldParams) -> Psi2Calibration {
    let mut signs = [0i8; 2];
    let mut on_crossed = true;
    for j in 1..=n {
        for (o, k) in [(0usize, j - 1), (1usize, j)] {
            let w = [GeneratorToken::Psi(j), GeneratorToken::Psi(j), GeneratorToken::E(k)];
            let v = VnElement::from_sector(n, k, Polynomial::one(n, field));
            let img = act_word(&w, &v);
            let base = Polynomial::var(n, field, Var::X(j)).sub(&Polynomial::var(n, field, Var::Y));
            let got = img.sector(k);
            let s = if got == base {
                1
            } else if got == base.neg() {
                -1
            } else {
                on_crossed = false;
                0
            };
            if signs[o] == 0 {
                signs[o] = s;
            } else if signs[o] != s {
                signs[o] = 0;
            }
        }
    }
    let convention = Psi2Convention { black_left: signs[0], black_right: signs[1] };
    Psi2Calibration {
        stated_holds_black_left: signs[0] == 1,
        stated_holds_black_right: signs[1] == 1,
        convention,
        dot_on_crossed_strand: on_crossed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, GeneratorToken::*};

    fn f() -> FieldParams {
        FieldParams::new(5).unwrap()
    }

    #[test]
    fn idempotent_projects() {
        let v = VnElement::from_sector(2, 1, Polynomial::var(2, f(), Var::X(1)));
        assert_eq!(act_word(&[E(1)], &v), v);
        assert!(act_word(&[E(2)], &v).is_zero());
    }

    #[test]
    fn crossing_moves_right_with_weight() {
        let v = VnElement::from_sector(2, 0, Polynomial::var(2, f(), Var::Y));
        let r = act_word(&[Psi(1), E(0)], &v);
        let want = Polynomial::y_minus_x(2, f(), 1).mul(&Polynomial::var(2, f(), Var::Y));
        assert_eq!(r, VnElement::from_sector(2, 1, want));
    }

    #[test]
    fn calibration_flips_both_orders() {
        let c = calibrate_psi2(3, f());
        assert_eq!(c.convention, Psi2Convention { black_left: -1, black_right: -1 });
        assert!(c.dot_on_crossed_strand);
        assert!(!c.stated_holds_black_left && !c.stated_holds_black_right);
    }

    #[test]
    fn unit_fingerprint_is_identity() {
        let alg = Algebra::new(2, f(), calibrate_psi2(2, f()).convention);
        let fp = fingerprint(&alg.one(), 4);
        let cols = window(2, 4);
        assert_eq!(fp.entries.len(), cols.len());
        for (c, k, m, v) in &fp.entries {
            assert_eq!(cols[*c as usize], (*k, *m));
            assert_eq!(*v, 1);
        }
    }
}
