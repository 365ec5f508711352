//! (W,W)-bimodules W_i, W_{i,i+1}, their tensor products and twists, with
//! explicit bases, differentials and bimodule homomorphisms.

pub mod ambient;
pub mod family;
pub mod maps;
pub mod model;
pub mod standard;

pub use ambient::{Amb, Ambient, Factor};
pub use family::{
    basis_element, coordinates, enumerate_bimodule_basis, family_kind, format_element, format_index, realize,
    BimodBasisIndex, Family, FamilyKind,
};
pub use model::{BimodCtx, BimodError, BimoduleElement, BimoduleKind, BimoduleModel, BimoduleSpec};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, Psi2Convention};
    use crate::field::FieldParams;
    use std::sync::Arc;

    fn ctx(n: usize, p: u64) -> BimodCtx {
        BimodCtx::new(Arc::new(Algebra::new(n, FieldParams::new(p).unwrap(), Psi2Convention::STATED)))
    }

    fn check_family(c: &BimodCtx, spec: &BimoduleSpec, dmax: i64) {
        let m = c.model(spec).unwrap();
        for d in -4..=dmax {
            let fam = enumerate_bimodule_basis(&m, d);
            let dim = m.dim(d);
            let mut per_block = std::collections::BTreeMap::new();
            for idx in &fam {
                let (ts, a) = realize(&m, idx);
                assert!(m.structure().contains(ts.0, ts.1, &a), "{} {:?} not in model", spec, format_index(&m, idx));
                *per_block.entry(ts).or_insert(0usize) += 1;
            }
            for (t, s) in m.blocks() {
                let md = m.polydeg_for(t, s, d).map_or(0, |pd| m.structure().space(t, s, pd).dim());
                let fd = per_block.get(&(t, s)).copied().unwrap_or(0);
                assert_eq!(fd, md, "{spec} degree {d} block ({t},{s}): family {fd} model {md}");
            }
            assert_eq!(fam.len(), dim);
        }
    }

    #[test]
    fn aleph_family_matches_model() {
        let c = ctx(2, 3);
        check_family(&c, &BimoduleSpec::wi(1), 6);
        let c = ctx(3, 3);
        check_family(&c, &BimoduleSpec::wi(1), 5);
        check_family(&c, &BimoduleSpec::wi(2), 5);
    }

    #[test]
    fn beth_family_matches_model() {
        let c = ctx(3, 3);
        check_family(&c, &BimoduleSpec::wii1(1), 6);
    }

    #[test]
    fn gimel_family_matches_model() {
        let c = ctx(3, 3);
        let s = BimoduleSpec::tensor(vec![BimoduleSpec::wi(1), BimoduleSpec::wi(2), BimoduleSpec::wi(1)]);
        check_family(&c, &s, 5);
    }
}
