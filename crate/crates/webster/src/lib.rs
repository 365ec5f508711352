//! Webster algebras W(n,1) over F_p, their p-DG structure, polynomial
//! representation, singular Soergel-type bimodules and complexes over them.

pub mod algebra;
pub mod bimodule;
pub mod field;
pub mod homological;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rep;
pub mod verify;
pub mod suites;
