//! Gradings on Heisenberg-type Lie algebras and superalgebras: exact scalars,
//! universal groups, fine gradings, Weyl groups and color algebras.

pub mod abelian;
pub mod linalg;
pub mod liealg;
pub mod scalars;
pub mod gradings;
pub mod fine;
pub mod weyl;
pub mod color;
pub mod cli;
