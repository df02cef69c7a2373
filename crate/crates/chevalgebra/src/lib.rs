//! Exact construction of the Frobenius algebras attached to simply-laced
//! Chevalley groups, with decomposition and fusion-law verification and the
//! E_8 one-parameter axial family.

pub mod exactla;
pub mod rootsys;
pub mod chevalley;
pub mod zerosub;
pub mod corealg;
pub mod characters;
pub mod decomp;
pub mod e8axial;
pub mod cli;
