//! Root-system combinatorics, Chevalley commutator data, sector faces in
//! apartments and arithmetic of the function field `F_q(t)`, assembled to
//! study quotients of Bruhat–Tits buildings by S-arithmetic groups.

pub mod error;
pub mod ffield;
pub mod ideals;
pub mod apartment;
pub mod building;
pub mod chevalley;
pub mod linalg;
pub mod mpoly;
pub mod ratmat;
pub mod rootsys;
pub mod subsets;

pub use error::{Error, Result};
