//! Concrete fusion families: duals of discrete groups, the SU(2)-type rules
//! of `A_o(F)`, the SO(3)-type rules of `A^aut(B)`, and the free fusion rules
//! of `A_u(F)`.

pub mod ao;
pub mod au;
pub mod aut;
pub mod group;

pub use ao::{ao_dim, AoRules};
pub use au::{au_bar, AuRules, AuWord};
pub use aut::{aut_dim, AutRules};
pub use group::{Factor, FactorKind, GroupDual, GroupWord, ProductKind};
