//! Exact computational verification toolkit for generation of finite groups
//! of Lie type by regular unipotent elements: class-algebra structure
//! constants (brute, character-theoretic, and closed-form), stabilizer-chain
//! machinery, generation-witness replay, and big-integer counting bounds.
//!
//! Everything is exact; there is no floating point anywhere in the crate.

pub mod chain;
pub mod chartab;
pub mod classes;
pub mod cyclo;
pub mod dixon;
pub mod element;
pub mod field;
pub mod formulas;
pub mod matrix;
pub mod perm;
pub mod report;
pub mod suite;
pub mod surd;
pub mod util;
pub mod witness;

pub use chain::{build_chain, ChainOptions, StabilizerChain};
pub use chartab::CharacterTable;
pub use classes::ClassTable;
pub use cyclo::Cyclotomic;
pub use element::{Element, GroupSpec};
pub use field::{gf, make_field, FieldScalar, FieldSpec};
pub use matrix::{Family, FormDescriptor, SquareMatrix};
pub use perm::Perm;
pub use report::{Report, Status};
pub use surd::QuadraticSurd;
