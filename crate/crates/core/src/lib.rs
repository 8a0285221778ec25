//! Exact computational toolkit for crossed-product admissibility over number
//! fields: finite p-groups, abelian number fields, local realizability,
//! Hasse-invariant arithmetic, Liedahl's condition, and the implication
//! lattice between fields-of-definition conditions with replayable
//! counterexample certificates.

pub mod arith;
pub mod groups;
pub mod numberfields;
pub mod localfields;
pub mod brauer;
pub mod liedahl;
pub mod conditions;

pub use brauer::{BrauerClass, BrauerError, InvariantValue};
pub use conditions::{Certificate, Condition, ConditionError, Mode, Registry};
pub use groups::{FiniteGroup, GroupError, GroupSpec, Subgroup};
pub use liedahl::LiedahlVerdict;
pub use localfields::{LocalError, LocalFieldDatum};
pub use numberfields::{AbelianNumberField, FieldError, PrimeSlot};
