//! Cohomology-ring obstructions to special generic maps.
//!
//! A closed manifold is described by finitely presented cohomology data:
//! graded groups with cup-product tables over the integers and over `Z/k`,
//! linked by coefficient-reduction maps. The [`obstruction`] engine decides
//! which cohomological criteria rule out special generic maps into `R^n`,
//! producing replayable witnesses, and certifies lower bounds for the number
//! of connected components of the singular set of maps into `R^5`.

pub mod abelian;
pub mod builder;
pub mod obstruction;
pub mod ring;
