//! Concrete submodular objectives: explicit tabular functions, weighted
//! modular functions, the dominating-set coverage objective, and the
//! exemplar (k-medoid loss reduction) objective.

pub mod domset;
pub mod exemplar;
pub mod modular;
pub mod tabular;

pub use domset::{DomSetObjective, Graph};
pub use exemplar::{ExemplarConfig, ExemplarObjective, VectorDataset};
pub use modular::ModularObjective;
pub use tabular::{table2_objective, TabularObjective};
