pub mod delta_invariants;
pub mod exact_linalg;
pub mod heisenberg_modules;
pub mod nilpotent_groups;
pub mod pipeline;
pub mod symplectic;
