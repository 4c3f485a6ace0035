pub mod symbolic;
pub mod exterior;
pub mod structure;
pub mod moser;
pub mod heisenberg;
pub mod report;
pub mod sphere;
pub mod suite;
pub mod expand;
