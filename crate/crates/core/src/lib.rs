pub mod cli;
pub mod dot;
pub mod error;
pub mod filters;
pub mod lattice;
pub mod lazylf;
pub mod poset;
pub mod report;
pub mod repr;
pub mod subset;
pub mod transpose;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::FiniteLattice;
pub use poset::Poset;
pub use subset::Subset;
