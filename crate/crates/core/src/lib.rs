pub mod bounds;
pub mod channels;
pub mod cli;
pub mod composition;
pub mod entropy;
pub mod error;
pub mod gaussian_calculus;
pub mod optimize;
pub mod qkd_rates;
pub mod qudit;
pub mod symplectic;
pub mod telesim;

pub use error::{Error, Result};
