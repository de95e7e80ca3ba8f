pub mod error;
pub mod poly;
pub mod quaddiff;
pub mod cover;
pub mod homology;
pub mod periods;
pub mod norm;
pub mod oracle;
pub mod quadrature;
pub mod sphere;
pub mod plot;
pub mod cli;

pub use error::{Error, Result};
