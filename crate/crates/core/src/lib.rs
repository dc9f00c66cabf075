pub mod arrays;
pub mod error;
pub mod factorization;
pub mod field_oracle;
pub mod fit;
pub mod kernel;
pub mod linalg;
pub mod pipeline;
pub mod quadrature;
pub mod specfun;
pub mod wedge;

pub use error::{Error, Result};
