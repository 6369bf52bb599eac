//! Exact symbolic toolkit for the algebraicity of holomorphic maps between
//! real algebraic CR manifolds.

pub mod engine;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod pipeline;
pub mod poly;
pub mod segre;
pub mod tangent;

pub use error::{Error, Result};
pub use gaussian::GaussianRational;
