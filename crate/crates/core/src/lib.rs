//! Uniform Vietoris homology of finite uniform and metric spaces.

pub mod complex;
pub mod connect;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod homology;
pub mod homotopy;
pub mod io;
pub mod space;
pub mod tower;

pub use error::{Error, Result};
