pub mod cli;
pub mod cq;
pub mod disjunctive;
pub mod error;
pub mod errorbound;
pub mod expr;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod ortho;
pub mod rational;
pub mod stationarity;

pub use error::{Error, Result};
pub use rational::Q;
