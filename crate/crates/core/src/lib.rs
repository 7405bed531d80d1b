pub mod chart;
pub mod classify;
pub mod cli;
pub mod curvature;
pub mod deform;
pub mod error;
pub mod frame;
pub mod models;
pub mod moduli;
pub mod systems;

pub use error::{Error, Result};
