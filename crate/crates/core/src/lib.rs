//! Exact asymmetric tropical Voronoi diagrams and their power-diagram lifts.

pub mod cli;
pub mod delone;
pub mod exactnum;
pub mod lift;
pub mod polytrope;
pub mod sites;
pub mod tropcore;
pub mod voronoi;

mod error;

pub use error::Error;
