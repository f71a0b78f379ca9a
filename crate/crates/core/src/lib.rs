//! Tight-binding SSH chains with site-resolved onsite potentials.

pub mod classify;
pub mod cli;
pub mod engine;
pub mod error;
pub mod model;
pub mod output;
pub mod response;
pub mod spectra;
pub mod svg;
pub mod sweep;

pub use error::{Error, Result};
