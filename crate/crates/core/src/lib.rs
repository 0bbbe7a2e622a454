//! Finite operadic categories and the décalage constructions that
//! characterise them, realised as explicit finite data with exhaustive law
//! checkers.

pub mod cli;
pub mod corpus;
pub mod correspond;
pub mod decalage;
pub mod error;
pub mod examples;
pub mod fincat;
pub mod moddec;
pub mod operadic;
pub mod report;
pub mod simplicial;
pub mod sskel;
pub mod text;

pub use error::{Error, ParseError, Result};
pub use report::{Report, Violation};
