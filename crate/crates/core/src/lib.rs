//! Diagrammatic calculus for the degenerate Heisenberg category at central
//! charge −1 and its semisimple subcategory.

pub mod diagrams;
pub mod engine;
pub mod error;
pub mod expr;
pub mod ideals;
pub mod oracle;
pub mod render;
pub mod weyl;
pub mod words;

pub use error::{HeisError, Result};
