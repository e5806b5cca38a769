//! Dispersion and density points in the sense of Baire category, on the
//! real line and on the Cantor space, with exact certificates.

pub mod cantorsets;
pub mod density;
pub mod document;
pub mod error;
pub mod library;
pub mod oracle;
pub mod phi;
pub mod rational;
pub mod realsets;
pub mod sequence;

pub use error::{Error, Result};
pub use rational::{Bound, Rational};
