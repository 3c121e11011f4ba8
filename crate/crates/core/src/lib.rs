//! Exact computational algebra for big Witt vectors, one-dimensional formal
//! group laws, Artin-Mazur logarithms of Calabi-Yau pencils, Hasse-Witt
//! ordinarity checks and Picard-Fuchs congruences.

pub mod artinmazur;
pub mod cli;
pub mod error;
pub mod fgl;
pub mod ordinarity;
pub mod picardfuchs;
pub mod ring;
pub mod witt;

pub use error::{Error, ErrorClass, Result};
