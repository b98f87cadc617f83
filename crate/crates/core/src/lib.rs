//! Thue-Morse self-similar groups and algebras.

pub mod algebra;
pub mod characters;
pub mod dynamics;
pub mod error;
pub mod group;
mod lexer;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
