//! Balanced black-and-white anticolorings of chessboards, with the knight
//! as the main piece. The guide in `book/` walks through each module.

pub mod board;
pub mod coloring;
pub mod construct;
pub mod error;
pub mod formula;
pub mod ipexport;
pub mod oracle;
pub mod transform;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/board.md")]
    mod board {}
    #[doc = include_str!("../../../book/src/colorings.md")]
    mod colorings {}
    #[doc = include_str!("../../../book/src/closed-form.md")]
    mod closed_form {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/normalization.md")]
    mod normalization {}
    #[doc = include_str!("../../../book/src/integer-program.md")]
    mod integer_program {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
