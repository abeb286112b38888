//! Exact construction, verification and recognition of finite-dimensional
//! minimal triangular pointed Hopf algebras over cyclotomic fields.
//!
//! The guide in `book/` walks through each module; its snippets are
//! compiled as doctests of this crate.

#![allow(clippy::needless_range_loop)]

pub mod abgroup;
pub mod cyclo;
pub mod error;
pub mod hd;
pub mod hopf;
pub mod linalg;
pub mod report;
pub mod triangular;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/forms.md")]
    mod forms {}
    #[doc = include_str!("../../../book/src/hopf-structures.md")]
    mod hopf_structures {}
    #[doc = include_str!("../../../book/src/building-hd.md")]
    mod building_hd {}
    #[doc = include_str!("../../../book/src/triangular.md")]
    mod triangular {}
    #[doc = include_str!("../../../book/src/recognition.md")]
    mod recognition {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
