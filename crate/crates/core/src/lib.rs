pub mod arith;
pub mod charsum;
pub mod coverparam;
pub mod ensemble;
pub mod error;
pub mod fqpoly;
pub mod gf;
pub mod lseries;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/finite-fields.md")]
    mod finite_fields {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/parametrization.md")]
    mod parametrization {}
    #[doc = include_str!("../../../book/src/point-counting.md")]
    mod point_counting {}
    #[doc = include_str!("../../../book/src/l-series.md")]
    mod l_series {}
    #[doc = include_str!("../../../book/src/ensemble.md")]
    mod ensemble {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
