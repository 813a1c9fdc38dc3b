pub mod error;
pub mod exactalg;

pub use error::{Error, Result};
pub mod symalg;
pub mod bimod;
pub mod complex;
pub mod knotio;
pub mod hecke;
pub mod hochschild;

/// The guide, with its examples compiled as doctests.
pub mod docs {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/braids.md")]
    pub mod braids {}
    #[doc = include_str!("../../../book/src/symmetric.md")]
    pub mod symmetric {}
    #[doc = include_str!("../../../book/src/bimodules.md")]
    pub mod bimodules {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    pub mod complexes {}
    #[doc = include_str!("../../../book/src/homology.md")]
    pub mod homology {}
    #[doc = include_str!("../../../book/src/hecke.md")]
    pub mod hecke {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
