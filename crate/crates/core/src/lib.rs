pub mod algebra;
pub mod eigen;
pub mod error;
pub mod fusion;
pub mod lattice;
pub mod linalg;
pub mod orbitals;
pub mod partition;
pub mod poly;
pub mod report;
pub mod scheme;

pub use error::{Error, Result};

/// Exact rational scalar used for every structure constant.
pub type Rational = num_rational::BigRational;

/// Chapters of the guide in `book/`, compiled here so their snippets run as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/algebras.md")]
    pub struct Algebras;
    #[doc = include_str!("../../../book/src/partitions.md")]
    pub struct Partitions;
    #[doc = include_str!("../../../book/src/fusions.md")]
    pub struct Fusions;
    #[doc = include_str!("../../../book/src/schemes.md")]
    pub struct Schemes;
    #[doc = include_str!("../../../book/src/orbitals.md")]
    pub struct Orbitals;
    #[doc = include_str!("../../../book/src/eigen.md")]
    pub struct Eigen;
    #[doc = include_str!("../../../book/src/lattice.md")]
    pub struct Lattice;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../book/src/reports.md")]
    pub struct Reports;
}
