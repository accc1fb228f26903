//! Regularity properties of finite topological spaces, the discontinuity
//! ladder of maps between them, and an oracle interface for countable
//! first-countable spaces such as the hedgehog.
//!
//! ```
//! use topo_core::{FinSpace, Property};
//!
//! let s = FinSpace::sierpinski();
//! assert!(Property::WeaklyRegular.holds(&s));
//! assert!(!Property::Regular.holds(&s));
//! ```

pub mod decomposition;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod map;
pub mod oracle;
pub mod predicate;
pub mod regularity;
pub mod space;

pub use decomposition::{open_decomposition, theta_decomposition, theta_kernel, weak_homeo_witness, Decomposition, KernelMode};
pub use diagram::{verify_diagram, DiagramReport};
pub use enumerate::{enumerate_spaces, homeomorphism_classes, labeled_spaces, Mode};
pub use error::{Result, TopoError};
pub use map::{FinMap, MapClass, Tier};
pub use oracle::{
    certify_hedgehog_profile, embed_hedgehog, hedgehog, verify_embedding, BasicSet, Embedding, Hedgehog, HedgehogSum,
    OracleError, OraclePoint, OracleSpace, PermutedHedgehog,
};
pub use predicate::{find_space, PredicateExpr};
pub use regularity::{classify_report, Property, PropertyReport, SwVerdict};
pub use space::{FinSpace, PointSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/finite-spaces.md")]
    mod finite_spaces {}
    #[doc = include_str!("../../../book/src/theta-open.md")]
    mod theta_open {}
    #[doc = include_str!("../../../book/src/continuity-ladder.md")]
    mod continuity_ladder {}
    #[doc = include_str!("../../../book/src/regularity.md")]
    mod regularity {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    mod decomposition {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/hedgehog.md")]
    mod hedgehog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
