//! Exact 2-step stay probabilities of balanced red/blue colourings of
//! regular graphs.
//!
//! For a colour class `S`, `P_t(S)` is the probability that a `t`-step
//! random walk started at a uniform vertex of `S` is in `S` at every step.
//! Everything here is computed in exact rational arithmetic.

pub mod colouring;
pub mod constructions;
pub mod covers;
pub mod enumerate;
pub mod error;
pub mod frac;
pub mod graph;
pub mod region;
pub mod torus2;
pub mod walk;

pub use colouring::{degree_profile, Colouring, DegreeProfile};
pub use covers::{
    exhaustive_cover_search, verify_cover_in_graph, verify_on_torus, CoverFamily, CoverPredicate,
    CoverReport, SearchLimits, SearchOutcome,
};
pub use enumerate::{check_containment, enumerate_region, EnumerationMode, RegionCloud};
pub use error::{Error, Result};
pub use frac::Q;
pub use graph::{edge_boundary, Graph, GraphLabel, TorusShape};
pub use region::{contains, ConvexRegion, Location, RationalPoint};
pub use walk::{p1, p2, pt, RationalPair};
