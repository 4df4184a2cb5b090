//! Exact computational topology over axis-aligned rational boxes.
//!
//! The crate decides the way-below relation (`S` is way below `T` when every
//! open cover of `T` has a finite subfamily covering `S`) on a small family of
//! spaces built from rational box geometry, and turns each decision into a
//! machine-checkable artifact:
//!
//! * [`waybelow::way_below`] returns either a subcover-selection certificate
//!   or a cover-family refutation, never a bare boolean.
//! * [`interpolation::interpolate`] strengthens `S x T` way below `W` into an
//!   interpolating open rectangle `U_S x V_T`, with a replayable trace.
//! * [`colimit::build_chain`] grows per-stage rectangles witnessing openness
//!   through an ascending sequence of spaces.
//! * [`counterexamples`] hosts the rational-trace and wedge-of-circles
//!   constructions on which these guarantees fail, with self-verifying
//!   witnesses.
//!
//! All arithmetic is exact (arbitrary-precision rationals); every function is
//! pure and every randomized entry point is seeded, so outputs are
//! reproducible byte for byte.

pub mod colimit;
pub mod counterexamples;
pub mod geometry;
pub mod rat;
pub mod rng;
pub mod interpolation;
pub mod properties;
pub mod spaces;
pub mod surd;
pub mod waybelow;

pub use colimit::{
    build_chain, chain_union, check_open_at, rectangle_cover_check, AscendingSequence,
    ChainWitness, ColimitError, ColimitOpen, CoverReport, OpenRule, StageRule,
};
pub use counterexamples::{
    a_membership, hamcke_report, not_closed_demo, product_limit_witness,
    stage_separation_witness, ASetQuery, CounterexampleError, HamckeReport, PiBounds, WedgePoint,
};
pub use geometry::{elementary_cells, BoxUnion, GeometryError, Interval, Rect};
pub use interpolation::{interpolate, replay_trace, Interpolation, InterpolationError};
pub use properties::{run_laws, run_properties, LawResult, PropertyReport, RunConfig};
pub use rat::Rat;
pub use spaces::{PointQ, Space, SpaceError};
pub use waybelow::{
    core_compact_witness, verify_refutation, way_below, CoverFamily, SubcoverSelector,
    WayBelowError, WayBelowVerdict,
};
