//! Design-theoretic objects, their exhaustive verifiers, base-block
//! development, and parameter-level existence tests.

pub mod arith;
pub mod block;
pub mod develop;
pub mod io;
pub mod types;
pub mod verify;

pub use arith::{binomial, divisibility_ok, expected_block_count, known_nonexistent, Nonexistence};
pub use block::{BlockError, Point, SplitBlock};
pub use develop::{develop_base_blocks, DevelopError};
pub use io::{AnyDesign, DesignFile, DesignFileError, DesignKind};
pub use types::{
    BaseBlockSystem, CandelabraSystem, Gdd, GroupType, SplittingCandelabra, SplittingDesign, SplittingGdd,
};
pub use verify::{
    verify_candelabra, verify_edge_partition, verify_gdd, verify_splitting_candelabra, verify_splitting_design,
    verify_splitting_gdd, VerifyReport, Witness,
};
