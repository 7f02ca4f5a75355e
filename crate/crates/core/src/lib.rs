//! Train track complexes of the two sporadic surfaces: the once-punctured torus
//! `S(1,1)` and the 4-punctured sphere `S(0,4)`.
//!
//! Everything is exact. Tracks are trivalent ribbon graphs with large/small slot
//! roles and a twisted `Z^2` marking; the complex is explored as finite BFS balls
//! whose distances are only trusted when a certification inequality holds.
//!
//! Module map:
//!
//! * [`farey`] slopes, Farey balls, the dual tree and intersection numbers
//! * [`graph`] finite graphs, BFS, certified distances, rooted isomorphism, export
//! * [`track`] the ribbon model, complementary regions, keys and enumeration
//! * [`marking`] twisted markings, gauge normal forms and the double-cover derivation
//! * [`measures`] the measure cone, its extremal rays and slope extraction
//! * [`splitting`] large branches, splits, folds and double splits
//! * [`complex`] balls of the complex, fibre maps, the PSL(2,Z) Cayley ball and lemma checks
//! * [`action`] the mapping class group model and its action
//! * [`cli`] the command implementations behind the `ttgeo` binary

pub mod action;
pub mod cli;
pub mod complex;
pub mod error;
pub mod farey;
pub mod fixtures;
pub mod graph;
mod lattice;
pub mod marking;
pub mod matrix;
pub mod measures;
pub mod parallel;
pub mod report;
pub mod splitting;
pub mod track;

pub use error::{Error, Result};
pub use farey::{FareyEdge, FareyGraph, Slope};
pub use graph::Graph;
pub use marking::{Marking, Transit};
pub use matrix::Psl2;
pub use track::{CanonicalKey, ClassKey, Slot, SurfaceId, TrainTrack};
