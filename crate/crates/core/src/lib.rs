//! Boolean network optimization with complete don't-cares
//!
//! For each node, the don't-cares allowed by its surroundings are computed in a window of
//! the network: random simulation and all-solutions SAT over a structurally hashed miter
//! give the care set of the node in terms of its fanins. The node is then re-minimized
//! against these don't-cares and replaced immediately, before the next node is processed.

pub mod aig;
pub mod cnf;
pub mod dontcare;
pub mod minimize;
pub mod netlist;
pub mod optimize;
pub mod satcore;
pub mod truth;
pub mod windowing;

pub use netlist::{parse_blif, write_blif, Network, NodeId, Sop};
pub use truth::{Isf, TruthTable};
