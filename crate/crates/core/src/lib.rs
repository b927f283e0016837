//! Distance-based reconstruction of low-level phylogenetic networks.
//!
//! The central objects are *unrooted binary phylogenetic networks*: simple
//! connected graphs whose degree-1 vertices (leaves) are bijectively labelled
//! by a taxon set and whose internal vertices all have degree 3. Between any
//! two leaves we measure the shortest and the longest path length, giving a
//! matrix of `(min, max)` distance pairs over the taxa.
//!
//! This crate implements, for networks in which every biconnected component
//! has cycle rank at most 2 (plus some tools that reach rank 3):
//!
//! - computing shortest/longest leaf-to-leaf distance matrices ([`metrics`]),
//! - decomposing a network into blobs, its blob tree and its generator
//!   ([`decompose`]),
//! - recovering cherries, chains and cut-edge splits from a matrix alone
//!   ([`chains`], [`splits`]),
//! - identifying and replaying pendant-blob reductions ([`pendant`]),
//! - full matrix-to-network reconstruction, including the ambiguous cases
//!   that only shortest distances cannot settle ([`reconstruct`]),
//! - the alternating-path obstruction that characterises when shortest
//!   distances suffice ([`altpath`]),
//! - seeded random generators and round-trip checking ([`testkit`]).
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the
//! command-line front end live in the companion crate `phynet-cli`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod altpath;
pub mod chains;
pub mod decompose;
pub mod fixtures;
pub mod iso;
pub mod metrics;
pub mod network;
pub mod pendant;
pub mod reconstruct;
pub mod splits;
pub mod testkit;

pub use network::{Network, Taxon, Vertex};
