//! Lattice-polytope models of binary symmetric 3-valent phylogenetic trees.
//!
//! The crate is organised bottom-up:
//!
//! * [`tree`]: parsing, generators, grafts and mutations of leaf-labelled trees
//! * [`lattice`]: the polytope of a tree, its dual, faces, lattice points,
//!   vertex-link divisions and unimodular covers
//! * [`ehrhart`]: the ⋆-product, relative Ehrhart sequences, Hilbert–Ehrhart
//!   polynomials and volume distributions
//! * [`ideal`]: quadratic binomials of the toric ideal in socket coordinates
//! * [`verify`]: the numbered acceptance checks, shared by the CLI and tests

pub mod ehrhart;
pub mod ideal;
pub mod lattice;
pub mod tree;
pub mod verify;

pub use tree::{parse_tree, PointedTree, Tree, TreeError};
