//! Finite combinatorics of dendroidal sets.

pub mod category;
pub mod closed_ops;
pub mod error;
pub mod flavor;
pub mod gset;
pub mod homotopy;
pub mod lean;
pub mod lifting;
pub mod limits;
pub mod morphism;
pub mod nat;
pub mod normality;
pub mod presheaf;
pub mod sample;
pub mod simplicial;
pub mod tree;
pub mod verify;

pub use category::{Arrow, TreeCategory};
pub use error::{DendroError, Result};
pub use morphism::{automorphisms, compose, elementary_maps, hom_set, ElementaryKind, OmegaMorphism};
pub use tree::{enumerate_trees, parse_term, print_term, EdgePoset, Flavor, Node, Tree, TreeKey};
