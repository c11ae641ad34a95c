//! Unlabeled trees, their canonical codes, and exact independence
//! polynomials.
//!
//! This crate is `no_std` (it needs `alloc`). Storage, parallel enumeration,
//! reports and the command-line tool live in the `treepoly` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod canon;
pub mod enumerate;
pub mod indpoly;
pub mod poly;
pub mod record;
pub mod tree;

pub use canon::{
    canonical_root, code_compare, decode, free_code, rooted_code, CanonicalCode, CodeError,
};
pub use enumerate::{expand, expand_code, expected_tree_count, LevelPlan, TREE_COUNTS};
pub use indpoly::{brute_force_polynomial, independence_polynomial, MemoCache, NoCache, PolyCache};
pub use poly::{argmax_lowest, monotonic, Monotonic, PolyError, Polynomial};
pub use record::{RecordError, TreeRecord};
pub use tree::{Forest, Tree, TreeError};
