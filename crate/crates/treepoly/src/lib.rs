//! Storage, parallel enumeration, reports and the command-line front end
//! for the tree independence-polynomial corpus. The algorithms themselves
//! live in `treepoly-core`.

pub mod analysis;
pub mod cache;
pub mod cli;
pub mod format;
pub mod pipeline;
pub mod store;

pub use store::{LevelManifest, Store, StoreError};
