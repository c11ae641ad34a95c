//! Thread-safe polynomial cache, optionally falling back to a store's
//! sealed levels on a miss.

use dashmap::DashMap;
use treepoly_core::{CanonicalCode, PolyCache, Polynomial};

use crate::store::Store;

#[derive(Debug, Default)]
pub struct SharedCache<'s> {
    memory: DashMap<CanonicalCode, Polynomial>,
    store: Option<&'s Store>,
}

impl<'s> SharedCache<'s> {
    pub fn new() -> Self {
        SharedCache {
            memory: DashMap::new(),
            store: None,
        }
    }

    /// Misses consult `store` before reporting absence.
    pub fn backed_by(store: &'s Store) -> Self {
        SharedCache {
            memory: DashMap::new(),
            store: Some(store),
        }
    }

    pub fn len(&self) -> usize {
        self.memory.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memory.is_empty()
    }
}

impl PolyCache for SharedCache<'_> {
    fn get(&self, code: &CanonicalCode) -> Option<Polynomial> {
        if let Some(hit) = self.memory.get(code) {
            return Some(hit.clone());
        }
        // A read failure is just a miss; the caller recomputes.
        self.store
            .and_then(|s| s.fetch_polynomial(code).ok().flatten())
    }

    fn insert(&self, code: CanonicalCode, poly: Polynomial) {
        self.memory.entry(code).or_insert(poly);
    }
}
