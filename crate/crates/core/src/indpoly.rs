//! Independence polynomials of trees.
//!
//! [`independence_polynomial`] applies the deletion recurrence
//! `I(T) = I(T - v) + x * I(T - N[v])` at the canonical root `v`, turning
//! each side into a product over the surviving components. Every component
//! is canonized and looked up in a [`PolyCache`] before any work is done, so
//! a warm cache answers most subtrees directly.
//!
//! [`brute_force_polynomial`] is the independent oracle: it enumerates all
//! vertex subsets and shares no code with the recurrence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use thiserror::Error;

use crate::canon::{canonical_root, CanonicalCode};
use crate::poly::{PolyError, Polynomial};
use crate::tree::{Forest, Tree};

/// Largest tree the subset-enumeration oracle accepts.
pub const BRUTE_FORCE_MAX_N: usize = 24;

/// Memo table from canonical code to polynomial.
///
/// Implementations may be shared between threads; a racing insert of the
/// same code must leave one of the (identical) values in place.
pub trait PolyCache {
    fn get(&self, code: &CanonicalCode) -> Option<Polynomial>;
    fn insert(&self, code: CanonicalCode, poly: Polynomial);
}

/// Single-threaded in-memory cache.
#[derive(Debug, Default)]
pub struct MemoCache {
    map: RefCell<BTreeMap<CanonicalCode, Polynomial>>,
}

impl MemoCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.borrow().is_empty()
    }

    pub fn entries(&self) -> Vec<(CanonicalCode, Polynomial)> {
        self.map
            .borrow()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

impl PolyCache for MemoCache {
    fn get(&self, code: &CanonicalCode) -> Option<Polynomial> {
        self.map.borrow().get(code).cloned()
    }

    fn insert(&self, code: CanonicalCode, poly: Polynomial) {
        self.map.borrow_mut().entry(code).or_insert(poly);
    }
}

/// A cache that remembers nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCache;

impl PolyCache for NoCache {
    fn get(&self, _: &CanonicalCode) -> Option<Polynomial> {
        None
    }

    fn insert(&self, _: CanonicalCode, _: Polynomial) {}
}

impl<C: PolyCache + ?Sized> PolyCache for &C {
    fn get(&self, code: &CanonicalCode) -> Option<Polynomial> {
        (**self).get(code)
    }

    fn insert(&self, code: CanonicalCode, poly: Polynomial) {
        (**self).insert(code, poly)
    }
}

/// `I(t; x)` via the memoized deletion recurrence.
pub fn independence_polynomial<C: PolyCache + ?Sized>(
    t: &Tree,
    cache: &C,
) -> Result<Polynomial, PolyError> {
    match t.len() {
        0 => return Ok(Polynomial::one()),
        1 => return Polynomial::new(vec![1, 1]),
        _ => {}
    }
    let (code, pivot) = match canonical_root(t) {
        Ok(found) => found,
        Err(_) => unreachable!("tree has at least two vertices"),
    };
    if let Some(hit) = cache.get(&code) {
        return Ok(hit);
    }
    let poly = recurrence_at(t, pivot, cache)?;
    cache.insert(code, poly.clone());
    Ok(poly)
}

/// One application of the recurrence at an arbitrary vertex `v`, with the
/// component polynomials taken from [`independence_polynomial`].
///
/// # Panics
/// If `v` is not a vertex of `t`.
pub fn recurrence_at<C: PolyCache + ?Sized>(
    t: &Tree,
    v: usize,
    cache: &C,
) -> Result<Polynomial, PolyError> {
    let without_v = t.delete_vertices(&[v]).expect("pivot is a vertex");
    let closed = t.closed_neighborhood(v).expect("pivot is a vertex");
    let without_nbhd = t.delete_vertices(&closed).expect("neighbours are vertices");
    let kept = forest_polynomial(&without_v, cache)?;
    let taken = forest_polynomial(&without_nbhd, cache)?;
    kept.combine(&taken)
}

/// Product of the component polynomials; the empty forest gives 1.
pub fn forest_polynomial<C: PolyCache + ?Sized>(
    forest: &Forest,
    cache: &C,
) -> Result<Polynomial, PolyError> {
    forest
        .components
        .iter()
        .try_fold(Polynomial::one(), |acc, component| {
            acc.mul(&independence_polynomial(component, cache)?)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("subset enumeration is limited to {max} vertices, tree has {n}")]
    TooLarge { n: usize, max: usize },
}

/// `I(t; x)` by checking every one of the `2^n` vertex subsets.
pub fn brute_force_polynomial(t: &Tree) -> Result<Polynomial, OracleError> {
    let n = t.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(OracleError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let neighbor_mask: Vec<u32> = (0..n)
        .map(|v| t.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut counts = vec![0u64; n + 1];
    // independent[s] for s with its lowest bit cleared is already known.
    let mut independent = vec![false; 1usize << n];
    independent[0] = true;
    counts[0] = 1;
    for set in 1u32..(1u32 << n) {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        if independent[rest as usize] && neighbor_mask[low] & set == 0 {
            independent[set as usize] = true;
            counts[set.count_ones() as usize] += 1;
        }
    }
    while counts.len() > 1 && counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(Polynomial::new(counts).expect("empty set is always independent"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_two() -> Tree {
        Tree::from_edges(7, &[(0, 1), (0, 2), (1, 3), (3, 5), (2, 4), (4, 6)]).unwrap()
    }

    #[test]
    fn base_cases() {
        let cache = MemoCache::new();
        assert_eq!(
            independence_polynomial(&Tree::empty(), &cache)
                .unwrap()
                .coeffs(),
            &[1]
        );
        assert_eq!(
            independence_polynomial(&Tree::single(), &cache)
                .unwrap()
                .coeffs(),
            &[1, 1]
        );
        assert!(cache.is_empty());
    }

    #[test]
    fn figure_two_polynomial() {
        let cache = MemoCache::new();
        let p = independence_polynomial(&figure_two(), &cache).unwrap();
        assert_eq!(p.coeffs(), &[1, 7, 15, 10, 1]);
        assert_eq!(p, brute_force_polynomial(&figure_two()).unwrap());
        // P3 and P2 were cached on the way.
        let p3 = CanonicalCode::parse("110100").unwrap();
        assert_eq!(cache.get(&p3).unwrap().coeffs(), &[1, 3, 1]);
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(
            brute_force_polynomial(&Tree::path(2)).unwrap().coeffs(),
            &[1, 2]
        );
        assert_eq!(
            brute_force_polynomial(&Tree::path(5)).unwrap().coeffs(),
            &[1, 5, 6, 1]
        );
        assert_eq!(
            brute_force_polynomial(&Tree::star(3)).unwrap().coeffs(),
            &[1, 4, 3, 1]
        );
        assert_eq!(
            brute_force_polynomial(&Tree::empty()).unwrap().coeffs(),
            &[1]
        );
        assert_eq!(
            brute_force_polynomial(&Tree::path(25)),
            Err(OracleError::TooLarge {
                n: 25,
                max: BRUTE_FORCE_MAX_N
            })
        );
    }

    #[test]
    fn cache_hit_short_circuits() {
        let cache = MemoCache::new();
        let code = crate::canon::free_code(&Tree::path(3));
        let fake = Polynomial::new(vec![1, 99]).unwrap();
        cache.insert(code, fake.clone());
        assert_eq!(
            independence_polynomial(&Tree::path(3), &cache).unwrap(),
            fake
        );
        assert_eq!(
            independence_polynomial(&Tree::path(3), &NoCache)
                .unwrap()
                .coeffs(),
            &[1, 3, 1]
        );
    }

    #[test]
    fn any_pivot_gives_the_same_answer() {
        let t = figure_two();
        for v in 0..t.len() {
            assert_eq!(
                recurrence_at(&t, v, &NoCache).unwrap().coeffs(),
                &[1, 7, 15, 10, 1]
            );
        }
    }
}
