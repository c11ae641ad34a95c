//! Leaf-addition growth of trees and the reference tree counts.
//!
//! Every tree on `n + 1` vertices is some `n`-vertex tree with one extra
//! leaf, so expanding each tree of a level at every vertex and keeping the
//! first copy of each canonical code yields the whole next level.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::canon::{canonical_root, decode, CanonicalCode, CodeError};
use crate::tree::{Tree, TreeError};

/// Number of unlabeled free trees on `n` vertices, `n = 0..=20`.
pub const TREE_COUNTS: [u64; 21] = [
    1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320, 48629, 123867, 317955,
    823065,
];

pub fn expected_tree_count(n: usize) -> Option<u64> {
    TREE_COUNTS.get(n).copied()
}

/// Sum of [`TREE_COUNTS`] over `lo..=hi` (clamped to the table).
pub fn cumulative_tree_count(lo: usize, hi: usize) -> u64 {
    TREE_COUNTS
        .iter()
        .enumerate()
        .filter(|(n, _)| (lo..=hi).contains(n))
        .map(|(_, c)| c)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("expected count must be positive")]
    ZeroExpected,
    #[error("parent code {0} appears twice")]
    DuplicateParent(CanonicalCode),
    #[error("parent code {code} does not have {expected} vertices")]
    WrongParentSize {
        code: CanonicalCode,
        expected: usize,
    },
}

/// Inputs for building one level: the target size, the reference count if
/// known, and the distinct codes of the previous level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPlan {
    n: usize,
    expected_count: Option<u64>,
    parent_codes: Vec<CanonicalCode>,
}

impl LevelPlan {
    pub fn new(
        n: usize,
        expected_count: Option<u64>,
        parent_codes: Vec<CanonicalCode>,
    ) -> Result<Self, PlanError> {
        if expected_count == Some(0) {
            return Err(PlanError::ZeroExpected);
        }
        let mut seen = BTreeSet::new();
        for code in &parent_codes {
            if code.vertex_count() + 1 != n {
                return Err(PlanError::WrongParentSize {
                    code: code.clone(),
                    expected: n - 1,
                });
            }
            if !seen.insert(code) {
                return Err(PlanError::DuplicateParent(code.clone()));
            }
        }
        Ok(LevelPlan {
            n,
            expected_count,
            parent_codes,
        })
    }

    /// Plan with the built-in reference count for `n`.
    pub fn with_reference_count(
        n: usize,
        parent_codes: Vec<CanonicalCode>,
    ) -> Result<Self, PlanError> {
        Self::new(n, expected_tree_count(n), parent_codes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn expected_count(&self) -> Option<u64> {
        self.expected_count
    }

    pub fn parent_codes(&self) -> &[CanonicalCode] {
        &self.parent_codes
    }
}

/// `t` with a new leaf on each vertex in turn; the i-th result grows at i.
pub fn expand(t: &Tree) -> Result<Vec<Tree>, TreeError> {
    if t.is_empty() {
        return Err(TreeError::EmptyTree);
    }
    (0..t.len()).map(|v| t.with_leaf(v)).collect()
}

/// A child produced by expansion, already canonized.
#[derive(Debug, Clone)]
pub struct Child {
    pub code: CanonicalCode,
    pub root: usize,
    pub tree: Tree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Decodes a parent and canonizes each of its one-leaf extensions.
pub fn expand_code(parent: &CanonicalCode) -> Result<Vec<Child>, ExpandError> {
    let tree = decode(parent)?;
    expand(&tree)?
        .into_iter()
        .map(|child| {
            let (code, root) = canonical_root(&child)?;
            Ok(Child {
                code,
                root,
                tree: child,
            })
        })
        .collect()
}

/// Single-threaded level builder: the distinct child codes of a plan,
/// ascending.
pub fn distinct_children(plan: &LevelPlan) -> Result<Vec<CanonicalCode>, ExpandError> {
    let mut out = BTreeSet::new();
    for parent in plan.parent_codes() {
        for child in expand_code(parent)? {
            out.insert(child.code);
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::free_code;

    #[test]
    fn expands_small_trees() {
        assert_eq!(expand(&Tree::single()).unwrap().len(), 1);
        assert_eq!(
            free_code(&expand(&Tree::single()).unwrap()[0]),
            free_code(&Tree::path(2))
        );

        let from_p3 = expand(&Tree::path(3)).unwrap();
        let codes: Vec<_> = from_p3.iter().map(free_code).collect();
        assert_eq!(codes[0], free_code(&Tree::path(4)));
        assert_eq!(codes[1], free_code(&Tree::star(3)));
        assert_eq!(codes[2], free_code(&Tree::path(4)));

        let from_p2 = expand(&Tree::path(2)).unwrap();
        assert!(from_p2
            .iter()
            .all(|t| free_code(t) == free_code(&Tree::path(3))));
        assert_eq!(expand(&Tree::empty()), Err(TreeError::EmptyTree));
    }

    #[test]
    fn level_four_from_p3() {
        let p3 = free_code(&Tree::path(3));
        let plan = LevelPlan::with_reference_count(4, alloc::vec![p3]).unwrap();
        assert_eq!(
            distinct_children(&plan).unwrap().len() as u64,
            plan.expected_count().unwrap()
        );
    }

    #[test]
    fn plan_validation() {
        let p3 = free_code(&Tree::path(3));
        assert_eq!(
            LevelPlan::new(4, None, alloc::vec![p3.clone(), p3.clone()]),
            Err(PlanError::DuplicateParent(p3.clone()))
        );
        assert_eq!(
            LevelPlan::new(4, Some(0), alloc::vec![]),
            Err(PlanError::ZeroExpected)
        );
        assert!(matches!(
            LevelPlan::new(5, None, alloc::vec![p3]),
            Err(PlanError::WrongParentSize { .. })
        ));
    }

    #[test]
    fn cumulative_counts() {
        assert_eq!(cumulative_tree_count(1, 20), 1_346_024);
        assert_eq!(cumulative_tree_count(0, 20), 1_346_025);
        assert_eq!(cumulative_tree_count(1, 14), 5_447);
        assert_eq!(cumulative_tree_count(1, 13), 2_288);
    }
}
