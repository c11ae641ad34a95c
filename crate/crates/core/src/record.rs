//! The per-tree summary persisted for every enumerated tree.

use alloc::vec::Vec;

use thiserror::Error;

use crate::canon::{free_code, CanonicalCode};
use crate::indpoly::{independence_polynomial, PolyCache};
use crate::poly::{self, PolyError, Polynomial};
use crate::tree::Tree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("{uid}: code length {len} does not match n = {n}")]
    CodeLength {
        uid: CanonicalCode,
        len: usize,
        n: usize,
    },
    #[error("{uid}: degree sequence is not a tree's ({reason})")]
    Degrees {
        uid: CanonicalCode,
        reason: &'static str,
    },
    #[error("{uid}: coefficient s1 = {s1} but the tree has {n} vertices")]
    LinearCoefficient {
        uid: CanonicalCode,
        s1: u64,
        n: usize,
    },
    #[error("{uid}: malformed coefficients")]
    Coefficients { uid: CanonicalCode },
    #[error("{uid}: stored {field} flag disagrees with its coefficients")]
    Flag {
        uid: CanonicalCode,
        field: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRecord {
    pub uid: CanonicalCode,
    pub n: usize,
    pub degrees: Vec<usize>,
    pub poly: Polynomial,
    pub unimodal: bool,
    pub log_concave: bool,
    pub symmetric: bool,
    pub fibonacci: bool,
    pub argmax: usize,
}

impl TreeRecord {
    /// Derives every field from the tree and its polynomial.
    pub fn from_parts(uid: CanonicalCode, tree: &Tree, poly: Polynomial) -> Self {
        let s = poly.coeffs();
        TreeRecord {
            n: tree.len(),
            degrees: tree.degree_sequence(),
            unimodal: poly::is_unimodal(s),
            log_concave: poly::is_log_concave(s),
            symmetric: poly::is_symmetric(s),
            fibonacci: poly::is_fibonacci(s),
            argmax: poly::argmax_lowest(s),
            uid,
            poly,
        }
    }

    /// Canonizes `tree` and computes its polynomial through `cache`.
    pub fn compute<C: PolyCache + ?Sized>(tree: &Tree, cache: &C) -> Result<Self, PolyError> {
        let poly = independence_polynomial(tree, cache)?;
        Ok(Self::from_parts(free_code(tree), tree, poly))
    }

    /// The record for the empty tree.
    pub fn empty_tree() -> Self {
        Self::from_parts(CanonicalCode::empty(), &Tree::empty(), Polynomial::one())
    }

    /// Checks the structural invariants and that every flag matches its
    /// predicate recomputed from the coefficients.
    pub fn validate(&self) -> Result<(), RecordError> {
        let uid = || self.uid.clone();
        if self.uid.as_str().len() != 2 * self.n {
            return Err(RecordError::CodeLength {
                uid: uid(),
                len: self.uid.as_str().len(),
                n: self.n,
            });
        }
        if self.degrees.len() != self.n {
            return Err(RecordError::Degrees {
                uid: uid(),
                reason: "wrong length",
            });
        }
        if self.degrees.windows(2).any(|w| w[0] < w[1]) {
            return Err(RecordError::Degrees {
                uid: uid(),
                reason: "not descending",
            });
        }
        if self.n > 0 && self.degrees.iter().sum::<usize>() != 2 * (self.n - 1) {
            return Err(RecordError::Degrees {
                uid: uid(),
                reason: "degree sum is not 2(n-1)",
            });
        }
        let s = self.poly.coeffs();
        if s.first() != Some(&1) || s.last() == Some(&0) {
            return Err(RecordError::Coefficients { uid: uid() });
        }
        if self.n == 0 && s.len() != 1 {
            return Err(RecordError::Coefficients { uid: uid() });
        }
        if self.n > 0 {
            let s1 = s.get(1).copied().unwrap_or(0);
            if s1 != self.n as u64 {
                return Err(RecordError::LinearCoefficient {
                    uid: uid(),
                    s1,
                    n: self.n,
                });
            }
        }
        let checks = [
            ("unimodal", self.unimodal, poly::is_unimodal(s)),
            ("log_concave", self.log_concave, poly::is_log_concave(s)),
            ("symmetric", self.symmetric, poly::is_symmetric(s)),
            ("fibonacci", self.fibonacci, poly::is_fibonacci(s)),
        ];
        for (field, stored, actual) in checks {
            if stored != actual {
                return Err(RecordError::Flag { uid: uid(), field });
            }
        }
        if self.argmax != poly::argmax_lowest(s) {
            return Err(RecordError::Flag {
                uid: uid(),
                field: "argmax",
            });
        }
        Ok(())
    }
}
