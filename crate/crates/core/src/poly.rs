//! Exact integer polynomials and the shape predicates checked on their
//! coefficient sequences.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient overflow")]
    Overflow,
    #[error("polynomial must have a constant term of 1 and a non-zero leading coefficient")]
    Malformed,
}

/// Polynomial with non-negative integer coefficients, lowest degree first.
///
/// `coeffs[k]` is the number of independent sets of size `k`, so the
/// constant term is always 1 and the sequence never ends in zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    coeffs: Vec<u64>,
}

impl Polynomial {
    /// The constant polynomial 1.
    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    pub fn new(coeffs: Vec<u64>) -> Result<Self, PolyError> {
        if coeffs.first() != Some(&1) || coeffs.last() == Some(&0) {
            return Err(PolyError::Malformed);
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at `x = 1`: the total number of independent sets.
    pub fn total(&self) -> Result<u64, PolyError> {
        self.coeffs.iter().try_fold(0u64, |acc, &c| {
            acc.checked_add(c).ok_or(PolyError::Overflow)
        })
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(PolyError::Overflow)?;
                out[i + j] = out[i + j].checked_add(term).ok_or(PolyError::Overflow)?;
            }
        }
        Ok(Polynomial { coeffs: out })
    }

    /// `self + x * shifted`, the deletion recurrence's final step.
    pub fn combine(&self, shifted: &Polynomial) -> Result<Polynomial, PolyError> {
        let len = self.coeffs.len().max(shifted.coeffs.len() + 1);
        let mut out = vec![0u64; len];
        out[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        for (k, &c) in shifted.coeffs.iter().enumerate() {
            out[k + 1] = out[k + 1].checked_add(c).ok_or(PolyError::Overflow)?;
        }
        Ok(Polynomial { coeffs: out })
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial{:?}", self.coeffs)
    }
}

/// Comma-separated decimal coefficients, lowest degree first.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Rises weakly to a peak, then falls weakly.
pub fn is_unimodal(s: &[u64]) -> bool {
    let mut i = 1;
    while i < s.len() && s[i - 1] <= s[i] {
        i += 1;
    }
    while i < s.len() && s[i - 1] >= s[i] {
        i += 1;
    }
    i >= s.len()
}

/// `s[k]^2 >= s[k-1] * s[k+1]` at every interior index. Products are taken
/// in 128 bits, which cannot overflow for 64-bit coefficients.
pub fn is_log_concave(s: &[u64]) -> bool {
    s.windows(3).all(|w| {
        let mid = u128::from(w[1]);
        mid * mid >= u128::from(w[0]) * u128::from(w[2])
    })
}

pub fn is_symmetric(s: &[u64]) -> bool {
    s.iter().eq(s.iter().rev())
}

/// Every coefficient is a Fibonacci number (1, 2, 3, 5, 8, ...).
pub fn is_fibonacci(s: &[u64]) -> bool {
    s.iter().all(|&c| is_fibonacci_number(c))
}

pub fn is_fibonacci_number(c: u64) -> bool {
    let (mut a, mut b) = (1u64, 2u64);
    while a < c {
        match a.checked_add(b) {
            Some(next) => {
                a = b;
                b = next;
            }
            None => return b == c,
        }
    }
    a == c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonic {
    Ascending,
    Descending,
    Neither,
}

impl Monotonic {
    pub fn as_str(self) -> &'static str {
        match self {
            Monotonic::Ascending => "ascending",
            Monotonic::Descending => "descending",
            Monotonic::Neither => "neither",
        }
    }
}

/// Constant sequences count as ascending.
pub fn monotonic(s: &[u64]) -> Monotonic {
    if s.windows(2).all(|w| w[0] <= w[1]) {
        Monotonic::Ascending
    } else if s.windows(2).all(|w| w[0] >= w[1]) {
        Monotonic::Descending
    } else {
        Monotonic::Neither
    }
}

/// Lowest index holding the largest coefficient.
pub fn argmax_lowest(s: &[u64]) -> usize {
    let mut best = 0;
    for (k, &c) in s.iter().enumerate() {
        if c > s[best] {
            best = k;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[u64]) -> Polynomial {
        Polynomial::new(c.to_vec()).unwrap()
    }

    #[test]
    fn multiplies() {
        assert_eq!(
            p(&[1, 3, 1]).mul(&p(&[1, 3, 1])).unwrap(),
            p(&[1, 6, 11, 6, 1])
        );
        assert_eq!(p(&[1, 2]).mul(&p(&[1, 2])).unwrap(), p(&[1, 4, 4]));
        assert_eq!(
            p(&[1, 7, 15]).mul(&Polynomial::one()).unwrap(),
            p(&[1, 7, 15])
        );
    }

    #[test]
    fn multiplication_overflow_is_reported() {
        let big = p(&[1, u64::MAX]);
        assert_eq!(big.mul(&big), Err(PolyError::Overflow));
        assert_eq!(big.combine(&p(&[1, 1])), Err(PolyError::Overflow));
    }

    #[test]
    fn combines() {
        let left = p(&[1, 6, 11, 6, 1]);
        let right = p(&[1, 4, 4]);
        assert_eq!(left.combine(&right).unwrap(), p(&[1, 7, 15, 10, 1]));
        assert_eq!(
            Polynomial::one().combine(&Polynomial::one()).unwrap(),
            p(&[1, 1])
        );
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!(Polynomial::new(vec![]), Err(PolyError::Malformed));
        assert_eq!(Polynomial::new(vec![2, 1]), Err(PolyError::Malformed));
        assert_eq!(Polynomial::new(vec![1, 0]), Err(PolyError::Malformed));
    }

    #[test]
    fn unimodality() {
        assert!(!is_unimodal(&[1, 33, 24, 32, 16]));
        assert!(is_unimodal(&[1, 9, 28, 40, 28, 9, 1]));
        assert!(is_unimodal(&[1]));
        assert!(is_unimodal(&[1, 2, 2, 1, 1]));
        assert!(!is_unimodal(&[3, 1, 3]));
    }

    #[test]
    fn log_concavity() {
        assert!(!is_log_concave(&[1, 33, 24, 32, 16]));
        assert!(is_log_concave(&[1, 4, 3, 1]));
        assert!(is_log_concave(&[1, 1]));
        assert!(is_log_concave(&[1, u64::MAX, u64::MAX]));
    }

    #[test]
    fn symmetry() {
        assert!(is_symmetric(&[1, 6, 10, 6, 1]));
        assert!(!is_symmetric(&[1, 2]));
        assert!(is_symmetric(&[1]));
    }

    #[test]
    fn fibonacci() {
        assert!(is_fibonacci(&[1, 8, 21, 21, 8, 1]));
        assert!(is_fibonacci(&[1, 2]));
        assert!(!is_fibonacci(&[1, 4, 3, 1]));
        assert!(!is_fibonacci_number(0));
        assert!(is_fibonacci_number(12_200_160_415_121_876_738));
        assert!(!is_fibonacci_number(u64::MAX));
    }

    #[test]
    fn monotonic_classes() {
        assert_eq!(monotonic(&[1]), Monotonic::Ascending);
        assert_eq!(monotonic(&[1, 1]), Monotonic::Ascending);
        assert_eq!(monotonic(&[1, 3, 1]), Monotonic::Neither);
        assert_eq!(monotonic(&[3, 2, 1]), Monotonic::Descending);
    }

    #[test]
    fn argmax_takes_lowest_tie() {
        assert_eq!(argmax_lowest(&[1, 1]), 0);
        assert_eq!(argmax_lowest(&[1, 9, 28, 37, 21, 4]), 3);
        assert_eq!(argmax_lowest(&[1, 7, 15, 10, 1]), 2);
        assert_eq!(argmax_lowest(&[1, 4, 4]), 1);
    }
}
