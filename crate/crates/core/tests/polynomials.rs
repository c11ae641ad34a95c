mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use treepoly_core::indpoly::{forest_polynomial, recurrence_at};
use treepoly_core::poly::{is_fibonacci, is_log_concave, is_symmetric, is_unimodal};
use treepoly_core::{
    argmax_lowest, brute_force_polynomial, decode, independence_polynomial, monotonic, MemoCache,
    Monotonic, NoCache, PolyCache, Polynomial, Tree, TreeRecord,
};

fn poly(c: &[u64]) -> Polynomial {
    Polynomial::new(c.to_vec()).unwrap()
}

fn random_tree(rng: &mut StdRng, n: usize) -> Tree {
    let mut t = Tree::single();
    for _ in 1..n {
        let v = rng.gen_range(0..t.len());
        t = t.with_leaf(v).unwrap();
    }
    t
}

#[test]
fn recurrence_matches_subset_enumeration_up_to_11() {
    let cache = MemoCache::new();
    for (n, level) in common::levels(11).iter().enumerate() {
        for code in level {
            let t = decode(code).unwrap();
            let fast = independence_polynomial(&t, &cache).unwrap();
            assert_eq!(fast, brute_force_polynomial(&t).unwrap(), "n={n} {code}");
            assert_eq!(fast.coeffs()[1], n as u64);
        }
    }
}

#[test]
fn any_pivot_gives_the_same_polynomial() {
    let mut rng = StdRng::seed_from_u64(99);
    let cache = MemoCache::new();
    for _ in 0..300 {
        let n = rng.gen_range(1..=18);
        let t = random_tree(&mut rng, n);
        let reference = brute_force_polynomial(&t).unwrap();
        let v = rng.gen_range(0..n);
        assert_eq!(recurrence_at(&t, v, &cache).unwrap(), reference);
        assert_eq!(recurrence_at(&t, v, &NoCache).unwrap(), reference);
    }
}

#[test]
fn warm_and_cold_caches_agree() {
    let mut rng = StdRng::seed_from_u64(5);
    let warm = MemoCache::new();
    let trees: Vec<Tree> = (0..200).map(|_| random_tree(&mut rng, 30)).collect();
    let first: Vec<Polynomial> = trees
        .iter()
        .map(|t| independence_polynomial(t, &warm).unwrap())
        .collect();
    let cached = warm.len();
    for (t, p) in trees.iter().zip(&first) {
        assert_eq!(&independence_polynomial(t, &warm).unwrap(), p);
        assert_eq!(&independence_polynomial(t, &MemoCache::new()).unwrap(), p);
    }
    assert_eq!(warm.len(), cached);
    for (code, p) in warm.entries() {
        let t = decode(&code).unwrap();
        if t.len() <= 20 {
            assert_eq!(p, brute_force_polynomial(&t).unwrap());
        }
        assert_eq!(warm.get(&code), Some(p));
    }
}

#[test]
fn paths_count_fibonacci_many_sets() {
    let (mut a, mut b) = (1u64, 2u64);
    for n in 1..60 {
        let p = independence_polynomial(&Tree::path(n), &NoCache).unwrap();
        assert_eq!(p.total().unwrap(), b, "n={n}");
        (a, b) = (b, a + b);
    }
}

#[test]
fn stars_have_binomial_coefficients() {
    for leaves in 1..40usize {
        let p = independence_polynomial(&Tree::star(leaves), &MemoCache::new()).unwrap();
        let mut expected = vec![1u64];
        let mut c = 1u64;
        for k in 1..=leaves as u64 {
            c = c * (leaves as u64 - k + 1) / k;
            expected.push(c);
        }
        expected[1] += 1;
        assert_eq!(p.coeffs(), &expected[..], "leaves={leaves}");
    }
}

#[test]
fn forest_product_examples() {
    let figure_two =
        Tree::from_edges(7, &[(0, 1), (0, 2), (1, 3), (3, 5), (2, 4), (4, 6)]).unwrap();
    let cache = MemoCache::new();
    let without_root = figure_two.delete_vertices(&[0]).unwrap();
    assert_eq!(
        forest_polynomial(&without_root, &cache).unwrap().coeffs(),
        &[1, 6, 11, 6, 1]
    );
    let nbhd = figure_two.closed_neighborhood(0).unwrap();
    let without_nbhd = figure_two.delete_vertices(&nbhd).unwrap();
    assert_eq!(
        forest_polynomial(&without_nbhd, &cache).unwrap().coeffs(),
        &[1, 4, 4]
    );
    assert_eq!(
        independence_polynomial(&figure_two, &cache)
            .unwrap()
            .coeffs(),
        &[1, 7, 15, 10, 1]
    );
}

#[test]
fn trees_sharing_a_polynomial() {
    let cache = MemoCache::new();
    let levels = common::levels(9);
    let degrees_with = |n: usize, coeffs: &[u64]| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = levels[n]
            .iter()
            .map(|c| decode(c).unwrap())
            .filter(|t| independence_polynomial(t, &cache).unwrap().coeffs() == coeffs)
            .map(|t| t.degree_sequence())
            .collect();
        out.sort();
        out
    };
    let nine = degrees_with(9, &[1, 9, 28, 37, 21, 4]);
    assert!(
        nine.iter()
            .filter(|d| **d == [3, 3, 2, 2, 2, 1, 1, 1, 1])
            .count()
            >= 2
    );
    let eight = degrees_with(8, &[1, 8, 21, 23, 11, 2]);
    assert!(eight.contains(&vec![4, 2, 2, 2, 1, 1, 1, 1]));
    assert!(eight.contains(&vec![3, 3, 3, 1, 1, 1, 1, 1]));
}

#[test]
fn predicate_controls() {
    let bad = [1, 33, 24, 32, 16];
    assert!(!is_unimodal(&bad));
    assert!(!is_log_concave(&bad));
    let good = [1, 9, 28, 40, 28, 9, 1];
    assert!(is_unimodal(&good) && is_log_concave(&good) && is_symmetric(&good));
    assert!(is_fibonacci(&[1, 8, 21, 21, 8, 1]));
    assert!(!is_fibonacci(&[1, 4, 3, 1]));
    assert_eq!(monotonic(&[1]), Monotonic::Ascending);
    assert_eq!(monotonic(&[1, 3, 1]), Monotonic::Neither);
    assert_eq!(argmax_lowest(&[1, 9, 28, 37, 21, 4]), 3);
}

#[test]
fn records_validate_for_random_trees() {
    let mut rng = StdRng::seed_from_u64(11);
    let cache = MemoCache::new();
    for _ in 0..200 {
        let n = rng.gen_range(1..=40);
        let rec = TreeRecord::compute(&random_tree(&mut rng, n), &cache).unwrap();
        rec.validate().unwrap();
        assert_eq!(rec.degrees.iter().sum::<usize>(), 2 * (n - 1));
    }
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(0u64..1000, 0..8).prop_map(|mut tail| {
        tail.retain(|&c| c != 0);
        let mut c = vec![1];
        c.extend(tail);
        poly(&c)
    })
}

proptest! {
    #[test]
    fn mul_is_commutative_and_associative(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&Polynomial::one()).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().degree(), a.degree() + b.degree());
    }

    #[test]
    fn combine_adds_a_shifted_copy(a in small_poly(), b in small_poly()) {
        let sum = a.combine(&b).unwrap();
        for k in 0..=sum.degree() {
            let lhs = a.coeffs().get(k).copied().unwrap_or(0);
            let rhs = if k == 0 { 0 } else { b.coeffs().get(k - 1).copied().unwrap_or(0) };
            prop_assert_eq!(sum.coeffs()[k], lhs + rhs);
        }
    }

    #[test]
    fn recurrence_matches_oracle(seed in any::<u64>(), n in 1usize..=20) {
        let mut rng = StdRng::seed_from_u64(seed);
        let t = random_tree(&mut rng, n);
        prop_assert_eq!(independence_polynomial(&t, &NoCache).unwrap(), brute_force_polynomial(&t).unwrap());
    }
}

#[test]
fn overflow_is_reported() {
    let big = poly(&[1, u64::MAX]);
    assert!(big.mul(&big).is_err());
    assert!(big.combine(&poly(&[1, 1])).is_err());
}
