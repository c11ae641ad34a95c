#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeSet;

use treepoly_core::enumerate::{cumulative_tree_count, distinct_children, PlanError};
use treepoly_core::{
    decode, expand, expand_code, free_code, CanonicalCode, LevelPlan, Tree, TREE_COUNTS,
};

#[test]
fn leaf_addition_reaches_the_reference_counts() {
    let levels = common::levels(13);
    for (n, level) in levels.iter().enumerate().skip(1) {
        assert_eq!(level.len() as u64, TREE_COUNTS[n], "n={n}");
        assert!(level.windows(2).all(|w| w[0] < w[1]));
        assert!(level.iter().all(|c| c.vertex_count() == n));
    }
    let total: usize = levels.iter().map(Vec::len).sum();
    assert_eq!(total as u64, cumulative_tree_count(1, 13));
    assert_eq!(total, 2288);
}

/// All trees on `n` labeled vertices, as free codes, via Prüfer sequences.
fn labeled_classes(n: usize) -> BTreeSet<CanonicalCode> {
    let len = n - 2;
    let mut out = BTreeSet::new();
    let mut seq = vec![0usize; len];
    for mut idx in 0..n.pow(len as u32) {
        for slot in seq.iter_mut() {
            *slot = idx % n;
            idx /= n;
        }
        let mut degree = vec![1usize; n];
        for &v in &seq {
            degree[v] += 1;
        }
        let mut edges = Vec::new();
        for &v in &seq {
            let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
            edges.push((leaf, v));
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.insert(free_code(&Tree::from_edges(n, &edges).unwrap()));
    }
    out
}

#[test]
fn leaf_addition_misses_no_labeled_tree() {
    let levels = common::levels(9);
    for n in 3..=9 {
        let from_labels: Vec<CanonicalCode> = labeled_classes(n).into_iter().collect();
        assert_eq!(from_labels, levels[n], "n={n}");
    }
}

#[test]
fn expansion_examples() {
    let kids = expand(&Tree::single()).unwrap();
    assert_eq!(kids.len(), 1);
    assert_eq!(free_code(&kids[0]).as_str(), "1100");

    let p2: Vec<_> = expand(&Tree::path(2))
        .unwrap()
        .iter()
        .map(free_code)
        .collect();
    assert_eq!(p2.len(), 2);
    assert!(p2.iter().all(|c| c.as_str() == "110100"));

    let p3 = CanonicalCode::parse("110100").unwrap();
    let codes: Vec<String> = expand_code(&p3)
        .unwrap()
        .into_iter()
        .map(|c| c.code.into_string())
        .collect();
    assert_eq!(codes.len(), 3);
    let distinct: BTreeSet<&str> = codes.iter().map(String::as_str).collect();
    assert_eq!(distinct, BTreeSet::from(["11100100", "11010100"]));
}

#[test]
fn children_carry_their_canonical_root() {
    for parent in &common::levels(8)[8] {
        for child in expand_code(parent).unwrap() {
            assert_eq!(child.tree.len(), 9);
            assert_eq!(free_code(&child.tree), child.code);
            assert!(child.tree.centers().unwrap().contains(&child.root));
            let back = decode(&child.code).unwrap();
            assert_eq!(back.degree_sequence(), child.tree.degree_sequence());
        }
    }
}

#[test]
fn plans_reject_bad_parents() {
    let p3 = CanonicalCode::parse("110100").unwrap();
    assert!(matches!(
        LevelPlan::new(4, Some(2), vec![p3.clone(), p3.clone()]),
        Err(PlanError::DuplicateParent(_))
    ));
    assert!(matches!(
        LevelPlan::new(5, None, vec![p3.clone()]),
        Err(PlanError::WrongParentSize { .. })
    ));
    assert!(matches!(
        LevelPlan::new(4, Some(0), vec![p3.clone()]),
        Err(PlanError::ZeroExpected)
    ));
    let plan = LevelPlan::with_reference_count(4, vec![p3]).unwrap();
    assert_eq!(plan.expected_count(), Some(2));
    assert_eq!(distinct_children(&plan).unwrap().len(), 2);
}
