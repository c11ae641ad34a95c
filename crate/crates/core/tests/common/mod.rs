#![allow(dead_code)]

use treepoly_core::enumerate::distinct_children;
use treepoly_core::{free_code, CanonicalCode, LevelPlan, Tree};

/// Free codes of every tree with `n` vertices, for `n` in `1..=max_n`,
/// ascending within each level.
pub fn levels(max_n: usize) -> Vec<Vec<CanonicalCode>> {
    let mut out = vec![Vec::new(), vec![free_code(&Tree::single())]];
    for n in 2..=max_n {
        let plan = LevelPlan::with_reference_count(n, out[n - 1].clone()).unwrap();
        out.push(distinct_children(&plan).unwrap());
    }
    out.truncate(max_n + 1);
    out
}
